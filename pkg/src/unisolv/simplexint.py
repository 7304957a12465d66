"""Simplex geometry and exact polynomial integration on simplices and facets."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import GaussianRational, det, inverse, parse_rational
from .multipoly import (
    MultiPoly,
    VectorField,
    compose_affine,
    curl3d,
    curl2d,
    divergence,
    dot,
    gradient,
    scalar_curl2d,
)


class GeometryError(ValueError):
    """Degenerate or malformed simplex."""


@dataclass(frozen=True)
class Simplex:
    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        verts = tuple(tuple(Fraction(c) for c in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.dim not in (2, 3):
            raise GeometryError(f"unsupported dimension {self.dim}")
        if len(verts) != self.dim + 1 or any(len(v) != self.dim for v in verts):
            raise GeometryError(
                f"a {self.dim}-simplex needs {self.dim + 1} points with {self.dim} coordinates"
            )
        if det(self.edge_matrix()) == 0:
            raise GeometryError("degenerate simplex: vertices are affinely dependent")

    @classmethod
    def reference(cls, dim: int) -> Simplex:
        verts = [[0] * dim]
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            verts.append(e)
        return cls(dim, tuple(tuple(v) for v in verts))

    @classmethod
    def random(cls, dim: int, rng: random.Random) -> Simplex:
        """Vertices with numerators in [-9, 9] and denominators in [1, 4]."""
        while True:
            verts = tuple(
                tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(dim))
                for _ in range(dim + 1)
            )
            try:
                return cls(dim, verts)
            except GeometryError:
                continue

    def edge_matrix(self) -> list[list[Fraction]]:
        """Columns are ``v_i - v_0``; row ``r`` is coordinate ``r``."""
        v0 = self.vertices[0]
        return [
            [self.vertices[i][r] - v0[r] for i in range(1, self.dim + 1)]
            for r in range(self.dim)
        ]

    def facet_vertices(self, j: int) -> list[int]:
        if not 0 <= j <= self.dim:
            raise GeometryError(f"facet index {j} out of range 0..{self.dim}")
        return [i for i in range(self.dim + 1) if i != j]

    def permuted(self, order: Sequence[int]) -> Simplex:
        return Simplex(self.dim, tuple(self.vertices[i] for i in order))

    def complex_vertices(self):
        if self.dim != 2:
            raise GeometryError("complex coordinates need a triangle")
        return tuple(GaussianRational(x, y) for x, y in self.vertices)

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [[str(c) for c in v] for v in self.vertices]}

    @classmethod
    def from_json(cls, obj) -> Simplex:
        try:
            dim = int(obj["dim"])
            verts = tuple(tuple(parse_rational(c) for c in v) for v in obj["vertices"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"malformed simplex description: {exc}") from exc
        return cls(dim, verts)

    @classmethod
    def load(cls, path) -> Simplex:
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GeometryError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(obj)


def volume(t: Simplex) -> Fraction:
    return abs(det(t.edge_matrix())) / math.factorial(t.dim)


def barycentric(t: Simplex) -> tuple[MultiPoly, ...]:
    """The affine forms lambda_0..lambda_d of ``t``."""
    d = t.dim
    # lambda_i(x) for i >= 1 are the coordinates of E^{-1}(x - v0)
    einv = inverse(t.edge_matrix()).to_rows()
    v0 = t.vertices[0]
    lams = []
    for i in range(d):
        row = einv[i]
        const = -sum((row[r] * v0[r] for r in range(d)), Fraction(0))
        terms = {(0,) * d: const}
        for r in range(d):
            e = [0] * d
            e[r] = 1
            terms[tuple(e)] = row[r]
        lams.append(MultiPoly(d, terms))
    lam0 = MultiPoly.constant(1, d)
    for lam in lams:
        lam0 = lam0 - lam
    return (lam0, *lams)


# ---------------------------------------------------------------------------
# reference-simplex integration


@lru_cache(maxsize=None)
def reference_monomial_integral(exps: tuple[int, ...]) -> Fraction:
    """Integral of prod u_i^a_i over the unit simplex {u >= 0, sum u <= 1}."""
    num = 1
    for a in exps:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(sum(exps) + len(exps)))


def integrate_reference(p: MultiPoly) -> Fraction:
    total = Fraction(0)
    for exps, c in p.terms.items():
        total += c * reference_monomial_integral(exps)
    return total


def pullback_to_reference(p: MultiPoly, t: Simplex) -> MultiPoly:
    """``p(v0 + E u)`` in the reference coordinates ``u``."""
    if p.dim != t.dim:
        raise ValueError(f"polynomial dim {p.dim} does not match simplex dim {t.dim}")
    return compose_affine(p, t.edge_matrix(), t.vertices[0])


def facet_map(t: Simplex, j: int):
    """Affine map from the reference (d-1)-simplex onto facet ``j``.

    Reference vertices go to the facet's vertices in increasing index order.
    """
    idx = t.facet_vertices(j)
    w0 = t.vertices[idx[0]]
    A = [[t.vertices[m][r] - w0[r] for m in idx[1:]] for r in range(t.dim)]
    return A, w0


def pullback_to_facet(p: MultiPoly, t: Simplex, j: int) -> MultiPoly:
    if p.dim != t.dim:
        raise ValueError(f"polynomial dim {p.dim} does not match simplex dim {t.dim}")
    A, b = facet_map(t, j)
    return compose_affine(p, A, b)


def integrate_simplex(p: MultiPoly, t: Simplex) -> Fraction:
    """Exact integral of ``p`` over ``t``."""
    jac = abs(det(t.edge_matrix()))
    return jac * integrate_reference(pullback_to_reference(p, t))


def integrate_facet_scaled(p: MultiPoly, t: Simplex, j: int) -> Fraction:
    """Facet integral divided by ``(d-1)! |F_j|``.

    Equals the integral of the pulled-back polynomial over the reference
    (d-1)-simplex; stays rational where the true surface measure does not.
    """
    return integrate_reference(pullback_to_facet(p, t, j))


def reference_barycentrics(n: int) -> tuple[MultiPoly, ...]:
    """Barycentric forms of the n-dimensional unit simplex: 1 - sum u, u_1, ..."""
    us = MultiPoly.variables(n)
    lam0 = MultiPoly.constant(1, n)
    for u in us:
        lam0 = lam0 - u
    return (lam0, *us)


# ---------------------------------------------------------------------------
# Green's identities


def outward_area_normal(t: Simplex, j: int) -> tuple[Fraction, ...]:
    """Outward normal of facet ``j`` scaled by the facet measure (rational)."""
    idx = t.facet_vertices(j)
    pts = [t.vertices[i] for i in idx]
    opp = t.vertices[j]
    if t.dim == 2:
        (ax, ay), (bx, by) = pts
        n = (by - ay, -(bx - ax))
    else:
        a, b, c = pts
        u = [b[r] - a[r] for r in range(3)]
        w = [c[r] - a[r] for r in range(3)]
        n = (
            (u[1] * w[2] - u[2] * w[1]) / 2,
            (u[2] * w[0] - u[0] * w[2]) / 2,
            (u[0] * w[1] - u[1] * w[0]) / 2,
        )
    if sum(n[r] * (pts[0][r] - opp[r]) for r in range(t.dim)) < 0:
        n = tuple(-c for c in n)
    return n


def _boundary_integral(f: MultiPoly, t: Simplex, j: int) -> Fraction:
    # true integral over F_j of f, where f already carries the measure-scaled
    # normal: (d-1)! * scaled moment
    return math.factorial(t.dim - 1) * integrate_facet_scaled(f, t, j)


def green_residual(v: VectorField, q, t: Simplex, mode: str = "div") -> Fraction:
    """Exact residual of Green's formula on ``t``; zero when the integrator is sound.

    ``div``:  int div(v) q + int v . grad q - sum_j int_{F_j} (v . n) q
    ``curl``: int curl(v) q - int v . curl(q) - sum_j int_{F_j} (n x v) q

    In 3D ``curl`` mode ``q`` must be a vector field; in 2D it is a scalar and
    ``curl(q)`` is the rotated gradient.  Facet terms use the measure-scaled
    normal, so everything stays rational.
    """
    if v.dim != t.dim:
        raise ValueError("field and simplex dimensions differ")
    d = t.dim
    if mode == "div":
        if not isinstance(q, MultiPoly) or q.dim != d:
            raise ValueError("div mode takes a scalar test polynomial of matching dim")
        interior = integrate_simplex(divergence(v) * q + dot(v, gradient(q)), t)
        boundary = Fraction(0)
        for j in range(d + 1):
            n = outward_area_normal(t, j)
            vn = sum((v[r] * n[r] for r in range(d)), MultiPoly.zero(d))
            boundary += _boundary_integral(vn * q, t, j)
        return interior - boundary
    if mode == "curl":
        if d == 2:
            if not isinstance(q, MultiPoly) or q.dim != 2:
                raise ValueError("2D curl mode takes a scalar test polynomial")
            interior = integrate_simplex(curl2d(v) * q - dot(v, scalar_curl2d(q)), t)
            boundary = Fraction(0)
            for j in range(3):
                n = outward_area_normal(t, j)
                nxv = v[1] * n[0] - v[0] * n[1]
                boundary += _boundary_integral(nxv * q, t, j)
            return interior - boundary
        if not isinstance(q, VectorField) or q.dim != 3:
            raise ValueError("3D curl mode takes a vector test field")
        interior = integrate_simplex(dot(curl3d(v), q) - dot(v, curl3d(q)), t)
        boundary = Fraction(0)
        for j in range(4):
            n = outward_area_normal(t, j)
            nxv = VectorField([
                v[2] * n[1] - v[1] * n[2],
                v[0] * n[2] - v[2] * n[0],
                v[1] * n[0] - v[0] * n[1],
            ])
            boundary += _boundary_integral(dot(nxv, q), t, j)
        return interior - boundary
    raise ValueError(f"unknown mode {mode!r}")
