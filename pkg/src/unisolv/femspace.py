"""Harmonic polynomial spaces and the enriched vector space of degree k.

The space is ``[P_k]^d`` plus the gradients of homogeneous harmonic
polynomials of degrees k+2 .. 2k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exactnum import ExactMatrix, nullspace, rank, rref
from .multipoly import (
    MultiPoly,
    VectorField,
    differentiate,
    gradient,
    monomials_of_degree,
    monomials_up_to,
)


class SpaceConstructionError(RuntimeError):
    """Internal consistency failure while building a space (should never fire)."""


def harmonic_dimension(m: int, d: int) -> int:
    if m < 0:
        return 0
    if d == 2:
        return 1 if m == 0 else 2
    if d == 3:
        return 2 * m + 1
    raise ValueError(f"unsupported dimension {d}")


def laplacian_matrix(m: int, d: int) -> ExactMatrix:
    """Matrix of the Laplacian from degree-m to degree-(m-2) homogeneous monomials."""
    src = monomials_of_degree(m, d)
    dst = monomials_of_degree(m - 2, d)
    index = {e: r for r, e in enumerate(dst)}
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for c, e in enumerate(src):
        for i in range(d):
            if e[i] >= 2:
                ne = list(e)
                ne[i] -= 2
                rows[index[tuple(ne)]][c] += e[i] * (e[i] - 1)
    if not rows:
        return ExactMatrix(0, len(src), ())
    return ExactMatrix.from_rows(rows)


@lru_cache(maxsize=None)
def harmonic_basis(m: int, d: int) -> tuple[MultiPoly, ...]:
    """Echelon basis of the homogeneous harmonic polynomials of degree m."""
    if m < 0:
        return ()
    src = monomials_of_degree(m, d)
    basis = []
    for vec in nullspace(laplacian_matrix(m, d)):
        basis.append(MultiPoly(d, {e: c for e, c in zip(src, vec)}))
    return tuple(basis)


def dimension(k: int, d: int) -> int:
    if k < 1:
        raise ValueError("degree must be at least 1")
    return d * comb(k + d, d) + sum(harmonic_dimension(m, d) for m in range(k + 2, 2 * k + 1))


@dataclass(frozen=True)
class Provenance:
    kind: str  # "monomial" or "harmonic-gradient"
    component: int | None = None  # 1-based, monomial fields only
    exponents: tuple[int, ...] | None = None
    degree: int | None = None  # harmonic-gradient only
    index: int | None = None

    def to_json(self) -> dict:
        if self.kind == "monomial":
            return {"kind": self.kind, "component": self.component, "exponents": list(self.exponents)}
        return {"kind": self.kind, "degree": self.degree, "index": self.index}


def coordinate_keys(fields) -> list[tuple[int, tuple[int, ...]]]:
    keys = set()
    for f in fields:
        for i, comp in enumerate(f.components):
            for e in comp.terms:
                keys.add((i, e))
    return sorted(keys, key=lambda k: (k[0], sum(k[1]), tuple(-x for x in k[1])))


def coefficient_matrix(fields, keys) -> ExactMatrix:
    """Rows indexed by (component, exponent) keys, one column per field."""
    pos = {k: r for r, k in enumerate(keys)}
    rows = [[Fraction(0)] * len(fields) for _ in keys]
    for c, f in enumerate(fields):
        for i, comp in enumerate(f.components):
            for e, coef in comp.terms.items():
                rows[pos[(i, e)]][c] = coef
    if not rows:
        return ExactMatrix(0, len(fields), ())
    return ExactMatrix.from_rows(rows)


@dataclass(frozen=True)
class SpaceBasis:
    k: int
    dim: int
    fields: tuple[VectorField, ...]
    provenance: tuple[Provenance, ...]

    @property
    def count(self) -> int:
        return len(self.fields)

    def combine(self, coeffs) -> VectorField:
        out = VectorField.zero(self.dim)
        for c, f in zip(coeffs, self.fields):
            if c != 0:
                out = out + f * c
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.dim,
            "fields": [
                {"provenance": p.to_json(), "field": f.to_json()}
                for f, p in zip(self.fields, self.provenance)
            ],
        }


@lru_cache(maxsize=None)
def build_space(k: int, d: int) -> SpaceBasis:
    if k < 1:
        raise ValueError("degree must be at least 1")
    if d not in (2, 3):
        raise ValueError(f"unsupported dimension {d}")
    fields, prov = [], []
    for i in range(d):
        for e in monomials_up_to(k, d):
            fields.append(VectorField.unit(i, MultiPoly.monomial(e)))
            prov.append(Provenance("monomial", component=i + 1, exponents=e))
    for m in range(k + 2, 2 * k + 1):
        for idx, h in enumerate(harmonic_basis(m, d)):
            fields.append(gradient(h))
            prov.append(Provenance("harmonic-gradient", degree=m, index=idx))
    if len(fields) != dimension(k, d):
        raise SpaceConstructionError(f"built {len(fields)} fields, expected {dimension(k, d)}")
    r = rank(coefficient_matrix(fields, coordinate_keys(fields)))
    if r != len(fields):
        raise SpaceConstructionError(f"basis fields are dependent: rank {r} < {len(fields)}")
    return SpaceBasis(k, d, tuple(fields), tuple(prov))


def membership(v: VectorField, s: SpaceBasis):
    """Coefficients of ``v`` in ``s`` if ``v`` lies in its span, else ``None``."""
    if v.dim != s.dim:
        raise ValueError("field and space dimensions differ")
    keys = coordinate_keys(list(s.fields) + [v])
    basis_cols = coefficient_matrix(s.fields, keys).to_rows()
    target = coefficient_matrix([v], keys).to_rows()
    aug = ExactMatrix.from_rows([b + t for b, t in zip(basis_cols, target)])
    red, pivots = rref(aug)
    n = s.count
    if n in pivots:
        return None
    coeffs = [Fraction(0)] * n
    for row, pc in enumerate(pivots):
        coeffs[pc] = red[row][n]
    return coeffs


def is_harmonic(p: MultiPoly) -> bool:
    total = MultiPoly.zero(p.dim)
    for i in range(p.dim):
        total = total + differentiate(differentiate(p, i), i)
    return total.is_zero()
