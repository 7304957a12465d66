"""Degree-of-freedom functionals, DOF matrices and unisolvence verdicts.

Facet moments are stored scaled by ``1 / ((d-1)! |F_j|)`` (see
:func:`~unisolv.simplexint.integrate_facet_scaled`).  The scale is a positive
constant per facet, so ranks, kernels and the sign of the determinant are
those of the true moment matrix.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from .exactnum import ExactMatrix, SingularSystemError, det, format_rational, inverse, nullspace, rank
from .femspace import SpaceBasis, build_space, dimension, membership
from .multipoly import (
    MultiPoly,
    VectorField,
    complexify,
    curl2d,
    curl3d,
    divergence,
    gradient,
    laplacian,
    monomials_of_degree,
    parse_poly,
)
from .simplexint import (
    Simplex,
    barycentric,
    integrate_facet_scaled,
    integrate_reference,
    integrate_simplex,
    pullback_to_facet,
    pullback_to_reference,
    reference_barycentrics,
)

OPEN_CASE_LABEL = "exploratory: open case, no expected verdict"


class CounterexampleError(AssertionError):
    """A step of the three-dimensional counterexample check failed."""

    def __init__(self, step: str, detail: str):
        super().__init__(f"counterexample check ({step}) failed: {detail}")
        self.step = step
        self.detail = detail


class DualBasisRefused(SingularSystemError):
    def __init__(self, report: UnisolvenceReport):
        super().__init__(
            f"no dual basis: DOF system for k={report.k}, d={report.d} is singular "
            f"(rank {report.rank} of {report.dim}, kernel dimension {len(report.kernel)})"
        )
        self.report = report


@dataclass(frozen=True)
class FunctionalSpec:
    kind: str  # "interior" or "facet"
    component: int  # 1-based
    index: tuple[int, ...]  # multi-index over the d+1 barycentric slots
    facet: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("interior", "facet"):
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind == "facet":
            if self.facet is None or self.index[self.facet] != 0:
                raise ValueError("facet moments need a facet index with zero exponent")
        elif self.facet is not None:
            raise ValueError("interior moments carry no facet index")

    @property
    def order(self) -> int:
        return sum(self.index)

    def label(self) -> str:
        idx = ",".join(str(a) for a in self.index)
        if self.kind == "interior":
            return f"M[{self.component};({idx})]"
        return f"M[{self.component},{self.facet};({idx})]"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "component": self.component, "index": list(self.index)}
        if self.facet is not None:
            out["facet"] = self.facet
        return out


def functional_count(k: int, d: int) -> int:
    interior = d * comb(k - 2 + d, d) if k >= 2 else 0
    return interior + d * (d + 1) * comb(k - 1 + d - 1, d - 1)


def enumerate_functionals(k: int, d: int) -> list[FunctionalSpec]:
    """Interior moments (component-major), then facet moments (facet-major)."""
    if k < 1:
        raise ValueError("degree must be at least 1")
    specs = []
    for i in range(1, d + 1):
        for alpha in monomials_of_degree(k - 2, d + 1):
            specs.append(FunctionalSpec("interior", i, alpha))
    betas = monomials_of_degree(k - 1, d + 1)
    for j in range(d + 1):
        for i in range(1, d + 1):
            for beta in betas:
                if beta[j] == 0:
                    specs.append(FunctionalSpec("facet", i, beta, facet=j))
    return specs


def _power_product(forms, exps) -> MultiPoly:
    out = None
    for f, e in zip(forms, exps):
        if e:
            out = f ** e if out is None else out * f ** e
    return out if out is not None else MultiPoly.constant(1, forms[0].dim)


def apply_functional(spec: FunctionalSpec, v: VectorField, t: Simplex) -> Fraction:
    """Evaluate one moment on ``v`` using the barycentric forms of ``t``."""
    if v.dim != t.dim or len(spec.index) != t.dim + 1 or not 1 <= spec.component <= t.dim:
        raise ValueError("functional, field and simplex dimensions are inconsistent")
    comp = v[spec.component - 1]
    if comp.is_zero():
        return Fraction(0)
    weight = _power_product(barycentric(t), spec.index)
    if spec.kind == "interior":
        return integrate_simplex(weight * comp, t)
    return integrate_facet_scaled(weight * comp, t, spec.facet)


def _reference_weights(specs, d):
    """Weights of every functional expressed in the pulled-back coordinates."""
    lam = reference_barycentrics(d)
    mu = reference_barycentrics(d - 1) if d > 1 else None
    out = []
    for s in specs:
        if s.kind == "interior":
            out.append(_power_product(lam, s.index))
        else:
            verts = [m for m in range(d + 1) if m != s.facet]
            out.append(_power_product(mu, [s.index[m] for m in verts]))
    return out


def functional_values(specs, fields, t: Simplex) -> list[list[Fraction]]:
    """Matrix of ``specs`` (rows) applied to ``fields`` (columns)."""
    d = t.dim
    jac = abs(det(t.edge_matrix()))
    weights = _reference_weights(specs, d)
    rows = [[Fraction(0)] * len(fields) for _ in specs]
    for c, f in enumerate(fields):
        pulled: dict = {}
        for r, (s, w) in enumerate(zip(specs, weights)):
            comp = f[s.component - 1]
            if comp.is_zero():
                continue
            key = (s.component, s.facet)
            if key not in pulled:
                if s.kind == "interior":
                    pulled[key] = pullback_to_reference(comp, t)
                else:
                    pulled[key] = pullback_to_facet(comp, t, s.facet)
            val = integrate_reference(w * pulled[key])
            rows[r][c] = jac * val if s.kind == "interior" else val
    return rows


def dof_matrix(k: int, d: int, t: Simplex) -> ExactMatrix:
    if t.dim != d:
        raise ValueError(f"simplex dimension {t.dim} does not match d={d}")
    specs = enumerate_functionals(k, d)
    space = build_space(k, d)
    return ExactMatrix.from_rows(functional_values(specs, space.fields, t))


def normalize_first(vec):
    """Scale so that the first nonzero entry is 1."""
    lead = next((x for x in vec if x != 0), None)
    if lead is None:
        return list(vec)
    return [x / lead for x in vec]


@dataclass(frozen=True)
class UnisolvenceReport:
    k: int
    d: int
    simplex: Simplex
    dim: int
    n_functionals: int
    rank: int
    det: Optional[Fraction]
    kernel_coefficients: tuple[tuple[Fraction, ...], ...]
    kernel: tuple[VectorField, ...]
    seed: Optional[int] = None
    label: Optional[str] = None

    @property
    def verdict(self) -> str:
        if self.rank == self.dim and self.det is not None and self.det != 0:
            return "unisolvent"
        return "singular"

    @property
    def unisolvent(self) -> bool:
        return self.verdict == "unisolvent"

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "d": self.d,
            "simplex": self.simplex.to_json(),
            "dim": self.dim,
            "n_functionals": self.n_functionals,
            "rank": self.rank,
            "det": None if self.det is None else format_rational(self.det),
            "kernel": [
                {"coefficients": [format_rational(c) for c in coeffs], "field": f.to_json()}
                for coeffs, f in zip(self.kernel_coefficients, self.kernel)
            ],
            "verdict": self.verdict,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.label is not None:
            out["label"] = self.label
        return out


def unisolvence(k: int, d: int, t: Simplex, *, seed: Optional[int] = None,
                label: Optional[str] = None) -> UnisolvenceReport:
    m = dof_matrix(k, d, t)
    space = build_space(k, d)
    r = rank(m)
    dval = det(m) if m.is_square() else None
    kern = [tuple(normalize_first(v)) for v in nullspace(m)]
    fields = tuple(space.combine(v) for v in kern)
    return UnisolvenceReport(
        k=k, d=d, simplex=t, dim=space.count, n_functionals=m.rows, rank=r, det=dval,
        kernel_coefficients=tuple(kern), kernel=fields, seed=seed, label=label,
    )


@dataclass(frozen=True)
class DualBasis:
    k: int
    d: int
    simplex: Simplex
    fields: tuple[VectorField, ...]
    coefficients: ExactMatrix  # column j holds phi_j in the space basis
    biorthogonality: ExactMatrix

    def is_biorthogonal(self) -> bool:
        return self.biorthogonality == ExactMatrix.identity(len(self.fields))

    def certificate_hash(self) -> str:
        payload = json.dumps(self.biorthogonality.to_json(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "simplex": self.simplex.to_json(),
            "fields": [
                {"functional": s.to_json(), "field": f.to_json()}
                for s, f in zip(enumerate_functionals(self.k, self.d), self.fields)
            ],
            "biorthogonality": {
                "identity": self.is_biorthogonal(),
                "sha256": self.certificate_hash(),
            },
        }


def dual_basis(k: int, d: int, t: Simplex) -> DualBasis:
    """Nodal basis phi_j with functional_i(phi_j) = delta_ij.

    Biorthogonality is re-evaluated through :func:`apply_functional`, which
    integrates in physical coordinates rather than reusing the DOF matrix.
    """
    report = unisolvence(k, d, t)
    if not report.unisolvent:
        raise DualBasisRefused(report)
    space = build_space(k, d)
    coeffs = inverse(dof_matrix(k, d, t))
    cols = coeffs.transpose().to_rows()
    fields = tuple(space.combine(c) for c in cols)
    specs = enumerate_functionals(k, d)
    bio = ExactMatrix.from_rows([[apply_functional(s, f, t) for f in fields] for s in specs])
    return DualBasis(k, d, t, fields, coeffs, bio)


def random_simplices(d: int, count: int, seed: int) -> list[Simplex]:
    rng = random.Random(seed)
    return [Simplex.random(d, rng) for _ in range(count)]


def kernel_field_is_harmonic_pair(w: VectorField, k: int) -> bool:
    """div w = curl w = 0, and in 2D a holomorphic complexification of degree <= 2k-1."""
    if not divergence(w).is_zero():
        return False
    if w.dim == 2:
        if not curl2d(w).is_zero():
            return False
        pv = complexify(w)
        deg = pv.degree()
        return pv.is_holomorphic() and (deg is None or deg <= 2 * k - 1)
    return curl3d(w).is_zero()


# ---------------------------------------------------------------------------
# three-dimensional counterexample

P0_TEXT = (
    "3*x + 10*x^3 - 15*x^4 + 3*y - 18*x*y - 15*x^2*y + 30*x^3*y - 15*x*y^2 + 45*x^2*y^2 + 10*y^3"
    " + 30*x*y^3 - 15*y^4 + 3*z - 18*x*z - 15*x^2*z + 30*x^3*z - 18*y*z + 240*x*y*z - 180*x^2*y*z"
    " - 15*y^2*z - 180*x*y^2*z + 30*y^3*z - 15*x*z^2 + 45*x^2*z^2 - 15*y*z^2 - 180*x*y*z^2 + 45*y^2*z^2"
    " + 10*z^3 + 30*x*z^3 + 30*y*z^3 - 15*z^4"
)


@dataclass(frozen=True)
class Counterexample3D:
    P0: MultiPoly
    T0: Simplex
    u0: VectorField

    @classmethod
    def default(cls) -> Counterexample3D:
        p0 = parse_poly(P0_TEXT, 3)
        return cls(p0, Simplex.reference(3), gradient(p0))


@dataclass
class CounterexampleReport:
    checks: list = field(default_factory=list)  # (step, description, passed)
    functional_values: list = field(default_factory=list)
    coefficients: Optional[list] = None
    kernel_dimension: Optional[int] = None
    kernel_coefficients: Optional[list] = None

    @property
    def passed(self) -> bool:
        return len(self.checks) == 5 and all(ok for _, _, ok in self.checks)

    def to_json(self) -> dict:
        ce = Counterexample3D.default()
        return {
            "P0": ce.P0.to_json(),
            "n_terms": len(ce.P0.terms),
            "simplex": ce.T0.to_json(),
            "u0": ce.u0.to_json(),
            "checks": [
                {"step": s, "description": desc, "passed": ok} for s, desc, ok in self.checks
            ],
            "functional_values": [
                {"functional": spec.to_json(), "value": format_rational(v)}
                for spec, v in self.functional_values
            ],
            "u0_coefficients": None if self.coefficients is None
            else [format_rational(c) for c in self.coefficients],
            "kernel_dimension": self.kernel_dimension,
            "kernel_coefficients": None if self.kernel_coefficients is None
            else [[format_rational(c) for c in v] for v in self.kernel_coefficients],
            "passed": self.passed,
        }


def verify_counterexample(report: Optional[CounterexampleReport] = None) -> CounterexampleReport:
    """Run the five checks in order; raise :class:`CounterexampleError` on the first failure.

    Pass a ``report`` to keep the partial results when a step fails.
    """
    rep = report if report is not None else CounterexampleReport()
    ce = Counterexample3D.default()

    lap = laplacian(ce.P0)
    ok = lap.is_zero()
    rep.checks.append(("a", "Laplacian of P0 vanishes", ok))
    if not ok:
        raise CounterexampleError("a", f"Laplacian of P0 is {lap}")

    space = build_space(2, 3)
    coeffs = membership(ce.u0, space)
    ok = coeffs is not None
    rep.checks.append(("b", "u0 = grad P0 lies in the k=2, d=3 space", ok))
    if not ok:
        raise CounterexampleError("b", "u0 is not in the span of the space basis")
    rep.coefficients = coeffs

    specs = enumerate_functionals(2, 3)
    values = [apply_functional(s, ce.u0, ce.T0) for s in specs]
    rep.functional_values = list(zip(specs, values))
    nonzero = [s.label() for s, v in zip(specs, values) if v != 0]
    ok = not nonzero and len(values) == 39
    rep.checks.append(("c", f"all {len(values)} functionals vanish on u0", ok))
    if not ok:
        raise CounterexampleError("c", f"nonzero functionals: {', '.join(nonzero)}")

    m = dof_matrix(2, 3, ce.T0)
    kern = [normalize_first(v) for v in nullspace(m)]
    rep.kernel_dimension = len(kern)
    rep.kernel_coefficients = kern
    ok = len(kern) == 1 and kern[0] == normalize_first(coeffs)
    rep.checks.append(("d", "DOF kernel on T0 is one-dimensional and spanned by u0", ok))
    if not ok:
        raise CounterexampleError(
            "d", f"kernel dimension {len(kern)}; spanned by u0: {bool(kern) and kern[0] == normalize_first(coeffs)}"
        )

    ok = divergence(ce.u0).is_zero() and curl3d(ce.u0).is_zero()
    rep.checks.append(("e", "div u0 = 0 and curl u0 = 0", ok))
    if not ok:
        raise CounterexampleError("e", "u0 has nonzero divergence or curl")
    return rep
