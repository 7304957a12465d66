"""Closed-form determinant certificate for the planar edge-moment pairing.

For a triple Z = (z1, z2, z3) of complex points, ``build_M`` assembles the
2k x 2k matrix pairing ``1, z, ..., z^(2k-1)`` against ``z^j`` integrated
along the segments z1->z2 (left block) and z1->z3 (right block).  Its
determinant is ``alpha(k) * ((z1-z2)(z2-z3)(z3-z1))^(k^2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .exactnum import ExactMatrix, GaussianRational, det
from .multipoly import VectorField, complexify


class PoleError(ZeroDivisionError):
    """A Cauchy matrix entry 1 / (a_i + b_j) has a vanishing denominator."""


class ContractViolation(ValueError):
    pass


@dataclass(frozen=True)
class ComplexTriple:
    z1: GaussianRational
    z2: GaussianRational
    z3: GaussianRational

    def __post_init__(self):
        for name in ("z1", "z2", "z3"):
            object.__setattr__(self, name, GaussianRational(getattr(self, name)))

    def __iter__(self):
        return iter((self.z1, self.z2, self.z3))

    def shifted(self, c) -> ComplexTriple:
        return ComplexTriple(self.z1 + c, self.z2 + c, self.z3 + c)

    def reversed(self) -> ComplexTriple:
        return ComplexTriple(self.z3, self.z2, self.z1)

    def pairwise_distinct(self) -> bool:
        return self.z1 != self.z2 and self.z2 != self.z3 and self.z1 != self.z3

    def collinear(self) -> bool:
        a = self.z2 - self.z1
        b = self.z3 - self.z1
        return a.re * b.im - a.im * b.re == 0

    @classmethod
    def random(cls, rng: random.Random) -> ComplexTriple:
        """Non-collinear triple; parts have numerators in [-9, 9], denominators in [1, 4]."""
        def draw():
            return GaussianRational(
                Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
            )
        while True:
            zt = cls(draw(), draw(), draw())
            if not zt.collinear():
                return zt

    def to_json(self) -> dict:
        return {"z1": self.z1.to_json(), "z2": self.z2.to_json(), "z3": self.z3.to_json()}


def segment_integral(coeffs: Sequence, z1, z2) -> GaussianRational:
    """Integral of sum a_r z^r along the oriented segment z1 -> z2."""
    z1 = GaussianRational(z1)
    z2 = GaussianRational(z2)
    total = GaussianRational(0)
    p1 = z1
    p2 = z2
    for r, a in enumerate(coeffs):
        if a != 0:
            total = total + a * (p2 - p1) / (r + 1)
        p1 = p1 * z1
        p2 = p2 * z2
    return total


def build_M(k: int, zt: ComplexTriple) -> ExactMatrix:
    if k < 1:
        raise ValueError("degree must be at least 1")
    z1, z2, z3 = zt
    pw = {}
    for name, z in (("1", z1), ("2", z2), ("3", z3)):
        acc = GaussianRational(1)
        vals = [acc]
        for _ in range(3 * k - 1):
            acc = acc * z
            vals.append(acc)
        pw[name] = vals
    rows = []
    for i in range(1, 2 * k + 1):
        row = []
        for j in range(1, k + 1):
            n = i + j - 1
            row.append((pw["2"][n] - pw["1"][n]) / n)
        for j in range(1, k + 1):
            n = i + j - 1
            row.append((pw["3"][n] - pw["1"][n]) / n)
        rows.append(row)
    return ExactMatrix.from_rows(rows)


def alpha(k: int) -> Fraction:
    if k < 1:
        raise ValueError("degree must be at least 1")
    num = prod(factorial(i) for i in range(k)) ** 5
    den = prod(factorial(2 * k + i) for i in range(k))
    return Fraction(num, den)


def cauchy_matrix(a: Sequence, b: Sequence) -> ExactMatrix:
    rows = []
    for ai in a:
        row = []
        for bj in b:
            s = Fraction(ai) + Fraction(bj)
            if s == 0:
                raise PoleError(f"a_i + b_j = 0 for a_i={ai}, b_j={bj}")
            row.append(1 / s)
        rows.append(row)
    return ExactMatrix.from_rows(rows)


def cauchy_det(a: Sequence, b: Sequence) -> Fraction:
    """Closed-form determinant of the matrix (1 / (a_i + b_j))."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) != len(b):
        raise ValueError("parameter lists must have equal length")
    num = Fraction(1)
    den = Fraction(1)
    for ai in a:
        for bj in b:
            if ai + bj == 0:
                raise PoleError(f"a_i + b_j = 0 for a_i={ai}, b_j={bj}")
            den *= ai + bj
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            num *= (a[i] - a[j]) * (b[i] - b[j])
    return num / den


def closed_form_det(k: int, zt: ComplexTriple) -> GaussianRational:
    z1, z2, z3 = zt
    n = k * k
    return ((z1 - z2) ** n) * ((z2 - z3) ** n) * ((z3 - z1) ** n) * alpha(k)


@dataclass(frozen=True)
class CertificateResult:
    k: int
    triple: ComplexTriple
    det_elimination: GaussianRational
    det_closed_form: GaussianRational
    alpha: Fraction

    @property
    def match(self) -> bool:
        return self.det_elimination == self.det_closed_form

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "triple": self.triple.to_json(),
            "det_elimination": self.det_elimination.to_json(),
            "det_closed_form": self.det_closed_form.to_json(),
            "alpha": str(self.alpha),
            "match": self.match,
        }


def verify_certificate(k: int, zt: ComplexTriple) -> CertificateResult:
    d = det(build_M(k, zt))
    return CertificateResult(k, zt, GaussianRational(d), closed_form_det(k, zt), alpha(k))


def triple_from_triangle(t) -> ComplexTriple:
    return ComplexTriple(*t.complex_vertices())


def certificate_bridge(v: VectorField, zt: ComplexTriple, k: int) -> list[GaussianRational]:
    """Values of the pairing of ``P_v = v1 - i v2`` with the 2k test pairs.

    Order: (z^0, 0) .. (z^(k-1), 0) on the segment z1->z2, then
    (0, z^0) .. (0, z^(k-1)) on z1->z3.
    """
    pv = complexify(v)
    if not pv.is_holomorphic():
        raise ContractViolation("v1 - i v2 depends on zbar (div or curl of v is nonzero)")
    if pv.degree() is not None and pv.degree() > 2 * k - 1:
        raise ContractViolation(f"holomorphic degree {pv.degree()} exceeds {2 * k - 1}")
    a = pv.holomorphic_coefficients()
    out = []
    for far in (zt.z2, zt.z3):
        for j in range(k):
            shifted = [GaussianRational(0)] * j + list(a)
            out.append(segment_integral(shifted, zt.z1, far))
    return out
