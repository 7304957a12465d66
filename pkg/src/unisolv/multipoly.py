"""Sparse multivariate polynomials with exact coefficients.

A :class:`MultiPoly` maps exponent tuples to nonzero coefficients
(``Fraction`` or :class:`~unisolv.exactnum.GaussianRational`).  Terms are
iterated in graded-lex order: increasing total degree, then decreasing
powers of x, y, z.  Vector fields are tuples of polynomials; :class:`ZPoly`
holds the z / z-bar expansion of a complexified planar field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import GaussianRational, I, parse_rational, scalar_from_json, scalar_to_json

VAR_NAMES = ("x", "y", "z")


def grlex_key(exps: Sequence[int]):
    return (sum(exps), tuple(-e for e in exps))


def monomials_of_degree(m: int, dim: int) -> list[tuple[int, ...]]:
    """Exponent tuples with total degree exactly ``m``, in graded-lex order."""
    if m < 0:
        return []
    if dim == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in monomials_of_degree(m - first, dim - 1):
            out.append((first,) + rest)
    return out


def monomials_up_to(k: int, dim: int) -> list[tuple[int, ...]]:
    out = []
    for m in range(k + 1):
        out.extend(monomials_of_degree(m, dim))
    return out


def _coeff(c):
    if isinstance(c, GaussianRational):
        return c if c.im != 0 else c.re
    return Fraction(c)


class MultiPoly:
    """Immutable sparse polynomial in ``dim`` variables."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | Iterable = ()):
        self.dim = dim
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != dim:
                raise ValueError(f"exponent {exps} has wrong length for dim {dim}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _coeff(c)
            if c != 0:
                if exps in clean:
                    s = clean[exps] + c
                    if s == 0:
                        del clean[exps]
                    else:
                        clean[exps] = _coeff(s)
                else:
                    clean[exps] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim, terms):
        p = cls.__new__(cls)
        p.dim = dim
        p.terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def zero(cls, dim: int) -> MultiPoly:
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, c, dim: int) -> MultiPoly:
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def var(cls, i: int, dim: int) -> MultiPoly:
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> MultiPoly:
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variables(cls, dim: int) -> tuple[MultiPoly, ...]:
        return tuple(cls.var(i, dim) for i in range(dim))

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree, or ``None`` for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, m: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (m is None or degs == {m})

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), Fraction(0))

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussianRational) for c in self.terms.values())

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(point)}")
        total = Fraction(0)
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(point, exps):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    # arithmetic
    def _check(self, other: MultiPoly):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.dim)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = _coeff(s)
        return MultiPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coeff(other)
            if c == 0:
                return MultiPoly.zero(self.dim)
            return MultiPoly._raw(self.dim, {e: _coeff(v * c) for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(
            self.dim, {e: _coeff(c) for e, c in out.items() if c != 0}
        )

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / _coeff(c))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.dim)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.terms == MultiPoly.constant(other, self.dim).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.dim}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                VAR_NAMES[i] if e == 1 else f"{VAR_NAMES[i]}^{e}"
                for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(f"({c})" if isinstance(c, GaussianRational) else str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if isinstance(c, GaussianRational) else str(c)
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(e), "coeff": scalar_to_json(c)} for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, records, dim: int | None = None) -> MultiPoly:
        if not records:
            if dim is None:
                raise ValueError("cannot infer dimension of empty polynomial")
            return cls.zero(dim)
        d = len(records[0]["exponents"])
        if dim is not None and d != dim:
            raise ValueError(f"record dimension {d} != {dim}")
        return cls(d, [(r["exponents"], scalar_from_json(r["coeff"])) for r in records])


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def differentiate(p: MultiPoly, var: int) -> MultiPoly:
    if not 0 <= var < p.dim:
        raise ValueError(f"variable index {var} out of range for dim {p.dim}")
    out = {}
    for exps, c in p.terms.items():
        e = exps[var]
        if e:
            ne = list(exps)
            ne[var] = e - 1
            out[tuple(ne)] = _coeff(c * e)
    return MultiPoly._raw(p.dim, out)


class VectorField:
    """Tuple of ``dim`` real polynomials in ``dim`` variables."""

    __slots__ = ("dim", "components")

    def __init__(self, components: Sequence[MultiPoly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        dim = comps[0].dim
        if any(c.dim != dim for c in comps) or len(comps) != dim:
            raise ValueError("components must share the field's dimension")
        self.dim = dim
        self.components = comps

    @classmethod
    def zero(cls, dim: int) -> VectorField:
        return cls([MultiPoly.zero(dim)] * dim)

    @classmethod
    def unit(cls, i: int, poly: MultiPoly) -> VectorField:
        """Field with ``poly`` in component ``i`` (0-based) and zeros elsewhere."""
        comps = [MultiPoly.zero(poly.dim)] * poly.dim
        comps[i] = poly
        return cls(comps)

    def __getitem__(self, i) -> MultiPoly:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: VectorField) -> VectorField:
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField([-a for a in self.components])

    def __mul__(self, c) -> VectorField:
        return VectorField([a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def degree(self):
        degs = [c.degree() for c in self.components if not c.is_zero()]
        return max(degs) if degs else None

    def __call__(self, *point):
        return tuple(c(*point) for c in self.components)

    def __repr__(self):
        return "VectorField(" + ", ".join(str(c) for c in self.components) + ")"

    def to_json(self) -> list[list[dict]]:
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, obj, dim: int | None = None) -> VectorField:
        d = dim if dim is not None else len(obj)
        return cls([MultiPoly.from_json(c, d) for c in obj])


# ---------------------------------------------------------------------------
# vector calculus


def gradient(p: MultiPoly) -> VectorField:
    return VectorField([differentiate(p, i) for i in range(p.dim)])


def divergence(v: VectorField) -> MultiPoly:
    total = MultiPoly.zero(v.dim)
    for i, c in enumerate(v.components):
        total = total + differentiate(c, i)
    return total


def curl2d(v: VectorField) -> MultiPoly:
    if v.dim != 2:
        raise ValueError("curl2d needs a planar field")
    return differentiate(v[1], 0) - differentiate(v[0], 1)


def curl3d(v: VectorField) -> VectorField:
    if v.dim != 3:
        raise ValueError("curl3d needs a field in three dimensions")
    d = differentiate
    return VectorField([
        d(v[2], 1) - d(v[1], 2),
        d(v[0], 2) - d(v[2], 0),
        d(v[1], 0) - d(v[0], 1),
    ])


def scalar_curl2d(q: MultiPoly) -> VectorField:
    """Vector curl of a planar scalar: ``(dq/dy, -dq/dx)``."""
    if q.dim != 2:
        raise ValueError("scalar curl needs a planar polynomial")
    return VectorField([differentiate(q, 1), -differentiate(q, 0)])


def laplacian(p: MultiPoly) -> MultiPoly:
    total = MultiPoly.zero(p.dim)
    for i in range(p.dim):
        total = total + differentiate(differentiate(p, i), i)
    return total


def curl(v: VectorField):
    """``curl2d`` or ``curl3d`` according to the field's dimension."""
    return curl2d(v) if v.dim == 2 else curl3d(v)


def vector_calculus(obj, kind: str):
    if kind == "gradient":
        if not isinstance(obj, MultiPoly):
            raise ValueError("gradient takes a scalar polynomial")
        return gradient(obj)
    if kind == "laplacian":
        if not isinstance(obj, MultiPoly):
            raise ValueError("laplacian takes a scalar polynomial")
        return laplacian(obj)
    if not isinstance(obj, VectorField):
        raise ValueError(f"{kind} takes a vector field")
    if kind == "divergence":
        return divergence(obj)
    if kind == "curl2d":
        return curl2d(obj)
    if kind == "curl3d":
        return curl3d(obj)
    raise ValueError(f"unknown operator {kind!r}")


def dot(u: VectorField, w: VectorField) -> MultiPoly:
    total = MultiPoly.zero(u.dim)
    for a, b in zip(u.components, w.components):
        total = total + a * b
    return total


# ---------------------------------------------------------------------------
# affine pullback


def compose_affine(p: MultiPoly, A: Sequence[Sequence], b: Sequence) -> MultiPoly:
    """Expand ``p(A u + b)`` as a polynomial in ``u``.

    ``A`` has ``p.dim`` rows; the output dimension is its column count.
    """
    if len(A) != p.dim or len(b) != p.dim:
        raise ValueError(f"affine map has {len(A)} rows, polynomial has dim {p.dim}")
    out_dim = len(A[0]) if A else 0
    if any(len(row) != out_dim for row in A):
        raise ValueError("ragged affine matrix")
    images = []
    for row, shift in zip(A, b):
        terms = {(0,) * out_dim: shift}
        for j, a in enumerate(row):
            e = [0] * out_dim
            e[j] = 1
            terms[tuple(e)] = a
        images.append(MultiPoly(out_dim, terms))
    return substitute(p, images)


def substitute(p: MultiPoly, images: Sequence) -> MultiPoly | ZPoly:
    """Replace variable ``i`` of ``p`` by ``images[i]``; caches powers."""
    powers = [{0: None, 1: img} for img in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * images[i]
        return cache[e]

    total = None
    for exps, c in p.terms.items():
        t = None
        for i, e in enumerate(exps):
            if e:
                t = power(i, e) if t is None else t * power(i, e)
        if t is None:
            t = images[0] ** 0 if images else None
        t = t * c
        total = t if total is None else total + t
    if total is None:
        return images[0] * 0 if images else MultiPoly.zero(0)
    return total


# ---------------------------------------------------------------------------
# complexification


class ZPoly:
    """Polynomial ``sum c[m, n] z^m zbar^n`` with Gaussian-rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], object] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = {}
        for (m, n), c in items:
            c = GaussianRational(c)
            if c != 0:
                s = clean.get((m, n), GaussianRational(0)) + c
                if s == 0:
                    clean.pop((m, n), None)
                else:
                    clean[(m, n)] = s
        self.coeffs = clean

    @classmethod
    def z(cls) -> ZPoly:
        return cls({(1, 0): 1})

    @classmethod
    def zbar(cls) -> ZPoly:
        return cls({(0, 1): 1})

    def __add__(self, other):
        if not isinstance(other, ZPoly):
            other = ZPoly({(0, 0): other})
        return ZPoly(list(self.coeffs.items()) + list(other.coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return ZPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, ZPoly):
            other = ZPoly({(0, 0): other})
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ZPoly):
            return ZPoly({k: c * other for k, c in self.coeffs.items()})
        out = []
        for (m1, n1), c1 in self.coeffs.items():
            for (m2, n2), c2 in other.coeffs.items():
                out.append(((m1 + m2, n1 + n2), c1 * c2))
        return ZPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = ZPoly({(0, 0): 1})
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, ZPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == ZPoly({(0, 0): other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_holomorphic(self) -> bool:
        return all(n == 0 for (_, n) in self.coeffs)

    def degree(self):
        if not self.coeffs:
            return None
        return max(m + n for (m, n) in self.coeffs)

    def holomorphic_coefficients(self) -> list[GaussianRational]:
        """``[a_0, ..., a_deg]`` with ``P = sum a_r z^r``; requires holomorphy."""
        if not self.is_holomorphic():
            raise ValueError("polynomial depends on zbar")
        deg = self.degree()
        if deg is None:
            return []
        return [self.coeffs.get((r, 0), GaussianRational(0)) for r in range(deg + 1)]

    def __call__(self, z):
        z = GaussianRational(z)
        zb = z.conjugate()
        total = GaussianRational(0)
        for (m, n), c in self.coeffs.items():
            total = total + c * z ** m * zb ** n
        return total

    def __repr__(self):
        if not self.coeffs:
            return "ZPoly(0)"
        parts = []
        for (m, n), c in sorted(self.coeffs.items()):
            parts.append(f"({c})*z^{m}*zbar^{n}")
        return "ZPoly(" + " + ".join(parts) + ")"

    def to_json(self) -> list[dict]:
        return [
            {"z": m, "zbar": n, "coeff": c.to_json()} for (m, n), c in sorted(self.coeffs.items())
        ]


def complexify(v: VectorField) -> ZPoly:
    """Rewrite ``v1 - i v2`` in the variables z and zbar."""
    if v.dim != 2:
        raise ValueError("complexify needs a planar field")
    half = Fraction(1, 2)
    x = ZPoly({(1, 0): half, (0, 1): half})
    y = ZPoly({(1, 0): -I * half, (0, 1): I * half})
    return substitute(v[0], [x, y]) - substitute(v[1], [x, y]) * I


def parse_poly(text: str, dim: int) -> MultiPoly:
    """Parse a sum of terms like ``"3*x^2*y - 1/2*z + 4"`` (test and CLI helper)."""
    s = text.replace(" ", "").replace("-", "+-")
    total = MultiPoly.zero(dim)
    for chunk in s.split("+"):
        if not chunk:
            continue
        coeff = Fraction(1)
        exps = [0] * dim
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:]
        for factor in chunk.split("*"):
            if not factor:
                continue
            name, _, pw = factor.partition("^")
            if name in VAR_NAMES[:dim]:
                exps[VAR_NAMES.index(name)] += int(pw) if pw else 1
            else:
                coeff *= parse_rational(factor)
        total = total + MultiPoly(dim, {tuple(exps): sign * coeff})
    return total
