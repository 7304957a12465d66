"""Exact scalars and exact dense linear algebra.

Rationals are :class:`fractions.Fraction`.  :class:`GaussianRational` adds the
field Q(i).  Matrix routines accept any mix of ``int``, ``Fraction`` and
``GaussianRational`` entries.  Rational matrices are cleared of denominators
row by row and handed to the integer kernels in :mod:`unisolv.kernels`;
matrices with genuinely complex entries go through the Gaussian-integer
determinant kernel or the generic field elimination below.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from . import kernels


class DimensionError(ValueError):
    """Raised when matrix or vector shapes do not fit the operation."""


class SingularSystemError(ArithmeticError):
    """Raised when a linear solve meets a singular matrix."""


Rational = Fraction


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (also accepts ints and Fractions)."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse rational from {type(text).__name__}")
    return Fraction(text.strip())


def format_rational(q) -> str:
    return str(Fraction(q))


class GaussianRational:
    """Complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction, _RationalABC)):
            return GaussianRational(other)
        return None

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return GaussianRational(1) / (self ** (-e))
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> GaussianRational:
        if isinstance(obj, dict):
            return cls(parse_rational(obj["re"]), parse_rational(obj.get("im", "0")))
        return cls(parse_rational(obj))


I = GaussianRational(0, 1)


def scalar_to_json(x):
    """Serialize a field element: ``"p/q"`` for rationals, ``{"re","im"}`` otherwise."""
    if isinstance(x, GaussianRational):
        return x.to_json()
    return format_rational(x)


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return GaussianRational.from_json(obj)
    return parse_rational(obj)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (
        isinstance(x, GaussianRational) and x.im == 0
    )


def _as_fraction(x) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.re
    return Fraction(x)


class ExactMatrix:
    """Dense row-major matrix of exact field elements."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if len(entries) != rows * cols:
            raise DimensionError(
                f"{len(entries)} entries do not fill a {rows}x{cols} matrix"
            )
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> ExactMatrix:
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, [_norm_entry(x) for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.cols, self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def scale_row(self, i: int, c) -> ExactMatrix:
        rows = self.to_rows()
        rows[i] = [c * x for x in rows[i]]
        return ExactMatrix.from_rows(rows)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            a = self.to_rows()
            bt = other.transpose().to_rows()
            return ExactMatrix.from_rows(
                [[_dot(r, c) for c in bt] for r in a]
            )
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        return [_dot(self.row(i), vec) for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [scalar_to_json(x) for x in self.entries],
        }

    @classmethod
    def from_json(cls, obj) -> ExactMatrix:
        return cls(obj["rows"], obj["cols"], [scalar_from_json(x) for x in obj["entries"]])


def _norm_entry(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"unsupported matrix entry type {type(x).__name__}")


def _dot(a, b):
    s = Fraction(0)
    for x, y in zip(a, b):
        s = s + x * y
    return s


def _as_matrix(m) -> ExactMatrix:
    if isinstance(m, ExactMatrix):
        return m
    return ExactMatrix.from_rows(m)


def _all_rational(m: ExactMatrix) -> bool:
    return all(_is_rational(x) for x in m.entries)


def _integer_rows(rows: list[list]) -> tuple[list[list[int]], list[int]]:
    """Clear denominators row by row. Returns integer rows and row multipliers."""
    out, mults = [], []
    for r in rows:
        fr = [_as_fraction(x) for x in r]
        L = 1
        for x in fr:
            L = L * x.denominator // math.gcd(L, x.denominator)
        out.append([x.numerator * (L // x.denominator) for x in fr])
        mults.append(L)
    return out, mults


def _gaussian_integer_rows(rows: list[list]):
    re_rows, im_rows, mults = [], [], []
    for r in rows:
        gr = [x if isinstance(x, GaussianRational) else GaussianRational(x) for x in r]
        L = 1
        for x in gr:
            for part in (x.re, x.im):
                L = L * part.denominator // math.gcd(L, part.denominator)
        re_rows.append([x.re.numerator * (L // x.re.denominator) for x in gr])
        im_rows.append([x.im.numerator * (L // x.im.denominator) for x in gr])
        mults.append(L)
    return re_rows, im_rows, mults


# ---------------------------------------------------------------------------
# generic field elimination (any exact field supporting + - * /)


def generic_det(m) -> object:
    """Bareiss determinant using field division; shared by every field type."""
    m = _as_matrix(m)
    if not m.is_square():
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.to_rows()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - f * a[k][j]) / prev
        prev = piv
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def generic_rref(m) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with first-nonzero pivoting in column order."""
    m = _as_matrix(m)
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


# ---------------------------------------------------------------------------
# public operations


def det(m):
    """Exact determinant by fraction-free elimination."""
    m = _as_matrix(m)
    if not m.is_square():
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    rows = m.to_rows()
    if _all_rational(m):
        ints, mults = _integer_rows(rows)
        return Fraction(kernels.det_int(ints), math.prod(mults))
    re_rows, im_rows, mults = _gaussian_integer_rows(rows)
    dr, di = kernels.det_gauss(re_rows, im_rows)
    scale = math.prod(mults)
    return GaussianRational(Fraction(dr, scale), Fraction(di, scale))


def rref(m) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = _as_matrix(m)
    if not _all_rational(m):
        return generic_rref(m)
    if m.rows == 0:
        return [], []
    ints, _ = _integer_rows(m.to_rows())
    red, pivots, d = kernels.rref_int(ints, m.cols)
    return [[Fraction(x, d) for x in row] for row in red], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m) -> list[list]:
    """Basis of the right kernel.

    One vector per free column, in increasing column order; the free column
    is set to 1, the other free columns to 0.
    """
    m = _as_matrix(m)
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    one = Fraction(1)
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def solve(a, b: Sequence) -> list:
    """Solve ``a x = b`` for square nonsingular ``a``."""
    a = _as_matrix(a)
    if not a.is_square():
        raise DimensionError(f"solve needs a square matrix, got {a.shape}")
    b = list(b)
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {a.rows}")
    aug = ExactMatrix.from_rows([r + [bi] for r, bi in zip(a.to_rows(), b)])
    red, pivots = rref(aug)
    if pivots != list(range(a.cols)):
        raise SingularSystemError("matrix is singular")
    return [red[i][a.cols] for i in range(a.rows)]


def inverse(a) -> ExactMatrix:
    a = _as_matrix(a)
    if not a.is_square():
        raise DimensionError(f"inverse needs a square matrix, got {a.shape}")
    n = a.rows
    aug = ExactMatrix.from_rows(
        [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.to_rows())]
    )
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise SingularSystemError("matrix is singular")
    return ExactMatrix.from_rows([row[n:] for row in red])


def cofactor_det(m):
    """Laplace expansion along the first row. Exponential; small matrices only."""
    rows = _as_matrix(m).to_rows()

    def rec(a):
        n = len(a)
        if n == 0:
            return Fraction(1)
        if n == 1:
            return a[0][0]
        total = Fraction(0)
        for j in range(n):
            if a[0][j] == 0:
                continue
            minor = [r[:j] + r[j + 1:] for r in a[1:]]
            term = a[0][j] * rec(minor)
            total = total + term if j % 2 == 0 else total - term
        return total

    return rec(rows)
