import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unisolv import _pykernels
from unisolv.exactnum import (
    DimensionError,
    ExactMatrix,
    GaussianRational,
    SingularSystemError,
    cofactor_det,
    det,
    generic_det,
    generic_rref,
    inverse,
    nullspace,
    parse_rational,
    rank,
    rref,
    scalar_from_json,
    scalar_to_json,
    solve,
)

from conftest import random_fraction

F = Fraction
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def square(n):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n)


def test_rational_serialization():
    assert scalar_to_json(F(-3, 7)) == "-3/7"
    assert scalar_to_json(F(5)) == "5"
    assert parse_rational("-3/7") == F(-3, 7)
    assert parse_rational("6/4") == F(3, 2)
    g = GaussianRational(F(1, 2), -3)
    assert scalar_to_json(g) == {"re": "1/2", "im": "-3"}
    assert scalar_from_json(json.loads(json.dumps(scalar_to_json(g)))) == g


def test_gaussian_field_axioms(rng):
    for _ in range(50):
        a, b, c = (GaussianRational(random_fraction(rng), random_fraction(rng)) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert a.conjugate().conjugate() == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        if b != 0:
            assert (a / b) * b == a
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert GaussianRational(3) == 3 and hash(GaussianRational(3)) == hash(F(3))


def test_det_examples():
    assert det(ExactMatrix.identity(3)) == 1
    assert det([[1, F(1, 2)], [F(1, 2), F(1, 3)]]) == F(1, 12)
    hilbert = [[F(1, i + j - 1) for j in range(1, 4)] for i in range(1, 4)]
    assert cofactor_det(hilbert) == F(1, 2160)
    assert det(hilbert) == F(1, 2160)


def test_det_non_square():
    with pytest.raises(DimensionError):
        det([[1, 2, 3]])


def test_rank_examples():
    assert rank(ExactMatrix.zeros(2, 3)) == 0
    assert rank(ExactMatrix.identity(4)) == 4
    assert rank([[1, 1], [1, 1]]) == 1


def test_nullspace_examples():
    assert nullspace(ExactMatrix.identity(2)) == []
    assert nullspace([[1, 1], [1, 1]]) == [[-1, 1]]
    basis = nullspace([[1, 2, 3]])
    assert len(basis) == 2
    assert basis == [[-2, 1, 0], [-3, 0, 1]]


def test_solve_examples():
    b = [F(3), F(-1, 2), F(7)]
    assert solve(ExactMatrix.identity(3), b) == b
    assert solve([[2, 0], [0, 3]], [1, 1]) == [F(1, 2), F(1, 3)]
    assert solve([[1, 1], [0, 1]], [3, 2]) == [1, 2]
    with pytest.raises(SingularSystemError):
        solve([[1, 1], [1, 1]], [1, 2])


@given(st.integers(1, 5).flatmap(square))
def test_det_matches_cofactor_oracle(rows):
    assert det(rows) == cofactor_det(rows)
    assert generic_det(rows) == cofactor_det(rows)


@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rank_nullity_and_kernel(nr, nc, data):
    rows = data.draw(st.lists(st.lists(st.integers(-2, 2).map(F), min_size=nc, max_size=nc),
                              min_size=nr, max_size=nr))
    m = ExactMatrix.from_rows(rows)
    kern = nullspace(m)
    assert rank(m) + len(kern) == nc
    for v in kern:
        assert m @ v == [0] * nr


@given(square(4), square(4))
def test_det_multiplicative(a, b):
    A, B = ExactMatrix.from_rows(a), ExactMatrix.from_rows(b)
    assert det(A @ B) == det(A) * det(B)


def test_rref_integer_path_matches_generic(rng):
    for _ in range(200):
        nr, nc = rng.randint(1, 5), rng.randint(1, 6)
        rows = [[random_fraction(rng, 3, 3) if rng.random() < 0.7 else F(0) for _ in range(nc)]
                for _ in range(nr)]
        if nr > 1 and rng.random() < 0.4:
            rows[-1] = [a + b for a, b in zip(rows[0], rows[1 % nr])]
        assert rref(rows) == generic_rref(rows)


def test_gaussian_det_matches_cofactor(rng):
    for n in range(1, 6):
        rows = [[GaussianRational(random_fraction(rng), random_fraction(rng)) for _ in range(n)]
                for _ in range(n)]
        assert det(rows) == cofactor_det(rows) == generic_det(rows)


def test_gaussian_rank_and_nullspace():
    i = GaussianRational(0, 1)
    rows = [[1, i], [i, -1]]  # second row = i * first row
    assert rank(rows) == 1
    (v,) = nullspace(rows)
    assert ExactMatrix.from_rows(rows) @ v == [0, 0]


def test_inverse(rng):
    for n in range(1, 6):
        while True:
            rows = [[random_fraction(rng) for _ in range(n)] for _ in range(n)]
            if det(rows) != 0:
                break
        m = ExactMatrix.from_rows(rows)
        assert m @ inverse(m) == ExactMatrix.identity(n)


def test_matrix_json_roundtrip():
    m = ExactMatrix.from_rows([[F(1, 2), GaussianRational(1, -1)], [0, 3]])
    assert ExactMatrix.from_json(json.loads(json.dumps(m.to_json()))) == m


def test_pure_python_kernels_match_selected_backend():
    from unisolv import kernels

    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 7)
        rows = [[rng.randint(-30, 30) for _ in range(n)] for _ in range(n)]
        im = [[rng.randint(-30, 30) for _ in range(n)] for _ in range(n)]
        assert kernels.det_int(rows) == _pykernels.det_int(rows)
        assert kernels.det_gauss(rows, im) == _pykernels.det_gauss(rows, im)
        assert kernels.rref_int(rows, n) == _pykernels.rref_int(rows, n)


def test_compiled_backend_available():
    from unisolv import kernels

    pytest.importorskip("unisolv._ckernels")
    assert kernels.BACKEND in ("cython", "python")
