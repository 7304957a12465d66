import random
from fractions import Fraction

import pytest

from unisolv.certificate import (
    ComplexTriple,
    ContractViolation,
    PoleError,
    alpha,
    build_M,
    cauchy_det,
    cauchy_matrix,
    certificate_bridge,
    closed_form_det,
    segment_integral,
    triple_from_triangle,
    verify_certificate,
)
from unisolv.exactnum import ExactMatrix, GaussianRational, det
from unisolv.multipoly import MultiPoly, VectorField, compose_affine, gradient
from unisolv.simplexint import Simplex

from conftest import random_fraction

F = Fraction
G = GaussianRational
I = G(0, 1)
x, y = MultiPoly.variables(2)


def random_gauss(rng):
    return G(random_fraction(rng), random_fraction(rng))


def test_segment_integral_examples():
    assert segment_integral([1], 0, G(1, 1)) == G(1, 1)
    assert segment_integral([0, 1], 0, 1) == F(1, 2)
    assert segment_integral([0, 0, 1], 0, 1) == F(1, 3)
    assert segment_integral([0, 0, 1], 1, 2) == F(7, 3)


def test_build_M_lowest_order():
    m = build_M(1, ComplexTriple(0, 2, 1))
    assert m == ExactMatrix.from_rows([[2, 1], [2, F(1, 2)]])
    assert det(m) == -1


def transcribed_M2(z1, z2, z3):
    def e(a, b, n):
        return (b ** n - a ** n) / n

    return ExactMatrix.from_rows([
        [e(z1, z2, 1), e(z1, z2, 2), e(z1, z3, 1), e(z1, z3, 2)],
        [e(z1, z2, 2), e(z1, z2, 3), e(z1, z3, 2), e(z1, z3, 3)],
        [e(z1, z2, 3), e(z1, z2, 4), e(z1, z3, 3), e(z1, z3, 4)],
        [e(z1, z2, 4), e(z1, z2, 5), e(z1, z3, 4), e(z1, z3, 5)],
    ])


def transcribed_M2_normalized(z):
    return ExactMatrix.from_rows([
        [z, z**2 / 2, 1, F(1, 2)],
        [z**2 / 2, z**3 / 3, F(1, 2), F(1, 3)],
        [z**3 / 3, z**4 / 4, F(1, 3), F(1, 4)],
        [z**4 / 4, z**5 / 5, F(1, 4), F(1, 5)],
    ])


def test_second_order_matrix_transcriptions(rng):
    for _ in range(5):
        z1, z2, z3 = (random_gauss(rng) for _ in range(3))
        m = build_M(2, ComplexTriple(z1, z2, z3))
        assert m == transcribed_M2(z1, z2, z3)
        assert det(m) == det(build_M(2, ComplexTriple(0, z2 - z1, z3 - z1)))
    for z in [G(2), G(F(1, 2), 3), G(-1, 1)]:
        m = build_M(2, ComplexTriple(0, z, 1))
        assert m == transcribed_M2_normalized(z)
        assert det(m) == z**4 * (z - 1) ** 4 / 2880
    assert det(build_M(2, ComplexTriple(0, 2, 1))) == F(1, 180)


def test_entries_are_segment_integrals(rng):
    k = 3
    zt = ComplexTriple.random(rng)
    m = build_M(k, zt)
    for i in range(2 * k):
        for j in range(k):
            mono = [0] * (i + j) + [1]
            assert m[i, j] == segment_integral(mono, zt.z1, zt.z2)
            assert m[i, k + j] == segment_integral(mono, zt.z1, zt.z3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_translation_invariance_and_swap(k, rng):
    for _ in range(3):
        zt = ComplexTriple.random(rng)
        d0 = det(build_M(k, zt))
        assert det(build_M(k, zt.shifted(random_gauss(rng)))) == d0
        swapped = ComplexTriple(zt.z1, zt.z3, zt.z2)
        assert det(build_M(k, swapped)) == (-1) ** k * d0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_closed_form_matches_elimination(k):
    rng = random.Random(700 + k)
    for _ in range(4 if k < 4 else 2):
        res = verify_certificate(k, ComplexTriple.random(rng))
        assert res.match
        assert res.det_elimination != 0


def test_repeated_point_gives_zero():
    for k in (1, 2, 3):
        assert det(build_M(k, ComplexTriple(0, 0, 1))) == 0
        assert closed_form_det(k, ComplexTriple(I, I, 1)) == 0


def test_alpha_values():
    assert alpha(1) == F(1, 2)
    assert alpha(2) == F(1, 2880)
    assert alpha(3) == F(2**5, 720 * 5040 * 40320)


@pytest.mark.parametrize("k", range(1, 7))
def test_alpha_is_product_of_cauchy_determinants(k):
    a = range(1, k + 1)
    left = cauchy_det(a, range(0, k))
    right = cauchy_det(a, range(k, 2 * k))
    assert alpha(k) == left * right
    assert det(cauchy_matrix(a, range(0, k))) == left


def test_cauchy_closed_form_vs_elimination(rng):
    for n in range(1, 6):
        for _ in range(5):
            a = [random_fraction(rng) for _ in range(n)]
            b = [random_fraction(rng) + 20 for _ in range(n)]
            assert det(cauchy_matrix(a, b)) == cauchy_det(a, b)


def test_cauchy_pole():
    with pytest.raises(PoleError):
        cauchy_det([1, 2], [-2, 5])
    with pytest.raises(PoleError):
        cauchy_matrix([1], [-1])


def contour_pairing(v: VectorField, z1, z2, j: int) -> GaussianRational:
    """Integral of (v1 - i v2) z^j dz along z1 -> z2 by direct parametrization."""
    dx, dy = z2.re - z1.re, z2.im - z1.im
    A, b = [[dx], [dy]], [z1.re, z1.im]
    re = compose_affine(v[0], A, b)
    im = -compose_affine(v[1], A, b)
    gx, gy = compose_affine(x, A, b), compose_affine(y, A, b)
    for _ in range(j):
        re, im = re * gx - im * gy, re * gy + im * gx
    re, im = re * dx - im * dy, re * dy + im * dx

    def integral(p):
        return sum((c / (e[0] + 1) for e, c in p.terms.items()), F(0))

    return G(integral(re), integral(im))


def test_bridge_examples():
    zt = ComplexTriple(0, 1, I)
    assert certificate_bridge(VectorField.zero(2), zt, 1) == [0, 0]
    one, zero = MultiPoly.constant(1, 2), MultiPoly.zero(2)
    assert certificate_bridge(VectorField([one, zero]), zt, 1) == [1, I]


def test_bridge_matches_parametrized_edge_moments(rng):
    t = Simplex.random(2, rng)
    zt = triple_from_triangle(t)
    k = 2
    h = x**4 - 6 * x**2 * y**2 + y**4 + 3 * (x**3 - 3 * x * y**2) - 2 * x * y
    v = gradient(h)
    vals = certificate_bridge(v, zt, k)
    expected = [contour_pairing(v, zt.z1, far, j) for far in (zt.z2, zt.z3) for j in range(k)]
    assert vals == expected


def test_bridge_contract():
    zt = ComplexTriple(0, 1, I)
    with pytest.raises(ContractViolation):
        certificate_bridge(VectorField([x, MultiPoly.zero(2)]), zt, 2)
    too_high = gradient(x**5 - 10 * x**3 * y**2 + 5 * x * y**4)
    with pytest.raises(ContractViolation):
        certificate_bridge(too_high, zt, 2)
    assert len(certificate_bridge(too_high, zt, 3)) == 6


def test_triple_helpers(rng):
    zt = ComplexTriple.random(rng)
    assert zt.pairwise_distinct() and not zt.collinear()
    assert ComplexTriple(0, 1, 2).collinear()
    assert zt.reversed().reversed() == zt
    assert set(zt.to_json()) == {"z1", "z2", "z3"}
