import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from unisolv.multipoly import MultiPoly, VectorField, compose_affine, gradient, monomials_up_to, parse_poly
from unisolv.simplexint import (
    GeometryError,
    Simplex,
    barycentric,
    green_residual,
    integrate_facet_scaled,
    integrate_simplex,
    outward_area_normal,
    pullback_to_facet,
    volume,
)

from conftest import random_fraction

F = Fraction
T2 = Simplex.reference(2)
T3 = Simplex.reference(3)
x, y = MultiPoly.variables(2)


def _antiderivative(p: MultiPoly, var: int) -> MultiPoly:
    out = {}
    for e, c in p.terms.items():
        ne = list(e)
        ne[var] += 1
        out[tuple(ne)] = c / ne[var]
    return MultiPoly(p.dim, out)


def iterated_reference_integral(p: MultiPoly) -> Fraction:
    """Fubini on the unit simplex, innermost variable last; no factorial formula."""
    d = p.dim
    cur = p
    for var in range(d - 1, -1, -1):
        # integrate variable `var` from 0 to 1 - (sum of earlier variables)
        anti = _antiderivative(cur, var)
        ident = [[int(i == j) for j in range(d)] for i in range(d)]
        upper_A = [row[:] for row in ident]
        upper_A[var] = [-1 if j < var else 0 for j in range(d)]
        upper_b = [0] * d
        upper_b[var] = 1
        lower_A = [row[:] for row in ident]
        lower_A[var] = [0] * d
        cur = compose_affine(anti, upper_A, upper_b) - compose_affine(anti, lower_A, [0] * d)
    return cur.coefficient((0,) * d)


def random_poly(rng, dim, deg):
    monos = monomials_up_to(deg, dim)
    return MultiPoly(dim, {m: random_fraction(rng, 5, 3) for m in rng.sample(monos, min(5, len(monos)))})


def random_field(rng, dim, deg):
    return VectorField([random_poly(rng, dim, deg) for _ in range(dim)])


def test_barycentric_examples():
    lam = barycentric(T2)
    assert lam == (1 - x - y, x, y)
    X, Y, Z = MultiPoly.variables(3)
    assert barycentric(T3) == (1 - X - Y - Z, X, Y, Z)
    assert barycentric(Simplex(2, ((0, 0), (2, 0), (0, 2))))[1] == x / 2


@pytest.mark.parametrize("dim", [2, 3])
def test_barycentric_invariants(dim, rng):
    for _ in range(5):
        t = Simplex.random(dim, rng)
        lam = barycentric(t)
        total = MultiPoly.zero(dim)
        for l in lam:
            total = total + l
        assert total == MultiPoly.constant(1, dim)
        for i, l in enumerate(lam):
            for j, v in enumerate(t.vertices):
                assert l(v) == (1 if i == j else 0)
            assert pullback_to_facet(l, t, i).is_zero()


def test_volume_examples():
    assert volume(T2) == F(1, 2)
    assert volume(T3) == F(1, 6)
    assert volume(Simplex(2, ((0, 0), (2, 0), (0, 2)))) == 2


def test_degenerate_rejected():
    with pytest.raises(GeometryError):
        Simplex(2, ((0, 0), (1, 1), (2, 2)))
    with pytest.raises(GeometryError):
        Simplex(3, ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)))
    with pytest.raises(GeometryError):
        integrate_facet_scaled(x, T2, 3)


def test_integrate_examples():
    assert integrate_simplex(MultiPoly.constant(1, 3), T3) == F(1, 6)
    assert integrate_simplex(x * y, T2) == F(1, 24)
    assert iterated_reference_integral(x * y) == F(1, 24)
    t = Simplex(2, ((F(1, 3), -2), (4, F(1, 2)), (-1, 3)))
    l0, l1, l2 = barycentric(t)
    assert integrate_simplex(l0 * l1 * l2, t) == volume(t) / 60


def test_integrate_matches_fubini_oracle(rng):
    for dim in (2, 3):
        for _ in range(10):
            p = random_poly(rng, dim, 5)
            assert integrate_simplex(p, Simplex.reference(dim)) == iterated_reference_integral(p)


def test_facet_examples():
    assert integrate_facet_scaled(MultiPoly.constant(1, 2), T2, 1) == 1
    assert integrate_facet_scaled(MultiPoly.constant(1, 3), T3, 2) == F(1, 2)
    assert integrate_facet_scaled(x, T2, 0) == F(1, 2)
    assert integrate_facet_scaled(x * y, T2, 0) == F(1, 6)


@pytest.mark.parametrize("dim", [2, 3])
def test_integration_invariant_under_relabeling(dim, rng):
    t = Simplex.random(dim, rng)
    p = random_poly(rng, dim, 4)
    ref = integrate_simplex(p, t)
    facet_ref = [integrate_facet_scaled(p, t, j) for j in range(dim + 1)]
    for perm in itertools.permutations(range(dim + 1)):
        tp = t.permuted(perm)
        assert integrate_simplex(p, tp) == ref
        for new_j, old_j in enumerate(perm):
            # facet opposite vertex new_j of tp is facet opposite old_j of t
            assert integrate_facet_scaled(p, tp, new_j) == facet_ref[old_j]


@pytest.mark.parametrize("dim", [2, 3])
def test_barycentric_moment_formula(dim, rng):
    for _ in range(3):
        t = Simplex.random(dim, rng)
        lam = barycentric(t)
        vol = volume(t)
        for alpha in monomials_up_to(4, dim + 1):
            w = MultiPoly.constant(1, dim)
            for l, a in zip(lam, alpha):
                w = w * l ** a
            expected = (math.factorial(dim) * vol * math.prod(math.factorial(a) for a in alpha)
                        / math.factorial(sum(alpha) + dim))
            assert integrate_simplex(w, t) == expected


def test_area_normals_close_up(rng):
    for dim in (2, 3):
        t = Simplex.random(dim, rng)
        total = [sum(outward_area_normal(t, j)[r] for j in range(dim + 1)) for r in range(dim)]
        assert total == [0] * dim


def test_green_examples():
    one = MultiPoly.constant(1, 2)
    zero = MultiPoly.zero(2)
    assert green_residual(VectorField([one, zero]), one, T2, "div") == 0
    assert green_residual(gradient(x**2 + y**2), one, T2, "div") == 0
    assert green_residual(VectorField([y, x]), x, T2, "curl") == 0


def test_green_detects_wrong_boundary_term(monkeypatch):
    # flipping the hypotenuse normal must break the identity
    import unisolv.simplexint as si

    orig = si.outward_area_normal
    monkeypatch.setattr(
        si, "outward_area_normal",
        lambda t, j: tuple(-c for c in orig(t, j)) if j == 0 else orig(t, j),
    )
    v = VectorField([x, MultiPoly.zero(2)])
    assert green_residual(v, MultiPoly.constant(1, 2), T2, "div") != 0


@pytest.mark.parametrize("dim", [2, 3])
def test_green_random(dim, rng):
    for _ in range(8):
        t = Simplex.random(dim, rng)
        v = random_field(rng, dim, 4)
        q = random_poly(rng, dim, 3)
        assert green_residual(v, q, t, "div") == 0
        qc = q if dim == 2 else random_field(rng, dim, 3)
        assert green_residual(v, qc, t, "curl") == 0


def test_simplex_json_roundtrip(tmp_path):
    t = Simplex(3, ((F(-3, 7), 0, 1), (5, F(1, 2), 0), (0, 1, 0), (0, 0, 1)))
    path = tmp_path / "t.json"
    path.write_text(json.dumps(t.to_json()))
    assert Simplex.load(path) == t
    assert t.to_json()["vertices"][0] == ["-3/7", "0", "1"]


def test_random_simplex_is_seeded():
    a = Simplex.random(3, random.Random(9))
    b = Simplex.random(3, random.Random(9))
    assert a == b
    for v in a.vertices:
        for c in v:
            assert -9 <= c.numerator <= 9 and c.denominator <= 4


def test_parse_poly_sanity():
    assert parse_poly("1/2*x - y^2", 2) == x / 2 - y ** 2
