import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from emaweyl.gammaring import (
    GammaRing,
    RingQuotient,
    WeightFunction,
    fixed_ring_generators,
    orbit,
    poly_divmod,
    poly_mul,
    product_ideal,
    section_quotient,
    xi_component,
)
from emaweyl.liecore import DiagramAutomorphism
from emaweyl.scalars import EISENSTEIN, RATIONALS, SQRT2

t = sp.Symbol("t")
polys = st.dictionaries(st.integers(min_value=0, max_value=6), st.integers(min_value=-4, max_value=4).filter(bool),
                        max_size=5)


def to_sympy(p):
    return sum((sp.Rational(int(c.numerator), int(c.denominator)) * t**e for e, c in p.items()), sp.Integer(0))


def rational_poly(p):
    return {e: mpq(c) for e, c in p.items()}


@given(polys, polys)
def test_poly_mul_matches_sympy(p, q):
    prod = poly_mul(rational_poly(p), rational_poly(q))
    assert sp.expand(to_sympy(prod) - to_sympy(p) * to_sympy(q)) == 0


@given(polys, polys.filter(bool))
def test_poly_divmod_matches_sympy(p, d):
    q, r = poly_divmod(rational_poly(p), rational_poly(d))
    sq, sr = sp.div(to_sympy(p), to_sympy(d), t)
    assert sp.expand(to_sympy(q) - sq) == 0
    assert sp.expand(to_sympy(r) - sr) == 0


def test_orbits():
    assert orbit(GammaRing(RATIONALS, 2), 1) == [1, -1]
    eta = EISENSTEIN.gen
    assert set(orbit(GammaRing(EISENSTEIN, 3), 1)) == {1, eta, eta * eta}
    with pytest.raises(ValueError):
        orbit(GammaRing(RATIONALS, 2), 0)


def test_xi_components():
    R2 = GammaRing(RATIONALS, 2)
    one = mpq(1)
    assert xi_component(R2, {2: one}, 0) == {2: one}
    assert xi_component(R2, {2: one}, 1) == {}
    assert xi_component(R2, {3: one, 2: one}, 0) == {2: one}
    assert xi_component(R2, {3: one, 2: one}, 1) == {3: one}
    R3 = GammaRing(EISENSTEIN, 3)
    f = {4: EISENSTEIN.one}
    assert R3.act(f) == {4: EISENSTEIN.gen}
    assert xi_component(R3, f, 1) == f


@given(polys, st.sampled_from([(RATIONALS, 2), (EISENSTEIN, 3)]))
def test_components_sum_to_identity(p, case):
    field, m = case
    R = GammaRing(field, m)
    f = rational_poly(p)
    total = {}
    for xi in range(m):
        for e, c in xi_component(R, f, xi).items():
            total[e] = total.get(e, 0) + c
    assert total == f


def test_fixed_ring_generators():
    one = mpq(1)
    assert fixed_ring_generators(GammaRing(RATIONALS, 2)) == [{2: one}, {-2: one}]
    assert fixed_ring_generators(GammaRing(RATIONALS, 2, laurent=False)) == [{2: one}]
    assert fixed_ring_generators(GammaRing(EISENSTEIN, 3)) == [{3: one}, {-3: one}]
    assert fixed_ring_generators(GammaRing(RATIONALS, 1)) == [{1: one}, {-1: one}]


def test_grading_is_multiplicative():
    R = GammaRing(EISENSTEIN, 3)
    for a in range(-3, 4):
        for b in range(-3, 4):
            prod = poly_mul({a: EISENSTEIN.one}, {b: EISENSTEIN.one})
            assert xi_component(R, prod, (a + b) % 3) == prod


def test_quotient_dimensions():
    R2 = GammaRing(RATIONALS, 2)
    R1 = GammaRing(RATIONALS, 1)
    assert RingQuotient(R2, [1, -1], 1).dim == 2
    assert RingQuotient(R2, [1, -1], 1).modulus == {2: 1, 0: -1}
    assert RingQuotient(R1, [1], 2).dim == 2
    assert RingQuotient(R2, [1, -1], 2).dim == 4
    assert RingQuotient(R2, [1, -1, 2, -2], 3).dim == 12


def test_quotient_requires_stable_points():
    with pytest.raises(ValueError):
        RingQuotient(GammaRing(RATIONALS, 2), [1], 1)


@settings(max_examples=30)
@given(polys, polys, st.sampled_from(["monomial", "orbit", "local"]))
def test_quotient_multiplication_is_polynomial_multiplication(p, q, basis):
    Q = RingQuotient(GammaRing(SQRT2, 2), [1, -1, 2, -2], 2, basis)
    f, g = rational_poly(p), rational_poly(q)
    lhs = {}
    cf, cg = Q.coords(f), Q.coords(g)
    for i, a in cf.items():
        for j, b in cg.items():
            for k, c in Q.mul(i, j).items():
                lhs[k] = lhs.get(k, 0) + a * b * c
    lhs = {k: v for k, v in lhs.items() if v}
    assert lhs == Q.coords(poly_mul(f, g))


def test_local_basis_is_homogeneous_and_nilpotent_off_the_diagonal():
    Q = RingQuotient(GammaRing(SQRT2, 2), [1, -1, 3, -3], 3, "local")
    assert Q.slots == 2
    for k, p in enumerate(Q.basis_polys):
        degs = {e % 2 for e in p}
        assert len(degs) <= 1
    # elements (t^2 - x^2)^k t^r with k >= 1 vanish at every point
    for k in range(Q.dim):
        local_index = k % (Q.N * 2)
        if local_index >= 2:
            assert all(Q.evaluate(k, x) == 0 for x in Q.points)


def test_laurent_inverse_reduces_correctly():
    Q = RingQuotient(GammaRing(RATIONALS, 1), [2], 3)
    inv = Q.reduce({-1: mpq(1)})
    assert Q.reduce(poly_mul(inv, {1: mpq(1)})) == {0: mpq(1)}


def test_weight_function_completion_and_total_weight():
    R = GammaRing(RATIONALS, 2)
    sigma = DiagramAutomorphism.from_permutation((2, 1, 0))
    psi = WeightFunction(R, {1: (1, 0, 0)}, 3).equivariant_completion(sigma)
    assert psi[-1] == (0, 0, 1)
    assert psi.is_equivariant(sigma)
    assert psi.total_weight() in {(1, 0, 0), (0, 0, 1)}
    assert psi.total_weight([1]) == (1, 0, 0)
    assert psi.total_weight([-1]) == (0, 0, 1)
    with pytest.raises(ValueError):
        WeightFunction(R, {1: (1, 0, 0), -1: (1, 0, 0)}, 3).equivariant_completion(sigma)


def test_product_ideal_and_section_quotient():
    R = GammaRing(SQRT2, 2)
    sigma = DiagramAutomorphism.from_permutation((1, 0))
    psi = WeightFunction(R, {1: (1, 0)}, 2).equivariant_completion(sigma)
    assert product_ideal(psi, 2).dim == 4
    sec = section_quotient(psi, 2)
    assert sec.dim == 2 and sec.ring.order == 1
