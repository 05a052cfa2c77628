import pytest
from gmpy2 import mpq

from emaweyl.ema import TruncatedEMA, bar_element
from emaweyl.gammaring import RingQuotient, WeightFunction, product_ideal
from emaweyl.weylmod import (
    Character,
    default_truncation,
    garland_relation_check,
    garland_span_check,
    highest_weight_character,
    isotypic_check,
    local_weyl_module,
    min_annihilator_exponent,
    restrict_character,
    restriction_functor,
    simple_quotient,
    stability_check,
    tensor,
    twist_restrict,
    twisting_comparison,
    untwisted_module,
    weyl_functor,
)
from emaweyl.cli.scenarios import SCENARIOS

from helpers import scenario_psi, sl2_evaluation_tensor_dimension, sl_vector_weights, untwisted

ONE = mpq(1)


def sl2_module(values, N=None, D=None):
    fd, ring = untwisted("A", 1)
    psi = WeightFunction(ring, {x: (m,) for x, m in values.items()}, 1)
    return local_weyl_module(fd, psi, N, D), psi


def scenario_module(name, values=None, N=None, D=None):
    psi = scenario_psi(name, values)
    return local_weyl_module(SCENARIOS[name].folded(), psi, N, D), psi


# -- highest weight characters ------------------------------------------------


def test_hev_untwisted_is_weighted_evaluation():
    fd, ring = untwisted("A", 1)
    psi = WeightFunction(ring, {mpq(3): (2,)}, 1)
    L = TruncatedEMA(fd, product_ideal(psi, 3))
    chi = highest_weight_character(L, psi)
    for k in range(3):
        assert chi(bar_element(L, "h", 0, {k: ONE})) == 2 * 3**k


def test_hev_of_zero_weight_function_vanishes():
    fd, ring = untwisted("A", 1)
    psi = WeightFunction(ring, {1: (0,)}, 1)
    L = TruncatedEMA(fd, product_ideal(psi, 2))
    assert highest_weight_character(L, psi).values == {}


def test_hev_twisted_sl3_on_constant():
    W, psi = scenario_module("S3")
    L = W.algebra
    chi = highest_weight_character(L, psi)
    assert chi(bar_element(L, "h", 0, {0: L.field.one})) == 1
    # the odd part sees the sign of the second point
    assert chi(bar_element(L, "h", 0, {1: L.field.one})) == 1


def test_hev_is_section_independent():
    W, psi = scenario_module("S2", {2: (1, 0, 0)}, N=2)
    L = W.algebra
    a = highest_weight_character(L, psi, [2])
    b = highest_weight_character(L, psi, [-2])
    assert a == b


def test_character_rejects_non_cartan_argument():
    W, psi = sl2_module({1: 1})
    L = W.algebra
    with pytest.raises(ValueError):
        highest_weight_character(L, psi)(bar_element(L, "e", 0, {0: ONE}))


# -- local Weyl modules -------------------------------------------------------


def test_trivial_weight_gives_trivial_module():
    W, _ = sl2_module({1: 0})
    assert W.dim == 1 and W.character() == {(0,): 1}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sl2_single_point_dimension(m):
    W, psi = sl2_module({1: m})
    assert W.dim == 2**m
    fd, _ = untwisted("A", 1)
    assert stability_check(fd, psi)


def test_sl2_points_match_tensor_product_oracle():
    for pts in ([1], [1, 2], [1, 2, 3]):
        W, _ = sl2_module({x: 1 for x in pts})
        assert W.dim == sl2_evaluation_tensor_dimension(pts)


def test_sl2_character_at_double_weight():
    W, _ = sl2_module({1: 2})
    assert W.character() == {(-2,): 1, (0,): 2, (2,): 1}


def test_twisted_sl3_module():
    W, _ = scenario_module("S3")
    assert W.dim == 3
    assert W.character() == {(-2,): 1, (0,): 1, (2,): 1}


def test_twisted_sl3_two_orbits():
    W, _ = scenario_module("S3", {1: (1, 0), 2: (1, 0)}, N=2)
    assert W.dim == 9


@pytest.mark.parametrize("name,values,dim", [
    ("S2", None, 4),
    ("S2", {1: (0, 1, 0)}, 6),
    ("S4", None, 8),
])
def test_scenario_dimensions(name, values, dim):
    W, _ = scenario_module(name, values)
    assert W.dim == dim


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4"])
def test_module_invariants(name):
    W, psi = scenario_module(name)
    assert W.check_representation()
    assert W.check_weights()
    assert W.check_highest_weight(highest_weight_character(W.algebra, psi))
    assert len(W.weight_space(W.highest_weight)) == 1


@pytest.mark.parametrize("name,values", [("S1", {1: (2,)}), ("S2", {1: (0, 1, 0)}), ("S3", None), ("S4", None)])
def test_character_is_weyl_invariant(name, values):
    W, _ = scenario_module(name, values)
    cartan = W.algebra.fd.folded.cartan
    char = W.character()
    for mu, mult in char.items():
        for i in range(len(mu)):
            # simple reflection: subtract mu_i times the i-th simple root
            nu = tuple(int(mu[k] - mu[i] * cartan[k][i]) for k in range(len(mu)))
            assert char.get(nu) == mult


def test_constant_fiber_dimension():
    dims = {sl2_module({x: 1, y: 1})[0].dim for x, y in [(1, 2), (3, -1), (mpq(1, 2), 5)]}
    assert dims == {4}


def test_product_formula_over_orbits():
    a, _ = scenario_module("S3", {1: (1, 0)}, N=2)
    b, _ = scenario_module("S3", {2: (0, 1)}, N=2)
    ab, _ = scenario_module("S3", {1: (1, 0), 2: (0, 1)}, N=2)
    assert ab.dim == a.dim * b.dim


def test_odd_weight_in_a2_fold_gives_zero_module():
    fd = SCENARIOS["S3"].folded()
    psi = scenario_psi("S3", None)
    L = TruncatedEMA(fd, product_ideal(psi, 2, "local"))
    # half of the first fundamental weight restricts to the odd weight 1
    chi = Character.from_weights(L, {1: (mpq(1, 2), 0)}, [1])
    assert not fd.is_restriction((1,))
    assert weyl_functor(L, (1,), [chi]).dim == 0
    even = highest_weight_character(L, psi)
    assert weyl_functor(L, (2,), [even]).dim == 3


def test_fractional_weight_function_is_rejected():
    with pytest.raises(ValueError):
        scenario_psi("S3", {1: (mpq(1, 2), 0)})


def test_non_equivariant_weight_function_is_rejected():
    sc = SCENARIOS["S3"]
    psi = WeightFunction(sc.ring(), {1: (1, 0), -1: (1, 0)}, 2)
    with pytest.raises(ValueError):
        local_weyl_module(sc.folded(), psi)


def test_stability_on_shipped_scenarios():
    for name in SCENARIOS:
        psi = scenario_psi(name, None)
        assert stability_check(SCENARIOS[name].folded(), psi)


# -- simple quotients ---------------------------------------------------------


def test_simple_quotient_of_sl2_double_weight():
    W, _ = sl2_module({1: 2})
    V = simple_quotient(W)
    assert V.dim == 3 and V.character() == {(-2,): 1, (0,): 1, (2,): 1}
    assert simple_quotient(V).dim == 3
    assert V.check_representation()


def test_minuscule_simple_equals_weyl():
    fd, ring = untwisted("A", 2)
    psi = WeightFunction(ring, {1: (1, 0)}, 2)
    W = local_weyl_module(fd, psi)
    assert W.dim == simple_quotient(W).dim == 3


def test_simple_quotient_of_trivial_module():
    W, _ = sl2_module({1: 0})
    assert simple_quotient(W).dim == 1


def test_simple_quotient_keeps_highest_weight_space():
    W, _ = sl2_module({1: 1, 2: 1})
    V = simple_quotient(W)
    assert V.dim == 4
    assert len(V.weight_space(V.highest_weight)) == 1


# -- characters and twisting --------------------------------------------------


def test_restriction_of_sl3_vector_character():
    fd = SCENARIOS["S3"].folded()
    char = {w: 1 for w in sl_vector_weights(2)}
    assert restrict_character(char, fd) == {(-2,): 1, (0,): 1, (2,): 1}


@pytest.mark.parametrize("name", ["S2", "S3", "S4"])
def test_twisting_equivalence(name):
    psi = scenario_psi(name, None)
    twisted, restricted = twisting_comparison(SCENARIOS[name].folded(), psi)
    assert twisted == restricted


def test_twist_restrict_of_sl3_vector_module():
    fd = SCENARIOS["S3"].folded()
    psi = scenario_psi("S3", None)
    U = untwisted_module(fd, psi, 1)
    L = TruncatedEMA(fd, product_ideal(psi, 1, "local"))
    T = twist_restrict(U, L)
    assert T.dim == 3
    assert T.check_representation()
    assert T.character() == local_weyl_module(fd, psi, 1).character()


def test_twist_restrict_sl4_gives_short_fundamental_of_c2():
    fd = SCENARIOS["S2"].folded()
    psi = scenario_psi("S2", None)
    U = untwisted_module(fd, psi, 1)
    T = twist_restrict(U, TruncatedEMA(fd, product_ideal(psi, 1, "local")))
    assert T.dim == 4 and T.check_representation()
    assert T.highest_weight == (1, 0)


def test_twist_restrict_rejects_non_section():
    fd = SCENARIOS["S3"].folded()
    psi = scenario_psi("S3", None)
    U = untwisted_module(fd, psi, 1)
    other = scenario_psi("S3", {2: (1, 0)})
    with pytest.raises(ValueError):
        twist_restrict(U, TruncatedEMA(fd, product_ideal(other, 1, "local")))


# -- tensor products ----------------------------------------------------------


def test_tensor_of_sl2_fundamentals():
    W1, _ = sl2_module({1: 1})
    W2, _ = sl2_module({2: 1})
    T = tensor(W1, W2)
    direct, _ = sl2_module({1: 1, 2: 1})
    assert T.dim == 4 and T.character() == direct.character()
    assert T.check_representation()


def test_tensor_with_trivial_module():
    W, _ = sl2_module({1: 2})
    triv, _ = sl2_module({1: 0}, N=2)
    T = tensor(W, triv)
    assert T.dim == W.dim and T.character() == W.character()


def test_tensor_of_twisted_orbits():
    W1, _ = scenario_module("S3", {1: (1, 0)})
    W2, _ = scenario_module("S3", {2: (1, 0)})
    T = tensor(W1, W2)
    assert T.dim == 9 and T.check_representation()


# -- annihilators -------------------------------------------------------------


@pytest.mark.parametrize("m,k", [(0, 1), (1, 1), (2, 2)])
def test_sl2_annihilator_exponent(m, k):
    W, psi = sl2_module({1: m}, N=3)
    assert min_annihilator_exponent(W, psi) == k


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4"])
def test_annihilator_within_bound(name):
    psi = scenario_psi(name, None)
    fd = SCENARIOS[name].folded()
    bound = default_truncation(fd, psi)
    W = local_weyl_module(fd, psi, bound + 1)
    assert min_annihilator_exponent(W) <= bound


def test_annihilator_rejects_other_points():
    W, _ = sl2_module({1: 1})
    _, other = sl2_module({2: 1})
    with pytest.raises(ValueError):
        min_annihilator_exponent(W, other)


# -- highest-weight vectors ---------------------------------------------------


def test_isotypic_sl2_double_weight():
    W, _ = sl2_module({1: 2})
    ok, found = isotypic_check(W)
    assert ok and found == [((2,), 1), ((0,), 1)]


def test_isotypic_simple_has_one_vector():
    W, _ = sl2_module({1: 2})
    ok, found = isotypic_check(simple_quotient(W))
    assert ok and found == [((2,), 1)]


def test_isotypic_twisted_sl3():
    W, _ = scenario_module("S3")
    ok, found = isotypic_check(W)
    assert ok and found == [((2,), 1)]


# -- functors -----------------------------------------------------------------


def test_weyl_functor_on_characters():
    W, psi = sl2_module({1: 2})
    chi = highest_weight_character(W.algebra, psi)
    assert weyl_functor(W.algebra, (2,), [chi]).dim == 4
    assert weyl_functor(W.algebra, (2,), [chi, chi]).dim == 8
    with pytest.raises(TypeError):
        weyl_functor(W.algebra, (2,), [{}])


def test_restriction_after_weyl_is_identity_on_characters():
    W, psi = sl2_module({1: 2, 3: 1}, N=3)
    L = W.algebra
    chi = highest_weight_character(L, psi)
    space, mats = restriction_functor(weyl_functor(L, (3,), [chi]))
    assert len(space) == 1
    assert {x: m[0][0] for x, m in mats.items() if m[0][0]} == chi.values


def test_weyl_functor_rejects_fractional_highest_weight():
    W, _ = sl2_module({1: 1})
    chi = Character.from_weights(W.algebra, {1: (mpq(1, 2),)}, [1])
    with pytest.raises(ValueError):
        weyl_functor(W.algebra, (mpq(1, 2),), [chi])


# -- Garland identities -------------------------------------------------------


@pytest.mark.parametrize("m,ell", [(1, 1), (1, 2), (2, 0), (2, 1), (3, 1), (3, 2)])
def test_garland_span_sl2(m, ell):
    W, _ = sl2_module({1: m, 2: 1}, N=m + 1)
    assert garland_span_check(W, 0, {1: ONE}, ell)


def test_garland_zero_weight():
    W, _ = sl2_module({1: 0}, N=2)
    for ell in range(3):
        assert garland_span_check(W, 0, {1: ONE}, ell)
        assert garland_relation_check(W, 0, {1: ONE}, ell)


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_garland_twisted_sl3(ell):
    W, _ = scenario_module("S3", {1: (1, 0), 2: (0, 1)}, N=2)
    a = {1: W.algebra.field.one}
    assert garland_span_check(W, 0, a, ell)
    assert garland_relation_check(W, 0, a, ell)


@pytest.mark.parametrize("ell", [0, 1])
def test_garland_relation_with_wrong_sign_fails(ell):
    W, _ = sl2_module({1: 2, 2: 1}, N=3)
    assert garland_relation_check(W, 0, {1: ONE}, ell)
    assert not garland_relation_check(W, 0, {1: ONE}, ell, sign=(-1) ** ell)


@pytest.mark.parametrize("ell", [0, 1])
def test_garland_twisted_wrong_sign_fails(ell):
    W, _ = scenario_module("S3", {1: (1, 0), 2: (0, 1)}, N=2)
    a = {1: W.algebra.field.one}
    assert not garland_relation_check(W, 0, a, ell, sign=(-1) ** ell)
