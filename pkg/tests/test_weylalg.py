import itertools
import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st
from sympy.polys.polyfuncs import symmetrize

from emaweyl.cli.scenarios import SCENARIOS
from emaweyl.gammaring import WeightFunction
from emaweyl.weylalg import (
    build_descriptor,
    coinvariant_dimension_bruteforce,
    coinvariants_laurent,
    expand_elementary,
    graded_dimension_table,
    graded_dimensions_agree,
    is_symmetric,
    make_maxspec,
    maxspec_to_psi,
    psi_to_maxspec,
    random_maxspec,
    sym_laurent_rewrite,
    tau_eval,
    top_elementary_in_ideal,
)

from helpers import all_permutations_symmetric

ONE = mpq(1)


def scenario(name):
    sc = SCENARIOS[name]
    return sc.folded(), sc.ring()


# -- descriptors --------------------------------------------------------------


def test_descriptor_sl2_double_weight():
    fd, ring = scenario("S1")
    desc = build_descriptor((2,), fd, ring)
    (factor,) = desc.factors
    assert factor.r == 2 and factor.isotropy == 1
    assert factor.generators == ["e1(u)", "e2(u)", "e2(u)^-1"]


def test_descriptor_c2_long_weight_uses_fixed_ring():
    fd, ring = scenario("S2")
    desc = build_descriptor((0, 1), fd, ring)
    long_factor = desc.factors[1]
    assert long_factor.r == 1 and long_factor.isotropy == 2
    assert long_factor.to_json()["fixed_ring"] == "k[t^2, t^-2]"
    assert desc.factors[0].r == 0


def test_descriptor_zero_weight_is_base_field():
    fd, ring = scenario("S4")
    assert build_descriptor((0, 0), fd, ring).is_base_field


def test_descriptor_odd_weight_in_a2_fold_is_zero():
    fd, ring = scenario("S3")
    assert build_descriptor((1,), fd, ring).zero
    desc = build_descriptor((4,), fd, ring)
    assert not desc.zero and desc.factors[0].r == 2


def test_descriptor_rejects_non_dominant_weight():
    fd, ring = scenario("S1")
    with pytest.raises(ValueError):
        build_descriptor((-1,), fd, ring)


# -- maxSpec bijection --------------------------------------------------------


def test_maxspec_distinct_points():
    fd, ring = scenario("S1")
    psi = maxspec_to_psi(make_maxspec(ring, fd, [[2, 1]]), fd, ring)
    assert psi == WeightFunction(ring, {1: (1,), 2: (1,)}, 1)


def test_maxspec_repeated_point():
    fd, ring = scenario("S1")
    psi = maxspec_to_psi(make_maxspec(ring, fd, [[1, 1]]), fd, ring)
    assert psi == WeightFunction(ring, {1: (2,)}, 1)


def test_maxspec_twisted_sl3():
    fd, ring = scenario("S3")
    psi = maxspec_to_psi(make_maxspec(ring, fd, [[3]]), fd, ring)
    assert psi == WeightFunction(ring, {3: (1, 0), -3: (0, 1)}, 2)


@pytest.mark.parametrize("name,tuples,values", [
    ("S1", [[1, 2]], {1: (1,), 2: (1,)}),
    ("S1", [[1, 1]], {1: (2,)}),
    ("S3", [[3]], {3: (1, 0), -3: (0, 1)}),
])
def test_psi_to_maxspec_inverts_examples(name, tuples, values):
    fd, ring = scenario(name)
    psi = WeightFunction(ring, values, fd.algebra.rank)
    assert psi_to_maxspec(psi, fd) == make_maxspec(ring, fd, tuples)


def test_isotropy_orbit_representative_for_long_node():
    fd, ring = scenario("S2")
    # the fixed node sees points up to sign
    assert make_maxspec(ring, fd, [[], [3]]) == make_maxspec(ring, fd, [[], [-3]])
    psi = maxspec_to_psi(make_maxspec(ring, fd, [[], [3]]), fd, ring)
    assert psi == WeightFunction(ring, {3: (0, 1, 0), -3: (0, 1, 0)}, 3)


def test_psi_to_maxspec_errors():
    fd, ring = scenario("S3")
    with pytest.raises(ValueError):
        psi_to_maxspec(WeightFunction(ring, {1: (1, 0), -1: (1, 0)}, 2), fd)
    psi = maxspec_to_psi(make_maxspec(ring, fd, [[1]]), fd, ring)
    with pytest.raises(ValueError):
        psi_to_maxspec(psi, fd, (4,))


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_random_round_trips(name):
    fd, ring = scenario(name)
    rng = random.Random(7)
    for _ in range(25):
        lam = tuple(rng.randint(0, 3) * k for k in fd.kappa)
        mspec = random_maxspec(rng, ring, fd, lam)
        psi = maxspec_to_psi(mspec, fd, ring)
        assert psi.is_equivariant(fd.sigma)
        assert fd.restrict_weight(psi.total_weight()) == lam
        assert psi_to_maxspec(psi, fd, lam) == mspec


# -- evaluation compatibility -------------------------------------------------


def test_tau_eval_sl2_linear():
    fd, ring = scenario("S1")
    assert tau_eval(make_maxspec(ring, fd, [[1, 2]]), fd, ring, 0, {1: ONE}) == 3


def test_tau_eval_constant_counts_points():
    fd, ring = scenario("S1")
    assert tau_eval(make_maxspec(ring, fd, [[1, 2, 5]]), fd, ring, 0, {0: ONE}) == 3


def test_tau_eval_twisted_sl3_square():
    fd, ring = scenario("S3")
    one = ring.field.one
    assert tau_eval(make_maxspec(ring, fd, [[3]]), fd, ring, 0, {2: one}) == 9


def test_tau_eval_requires_invariant_argument():
    fd, ring = scenario("S2")
    with pytest.raises(ValueError):
        tau_eval(make_maxspec(ring, fd, [[], [3]]), fd, ring, 1, {1: ONE})


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_tau_eval_matches_character_on_generators(name):
    fd, ring = scenario(name)
    rng = random.Random(3)
    for lam_scale in (1, 2):
        lam = tuple(lam_scale * k for k in fd.kappa)
        mspec = random_maxspec(rng, ring, fd, lam)
        for k in range(len(fd.orbits)):
            for e in range(-4, 5):
                if e % fd.isotropy_order(k) == 0:
                    tau_eval(mspec, fd, ring, k, {e: ring.field.one})


# -- symmetric Laurent polynomials --------------------------------------------


def test_rewrite_examples():
    assert sym_laurent_rewrite({(1, 0): ONE, (0, 1): ONE}) == {(1, 0): ONE}
    assert sym_laurent_rewrite({(-1, 0): ONE, (0, -1): ONE}) == {(1, -1): ONE}
    assert sym_laurent_rewrite({(1, 1): ONE}) == {(0, 1): ONE}


def test_rewrite_rejects_non_symmetric():
    assert not is_symmetric({(1, 0): ONE})
    with pytest.raises(ValueError):
        sym_laurent_rewrite({(1, 0): ONE})


def _sympy_rewrite(f, m):
    """Clear denominators, symmetrize with sympy, divide back."""
    ts = sp.symbols(f"t1:{m + 1}")
    shift = max(0, -min(min(k) for k in f))
    expr = sum(sp.Integer(int(c)) * sp.Mul(*[t**(e + shift) for t, e in zip(ts, k)]) for k, c in f.items())
    sym, rest = symmetrize(sp.expand(expr), *ts, formal=True)[:2]
    assert rest == 0
    return sym, shift


def _as_sympy(p, m):
    ss = sp.symbols(f"s1:{m + 1}")
    return sum(sp.Integer(int(c)) * sp.Mul(*[s**e for s, e in zip(ss, k)]) for k, c in p.items())


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=3),
    st.lists(st.tuples(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-3, 3)), max_size=3),
)
def test_rewrite_matches_sympy(m, terms):
    f = all_permutations_symmetric({tuple(e[:m]): mpq(c) for e, c in terms if c})
    f = {k: v for k, v in f.items() if v}
    p = sym_laurent_rewrite(f)
    assert expand_elementary(p, m) == f
    if not f:
        return
    (sym, shift) = _sympy_rewrite(f, m)
    ss = sp.symbols(f"s1:{m + 1}")
    sym = sym[0] if isinstance(sym, tuple) else sym
    expected = sp.expand(sym.subs({sp.Symbol(f"s{i + 1}"): ss[i] for i in range(m)}) / ss[m - 1] ** shift)
    assert sp.expand(_as_sympy(p, m) - expected) == 0


# -- coinvariants -------------------------------------------------------------


def test_coinvariant_presentations():
    assert coinvariants_laurent(2, r=1).to_json()["generators"] == ["e2", "e2^-1"]
    assert coinvariants_laurent(2, r=2).to_json()["generators"] == ["e2", "e4", "e4^-1"]
    assert coinvariants_laurent(3, r=2).generators == (3, 6)
    zero = coinvariants_laurent(2, n=1)
    assert zero.zero and zero.graded_dimension(0) == 0


def test_coinvariants_require_one_size():
    with pytest.raises(ValueError):
        coinvariants_laurent(2)


def test_top_elementary_kills_indivisible_coinvariants():
    assert top_elementary_in_ideal(1, 2)
    assert top_elementary_in_ideal(3, 2)
    assert not top_elementary_in_ideal(2, 2)


def _pairs_count(degree, r, m):
    """Multisets of r exponents of u = t^m with total t-degree ``degree``."""
    if degree % m:
        return 0
    return sum(1 for c in itertools.combinations_with_replacement(range(degree // m + 1), r) if sum(c) == degree // m)


def test_graded_table_r2_m2():
    rows = graded_dimension_table(2, 2, 8)
    assert [row["coinvariants"] for row in rows] == [_pairs_count(d, 2, 2) for d in range(9)]
    assert [row["coinvariants"] for row in rows] == [1, 0, 1, 0, 2, 0, 2, 0, 3]


@pytest.mark.parametrize("r", [1, 2, 3])
def test_graded_dimensions_agree(r):
    assert graded_dimensions_agree(r, 2, 8)


def test_graded_dimensions_order_three():
    assert graded_dimensions_agree(2, 3, 6)
    assert coinvariant_dimension_bruteforce(6, 3, 3) == 1
    # with n = 2 not divisible by 3, e_2 lies in the ideal and degree 3 dies
    assert coinvariant_dimension_bruteforce(2, 3, 3) == 0
