"""Invariant suites run by ``verify`` and ``bba-check``.

Each suite takes a scenario and returns ``[(property, passed), ...]``.
"""

from __future__ import annotations

import itertools
import random

from gmpy2 import mpq

from ..ema import TruncatedEMA, untwist_isomorphism
from ..gammaring import product_ideal
from ..liecore import check_folded_triples, check_g0_abelian, identify_cartan
from ..weylalg import (
    build_descriptor,
    coinvariants_laurent,
    expand_elementary,
    graded_dimensions_agree,
    maxspec_to_psi,
    psi_to_maxspec,
    random_maxspec,
    sym_laurent_rewrite,
    tau_eval,
)
from ..weylmod import (
    default_truncation,
    highest_weight_character,
    local_weyl_module,
    min_annihilator_exponent,
    stability_check,
    twisting_comparison,
)
from .scenarios import Scenario

EXPECTED_FOLDED = {"S1": "A1", "S2": "C2", "S3": "A1", "S4": "G2"}


def liecore_suite(sc: Scenario) -> list:
    fd = sc.folded()
    alg = fd.algebra
    kind, rank, _ = identify_cartan(fd.folded.cartan)
    return [
        ("folded type", f"{kind}{rank}" == EXPECTED_FOLDED[sc.name]),
        ("antisymmetry", alg.check_antisymmetry()),
        ("jacobi", alg.check_jacobi()),
        ("cartan action", alg.check_cartan_action()),
        ("lift preserves brackets", fd.automorphism.preserves_brackets()),
        ("lift has the diagram order", fd.automorphism.has_order()),
        ("folded sl2 triples", check_folded_triples(fd)),
        ("fixed part of the Cartan is abelian", check_g0_abelian(alg, fd.sigma, fd)[0]),
    ]


def gammaring_suite(sc: Scenario) -> list:
    ring = sc.ring()
    given, psi = sc.psi()
    m = ring.order
    orbits_free = all(len(set(ring.orbit(x))) == m for x in sc.default_points)
    gens_fixed = all(ring.is_fixed(g) for g in ring.fixed_ring_generators())
    quotient = product_ideal(psi, 2, "local")
    return [
        ("orbits are free", orbits_free),
        ("fixed-ring generators are fixed", gens_fixed),
        ("completion is equivariant", psi.is_equivariant(sc.sigma())),
        ("quotient dimension", quotient.dim == 2 * len(psi.points)),
    ]


def ema_suite(sc: Scenario) -> list:
    fd = sc.folded()
    _, psi = sc.psi()
    out = []
    for N in (1, 2):
        L = TruncatedEMA(fd, product_ideal(psi, N, "local"))
        out.append((f"antisymmetry N={N}", L.check_antisymmetry()))
        out.append((f"jacobi N={N}", L.check_jacobi()))
        out.append((f"gradings N={N}", L.check_gradings()))
        iso = untwist_isomorphism(L, psi)
        out.append((f"untwisting is an isomorphism N={N}", iso.is_bijective() and iso.preserves_brackets()))
    return out


def weylmod_suite(sc: Scenario) -> list:
    fd = sc.folded()
    _, psi = sc.psi()
    W = local_weyl_module(fd, psi)
    chi = highest_weight_character(W.algebra, psi)
    twisted, untwisted = twisting_comparison(fd, psi)
    return [
        ("representation", W.check_representation()),
        ("weights", W.check_weights()),
        ("highest weight", W.check_highest_weight(chi)),
        ("stability", stability_check(fd, psi)),
        ("annihilator bound", min_annihilator_exponent(W) <= default_truncation(fd, psi)),
        ("twisting equivalence", twisted == untwisted),
    ]


def weylalg_suite(sc: Scenario, samples: int = 100, seed: int = 0, degree_bound: int = 8) -> list:
    fd = sc.folded()
    ring = sc.ring()
    rng = random.Random(seed)
    bijection, evaluation = True, True
    for _ in range(samples):
        lam = tuple(rng.randint(0, 2) * k for k in fd.kappa)
        mspec = random_maxspec(rng, ring, fd, lam)
        psi = maxspec_to_psi(mspec, fd, ring)
        if not psi.is_equivariant(fd.sigma) or psi_to_maxspec(psi, fd, lam) != mspec:
            bijection = False
    for lam_scale in (1, 2):
        lam = tuple(lam_scale * k for k in fd.kappa)
        mspec = random_maxspec(rng, ring, fd, lam)
        for k in range(len(fd.orbits)):
            iso = fd.isotropy_order(k)
            for e in range(-4, 5):
                if e % iso:
                    continue
                try:
                    tau_eval(mspec, fd, ring, k, {e: ring.field.one})
                except AssertionError:
                    evaluation = False
    rewrite = True
    for m in (1, 2, 3):
        for _ in range(5):
            f = _random_symmetric(rng, m)
            if expand_elementary(sym_laurent_rewrite(f), m) != f:
                rewrite = False
    desc = build_descriptor(tuple(k for k in fd.kappa), fd, ring)
    coinv = True
    for f in desc.factors:
        if f.isotropy > 1:
            pres = coinvariants_laurent(f.isotropy, r=f.r)
            coinv &= pres.generators == tuple(range(f.isotropy, f.r * f.isotropy + 1, f.isotropy))
    graded = all(graded_dimensions_agree(r, 2, degree_bound) for r in (1, 2, 3))
    return [
        ("maxSpec bijection round trip", bijection),
        ("evaluation compatibility", evaluation),
        ("symmetric Laurent rewrite round trip", rewrite),
        ("coinvariant presentation", coinv),
        ("graded dimensions of coinvariants", graded),
    ]


def _random_symmetric(rng: random.Random, m: int) -> dict:
    """Symmetrize a few random Laurent monomials in m variables."""
    out: dict = {}
    for _ in range(3):
        exps = tuple(rng.randint(-2, 2) for _ in range(m))
        c = mpq(rng.randint(-3, 3))
        for perm in set(itertools.permutations(exps)):
            v = out.get(perm, 0) + c
            if v:
                out[perm] = v
            else:
                out.pop(perm, None)
    return out


SUITES = {
    "liecore": liecore_suite,
    "gammaring": gammaring_suite,
    "ema": ema_suite,
    "weylmod": weylmod_suite,
    "weylalg": weylalg_suite,
}


def run_suite(name: str, sc: Scenario) -> list:
    try:
        return [(prop, bool(ok)) for prop, ok in SUITES[name](sc)]
    except Exception as exc:  # a crash is a failed property, reported as such
        return [(f"suite raised {type(exc).__name__}: {exc}", False)]
