"""An explicit model of the highest-weight-space algebra of a global Weyl module.

For a folded datum with orbit section J and a dominant weight
``lambda = sum r_k kappa_k omega_k`` the algebra is the tensor product of the
symmetric powers ``S^{r_j}(A^{Gamma_j})``.  Its rational points are unordered
tuples of ``Gamma_j``-orbits of points, which correspond bijectively to
equivariant weight functions of total weight lambda.  For Laurent rings each
factor is presented by elementary symmetric polynomials with the top one
inverted.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from gmpy2 import mpq

from .ema import TruncatedEMA, bar_element
from .gammaring import GammaRing, RingQuotient, WeightFunction
from .liecore import FoldedDatum
from .linalg import Subspace, add_scaled
from .weylmod import highest_weight_character

_ONE = mpq(1)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class SymFactor:
    """``S^r(A^{Gamma_j})`` with ``A^{Gamma_j}`` generated by ``u = t^step``."""

    node: int  # representative node of the orbit, 0-based
    orbit: int  # index of the folded node
    r: int
    isotropy: int  # order of Gamma_j
    step: int  # exponent of t generating the fixed ring
    laurent: bool

    @property
    def generators(self) -> list[str]:
        gens = [f"e{k}(u)" for k in range(1, self.r + 1)]
        if self.laurent and self.r:
            gens.append(f"e{self.r}(u)^-1")
        return gens

    def to_json(self) -> dict:
        return {
            "node": self.node + 1,
            "folded_node": self.orbit + 1,
            "r": self.r,
            "isotropy_order": self.isotropy,
            "u": f"t^{self.step}",
            "fixed_ring": f"k[t^{self.step}, t^-{self.step}]" if self.laurent else f"k[t^{self.step}]",
            "presentation": self.generators if self.r else ["1"],
        }


@dataclass(frozen=True)
class SymAlgebraDescriptor:
    weight: tuple
    factors: tuple[SymFactor, ...]
    zero: bool = False

    @property
    def is_base_field(self) -> bool:
        return not self.zero and all(f.r == 0 for f in self.factors)

    def to_json(self) -> dict:
        return {
            "lambda": list(self.weight),
            "zero": self.zero,
            "base_field": self.is_base_field,
            "factors": [f.to_json() for f in self.factors],
        }


def build_descriptor(lam: Sequence[int], fd: FoldedDatum, ring: GammaRing) -> SymAlgebraDescriptor:
    """The tensor factors ``S^{r_j}(A^{Gamma_j})`` for the folded weight ``lam``.

    ``r_j = lam_k / kappa_k``; a weight that is not a restriction gives the
    zero algebra.
    """
    lam = tuple(int(a) for a in lam)
    if not fd.folded.is_dominant(lam):
        raise ValueError("weight is not dominant")
    factors = []
    zero = not fd.is_restriction(lam)
    for k, orb in enumerate(fd.orbits):
        iso = fd.isotropy_order(k)
        r = 0 if zero else lam[k] // fd.kappa[k]
        factors.append(SymFactor(orb[0], k, r, iso, iso, ring.laurent))
    return SymAlgebraDescriptor(lam, tuple(factors), zero)


# ---------------------------------------------------------------------------
# rational points


def isotropy_orbit(ring: GammaRing, fd: FoldedDatum, k: int, x) -> list:
    """The ``Gamma_j``-orbit of the point x for the folded node k."""
    stride = len(fd.orbits[k])
    return [ring.move(x, stride * s) for s in range(fd.isotropy_order(k))]


def canonical_point(ring: GammaRing, fd: FoldedDatum, k: int, x):
    """Representative of the point of ``maxSpec A^{Gamma_j}`` below x."""
    return min(isotropy_orbit(ring, fd, k, ring.point(x)), key=ring.point_key)


@dataclass(frozen=True)
class MaxSpecPoint:
    """Per folded node, a sorted tuple of ``Gamma_j``-orbit representatives."""

    tuples: tuple[tuple, ...]

    def to_json(self, field) -> list:
        return [[field.encode(x) for x in tup] for tup in self.tuples]


def make_maxspec(ring: GammaRing, fd: FoldedDatum, tuples: Sequence[Sequence]) -> MaxSpecPoint:
    """Canonicalize raw point values into a ``MaxSpecPoint``."""
    if len(tuples) != len(fd.orbits):
        raise ValueError("one tuple per folded node is required")
    out = []
    for k, tup in enumerate(tuples):
        pts = [canonical_point(ring, fd, k, x) for x in tup]
        out.append(tuple(sorted(pts, key=ring.point_key)))
    return MaxSpecPoint(tuple(out))


def maxspec_weight(mspec: MaxSpecPoint, fd: FoldedDatum) -> tuple:
    return tuple(len(tup) * kap for tup, kap in zip(mspec.tuples, fd.kappa))


def maxspec_to_psi(mspec: MaxSpecPoint, fd: FoldedDatum, ring: GammaRing) -> WeightFunction:
    """``psi(y) = sum of omega_{gamma j}`` over the tuple entries x with y in
    the ``Gamma_j``-orbit of ``gamma x``."""
    rank = fd.algebra.rank
    values: dict = {}
    for k, tup in enumerate(mspec.tuples):
        node = fd.orbits[k][0]
        for x in tup:
            target = node
            for s in range(len(fd.orbits[k])):
                for y in isotropy_orbit(ring, fd, k, ring.move(x, s)):
                    w = values.setdefault(y, [0] * rank)
                    w[target] += 1
                target = fd.sigma.perm[target]
    return WeightFunction(ring, values, rank)


def psi_to_maxspec(psi: WeightFunction, fd: FoldedDatum, lam: Sequence[int] | None = None) -> MaxSpecPoint:
    """Inverse of ``maxspec_to_psi`` on equivariant weight functions."""
    ring = psi.ring
    if not psi.is_equivariant(fd.sigma):
        raise ValueError("weight function is not equivariant")
    tuples = []
    for k, orb in enumerate(fd.orbits):
        node = orb[0]
        seen: set = set()
        entries: list = []
        for x in psi.support:
            rep = canonical_point(ring, fd, k, x)
            if rep in seen:
                continue
            seen.add(rep)
            entries.extend([rep] * psi[x][node])
        tuples.append(tuple(sorted(entries, key=ring.point_key)))
    out = MaxSpecPoint(tuple(tuples))
    total = maxspec_weight(out, fd)
    if total != fd.restrict_weight(psi.total_weight()):
        raise ValueError("weight function has values outside the orbit representatives' span")
    if lam is not None and total != tuple(lam):
        raise ValueError("total weight differs from lambda")
    return out


# ---------------------------------------------------------------------------
# evaluation compatibility


def tau_eval(mspec: MaxSpecPoint, fd: FoldedDatum, ring: GammaRing, k: int, a: Mapping, check: bool = True):
    """``sum over the tuple for node k of a(point)``, the evaluation of the
    symmetrized element ``sym(a)`` at ``mspec``.

    With ``check`` the value is compared with the evaluation character of
    the corresponding weight function on ``bar(h_k ⊗ a)`` inside a truncated
    algebra, computed independently.
    """
    if not ring.is_fixed(a, fd.isotropy_order(k)):
        raise ValueError("ring element is not invariant under the isotropy subgroup")
    value = sum((ring.evaluate(a, x) for x in mspec.tuples[k]), ring.field.zero)
    if check:
        psi = maxspec_to_psi(mspec, fd, ring)
        if psi.points:
            L = TruncatedEMA(fd, RingQuotient(ring, psi.points, 1, "local"))
            chi = highest_weight_character(L, psi)
            other = chi(bar_element(L, "h", k, a))
        else:
            other = ring.field.zero
        if other != value:
            raise AssertionError("symmetrized evaluation differs from the evaluation character")
    return value


# ---------------------------------------------------------------------------
# symmetric Laurent polynomials


def _poly_mul(p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(x + y for x, y in zip(a, b))
            v = out.get(key, 0) + ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def elementary(l: int, m: int) -> dict:
    """The l-th elementary symmetric polynomial in m variables."""
    out = {}
    for combo in itertools.combinations(range(m), l):
        exps = [0] * m
        for i in combo:
            exps[i] = 1
        out[tuple(exps)] = _ONE
    return out


def is_symmetric(f: Mapping) -> bool:
    for key, c in f.items():
        for i in range(len(key) - 1):
            swapped = key[:i] + (key[i + 1], key[i]) + key[i + 2:]
            if f.get(swapped) != c:
                return False
    return True


class _Elementary:
    """Expansions of products of elementary polynomials, with cached powers."""

    def __init__(self, m: int):
        self.m = m
        self.e = [None] + [elementary(l, m) for l in range(1, m + 1)]
        self._powers: dict = {}

    def power(self, l: int, k: int) -> dict:
        key = (l, k)
        if key not in self._powers:
            if k == 0:
                self._powers[key] = {(0,) * self.m: _ONE}
            else:
                self._powers[key] = _poly_mul(self.power(l, k - 1), self.e[l])
        return self._powers[key]

    def monomial(self, exps: Sequence[int]) -> dict:
        """``prod e_l^{exps[l-1]}``; the last exponent may be negative."""
        m = self.m
        shift = min(exps[-1], 0)
        out = {(shift,) * m: _ONE}
        for l, k in enumerate(exps, start=1):
            k = k - shift if l == m else k
            if k:
                out = _poly_mul(out, self.power(l, k))
        return out


def expand_elementary(p: Mapping[tuple, object], m: int) -> dict:
    """Expand a polynomial in ``e_1..e_m, 1/e_m`` into the variables."""
    basis = _Elementary(m)
    out: dict = {}
    for exps, c in p.items():
        add_scaled(out, c, basis.monomial(exps))
    return out


def sym_laurent_rewrite(f: Mapping[tuple, object]) -> dict:
    """Write a symmetric Laurent polynomial in ``e_1..e_m`` and ``1/e_m``.

    Keys of ``f`` are exponent tuples of length m.  The result maps exponent
    tuples ``(k_1..k_m)`` of the elementary polynomials to coefficients;
    only ``k_m`` may be negative.
    """
    f = {k: c for k, c in f.items() if c}
    if not f:
        return {}
    m = len(next(iter(f)))
    if not is_symmetric(f):
        raise ValueError("polynomial is not symmetric")
    if m == 0:
        return dict(f)
    shift = max(0, -min(min(k) for k in f))
    g = {tuple(a + shift for a in k): c for k, c in f.items()}
    basis = _Elementary(m)
    out: dict = {}
    while g:
        lead = max(g)
        c = g[lead]
        exps = tuple(lead[i] - lead[i + 1] for i in range(m - 1)) + (lead[-1],)
        out[exps] = out.get(exps, 0) + c
        add_scaled(g, -c, basis.monomial(exps))
    return {k[:-1] + (k[-1] - shift,): c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# coinvariants of symmetric powers


@dataclass(frozen=True)
class CoinvariantPresentation:
    """``(S^n A)_Gamma`` for ``A = k[t, 1/t]`` and Gamma of order m acting by
    ``t -> zeta t``: a Laurent ring in the ``e_l`` with ``m | l``."""

    n: int
    m: int
    generators: tuple[int, ...]  # indices l of the generators e_l
    inverted: int | None
    zero: bool = False

    @property
    def r(self) -> int:
        return self.n // self.m

    def graded_dimension(self, degree: int) -> int:
        """Dimension in t-degree ``degree`` of the polynomial part ``k[e_l]``."""
        if self.zero:
            return 0
        return _count_partitions(degree, self.generators)

    def to_json(self) -> dict:
        if self.zero:
            return {"n": self.n, "m": self.m, "zero": True, "generators": []}
        gens = [f"e{l}" for l in self.generators]
        if self.inverted is not None:
            gens.append(f"e{self.inverted}^-1")
        return {"n": self.n, "m": self.m, "zero": False, "generators": gens}


def coinvariants_laurent(m: int, r: int | None = None, n: int | None = None) -> CoinvariantPresentation:
    """Presentation of ``(S^n k[t, 1/t])_Gamma`` with ``n = r m``.

    When m does not divide n the top elementary polynomial is both a unit and
    a non-invariant, so the coinvariant algebra is zero.
    """
    if (r is None) == (n is None):
        raise ValueError("give exactly one of r and n")
    if n is None:
        n = r * m
    if n % m:
        return CoinvariantPresentation(n, m, (), None, zero=True)
    gens = tuple(range(m, n + 1, m))
    return CoinvariantPresentation(n, m, gens, n if n else None)


def _count_partitions(total: int, parts: Sequence[int]) -> int:
    """Number of multisets from ``parts`` summing to ``total``."""
    ways = [1] + [0] * max(total, 0)
    for p in parts:
        for s in range(p, total + 1):
            ways[s] += ways[s - p]
    return ways[total] if total >= 0 else 0


def _partitions(d: int, max_parts: int) -> list[tuple]:
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            out.append(tuple(acc) + (0,) * (max_parts - len(acc)))
            return
        if len(acc) == max_parts:
            return
        for p in range(min(rem, cap), 0, -1):
            rec(rem - p, p, acc + [p])

    rec(d, d, [])
    return out


def _distinct_permutations(seq: tuple) -> set:
    return set(itertools.permutations(seq))


def _monomial_product_coords(mu: tuple, nu: tuple, lambdas: Sequence[tuple]) -> dict:
    """``m_mu * m_nu`` in the monomial symmetric basis indexed by ``lambdas``."""
    target_nu = Counter(nu)
    perms = _distinct_permutations(mu)
    out = {}
    for lam in lambdas:
        count = 0
        for alpha in perms:
            beta = [a - b for a, b in zip(lam, alpha)]
            if min(beta) >= 0 and Counter(beta) == target_nu:
                count += 1
        if count:
            out[lam] = mpq(count)
    return out


def _coinvariant_ideal(n: int, m: int, degree: int) -> tuple[list, Subspace]:
    """The degree-``degree`` part of the coinvariant ideal of ``S^n k[t]``.

    Symmetric polynomials in n variables are handled in the monomial
    symmetric basis.  The ideal is generated by the homogeneous pieces whose
    degree is not a multiple of m, so in a fixed degree it is spanned by
    products of such a piece with an arbitrary homogeneous piece.
    """
    lambdas = _partitions(degree, n)
    ideal = Subspace()
    for d1 in range(1, degree + 1):
        if d1 % m == 0:
            continue
        for mu in _partitions(d1, n):
            for nu in _partitions(degree - d1, n):
                ideal.add(_monomial_product_coords(mu, nu, lambdas))
    return lambdas, ideal


def coinvariant_dimension_bruteforce(n: int, m: int, degree: int) -> int:
    """Dimension of ``(S^n k[t])_Gamma`` in t-degree ``degree``."""
    lambdas, ideal = _coinvariant_ideal(n, m, degree)
    return len(lambdas) - len(ideal)


def symmetric_power_dimension_bruteforce(r: int, m: int, degree: int) -> int:
    """Dimension of ``S^r(k[u])`` with ``u = t^m`` in t-degree ``degree``,
    counted over multisets of r exponents."""
    if degree % m:
        return 0
    target = degree // m
    return sum(1 for c in itertools.combinations_with_replacement(range(target + 1), r) if sum(c) == target)


def graded_dimension_table(r: int, m: int, bound: int) -> list[dict]:
    """Per degree up to ``bound``: brute-force coinvariants, brute-force
    symmetric power of the fixed ring, and the presentation count."""
    pres = coinvariants_laurent(m, r=r)
    rows = []
    for d in range(bound + 1):
        rows.append({
            "degree": d,
            "coinvariants": coinvariant_dimension_bruteforce(r * m, m, d),
            "fixed_symmetric_power": symmetric_power_dimension_bruteforce(r, m, d),
            "presentation": pres.graded_dimension(d),
        })
    return rows


def graded_dimensions_agree(r: int, m: int, bound: int) -> bool:
    return all(
        row["coinvariants"] == row["fixed_symmetric_power"] == row["presentation"]
        for row in graded_dimension_table(r, m, bound)
    )


def top_elementary_in_ideal(n: int, m: int) -> bool:
    """Whether ``e_n`` lies in the coinvariant ideal of ``S^n k[t]``.

    ``e_n`` is a unit after inverting it, so a positive answer means the
    Laurent coinvariant algebra is zero.
    """
    _, ideal = _coinvariant_ideal(n, m, n)
    top = {(1,) * n: _ONE}
    return not ideal.reduce(top)


def random_maxspec(rng, ring: GammaRing, fd: FoldedDatum, lam: Sequence[int], spread: int = 6) -> MaxSpecPoint:
    """A random point of ``maxSpec`` for the weight ``lam`` using small integer
    coordinates; repeats are allowed."""
    desc = build_descriptor(lam, fd, ring)
    tuples = []
    for f in desc.factors:
        pts = []
        for _ in range(f.r):
            v = 0
            while v == 0:
                v = rng.randint(-spread, spread)
            pts.append(v)
        tuples.append(pts)
    return make_maxspec(ring, fd, tuples)
