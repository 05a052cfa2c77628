"""Coordinate rings k[t] and k[t, 1/t] with a cyclic scaling action.

The generator of the cyclic group acts on functions by ``t -> zeta * t`` and
on points by ``x -> x / zeta``, so that ``(g.a)(x) = a(g^{-1}.x)``.  The
character grading puts ``t**e`` in degree ``e mod m``.

Polynomials are dicts ``{exponent: coefficient}`` (negative exponents are
allowed for Laurent rings).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .linalg import add_scaled
from .scalars import Field

Poly = dict


# ---------------------------------------------------------------------------
# univariate polynomial helpers


def poly_clean(p: Mapping) -> Poly:
    return {e: c for e, c in p.items() if c}


def poly_mul(p: Mapping, q: Mapping) -> Poly:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            k = e1 + e2
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def poly_add(p: Mapping, q: Mapping, coef=1) -> Poly:
    out = dict(p)
    add_scaled(out, coef, q)
    return out


def poly_pow(p: Mapping, k: int, one) -> Poly:
    out: Poly = {0: one}
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_degree(p: Mapping) -> int:
    return max(p) if p else -1


def poly_divmod(p: Mapping, d: Mapping) -> tuple[Poly, Poly]:
    """Division with remainder for polynomials with nonnegative exponents."""
    p = dict(p)
    dd = poly_degree(d)
    lead = d[dd]
    q: Poly = {}
    while p and poly_degree(p) >= dd:
        top = poly_degree(p)
        c = p[top] / lead
        q[top - dd] = c
        add_scaled(p, -c, {e + top - dd: v for e, v in d.items()})
    return q, p


def poly_inverse_mod(a: Mapping, modulus: Mapping, one) -> Poly:
    """``b`` with ``a*b = 1`` modulo ``modulus`` (extended Euclid)."""
    r0, r1 = dict(modulus), poly_divmod(a, modulus)[1]
    s0, s1 = {}, {0: one}
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, poly_mul(q, s1), -1)
    if poly_degree(r0) != 0:
        raise ZeroDivisionError("not invertible modulo the given polynomial")
    c = one / r0[0]
    return poly_divmod({e: v * c for e, v in s0.items()}, modulus)[1]


def poly_eval(p: Mapping, x):
    total = 0
    for e, c in p.items():
        total = total + c * (x ** e)
    return total


# ---------------------------------------------------------------------------
# rings and points


@dataclass(frozen=True)
class GammaRing:
    """``k[t, 1/t]`` (``laurent=True``) or ``k[t]`` with ``t -> zeta t``,
    ``zeta`` a primitive m-th root of unity in ``field``."""

    field: Field
    order: int = 1
    laurent: bool = True

    @cached_property
    def zeta(self):
        return self.field.root_of_unity(self.order)

    @property
    def generator_names(self) -> tuple[str, ...]:
        return ("t", "t^-1") if self.laurent else ("t",)

    def act(self, f: Mapping, k: int = 1) -> Poly:
        """Apply the k-th power of the generator: ``f(t) -> f(zeta^k t)``."""
        z = self.zeta
        return {e: c * z ** (k * e % self.order) for e, c in f.items()}

    def degree_of(self, exponent: int) -> int:
        return exponent % self.order

    def xi_component(self, f: Mapping, xi: int) -> Poly:
        return {e: c for e, c in f.items() if e % self.order == xi % self.order}

    def fixed_ring_generators(self) -> list[Poly]:
        one = self.field.one
        m = self.order
        gens = [{m: one}]
        if self.laurent:
            gens.append({-m: one})
        return gens

    def is_fixed(self, f: Mapping, subgroup_order: int | None = None) -> bool:
        """Invariance under the subgroup of the given order (default: all of Gamma)."""
        sub = self.order if subgroup_order is None else subgroup_order
        step = self.order // sub
        return poly_clean(self.act(f, step)) == poly_clean(f)

    # points -------------------------------------------------------------
    def point(self, value):
        x = self.field(value)
        if self.laurent and not x:
            raise ValueError("0 is not a point of the torus")
        return x

    def move(self, x, k: int = 1):
        """The k-th power of the generator applied to a point: ``x / zeta^k``."""
        return x * self.zeta ** (-k % self.order)

    def orbit(self, x) -> list:
        x = self.point(x)
        pts = [x]
        for k in range(1, self.order):
            y = self.move(x, k)
            if y == x:
                raise ValueError(f"point {self.field.encode(x)} has a nontrivial stabiliser")
            pts.append(y)
        return pts

    def point_key(self, x) -> tuple:
        return self.field.sort_key(x)

    def orbit_representative(self, x):
        return min(self.orbit(x), key=self.point_key)

    def evaluate(self, f: Mapping, x):
        return poly_eval(f, x)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generator_names),
            "order": self.order,
            "field": self.field.name,
            "action": "t -> zeta*t",
        }


def orbit(ring: GammaRing, p) -> list:
    return ring.orbit(p)


def xi_component(ring: GammaRing, f: Mapping, xi: int) -> Poly:
    return ring.xi_component(f, xi)


def fixed_ring_generators(ring: GammaRing) -> list[Poly]:
    return ring.fixed_ring_generators()


# ---------------------------------------------------------------------------
# weight functions


class WeightFunction:
    """A finitely supported map from points to g-weights.

    The declared points (possibly carrying the zero weight) define the
    truncation ideal; ``support`` lists the points with nonzero weight.
    """

    def __init__(self, ring: GammaRing, values: Mapping, rank: int):
        self.ring = ring
        self.rank = rank
        items = []
        for x, w in values.items():
            if any(mpq(a).denominator != 1 for a in w):
                raise ValueError("weights must be integral")
            w = tuple(int(a) for a in w)
            if len(w) != rank:
                raise ValueError("weight has the wrong length")
            items.append((ring.point(x), w))
        items.sort(key=lambda p: ring.point_key(p[0]))
        self.items: tuple = tuple(items)
        self._map = dict(items)

    def __getitem__(self, x):
        return self._map.get(x, (0,) * self.rank)

    @property
    def points(self) -> list:
        return [x for x, _ in self.items]

    @property
    def support(self) -> list:
        return [x for x, w in self.items if any(w)]

    def __eq__(self, other):
        return isinstance(other, WeightFunction) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def equivariant_completion(self, sigma) -> "WeightFunction":
        """Extend by ``psi(g.x) = sigma(psi(x))`` over each orbit."""
        out: dict = {}
        for x, w in self.items:
            cur = w
            for k in range(self.ring.order):
                y = self.ring.move(x, k)
                if y in out and out[y] != cur:
                    raise ValueError("given values are not equivariant")
                out[y] = cur
                cur = sigma.apply_weight(cur)
        return WeightFunction(self.ring, out, self.rank)

    def is_equivariant(self, sigma) -> bool:
        try:
            return self.equivariant_completion(sigma) == self
        except ValueError:
            return False

    def orbit_section(self) -> list:
        """One point per orbit: the smallest in the canonical order."""
        seen, section = set(), []
        for x in self.points:
            if x in seen:
                continue
            orb = self.ring.orbit(x)
            seen.update(orb)
            section.append(min(orb, key=self.ring.point_key))
        return section

    def orbits(self) -> list[list]:
        return [self.ring.orbit(x) for x in self.orbit_section()]

    def total_weight(self, section: Iterable | None = None) -> tuple:
        pts = self.orbit_section() if section is None else list(section)
        total = [0] * self.rank
        for x in pts:
            for i, a in enumerate(self[x]):
                total[i] += a
        return tuple(total)

    def restricted_to(self, points: Iterable) -> "WeightFunction":
        pts = set(points)
        return WeightFunction(self.ring, {x: w for x, w in self.items if x in pts}, self.rank)

    def to_json(self) -> dict:
        enc = self.ring.field.encode
        return {enc(x): list(w) for x, w in self.items}


# ---------------------------------------------------------------------------
# quotients A / J^N


class RingQuotient:
    """``A / prod_x (t - x)^N`` over a Gamma-stable finite point set.

    ``basis="monomial"`` uses ``t^0 .. t^(d-1)``.  ``basis="orbit"`` uses
    ``e_j t^k`` where ``e_j`` are the idempotents splitting the quotient
    along the orbits; each basis element is homogeneous and lives on one
    orbit ("slot").  ``basis="local"`` uses ``e_j (t^m - x_j^m)^k t^r`` with
    ``x_j`` a point of orbit j; its structure constants stay small and the
    elements with ``k >= 1`` vanish at every point.
    """

    def __init__(self, ring: GammaRing, points: Sequence, N: int, basis: str = "monomial"):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.ring = ring
        self.field = ring.field
        self.N = N
        one = self.field.one
        pts = [ring.point(x) for x in points]
        stable = set()
        for x in pts:
            stable.update(ring.orbit(x))
        if stable != set(pts) or len(set(pts)) != len(pts):
            raise ValueError("point set is not Gamma-stable")
        groups: list[list] = []
        seen: set = set()
        for x in sorted(pts, key=ring.point_key):
            if x in seen:
                continue
            orb = ring.orbit(x)
            seen.update(orb)
            groups.append(orb)
        self.orbit_points = groups
        self.points = [x for g in groups for x in g]
        factors = []
        for orb in groups:
            f = {0: one}
            for x in orb:
                f = poly_mul(f, {1: one, 0: -x})
            factors.append(poly_pow(f, N, one))
        modulus: Poly = {0: one}
        for f in factors:
            modulus = poly_mul(modulus, f)
        self.modulus = modulus
        self.dim = poly_degree(modulus)
        if any(e % ring.order for e in modulus):
            raise ValueError("truncation ideal is not Gamma-invariant")
        if ring.laurent and self.dim and not modulus.get(0):
            raise ValueError("0 in the support of a Laurent quotient")
        self.basis_kind = basis
        m = ring.order
        if basis == "monomial" or (basis == "orbit" and len(groups) <= 1):
            self.basis_polys = [{k: one} for k in range(self.dim)]
            self.slot = [0] * self.dim
        elif basis in ("orbit", "local"):
            self.basis_polys, self.slot = [], []
            for j, f in enumerate(factors):
                others = {0: one}
                for i, g in enumerate(factors):
                    if i != j:
                        others = poly_mul(others, g)
                idem = self.reduce(poly_mul(others, poly_inverse_mod(others, f, one)))
                if basis == "orbit":
                    local = [{k: one} for k in range(poly_degree(f))]
                else:
                    # (t^m - x^m)^k t^r: homogeneous, nilpotent for k >= 1
                    shift = {m: one, 0: -groups[j][0] ** m}
                    local = [
                        poly_mul(poly_pow(shift, k, one), {r: one})
                        for k in range(N) for r in range(m)
                    ]
                for p in local:
                    self.basis_polys.append(self.reduce(poly_mul(idem, p)))
                    self.slot.append(j)
        else:
            raise ValueError(f"unknown basis kind {basis!r}")
        self.slots = len(groups) if basis in ("orbit", "local") else 1
        self.degree = [self._degree(p) for p in self.basis_polys]
        self._to_basis = self._change_of_basis()
        self._mul: dict = {}

    @cached_property
    def _t_inverse(self) -> Poly:
        c0 = self.modulus[0]
        q = {e - 1: c for e, c in self.modulus.items() if e > 0}
        return {e: -c / c0 for e, c in q.items()}

    def _degree(self, p: Mapping) -> int:
        degs = {e % self.ring.order for e in p}
        if len(degs) > 1:
            raise AssertionError("basis element is not homogeneous")
        return degs.pop() if degs else 0

    def reduce(self, p: Mapping) -> Poly:
        """Remainder of a (Laurent) polynomial modulo the truncation ideal."""
        if not self.dim:
            return {}
        pos = {e: c for e, c in p.items() if e >= 0}
        neg = {e: c for e, c in p.items() if e < 0}
        if neg:
            if not self.ring.laurent:
                raise ValueError("negative exponent in a polynomial ring")
            power = {0: self.field.one}
            for k in range(1, -min(neg) + 1):
                power = poly_divmod(poly_mul(power, self._t_inverse), self.modulus)[1]
                if -k in neg:
                    add_scaled(pos, neg[-k], power)
        return poly_divmod(pos, self.modulus)[1]

    def _change_of_basis(self):
        from .linalg import solve_in_span
        self._monomial_vectors = [self.reduce(p) for p in self.basis_polys]
        if self.basis_kind == "monomial" or (self.basis_kind == "orbit" and self.slots <= 1):
            return None
        inverse = []
        for k in range(self.dim):
            coeffs = solve_in_span({k: self.field.one}, self._monomial_vectors)
            if coeffs is None:
                raise AssertionError("orbit basis is not a basis")
            inverse.append({i: c for i, c in enumerate(coeffs) if c})
        return inverse

    def coords(self, p: Mapping) -> dict:
        """Coordinates of ``p mod J^N`` in the chosen basis."""
        r = self.reduce(p)
        if self._to_basis is None:
            return r
        out: dict = {}
        for e, c in r.items():
            add_scaled(out, c, self._to_basis[e])
        return out

    def basis_poly(self, k: int) -> Poly:
        return self.basis_polys[k]

    def mul(self, i: int, j: int) -> dict:
        key = (i, j) if i <= j else (j, i)
        out = self._mul.get(key)
        if out is None:
            out = self.coords(poly_mul(self.basis_polys[i], self.basis_polys[j]))
            self._mul[key] = out
        return out

    def evaluate(self, k: int, x):
        return poly_eval(self.basis_polys[k], x)

    def to_json(self) -> dict:
        enc = self.field.encode
        return {
            "dimension": self.dim,
            "N": self.N,
            "points": [enc(x) for x in self.points],
            "modulus": {str(e): enc(c) for e, c in sorted(self.modulus.items())},
        }


def product_ideal(psi: WeightFunction, N: int, basis: str = "monomial") -> RingQuotient:
    """``A / J(psi)^N`` with ``J(psi)`` the product of the point ideals of
    the declared points of ``psi``."""
    return RingQuotient(psi.ring, psi.points, N, basis)


def section_quotient(psi: WeightFunction, N: int) -> RingQuotient:
    """``A / J(psi_x)^N`` for an orbit section, with trivial group action."""
    plain = GammaRing(psi.ring.field, 1, psi.ring.laurent)
    return RingQuotient(plain, psi.orbit_section(), N)
