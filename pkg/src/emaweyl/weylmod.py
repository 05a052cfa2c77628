"""Local Weyl modules, simple quotients and related constructions.

A module is built inside the induced module ``U(L) ⊗_{U(b)} k_chi`` over a
truncated equivariant map algebra ``L``.  PBW monomials in the lowering
basis elements (sorted index tuples) span it; the relation submodule
generated by the integrability vectors is computed exactly up to a depth
window, and the quotient is read off from a reduced echelon form.

Depth of a vector is the folded height of ``lambda - weight``.  The
module is integrable for the fixed-point algebra, so its weights lie in the
Weyl-group hull of ``lambda`` and nothing survives beyond the depth ``D`` of
the lowest weight.  ``check_vanishing=True`` confirms this directly by
extending the relation window one lowering step further.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .ema import TruncatedEMA, bar_element
from .gammaring import GammaRing, RingQuotient, WeightFunction, poly_mul, poly_pow, product_ideal
from .linalg import Subspace, add_scaled, kernel, scaled
from .liecore import DiagramAutomorphism, FoldedDatum, fold

_ONE = mpq(1)


# ---------------------------------------------------------------------------
# characters of the Cartan part


class Character:
    """A linear functional on the Cartan part ``(h ⊗ A)^Gamma`` of ``L``,
    stored by its values on the Cartan basis elements."""

    def __init__(self, L: TruncatedEMA, values: Mapping[int, object]):
        self.algebra = L
        self.values = {i: v for i, v in values.items() if v}

    def __call__(self, x: Mapping) -> object:
        total = 0
        for i, c in x.items():
            if self.algebra.part[i] != "cartan":
                raise ValueError("character evaluated outside the Cartan part")
            v = self.values.get(i)
            if v:
                total = total + c * v
        return total

    def __eq__(self, other):
        return isinstance(other, Character) and other.algebra is self.algebra and other.values == self.values

    @classmethod
    def from_weights(cls, L: TruncatedEMA, weights: Mapping, section: Sequence) -> "Character":
        """``h ⊗ a -> sum over the section of weights[x](h) * a(x)``.

        ``weights`` maps points to g-weights in fundamental-weight
        coordinates; entries may be rational.
        """
        alg = L.algebra
        h0 = alg.h_indices[0]
        values: dict = {}
        for i in range(L.dim):
            if L.part[i] != "cartan":
                continue
            total = 0
            tensor = L.to_tensor({i: _ONE})
            for x in section:
                w = weights[x]
                for (b, e), c in tensor.items():
                    coef = w[b - h0]
                    if coef:
                        total = total + c * coef * x ** e
            if total:
                values[i] = total
        return cls(L, values)


def highest_weight_character(L: TruncatedEMA, psi: WeightFunction, section: Sequence | None = None) -> Character:
    """The evaluation character of ``psi`` on the Cartan part of ``L``."""
    pts = psi.orbit_section() if section is None else list(section)
    return Character.from_weights(L, {x: psi[x] for x in pts}, pts)


# ---------------------------------------------------------------------------
# modules


def _mat_vec(column: Mapping[int, Mapping], v: Mapping) -> dict:
    out: dict = {}
    for j, c in v.items():
        col = column.get(j)
        if col:
            add_scaled(out, c, col)
    return out


@dataclass
class WeightModule:
    """A finite-dimensional weight module over a truncated map algebra.

    ``action[x][j]`` is the image of basis vector j under basis element x of
    the algebra, as a sparse column.
    """

    algebra: TruncatedEMA
    weights: list
    labels: list
    action: list
    cyclic: dict
    highest_weight: tuple
    psi: WeightFunction | None = None
    flagged_zero: bool = False
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def act(self, x: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, c in x.items():
            add_scaled(out, c, _mat_vec(self.action[i], v))
        return out

    def character(self) -> dict:
        return dict(sorted(Counter(self.weights).items()))

    def weight_space(self, mu) -> list[int]:
        mu = tuple(mu)
        return [j for j, w in enumerate(self.weights) if w == mu]

    # invariants ----------------------------------------------------------
    def check_representation(self) -> bool:
        L = self.algebra
        for a in range(L.dim):
            for b in range(a + 1, L.dim):
                br = L.table.get((a, b), {})
                for j in range(self.dim):
                    v = {j: _ONE}
                    lhs = _mat_vec(self.action[a], _mat_vec(self.action[b], v))
                    add_scaled(lhs, -1, _mat_vec(self.action[b], _mat_vec(self.action[a], v)))
                    if lhs != self.act(br, v):
                        return False
        return True

    def check_weights(self) -> bool:
        L = self.algebra
        for x in range(L.dim):
            for j, col in self.action[x].items():
                target = tuple(a + b for a, b in zip(self.weights[j], L.weights[x]))
                if any(self.weights[i] != target for i in col):
                    return False
        return True

    def check_highest_weight(self, chi: Character | None = None) -> bool:
        """The lambda-space is spanned by the cyclic vector, which the
        raising part kills and the Cartan part scales by ``chi``."""
        if not self.dim:
            return True
        L = self.algebra
        if self.weight_space(self.highest_weight) != list(self.cyclic):
            return False
        for x in range(L.dim):
            image = self.act({x: _ONE}, self.cyclic)
            if L.part[x] == "upper" and image:
                return False
            if L.part[x] == "cartan" and chi is not None:
                if image != scaled(chi({x: _ONE}), self.cyclic):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "dimension": self.dim,
            "highest_weight": [int(a) for a in self.highest_weight],
            "character": [[[int(a) for a in w], m] for w, m in self.character().items()],
            "zero_module": self.dim == 0,
        }


def zero_module(L: TruncatedEMA, lam, psi=None, flagged: bool = False, **diagnostics) -> WeightModule:
    return WeightModule(L, [], [], [{} for _ in range(L.dim)], {}, tuple(lam), psi, flagged, diagnostics)


# ---------------------------------------------------------------------------
# the induced module and PBW straightening


class _Induced:
    """Action of ``L`` on ``U(n^-) ⊗ k_chi`` in the ordered PBW basis."""

    def __init__(self, L: TruncatedEMA, chi: Character):
        self.L = L
        self.chi = chi
        self.table = L.table
        self.part = L.part
        self._lower: dict = {}
        self._act: dict = {}

    def lower_mul(self, y: int, mono: tuple) -> dict:
        key = (y, mono)
        hit = self._lower.get(key)
        if hit is not None:
            return hit
        if not mono or y <= mono[0]:
            res = {(y,) + mono: _ONE}
        else:
            first, rest = mono[0], mono[1:]
            res = {}
            for m, c in self.lower_mul(y, rest).items():
                add_scaled(res, c, self.lower_mul(first, m))
            for z, c in self.table.get((y, first), {}).items():
                add_scaled(res, c, self.lower_mul(z, rest))
        self._lower[key] = res
        return res

    def act(self, x: int, mono: tuple) -> dict:
        if self.part[x] == "lower":
            return self.lower_mul(x, mono)
        key = (x, mono)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        if not mono:
            value = self.chi.values.get(x) if self.part[x] == "cartan" else None
            res = {(): value} if value else {}
        else:
            first, rest = mono[0], mono[1:]
            res = {}
            for m, c in self.act(x, rest).items():
                add_scaled(res, c, self.lower_mul(first, m))
            for z, c in self.table.get((x, first), {}).items():
                add_scaled(res, c, self.act(z, rest))
        self._act[key] = res
        return res

    def act_vec(self, x: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, ci in x.items():
            for m, cm in v.items():
                add_scaled(out, ci * cm, self.act(i, m))
        return out


def _generates(L: TruncatedEMA, gens: list[int], part: str) -> bool:
    """Whether ``gens`` generate the span of all basis elements of ``part``."""
    target = sum(1 for p in L.part if p == part)
    span = Subspace()
    frontier = []
    for g in gens:
        if span.add({g: _ONE}) is not None:
            frontier.append({g: _ONE})
    while frontier and len(span) < target:
        new = []
        for u in frontier:
            for g in gens:
                b = L.bracket({g: _ONE}, u)
                if b and span.add(b) is not None:
                    new.append(b)
        frontier = new
    return len(span) == target


# ---------------------------------------------------------------------------
# the closure


def default_depth(fd: FoldedDatum, lam) -> int:
    """Folded height of ``lam - w0 lam``: the depth of the lowest weight."""
    rs = fd.folded
    low = rs.lowest_conjugate(lam)
    return int(rs.height(tuple(a - b for a, b in zip(lam, low))))


def default_truncation(fd: FoldedDatum, psi: WeightFunction) -> int:
    """Truncation exponent from the annihilation bound."""
    if any(k == 2 for k in fd.kappa):
        lam = fd.restrict_weight(psi.total_weight())
        rs = fd.folded
        bound = 2 * rs.pairing(lam, rs.highest_root)
    else:
        rs = fd.algebra.root_system
        bound = rs.pairing(psi.total_weight(), rs.highest_root)
    return max(1, int(bound))


def weyl_closure(
    L: TruncatedEMA,
    lam,
    chi: Character,
    D: int | None = None,
    psi=None,
    check_vanishing: bool = False,
) -> WeightModule:
    """The universal module generated by w with raising part killing w,
    Cartan part acting by ``chi`` and ``(f_i ⊗ 1)^(lam_i + 1) w = 0``.

    Relations are computed exactly up to depth ``D``; vectors deeper than
    ``D`` are dropped.
    """
    fd = L.fd
    lam = tuple(lam)
    if any(mpq(a).denominator != 1 or a < 0 for a in lam):
        raise ValueError("highest weight must be dominant integral for the folded algebra")
    lam = tuple(int(a) for a in lam)
    D = default_depth(fd, lam) if D is None else D
    eng = _Induced(L, chi)
    lowers = [i for i in range(L.dim) if L.part[i] == "lower"]
    uppers = [i for i in range(L.dim) if L.part[i] == "upper"]
    cartan = [i for i in range(L.dim) if L.part[i] == "cartan"]
    depth_of = {i: int(-L.heights[i]) for i in lowers}
    F = [y for y in lowers if depth_of[y] == 1]
    if not _generates(L, F, "lower"):
        F = lowers
    E = [x for x in uppers if L.heights[x] == 1]
    if not _generates(L, E, "upper"):
        E = uppers
    window = D + (max((depth_of[y] for y in F), default=1) if check_vanishing else 0)
    rank_f = len(lam)

    def grade(mono: tuple) -> tuple:
        g = [0] * (L.quotient.slots * rank_f)
        for i in mono:
            off = L.slot[i] * rank_f
            for k, a in enumerate(L.weights[i]):
                g[off + k] += a
        return tuple(g)

    grade_cache: dict = {}

    def grade_of(mono):
        g = grade_cache.get(mono)
        if g is None:
            g = grade_cache[mono] = grade(mono)
        return g

    def depth(mono):
        return sum(depth_of[i] for i in mono)

    def split(v: Mapping) -> list[dict]:
        parts: dict = {}
        for m, c in v.items():
            parts.setdefault(grade_of(m), {})[m] = c
        return list(parts.values())

    # monomials per grade, so that saturated grades can be skipped
    monomials: dict = {}

    def walk(start: int, mono: tuple, d: int) -> None:
        monomials.setdefault(grade_of(mono), []).append(mono)
        for pos in range(start, len(lowers)):
            y = lowers[pos]
            if d + depth_of[y] <= window:
                walk(pos, mono + (y,), d + depth_of[y])

    walk(0, (), 0)

    def insert(store: dict, v: Mapping):
        """Add a homogeneous vector; return the new row or None."""
        g = grade_of(next(iter(v)))
        sub = store.get(g)
        if sub is None:
            sub = store[g] = Subspace()
        elif len(sub) == len(monomials.get(g, ())):
            return None
        return sub.add(v)

    # relations: the Borel closure of the integrability vectors
    closed: dict = {}
    queue: list = []
    one = L.field.one
    for k in range(len(fd.orbits)):
        y = bar_element(L, "f", k, {0: one})
        v = {(): _ONE}
        for _ in range(lam[k] + 1):
            v = eng.act_vec(y, v)
        queue.extend(split(v))
    borel = cartan + E
    while queue:
        v = queue.pop()
        row = insert(closed, v)
        if row is None:
            continue
        for x in borel:
            u = eng.act_vec({x: _ONE}, row)
            if u:
                queue.extend(split(u))

    # relations: close under the lowering generators, depth by depth
    rel: dict = {}
    for sub in closed.values():
        for r in sub.rows.values():
            insert(rel, r)
    by_depth: dict = {}
    for g, sub in rel.items():
        by_depth.setdefault(depth(next(iter(sub.pivots))), set()).add(g)
    for d in range(window):
        for g in sorted(by_depth.get(d, ())):
            rows = list(rel[g].rows.values())
            for y in F:
                if d + depth_of[y] > window:
                    continue
                for r in rows:
                    u = eng.act_vec({y: _ONE}, r)
                    if u and insert(rel, u) is not None:
                        by_depth.setdefault(d + depth_of[y], set()).add(grade_of(next(iter(u))))

    def reduce(v: Mapping) -> dict:
        if not v:
            return {}
        sub = rel.get(grade_of(next(iter(v))))
        return sub.reduce(v) if sub is not None else dict(v)

    if not reduce({(): _ONE}):
        return zero_module(L, lam, psi, depth=D, window=window)

    # standard monomials up to depth D
    standard = [
        m for g, ms in monomials.items() for m in ms
        if depth(m) <= D and (g not in rel or m not in rel[g].rows)
    ]
    standard.sort(key=lambda m: (depth(m), grade_of(m), m))
    index = {m: j for j, m in enumerate(standard)}

    if check_vanishing:
        for m in standard:
            for y in F:
                if depth(m) + depth_of[y] > D and reduce(eng.lower_mul(y, m)):
                    raise ArithmeticError(f"module does not vanish beyond depth {D}")

    action: list = []
    for x in range(L.dim):
        cols: dict = {}
        for j, m in enumerate(standard):
            if L.part[x] == "lower" and depth(m) + depth_of[x] > D:
                continue
            u = reduce(eng.act(x, m))
            if u:
                cols[j] = {index[k]: c for k, c in u.items()}
        action.append(cols)

    weights = []
    for m in standard:
        w = list(lam)
        for i in m:
            for k, a in enumerate(L.weights[i]):
                w[k] += a
        weights.append(tuple(int(a) for a in w))
    labels = [" ".join(f"y{i}" for i in m) + (" w" if m else "w") for m in standard]
    diagnostics = {"depth": D, "window": window, "relations": sum(len(s) for s in rel.values())}
    return WeightModule(L, weights, labels, action, {0: _ONE}, lam, psi, False, diagnostics)


def local_weyl_module(
    fd: FoldedDatum,
    psi: WeightFunction,
    N: int | None = None,
    D: int | None = None,
    check_vanishing: bool = False,
) -> WeightModule:
    """The local Weyl module of an equivariant weight function."""
    if psi.ring.order != fd.sigma.order:
        raise ValueError("ring action and diagram automorphism have different orders")
    if not psi.is_equivariant(fd.sigma):
        raise ValueError("weight function is not equivariant")
    N = default_truncation(fd, psi) if N is None else N
    lam = fd.restrict_weight(psi.total_weight())
    L = TruncatedEMA(fd, product_ideal(psi, N, "local"))
    if not fd.is_restriction(lam):
        return zero_module(L, lam, psi, flagged=True, N=N)
    chi = highest_weight_character(L, psi)
    W = weyl_closure(L, lam, chi, D, psi, check_vanishing)
    W.diagnostics["N"] = N
    return W


def stability_check(fd: FoldedDatum, psi: WeightFunction, N: int | None = None, D: int | None = None) -> bool:
    """Same character after enlarging the truncation by one and the depth by two."""
    N = default_truncation(fd, psi) if N is None else N
    lam = fd.restrict_weight(psi.total_weight())
    D = default_depth(fd, lam) if D is None else D
    base = local_weyl_module(fd, psi, N, D)
    bigger = local_weyl_module(fd, psi, N + 1, D + 2)
    return base.character() == bigger.character()


# ---------------------------------------------------------------------------
# quotients and functors


def quotient_module(W: WeightModule, sub: Subspace) -> WeightModule:
    """``W / S`` for a submodule S given in reduced echelon form."""
    keep = [j for j in range(W.dim) if j not in sub.rows]
    index = {j: k for k, j in enumerate(keep)}
    action = []
    for cols in W.action:
        new: dict = {}
        for k, j in enumerate(keep):
            col = cols.get(j)
            if col:
                r = sub.reduce(col)
                if r:
                    new[k] = {index[i]: c for i, c in r.items()}
        action.append(new)
    cyc = sub.reduce(W.cyclic)
    cyclic = {index[i]: c for i, c in cyc.items()}
    return WeightModule(
        W.algebra, [W.weights[j] for j in keep], [W.labels[j] for j in keep], action,
        cyclic, W.highest_weight, W.psi, False, dict(W.diagnostics),
    )


def maximal_submodule(W: WeightModule) -> Subspace:
    """The greatest subspace with zero highest-weight component stable under
    every action matrix, by iterated intersection of preimages."""
    basis = [{j: _ONE} for j in range(W.dim) if W.weights[j] != W.highest_weight]
    while True:
        sub = Subspace(basis)
        columns = []
        for v in basis:
            col: dict = {}
            for x in range(len(W.action)):
                r = sub.reduce(_mat_vec(W.action[x], v))
                for i, c in r.items():
                    col[(x, i)] = c
            columns.append(col)
        relations = kernel(columns)
        if len(relations) == len(basis):
            return sub
        basis = [
            {k: c for k, c in _combine_rows(basis, rel).items() if c}
            for rel in relations
        ]


def _combine_rows(rows: list, coeffs: Mapping) -> dict:
    out: dict = {}
    for j, c in coeffs.items():
        add_scaled(out, c, rows[j])
    return out


def simple_quotient(W: WeightModule) -> WeightModule:
    """The irreducible quotient of a highest-weight module."""
    if not W.dim:
        return W
    if len(W.weight_space(W.highest_weight)) != 1:
        raise ValueError("highest weight space is not one-dimensional")
    return quotient_module(W, maximal_submodule(W))


def character(W: WeightModule) -> dict:
    return W.character()


def restrict_character(char: Mapping, fd: FoldedDatum) -> dict:
    out: Counter = Counter()
    for w, m in char.items():
        out[tuple(int(a) for a in fd.restrict_weight(w))] += m
    return dict(sorted(out.items()))


def _pullback(W: WeightModule, L: TruncatedEMA) -> list:
    src = W.algebra
    action = []
    for x in range(L.dim):
        image = L.convert({x: _ONE}, src)
        cols: dict = {}
        for i, c in image.items():
            for j, col in W.action[i].items():
                add_scaled(cols.setdefault(j, {}), c, col)
        action.append({j: col for j, col in cols.items() if col})
    return action


def twist_restrict(W: WeightModule, L: TruncatedEMA) -> WeightModule:
    """Restrict a module over ``g ⊗ A/J(psi_x)^N`` along the untwisting map
    of ``L``; the untwisted points must form part of an orbit section of
    ``L``'s points."""
    U = W.algebra
    ring = L.ring
    upts = list(U.quotient.points)
    orbits = set()
    for x in upts:
        if x not in L.quotient.points:
            raise ValueError("untwisted point is not a point of the twisted truncation")
        orbits.add(ring.orbit_representative(x))
    if len(orbits) != len(upts):
        raise ValueError("untwisted points are not an orbit section")
    if L.quotient.N < U.quotient.N:
        raise ValueError("twisted truncation is coarser than the untwisted one")
    fd = L.fd
    weights = [tuple(int(a) for a in fd.restrict_weight(w)) for w in W.weights]
    lam = tuple(int(a) for a in fd.restrict_weight(W.highest_weight))
    return WeightModule(L, weights, list(W.labels), _pullback(W, L), dict(W.cyclic), lam, None, False, {})


def untwisted_module(fd: FoldedDatum, psi: WeightFunction, N: int | None = None) -> WeightModule:
    """The local Weyl module of ``psi`` restricted to its orbit section, over
    ``g ⊗ A`` with trivial group action."""
    ident = DiagramAutomorphism.identity(fd.algebra.rank)
    ufd = fold(fd.algebra, ident, fd.field)
    plain = GammaRing(psi.ring.field, 1, psi.ring.laurent)
    section = psi.orbit_section()
    upsi = WeightFunction(plain, {x: psi[x] for x in section}, psi.rank)
    return local_weyl_module(ufd, upsi, N)


def twisting_comparison(fd: FoldedDatum, psi: WeightFunction, N: int | None = None) -> tuple[dict, dict]:
    """Character of the twisted module and the restricted character of its
    untwisted counterpart."""
    W = local_weyl_module(fd, psi, N)
    U = untwisted_module(fd, psi, W.diagnostics.get("N", N))
    return W.character(), restrict_character(U.character(), fd)


def common_algebra(L1: TruncatedEMA, L2: TruncatedEMA) -> TruncatedEMA:
    """The truncation over the union of both point sets."""
    if L1.fd is not L2.fd and L1.fd.sigma.perm != L2.fd.sigma.perm:
        raise ValueError("modules over different algebras")
    pts = list(dict.fromkeys(list(L1.quotient.points) + list(L2.quotient.points)))
    N = max(L1.quotient.N, L2.quotient.N)
    return TruncatedEMA(L1.fd, RingQuotient(L1.ring, pts, N, "local"))


def tensor(W1: WeightModule, W2: WeightModule, L: TruncatedEMA | None = None) -> WeightModule:
    """Tensor product with the diagonal action, over a common truncation."""
    if L is None:
        L = common_algebra(W1.algebra, W2.algebra)
    a1, a2 = _pullback(W1, L), _pullback(W2, L)
    n2 = W2.dim
    action = []
    for x in range(L.dim):
        cols: dict = {}
        for i in range(W1.dim):
            for j in range(n2):
                col: dict = {}
                for k, c in a1[x].get(i, {}).items():
                    col[k * n2 + j] = c
                for k, c in a2[x].get(j, {}).items():
                    add_scaled(col, c, {i * n2 + k: _ONE})
                if col:
                    cols[i * n2 + j] = col
        action.append(cols)
    weights = [tuple(a + b for a, b in zip(u, v)) for u in W1.weights for v in W2.weights]
    labels = [f"({p})⊗({q})" for p in W1.labels for q in W2.labels]
    cyclic: dict = {}
    for i, c in W1.cyclic.items():
        for j, d in W2.cyclic.items():
            cyclic[i * n2 + j] = c * d
    lam = tuple(a + b for a, b in zip(W1.highest_weight, W2.highest_weight))
    return WeightModule(L, weights, labels, action, cyclic, lam, None, False, {})


def direct_sum(modules: Sequence[WeightModule]) -> WeightModule:
    L = modules[0].algebra
    weights, labels, cyclic, offsets = [], [], {}, []
    for W in modules:
        if W.algebra is not L:
            raise ValueError("summands over different algebras")
        offsets.append(len(weights))
        weights.extend(W.weights)
        labels.extend(W.labels)
    action = []
    for x in range(L.dim):
        cols: dict = {}
        for W, off in zip(modules, offsets):
            for j, col in W.action[x].items():
                cols[off + j] = {off + i: c for i, c in col.items()}
        action.append(cols)
    for W, off in zip(modules, offsets):
        for j, c in W.cyclic.items():
            cyclic[off + j] = c
    lam = modules[0].highest_weight
    return WeightModule(L, weights, labels, action, cyclic, lam, None, False, {})


def weyl_functor(L: TruncatedEMA, lam, characters: Sequence[Character], D: int | None = None) -> WeightModule:
    """The Weyl functor on a direct sum of one-dimensional modules, each
    given by a character of the Cartan part."""
    chars = list(characters)
    if not chars or not all(isinstance(c, Character) and c.algebra is L for c in chars):
        raise TypeError("the Weyl functor accepts only characters of the Cartan part of L")
    parts = [weyl_closure(L, lam, chi, D) for chi in chars]
    parts = [W for W in parts if W.dim]
    if not parts:
        return zero_module(L, lam)
    return parts[0] if len(parts) == 1 else direct_sum(parts)


def restriction_functor(W: WeightModule) -> tuple[list[int], dict]:
    """The highest weight space with the action of the Cartan part, as
    ``(basis indices, {cartan element: square matrix})``."""
    L = W.algebra
    space = W.weight_space(W.highest_weight)
    pos = {j: k for k, j in enumerate(space)}
    mats = {}
    for x in range(L.dim):
        if L.part[x] != "cartan":
            continue
        rows = [[0] * len(space) for _ in space]
        for j in space:
            for i, c in W.action[x].get(j, {}).items():
                rows[pos[i]][pos[j]] = c
        mats[x] = rows
    return space, mats


# ---------------------------------------------------------------------------
# annihilators and highest-weight vectors


def ideal_elements(L: TruncatedEMA, k: int) -> list[dict]:
    """A spanning set of ``(g ⊗ J^k)^Gamma`` inside ``L``, with J the
    product of the point ideals of ``L``'s points."""
    one = L.field.one
    J = {0: one}
    for x in L.quotient.points:
        J = poly_mul(J, {1: one, 0: -x})
    Jk = poly_pow(J, k, one)
    m = L.ring.order
    out = []
    for c, gv in enumerate(L.gvecs):
        xi = L.gvec_xi[c]
        for j in range(L.quotient.dim):
            if (j + xi) % m:
                continue
            p = poly_mul(Jk, {j: one})
            tensor = {(b, e): gb * pe for b, gb in gv.items() for e, pe in p.items()}
            elem = L.from_tensor(tensor)
            if elem:
                out.append(elem)
    return out


def min_annihilator_exponent(W: WeightModule, psi: WeightFunction | None = None) -> int:
    """Least k with ``(g ⊗ J^k)^Gamma`` acting by zero.

    J is the product of the point ideals of the truncation; ``psi``, when
    given, must declare the same points.  The answer is at most the
    truncation exponent, where ``J^N`` is already zero.
    """
    L = W.algebra
    if psi is not None and set(psi.points) != set(L.quotient.points):
        raise ValueError("weight function and module have different points")
    for k in range(1, L.quotient.N + 1):
        if all(not W.act(x, {j: _ONE}) for x in ideal_elements(L, k) for j in range(W.dim)):
            return k
    return L.quotient.N


def isotypic_check(W: WeightModule, lam=None) -> tuple[bool, list]:
    """Highest-weight vectors for the folded algebra, per weight.

    Returns whether the module is a sum of simples with highest weights at
    most ``lam`` (dimension bookkeeping by the Weyl formula) and the list of
    ``(weight, multiplicity)``.
    """
    L = W.algebra
    fd = L.fd
    rs = fd.folded
    lam = W.highest_weight if lam is None else tuple(lam)
    one = L.field.one
    raising = [bar_element(L, "e", k, {0: one}) for k in range(len(fd.orbits))]
    found = []
    total = 0
    ok = True
    for mu in sorted(set(W.weights), reverse=True):
        space = W.weight_space(mu)
        columns = []
        for j in space:
            col: dict = {}
            for r, x in enumerate(raising):
                for i, c in W.act(x, {j: _ONE}).items():
                    col[(r, i)] = c
            columns.append(col)
        mult = len(kernel(columns))
        if mult:
            found.append((mu, mult))
            if not rs.is_dominant(mu):
                ok = False
                continue
            diff = rs.weight_to_root_coords(tuple(a - b for a, b in zip(lam, mu)))
            if any(c < 0 or c.denominator != 1 for c in diff):
                ok = False
            total += mult * rs.weyl_dimension(mu)
    return ok and total == W.dim, found


# ---------------------------------------------------------------------------
# Garland identities


def garland_delta(fd: FoldedDatum, i: int) -> int:
    if any(k == 2 for k in fd.kappa) or len(fd.orbits[i]) > 1:
        return 1
    return fd.sigma.order


def _apply_power(W: WeightModule, x: Mapping, n: int, v: Mapping) -> dict:
    for _ in range(n):
        v = W.act(x, v)
    return scaled(mpq(1, math.factorial(n)), v)


def _garland_sides(W: WeightModule, i: int, a: Mapping, ell: int):
    """``(lhs, [f-terms for s = 0..ell])`` of the Garland identity applied to w."""
    L = W.algebra
    fd = L.fd
    one = L.field.one
    w = W.cyclic
    if fd.kappa[i] == 2:
        # the short orbit of a type A_{2n} fold
        alg = L.algebra
        p, q = fd.orbits[i]
        y = scaled(-1, alg.bracket({alg.f(p): one}, {alg.f(q): one}))
        ya = L.from_tensor({(b, e): cb * ce for b, cb in y.items() for e, ce in a.items()})
        ebar = bar_element(L, "e", i, {0: one})
        v = _apply_power(W, ya, ell + 1, w)
        lhs = scaled(2 ** ell, _apply_power(W, ebar, 2 * ell + 1, v))
        terms = [W.act(bar_element(L, "f", i, poly_pow(a, ell + 1 - s, one)), w) for s in range(ell + 1)]
        return lhs, terms
    delta = garland_delta(fd, i)
    ad = poly_pow(a, delta, one)
    v = _apply_power(W, bar_element(L, "f", i, {0: one}), ell + 1, w)
    lhs = _apply_power(W, bar_element(L, "e", i, ad), ell, v)
    terms = [W.act(bar_element(L, "f", i, poly_pow(ad, ell - s, one)), w) for s in range(ell + 1)]
    return lhs, terms


def garland_span_check(W: WeightModule, i: int, a: Mapping, ell: int) -> bool:
    """The Garland vector lies in the span of the f-terms applied to w."""
    if not W.dim:
        return True
    lhs, terms = _garland_sides(W, i, a, ell)
    return not Subspace(terms).reduce(lhs)


def garland_relation_check(W: WeightModule, i: int, a: Mapping, ell: int, sign: int | None = None) -> bool:
    """Sharper form: the leading f-term enters with its exact coefficient,
    so ``lhs + sign * term_0`` lies in the span of the remaining terms.

    The default sign is ``(-1) ** (ell + 1)`` in every case.  For the short
    orbit of an A_{2n} fold this absorbs the sign of ``y`` under the
    Chevalley cocycle used here.  Passing another sign is a negative control.
    """
    if not W.dim:
        return True
    lhs, terms = _garland_sides(W, i, a, ell)
    if sign is None:
        sign = (-1) ** (ell + 1)
    target = dict(lhs)
    add_scaled(target, sign, terms[0])
    return not Subspace(terms[1:]).reduce(target)
