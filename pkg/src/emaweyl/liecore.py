"""Root systems, Chevalley bases, diagram automorphisms and folding.

Conventions
-----------
* Cartan matrices follow ``C[i][j] = alpha_j(h_i)`` with Bourbaki node
  numbering (stored 0-indexed).
* Roots are integer tuples over the simple roots.  Weights are integer (or
  rational) tuples over the fundamental weights, so ``alpha_j`` is column
  ``j`` of the Cartan matrix.
* Basis of a Lie algebra: positive root vectors (ordered by height), then
  ``h_1 .. h_n``, then negative root vectors in the same order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from gmpy2 import mpq

from .linalg import add_scaled, jacobi_holds
from .scalars import RATIONALS, SQRT2, Field

Root = tuple[int, ...]
Weight = tuple


class SignObstructionError(RuntimeError):
    """The generator-level extension of a diagram automorphism fails to
    preserve brackets."""


# ---------------------------------------------------------------------------
# Cartan matrices and root systems


def _chain(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def cartan_matrix(kind: str, rank: int) -> list[list[int]]:
    """Cartan matrix of a simple type in Bourbaki numbering."""
    kind = kind.upper()
    n = rank
    if kind == "A" and n >= 1:
        return _chain(n)
    if kind in "BC" and n >= 2:
        c = _chain(n)
        long_to_short, short_to_long = (-1, -2) if kind == "B" else (-2, -1)
        c[n - 2][n - 1], c[n - 1][n - 2] = long_to_short, short_to_long
        return c
    if kind == "D" and n >= 4:
        c = _chain(n - 1) + [[0] * (n - 1)]
        for row in c:
            row.append(0)
        c[n - 1][n - 1] = 2
        c[n - 2][n - 1] = c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
        return c
    if kind == "E" and n in (6, 7, 8):
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            c[i][j] = c[j][i] = -1
        return c
    if kind == "F" and n == 4:
        c = _chain(4)
        c[1][2], c[2][1] = -1, -2
        return c
    if kind == "G" and n == 2:
        return [[2, -3], [-1, 2]]
    raise ValueError(f"no simple Lie algebra of type {kind}{rank}")


_EXPECTED_POSITIVE_ROOTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


def _inverse(matrix: Sequence[Sequence[int]]) -> list[list[mpq]]:
    n = len(matrix)
    a = [[mpq(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]

    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    @cached_property
    def cartan_inverse(self) -> list[list[mpq]]:
        return _inverse(self.cartan)

    @cached_property
    def symmetrizer(self) -> tuple[mpq, ...]:
        """``(alpha_i, alpha_i) / 2`` normalised so long roots give 1."""
        n = self.rank
        d: list = [None] * n
        d[0] = mpq(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and self.cartan[i][j] and d[j] is None:
                    d[j] = d[i] * self.cartan[i][j] / self.cartan[j][i]
                    stack.append(j)
        top = max(d)
        return tuple(x / top for x in d)

    def root_to_weight(self, root: Sequence) -> Weight:
        c = self.cartan
        return tuple(sum(c[i][j] * root[j] for j in range(self.rank)) for i in range(self.rank))

    def weight_to_root_coords(self, weight: Sequence) -> tuple[mpq, ...]:
        inv = self.cartan_inverse
        return tuple(sum(inv[i][j] * weight[j] for j in range(self.rank)) for i in range(self.rank))

    def height(self, weight: Sequence) -> mpq:
        """Sum of the coordinates of ``weight`` over the simple roots."""
        return sum(self.weight_to_root_coords(weight), mpq(0))

    def reflect(self, i: int, weight: Sequence) -> Weight:
        m = weight[i]
        return tuple(weight[k] - m * self.cartan[k][i] for k in range(self.rank))

    @cached_property
    def reflection_matrices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Simple reflections acting on fundamental-weight coordinates."""
        n = self.rank
        mats = []
        for i in range(n):
            mats.append(tuple(
                tuple(int(r == c) - (self.cartan[r][i] if c == i else 0) for c in range(n))
                for r in range(n)
            ))
        return tuple(mats)

    @cached_property
    def root_lengths(self) -> dict[Root, mpq]:
        """``(beta, beta) / 2`` for every positive root."""
        d, c, n = self.symmetrizer, self.cartan, self.rank
        return {
            r: sum(r[i] * r[j] * d[i] * c[i][j] for i in range(n) for j in range(n)) / 2
            for r in self.positive_roots
        }

    def coroot(self, root: Root) -> tuple[mpq, ...]:
        """Coefficients of the coroot of a positive root over ``h_1 .. h_n``."""
        d, length = self.symmetrizer, self.root_lengths[root]
        return tuple(root[i] * d[i] / length for i in range(self.rank))

    def pairing(self, weight: Sequence, root: Root) -> mpq:
        return sum((a * b for a, b in zip(self.coroot(root), weight)), mpq(0))

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def is_dominant(self, weight: Sequence) -> bool:
        return all(x >= 0 for x in weight)

    def dominant_conjugate(self, weight: Sequence) -> Weight:
        w = tuple(weight)
        while True:
            i = next((k for k in range(self.rank) if w[k] < 0), None)
            if i is None:
                return w
            w = self.reflect(i, w)

    def lowest_conjugate(self, weight: Sequence) -> Weight:
        """The antidominant element of the Weyl orbit, i.e. ``w0`` applied
        to the dominant conjugate."""
        return tuple(-x for x in self.dominant_conjugate(tuple(-x for x in weight)))

    def weyl_orbit(self, weight: Sequence) -> set[Weight]:
        start = tuple(weight)
        seen, stack = {start}, [start]
        while stack:
            w = stack.pop()
            for i in range(self.rank):
                v = self.reflect(i, w)
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def weyl_dimension(self, weight: Sequence) -> int:
        num, den = mpq(1), mpq(1)
        rho = (1,) * self.rank
        shifted = tuple(a + 1 for a in weight)
        for r in self.positive_roots:
            num *= self.pairing(shifted, r)
            den *= self.pairing(rho, r)
        value = num / den
        if value.denominator != 1:
            raise ArithmeticError("non-integral Weyl dimension")
        return int(value)

    def to_json(self) -> dict:
        return {"type": self.label, "rank": self.rank, "cartan": [list(r) for r in self.cartan]}


def _positive_roots(cartan: Sequence[Sequence[int]]) -> list[Root]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # length of the alpha_i-string below beta
                p, down = 0, list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pair = sum(cartan[i][j] * beta[j] for j in range(n))
                if p - pair > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


def build_root_system(kind: str, rank: int) -> RootSystem:
    kind = kind.upper()
    cartan = cartan_matrix(kind, rank)
    pos = _positive_roots(cartan)
    if len(pos) != _EXPECTED_POSITIVE_ROOTS[kind](rank):
        raise AssertionError(f"root count mismatch for {kind}{rank}")
    return RootSystem(kind, rank, tuple(tuple(r) for r in cartan), tuple(pos))


def identify_cartan(cartan: Sequence[Sequence[int]]) -> tuple[str, int, tuple[int, ...]]:
    """Find ``(kind, rank, perm)`` with ``cartan_matrix(kind, rank)[a][b] ==
    cartan[perm[a]][perm[b]]``, preferring the given node order."""
    n = len(cartan)
    kinds = [k for k in "ABCDEFG" if _valid(k, n)]
    perms = [tuple(range(n))] + (list(itertools.permutations(range(n))) if n <= 6 else [])
    for perm in perms:
        for kind in kinds:
            target = cartan_matrix(kind, n)
            if all(target[a][b] == cartan[perm[a]][perm[b]] for a in range(n) for b in range(n)):
                return kind, n, perm
    raise ValueError("not the Cartan matrix of a simple Lie algebra")


def _valid(kind: str, n: int) -> bool:
    try:
        cartan_matrix(kind, n)
        return True
    except ValueError:
        return False


def height(weight: Sequence, rs: RootSystem) -> mpq:
    """Height of a weight given in fundamental-weight coordinates."""
    return rs.height(weight)


# ---------------------------------------------------------------------------
# Lie algebras with a Chevalley-type basis


class LieAlgebra:
    """A finite-dimensional Lie algebra with basis ``x_alpha`` / ``h_i``.

    ``table[(a, b)]`` is the bracket of basis vectors a and b as a sparse
    dict; both orders are stored and zero brackets are omitted.
    """

    def __init__(self, rs: RootSystem, roots: list, table: dict[tuple[int, int], dict]):
        self.root_system = rs
        self.rank = rs.rank
        self.roots = roots  # signed root tuple per basis vector, None for Cartan
        self.table = table
        self.dim = len(roots)
        self.root_index = {r: k for k, r in enumerate(roots) if r is not None}
        npos = len(rs.positive_roots)
        self.h_indices = tuple(range(npos, npos + self.rank))
        units = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        self.e_indices = tuple(self.root_index[u] for u in units)
        self.f_indices = tuple(self.root_index[tuple(-x for x in u)] for u in units)

    def e(self, i: int) -> int:
        return self.e_indices[i]

    def f(self, i: int) -> int:
        return self.f_indices[i]

    def h(self, i: int) -> int:
        return self.h_indices[i]

    @cached_property
    def labels(self) -> tuple[str, ...]:
        out = []
        for k, r in enumerate(self.roots):
            if r is None:
                out.append(f"h{k - self.h_indices[0] + 1}")
            else:
                sign = "e" if sum(r) > 0 else "f"
                out.append(sign + "[" + ",".join(str(abs(x)) for x in r) + "]")
        return tuple(out)

    def weight(self, b: int) -> Weight:
        r = self.roots[b]
        if r is None:
            return (0,) * self.rank
        return self.root_system.root_to_weight(r)

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        table = self.table
        for a, ca in u.items():
            for b, cb in v.items():
                t = table.get((a, b))
                if t:
                    add_scaled(out, ca * cb, t)
        return out

    def bracket_basis(self, a: int, b: int) -> dict:
        return self.table.get((a, b), {})

    def check_antisymmetry(self) -> bool:
        for (a, b), out in self.table.items():
            other = self.table.get((b, a), {})
            if set(other) != set(out) or any(other[k] != -v for k, v in out.items()):
                return False
        return all(not self.table.get((a, a)) for a in range(self.dim))

    def check_jacobi(self) -> bool:
        return jacobi_holds(self.dim, self.table)

    def check_cartan_action(self) -> bool:
        for i, hi in enumerate(self.h_indices):
            for b, r in enumerate(self.roots):
                expected = {}
                if r is not None:
                    val = sum(self.root_system.cartan[i][j] * r[j] for j in range(self.rank))
                    if val:
                        expected = {b: val}
                if self.bracket_basis(hi, b) != expected:
                    return False
        return True


def _epsilon(cartan, a: Root, b: Root) -> int:
    n = len(cartan)
    s = 0
    for i in range(n):
        if not a[i]:
            continue
        for j in range(n):
            if b[j] and (i == j or (i < j and cartan[i][j] == -1)):
                s += a[i] * b[j]
    return -1 if s % 2 else 1


def _simply_laced_table(rs: RootSystem) -> tuple[list, dict]:
    n = rs.rank
    pos = list(rs.positive_roots)
    roots: list = pos + [None] * n + [tuple(-x for x in r) for r in pos]
    index = {r: k for k, r in enumerate(roots) if r is not None}
    hbase = len(pos)
    sign = {r: (1 if sum(r) > 0 else -1) for r in index}
    table: dict = {}
    for a, ra in enumerate(roots):
        for b, rb in enumerate(roots):
            out: dict = {}
            if ra is None and rb is not None:
                i = a - hbase
                val = sum(rs.cartan[i][j] * rb[j] for j in range(n))
                if val:
                    out = {b: mpq(val)}
            elif ra is not None and rb is None:
                i = b - hbase
                val = sum(rs.cartan[i][j] * ra[j] for j in range(n))
                if val:
                    out = {a: mpq(-val)}
            elif ra is not None and rb is not None:
                total = tuple(x + y for x, y in zip(ra, rb))
                if not any(total):
                    pos_root = ra if sign[ra] > 0 else rb
                    s = 1 if sign[ra] > 0 else -1
                    out = {hbase + i: mpq(s * pos_root[i]) for i in range(n) if pos_root[i]}
                elif total in index:
                    c = sign[ra] * sign[rb] * sign[total] * _epsilon(rs.cartan, ra, rb)
                    out = {index[total]: mpq(c)}
            if out:
                table[(a, b)] = out
    return roots, table


_FOLDING_COVERS = {
    "B": lambda n: ("D", n + 1, tuple(range(n - 1)) + (n, n - 1), 2) if n > 2 else ("A", 3, (2, 1, 0), 2),
    "C": lambda n: ("A", 2 * n - 1, tuple(2 * n - 2 - i for i in range(2 * n - 1)), 2),
    "F": lambda n: ("E", 6, (5, 1, 4, 3, 2, 0), 2),
    "G": lambda n: ("D", 4, (2, 1, 3, 0), 3),
}


def chevalley_algebra(rs: RootSystem) -> LieAlgebra:
    """The simple Lie algebra of ``rs`` with a Chevalley-type basis.

    Simply-laced types use a bimultiplicative sign cocycle; the other types
    are realised as fixed points of a diagram automorphism of a
    simply-laced cover.  Jacobi is verified before returning.
    """
    if rs.kind in "ADE":
        roots, table = _simply_laced_table(rs)
        alg = LieAlgebra(rs, roots, table)
    else:
        alg = _folded_chevalley(rs)
    if not (alg.check_antisymmetry() and alg.check_jacobi() and alg.check_cartan_action()):
        raise AssertionError(f"structure constants for {rs.label} fail the Lie axioms")
    return alg


# ---------------------------------------------------------------------------
# Diagram automorphisms


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: tuple[int, ...]
    order: int

    @classmethod
    def identity(cls, rank: int) -> "DiagramAutomorphism":
        return cls(tuple(range(rank)), 1)

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "DiagramAutomorphism":
        perm = tuple(perm)
        order, p = 1, perm
        ident = tuple(range(len(perm)))
        while p != ident:
            p = tuple(perm[x] for x in p)
            order += 1
        return cls(perm, order)

    def check(self, rs: RootSystem) -> None:
        c, s = rs.cartan, self.perm
        if sorted(s) != list(range(rs.rank)):
            raise ValueError("not a permutation of the nodes")
        if any(c[s[i]][s[j]] != c[i][j] for i in range(rs.rank) for j in range(rs.rank)):
            raise ValueError("permutation does not preserve the Cartan matrix")
        p = tuple(range(rs.rank))
        for _ in range(self.order):
            p = tuple(s[x] for x in p)
        if p != tuple(range(rs.rank)):
            raise ValueError("sigma^m is not the identity")

    def apply_root(self, root: Sequence[int]) -> Root:
        out = [0] * len(root)
        for i, a in enumerate(root):
            out[self.perm[i]] = a
        return tuple(out)

    def apply_weight(self, weight: Sequence) -> Weight:
        return self.apply_root(weight)

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.perm[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out


class LieAutomorphism:
    """A signed permutation of the basis: ``tau(b) = sign[b] * b'``."""

    def __init__(self, alg: LieAlgebra, sigma: DiagramAutomorphism, target: list[int], sign: list):
        self.algebra = alg
        self.sigma = sigma
        self.target = target
        self.sign = sign
        self.order = sigma.order

    def apply(self, v: Mapping) -> dict:
        return {self.target[b]: self.sign[b] * c for b, c in v.items()}

    def power(self, v: Mapping, k: int) -> dict:
        for _ in range(k % self.order):
            v = self.apply(v)
        return dict(v)

    def preserves_brackets(self) -> bool:
        alg = self.algebra
        for a in range(alg.dim):
            for b in range(alg.dim):
                lhs = alg.bracket({self.target[a]: self.sign[a]}, {self.target[b]: self.sign[b]})
                rhs = self.apply(alg.bracket_basis(a, b))
                if lhs != rhs:
                    return False
        return True

    def has_order(self) -> bool:
        return all(self.power({b: 1}, self.order) == {b: 1} for b in range(self.algebra.dim))

    def as_matrix(self) -> list[list]:
        n = self.algebra.dim
        m = [[0] * n for _ in range(n)]
        for b in range(n):
            m[self.target[b]][b] = self.sign[b]
        return m


def lift_automorphism(alg: LieAlgebra, sigma: DiagramAutomorphism) -> LieAutomorphism:
    """Extend ``e_i -> e_{sigma i}``, ``f_i -> f_{sigma i}``, ``h_i -> h_{sigma i}``
    to the whole algebra and verify it is a Lie automorphism of order m."""
    rs = alg.root_system
    sigma.check(rs)
    n = alg.dim
    target: list = [None] * n
    sign: list = [None] * n
    for i in range(rs.rank):
        for idx in (alg.e, alg.f, alg.h):
            target[idx(i)] = idx(sigma.perm[i])
            sign[idx(i)] = mpq(1)
    for r in rs.positive_roots:
        if sum(r) == 1:
            continue
        for sgn, gen in ((1, alg.e), (-1, alg.f)):
            root = tuple(sgn * x for x in r)
            k = alg.root_index[root]
            # pick the first simple root with r - alpha_i a root
            for i in range(rs.rank):
                lower = list(root)
                lower[i] -= sgn
                lower = tuple(lower)
                if lower in alg.root_index:
                    break
            kb = alg.root_index[lower]
            coef = alg.bracket_basis(gen(i), kb)[k]
            image = alg.bracket({target[gen(i)]: sign[gen(i)]}, {target[kb]: sign[kb]})
            (tk, tv), = image.items()
            target[k] = tk
            sign[k] = tv / coef
    tau = LieAutomorphism(alg, sigma, target, sign)
    if not tau.preserves_brackets():
        raise SignObstructionError("lift does not preserve brackets")
    if not tau.has_order():
        raise SignObstructionError("lift does not have the order of sigma")
    return tau


# ---------------------------------------------------------------------------
# Folding


@dataclass
class FoldedDatum:
    algebra: LieAlgebra
    sigma: DiagramAutomorphism
    orbits: tuple[tuple[int, ...], ...]  # in Bourbaki order of the folded type
    kappa: tuple[int, ...]
    folded: RootSystem
    restriction_matrix: tuple[tuple[int, ...], ...]
    triples: tuple[tuple[dict, dict, dict], ...]  # (e, f, h) over the algebra basis
    field: Field
    fixed_dimension: int
    orbit_of: dict[int, int] = field(default_factory=dict)

    @property
    def folded_type(self) -> str:
        return self.folded.label

    def restrict_weight(self, weight: Sequence) -> Weight:
        return restrict_weight(weight, self)

    def height(self, weight: Sequence, folded: bool = True) -> mpq:
        return self.folded.height(weight) if folded else self.algebra.root_system.height(weight)

    def isotropy_order(self, k: int) -> int:
        return self.sigma.order // len(self.orbits[k])

    def is_restriction(self, weight: Sequence) -> bool:
        """Whether a folded weight is the restriction of an integral weight."""
        return all(w % kap == 0 for w, kap in zip(weight, self.kappa))

    def lift_weight(self, weight: Sequence) -> Weight:
        """A g-weight supported on orbit representatives restricting to ``weight``."""
        if not self.is_restriction(weight):
            raise ValueError("weight is not a restriction")
        out = [0] * self.algebra.rank
        for k, orb in enumerate(self.orbits):
            out[orb[0]] = weight[k] // self.kappa[k]
        return tuple(out)

    def basis_weight(self, b: int) -> Weight:
        return self.restrict_weight(self.algebra.weight(b))

    def to_json(self) -> dict:
        rs = self.algebra.root_system
        return {
            "type": rs.label,
            "rank": rs.rank,
            "cartan": [list(r) for r in rs.cartan],
            "sigma": [p + 1 for p in self.sigma.perm],
            "order": self.sigma.order,
            "orbits": [[i + 1 for i in o] for o in self.orbits],
            "kappa": list(self.kappa),
            "folded": self.folded.to_json(),
            "restriction_matrix": [list(r) for r in self.restriction_matrix],
            "fixed_dimension": self.fixed_dimension,
        }


def restrict_weight(weight: Sequence, fd: FoldedDatum) -> Weight:
    """``omega_i -> kappa * omega_{orbit(i)}``; linear."""
    return tuple(sum(row[i] * weight[i] for i in range(len(weight))) for row in fd.restriction_matrix)


def _fixed_dimension(tau: LieAutomorphism) -> int:
    seen: set = set()
    count = 0
    for b in range(tau.algebra.dim):
        if b in seen:
            continue
        orbit, v = [b], {b: mpq(1)}
        while True:
            v = tau.apply(v)
            (k, c), = v.items()
            if k == b:
                break
            orbit.append(k)
        seen.update(orbit)
        if c == 1:
            count += 1
    return count


def fold(alg: LieAlgebra, sigma: DiagramAutomorphism, field: Field | None = None) -> FoldedDatum:
    """Fold ``alg`` along ``sigma``: orbits, kappa, folded Cartan data and
    folded sl2-triples."""
    rs = alg.root_system
    sigma.check(rs)
    tau = lift_automorphism(alg, sigma)
    raw = sorted(sigma.orbits())
    kappa_raw = []
    for orb in raw:
        adjacent = any(rs.cartan[i][j] for i in orb for j in orb if i != j)
        kappa_raw.append(2 if adjacent else 1)
    n = len(raw)
    cart = [[kappa_raw[a] * sum(rs.cartan[i][raw[b][0]] for i in raw[a]) for b in range(n)] for a in range(n)]
    kind, rank, perm = identify_cartan(cart)
    folded = build_root_system(kind, rank)
    orbits = tuple(raw[p] for p in perm)
    kappa = tuple(kappa_raw[p] for p in perm)
    if field is None:
        field = SQRT2 if 2 in kappa else RATIONALS
    restriction = tuple(
        tuple(kappa[k] * int(i in orbits[k]) for i in range(rs.rank)) for k in range(n)
    )
    triples = []
    for k, orb in enumerate(orbits):
        root_k = field.sqrt(kappa[k])
        e = {alg.e(i): root_k for i in orb}
        f = {alg.f(i): root_k for i in orb}
        h = {alg.h(i): field(kappa[k]) for i in orb}
        triples.append((e, f, h))
    datum = FoldedDatum(
        algebra=alg,
        sigma=sigma,
        orbits=orbits,
        kappa=kappa,
        folded=folded,
        restriction_matrix=restriction,
        triples=tuple(triples),
        field=field,
        fixed_dimension=_fixed_dimension(tau),
        orbit_of={i: k for k, o in enumerate(orbits) for i in o},
    )
    datum.automorphism = tau
    return datum


def check_folded_triples(fd: FoldedDatum) -> bool:
    """[e_i, f_i] = h_i, and [h_i, e_j] = alpha_j(h_i) e_j for all orbit pairs."""
    alg = fd.algebra
    for a, (e, f, h) in enumerate(fd.triples):
        if _clean(alg.bracket(e, f)) != _clean(h):
            return False
        for b, (e2, _, _) in enumerate(fd.triples):
            expected = {k: fd.folded.cartan[a][b] * v for k, v in e2.items()}
            if _clean(alg.bracket(h, e2)) != _clean(expected):
                return False
    return True


def _clean(v: Mapping) -> dict:
    return {k: c for k, c in v.items() if c}


def check_g0_abelian(alg: LieAlgebra, sigma: DiagramAutomorphism, fd: FoldedDatum) -> tuple[bool, dict]:
    """Whether the centraliser of the fixed Cartan subalgebra is abelian,
    together with the basis partition by the sign of the restricted weight."""
    parts: dict[str, list[int]] = {"minus": [], "zero": [], "plus": []}
    for b in range(alg.dim):
        ht = fd.folded.height(fd.basis_weight(b))
        parts["plus" if ht > 0 else "minus" if ht < 0 else "zero"].append(b)
    zero = parts["zero"]
    abelian = all(not alg.bracket_basis(a, b) for a in zero for b in zero)
    return abelian, parts


# ---------------------------------------------------------------------------
# Non-simply-laced types as fixed points of a simply-laced cover


def _folded_chevalley(rs: RootSystem) -> LieAlgebra:
    kind, crank, perm, order = _FOLDING_COVERS[rs.kind](rs.rank)
    cover = chevalley_algebra(build_root_system(kind, crank))
    sigma = DiagramAutomorphism(perm, order)
    fd = fold(cover, sigma)
    tau = fd.automorphism
    n = rs.rank
    # Reorder the orbits to the Bourbaki numbering of rs (B2 and C2 share a cover).
    cover_cartan = cover.root_system.cartan
    orbits = None
    for perm_orbits in itertools.permutations(fd.orbits):
        cart = [[sum(cover_cartan[i][b[0]] for i in a) for b in perm_orbits] for a in perm_orbits]
        if cart == [list(r) for r in rs.cartan]:
            orbits = perm_orbits
            break
    if orbits is None:
        raise AssertionError("folding cover produced the wrong type")

    def restrict_root(r):
        return tuple(sum(r[i] for i in orb) for orb in orbits)

    orbit_rep: dict[Root, Root] = {}
    for r in cover.root_system.positive_roots:
        fr = restrict_root(r)
        orbit_rep.setdefault(fr, r)
    if set(orbit_rep) != set(rs.positive_roots):
        raise AssertionError("restricted roots do not match the folded root system")

    def orbit_sum(root):
        start = {cover.root_index[root]: mpq(1)}
        total: dict = {}
        v = start
        while True:
            add_scaled(total, 1, v)
            v = tau.apply(v)
            if set(v) == set(start):
                if v != start:
                    raise AssertionError("root vector orbit carries a sign")
                return total

    vectors: list[dict] = []
    readout: list[tuple[int, mpq]] = []  # (cover index, scale) per new basis vector
    pos = list(rs.positive_roots)
    for fr in pos:
        rep = orbit_rep[fr]
        vectors.append(orbit_sum(rep))
        readout.append((cover.root_index[rep], mpq(1)))
    for orb in orbits:
        vectors.append({cover.h(i): mpq(1) for i in orb})
        readout.append((cover.h(orb[0]), mpq(1)))
    for j, fr in enumerate(pos):
        rep = tuple(-x for x in orbit_rep[fr])
        y = orbit_sum(rep)
        hval = cover.bracket(vectors[j], y)
        value = sum(c * sum(cover.root_system.cartan[hk - cover.h_indices[0]][t] * orbit_rep[fr][t]
                            for t in range(crank))
                    for hk, c in hval.items())
        scale = 2 / value
        vectors.append({k2: scale * c for k2, c in y.items()})
        readout.append((cover.root_index[rep], scale))

    def coords(v: Mapping) -> dict:
        out = {}
        for b, (ci, scale) in enumerate(readout):
            c = v.get(ci)
            if c:
                out[b] = c / scale
        recon: dict = {}
        for b, c in out.items():
            add_scaled(recon, c, vectors[b])
        if recon != {k: c for k, c in v.items() if c}:
            raise AssertionError("bracket left the fixed subalgebra")
        return out

    roots = pos + [None] * n + [tuple(-x for x in r) for r in pos]
    table = {}
    for a in range(len(vectors)):
        for b in range(len(vectors)):
            br = cover.bracket(vectors[a], vectors[b])
            if br:
                table[(a, b)] = coords(br)
    return LieAlgebra(rs, roots, table)
