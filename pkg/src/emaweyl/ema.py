"""Truncated equivariant map algebras ``(g ⊗ A/J^N)^Gamma``.

A basis element is a pair ``(v, r)`` of an eigenvector ``v`` of the lifted
automorphism (``tau v = zeta^xi v``) and a ring basis element ``r`` of
character degree ``-xi``; such tensors are exactly the fixed ones.
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Sequence

from .gammaring import GammaRing, Poly, RingQuotient, WeightFunction, product_ideal, section_quotient
from .linalg import add_scaled, jacobi_holds, rank
from .liecore import DiagramAutomorphism, FoldedDatum, LieAlgebra, LieAutomorphism, fold

Element = dict


class TruncatedEMA:
    """The finite-dimensional Lie algebra ``L_N = (g ⊗ A/J^N)^Gamma``."""

    def __init__(self, fd: FoldedDatum, quotient: RingQuotient):
        self.fd = fd
        self.algebra: LieAlgebra = fd.algebra
        self.tau: LieAutomorphism = fd.automorphism
        self.quotient = quotient
        self.ring: GammaRing = quotient.ring
        self.field = quotient.field
        if self.ring.order != fd.sigma.order:
            raise ValueError("ring action and diagram automorphism have different orders")
        self._build_eigenvectors()
        self._build_basis()
        self._build_table()

    # construction -------------------------------------------------------
    def _build_eigenvectors(self) -> None:
        alg, tau, m = self.algebra, self.tau, self.ring.order
        zeta = self.ring.zeta
        self.gvecs: list[dict] = []
        self.gvec_xi: list[int] = []
        self.gvec_rep: list[int] = []
        seen: set = set()
        for b in range(alg.dim):
            if b in seen:
                continue
            cycle, signs = [b], []
            k = b
            while True:
                (k2, c), = tau.apply({k: 1}).items()
                signs.append(c)
                if k2 == b:
                    break
                cycle.append(k2)
                k = k2
            seen.update(cycle)
            total_sign = 1
            for c in signs:
                total_sign = total_sign * c
            s = len(cycle)
            for xi in range(m):
                if total_sign * zeta ** ((-s * xi) % m) != 1:
                    continue
                coeffs, a = {}, self.field.one
                for j, idx in enumerate(cycle):
                    coeffs[idx] = a
                    a = a * signs[j] * zeta ** ((-xi) % m)
                self.gvecs.append(coeffs)
                self.gvec_xi.append(xi)
                self.gvec_rep.append(b)
        if len(self.gvecs) != alg.dim:
            raise AssertionError("automorphism is not diagonalisable over the base field")
        self._gvec_lookup = {(r, xi): c for c, (r, xi) in enumerate(zip(self.gvec_rep, self.gvec_xi))}

    def _build_basis(self) -> None:
        fd, q, m = self.fd, self.quotient, self.ring.order
        entries = []
        for c, v in enumerate(self.gvecs):
            weight = fd.basis_weight(self.gvec_rep[c])
            ht = fd.folded.height(weight)
            for k in range(q.dim):
                if (q.degree[k] + self.gvec_xi[c]) % m == 0:
                    entries.append((-ht, k, c, weight))
        entries.sort(key=lambda e: e[:3])
        self.basis: list[tuple[int, int]] = [(c, k) for _, k, c, _ in entries]
        self.weights: list[tuple] = [w for *_, w in entries]
        self.heights = [-e[0] for e in entries]
        self.index = {bk: i for i, bk in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.part = ["upper" if h > 0 else "lower" if h < 0 else "cartan" for h in self.heights]
        self.slot = [q.slot[k] for _, k in self.basis]

    def _decompose(self, v: Mapping) -> dict:
        """Write a Lie algebra vector as a sum of eigenvectors (dict gvec -> coef)."""
        out: dict = {}
        done: set = set()
        for b in v:
            rep = self._cycle_rep[b]
            if rep in done:
                continue
            done.add(rep)
            # project onto each eigenvector of this cycle
            cycle = self._cycles[rep]
            for xi in range(self.ring.order):
                c = self._gvec_lookup.get((rep, xi))
                if c is None:
                    continue
                coef = self._projection(v, c, cycle)
                if coef:
                    out[c] = coef
        return out

    @cached_property
    def _cycles(self) -> dict[int, list[int]]:
        out: dict = {}
        for c, rep in enumerate(self.gvec_rep):
            out.setdefault(rep, sorted(self.gvecs[c]))
        return out

    @cached_property
    def _cycle_rep(self) -> dict[int, int]:
        return {b: rep for rep, cyc in self._cycles.items() for b in cyc}

    @cached_property
    def _dual(self) -> dict[int, dict]:
        """Dual functionals: ``_dual[c]`` pairs with eigenvector c to 1 and
        kills the other eigenvectors of its cycle."""
        from .linalg import solve_in_span
        out = {}
        for rep, cyc in self._cycles.items():
            vecs = [c for c in range(len(self.gvecs)) if self.gvec_rep[c] == rep]
            for b in cyc:
                coeffs = solve_in_span({b: self.field.one}, [self.gvecs[c] for c in vecs])
                for c, a in zip(vecs, coeffs):
                    if a:
                        out.setdefault(c, {})[b] = a
        # out[c][b] = coefficient of gvec c when expanding basis vector b
        return out

    def _projection(self, v: Mapping, c: int, cycle) -> object:
        dual = self._dual.get(c, {})
        total = 0
        for b in cycle:
            cb = v.get(b)
            if cb:
                a = dual.get(b)
                if a:
                    total = total + cb * a
        return total

    def _build_table(self) -> None:
        alg, q = self.algebra, self.quotient
        gbr: dict = {}
        for c1, v1 in enumerate(self.gvecs):
            for c2, v2 in enumerate(self.gvecs):
                br = alg.bracket(v1, v2)
                if br:
                    gbr[(c1, c2)] = self._decompose(br)
        self.table: dict[tuple[int, int], dict] = {}
        for a, (c1, k1) in enumerate(self.basis):
            for b, (c2, k2) in enumerate(self.basis):
                g = gbr.get((c1, c2))
                if not g:
                    continue
                ring_part = q.mul(k1, k2)
                out: dict = {}
                for c, gc in g.items():
                    for k, rc in ring_part.items():
                        idx = self.index.get((c, k))
                        if idx is None:
                            raise AssertionError("bracket left the fixed subalgebra")
                        v = out.get(idx, 0) + gc * rc
                        if v:
                            out[idx] = v
                        else:
                            out.pop(idx, None)
                if out:
                    self.table[(a, b)] = out

    # element operations ------------------------------------------------
    def bracket(self, u: Mapping, v: Mapping) -> Element:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                t = self.table.get((a, b))
                if t:
                    add_scaled(out, ca * cb, t)
        return out

    def to_tensor(self, x: Mapping) -> dict:
        """Expand into ``{(lie basis index, exponent): coefficient}``."""
        out: dict = {}
        for i, c in x.items():
            gi, k = self.basis[i]
            for b, gb in self.gvecs[gi].items():
                for e, pe in self.quotient.basis_polys[k].items():
                    key = (b, e)
                    v = out.get(key, 0) + c * gb * pe
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return out

    def from_tensor(self, tensor: Mapping) -> Element:
        """Reduce ``sum x_b ⊗ p_b`` modulo the truncation and read off
        coordinates; raises ValueError when the result is not fixed."""
        polys: dict = {}
        for (b, e), c in tensor.items():
            polys.setdefault(b, {})
            polys[b][e] = polys[b].get(e, 0) + c
        entries: dict = {}
        for b, p in polys.items():
            for k, c in self.quotient.coords(p).items():
                if c:
                    entries[(b, k)] = c
        out: dict = {}
        for (b, k), c in entries.items():
            rep = self._cycle_rep[b]
            for xi in range(self.ring.order):
                g = self._gvec_lookup.get((rep, xi))
                if g is None:
                    continue
                idx = self.index.get((g, k))
                if idx is None or idx in out:
                    continue
                coef = self._projection({bb: entries.get((bb, k), 0) for bb in self._cycles[rep]}, g, self._cycles[rep])
                if coef:
                    out[idx] = coef
        check: dict = {}
        for i, c in out.items():
            gi, k = self.basis[i]
            for b, gb in self.gvecs[gi].items():
                add_scaled(check, c, {(b, k): gb})
        if check != entries:
            raise ValueError("tensor is not fixed by the group action")
        return out

    def convert(self, x: Mapping, target: "TruncatedEMA") -> Element:
        """Image under the reduction map into a coarser truncation."""
        return target.from_tensor(self.to_tensor(x))

    def element_weight(self, i: int) -> tuple:
        return self.weights[i]

    def labels(self) -> list[str]:
        alg, q = self.algebra, self.quotient
        out = []
        for c, k in self.basis:
            v = self.gvecs[c]
            lie = " + ".join(f"{self.field.encode(x)}*{alg.labels[b]}" for b, x in sorted(v.items()))
            out.append(f"({lie}) ⊗ r{k}")
        return out

    def bar_element(self, flavor: str, i: int, a: Mapping) -> Element:
        return bar_element(self, flavor, i, a)

    # checks -------------------------------------------------------------
    def check_antisymmetry(self) -> bool:
        for (a, b), out in self.table.items():
            other = self.table.get((b, a), {})
            if other.keys() != out.keys() or any(other[k] != -v for k, v in out.items()):
                return False
        return True

    def check_jacobi(self) -> bool:
        return jacobi_holds(self.dim, self.table, self.field.minpoly)

    def check_gradings(self) -> bool:
        m = self.ring.order
        for (a, b), out in self.table.items():
            wsum = tuple(x + y for x, y in zip(self.weights[a], self.weights[b]))
            xi = (self.gvec_xi[self.basis[a][0]] + self.gvec_xi[self.basis[b][0]]) % m
            for c in out:
                if self.weights[c] != wsum or self.gvec_xi[self.basis[c][0]] != xi:
                    return False
        return True

    def to_json(self) -> dict:
        enc = self.field.encode
        return {
            "dimension": self.dim,
            "basis": self.labels(),
            "brackets": [
                [a, b, {str(c): enc(v) for c, v in sorted(out.items())}]
                for (a, b), out in sorted(self.table.items()) if a < b
            ],
        }


def build_truncated_ema(
    alg: LieAlgebra,
    sigma: DiagramAutomorphism,
    ring: GammaRing,
    psi: WeightFunction,
    N: int,
    basis: str = "monomial",
    fd: FoldedDatum | None = None,
) -> TruncatedEMA:
    """``(g ⊗ A/J(psi)^N)^Gamma`` for an equivariant weight function."""
    if fd is None:
        fd = fold(alg, sigma, ring.field)
    if psi.ring is not ring:
        raise ValueError("weight function lives on another ring")
    return TruncatedEMA(fd, product_ideal(psi, N, basis))


def bar_element(L: TruncatedEMA, flavor: str, i: int, a: Mapping) -> Element:
    """``sum over Gamma/Gamma_i of gamma(x_i ⊗ a)`` for x in {e, f, h}."""
    fd, alg, ring = L.fd, L.algebra, L.ring
    orbit = fd.orbits[i]
    size = len(orbit)
    if not ring.is_fixed(a, ring.order // size):
        raise ValueError("ring element is not invariant under the isotropy subgroup")
    gen = {"e": alg.e, "f": alg.f, "h": alg.h}[flavor]
    x = {gen(orbit[0]): 1}
    tensor: dict = {}
    for k in range(size):
        vx = L.tau.power(x, k)
        ak = ring.act(a, k)
        for b, cb in vx.items():
            for e, ce in ak.items():
                add_scaled(tensor, 1, {(b, e): cb * ce})
    return L.from_tensor(tensor)


class UntwistMap:
    """The isomorphism ``(g ⊗ A/J(psi)^N)^Gamma -> g ⊗ A/J(psi_x)^N``."""

    def __init__(self, source: TruncatedEMA, target: TruncatedEMA):
        self.source = source
        self.target = target

    def __call__(self, x: Mapping) -> Element:
        return self.source.convert(x, self.target)

    def is_bijective(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        return rank(self({i: 1}) for i in range(self.source.dim)) == self.target.dim

    def preserves_brackets(self) -> bool:
        src, tgt = self.source, self.target
        images = [self({i: 1}) for i in range(src.dim)]
        for a in range(src.dim):
            for b in range(src.dim):
                lhs = self(src.table.get((a, b), {}))
                rhs = tgt.bracket(images[a], images[b])
                if lhs != rhs:
                    return False
        return True


def untwisted_algebra(alg: LieAlgebra, quotient: RingQuotient) -> TruncatedEMA:
    """``g ⊗ A/J`` for a ring with trivial group action."""
    ident = DiagramAutomorphism.identity(alg.rank)
    return TruncatedEMA(fold(alg, ident, quotient.field), quotient)


def untwist_isomorphism(L: TruncatedEMA, psi: WeightFunction, N: int | None = None) -> UntwistMap:
    """Untwisting along the canonical orbit section of ``psi``'s points."""
    N = L.quotient.N if N is None else N
    target = untwisted_algebra(L.algebra, section_quotient(psi, N))
    return UntwistMap(L, target)
