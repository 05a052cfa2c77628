"""Exact sparse linear algebra over the scalar fields.

Vectors are plain dicts mapping a hashable, orderable key to a nonzero
scalar.  ``Subspace`` keeps a fully reduced row-echelon basis so that
membership tests and quotient coordinates are single passes.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable, Mapping

import numpy as np
from gmpy2 import mpq

_ONE = mpq(1)

Vector = dict


def add_scaled(target: dict, coef, source: Mapping) -> None:
    """In place: ``target += coef * source``, dropping zeros."""
    if not coef:
        return
    for k, v in source.items():
        new = target.get(k, 0) + coef * v
        if new:
            target[k] = new
        else:
            target.pop(k, None)


def scaled(coef, v: Mapping) -> dict:
    if not coef:
        return {}
    return {k: coef * c for k, c in v.items()}


def combine(terms: Iterable[tuple]) -> dict:
    """Sum of ``coef * vector`` over (coef, vector) pairs."""
    out: dict = {}
    for coef, vec in terms:
        add_scaled(out, coef, vec)
    return out


class Subspace:
    """A subspace of a coordinate space, stored in reduced row-echelon form.

    The pivot of each row is its largest key; rows are normalised to a unit
    pivot and every pivot column is zero in all other rows.  Non-pivot keys
    therefore index a basis of the quotient space.
    """

    __slots__ = ("rows", "_cols")

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self.rows: dict[Hashable, dict] = {}
        self._cols: dict[Hashable, set] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def reduce(self, v: Mapping) -> dict:
        out = dict(v)
        for k in [k for k in v if k in self.rows]:
            c = out.get(k)
            if c:
                add_scaled(out, -c, self.rows[k])
        return out

    def __contains__(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping) -> dict | None:
        """Insert ``v``; return the new row, or None if ``v`` was dependent."""
        r = self.reduce(v)
        if not r:
            return None
        pivot = max(r)
        inv = _ONE / r[pivot]
        if inv != 1:
            r = {k: c * inv for k, c in r.items()}
        for other in list(self._cols.get(pivot, ())):
            row = self.rows[other]
            c = row[pivot]
            for k in row:
                self._cols[k].discard(other)
            add_scaled(row, -c, r)
            for k in row:
                self._cols.setdefault(k, set()).add(other)
        self.rows[pivot] = r
        for k in r:
            self._cols.setdefault(k, set()).add(pivot)
        return r


def rank(vectors: Iterable[Mapping]) -> int:
    return len(Subspace(vectors))


def solve_in_span(target: Mapping, vectors: list[Mapping]) -> list | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target``, or None."""
    # Tag each vector with a private marker coordinate that sorts below data keys.
    marked = Subspace()
    tags = []
    for i, v in enumerate(vectors):
        tag = (0, -1 - i)
        tags.append(tag)
        row = {(1, k): c for k, c in v.items()}
        row[tag] = 1
        marked.add(row)
    rem = marked.reduce({(1, k): c for k, c in target.items()})
    if any(k[0] == 1 for k in rem):
        return None
    # rem = target - sum c_i v_i expressed through tags: coefficient of tag_i is -c_i.
    return [-rem.get(tag, 0) for tag in tags]


def kernel(columns: list[Mapping]) -> list[dict]:
    """Basis of {c : sum_j c_j columns[j] = 0}, as dicts over column indices."""
    ambient = Subspace()
    relations = []
    for j, col in enumerate(columns):
        row = {(1, k): c for k, c in col.items()}
        row[(0, j)] = 1
        r = ambient.reduce(row)
        if any(k[0] == 1 for k in r):
            ambient.add(row)
        else:
            relations.append({k[1]: c for k, c in r.items()})
    return relations


def _components(v):
    """(c0, c1) of a scalar, whether a rational or a quadratic element."""
    c1 = getattr(v, "c1", None)
    if c1 is None:
        return v, 0
    return v.c0, c1


def jacobi_holds(dim: int, table: Mapping[tuple[int, int], Mapping], minpoly=None) -> bool:
    """Jacobi identity on all basis triples of a bracket table.

    ``table[(a, b)]`` is the bracket of basis vectors a and b.  Coefficients
    may be rationals or quadratic elements (``minpoly = (a0, a1)``).  After
    clearing a common denominator the check runs on integer float64 arrays
    through BLAS, which is exact while the magnitude guard holds; otherwise
    it falls back to exact dictionary arithmetic.
    """
    scale = 1
    comps = [np.zeros((dim, dim, dim)), np.zeros((dim, dim, dim))]
    for out in table.values():
        for v in out.values():
            for c in _components(v):
                den = int(getattr(c, "denominator", 1))
                scale = scale * den // math.gcd(scale, den)
    for (a, b), out in table.items():
        for c, v in out.items():
            for part, val in zip(comps, _components(v)):
                part[a, b, c] = int(val * scale)
    a0, a1 = (0, 0) if minpoly is None else minpoly
    bound = max(float(np.abs(x).max(initial=0.0)) for x in comps)
    if bound * bound * dim * 12 * (1 + abs(a0) + abs(a1)) >= 2.0 ** 53:
        return _jacobi_exact(dim, table)
    quadratic = bool(np.any(comps[1]))
    flat = [x.reshape(dim, dim * dim) for x in comps]
    pairs = [x.reshape(dim * dim, dim) for x in comps]

    def product(f, left, right):
        # (L0 + x L1)(R0 + x R1) with x^2 = -a1 x - a0
        p00 = f(left[0], right[0])
        if not quadratic:
            return [p00, 0]
        p11 = f(left[1], right[1])
        mixed = f(left[0] + left[1], right[0] + right[1]) - p00 - p11
        return [p00 - a0 * p11, mixed - a1 * p11]

    for i in range(dim):
        ci = [x[i] for x in comps]
        # [e_i, [e_j, e_k]] = sum_l C[j,k,l] C[i,l,:]
        t1 = product(lambda p, q: (p @ q).reshape(dim, dim, dim), pairs, ci)
        # [[e_i, e_j], e_k] = sum_l C[i,j,l] C[l,k,:]
        t2 = product(lambda p, q: (p @ q).reshape(dim, dim, dim), ci, flat)
        # [e_j, [e_i, e_k]] = sum_l C[i,k,l] C[j,l,:]
        t3 = product(lambda p, q: np.matmul(p[None], q), ci, comps)
        for x, y, z in zip(t1, t2, t3):
            if not np.array_equal(np.asarray(x), np.asarray(y) + np.asarray(z)):
                return False
    return True


def _jacobi_exact(dim: int, table) -> bool:
    def br(u, v):
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                t = table.get((a, b))
                if t:
                    add_scaled(out, ca * cb, t)
        return out

    for i in range(dim):
        for j in range(i + 1, dim):
            ij = table.get((i, j), {})
            for k in range(j + 1, dim):
                total = br(ij, {k: 1})
                add_scaled(total, 1, br(table.get((j, k), {}), {i: 1}))
                add_scaled(total, 1, br(table.get((k, i), {}), {j: 1}))
                if total:
                    return False
    return True
