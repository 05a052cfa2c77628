"""Shared helpers and independent oracles for the test suite.

The oracles use sympy matrices and explicit Euclidean root realizations so
they share no code with the package.
"""

import itertools

import sympy as sp

from emaweyl.cli.scenarios import SCENARIOS
from emaweyl.gammaring import GammaRing, WeightFunction
from emaweyl.liecore import DiagramAutomorphism, build_root_system, chevalley_algebra, fold
from emaweyl.scalars import RATIONALS

ACCEPTANCE_LINES = []


def scenario_psi(name, values):
    """Equivariant completion of ``values`` in a shipped scenario."""
    return SCENARIOS[name].psi(values)[1]


def untwisted(kind, rank, field=RATIONALS):
    alg = chevalley_algebra(build_root_system(kind, rank))
    return fold(alg, DiagramAutomorphism.identity(rank), field), GammaRing(field, 1)


def untwisted_psi(ring, values, rank):
    return WeightFunction(ring, values, rank)


# ---------------------------------------------------------------------------
# Cartan matrices from explicit simple roots


EUCLIDEAN_SIMPLE_ROOTS = {
    "A1": [(1, -1)],
    "A2": [(1, -1, 0), (0, 1, -1)],
    "A3": [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)],
    "C2": [(1, -1), (0, 2)],
    "D4": [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1)],
    "G2": [(1, -1, 0), (-2, 1, 1)],
}


def euclidean_cartan(label):
    """``C[i][j] = 2 (a_i, a_j) / (a_i, a_i)`` from a Euclidean realization."""
    roots = [sp.Matrix(r) for r in EUCLIDEAN_SIMPLE_ROOTS[label]]
    n = len(roots)
    return tuple(
        tuple(int(2 * roots[i].dot(roots[j]) / roots[i].dot(roots[i])) for j in range(n)) for i in range(n)
    )


def euclidean_positive_root_count(label):
    """Count positive roots by closing the simple roots under reflections."""
    simple = [sp.Matrix(r) for r in EUCLIDEAN_SIMPLE_ROOTS[label]]
    roots = {tuple(r) for r in simple}
    frontier = list(simple)
    while frontier:
        new = []
        for r in frontier:
            for a in simple:
                s = r - 2 * r.dot(a) / a.dot(a) * a
                key = tuple(s)
                if key not in roots:
                    roots.add(key)
                    new.append(s)
        frontier = new
    return len(roots) // 2


# ---------------------------------------------------------------------------
# sl2 evaluation modules


SL2 = {
    "e": sp.Matrix([[0, 1], [0, 0]]),
    "f": sp.Matrix([[0, 0], [1, 0]]),
    "h": sp.Matrix([[1, 0], [0, -1]]),
}


def _kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = sp.kronecker_product(out, m)
    return out


def sl2_evaluation_tensor_dimension(points):
    """Dimension of the cyclic submodule generated by the top vector of the
    tensor product of two-dimensional evaluation modules at the points."""
    m = len(points)
    ident = sp.eye(2)
    ops = []
    for flavor in "efh":
        for k in range(m + 1):
            total = sp.zeros(2 ** m)
            for i, a in enumerate(points):
                factors = [ident] * m
                factors[i] = SL2[flavor]
                total += sp.Rational(a) ** k * _kron_all(factors)
            ops.append(total)
    top = sp.zeros(2 ** m, 1)
    top[0] = 1
    basis = [top]
    frontier = [top]
    while frontier:
        new = []
        for v in frontier:
            for op in ops:
                w = op * v
                if sp.Matrix.hstack(*basis, w).rank() > len(basis):
                    basis.append(w)
                    new.append(w)
        frontier = new
    return len(basis)


# ---------------------------------------------------------------------------
# weights of the vector representation of sl_{n+1}


def sl_vector_weights(n):
    """Fundamental-weight coordinates of ``eps_i`` for ``sl_{n+1}``."""
    out = []
    for i in range(n + 1):
        w = [0] * n
        if i < n:
            w[i] += 1
        if i > 0:
            w[i - 1] -= 1
        out.append(tuple(w))
    return out


def all_permutations_symmetric(f):
    """Symmetrize a dict of exponent tuples."""
    out = {}
    for key, c in f.items():
        for perm in set(itertools.permutations(key)):
            out[perm] = out.get(perm, 0) + c
    return {k: c for k, c in out.items() if c}
