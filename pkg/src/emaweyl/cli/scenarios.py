"""The shipped scenarios: a simple Lie algebra, a diagram automorphism, the
Laurent ring with ``t -> zeta t`` and a base field containing zeta."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..gammaring import GammaRing, WeightFunction
from ..liecore import DiagramAutomorphism, FoldedDatum, build_root_system, chevalley_algebra, fold
from ..scalars import EISENSTEIN, RATIONALS, SQRT2, Field

MINPOLY = {RATIONALS.name: "x", SQRT2.name: "x^2-2", EISENSTEIN.name: "x^2+x+1"}


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: str
    rank: int
    perm: tuple[int, ...]  # 0-based images of the nodes
    field: Field
    default_points: tuple[int, ...]
    default_psi: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def order(self) -> int:
        return DiagramAutomorphism.from_permutation(self.perm).order

    @property
    def minpoly(self) -> str:
        return MINPOLY[self.field.name]

    def header(self) -> dict:
        return {
            "scenario": self.name,
            "type": f"{self.kind}{self.rank}",
            "sigma": [p + 1 for p in self.perm],
            "order": self.order,
            "ring": "k[t, t^-1], t -> zeta*t",
            "field": self.field.name,
            "minpoly": self.minpoly,
        }

    def sigma(self) -> DiagramAutomorphism:
        return DiagramAutomorphism.from_permutation(self.perm)

    def ring(self) -> GammaRing:
        return _ring(self.field, self.order)

    def folded(self) -> FoldedDatum:
        return _folded(self.kind, self.rank, self.perm, self.field)

    def psi(self, values=None) -> tuple[WeightFunction, WeightFunction]:
        """``(given, completed)`` weight functions; values default to the
        scenario's default."""
        raw = dict(self.default_psi) if values is None else values
        given = WeightFunction(self.ring(), raw, self.rank)
        return given, given.equivariant_completion(self.sigma())


@lru_cache(maxsize=None)
def _ring(field: Field, order: int) -> GammaRing:
    return GammaRing(field, order)


@lru_cache(maxsize=None)
def _folded(kind: str, rank: int, perm: tuple, field: Field) -> FoldedDatum:
    alg = chevalley_algebra(build_root_system(kind, rank))
    return fold(alg, DiagramAutomorphism.from_permutation(perm), field)


SCENARIOS: dict[str, Scenario] = {
    "S1": Scenario("S1", "A", 1, (0,), RATIONALS, (1, 2), ((1, (1,)),)),
    "S2": Scenario("S2", "A", 3, (2, 1, 0), RATIONALS, (1, 2), ((1, (1, 0, 0)),)),
    "S3": Scenario("S3", "A", 2, (1, 0), SQRT2, (1, 2), ((1, (1, 0)),)),
    "S4": Scenario("S4", "D", 4, (2, 1, 3, 0), EISENSTEIN, (1, 2), ((1, (1, 0, 0, 0)),)),
}


def get(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
