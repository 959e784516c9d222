"""Finite-level spectra, graphs of normalizing elements, and integer cocycles on towers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra import AlgebraError, Diag, DigraphAlgebra, RegularEmbedding
from .order import PartialIsometryElement
from .tower import Tower, TowerError

Pair = tuple[Diag, Diag]


class CocycleError(ValueError):
    pass


@dataclass(frozen=True)
class LevelSpectrum:
    level: int
    pairs: frozenset[Pair] = field(repr=False)

    @property
    def is_antisymmetric(self) -> bool:
        return all(p == q or (q, p) not in self.pairs for p, q in self.pairs)

    def points(self) -> list[Diag]:
        return sorted({p for pair in self.pairs for p in pair})


def level_spectrum(alg: DigraphAlgebra, level: int = 0) -> LevelSpectrum:
    return LevelSpectrum(level, frozenset((u.range_diag, u.source_diag) for u in alg.units))


@dataclass(frozen=True)
class UnitGraph:
    level: int
    pairs: frozenset[Pair]


def unit_graph(alg: DigraphAlgebra, w: PartialIsometryElement) -> UnitGraph:
    for u in w.units:
        if u not in alg.units:
            raise AlgebraError(f"{tuple(u)} is not a unit of the algebra")
    return UnitGraph(w.level, frozenset((u.range_diag, u.source_diag) for u in w.units))


def embed_spectrum(emb: RegularEmbedding, pair: Pair) -> frozenset[Pair]:
    p, q = pair
    if not emb.source.has_pair(p, q):
        raise AlgebraError(f"{pair} is not in the source spectrum")
    return frozenset(zip(emb.image(p), emb.image(q)))


@dataclass(frozen=True)
class CocycleAssignment:
    """Integer labels ``labels[level][(x, y)]`` on spectrum pairs."""

    labels: Mapping[int, Mapping[Pair, int]]

    def label(self, level: int, pair: Pair) -> int:
        try:
            return self.labels[level][pair]
        except KeyError:
            raise CocycleError(f"no label for {pair} at level {level}") from None


def canonical_distance_cocycle(alg: DigraphAlgebra) -> dict[Pair, int]:
    """``c(i, j) = j - i`` on a single upper triangular block."""
    if len(alg.blocks) != 1:
        raise CocycleError("the distance cocycle is defined on single-block levels only")
    return {(u.range_diag, u.source_diag): u.col - u.row for u in alg.units}


def distance_cocycle(tower: Tower, depth: int | None = None) -> CocycleAssignment:
    depth = tower.top if depth is None else depth
    return CocycleAssignment({n: canonical_distance_cocycle(tower.level(n))
                              for n in range(1, depth + 1)})


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    reason: str = ""
    level: int | None = None
    pair: Pair | None = None
    image: Pair | None = None
    labels: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def _check_level(alg: DigraphAlgebra, n: int, c: CocycleAssignment) -> CocycleCheck | None:
    pairs = sorted(level_spectrum(alg).pairs)
    for pair in pairs:
        value = c.label(n, pair)
        x, y = pair
        if x == y and value != 0:
            return CocycleCheck(False, "nonzero on the diagonal", n, pair, labels=(value,))
        if value < 0:
            return CocycleCheck(False, "negative on the spectrum", n, pair, labels=(value,))
        if x != y and value == 0 and alg.is_triangular:
            return CocycleCheck(False, "zero off the diagonal of a triangular level",
                                n, pair, labels=(value,))
    for x, y in pairs:
        for z in alg.successors(y):
            z = (y[0], z)
            total = c.label(n, (x, y)) + c.label(n, (y, z))
            if total != c.label(n, (x, z)):
                return CocycleCheck(False, "not additive", n, (x, z),
                                    labels=(c.label(n, (x, y)), c.label(n, (y, z)),
                                            c.label(n, (x, z))))
    return None


def check_cocycle(tower: Tower, c: CocycleAssignment, depth: int | None = None) -> CocycleCheck:
    """Level-by-level additivity and sign checks, then exact label equality across each embedding.

    Passing at every computed depth is necessary for the limit to be analytic via ``c``,
    not sufficient.
    """
    depth = tower.top if depth is None else depth
    if not 1 <= depth <= tower.top:
        raise TowerError(f"depth {depth} outside 1..{tower.top}")
    for n in range(1, depth + 1):
        failure = _check_level(tower.level(n), n, c)
        if failure is not None:
            return failure
        if n == depth:
            break
        emb = tower.embedding(n)
        for pair in sorted(level_spectrum(tower.level(n)).pairs):
            source_label = c.label(n, pair)
            for image in sorted(embed_spectrum(emb, pair)):
                target_label = c.label(n + 1, image)
                if target_label != source_label:
                    return CocycleCheck(False, "labels change under the embedding", n, pair,
                                        image, (source_label, target_label))
    return CocycleCheck(True)
