"""Towers of digraph algebras and the generator rules that produce them.

Levels are numbered from 1. A tower of depth ``d`` has ``d`` embeddings and
``d + 1`` levels; ``embedding(k)`` joins level ``k`` to level ``k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .algebra import (
    AlgebraError,
    DigraphAlgebra,
    MatrixUnit,
    RegularEmbedding,
    make_upper_triangular,
    push_diagonals,
    push_units,
    refinement_embedding,
    standard_embedding,
    twist_embedding,
)

DEFAULT_MAX_LEVELS = 8
# longest level list computed so far for each lexicographic presentation and enumeration
_LEX_LONGEST: dict = {}

KINDS = ("refinement", "standard", "twist", "lexicographic", "explicit")


class TowerError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeneratorRule:
    """A rule producing level ``k`` and embedding ``k`` on demand.

    ``preperiod``/``period`` describe eventual periodicity of the embeddings.
    For the built-in kinds every step has multiplicity at least 2, which is
    recorded as ``(0, 1)``; explicit towers carry whatever the input declares.
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    preperiod: int | None = None
    period: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TowerError(f"unknown generator kind {self.kind!r}")
        if self.kind != "explicit" and self.period is None:
            object.__setattr__(self, "preperiod", 0)
            object.__setattr__(self, "period", 1)

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def level(self, k: int) -> DigraphAlgebra:
        if k < 1:
            raise TowerError("levels are numbered from 1")
        if self.kind in ("refinement", "standard"):
            return make_upper_triangular(self._size() * self._mult() ** (k - 1))
        if self.kind == "twist":
            return make_upper_triangular(2 ** (self._exponent() + k - 1))
        if self.kind == "lexicographic":
            return self._lex_data(k)[0][k - 1]
        levels = self.params["levels"]
        return levels[self._explicit_index(k, len(levels)) - 1]

    def embedding(self, k: int) -> RegularEmbedding:
        if k < 1:
            raise TowerError("embeddings are numbered from 1")
        if self.kind == "refinement":
            return refinement_embedding(self._size() * self._mult() ** (k - 1), self._mult())
        if self.kind == "standard":
            return standard_embedding(self._size() * self._mult() ** (k - 1), self._mult())
        if self.kind == "twist":
            return twist_embedding(self._exponent() + k - 1)
        if self.kind == "lexicographic":
            return self._lex_data(k + 1)[1][k - 1]
        embs = self.params["embeddings"]
        return embs[self._explicit_index(k, len(embs)) - 1]

    def max_depth(self) -> int | None:
        """Largest depth this rule can produce, or None when unbounded."""
        if self.kind == "explicit" and not self.is_periodic:
            return len(self.params["embeddings"])
        if self.kind == "lexicographic":
            from .lex import order_size

            size = order_size(self.params["presentation"])
            return None if size is None else size - 1
        return None

    def _size(self) -> int:
        return int(self.params.get("size", 2))

    def _mult(self) -> int:
        return int(self.params.get("multiplicity", 2))

    def _exponent(self) -> int:
        return int(self.params.get("exponent", 1))

    def _explicit_index(self, k: int, available: int) -> int:
        if k <= available:
            return k
        if not self.is_periodic:
            raise TowerError(f"explicit tower supplies only {available} entries, asked for {k}")
        base = self.preperiod + 1
        return base + (k - base) % self.period

    def _lex_data(self, n_levels: int):
        from .lex import lex_levels

        presentation = self.params["presentation"]
        enumeration = self.params.get("enumeration")
        key = (presentation, None if enumeration is None else tuple(map(tuple, enumeration)))
        cached = _LEX_LONGEST.get(key)
        if cached is not None and len(cached[0]) >= n_levels:
            return cached
        data = lex_levels(presentation, n_levels, key[1])
        _LEX_LONGEST[key] = data
        return data

    def describe(self) -> dict[str, Any]:
        out = {"kind": self.kind}
        for key in ("size", "multiplicity", "exponent"):
            if key in self.params:
                out[key] = self.params[key]
        if self.kind == "lexicographic":
            out["presentation"] = self.params["presentation"].to_json()
        if self.kind == "explicit" and self.is_periodic:
            out["preperiod"], out["period"] = self.preperiod, self.period
        return out


def refinement_rule(size: int = 2, multiplicity: int = 2) -> GeneratorRule:
    return GeneratorRule("refinement", {"size": size, "multiplicity": multiplicity})


def standard_rule(size: int = 2, multiplicity: int = 2) -> GeneratorRule:
    return GeneratorRule("standard", {"size": size, "multiplicity": multiplicity})


def twist_rule(exponent: int = 1) -> GeneratorRule:
    return GeneratorRule("twist", {"exponent": exponent})


def lexicographic_rule(presentation, enumeration=None) -> GeneratorRule:
    params = {"presentation": presentation}
    if enumeration is not None:
        params["enumeration"] = [tuple(e) for e in enumeration]
    return GeneratorRule("lexicographic", params)


def explicit_rule(levels: Sequence[DigraphAlgebra], embeddings: Sequence[RegularEmbedding],
                  preperiod: int | None = None, period: int | None = None) -> GeneratorRule:
    levels, embeddings = list(levels), list(embeddings)
    if len(levels) != len(embeddings) + 1:
        raise TowerError("explicit towers need exactly one more level than embeddings")
    for k, emb in enumerate(embeddings):
        if emb.source != levels[k] or emb.target != levels[k + 1]:
            raise TowerError(f"embedding {k + 1} does not join levels {k + 1} and {k + 2}")
    if (preperiod is None) != (period is None):
        raise TowerError("preperiod and period must be given together")
    if period is not None:
        if period < 1 or preperiod < 0 or preperiod + period > len(embeddings):
            raise TowerError("periodicity metadata does not fit the supplied embeddings")
        for j in range(preperiod + period + 1, len(embeddings) + 1):
            if embeddings[j - 1] != embeddings[j - period - 1]:
                raise TowerError(f"embedding {j} breaks the declared period")
        last = embeddings[preperiod + period - 1]
        first = embeddings[preperiod]
        if last.target != first.source:
            raise TowerError("declared period does not close up: levels do not repeat")
    return GeneratorRule("explicit", {"levels": levels, "embeddings": embeddings},
                         preperiod, period)


@dataclass(frozen=True, eq=False)
class Tower:
    levels: tuple[DigraphAlgebra, ...]
    embeddings: tuple[RegularEmbedding, ...]
    generator: GeneratorRule | None = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "embeddings", tuple(self.embeddings))
        if len(self.levels) != len(self.embeddings) + 1:
            raise TowerError("a tower needs exactly one more level than embeddings")
        for k, emb in enumerate(self.embeddings):
            if emb.source != self.levels[k] or emb.target != self.levels[k + 1]:
                raise TowerError(f"embedding {k + 1} does not join levels {k + 1} and {k + 2}")

    @property
    def depth(self) -> int:
        return len(self.embeddings)

    @property
    def top(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> DigraphAlgebra:
        self._check_level(k)
        return self.levels[k - 1]

    def embedding(self, k: int) -> RegularEmbedding:
        if not 1 <= k <= self.depth:
            raise TowerError(f"no embedding {k} in a tower of depth {self.depth}")
        return self.embeddings[k - 1]

    def _check_level(self, k: int):
        if not 1 <= k <= self.top:
            raise TowerError(f"level {k} outside 1..{self.top}")

    def chain(self, k: int, n: int) -> tuple[RegularEmbedding, ...]:
        self._check_level(k)
        self._check_level(n)
        if n < k:
            raise TowerError(f"cannot map level {k} down to level {n}")
        return self.embeddings[k - 1:n - 1]

    def image(self, units, k: int, n: int) -> set[MatrixUnit]:
        units = set(units)
        alg = self.level(k)
        for u in units:
            if u not in alg.units:
                raise AlgebraError(f"{tuple(u)} is not a unit of level {k}")
        return push_units(self.chain(k, n), units)

    def image_diagonals(self, diags, k: int, n: int) -> list:
        return push_diagonals(self.chain(k, n), diags)

    def extended(self, top: int, max_levels: int | None = None) -> "Tower":
        """The same tower with at least ``top`` levels, regenerated from the rule."""
        if top <= self.top:
            return self
        if self.generator is None:
            raise TowerError("tower has no generator to extend from")
        return build_tower(self.generator, top - 1, max_levels=max(max_levels or 0, top))


def build_tower(rule: GeneratorRule, depth: int, max_levels: int = DEFAULT_MAX_LEVELS) -> Tower:
    if depth < 1:
        raise TowerError(f"depth must be at least 1, got {depth}")
    if depth + 1 > max_levels:
        raise TowerError(f"depth {depth} needs {depth + 1} levels, cap is {max_levels}")
    bound = rule.max_depth()
    if bound is not None and depth > bound:
        raise TowerError(f"{rule.kind} generator supports depth at most {bound}")
    rule.level(depth + 1)  # top first, so generators that build prefixes reuse one computation
    levels = [rule.level(k) for k in range(1, depth + 2)]
    embeddings = [rule.embedding(k) for k in range(1, depth + 1)]
    return Tower(tuple(levels), tuple(embeddings), rule)


def constant_tower(alg: DigraphAlgebra, depth: int, max_levels: int = DEFAULT_MAX_LEVELS) -> Tower:
    """Tower repeating ``alg`` under identity embeddings, marked periodic."""
    from .algebra import identity_embedding

    rule = explicit_rule([alg, alg], [identity_embedding(alg)], preperiod=0, period=1)
    return build_tower(rule, depth, max_levels)
