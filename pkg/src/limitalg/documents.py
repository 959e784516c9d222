"""JSON documents: towers, presentations, cocycles, and canonical serialization.

Blocks are numbered from 0 and diagonal indices inside a block from 1; emitted
tower documents say so in their ``convention`` field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .algebra import (
    AlgebraError,
    DigraphAlgebra,
    MatrixUnit,
    RegularEmbedding,
    check_algebra,
    make_full_matrix,
    make_upper_triangular,
)
from .lex import LinearOrderPresentation, PresentationError
from .spectrum import CocycleAssignment
from .tower import (
    DEFAULT_MAX_LEVELS,
    GeneratorRule,
    Tower,
    TowerError,
    build_tower,
    explicit_rule,
    lexicographic_rule,
)

CONVENTION = "blocks 0-based, diagonal indices 1-based"

_periodic = {
    "type": "object",
    "properties": {
        "pre": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "period": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
    },
    "required": ["period"],
    "additionalProperties": False,
}

PRESENTATION_SCHEMA = {
    "type": "object",
    "properties": {
        "segments": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["shape"],
                "oneOf": [
                    {"properties": {"shape": {"const": "finite"},
                                    "nu": {"type": "array", "minItems": 1,
                                           "items": {"type": "integer", "minimum": 2}}},
                     "required": ["nu"], "additionalProperties": False},
                    {"properties": {"shape": {"enum": ["omega_plus", "omega_minus"]},
                                    "pre": _periodic["properties"]["pre"],
                                    "period": _periodic["properties"]["period"]},
                     "required": ["period"], "additionalProperties": False},
                    {"properties": {"shape": {"const": "zeta"},
                                    "descending": _periodic, "ascending": _periodic},
                     "required": ["descending", "ascending"], "additionalProperties": False},
                ],
            },
        },
    },
    "required": ["segments"],
}

_unit_list = {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                         "minItems": 3, "maxItems": 3}}

TOWER_SCHEMA = {
    "type": "object",
    "properties": {
        "depth": {"type": "integer"},
        "convention": {"type": "string"},
        "generator": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["refinement", "standard", "twist", "lexicographic", "explicit"]},
                "size": {"type": "integer", "minimum": 1},
                "multiplicity": {"type": "integer", "minimum": 2},
                "exponent": {"type": "integer", "minimum": 0},
                "presentation": PRESENTATION_SCHEMA,
                "enumeration": {"type": "array", "items": {
                    "type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
                "levels": {"type": "array", "minItems": 1, "items": {
                    "type": "object",
                    "properties": {
                        "blocks": {"type": "array", "minItems": 1,
                                   "items": {"type": "integer", "minimum": 1}},
                        "units": {"oneOf": [{"enum": ["upper", "full"]}, _unit_list]},
                    },
                    "required": ["blocks", "units"],
                }},
                "embeddings": {"type": "array", "items": {
                    "type": "object",
                    "properties": {"spread": {"type": "array", "items": {
                        "type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                                   "minItems": 2, "maxItems": 2}}}},
                    "required": ["spread"],
                }},
                "preperiod": {"type": "integer", "minimum": 0},
                "period": {"type": "integer", "minimum": 1},
            },
            "required": ["kind"],
        },
        "source_generator": {"type": "object"},
    },
    "required": ["generator"],
}

COCYCLE_SCHEMA = {
    "type": "object",
    "patternProperties": {
        "^[0-9]+$": {"type": "object",
                     "patternProperties": {"^([0-9]+:)?[0-9]+,[0-9]+$": {"type": "integer"}},
                     "additionalProperties": False},
    },
    "additionalProperties": False,
}


class DocumentError(ValueError):
    """``kind`` is "io", "syntax", "schema" or "semantic"."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: str | None = None, kind: str = "semantic"):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.line, self.column, self.path, self.kind = line, column, path, kind


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno, kind="syntax") from None


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}", kind="io") from None
    return loads(text)


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _validate(data: Any, schema: dict):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise DocumentError(f"schema violation: {err.message}", path=_path(err.absolute_path),
                            kind="schema")


# -- presentations -----------------------------------------------------------------------

def parse_presentation(data: Any) -> LinearOrderPresentation:
    _validate(data, PRESENTATION_SCHEMA)
    try:
        return LinearOrderPresentation.from_json(data)
    except PresentationError as exc:
        raise DocumentError(str(exc), path="$.segments") from None


# -- towers ------------------------------------------------------------------------------

def _parse_level(data: dict, k: int) -> DigraphAlgebra:
    blocks = tuple(data["blocks"])
    units = data["units"]
    if units == "upper":
        parts = [make_upper_triangular(n).units for n in blocks]
    elif units == "full":
        parts = [make_full_matrix(n).units for n in blocks]
    else:
        alg = DigraphAlgebra(blocks, frozenset(MatrixUnit(*u) for u in units))
        problem = check_algebra(alg)
        if problem:
            raise DocumentError(f"invalid algebra: {problem}", path=f"$.generator.levels[{k}]")
        return alg
    return DigraphAlgebra(blocks, frozenset(MatrixUnit(b, u.row, u.col)
                                            for b, part in enumerate(parts) for u in part))


def parse_generator(data: dict) -> GeneratorRule:
    kind = data["kind"]
    if kind in ("refinement", "standard"):
        return GeneratorRule(kind, {"size": data.get("size", 2),
                                    "multiplicity": data.get("multiplicity", 2)})
    if kind == "twist":
        return GeneratorRule(kind, {"exponent": data.get("exponent", 1)})
    if kind == "lexicographic":
        if "presentation" not in data:
            raise DocumentError("lexicographic generator needs a presentation", path="$.generator")
        return lexicographic_rule(parse_presentation(data["presentation"]), data.get("enumeration"))
    if "levels" not in data or "embeddings" not in data:
        raise DocumentError("explicit generator needs levels and embeddings", path="$.generator")
    levels = [_parse_level(level, k) for k, level in enumerate(data["levels"])]
    embeddings = []
    for k, emb in enumerate(data["embeddings"]):
        if k + 1 >= len(levels):
            raise DocumentError("more embeddings than level pairs", path=f"$.generator.embeddings[{k}]")
        try:
            embeddings.append(RegularEmbedding(levels[k], levels[k + 1],
                                               tuple(tuple(map(tuple, row)) for row in emb["spread"])))
        except AlgebraError as exc:
            raise DocumentError(f"invalid embedding: {exc}",
                                path=f"$.generator.embeddings[{k}]") from None
    try:
        return explicit_rule(levels, embeddings, data.get("preperiod"), data.get("period"))
    except TowerError as exc:
        raise DocumentError(str(exc), path="$.generator") from None


def parse_tower(data: Any, depth: int | None = None, max_levels: int = DEFAULT_MAX_LEVELS) -> Tower:
    """Materialize a tower document; ``depth`` overrides the document's own."""
    _validate(data, TOWER_SCHEMA)
    rule = parse_generator(data["generator"])
    if rule.kind == "explicit" and "source_generator" in data:
        # kept only so that re-emitting the document reproduces it
        rule = GeneratorRule("explicit", {**rule.params, "source": data["source_generator"]},
                             rule.preperiod, rule.period)
    if depth is None:
        depth = data.get("depth")
    if depth is None:
        if rule.kind != "explicit":
            raise DocumentError("tower document needs a depth", path="$.depth")
        depth = len(rule.params["embeddings"])
    try:
        return build_tower(rule, depth, max_levels)
    except (TowerError, PresentationError) as exc:
        raise DocumentError(str(exc), path="$.depth") from None


def level_document(alg: DigraphAlgebra) -> dict:
    return {"blocks": list(alg.blocks), "units": [list(u) for u in alg.sorted_units()]}


def tower_document(tower: Tower) -> dict:
    """Explicit document listing every level and spread of ``tower``."""
    generator: dict[str, Any] = {
        "kind": "explicit",
        "levels": [level_document(alg) for alg in tower.levels],
        "embeddings": [{"spread": emb.spread_table()} for emb in tower.embeddings],
    }
    doc: dict[str, Any] = {"convention": CONVENTION, "depth": tower.depth, "generator": generator}
    rule = tower.generator
    if rule is not None and rule.kind == "explicit":
        if rule.is_periodic:
            generator["preperiod"], generator["period"] = rule.preperiod, rule.period
        if "source" in rule.params:
            doc["source_generator"] = rule.params["source"]
    elif rule is not None:
        doc["source_generator"] = rule.describe()
    return doc


# -- cocycles ----------------------------------------------------------------------------

def _pair_key(key: str):
    block = 0
    if ":" in key:
        b, key = key.split(":", 1)
        block = int(b)
    i, j = key.split(",")
    return ((block, int(i)), (block, int(j)))


def parse_cocycle(data: Any) -> CocycleAssignment:
    _validate(data, COCYCLE_SCHEMA)
    return CocycleAssignment({int(level): {_pair_key(k): v for k, v in labels.items()}
                              for level, labels in data.items()})


def cocycle_document(c: CocycleAssignment) -> dict:
    out = {}
    for level, labels in sorted(c.labels.items()):
        out[str(level)] = {
            (f"{x[1]},{y[1]}" if x[0] == 0 else f"{x[0]}:{x[1]},{y[1]}"): v
            for (x, y), v in sorted(labels.items())}
    return out
