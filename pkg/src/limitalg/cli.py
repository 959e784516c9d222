"""Command-line front end.

Exit codes: 0 for success or a positive decision, 1 for a negative decision,
2 for malformed input or arguments.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import AlgebraError, DigraphAlgebra, MatrixUnit, validate
from .documents import (
    DocumentError,
    _parse_level,
    dumps,
    parse_cocycle,
    parse_presentation,
    parse_tower,
    read_json,
    tower_document,
)
from .dot import emit_dot
from .ideals import (
    DEFAULT_CAP,
    IdealError,
    classify_dimension,
    codimension,
    enumerate_ideals,
    ideal_system,
    is_meet_irreducible,
    lemma1_witness,
    lemma2_witness,
)
from .lex import (
    PresentationError,
    TargetNotPrimitive,
    approx_quotient,
    class_invariant,
    decide_epi,
    decide_iso,
    is_primitive,
    lex_tower,
    normalize,
)
from .order import (
    DiagonalProjection,
    OrderError,
    check_tower_order_preserving,
    diagonal_order,
    has_infinitely_many_restrictions,
    is_locally_order_preserving,
    minimal_subordinate_path,
    restriction_count,
)
from .spectrum import CocycleError, check_cocycle, distance_cocycle, level_spectrum
from .tower import DEFAULT_MAX_LEVELS, Tower, TowerError

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _parse_unit(text: str) -> MatrixUnit:
    try:
        block = 0
        if ":" in text:
            b, text = text.split(":", 1)
            block = int(b)
        i, j = text.split(",")
        return MatrixUnit(block, int(i), int(j))
    except ValueError:
        raise UsageError(f"units are written 'i,j' or 'b:i,j', got {text!r}") from None


def _parse_units(text: str | None) -> list[MatrixUnit]:
    if not text:
        return []
    return [_parse_unit(part) for part in text.split(";") if part]


def _parse_diags(text: str) -> frozenset:
    """``"1,3"`` names diagonals of block 0; ``"0:1,1:2"`` names blocks explicitly."""
    out = set()
    try:
        for piece in filter(None, text.split(",")):
            if ":" in piece:
                b, i = piece.split(":")
                out.add((int(b), int(i)))
            else:
                out.add((0, int(piece)))
    except ValueError:
        raise UsageError(f"cannot read diagonal indices from {text!r}") from None
    return frozenset(out)


def _fmt_unit(u: MatrixUnit) -> list[int]:
    return list(u)


def _fmt_diag(d) -> list[int]:
    return list(d)


# -- loading -----------------------------------------------------------------------------

def _load_tower(args, depth_default: int | None = None) -> Tower:
    data = read_json(args.tower)
    return parse_tower(data, args.depth if args.depth is not None else depth_default,
                       max_levels=args.horizon)


def _load_algebra(args) -> tuple[DigraphAlgebra, int]:
    """A level document, or level ``--level`` of a tower document."""
    data = read_json(args.input)
    if isinstance(data, dict) and "generator" in data:
        level = args.level or 1
        depth = args.depth if args.depth is not None else max(level - 1, 1)
        tower = parse_tower(data, depth, max_levels=args.horizon)
        return tower.level(level), level
    if isinstance(data, dict) and "blocks" in data and "units" in data:
        return _parse_level(data, 0), args.level or 1
    raise DocumentError("expected a tower document or a level document with blocks and units")


# -- handlers: each returns (exit code, result dict, verdict) ---------------------------

def cmd_build(args):
    tower = _load_tower(args)
    return EXIT_OK, tower_document(tower), "built"


def cmd_validate(args):
    data = read_json(args.tower)
    try:
        tower = parse_tower(data, args.depth, max_levels=args.horizon)
    except DocumentError as exc:
        if exc.kind != "semantic":
            raise
        return EXIT_NO, {"valid": False, "problem": str(exc)}, "invalid"
    for k, alg in enumerate(tower.levels, start=1):
        report = validate(alg, triangular=not args.allow_nontriangular)
        if not report.ok:
            return EXIT_NO, {"valid": False, "level": k, "problem": report.message}, "invalid"
    return EXIT_OK, {"valid": True, "levels": tower.top, "depth": tower.depth}, "valid"


def cmd_order(args):
    tower = _load_tower(args)
    level = args.level or 1
    rel = diagonal_order(tower.level(level), level)
    pairs = sorted(rel.pairs)
    return EXIT_OK, {"level": level, "count": len(pairs),
                     "pairs": [[_fmt_diag(p), _fmt_diag(q)] for p, q in pairs]}, "computed"


def cmd_lop(args):
    tower = _load_tower(args)
    embeddings = []
    ok = True
    for k, emb in enumerate(tower.embeddings, start=1):
        check = is_locally_order_preserving(emb)
        entry = {"embedding": k, "locally_order_preserving": check.ok}
        if not check.ok:
            ok = False
            entry["unit"] = _fmt_unit(check.unit)
            (p, q), (p2, q2) = check.counterexample
            entry["counterexample"] = {"pair": [_fmt_diag(p), _fmt_diag(q)],
                                       "image": [_fmt_diag(p2), _fmt_diag(q2)]}
        embeddings.append(entry)
    result: dict[str, Any] = {"scope": "presentation", "embeddings": embeddings}
    if ok:
        composite = check_tower_order_preserving(tower)
        result["composites_order_preserving"] = composite.ok
        ok = composite.ok
    return (EXIT_OK if ok else EXIT_NO), result, ("yes" if ok else "no")


def cmd_restrictions(args):
    tower = _load_tower(args)
    level = args.level or 1
    u = _parse_unit(args.unit)
    to_level = args.to or tower.top
    count = restriction_count(tower, u, level, to_level)
    verdict = has_infinitely_many_restrictions(tower, u, level)
    result = {"unit": _fmt_unit(u), "level": level, "to_level": to_level, "count": count,
              "infinitely_many": str(verdict), "exact": verdict.exact,
              "counts": [list(c) for c in verdict.counts]}
    code = EXIT_NO if verdict.verdict == "no" else EXIT_OK
    return code, result, str(verdict)


def cmd_minpath(args):
    tower = _load_tower(args)
    level = args.level or 1
    p = DiagonalProjection(level, _parse_diags(args.projection))
    to_level = args.to or tower.top
    path = minimal_subordinate_path(tower, p, to_level)
    return EXIT_OK, {"level": level, "to_level": to_level,
                     "path": [_fmt_diag(d) for d in path]}, "computed"


def cmd_ideals_enumerate(args):
    alg, level = _load_algebra(args)
    lattice = enumerate_ideals(alg, cap=args.cap, level=level)
    ideals = []
    for ideal in lattice.ideals:
        ideals.append({"units": [_fmt_unit(u) for u in ideal.sorted_units()],
                       "codimension": codimension(alg, ideal),
                       "meet_irreducible": is_meet_irreducible(lattice, ideal)})
    return EXIT_OK, {"level": level, "count": len(ideals), "ideals": ideals,
                     "covers": [list(c) for c in lattice.covers]}, "computed"


def _system(args):
    tower = _load_tower(args)
    level = args.level or 1
    to_level = args.to or tower.top
    return ideal_system(tower, level, _parse_units(args.seeds), to_level)


def _system_json(system) -> dict:
    return {"start": system.start, "stop": system.stop,
            "ideals": [{"level": i.level, "size": len(i.units),
                        "units": [_fmt_unit(u) for u in i.sorted_units()]}
                       for i in system.ideals]}


def cmd_ideals_system(args):
    return EXIT_OK, _system_json(_system(args)), "computed"


def cmd_ideals_classify(args):
    verdict = classify_dimension(_system(args))
    result = {"dimension": str(verdict), "kind": verdict.kind}
    if verdict.witness:
        result["witness"] = {"level": verdict.witness[0], "unit": _fmt_unit(verdict.witness[1])}
    return EXIT_OK, result, str(verdict)


def cmd_ideals_lemma1(args):
    w = lemma1_witness(_system(args))
    return EXIT_OK, {
        "p": [_fmt_diag(d) for d in sorted(w.p.indices)],
        "q": [_fmt_diag(d) for d in sorted(w.q.indices)],
        "unit": _fmt_unit(w.unit),
        "corners": [{"level": n, "units": [_fmt_unit(u) for u in sorted(c)]} for n, c in w.corners],
    }, "found"


def cmd_ideals_lemma2(args):
    w = lemma2_witness(_system(args), args.m)
    return EXIT_OK, {
        "side": w.side, "level": w.level,
        "projections": [[_fmt_diag(d) for d in sorted(p.indices)] for p in w.projections],
        "units": [_fmt_unit(u) for u in w.units],
    }, "found"


def cmd_spectrum(args):
    alg, level = _load_algebra(args)
    spec = level_spectrum(alg, level)
    pairs = sorted(spec.pairs)
    return EXIT_OK, {"level": level, "count": len(pairs), "antisymmetric": spec.is_antisymmetric,
                     "pairs": [[_fmt_diag(p), _fmt_diag(q)] for p, q in pairs]}, "computed"


def cmd_cocycle(args):
    tower = _load_tower(args)
    if args.cocycle:
        c = parse_cocycle(read_json(args.cocycle))
    else:
        c = distance_cocycle(tower)
    check = check_cocycle(tower, c)
    result: dict[str, Any] = {"pass": check.ok, "compatibility": "exact label equality"}
    if not check.ok:
        result.update(reason=check.reason, level=check.level,
                      pair=[_fmt_diag(d) for d in check.pair],
                      labels=list(check.labels))
        if check.image:
            result["image"] = [_fmt_diag(d) for d in check.image]
    return (EXIT_OK if check.ok else EXIT_NO), result, ("pass" if check.ok else "fail")


def _presentation(path):
    return parse_presentation(read_json(path))


def cmd_lex_quotient(args):
    P = _presentation(args.presentation)
    rng = random.Random(args.seed) if args.seed is not None else None
    q = approx_quotient(P, rng)
    result = q.to_json()
    result["normal_form"] = normalize(P).to_json()
    result["primitive"] = is_primitive(P)
    return EXIT_OK, result, "computed"


def cmd_lex_invariant(args):
    P = _presentation(args.presentation)
    classes = []
    for seg in normalize(P).segments:
        classes.append({"shape": seg.shape, "pair": class_invariant(seg, canonical=False).to_json(),
                        "canonical": class_invariant(seg).to_json()})
    return EXIT_OK, {"classes": classes}, "computed"


def cmd_lex_iso(args):
    decision = decide_iso(_presentation(args.first), _presentation(args.second))
    return (EXIT_OK if decision else EXIT_NO), decision.to_json(), ("yes" if decision else "no")


def cmd_lex_epi(args):
    decision = decide_epi(_presentation(args.source), _presentation(args.target))
    return (EXIT_OK if decision else EXIT_NO), decision.to_json(), ("yes" if decision else "no")


def cmd_lex_tower(args):
    P = _presentation(args.presentation)
    enumeration = None
    if args.enumeration:
        enumeration = [tuple(map(int, e.split(":"))) for e in args.enumeration.split(";")]
    tower = lex_tower(P, enumeration, args.depth or 3, max_levels=args.horizon)
    return EXIT_OK, tower_document(tower), "built"


def cmd_dot(args):
    if args.what == "bratteli":
        args.tower = args.input
        return EXIT_OK, {"dot": emit_dot(_load_tower(args))}, "rendered"
    alg, level = _load_algebra(args)
    if args.what == "lattice":
        obj = enumerate_ideals(alg, cap=args.cap, level=level)
    else:
        obj = level_spectrum(alg, level)
    return EXIT_OK, {"dot": emit_dot(obj)}, "rendered"


# -- argument parsing --------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--depth", type=_positive, help="number of embeddings to materialize")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="ideal enumeration unit cap")
    p.add_argument("--horizon", type=_positive, default=DEFAULT_MAX_LEVELS,
                   help="maximum number of levels to materialize")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, help="seed for randomized schedules")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="limitalg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"limitalg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, handler: Callable, *positional: str, target=sub, **extra):
        p = target.add_parser(name)
        for pos in positional:
            p.add_argument(pos)
        _common(p)
        for flag, kwargs in extra.items():
            p.add_argument("--" + flag.replace("_", "-"), **kwargs)
        p.set_defaults(handler=handler)
        return p

    level = {"type": _positive, "help": "level index (from 1)"}
    to = {"type": _positive, "help": "last level to compute"}
    add("build", cmd_build, "tower")
    add("validate", cmd_validate, "tower",
        allow_nontriangular={"action": "store_true", "help": "accept non-triangular levels"})
    add("order", cmd_order, "tower", level=level)
    add("lop-check", cmd_lop, "tower")
    add("restrictions", cmd_restrictions, "tower", level=level, to=to,
        unit={"required": True, "help": "unit as 'i,j' or 'b:i,j'"})
    add("minpath", cmd_minpath, "tower", level=level, to=to,
        projection={"required": True, "help": "diagonal indices, e.g. '2', '1,2' or '0:1,1:1'"})

    ideals = sub.add_parser("ideals")
    isub = ideals.add_subparsers(dest="ideals_command", required=True, parser_class=_Parser)
    add("enumerate", cmd_ideals_enumerate, "input", target=isub, level=level)
    seeds = {"default": "", "help": "seed units separated by ';'"}
    add("system", cmd_ideals_system, "tower", target=isub, level=level, to=to, seeds=seeds)
    add("classify", cmd_ideals_classify, "tower", target=isub, level=level, to=to, seeds=seeds)
    add("lemma1", cmd_ideals_lemma1, "tower", target=isub, level=level, to=to, seeds=seeds)
    add("lemma2", cmd_ideals_lemma2, "tower", target=isub, level=level, to=to, seeds=seeds,
        m={"type": _positive, "default": 3, "help": "number of projections"})

    add("spectrum", cmd_spectrum, "input", level=level)
    add("cocycle-check", cmd_cocycle, "tower",
        cocycle={"help": "cocycle JSON; default is the distance cocycle j - i"})

    lex = sub.add_parser("lex")
    lsub = lex.add_subparsers(dest="lex_command", required=True, parser_class=_Parser)
    add("quotient", cmd_lex_quotient, "presentation", target=lsub)
    add("invariant", cmd_lex_invariant, "presentation", target=lsub)
    add("iso", cmd_lex_iso, "first", "second", target=lsub)
    add("epi", cmd_lex_epi, "source", "target", target=lsub)
    add("tower", cmd_lex_tower, "presentation", target=lsub,
        enumeration={"help": "elements 'segment:key' separated by ';'"})

    add("dot", cmd_dot, "input", level=level,
        what={"choices": ("bratteli", "lattice", "spectrum"), "default": "bratteli"})
    return parser


def _command_name(args) -> str:
    parts = [args.command]
    for attr in ("ideals_command", "lex_command"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def _text(report: dict) -> str:
    lines = [f"{report['command']}: {report['verdict']}"]
    result = report.get("result", {})
    if "dot" in result:
        return result["dot"]
    for key, value in sorted(result.items()):
        if isinstance(value, list) and len(value) > 12:
            value = f"[{len(value)} entries]"
        lines.append(f"  {key}: {value}")
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Parse ``argv``, dispatch, and return the exit code and report."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_INPUT, {"command": None, "verdict": "error", "error": str(exc),
                            "tool_version": __version__}
    name = _command_name(args)
    started = time.perf_counter()
    try:
        code, result, verdict = args.handler(args)
        report: dict[str, Any] = {"command": name, "verdict": verdict, "result": result}
    except TargetNotPrimitive as exc:
        code, report = EXIT_INPUT, {"command": name, "verdict": "error",
                                    "error": "target_not_primitive", "detail": str(exc)}
    except (DocumentError, UsageError, AlgebraError, TowerError, OrderError, IdealError,
            CocycleError, PresentationError) as exc:
        code, report = EXIT_INPUT, {"command": name, "verdict": "error", "error": str(exc)}
    report["tool_version"] = __version__
    if args.timing:
        report["timing_ms"] = round(1000 * (time.perf_counter() - started), 3)
    report["_format"], report["_out"] = args.format, args.out
    return code, report


def render(report: dict, fmt: str) -> str:
    result = report.get("result")
    if report.get("verdict") == "built" and fmt == "json":
        return dumps(result)
    if fmt == "text":
        return result["dot"] if isinstance(result, dict) and "dot" in result else _text(report)
    return dumps(report)


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    fmt = report.pop("_format", "json")
    out = report.pop("_out", None)
    text = render(report, fmt)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT:
        print(f"error: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
