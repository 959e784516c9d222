"""Graphviz DOT text for Bratteli diagrams, ideal lattices and level spectra.

Node and edge order is fixed so the output can be compared byte for byte.
"""

from __future__ import annotations

from .ideals import IdealLattice
from .spectrum import LevelSpectrum
from .tower import Tower


def _unit_label(units) -> str:
    if not units:
        return "0"
    return " ".join(f"{u.row}{u.col}" if u.block == 0 else f"{u.block}:{u.row}{u.col}"
                    for u in sorted(units))


def tower_dot(tower: Tower, name: str = "bratteli") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=circle];"]
    for k, alg in enumerate(tower.levels, start=1):
        nodes = " ".join(f'"L{k}B{b}" [label="{n}"];' for b, n in enumerate(alg.blocks))
        lines.append(f"  {{ rank=same; {nodes} }}")
    for k, emb in enumerate(tower.embeddings, start=1):
        for (b, c), m in sorted(emb.multiplicity.items()):
            lines.append(f'  "L{k}B{b}" -> "L{k + 1}B{c}" [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_dot(lattice: IdealLattice, name: str = "ideals") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for k, ideal in enumerate(lattice.ideals):
        lines.append(f'  I{k} [label="{_unit_label(ideal.units)}"];')
    for a, b in lattice.covers:
        lines.append(f"  I{a} -> I{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def spectrum_dot(spectrum: LevelSpectrum, name: str = "spectrum") -> str:
    """Covering pairs of the relation, reflexive pairs left out."""
    pairs = {(x, y) for x, y in spectrum.pairs if x != y}
    points = spectrum.points()
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for b, i in points:
        lines.append(f'  "{b}:{i}" [label="{i}"];')
    for x, y in sorted(pairs):
        if any((x, z) in pairs and (z, y) in pairs for z in points):
            continue
        lines.append(f'  "{x[0]}:{x[1]}" -> "{y[0]}:{y[1]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(obj, name: str | None = None) -> str:
    if isinstance(obj, Tower):
        return tower_dot(obj, name or "bratteli")
    if isinstance(obj, IdealLattice):
        return lattice_dot(obj, name or "ideals")
    if isinstance(obj, LevelSpectrum):
        return spectrum_dot(obj, name or "spectrum")
    raise TypeError(f"no DOT rendering for {type(obj).__name__}")
