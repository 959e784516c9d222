"""Print order-preservation and cocycle results for the built-in generators.

    python3 scripts/compare_embeddings.py [--depth 4] [--dot-dir DIR]

With --dot-dir, a Bratteli diagram of each tower is written as DOT.
"""

import argparse
import os

from limitalg.dot import emit_dot
from limitalg.order import is_locally_order_preserving
from limitalg.spectrum import check_cocycle, distance_cocycle
from limitalg.tower import build_tower, refinement_rule, standard_rule, twist_rule


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--dot-dir")
    args = ap.parse_args()

    rules = {"refinement": refinement_rule(), "standard": standard_rule(), "twist": twist_rule(1)}
    for name, rule in rules.items():
        tower = build_tower(rule, args.depth)
        bad = [k for k, e in enumerate(tower.embeddings, 1) if not is_locally_order_preserving(e)]
        cocycle = check_cocycle(tower, distance_cocycle(tower))
        print(f"{name:11s} sizes {[a.blocks[0] for a in tower.levels]}")
        print(f"{'':11s} order preserving: {'all levels' if not bad else f'fails at {bad}'}")
        if cocycle.ok:
            print(f"{'':11s} distance cocycle: consistent")
        else:
            print(f"{'':11s} distance cocycle: level {cocycle.level}, {cocycle.pair} -> "
                  f"{cocycle.image}, labels {cocycle.labels}")
        if args.dot_dir:
            os.makedirs(args.dot_dir, exist_ok=True)
            with open(os.path.join(args.dot_dir, f"{name}.dot"), "w") as fh:
                fh.write(emit_dot(tower))


if __name__ == "__main__":
    main()
