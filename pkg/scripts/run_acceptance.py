"""Run the acceptance criteria outside pytest, one line per criterion.

    python3 scripts/run_acceptance.py [N ...]

Exits 0 only when every selected criterion passes.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests"))

import conftest  # noqa: E402,F401  (registers and loads the fixed-seed hypothesis profile)
from test_acceptance import CRITERIA, run_criterion  # noqa: E402


def main(argv):
    numbers = [int(a) for a in argv] or sorted(CRITERIA)
    failed = 0
    for n in numbers:
        ok, line = run_criterion(n)
        print(line, flush=True)
        failed += not ok
    print(f"{len(numbers) - failed}/{len(numbers)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
