#!/usr/bin/env python3
"""Independent re-verification of a quatdom generator dump.

Reads the JSON written by `quatdom analyze --json` and checks every
generator tuple against the norm equation x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1
with Python integers. Exits nonzero on any violation.
"""

import json
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: check_generators.py DUMP.json", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as f:
        data = json.load(f)
    p, a = data["p"], data["a"]
    gens = data["generators"]
    bad = 0
    for x0, x1, x2, x3 in gens:
        if x0 * x0 - a * x1 * x1 - p * x2 * x2 + a * p * x3 * x3 != 1:
            print(f"norm violation: ({x0},{x1},{x2},{x3})", file=sys.stderr)
            bad += 1
    if not gens:
        print("empty generator list", file=sys.stderr)
        return 1
    print(f"checked {len(gens)} generators of Gamma_{{{p},{a}}}: "
          f"{'all satisfy the norm equation' if bad == 0 else f'{bad} violations'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
