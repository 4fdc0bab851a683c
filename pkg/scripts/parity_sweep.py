#!/usr/bin/env python3
"""Sweep grid resolutions and tabulate the parity bookkeeping per level.

Example:
    python3 scripts/parity_sweep.py --builtin rot90 --max-m 8
    python3 scripts/parity_sweep.py --map "x1*x1; 1 - x2" --n 2 --max-m 6
"""

import argparse

from stringchase import GridSpec, Labeling, builtin, parity_check, parse


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin")
    group.add_argument("--map")
    ap.add_argument("--n", type=int, help="dimension (with --map)")
    ap.add_argument("--min-m", type=int, default=1)
    ap.add_argument("--max-m", type=int, default=6)
    args = ap.parse_args()

    if args.builtin:
        g = builtin(args.builtin)
    else:
        g = parse(args.map, args.n).as_map_fn(name=args.map)

    print(f"map: {g.name}   n={g.n}")
    print(f"{'m':>4} {'k':>3} {'S1':>6} {'S2':>6} {'T1':>6} {'T2':>6} "
          f"{'fully':>6} {'identity':>9} {'odd':>5}")
    for m in range(args.min_m, args.max_m + 1):
        spec = GridSpec(g.n, m)
        report = parity_check(spec, Labeling(spec, g))
        for level in report.levels:
            print(f"{m:>4} {level.k:>3} {level.s1:>6} {level.s2:>6} "
                  f"{level.t1:>6} {level.t2:>6} {level.fully_labeled:>6} "
                  f"{str(level.identity_ok):>9} {str(level.odd_ok):>5}")


if __name__ == "__main__":
    main()
