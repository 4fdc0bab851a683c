#!/usr/bin/env python3
"""Show how the witness residual falls as the grid is refined.

The diameter column shrinks like sqrt(n)/m by construction; the residual
column tracks it for Lipschitz maps but is not guaranteed monotone.

Example:
    python3 scripts/refinement_curve.py --builtin dottie --tol 1e-6
"""

import argparse

from stringchase import SolveConfig, builtin, parse, solve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin")
    group.add_argument("--map")
    ap.add_argument("--n", type=int, help="dimension (with --map)")
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--max-m", type=int, default=2 ** 16)
    ap.add_argument("--engine", choices=["path", "oracle"], default="path")
    args = ap.parse_args()

    if args.builtin:
        g = builtin(args.builtin)
    else:
        g = parse(args.map, args.n).as_map_fn(name=args.map)

    report = solve(g, SolveConfig(tol=args.tol, max_m=args.max_m, engine=args.engine))

    print(f"map: {g.name}   n={g.n}   engine={args.engine}")
    print(f"{'m':>8} {'residual':>14} {'diameter':>12} {'evals':>8}")
    for h in report.history:
        print(f"{h.m:>8} {h.residual:>14.3e} {h.diameter:>12.3e} {h.evals:>8}")
    status = "converged" if report.converged else "NOT converged"
    print(f"{status}: z = {tuple(round(z, 12) for z in report.z)}  "
          f"residual = {report.residual:.3e}  m_final = {report.m_final}")


if __name__ == "__main__":
    main()
