#!/usr/bin/env python3
"""Calibrate the weight-k constants and report how the objective scales.

Runs the power-of-two search for the alpha constants, verifies the
resulting analytic point against the block programs it claims to satisfy,
and prints the objective/(n ln^k n) ratio over a doubling grid so the
growth behaviour is visible at a glance.  ``--output`` saves the table in
the alpha-table text format that ``relp sweep alphas --table`` consumes.

Example:
    python3 scripts/calibration_report.py --kmax 3 --nmax 24 -o alphas.txt
"""

from __future__ import annotations

import argparse
import math
import time
from pathlib import Path
from typing import Sequence

from relp import (
    analytic_g,
    build_relaxed_binomial,
    calibrate_alphas,
    check_feasible,
    g_objective,
    write_alpha_table,
)


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=24)
    ap.add_argument("--tolerance", type=float, default=1e-9)
    ap.add_argument("-o", "--output", help="write the alpha table here")
    args = ap.parse_args(argv)

    t0 = time.time()
    table = calibrate_alphas(args.kmax, args.nmax)
    print(f"calibrated in {time.time() - t0:.1f}s")
    for j, alpha in enumerate(table.alphas, start=1):
        print(f"  alpha_{j} = {alpha}  (weight {j + 1})")

    print("\nfeasibility of the analytic point at the calibration edge:")
    for k in range(2, args.kmax + 1):
        lp = build_relaxed_binomial(args.nmax, k)
        report = check_feasible(lp, analytic_g(args.nmax, k, table), args.tolerance)
        verdict = "feasible" if report.feasible else f"INFEASIBLE ({report.worst()})"
        print(
            f"  k={k} n={args.nmax}: {verdict}, "
            f"objective {float(report.objective):.4f}"
        )

    print("\nobjective / (n ln^k n) on a doubling grid:")
    header = ["k \\ n"] + [str(n) for n in (4, 8, 16, 32, 64)]
    print("  " + "  ".join(f"{h:>8}" for h in header))
    for k in range(1, args.kmax + 1):
        cells = [f"{'k=' + str(k):>8}"]
        for n in (4, 8, 16, 32, 64):
            if n < max(2, k):
                cells.append(f"{'-':>8}")
                continue
            ratio = g_objective(n, k, table) / (n * math.log(n) ** k)
            cells.append(f"{ratio:>8.4f}")
        print("  " + "  ".join(cells))
    for k, (lo, hi) in sorted(table.ratio_intervals.items()):
        print(f"  recorded interval k={k}: [{lo:.4f}, {hi:.4f}]")

    if args.output:
        Path(args.output).write_text(write_alpha_table(table), encoding="utf-8")
        print(f"\nwrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
