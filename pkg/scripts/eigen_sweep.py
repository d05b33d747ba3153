#!/usr/bin/env python
"""Worst eigenrelation residual per grid, alpha, mode and sign convention.

    python scripts/eigen_sweep.py --primes 3 5 --kmax 4 > eigen.csv
"""
import argparse
import csv
import sys
import time
from collections import defaultdict

from qpdirac.grid import GridSpec
from qpdirac.operators import eigen_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--kmax", type=int, default=4, help="largest N + M")
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["p", "N", "M", "alpha", "convention", "mode", "max_residual", "over_opnorm", "seconds"])
    for p in args.primes:
        for K in range(1, args.kmax + 1):
            for M in range(1, K + 1):
                spec = GridSpec(p, K - M, M)
                worst = defaultdict(float)
                t0 = time.perf_counter()
                for row in eigen_sweep(spec, args.alphas, conventions=("corrected", "literal")):
                    for mode in ("spectral", "kernel"):
                        for conv, sfx in (("corrected", ""), ("literal", "_literal")):
                            key = (row["alpha"], conv, mode)
                            worst[key] = max(worst[key], row[f"residual_{mode}{sfx}"])
                dt = time.perf_counter() - t0
                for (a, conv, mode), res in sorted(worst.items()):
                    opnorm = float(p) ** (spec.M * a)  # largest |eigenvalue| on the grid
                    out.writerow([p, spec.N, spec.M, a, conv, mode, f"{res:.3e}", f"{res / opnorm:.3e}", f"{dt:.2f}"])
                sys.stdout.flush()


if __name__ == "__main__":
    main()
