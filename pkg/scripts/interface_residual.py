#!/usr/bin/env python
"""Global Hamiltonian residual of the piecewise zero mode as the grid grows.

The zero mode is built from exact eigenfunctions on each sign class, but the
nonlocal operator couples the two classes, so ||H psi|| / ||psi|| is not
small.  This prints how that reported number behaves against N and M.
"""
import argparse

from qpdirac.grid import GridSpec
from qpdirac.jackiw_rebbi import build_zero_mode, chiral_digits


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--r-minus", type=int, default=0)
    ap.add_argument("--r-plus", type=int, default=0)
    ap.add_argument("--kmax", type=int, default=5)
    args = ap.parse_args()

    jm, jp = chiral_digits(args.p, -1)[0], chiral_digits(args.p, 1)[0]
    print("N,M,P,residual_kernel,residual_spectral")
    for K in range(2, args.kmax + 1):
        for M in range(1, K + 1):
            N = K - M
            if not (1 - M <= min(args.r_minus, args.r_plus) and max(args.r_minus, args.r_plus) <= N):
                continue
            spec = GridSpec(args.p, N, M)
            state = build_zero_mode(spec, args.r_minus, args.r_plus, jm, jp)
            spectral = build_zero_mode(spec, args.r_minus, args.r_plus, jm, jp, dmode="spectral")
            print(f"{N},{M},{spec.P},{state.residual_report['global_hamiltonian']:.6g},"
                  f"{spectral.residual_report['global_hamiltonian']:.6g}")


if __name__ == "__main__":
    main()
