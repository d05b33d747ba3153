#!/usr/bin/env python
"""Zero-mode amplitude against the Monna coordinate, ready for plotting.

Each grid point x is placed on the real line by digit reversal; the columns
are the Monna position, the sign class pi(x) and the down component of the
zero mode (the up component is i times it).
"""
import argparse
import sys

import numpy as np

from qpdirac.grid import GridSpec
from qpdirac.jackiw_rebbi import build_zero_mode, chiral_digits


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--M", type=int, default=2)
    ap.add_argument("--r-minus", type=int, default=0)
    ap.add_argument("--r-plus", type=int, default=-1)
    ap.add_argument("--plot", help="also save a PNG here (needs matplotlib)")
    args = ap.parse_args()

    spec = GridSpec(args.p, args.N, args.M)
    jm, jp = chiral_digits(spec.p, -1)[0], chiral_digits(spec.p, 1)[0]
    psi = build_zero_mode(spec, args.r_minus, args.r_plus, jm, jp, dmode="none").field.down.values
    order = np.argsort(spec.monna, kind="stable")

    print("index,digits,monna,sign,re,im")
    for a in order:
        print(f"{a},{spec.digit_string(a)},{spec.monna[a]:.12g},{int(spec.sign[a])},"
              f"{psi[a].real:.12g},{psi[a].imag:.12g}")

    if args.plot:
        try:
            import matplotlib.pyplot as plt
        except ImportError:
            sys.exit("matplotlib is not installed; CSV written, plot skipped")
        fig, ax = plt.subplots(figsize=(8, 3))
        ax.scatter(spec.monna[order], psi[order].real, c=spec.sign[order], cmap="coolwarm", s=6)
        ax.set_xlabel("Monna coordinate")
        ax.set_ylabel("Re psi_down")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
