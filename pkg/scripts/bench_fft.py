#!/usr/bin/env python
"""Naive DFT against the radix-p FFT, with the FFT's operation count."""
import argparse

from qpdirac.cli import bench_rows
from qpdirac.fourier import fft_op_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print("size,naive_ms,fft_ms,ratio,fft_ops,max_abs_diff")
    for P, naive, fast, diff in bench_rows(args.p, range(1, args.kmax + 1), args.repeat):
        print(f"{P},{naive:.3f},{fast:.3f},{naive / fast:.1f},{fft_op_count(P, args.p)},{diff:.2e}")


if __name__ == "__main__":
    main()
