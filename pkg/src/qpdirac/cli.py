"""qpdirac command line.

Exit codes: 0 success, 2 usage or validation error, 3 inadmissible physics
(mass off the scale lattice, state not representable), 4 a numerical check
failed its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as qio
from .fourier import dft_fft, dft_naive, forward_fft
from .grid import Ball, GridFunction, GridSpec, ThetaIndex, indicator, theta
from .jackiw_rebbi import (
    InadmissibleMass,
    InadmissibleState,
    PhysicalParams,
    admissible_scale,
    build_zero_mode,
    chiral_digits,
    dispersion_table,
    matching_residual,
    matching_scan,
    literal_zero_mode_constant,
    solve_2d,
)
from .operators import apply_kernel, apply_spectral, eigen_sweep, gamma_p

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS, EXIT_TOLERANCE = 0, 2, 3, 4
EIGEN_TOL = 1e-9
FFT_TOL = 1e-10


class UsageError(ValueError):
    pass


def thread_count() -> int:
    raw = os.environ.get("QPDIRAC_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QPDIRAC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"QPDIRAC_THREADS must be a positive integer, got {raw!r}")
    return n


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _spec(args, N=None, M=None) -> GridSpec:
    return GridSpec(args.p, args.N if N is None else N, args.M if M is None else M)


def _params(args) -> PhysicalParams:
    return PhysicalParams(v=args.v, hbar=args.hbar)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(qio.fmt_float(x) if isinstance(x, float) else str(x) for x in row))
    return "\n".join(lines) + "\n"


# -- verify-eigen -------------------------------------------------------------

def cmd_verify_eigen(args) -> int:
    spec = _spec(args)
    alphas = args.alpha or [1.0]
    radii = list(range(1 - spec.M, spec.N + 1))
    workers = min(thread_count(), len(radii))
    sweep = lambda r: list(eigen_sweep(spec, alphas, conventions=(args.convention,), radii=[r]))  # noqa: E731
    with ThreadPoolExecutor(workers) as pool:
        rows = [row for part in pool.map(sweep, radii) for row in part]
    sfx = "_literal" if args.convention == "literal" else ""
    lam_key = "eigenvalue" + sfx
    worst = {m: max(row[f"residual_{m}{sfx}"] for row in rows) for m in ("spectral", "kernel")}
    n_theta = len(rows) // len(alphas)
    print(f"grid p={spec.p} N={spec.N} M={spec.M}  thetas={n_theta}  alphas={alphas}  eigenvalue={args.convention}")
    print(f"max residual spectral: {worst['spectral']:.3e}")
    print(f"max residual kernel:   {worst['kernel']:.3e}")
    if args.out is not None:
        header = ("r", "n", "j", "alpha", "eigenvalue", "residual_spectral", "residual_kernel")
        table = ((row["r"], str(row["n"]), row["j"], float(row["alpha"]), float(row[lam_key]),
                  row[f"residual_spectral{sfx}"], row[f"residual_kernel{sfx}"]) for row in rows)
        _emit(_csv_text(header, table), args.out)
    ok = max(worst.values()) < EIGEN_TOL
    print("PASS" if ok else f"FAIL (tolerance {EIGEN_TOL:g})")
    return EXIT_OK if ok else EXIT_TOLERANCE


# -- gamma ---------------------------------------------------------------------

def cmd_gamma(args) -> int:
    s = -args.alpha if args.s is None else args.s
    g = gamma_p(s, args.p)
    doc = {
        "p": args.p,
        "s": float(s),
        "re": g.real,
        "im": g.imag,
        "abs": abs(g),
        "expected_abs": float(args.p) ** (s - 0.5),
        "kind": "real" if args.p % 4 == 1 else "imaginary",
    }
    _emit(qio.dumps(doc) + "\n", args.out)
    return EXIT_OK


# -- solve-1d ------------------------------------------------------------------

def _scales(args, params: PhysicalParams) -> dict:
    """Resolve (r_minus, r_plus) from masses or from explicit scales."""
    out = {}
    for side, mass, r in (("minus", args.m1, args.r_minus), ("plus", args.m2, args.r_plus)):
        if mass is not None:
            choice = admissible_scale(mass, args.p, params, snap=args.snap)
            out[side] = (choice.r, choice.effective_mass, choice.snapped)
        elif r is not None:
            out[side] = (r, params.hbar * float(args.p) ** (1 - r) / params.v, False)
        else:
            raise UsageError(f"give --m{1 if side == 'minus' else 2} or --r-{side}")
    return out


def cmd_solve_1d(args) -> int:
    spec = _spec(args)
    params = _params(args)
    sc = _scales(args, params)
    (r_m, m1, snap1), (r_p, m2, snap2) = sc["minus"], sc["plus"]
    j_m = args.j_minus if args.j_minus is not None else chiral_digits(spec.p, -1)[0]
    j_p = args.j_plus if args.j_plus is not None else chiral_digits(spec.p, 1)[0]

    state = build_zero_mode(spec, r_m, r_p, j_m, j_p, params, normalization=args.normalization, dmode="kernel")
    _, _, roots = matching_scan(m1, m2, params, n=10_000)
    E_csv, R_csv, _ = matching_scan(m1, m2, params, n=args.scan_points)
    literal_c = literal_zero_mode_constant(m1, m2, spec.p, params)

    doc = state.to_dict()
    doc["constant"] = state.constant
    doc["literal_constant"] = literal_c
    doc["literal_constant_norm"] = state.norm * literal_c / state.constant
    doc["scale"] = {
        "m1": m1, "m2": m2, "snapped_m1": snap1, "snapped_m2": snap2,
    }
    doc["matching"] = {
        "residual_at_zero": matching_residual(0.0, m1, m2, params),
        "scan_points": 10_000,
        "sign_changes": roots,
    }

    print(f"r_minus={r_m} r_plus={r_p} j_minus={j_m} j_plus={j_p} E={state.E:g} norm={state.norm:.15g}",
          file=sys.stderr)
    if snap1 or snap2:
        print(f"snapped effective masses m1={m1:.17g} m2={m2:.17g}", file=sys.stderr)
    print(f"interface residual (kernel, reported): {state.residual_report['global_hamiltonian']:.6g}",
          file=sys.stderr)

    if args.out is None:
        sys.stdout.write(qio.dumps(doc) + "\n")
        return EXIT_OK
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out / "zero_mode.json").write_text(qio.dumps(doc) + "\n")
    else:
        (out / "zero_mode_up.csv").write_text(state.field.up.to_csv())
        (out / "zero_mode_down.csv").write_text(state.field.down.to_csv())
        meta = {k: v for k, v in doc.items() if k != "field"}
        (out / "zero_mode_meta.json").write_text(qio.dumps(meta) + "\n")
    scan_rows = ((float(e), float(r)) for e, r in zip(E_csv, R_csv))
    (out / "matching_scan.csv").write_text(_csv_text(("E", "residual"), scan_rows))
    return EXIT_OK


# -- solve-2d ------------------------------------------------------------------

def cmd_solve_2d(args) -> int:
    spec_x = _spec(args)
    spec_y = GridSpec(args.p, args.N if args.Ny is None else args.Ny, args.M if args.My is None else args.My)
    params = _params(args)
    sc = _scales(args, params)
    r_m, r_p = sc["minus"][0], sc["plus"][0]
    j_m = args.j_minus if args.j_minus is not None else chiral_digits(args.p, -1)[0]
    j_p = args.j_plus if args.j_plus is not None else chiral_digits(args.p, 1)[0]
    s = args.s if args.s is not None else chiral_digits(args.p, 1)[0]

    state = solve_2d(spec_x, spec_y, r_m, r_p, j_m, j_p, args.l, args.m_index, s, params)
    table = dispersion_table(args.p, args.ls, params)
    doc = state.to_dict()
    doc["dispersion"] = [{"l": l, "s": ss, "E": E} for l, ss, E in table]
    print(f"E={state.E:.17g} norm={state.norm:.15g} y_part={state.residual_report['y_part']:.3e}",
          file=sys.stderr)

    if args.format == "csv":
        _emit(_csv_text(("l", "s", "E"), ((l, ss, float(E)) for l, ss, E in table)), args.out)
    else:
        _emit(qio.dumps(doc) + "\n", args.out)
    return EXIT_OK


# -- bench-fft -----------------------------------------------------------------

def _best_ms(fn, x, p, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        y = fn(x, p)
        best = min(best, time.perf_counter() - t0)
    return 1e3 * best, y


def bench_rows(p: int, ks, repeat: int = 3, seed: int = 0):
    """Yield (size, naive_ms, fft_ms, max_abs_diff) for P = p^k."""
    rng = np.random.default_rng(seed)
    for k in ks:
        P = p**k
        x = rng.standard_normal(P) + 1j * rng.standard_normal(P)
        naive_ms, a = _best_ms(dft_naive, x, p, repeat)
        fft_ms, b = _best_ms(dft_fft, x, p, repeat)
        yield P, naive_ms, fft_ms, float(np.abs(a - b).max())


def cmd_bench_fft(args) -> int:
    if args.kmin < 0 or args.kmax < args.kmin:
        raise UsageError("need 0 <= kmin <= kmax")
    GridSpec(args.p, 0, 1)  # validates p
    rows = list(bench_rows(args.p, range(args.kmin, args.kmax + 1), args.repeat))
    _emit(_csv_text(("size", "naive_ms", "fft_ms"), ((P, n, f) for P, n, f, _ in rows)), args.out)
    worst = max(d for *_, d in rows)
    print(f"max |naive - fft| = {worst:.3e}", file=sys.stderr)
    if worst >= FFT_TOL:
        print(f"FAIL: transforms disagree beyond {FFT_TOL:g}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


# -- export --------------------------------------------------------------------

def cmd_export(args) -> int:
    spec = _spec(args)
    if args.kind == "theta":
        if args.r is None or args.j is None:
            raise UsageError("theta export needs --r and --j")
        phi = theta(spec, ThetaIndex(args.r, args.n, args.j))
    elif args.kind == "indicator":
        if args.radius is None:
            raise UsageError("indicator export needs --radius")
        phi = indicator(spec, Ball(args.center, args.radius))
    else:
        if not 0 <= args.index < spec.P:
            raise UsageError(f"--index must lie in [0, {spec.P})")
        phi = GridFunction.delta(spec, args.index)

    if args.apply == "spectral":
        phi = apply_spectral(phi, args.alpha)
    elif args.apply == "kernel":
        phi = apply_kernel(phi, args.alpha)
    elif args.apply == "fourier":
        phi = forward_fft(phi)
    text = phi.to_csv() if args.format == "csv" else phi.to_json() + "\n"
    _emit(text, args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid_args(sp, p=None, N=2, M=2):
    sp.add_argument("--p", type=int, required=p is None, default=p, help="odd prime")
    sp.add_argument("--N", type=int, default=N, help="grid extent: points of p^-N Z_p")
    sp.add_argument("--M", type=int, default=M, help="grid resolution: modulo p^M Z_p")


def _phys_args(sp):
    sp.add_argument("--v", type=float, default=1.0)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--m1", type=float, help="mass magnitude on Q_p^-")
    sp.add_argument("--m2", type=float, help="mass magnitude on Q_p^+")
    sp.add_argument("--r-minus", type=int, help="scale on Q_p^- when --m1 is not given")
    sp.add_argument("--r-plus", type=int, help="scale on Q_p^+ when --m2 is not given")
    sp.add_argument("--j-minus", type=int)
    sp.add_argument("--j-plus", type=int)
    sp.add_argument("--snap", action="store_true", help="snap masses to the nearest admissible scale")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qpdirac", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("verify-eigen", help="check D Theta = lambda Theta for every Theta on a grid")
    _grid_args(sp)
    sp.add_argument("--alpha", type=float, action="append", help="may be repeated (default 1)")
    sp.add_argument("--convention", choices=("corrected", "literal"), default="corrected",
                    help="eigenvalue sign pi(-j) (corrected) or pi^-1(j) (literal)")
    sp.add_argument("--out", type=Path, help="write the full residual table as CSV")
    sp.set_defaults(func=cmd_verify_eigen)

    sp = sub.add_parser("gamma", help="twisted gamma factor Gamma_p(s, pi)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=1.0, help="s defaults to -alpha")
    sp.add_argument("--s", type=float)
    sp.add_argument("--out", type=Path)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("solve-1d", help="interface zero mode")
    _grid_args(sp)
    _phys_args(sp)
    sp.add_argument("--normalization", choices=("unit", "literal"), default="unit")
    sp.add_argument("--scan-points", type=int, default=1000, help="rows in matching_scan.csv")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=Path, help="output directory (default: JSON on stdout)")
    sp.set_defaults(func=cmd_solve_1d)

    sp = sub.add_parser("solve-2d", help="chiral edge state and dispersion table")
    _grid_args(sp, p=3)
    sp.add_argument("--Ny", type=int)
    sp.add_argument("--My", type=int)
    _phys_args(sp)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--m-index", type=_fraction, default=Fraction(0))
    sp.add_argument("--s", type=int, help="Theta digit along y")
    sp.add_argument("--ls", type=_int_list, default=[0, 1, 2], help="scales for the dispersion table")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=Path)
    sp.set_defaults(func=cmd_solve_2d)

    sp = sub.add_parser("bench-fft", help="naive DFT against radix-p FFT")
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--kmin", type=int, default=1)
    sp.add_argument("--kmax", type=int, default=6)
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--out", type=Path)
    sp.set_defaults(func=cmd_bench_fft)

    sp = sub.add_parser("export", help="write a grid function, optionally with D or F applied")
    _grid_args(sp)
    sp.add_argument("--kind", choices=("theta", "indicator", "delta"), default="theta")
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=_fraction, default=Fraction(0))
    sp.add_argument("--j", type=int)
    sp.add_argument("--center", type=_fraction, default=Fraction(0))
    sp.add_argument("--radius", type=int, help="ball radius exponent")
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--apply", choices=("none", "spectral", "kernel", "fourier"), default="none")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=Path)
    sp.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InadmissibleMass, InadmissibleState) as exc:
        print(f"qpdirac: inadmissible: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except ValueError as exc:
        print(f"qpdirac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
