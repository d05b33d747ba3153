"""The twisted Taibleson-Vladimirov operator D^{alpha,pi}.

Two evaluations are provided:

* spectral: F^-1( pi^-1(xi) |xi|^alpha F phi ) through the grid transform;
* kernel:   integral pi(y) (phi(x-y) - phi(x)) / (Gamma_p(-alpha) |y|^(alpha+1)) dy,
  which is a finite sum at grid points and is exact for every grid function.

On the grid the kernel sum is a convolution whose weights add up to zero
(sum_j (j/p) = 0), so its symbol vanishes at xi = 0 just like the spectral
multiplier; the two forms therefore agree on all grid functions, not only on
the mean-zero ones.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .fourier import dft_fft, dft_naive
from .grid import GridFunction, GridSpec, ThetaIndex, l2_norm, theta, theta_batch
from .padic import PrimeContext, legendre, prime_context

__all__ = [
    "gamma_p",
    "multiplier",
    "kernel_weights",
    "apply_spectral",
    "apply_kernel",
    "spectral_array",
    "kernel_array",
    "theta_eigenvalue",
    "eigen_residual",
    "eigen_sweep",
]


def gamma_p(s: float, ctx: PrimeContext | int) -> complex:
    """Gamma_p(s, pi) = p^s (1/p) sum_j (j/p) exp(2 pi i j / p)."""
    if not isinstance(ctx, PrimeContext):
        ctx = prime_context(ctx)
    p = ctx.p
    g = sum(legendre(j, ctx) * cmath.exp(2j * math.pi * j / p) for j in range(1, p))
    # the quadratic Gauss sum is sqrt(p) or i sqrt(p); clean the rounding
    g = complex(g.real, 0.0) if p % 4 == 1 else complex(0.0, g.imag)
    return p**s * g / p


def multiplier(dual: GridSpec, alpha: float) -> np.ndarray:
    """pi^-1(xi_b) |xi_b|^alpha on a frequency grid, 0 at xi = 0."""
    return dual.sign * dual.abs_value**alpha


def kernel_weights(spec: GridSpec, alpha: float) -> np.ndarray:
    """pi(y_b) |y_b|^(-alpha-1) for b != 0 and 0 at the zero coset."""
    w = np.zeros(spec.P)
    nz = np.arange(1, spec.P)
    w[nz] = spec.sign[nz] * spec.abs_value[nz] ** (-alpha - 1.0)
    return w


def spectral_array(values: np.ndarray, spec: GridSpec, alpha: float, fast: bool = True) -> np.ndarray:
    """Spectral D applied along the last axis of ``values``."""
    core = dft_fft if fast else dft_naive
    dual = spec.dual()
    F = core(values, spec.p) / spec.p**spec.M
    F = F * multiplier(dual, alpha)
    X = core(F, spec.p) / spec.p**spec.N
    return X[..., (-np.arange(spec.P)) % spec.P]


def _kernel_direct(values: np.ndarray, spec: GridSpec, alpha: float) -> np.ndarray:
    P = spec.P
    w = kernel_weights(spec, alpha)
    a = np.arange(P, dtype=np.int64)
    out = np.empty(values.shape, dtype=complex)
    rows = max(1, (1 << 20) // P)
    for a0 in range(0, P, rows):
        aa = a[a0 : a0 + rows]
        shifted = values[..., (aa[:, None] - a[None, :]) % P]  # phi(x_a - y_b)
        out[..., a0 : a0 + rows] = (shifted - values[..., aa, None]) @ w
    return out


def _coset_shells(values: np.ndarray, spec: GridSpec) -> list[np.ndarray]:
    # Group the y-sum by shell ord_p(b) = k and leading digit d: the weight is
    # constant on b in p^k d + p^(k+1) Z, and summing phi(x_a - y_b) over that
    # set only needs the coset sums of phi modulo p^(k+1).  The -phi(x) terms
    # cancel shell by shell because sum_d (d/p) = 0.  Shell k has period p^(k+1).
    p, P = spec.p, spec.P
    leg = spec.ctx.legendre_array().astype(float)
    batch = values.shape[:-1]
    shells = []
    for k in range(spec.K):
        q = p ** (k + 1)
        T = values.reshape(*batch, P // q, q).sum(axis=-2)  # T[c] = sum over a = c mod q
        c = np.arange(q)
        G = np.zeros(T.shape, dtype=complex)
        for d in range(1, p):
            G += leg[d] * T[..., (c - p**k * d) % q]
        shells.append(G)
    return shells


def _combine_shells(shells: list[np.ndarray], spec: GridSpec, alpha: float) -> np.ndarray:
    reps = [1] * (shells[0].ndim - 1) + [spec.p]
    acc = 0.0
    for k, G in enumerate(shells):
        if k:
            acc = np.tile(acc, reps)
        acc = acc + float(spec.p) ** (-(spec.N - k) * (alpha + 1.0)) * G
    return acc


def _kernel_coset(values: np.ndarray, spec: GridSpec, alpha: float) -> np.ndarray:
    return _combine_shells(_coset_shells(values, spec), spec, alpha)


def kernel_array(values: np.ndarray, spec: GridSpec, alpha: float, method: str = "coset") -> np.ndarray:
    """Kernel-form D applied along the last axis of ``values``."""
    values = np.asarray(values, dtype=complex)
    if method == "coset":
        s = _kernel_coset(values, spec, alpha)
    elif method == "direct":
        s = _kernel_direct(values, spec, alpha)
    else:
        raise ValueError(f"unknown kernel method {method!r}")
    return s / (gamma_p(-alpha, spec.ctx) * spec.p**spec.M)


def apply_spectral(phi: GridFunction, alpha: float = 1.0, fast: bool = True) -> GridFunction:
    return GridFunction(phi.spec, spectral_array(phi.values, phi.spec, alpha, fast))


def apply_kernel(phi: GridFunction, alpha: float = 1.0, method: str = "coset") -> GridFunction:
    """Kernel form at every grid point.

    ``method="direct"`` is the literal O(P^2) double sum; ``"coset"`` regroups
    the same sum by kernel shells in O(P (N+M) p).
    """
    return GridFunction(phi.spec, kernel_array(phi.values, phi.spec, alpha, method))


def theta_eigenvalue(p: int, idx: ThetaIndex, alpha: float = 1.0) -> float:
    """Eigenvalue of Theta_rnj: pi(-j) p^((1-r) alpha).

    The Fourier transform of Theta_rnj lives on -p^(r-1) j + p^r Z_p, so the
    multiplier is read at leading digit -j; pi(-j) = pi(-1) pi(j).
    """
    return legendre((-idx.j) % p, p) * float(p) ** ((1 - idx.r) * alpha)


def eigen_residual(spec: GridSpec, idx: ThetaIndex, alpha: float = 1.0, mode: str = "spectral",
                   eigenvalue: float | None = None) -> float:
    """||D Theta - lambda Theta|| / ||Theta|| with lambda from theta_eigenvalue."""
    th = theta(spec, idx)
    if mode == "spectral":
        d = apply_spectral(th, alpha)
    elif mode == "kernel":
        d = apply_kernel(th, alpha)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lam = theta_eigenvalue(spec.p, idx, alpha) if eigenvalue is None else eigenvalue
    return l2_norm(d - lam * th) / l2_norm(th)


_BATCH_ELEMENTS = 1 << 20


def eigen_sweep(spec: GridSpec, alphas=(1.0,), modes=("spectral", "kernel"), conventions=("corrected",),
                radii=None):
    """Residuals of the eigenrelation for every representable Theta_rnj.

    Yields one dict per (Theta, alpha) with keys r, n, j, alpha and, per
    convention, the eigenvalue and one residual per mode.  The "corrected"
    convention uses pi(-j) p^((1-r) alpha) (keys ``eigenvalue``,
    ``residual_<mode>``); "literal" uses pi^-1(j) p^((1-r) alpha) (keys
    ``eigenvalue_literal``, ``residual_<mode>_literal``).

    Thetas sharing (r, j) are evaluated as one batch; the forward transform
    and the kernel shell sums do not depend on alpha and are computed once.
    Every Theta is still pushed through both operators on its own row.
    ``radii`` restricts the sweep to some r values (used to split work).
    """
    p, P, M, N = spec.p, spec.P, spec.M, spec.N
    mults = [multiplier(spec.dual(), a) for a in alphas]
    neg = (-np.arange(P)) % P
    block = max(1, _BATCH_ELEMENTS // P)
    suffix = {"corrected": "", "literal": "_literal"}
    for r in range(1 - M, N + 1) if radii is None else radii:
        q = p ** (N - r)
        for j in range(1, p):
            signs = {c: legendre(j if c == "literal" else (-j) % p, p) for c in conventions}
            for c0 in range(0, q, block):
                offsets = np.arange(c0, min(q, c0 + block))
                T = theta_batch(spec, r, offsets, j)
                tnorm = np.sqrt((np.abs(T) ** 2).sum(axis=1))
                outs = {}
                if "spectral" in modes:
                    F = dft_fft(T, p) / p**M
                    outs["spectral"] = [(dft_fft(F * mult, p) / p**N)[:, neg] for mult in mults]
                if "kernel" in modes:
                    shells = _coset_shells(T, spec)
                    outs["kernel"] = [_combine_shells(shells, spec, a) / (gamma_p(-a, spec.ctx) * p**M)
                                      for a in alphas]
                table = {}
                for ai, alpha in enumerate(alphas):
                    scale = float(p) ** ((1 - r) * alpha)
                    for conv in conventions:
                        for m in modes:
                            D = outs[m][ai]
                            lam = signs[conv] * scale
                            table[conv, m, ai] = np.sqrt((np.abs(D - lam * T) ** 2).sum(axis=1)) / tnorm
                for ai, alpha in enumerate(alphas):
                    scale = float(p) ** ((1 - r) * alpha)
                    for i, c in enumerate(offsets):
                        row = {"r": r, "n": Fraction(int(c), q), "j": j, "alpha": alpha}
                        for conv in conventions:
                            sfx = suffix[conv]
                            row["eigenvalue" + sfx] = signs[conv] * scale
                            for m in modes:
                                row[f"residual_{m}{sfx}"] = float(table[conv, m, ai][i])
                        yield row
