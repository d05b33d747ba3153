"""Fourier transform on grid functions.

With x_a = p^-N a and xi_b = p^-M b one has {xi_b x_a}_p = (a b mod P)/P,
so the p-adic transform restricted to the grid is exactly a length-P DFT
with kernel exp(+2 pi i a b / P) and measure factor p^-M.
"""
from __future__ import annotations

import numpy as np

from .grid import GridFunction
from .padic import roots_of_unity

__all__ = [
    "dft_naive",
    "dft_fft",
    "forward",
    "forward_fft",
    "inverse",
    "fft_op_count",
]

# rows per block in the naive transform; bounds peak memory at ~16 MB
_NAIVE_BLOCK = 1 << 20


def _size_exponent(P: int, p: int) -> int:
    L, q = 0, 1
    while q < P:
        q *= p
        L += 1
    if q != P:
        raise ValueError(f"length {P} is not a power of {p}")
    return L


def dft_naive(x: np.ndarray, p: int) -> np.ndarray:
    """Unscaled X[b] = sum_a W[ab mod P] x[a] along the last axis, O(P^2)."""
    x = np.asarray(x, dtype=complex)
    P = x.shape[-1]
    _size_exponent(P, p)
    W = roots_of_unity(P)
    a = np.arange(P, dtype=np.int64)
    out = np.empty(x.shape, dtype=complex)
    rows = max(1, _NAIVE_BLOCK // P)
    for b0 in range(0, P, rows):
        b = a[b0 : b0 + rows]
        kernel = W[(b[:, None] * a[None, :]) % P]  # (rows, P)
        out[..., b0 : b0 + rows] = x @ kernel.T
    return out


class _Counter:
    def __init__(self):
        self.enabled = False
        self.ops = 0


_counter = _Counter()


def _fft_rec(x: np.ndarray, p: int, W: np.ndarray) -> np.ndarray:
    Q = x.shape[-1]
    P = W.shape[0]
    batch = x.shape[:-1]
    small = W[(np.outer(np.arange(p), np.arange(p)) * (P // p)) % P]
    if Q == p:
        if _counter.enabled:
            _counter.ops += int(np.prod(batch, dtype=np.int64)) * p * p
        return x @ small
    # decimation in time: row n1 holds x[n1], x[n1+p], x[n1+2p], ...
    sub = np.swapaxes(x.reshape(*batch, Q // p, p), -1, -2)
    Y = _fft_rec(sub, p, W)
    n1 = np.arange(p)[:, None]
    k2 = np.arange(Q // p)[None, :]
    Y = Y * W[(n1 * k2 * (P // Q)) % P]
    X = small @ Y  # small is symmetric: X[k1, k2] = sum_n1 small[k1, n1] Y[n1, k2]
    if _counter.enabled:
        _counter.ops += int(np.prod(batch, dtype=np.int64)) * Q * (p + 1)
    return X.reshape(*batch, Q)


def dft_fft(x: np.ndarray, p: int) -> np.ndarray:
    """Radix-p decimation-in-time FFT; same result as :func:`dft_naive`.

    Works along the last axis of an array of any batch shape.  All twiddle
    factors come from the single root table of order P.
    """
    x = np.asarray(x, dtype=complex)
    P = x.shape[-1]
    if _size_exponent(P, p) == 0:
        return x.copy()
    return _fft_rec(x, p, roots_of_unity(P))


def fft_op_count(P: int, p: int) -> int:
    """Complex multiply-adds performed by :func:`dft_fft` at length P."""
    _counter.enabled, _counter.ops = True, 0
    try:
        dft_fft(np.zeros(P, dtype=complex), p)
        return _counter.ops
    finally:
        _counter.enabled = False


def forward(phi: GridFunction) -> GridFunction:
    """(F phi)(xi) = integral chi_p(xi x) phi(x) dx, by direct summation."""
    s = phi.spec
    return GridFunction(s.dual(), dft_naive(phi.values, s.p) / s.p**s.M)


def forward_fft(phi: GridFunction) -> GridFunction:
    """Same transform as :func:`forward` through the radix-p FFT."""
    s = phi.spec
    return GridFunction(s.dual(), dft_fft(phi.values, s.p) / s.p**s.M)


def inverse(psi: GridFunction, fast: bool = True) -> GridFunction:
    """F^-1 psi (x) = (F psi)(-x): forward transform, then a -> -a mod P."""
    s = psi.spec
    core = dft_fft if fast else dft_naive
    X = core(psi.values, s.p) / s.p**s.M
    neg = (-np.arange(s.P)) % s.P
    return GridFunction(s.dual(), X[neg])
