"""Brute-force reference computations used as test oracles.

Everything here works on exact rationals with textbook definitions and
shares no code with the package: no root table, no Legendre table, no DFT.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction


def vp(q: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    v, a, b = 0, q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def abs_p(q: Fraction, p: int) -> Fraction:
    return Fraction(0) if q == 0 else Fraction(p) ** (-vp(q, p))


def frac_p(q: Fraction, p: int) -> Fraction:
    """{q}_p: the unique f in Z[1/p] cap [0, 1) with q - f in Z_p."""
    q = Fraction(q)
    if q == 0 or vp(q, p) >= 0:
        return Fraction(0)
    k = -vp(q, p)
    den = q.denominator // p**k  # unit part of the denominator
    num = (q.numerator * pow(den, -1, p**k)) % p**k
    return Fraction(num, p**k)


def euler_legendre(j: int, p: int) -> int:
    """Euler's criterion j^((p-1)/2) mod p."""
    t = pow(j % p, (p - 1) // 2, p)
    return 0 if t == 0 else (1 if t == 1 else -1)


def lead_digit(q: Fraction, p: int) -> int:
    u = Fraction(q) / Fraction(p) ** vp(q, p)
    return (u.numerator * pow(u.denominator, -1, p)) % p


def pi_char(q: Fraction, p: int) -> int:
    return 0 if q == 0 else euler_legendre(lead_digit(q, p), p)


def chi(q: Fraction, p: int) -> complex:
    return cmath.exp(2j * math.pi * frac_p(q, p))


def points(p: int, N: int, M: int):
    return [Fraction(a, p**N) for a in range(p ** (N + M))]


def index_of(x: Fraction, p: int, N: int, M: int) -> int:
    """Grid index of x modulo p^M Z_p."""
    P = p ** (N + M)
    y = Fraction(x) * p**N
    return (y.numerator * pow(y.denominator, -1, P)) % P


def theta_value(p: int, r: int, n: Fraction, j: int, x: Fraction) -> complex:
    """chi_p(p^-1 j (p^r x - n)) Omega(|p^r x - n|_p)."""
    y = Fraction(p) ** r * Fraction(x) - Fraction(n)
    if abs_p(y, p) > 1:
        return 0j
    return chi(Fraction(j, p) * y, p)


def fourier(values, p: int, N: int, M: int):
    """(F phi)(xi_b) = p^-M sum_a chi_p(xi_b x_a) phi(x_a), xi_b = p^-M b."""
    xs = points(p, N, M)
    xis = [Fraction(b, p**M) for b in range(len(xs))]
    return [sum(chi(xi * x, p) * v for x, v in zip(xs, values)) / p**M for xi in xis]


def gauss_gamma(s: float, p: int) -> complex:
    return p**s * sum(euler_legendre(j, p) * cmath.exp(2j * math.pi * j / p) for j in range(1, p)) / p


def kernel(values, p: int, N: int, M: int, alpha: float):
    """Gamma^-1 p^-M sum_{y != 0} pi(y)|y|^(-alpha-1) (phi(x - y) - phi(x))."""
    xs = points(p, N, M)
    g = gauss_gamma(-alpha, p)
    out = []
    for x in xs:
        ix = index_of(x, p, N, M) if x else 0
        total = 0j
        for y in xs[1:]:
            w = pi_char(y, p) * float(abs_p(y, p)) ** (-alpha - 1)
            d = x - y
            idx = 0 if d == 0 else index_of(d, p, N, M)
            total += w * (values[idx] - values[ix])
        out.append(total / (g * p**M))
    return out


def theta_transform(p: int, N: int, M: int, r: int, n: Fraction, j: int):
    """p^r chi_p(p^-r n xi) Omega(|p^-r xi + j/p|_p) on the dual points xi_b = p^-M b."""
    out = []
    for b in range(p ** (N + M)):
        xi = Fraction(b, p**M)
        if abs_p(Fraction(p) ** -r * xi + Fraction(j, p), p) <= 1:
            out.append(float(p) ** r * chi(Fraction(p) ** -r * n * xi, p))
        else:
            out.append(0j)
    return out
