"""Finite quotient grids p^-N Z_p / p^M Z_p and functions on them.

Grid index ``a`` in ``0..P-1`` (``P = p**(N+M)``) labels the coset of the
point ``x_a = p**-N * a``.  A :class:`GridFunction` stores one complex value
per coset and stands for a locally constant function supported in
``B_N = {|x|_p <= p**N}`` and constant on cosets of ``p**M Z_p``.

All exactness statements made in this package are relative to (N, M).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .padic import PAdicScalar, PrimeContext, ord_int, prime_context, roots_of_unity

__all__ = [
    "GridSpec",
    "GridFunction",
    "Ball",
    "ThetaIndex",
    "point_of_index",
    "index_of_point",
    "indicator",
    "sign_class",
    "haar_integral",
    "haar_integral_signed",
    "inner",
    "l2_norm",
    "theta",
    "theta_indices",
    "theta_batch",
    "theta_support",
]

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class GridSpec:
    """The quotient p^-N Z_p / p^M Z_p.

    ``is_dual`` marks a frequency grid produced by :meth:`dual`; those may
    have M = 0 (the transform of a function supported in Z_p is constant on
    cosets of Z_p).
    """

    p: int
    N: int
    M: int
    is_dual: bool = False

    def __post_init__(self):
        prime_context(self.p)  # validates p
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")
        if self.M < (0 if self.is_dual else 1):
            raise ValueError(f"M must be >= 1, got {self.M}")
        if self.N + self.M < 1:
            raise ValueError("grid must have at least p points")

    @property
    def ctx(self) -> PrimeContext:
        return prime_context(self.p)

    @property
    def K(self) -> int:
        return self.N + self.M

    @property
    def P(self) -> int:
        return self.p**self.K

    @property
    def cell_measure(self) -> float:
        """Haar measure of one coset, p**-M."""
        return float(self.p) ** (-self.M)

    def dual(self) -> "GridSpec":
        """Grid carrying Fourier transforms: support M, constancy N."""
        return GridSpec(self.p, self.M, self.N, not self.is_dual)

    @cached_property
    def index_ord(self) -> np.ndarray:
        """ord_p(a) for a >= 1; the entry at a = 0 is K (the zero coset)."""
        a = np.arange(self.P, dtype=np.int64)
        out = np.zeros(self.P, dtype=np.int64)
        a[0] = 0
        rest = a.copy()
        for _ in range(self.K):
            hit = (rest % self.p == 0) & (np.arange(self.P) != 0)
            out[hit] += 1
            rest[hit] //= self.p
        out[0] = self.K
        out.setflags(write=False)
        return out

    @cached_property
    def valuation(self) -> np.ndarray:
        """ord(x_a) = ord_p(a) - N; entry at a = 0 is M (lower bound only)."""
        v = self.index_ord - self.N
        v.setflags(write=False)
        return v

    @cached_property
    def lead_digit(self) -> np.ndarray:
        """Leading digit of ac(x_a); 0 at a = 0."""
        a = np.arange(self.P, dtype=np.int64)
        d = (a // self.p ** np.minimum(self.index_ord, self.K - 1)) % self.p
        d[0] = 0
        d.setflags(write=False)
        return d

    @cached_property
    def sign(self) -> np.ndarray:
        """pi(x_a) in {+1, -1}, and 0 at the zero point."""
        s = self.ctx.legendre_array()[self.lead_digit].astype(np.int64)
        s.setflags(write=False)
        return s

    @cached_property
    def abs_value(self) -> np.ndarray:
        """|x_a|_p as floats; 0 at the zero point."""
        out = np.power(float(self.p), (self.N - self.index_ord).astype(float))
        out[0] = 0.0
        out.setflags(write=False)
        return out

    @cached_property
    def monna(self) -> np.ndarray:
        """Monna coordinate of each point (digit reversal onto [0, p**N))."""
        a = np.arange(self.P, dtype=np.int64)
        out = np.zeros(self.P)
        for t in range(self.K):
            d = (a // self.p**t) % self.p
            out += d * float(self.p) ** (self.N - t - 1)
        out.setflags(write=False)
        return out

    def digit_string(self, a: int) -> str:
        """Digits of x_a, least significant first, '.' before the p**0 digit."""
        digs = []
        for t in range(self.K):
            d = (a // self.p**t) % self.p
            digs.append(_DIGITS[d] if self.p <= len(_DIGITS) else f"{d},")
        s = "".join(digs)
        return s[: self.N] + "." + s[self.N :] if self.p <= len(_DIGITS) else s


@dataclass(eq=False)
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.spec.P,):
            raise ValueError(f"expected {self.spec.P} values, got shape {self.values.shape}")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridFunction":
        return cls(spec, np.zeros(spec.P, dtype=complex))

    @classmethod
    def delta(cls, spec: GridSpec, a: int = 0) -> "GridFunction":
        v = np.zeros(spec.P, dtype=complex)
        v[a] = 1.0
        return cls(spec, v)

    def _check(self, other: "GridFunction"):
        if other.spec != self.spec:
            raise ValueError(f"grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other):
        self._check(other)
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return GridFunction(self.spec, self.values - other.values)

    def __neg__(self):
        return GridFunction(self.spec, -self.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.spec, self.values * other.values)
        return GridFunction(self.spec, self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridFunction(self.spec, self.values / c)

    def reflect(self) -> "GridFunction":
        """x -> -x, i.e. index a -> -a mod P."""
        return GridFunction(self.spec, self.values[(-np.arange(self.spec.P)) % self.spec.P])

    def __call__(self, x) -> complex:
        if not isinstance(x, PAdicScalar):
            x = PAdicScalar.from_rational(x, self.spec.p, self.spec.K + 1)
        return complex(self.values[index_of_point(self.spec, x)])

    # -- serialization ---------------------------------------------------
    def to_envelope(self) -> dict:
        env = {"p": self.spec.p, "N": self.spec.N, "M": self.spec.M}
        if self.spec.is_dual:
            env["dual"] = True
        env["values"] = [[float(z.real), float(z.imag)] for z in self.values]
        return env

    @classmethod
    def from_envelope(cls, env: dict) -> "GridFunction":
        spec = GridSpec(int(env["p"]), int(env["N"]), int(env["M"]), bool(env.get("dual", False)))
        vals = np.array([complex(re, im) for re, im in env["values"]])
        return cls(spec, vals)

    def to_json(self) -> str:
        from .io import dumps

        return dumps(self.to_envelope())

    def csv_rows(self):
        s = self.spec
        for a in range(s.P):
            val = "" if a == 0 else int(s.valuation[a])
            yield (a, val, s.digit_string(a), float(s.monna[a]), float(self.values[a].real), float(self.values[a].imag))

    def to_csv(self) -> str:
        from .io import fmt_float

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for a, val, digs, mon, re, im in self.csv_rows():
            w.writerow([a, val, digs, fmt_float(mon), fmt_float(re), fmt_float(im)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, p: int, N: int, M: int) -> "GridFunction":
        spec = GridSpec(p, N, M)
        vals = np.zeros(spec.P, dtype=complex)
        for row in csv.DictReader(io.StringIO(text)):
            vals[int(row["index"])] = complex(float(row["re"]), float(row["im"]))
        return cls(spec, vals)


CSV_HEADER = ("index", "valuation", "digit_string", "monna_real", "re", "im")


@dataclass(frozen=True)
class Ball:
    """{x : |x - center|_p <= p**radius_exponent}."""

    center: Fraction
    radius_exponent: int

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))


@dataclass(frozen=True)
class ThetaIndex:
    """Labels Theta_rnj; n is a rational in [0, 1) with p-power denominator."""

    r: int
    n: Fraction
    j: int

    def __post_init__(self):
        n = Fraction(self.n)
        if not 0 <= n < 1:
            raise ValueError(f"n must lie in [0, 1), got {n}")
        object.__setattr__(self, "n", n)


def point_of_index(spec: GridSpec, a: int) -> PAdicScalar:
    if not 0 <= a < spec.P:
        raise IndexError(f"index {a} outside 0..{spec.P - 1}")
    if a == 0:
        return PAdicScalar.zero(spec.p, spec.K)
    k = ord_int(a, spec.p)
    # absolute precision M: digits down to p**(M-1)
    return PAdicScalar.from_rational(Fraction(a, spec.p**spec.N), spec.p, spec.K - k)


def index_of_point(spec: GridSpec, x: PAdicScalar) -> int:
    if x.is_zero:
        return 0
    if x.valuation < -spec.N:
        raise ValueError(f"|x|_p = p^{-x.valuation} exceeds p^{spec.N}")
    if x.absolute_precision < spec.M:
        raise ValueError("point is not known to the grid resolution")
    a = x.to_fraction() * spec.p**spec.N
    return (a.numerator * pow(a.denominator, -1, spec.P)) % spec.P


def _center_index(spec: GridSpec, center: Fraction) -> int:
    c = Fraction(center) * spec.p**spec.N
    if c.denominator % spec.p == 0:
        raise ValueError(f"center {center} is finer than the grid")
    return int(c.numerator * pow(c.denominator, -1, spec.P)) % spec.P


def _ball_mask(spec: GridSpec, cidx: int, r: int) -> np.ndarray:
    step = spec.p ** (spec.N - r)
    diff = (np.arange(spec.P, dtype=np.int64) - cidx) % spec.P
    return diff % step == 0


def indicator(spec: GridSpec, ball: Ball) -> GridFunction:
    r = ball.radius_exponent
    if r > spec.N or r < -spec.M:
        raise ValueError(f"ball radius p^{r} not representable on {spec}")
    if ball.center != 0:
        PAdicScalar.from_rational(ball.center, spec.p, 1)
        v = ord_int(ball.center.numerator, spec.p) if ball.center.numerator % spec.p == 0 else 0
        v -= ord_int(ball.center.denominator, spec.p) if ball.center.denominator % spec.p == 0 else 0
        if v < -spec.N:
            raise ValueError(f"ball centered at {ball.center} leaves B_{spec.N}")
    mask = _ball_mask(spec, _center_index(spec, ball.center), r)
    return GridFunction(spec, mask.astype(complex))


def sign_class(x: PAdicScalar) -> str:
    """'zero', 'plus' (pi(x) = 1) or 'minus' (pi(x) = -1)."""
    if x.is_zero:
        return "zero"
    return "plus" if prime_context(x.p).legendre_table[x.leading_digit] == 1 else "minus"


def haar_integral(phi: GridFunction) -> complex:
    return complex(phi.values.sum() / phi.spec.p**phi.spec.M)


def haar_integral_signed(phi: GridFunction, sign: str) -> complex:
    """Integral of phi over Q_p^+ or Q_p^-.

    The zero coset p^M Z_p splits evenly between the two classes, so it
    contributes half of its mass to each.
    """
    s = {"plus": 1, "minus": -1}[sign]
    v = phi.values
    total = v[phi.spec.sign == s].sum() + 0.5 * v[0]
    return complex(total / phi.spec.p**phi.spec.M)


def inner(phi: GridFunction, psi: GridFunction) -> complex:
    """<phi, psi> = integral of conj(phi) * psi."""
    phi._check(psi)
    return complex(np.vdot(phi.values, psi.values) / phi.spec.p**phi.spec.M)


def l2_norm(phi: GridFunction) -> float:
    return float(np.sqrt(np.vdot(phi.values, phi.values).real / phi.spec.p**phi.spec.M))


def _theta_offset(spec: GridSpec, idx: ThetaIndex) -> int:
    r = idx.r
    if r > spec.N or r < 1 - spec.M:
        raise ValueError(f"Theta with r = {r} needs 1-M <= r <= N on {spec}")
    if idx.j % spec.p == 0 or not 0 < idx.j < spec.p:
        raise ValueError(f"j must be in 1..{spec.p - 1}, got {idx.j}")
    c = idx.n * spec.p ** (spec.N - r)
    if c.denominator != 1:
        raise ValueError(f"n = {idx.n} puts the support outside B_{spec.N}")
    return int(c)


def theta_batch(spec: GridSpec, r: int, offsets, j: int) -> np.ndarray:
    """Rows Theta_{r, c/p^(N-r), j} for each integer offset c.

    Theta_rnj(x_a) = chi_p(j (a - c) / p^(N-r+1)) when p^(N-r) divides a - c
    and 0 otherwise; phases are read from the exact P-th root table.
    """
    offsets = np.atleast_1d(np.asarray(offsets, dtype=np.int64))
    step = spec.p ** (spec.N - r)
    diff = (np.arange(spec.P, dtype=np.int64)[None, :] - offsets[:, None]) % spec.P
    on = diff % step == 0
    t = (diff // step) % spec.p
    W = roots_of_unity(spec.P)
    vals = W[((j * t) % spec.p) * (spec.P // spec.p)]
    return np.where(on, vals, 0.0)


def theta(spec: GridSpec, idx: ThetaIndex) -> GridFunction:
    c = _theta_offset(spec, idx)
    return GridFunction(spec, theta_batch(spec, idx.r, [c], idx.j)[0])


def theta_support(spec: GridSpec, idx: ThetaIndex) -> Ball:
    """supp Theta_rnj = p^-r n + p^-r Z_p, a ball of radius p^r."""
    _theta_offset(spec, idx)
    return Ball(idx.n * Fraction(spec.p) ** (-idx.r), idx.r)


def theta_indices(spec: GridSpec):
    """Every Theta_rnj representable on the grid, ordered by (r, n, j)."""
    for r in range(1 - spec.M, spec.N + 1):
        q = spec.p ** (spec.N - r)
        for c in range(q):
            for j in range(1, spec.p):
                yield ThetaIndex(r, Fraction(c, q), j)
