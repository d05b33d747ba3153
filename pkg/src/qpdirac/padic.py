"""Exact p-adic scalars at finite precision and the characters on Q_p.

A nonzero scalar is stored in polar form ``p**valuation * unit`` where
``unit`` is an integer in ``[0, p**precision)`` not divisible by ``p``; its
base-p digits are the truncated angular component.  Zero is a distinguished
value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "PrimeContext",
    "prime_context",
    "PAdicScalar",
    "Phase",
    "roots_of_unity",
    "ord_p",
    "ord_int",
    "norm_p",
    "frac_part",
    "chi_p",
    "legendre",
    "pi_character",
    "pi_character_total",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def ord_int(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("ord of 0 is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime together with its Legendre table."""

    p: int
    legendre_table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"p must be prime, got {self.p!r}")
        if self.p == 2:
            raise ValueError("p = 2 is not supported")
        squares = {(z * z) % self.p for z in range(1, self.p)}
        table = {d: (1 if d in squares else -1) for d in range(1, self.p)}
        object.__setattr__(self, "legendre_table", table)

    @property
    def residues(self) -> tuple[int, ...]:
        """F_p^+ in increasing order."""
        return tuple(d for d in range(1, self.p) if self.legendre_table[d] == 1)

    @property
    def nonresidues(self) -> tuple[int, ...]:
        """F_p^- in increasing order."""
        return tuple(d for d in range(1, self.p) if self.legendre_table[d] == -1)

    def legendre_array(self) -> np.ndarray:
        """Legendre symbol indexed by digit, with entry 0 set to 0."""
        out = np.zeros(self.p, dtype=np.int8)
        for d, s in self.legendre_table.items():
            out[d] = s
        return out


@lru_cache(maxsize=None)
def prime_context(p: int) -> PrimeContext:
    return PrimeContext(int(p))


def legendre(j: int, ctx: PrimeContext | int) -> int:
    """Legendre symbol (j/p) for j not divisible by p."""
    if not isinstance(ctx, PrimeContext):
        ctx = prime_context(ctx)
    if j % ctx.p == 0:
        raise ValueError(f"legendre symbol undefined for j = {j} = 0 mod {ctx.p}")
    return ctx.legendre_table[j % ctx.p]


@dataclass(frozen=True)
class PAdicScalar:
    """A p-adic number ``p**valuation * unit`` known to ``precision`` digits.

    ``precision`` counts digits of the angular component, so the value is
    determined modulo ``p**(valuation + precision)``.
    """

    p: int
    is_zero: bool
    valuation: int | None
    unit: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        if self.is_zero:
            if self.unit != 0:
                raise ValueError("zero must have unit 0")
        elif not (0 < self.unit < self.p**self.precision) or self.unit % self.p == 0:
            raise ValueError("unit must be a p-adic unit below p**precision")

    @classmethod
    def zero(cls, p: int, precision: int = 1) -> "PAdicScalar":
        return cls(p, True, None, 0, precision)

    @classmethod
    def from_rational(cls, x, p: int, precision: int = 20) -> "PAdicScalar":
        """Expand an int or Fraction to ``precision`` p-adic digits."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        v = ord_int(x.numerator, p) if x.numerator % p == 0 else 0
        v -= ord_int(x.denominator, p) if x.denominator % p == 0 else 0
        u = x / Fraction(p) ** v
        mod = p**precision
        unit = (u.numerator * pow(u.denominator, -1, mod)) % mod
        return cls(p, False, v, unit, precision)

    @classmethod
    def from_digits(cls, digits, valuation: int, p: int) -> "PAdicScalar":
        digits = list(digits)
        if not digits or digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        unit = sum(int(d) * p**i for i, d in enumerate(digits))
        return cls(p, False, valuation, unit, len(digits))

    @property
    def digits(self) -> tuple[int, ...]:
        """d_0 ... d_{K-1} of the angular component; empty for zero."""
        if self.is_zero:
            return ()
        out, u = [], self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.p)
            out.append(d)
        return tuple(out)

    @property
    def leading_digit(self) -> int:
        if self.is_zero:
            raise ValueError("zero has no leading digit")
        return self.unit % self.p

    @property
    def absolute_precision(self) -> int | float:
        if self.is_zero:
            return math.inf
        return self.valuation + self.precision

    def to_fraction(self) -> Fraction:
        """The rational representative p**v * unit."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.unit

    def _reduce(self, value: Fraction, abs_prec) -> "PAdicScalar":
        if value == 0:
            return PAdicScalar.zero(self.p, self.precision)
        out = PAdicScalar.from_rational(value, self.p, 1)
        if abs_prec is not math.inf and out.valuation >= abs_prec:
            return PAdicScalar.zero(self.p, self.precision)
        k = self.precision if abs_prec is math.inf else abs_prec - out.valuation
        return PAdicScalar.from_rational(value, self.p, k)

    def _coerce(self, other) -> "PAdicScalar":
        if isinstance(other, PAdicScalar):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return PAdicScalar.from_rational(other, self.p, self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        abs_prec = min(self.absolute_precision, other.absolute_precision)
        return self._reduce(self.to_fraction() + other.to_fraction(), abs_prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        mod = self.p**self.precision
        return PAdicScalar(self.p, False, self.valuation, (-self.unit) % mod, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return PAdicScalar.zero(self.p, min(self.precision, other.precision))
        k = min(self.precision, other.precision)
        mod = self.p**k
        return PAdicScalar(
            self.p, False, self.valuation + other.valuation, (self.unit * other.unit) % mod, k
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PAdicScalar):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.p != other.p or self.is_zero != other.is_zero:
            return False
        if self.is_zero:
            return True
        if self.valuation != other.valuation:
            return False
        k = min(self.precision, other.precision)
        return self.unit % self.p**k == other.unit % self.p**k

    def __hash__(self):
        return hash((self.p, self.is_zero, self.valuation, self.unit, self.precision))


@dataclass(frozen=True, eq=False)
class Phase:
    """The root of unity exp(2*pi*i*numerator/modulus), kept as a fraction."""

    numerator: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "numerator", self.numerator % self.modulus)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.modulus)

    def __mul__(self, other: "Phase") -> "Phase":
        mod = math.lcm(self.modulus, other.modulus)
        a = self.numerator * (mod // self.modulus) + other.numerator * (mod // other.modulus)
        return Phase(a, mod)

    def __eq__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return self.fraction == other.fraction

    def __hash__(self):
        return hash(self.fraction)

    @property
    def value(self) -> complex:
        return complex(roots_of_unity(self.modulus)[self.numerator])


@lru_cache(maxsize=32)
def roots_of_unity(P: int) -> np.ndarray:
    """Read-only table W[m] = exp(2*pi*i*m/P), m = 0..P-1.

    Exactly known points (1, -1, +-i) are pinned and W[P - m] is stored as
    the conjugate of W[m], so symmetry identities hold to the last bit.
    """
    m = np.arange(P, dtype=np.int64)
    ang = 2.0 * np.pi * m / P
    table = np.cos(ang) + 1j * np.sin(ang)
    # pin the exactly known points so symmetry-based identities are bitwise
    table[0] = 1.0
    if P % 2 == 0:
        table[P // 2] = -1.0
    if P % 4 == 0:
        table[P // 4] = 1j
        table[3 * P // 4] = -1j
    # enforce conjugate symmetry W[P-m] = conj(W[m])
    half = table[1 : (P + 1) // 2]
    table[P - 1 : P // 2 : -1] = np.conj(half)
    table.setflags(write=False)
    return table


def ord_p(x: PAdicScalar) -> int | float:
    """Valuation of x, ``math.inf`` for zero."""
    return math.inf if x.is_zero else x.valuation


def norm_p(x: PAdicScalar) -> Fraction:
    """|x|_p = p**(-ord x), with |0|_p = 0."""
    if x.is_zero:
        return Fraction(0)
    return Fraction(x.p) ** (-x.valuation)


def frac_part(x: PAdicScalar) -> Fraction:
    """The p-adic fractional part {x}_p, a rational in [0, 1)."""
    if x.is_zero or x.valuation >= 0:
        return Fraction(0)
    k = -x.valuation
    # digits beyond the known precision are unknown; they must not be needed
    if k > x.precision:
        raise ValueError("not enough digits to determine the fractional part")
    return Fraction(x.unit % x.p**k, x.p**k)


def chi_p(x: PAdicScalar) -> Phase:
    """The additive character exp(2*pi*i*{x}_p) as an exact phase."""
    f = frac_part(x)
    return Phase(f.numerator, f.denominator)


def pi_character(x: PAdicScalar) -> int:
    """Quadratic character: Legendre symbol of the leading digit of ac(x)."""
    if x.is_zero:
        raise ValueError("pi is undefined at 0")
    return legendre(x.leading_digit, prime_context(x.p))


def pi_character_total(x: PAdicScalar) -> int:
    """pi extended by (0/p) = 0."""
    return 0 if x.is_zero else pi_character(x)
