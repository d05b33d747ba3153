"""p-adic Jackiw-Rebbi model in one and two dimensions.

The 1D Hamiltonian is the 2x2 operator matrix

    H = [[ m(x) v^2,       -i v hbar D ],
         [ -i v hbar D,    -m(x) v^2   ]]  = m v^2 sigma_z - i v hbar D sigma_x

with D the twisted Vladimirov operator at alpha = 1, acting on spinors
(phi1, phi2) of grid functions.  Mass values, and all residual norms, live
on the nonzero points only; x = 0 is the interface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .grid import Ball, GridFunction, GridSpec, ThetaIndex, _ball_mask, _center_index, l2_norm, theta
from .operators import kernel_array, spectral_array, theta_eigenvalue
from .padic import PAdicScalar, legendre, prime_context

__all__ = [
    "InadmissibleMass",
    "InadmissibleState",
    "PhysicalParams",
    "TwoValueMass",
    "PiecewiseMass",
    "SpinorField",
    "PAULI",
    "BoundState",
    "BoundState2D",
    "ScaleChoice",
    "mass_at",
    "matching_residual",
    "matching_scan",
    "admissible_scale",
    "chirality",
    "chiral_digits",
    "zero_mode_constant",
    "literal_zero_mode_constant",
    "build_zero_mode",
    "build_interface_superposition",
    "build_bulk_state",
    "apply_hamiltonian_1d",
    "hamiltonian_residual",
    "apply_hamiltonian_2d",
    "solve_2d",
    "dispersion_table",
]


class InadmissibleMass(ValueError):
    """m v / hbar is not an integer power of p."""


class InadmissibleState(ValueError):
    """Requested state violates a sign, support or energy constraint."""


PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_pauli():
    I = np.eye(2)
    sx, sy, sz = PAULI["x"], PAULI["y"], PAULI["z"]
    for s in (sx, sy, sz):
        assert np.array_equal(s @ s, I)
    assert np.array_equal(sx @ sy, 1j * sz)
    assert np.array_equal(sy @ sz, 1j * sx)
    assert np.array_equal(sz @ sx, 1j * sy)
    for a, b in ((sx, sy), (sy, sz), (sz, sx)):
        assert not np.any(a @ b + b @ a)


_check_pauli()


@dataclass(frozen=True)
class PhysicalParams:
    v: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.v > 0 and self.hbar > 0):
            raise ValueError("v and hbar must be positive")


# -- mass profiles ---------------------------------------------------------

@dataclass(frozen=True)
class TwoValueMass:
    """m(x) = -m1 on Q_p^-, +m2 on Q_p^+."""

    m1: float
    m2: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("m1 and m2 must be positive")

    def on_grid(self, spec: GridSpec) -> np.ndarray:
        return np.where(spec.sign > 0, self.m2, np.where(spec.sign < 0, -self.m1, 0.0))

    def value(self, x: PAdicScalar) -> float:
        s = legendre(x.leading_digit, x.p)
        return self.m2 if s > 0 else -self.m1


def _ball_contains(b: Ball, x: Fraction, p: int) -> bool:
    d = Fraction(x) - b.center
    if d == 0:
        return True
    return PAdicScalar.from_rational(d, p, 1).valuation >= -b.radius_exponent


@dataclass(frozen=True)
class PiecewiseMass:
    """Locally constant mass given on disjoint balls avoiding 0.

    A ball avoiding 0 lies in a single class Q_p^+ or Q_p^-; the value must be
    positive on Q_p^+ and negative on Q_p^-.
    """

    p: int
    pieces: tuple  # of (Ball, float)

    def __post_init__(self):
        pieces = tuple((b, float(m)) for b, m in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        for i, (b, m) in enumerate(pieces):
            if _ball_contains(b, Fraction(0), self.p):
                raise ValueError(f"ball {b} contains the interface point 0")
            cls = legendre(PAdicScalar.from_rational(b.center, self.p, 1).leading_digit, self.p)
            if m == 0 or (m > 0) != (cls > 0):
                raise ValueError(f"mass {m} has the wrong sign on {'Q_p^+' if cls > 0 else 'Q_p^-'}")
            for b2, _ in pieces[:i]:
                if _ball_contains(b, b2.center, self.p) or _ball_contains(b2, b.center, self.p):
                    raise ValueError(f"balls {b} and {b2} overlap")

    def value(self, x: PAdicScalar) -> float:
        for b, m in self.pieces:
            if _ball_contains(b, x.to_fraction(), self.p):
                return m
        raise ValueError(f"no piece covers {x.to_fraction()}")

    def on_grid(self, spec: GridSpec) -> np.ndarray:
        out = np.full(spec.P, np.nan)
        for b, m in self.pieces:
            if b.radius_exponent < -spec.M:
                raise ValueError(f"ball {b} is finer than the grid")
            if b.center != 0 and PAdicScalar.from_rational(b.center, self.p, 1).valuation < -spec.N:
                continue  # ball lies outside B_N
            r = min(b.radius_exponent, spec.N)
            mask = _ball_mask(spec, _center_index(spec, b.center), r)
            out[mask] = m
        out[0] = 0.0
        if np.isnan(out).any():
            raise ValueError(f"pieces leave {int(np.isnan(out).sum())} grid points uncovered")
        return out


def mass_at(profile, x: PAdicScalar) -> float:
    if x.is_zero:
        raise ValueError("the mass is not defined at the interface x = 0")
    return profile.value(x)


# -- fields ------------------------------------------------------------------

@dataclass(eq=False)
class SpinorField:
    up: GridFunction
    down: GridFunction

    def __post_init__(self):
        if self.up.spec != self.down.spec:
            raise ValueError("spinor components live on different grids")

    @property
    def spec(self) -> GridSpec:
        return self.up.spec

    def norm(self) -> float:
        return math.hypot(l2_norm(self.up), l2_norm(self.down))

    def __add__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.up + other.up, self.down + other.down)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.up - other.up, self.down - other.down)

    def __mul__(self, c) -> "SpinorField":
        return SpinorField(self.up * c, self.down * c)

    __rmul__ = __mul__

    def to_envelopes(self) -> list:
        return [self.up.to_envelope(), self.down.to_envelope()]


def _report_floats(d: dict) -> dict:
    return {k: float(v) for k, v in d.items()}


@dataclass(eq=False)
class BoundState:
    E: float
    r_minus: int | None
    r_plus: int | None
    j_minus: int | None
    j_plus: int | None
    field: SpinorField
    lambda_minus: float | None
    lambda_plus: float | None
    residual_report: dict = field(default_factory=dict)
    constant: float | None = None

    @property
    def norm(self) -> float:
        return self.field.norm()

    def to_dict(self) -> dict:
        s = self.field.spec
        return {
            "p": s.p,
            "N": s.N,
            "M": s.M,
            "E": float(self.E),
            "r_minus": self.r_minus,
            "r_plus": self.r_plus,
            "j_minus": self.j_minus,
            "j_plus": self.j_plus,
            "lambda_minus": self.lambda_minus,
            "lambda_plus": self.lambda_plus,
            "norm": self.norm,
            "residual_report": _report_floats(self.residual_report),
            "field": self.field.to_envelopes(),
        }


@dataclass(frozen=True)
class ScaleChoice:
    r: int
    effective_mass: float
    snapped: bool


# -- matching condition --------------------------------------------------------

def matching_residual(E: float, m1: float, m2: float, params: PhysicalParams = PhysicalParams()) -> float:
    """Left minus right side of the interface matching condition at energy E."""
    v2 = params.v**2
    bound = min(m1, m2) * v2
    if abs(E) > bound:
        raise ValueError(f"|E| = {abs(E)} exceeds min(m1, m2) v^2 = {bound}")
    if E == m2 * v2 or E == -m1 * v2:
        raise ValueError("E sits on a pole of the matching condition")
    lhs = math.sqrt(m2**2 * v2**2 - E**2) / (m2 * v2 - E)
    rhs = math.sqrt(m1**2 * v2**2 - E**2) / (E + m1 * v2)
    return lhs - rhs


def matching_scan(m1: float, m2: float, params: PhysicalParams = PhysicalParams(), n: int = 10_000):
    """Sample the residual on n points strictly inside (-min v^2, min v^2).

    Returns (energies, residuals, roots) where roots are the energies at
    which the residual vanishes or changes sign between neighbours.
    """
    bound = min(m1, m2) * params.v**2
    E = np.linspace(-bound, bound, n + 2)[1:-1]
    R = np.array([matching_residual(e, m1, m2, params) for e in E])
    roots = []
    for i in range(n):
        if R[i] == 0.0:
            roots.append(float(E[i]))
        elif i + 1 < n and R[i + 1] != 0.0 and (R[i] > 0) != (R[i + 1] > 0):
            roots.append(float(0.5 * (E[i] + E[i + 1])))
    return E, R, roots


def admissible_scale(m: float, p: int, params: PhysicalParams = PhysicalParams(), snap: bool = False,
                     tol: float = 1e-9) -> ScaleChoice:
    """r with p^(1-r) = m v / hbar; snaps to the nearest r on request."""
    if not m > 0:
        raise InadmissibleMass(f"mass must be positive, got {m}")
    t = math.log(m * params.v / params.hbar) / math.log(p)
    k = round(t)
    if abs(t - k) > tol:
        if not snap:
            raise InadmissibleMass(f"log_{p}(m v / hbar) = {t:.12g} is not an integer")
        return ScaleChoice(1 - k, params.hbar * float(p) ** k / params.v, True)
    return ScaleChoice(1 - k, m, False)


# -- zero mode -------------------------------------------------------------------

def chirality(p: int, j: int) -> int:
    """Sign of the D-eigenvalue of Theta_{r n j}: pi(-j)."""
    return legendre((-j) % p, p)


def chiral_digits(p: int, sign: int) -> tuple[int, ...]:
    """Digits j whose Theta_{r n j} has D-eigenvalue of the given sign."""
    return tuple(j for j in range(1, p) if chirality(p, j) == sign)


def zero_mode_constant(p: int, r_minus: int, r_plus: int) -> float:
    """Amplitude giving unit norm: (p^r_plus + p^r_minus)^(-1/2).

    Equals sqrt(v m1 m2 / (p hbar (m1 + m2))) when p^(1-r) = m v / hbar.
    """
    return 1.0 / math.sqrt(float(p) ** r_plus + float(p) ** r_minus)


def literal_zero_mode_constant(m1: float, m2: float, p: int, params: PhysicalParams = PhysicalParams()) -> float:
    """sqrt(p hbar / (v (m1 + m2)))."""
    return math.sqrt(p * params.hbar / (params.v * (m1 + m2)))


def _check_r(spec: GridSpec, r: int, name: str):
    if not 1 - spec.M <= r <= spec.N:
        raise InadmissibleState(f"{name} = {r} not representable: need {1 - spec.M} <= r <= {spec.N}")


def _region_algebra(mu: float, s: int, lam: float, a: complex, E: float, params: PhysicalParams) -> float:
    """Largest row of the 2x2 region system for spinor [a, 1], scaled by |mu| v^2."""
    v, hb = params.v, params.hbar
    row1 = (mu * v**2 - E) * a - 1j * v * hb * s * lam
    row2 = -1j * v * hb * s * lam * a - (mu * v**2 + E)
    return max(abs(row1), abs(row2)) / (abs(mu) * v**2)


def _zero_mode_base(spec: GridSpec, r_minus, r_plus, j_minus, j_plus) -> np.ndarray:
    th_p = theta(spec, ThetaIndex(r_plus, 0, j_plus)).values
    th_m = theta(spec, ThetaIndex(r_minus, 0, j_minus)).values
    if th_p[0] != th_m[0]:
        raise AssertionError("branches disagree at the interface")
    return np.where(spec.sign > 0, th_p, np.where(spec.sign < 0, th_m, th_p[0]))


def build_zero_mode(spec: GridSpec, r_minus: int, r_plus: int, j_minus: int, j_plus: int,
                    params: PhysicalParams = PhysicalParams(), normalization: str = "unit",
                    dmode: str = "kernel") -> BoundState:
    """E = 0 interface state c [i, 1]^T Theta_{r+-, 0, j+-} on Q_p^{+-}.

    The masses are those for which the scales are exact:
    m1 = hbar p^(1-r_minus) / v and m2 = hbar p^(1-r_plus) / v.
    ``normalization="literal"`` uses sqrt(p hbar / (v (m1 + m2))) instead of the
    unit-norm amplitude.  The global residual ||H Psi|| / ||Psi|| is measured
    with ``dmode`` and reported, not checked.
    """
    p = spec.p
    _check_r(spec, r_minus, "r_minus")
    _check_r(spec, r_plus, "r_plus")
    if chirality(p, j_plus) != 1:
        raise InadmissibleState(f"j_plus = {j_plus}: need pi(-j_plus) = +1")
    if chirality(p, j_minus) != -1:
        raise InadmissibleState(f"j_minus = {j_minus}: need pi(-j_minus) = -1")
    v, hb = params.v, params.hbar
    lam_m, lam_p = float(p) ** (1 - r_minus), float(p) ** (1 - r_plus)
    m1, m2 = hb * lam_m / v, hb * lam_p / v
    if normalization == "unit":
        c = zero_mode_constant(p, r_minus, r_plus)
    elif normalization == "literal":
        c = literal_zero_mode_constant(m1, m2, p, params)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    base = c * _zero_mode_base(spec, r_minus, r_plus, j_minus, j_plus)
    psi = SpinorField(GridFunction(spec, 1j * base), GridFunction(spec, base))
    algebra = max(
        _region_algebra(m2, 1, lam_p, 1j, 0.0, params),
        _region_algebra(-m1, -1, lam_m, 1j, 0.0, params),
    )
    report = {
        "per_region_algebra": algebra,
        "global_hamiltonian": hamiltonian_residual(psi, 0.0, TwoValueMass(m1, m2), params, dmode),
    }
    return BoundState(0.0, r_minus, r_plus, j_minus, j_plus, psi, lam_m, lam_p, report, c)


def build_interface_superposition(spec: GridSpec, params: PhysicalParams = PhysicalParams(),
                                  r_minus: int | None = None, r_plus: int | None = None,
                                  terms: Sequence | None = None) -> SpinorField:
    """Normalized sum of zero-mode terms.

    ``terms`` holds (j_minus, j_plus) pairs at the given (r_minus, r_plus), or
    full (r_minus, r_plus, j_minus, j_plus) tuples.  By default the (p-1)/2
    digits of each chirality are paired in increasing order.
    """
    if terms is None:
        if r_minus is None or r_plus is None:
            raise ValueError("default terms need r_minus and r_plus")
        terms = list(zip(chiral_digits(spec.p, -1), chiral_digits(spec.p, 1)))
    terms = list(terms)
    if not terms:
        raise ValueError("empty term list")
    total = np.zeros(spec.P, dtype=complex)
    for t in terms:
        rm, rp, jm, jp = (r_minus, r_plus, *t) if len(t) == 2 else t
        total += build_zero_mode(spec, rm, rp, jm, jp, params, dmode="none").field.down.values
    psi = SpinorField(GridFunction(spec, 1j * total), GridFunction(spec, total))
    return psi * (1.0 / psi.norm())


# -- bulk states ---------------------------------------------------------------------

def build_bulk_state(spec: GridSpec, ball: Ball, j: int, params: PhysicalParams, profile,
                     branch: int = 1) -> BoundState:
    """[a, 1]^T Theta_{r n j} on a ball avoiding 0 where the mass is constant.

    With D Theta = s lam Theta (s = pi(-j), lam = p^(1-r)) and mass mu on the
    ball, E = branch * sqrt(mu^2 v^4 - hbar^2 v^2 lam^2) and
    a = i v hbar s lam / (mu v^2 - E).
    """
    p, r = spec.p, ball.radius_exponent
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    _check_r(spec, r, "ball radius exponent")
    if _ball_contains(ball, Fraction(0), p):
        raise InadmissibleState(f"ball {ball} contains the interface point 0")
    n = ball.center * Fraction(p) ** r
    n = n - math.floor(n)
    idx = ThetaIndex(r, n, j)
    th = theta(spec, idx)
    masses = profile.on_grid(spec)[np.abs(th.values) > 0]
    if np.ptp(masses) != 0:
        raise InadmissibleState("mass profile is not constant on the ball")
    mu = float(masses[0])
    v, hb = params.v, params.hbar
    s = chirality(p, j)
    lam = float(p) ** (1 - r)
    disc = mu**2 * v**4 - (hb * v * lam) ** 2
    if disc < 0:
        raise InadmissibleState(f"energy would be imaginary: m^2 v^4 - hbar^2 v^2 lam^2 = {disc}")
    E = branch * math.sqrt(disc)
    a = 1j * v * hb * s * lam / (mu * v**2 - E)
    amp = 1.0 / math.sqrt((abs(a) ** 2 + 1.0) * float(p) ** r)
    psi = SpinorField(GridFunction(spec, a * amp * th.values), GridFunction(spec, amp * th.values))
    report = {
        "per_region_algebra": _region_algebra(mu, s, lam, a, E, params),
        "determinant": abs(E**2 - mu**2 * v**4 + (v * hb * lam) ** 2) / (mu**2 * v**4),
        "global_hamiltonian": hamiltonian_residual(psi, E, profile, params, "kernel"),
        "global_hamiltonian_spectral": hamiltonian_residual(psi, E, profile, params, "spectral"),
    }
    if mu > 0:
        return BoundState(E, None, r, None, j, psi, None, lam, report)
    return BoundState(E, r, None, j, None, psi, lam, None, report)


# -- Hamiltonians ------------------------------------------------------------------------

def _D(values: np.ndarray, spec: GridSpec, dmode: str) -> np.ndarray:
    if dmode == "spectral":
        return spectral_array(values, spec, 1.0)
    if dmode == "kernel":
        return kernel_array(values, spec, 1.0)
    if dmode == "kernel-direct":
        return kernel_array(values, spec, 1.0, method="direct")
    raise ValueError(f"unknown dmode {dmode!r}")


def apply_hamiltonian_1d(field: SpinorField, profile, params: PhysicalParams = PhysicalParams(),
                         dmode: str = "spectral") -> SpinorField:
    spec = field.spec
    m = profile.on_grid(spec)
    v, hb = params.v, params.hbar
    u, d = field.up.values, field.down.values
    out1 = m * v**2 * u - 1j * v * hb * _D(d, spec, dmode)
    out2 = -1j * v * hb * _D(u, spec, dmode) - m * v**2 * d
    out1[0] = out2[0] = 0.0
    return SpinorField(GridFunction(spec, out1), GridFunction(spec, out2))


def hamiltonian_residual(field: SpinorField, E: float, profile, params: PhysicalParams = PhysicalParams(),
                         dmode: str = "kernel") -> float:
    """||H Psi - E Psi|| over nonzero points, divided by ||Psi||; NaN for dmode 'none'."""
    if dmode == "none":
        return float("nan")
    h = apply_hamiltonian_1d(field, profile, params, dmode)
    diff = h - field * E
    diff.up.values[0] = diff.down.values[0] = 0.0
    return diff.norm() / field.norm()


def _D_axis(values: np.ndarray, spec: GridSpec, axis: int, dmode: str) -> np.ndarray:
    if axis == 1:
        return _D(values, spec, dmode)
    return _D(values.T, spec, dmode).T


def apply_hamiltonian_2d(up: np.ndarray, down: np.ndarray, spec_x: GridSpec, spec_y: GridSpec, profile,
                         params: PhysicalParams = PhysicalParams(), dmode: str = "spectral",
                         parts: str = "all"):
    """H = m(x) v^2 sigma_z - i hbar v D_x sigma_x + hbar v D_y sigma_y on (Px, Py) arrays.

    ``parts`` selects "x" (mass and D_x terms), "y" (D_y term) or "all".
    The row x = 0 is set to 0.
    """
    v, hb = params.v, params.hbar
    o1 = np.zeros(up.shape, dtype=complex)
    o2 = np.zeros(up.shape, dtype=complex)
    if parts in ("x", "all"):
        m = profile.on_grid(spec_x)[:, None]
        o1 += m * v**2 * up - 1j * hb * v * _D_axis(down, spec_x, 0, dmode)
        o2 += -m * v**2 * down - 1j * hb * v * _D_axis(up, spec_x, 0, dmode)
    if parts in ("y", "all"):
        # sigma_y [u, d] = [-i d, i u]
        o1 += -1j * hb * v * _D_axis(down, spec_y, 1, dmode)
        o2 += 1j * hb * v * _D_axis(up, spec_y, 1, dmode)
    o1[0, :] = o2[0, :] = 0.0
    return o1, o2


@dataclass(eq=False)
class BoundState2D:
    E: float
    r_minus: int
    r_plus: int
    j_minus: int
    j_plus: int
    l: int
    m_index: Fraction
    s: int
    x_field: SpinorField
    y_factor: GridFunction
    residual_report: dict = field(default_factory=dict)

    def tensor(self) -> tuple[np.ndarray, np.ndarray]:
        y = self.y_factor.values[None, :]
        return self.x_field.up.values[:, None] * y, self.x_field.down.values[:, None] * y

    @property
    def norm(self) -> float:
        up, down = self.tensor()
        w = self.x_field.spec.p ** self.x_field.spec.M * self.y_factor.spec.p ** self.y_factor.spec.M
        return math.sqrt((np.vdot(up, up).real + np.vdot(down, down).real) / w)

    def to_dict(self) -> dict:
        sx, sy = self.x_field.spec, self.y_factor.spec
        return {
            "p": sx.p,
            "N": sx.N,
            "M": sx.M,
            "N_y": sy.N,
            "M_y": sy.M,
            "E": float(self.E),
            "r_minus": self.r_minus,
            "r_plus": self.r_plus,
            "j_minus": self.j_minus,
            "j_plus": self.j_plus,
            "l": self.l,
            "m": str(self.m_index),
            "s": self.s,
            "lambda_minus": float(sx.p) ** (1 - self.r_minus),
            "lambda_plus": float(sx.p) ** (1 - self.r_plus),
            "norm": self.norm,
            "residual_report": _report_floats(self.residual_report),
            # separable state: x-spinor components and the y factor
            "field": [*self.x_field.to_envelopes(), self.y_factor.to_envelope()],
        }


def _masked_norm2(up, down, wx, wy):
    return (np.vdot(up[1:], up[1:]).real + np.vdot(down[1:], down[1:]).real) / (wx * wy)


def solve_2d(spec_x: GridSpec, spec_y: GridSpec, r_minus: int, r_plus: int, j_minus: int, j_plus: int,
             l: int, m_index, s: int, params: PhysicalParams = PhysicalParams(),
             dmode: str = "kernel") -> BoundState2D:
    """Psi(x, y) = Psi_zero_mode(x) Theta_{l m s}(y), both factors of unit norm.

    sigma_y [i, 1]^T = -[i, 1]^T, so the y part of H has eigenvalue
    E = -hbar v pi(-s) p^(1-l) on this state.
    """
    if spec_x.p != spec_y.p:
        raise ValueError("x and y grids must share p")
    p = spec_x.p
    zm = build_zero_mode(spec_x, r_minus, r_plus, j_minus, j_plus, params, dmode="none")
    try:
        th = theta(spec_y, ThetaIndex(l, Fraction(m_index), s))
    except ValueError as exc:
        raise InadmissibleState(str(exc)) from exc
    th = th * (1.0 / l2_norm(th))
    E = -params.hbar * params.v * theta_eigenvalue(p, ThetaIndex(l, Fraction(m_index), s), 1.0)
    state = BoundState2D(E, r_minus, r_plus, j_minus, j_plus, l, Fraction(m_index), s, zm.field, th)
    up, down = state.tensor()
    wx, wy = float(p) ** spec_x.M, float(p) ** spec_y.M
    n2 = _masked_norm2(up, down, wx, wy)
    m1 = params.hbar * float(p) ** (1 - r_minus) / params.v
    m2 = params.hbar * float(p) ** (1 - r_plus) / params.v
    profile = TwoValueMass(m1, m2)
    hy1, hy2 = apply_hamiltonian_2d(up, down, spec_x, spec_y, profile, params, dmode, parts="y")
    hx1, hx2 = apply_hamiltonian_2d(up, down, spec_x, spec_y, profile, params, dmode, parts="x")
    ry1, ry2 = hy1 - E * up, hy2 - E * down
    ry1[0] = ry2[0] = 0.0
    rayleigh = (np.vdot(up[1:], hy1[1:]) + np.vdot(down[1:], hy2[1:])) / (wx * wy) / n2
    state.residual_report = {
        "y_part": math.sqrt(_masked_norm2(ry1, ry2, wx, wy) / n2),
        "x_part": math.sqrt(_masked_norm2(hx1, hx2, wx, wy) / n2),
        "rayleigh_energy": float(rayleigh.real),
        "rayleigh_imag": float(rayleigh.imag),
        "global_hamiltonian": math.sqrt(_masked_norm2(hx1 + ry1, hx2 + ry2, wx, wy) / n2),
    }
    return state


def dispersion_table(p: int, ls, params: PhysicalParams = PhysicalParams()):
    """Rows (l, s, E) for one digit s of each chirality, E = -hbar v pi(-s) p^(1-l)."""
    rows = []
    for l in ls:
        for s in (chiral_digits(p, 1)[0], chiral_digits(p, -1)[0]):
            E = -params.hbar * params.v * chirality(p, s) * float(p) ** (1 - l)
            rows.append((l, s, E))
    return rows
