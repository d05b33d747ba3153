import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpdirac.grid import Ball, GridSpec, ThetaIndex, l2_norm, theta
from qpdirac.jackiw_rebbi import (
    PAULI,
    InadmissibleMass,
    InadmissibleState,
    PhysicalParams,
    PiecewiseMass,
    TwoValueMass,
    admissible_scale,
    build_bulk_state,
    build_interface_superposition,
    build_zero_mode,
    chiral_digits,
    chirality,
    dispersion_table,
    hamiltonian_residual,
    mass_at,
    matching_residual,
    matching_scan,
    literal_zero_mode_constant,
    solve_2d,
    zero_mode_constant,
)
from qpdirac.padic import PAdicScalar


def Q(x, p=5):
    return PAdicScalar.from_rational(Fraction(x), p, 6)


# -- mass profiles ---------------------------------------------------------------

def test_two_value_mass():
    m = TwoValueMass(1.0, 2.0)
    assert mass_at(m, Q(2)) == -1.0
    assert mass_at(m, Q(Fraction(1, 5))) == 2.0
    assert mass_at(m, Q(4 * 25)) == 2.0
    with pytest.raises(ValueError):
        mass_at(m, PAdicScalar.zero(5))
    with pytest.raises(ValueError):
        TwoValueMass(-1.0, 2.0)


def test_two_value_mass_on_grid_follows_sign():
    s = GridSpec(5, 1, 1)
    g = TwoValueMass(3.0, 7.0).on_grid(s)
    assert g[0] == 0
    assert set(g[s.sign > 0]) == {7.0} and set(g[s.sign < 0]) == {-3.0}


def test_piecewise_mass():
    p = 5
    # Ball(c, r) has radius p^r: 1 + 5Z_5, 2 + 5Z_5 and 1/5 + Z_5
    prof = PiecewiseMass(p, ((Ball(1, -1), 2.0), (Ball(2, -1), -3.0), (Ball(Fraction(1, 5), 0), 4.0)))
    assert mass_at(prof, Q(6)) == 2.0
    assert mass_at(prof, Q(7)) == -3.0
    assert mass_at(prof, Q(Fraction(1, 5))) == 4.0
    with pytest.raises(ValueError):
        mass_at(prof, Q(3))


def test_piecewise_mass_validation():
    with pytest.raises(ValueError, match="interface"):
        PiecewiseMass(5, ((Ball(0, 0), 1.0),))
    with pytest.raises(ValueError, match="wrong sign"):
        PiecewiseMass(5, ((Ball(2, -1), 1.0),))
    with pytest.raises(ValueError, match="overlap"):
        PiecewiseMass(5, ((Ball(1, -1), 1.0), (Ball(6, -2), 1.0)))


def test_piecewise_on_grid_needs_full_cover():
    s = GridSpec(5, 0, 1)
    with pytest.raises(ValueError, match="uncovered"):
        PiecewiseMass(5, ((Ball(1, -1), 1.0),)).on_grid(s)
    full = PiecewiseMass(5, tuple((Ball(j, -1), 1.0 if j in (1, 4) else -1.0) for j in range(1, 5)))
    assert np.array_equal(full.on_grid(s), TwoValueMass(1.0, 1.0).on_grid(s))


# -- matching condition -----------------------------------------------------------

def test_matching_zero_at_zero_energy():
    for m1, m2 in [(1, 1), (5, 25), (0.3, 7)]:
        assert abs(matching_residual(0.0, m1, m2)) < 1e-14


def test_matching_nonzero_away_from_zero():
    assert matching_residual(0.5, 1.0, 1.0) != 0
    assert matching_residual(-0.5, 1.0, 1.0) == pytest.approx(-matching_residual(0.5, 1.0, 1.0))


def test_matching_rejects_out_of_bracket():
    with pytest.raises(ValueError):
        matching_residual(2.0, 1.0, 3.0)


@given(st.floats(0.1, 50), st.floats(0.1, 50))
def test_matching_scan_single_root(m1, m2):
    _, R, roots = matching_scan(m1, m2, n=2000)
    assert len(roots) == 1
    assert abs(roots[0]) <= 2 * min(m1, m2) / 2000
    assert np.all(np.isfinite(R))


# -- scales --------------------------------------------------------------------------

def test_admissible_scale():
    assert admissible_scale(5, 5).r == 0
    assert admissible_scale(0.2, 5).r == 2
    assert admissible_scale(25, 5).r == -1
    with pytest.raises(InadmissibleMass):
        admissible_scale(2, 5)
    with pytest.raises(InadmissibleMass):
        admissible_scale(0, 5)


def test_admissible_scale_snap_and_units():
    c = admissible_scale(2, 5, snap=True)
    assert (c.r, c.effective_mass, c.snapped) == (1, 1.0, True)
    # m v / hbar = 5 with v = 2, hbar = 4
    assert admissible_scale(10, 5, PhysicalParams(v=2, hbar=4)).r == 0


def test_chirality_splits_digits():
    for p in (3, 5, 7, 11):
        plus, minus = chiral_digits(p, 1), chiral_digits(p, -1)
        assert len(plus) == len(minus) == (p - 1) // 2
        assert sorted(plus + minus) == list(range(1, p))
    assert chiral_digits(3, 1) == (2,) and chiral_digits(3, -1) == (1,)
    assert chirality(5, 1) == 1


# -- zero mode -------------------------------------------------------------------------

ZERO_MODE_CASES = [(5, 2, 2, 0, -1, 2, 1), (3, 1, 1, 0, 0, 1, 2), (7, 1, 2, 1, -1, 1, 3), (3, 2, 2, -1, 2, 1, 2)]


@pytest.mark.parametrize("p, N, M, rm, rp, jm, jp", ZERO_MODE_CASES)
def test_zero_mode_structure(p, N, M, rm, rp, jm, jp):
    s = GridSpec(p, N, M)
    bs = build_zero_mode(s, rm, rp, jm, jp)
    assert bs.E == 0.0
    assert bs.norm == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(bs.field.up.values, 1j * bs.field.down.values)
    assert bs.residual_report["per_region_algebra"] < 1e-14
    # both branch Thetas equal 1 at 0 (n = 0), so the interface value is the common constant
    assert bs.field.down.values[0] == bs.constant
    assert bs.constant == zero_mode_constant(p, rm, rp)
    assert math.isfinite(bs.residual_report["global_hamiltonian"])


def test_zero_mode_branches_agree_at_interface():
    s = GridSpec(5, 2, 2)
    a = theta(s, ThetaIndex(0, 0, 2)).values[0]
    b = theta(s, ThetaIndex(-1, 0, 1)).values[0]
    assert a == b == 1


def test_zero_mode_pieces_are_exact_eigenfunctions():
    # on each sign class the component equals a Theta, whose D-eigenvalue cancels the mass term
    s = GridSpec(5, 2, 2)
    bs = build_zero_mode(s, 0, -1, 2, 1)
    assert bs.lambda_minus == 5.0 and bs.lambda_plus == 25.0
    th = theta(s, ThetaIndex(-1, 0, 1)).values
    mask = s.sign > 0
    assert np.abs(bs.field.down.values[mask] - bs.constant * th[mask]).max() == 0


def test_zero_mode_chirality_errors():
    s = GridSpec(5, 1, 1)
    with pytest.raises(InadmissibleState, match="j_plus"):
        build_zero_mode(s, 0, 0, 2, 2)
    with pytest.raises(InadmissibleState, match="j_minus"):
        build_zero_mode(s, 0, 0, 1, 1)
    with pytest.raises(InadmissibleState, match="representable"):
        build_zero_mode(s, 2, 0, 2, 1)


@pytest.mark.parametrize("rm, rp", [(0, 0), (1, -1), (0, -1), (1, 1)])
def test_literal_constant_norm(rm, rp):
    # c_literal^2 = p / (m1 + m2) = 1 / (p^-rm + p^-rp) against 1 / (p^rm + p^rp) for unit norm
    p = 5
    s = GridSpec(p, 2, 2)
    bs = build_zero_mode(s, rm, rp, 2, 1, normalization="literal", dmode="none")
    want = math.sqrt((p**rm + p**rp) / (p**-rm + p**-rp))
    assert bs.norm == pytest.approx(want, rel=1e-12)
    assert (abs(bs.norm - 1) < 1e-12) == (rm + rp == 0)
    m1, m2 = 5.0 ** (1 - rm), 5.0 ** (1 - rp)
    assert bs.constant == literal_zero_mode_constant(m1, m2, p)


def test_zero_mode_units():
    s = GridSpec(3, 1, 1)
    params = PhysicalParams(v=2.0, hbar=0.5)
    bs = build_zero_mode(s, 0, 0, 1, 2, params)
    assert bs.residual_report["per_region_algebra"] < 1e-14
    assert bs.norm == pytest.approx(1.0, abs=1e-12)


# -- superposition ----------------------------------------------------------------------

def test_superposition_default_terms():
    s = GridSpec(5, 2, 2)
    psi = build_interface_superposition(s, r_minus=0, r_plus=-1)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    # two terms, both worth 2 c at x = 0 before renormalization, paired (2, 1) and (3, 4)
    c = zero_mode_constant(5, 0, -1)
    raw = sum(build_zero_mode(s, 0, -1, jm, jp, dmode="none").field.down.values for jm, jp in [(2, 1), (3, 4)])
    assert np.allclose(psi.down.values, raw / (raw[0] / psi.down.values[0]))
    assert raw[0] == pytest.approx(2 * c)


def test_superposition_single_term_is_zero_mode():
    s = GridSpec(3, 1, 1)
    psi = build_interface_superposition(s, terms=[(0, 0, 1, 2)])
    zm = build_zero_mode(s, 0, 0, 1, 2, dmode="none")
    assert np.abs(psi.up.values - zm.field.up.values).max() < 1e-15


def test_superposition_needs_terms():
    s = GridSpec(3, 1, 1)
    with pytest.raises(ValueError):
        build_interface_superposition(s)
    with pytest.raises(ValueError):
        build_interface_superposition(s, terms=[])


# -- bulk states ------------------------------------------------------------------------

def test_bulk_example():
    s = GridSpec(5, 2, 2)
    prof = TwoValueMass(25.0, 25.0)
    for branch in (1, -1):
        bs = build_bulk_state(s, Ball(Fraction(1, 5), 0), 1, PhysicalParams(), prof, branch)
        assert bs.E == pytest.approx(branch * math.sqrt(600))
        assert bs.norm == pytest.approx(1.0, abs=1e-12)
        assert bs.residual_report["global_hamiltonian"] < 1e-10
        assert bs.residual_report["global_hamiltonian_spectral"] < 1e-10
        assert bs.r_plus == 0 and bs.lambda_plus == 5.0


def test_bulk_on_negative_class():
    s = GridSpec(5, 2, 2)
    bs = build_bulk_state(s, Ball(Fraction(2, 5), -1), 3, PhysicalParams(), TwoValueMass(30.0, 1.0), -1)
    assert bs.r_minus == -1 and bs.lambda_minus == 25.0
    assert bs.E == pytest.approx(-math.sqrt(900 - 625))
    assert bs.residual_report["global_hamiltonian"] < 1e-10


def test_bulk_rejections():
    s = GridSpec(5, 2, 2)
    prof = TwoValueMass(25.0, 25.0)
    with pytest.raises(InadmissibleState, match="interface"):
        build_bulk_state(s, Ball(0, 0), 1, PhysicalParams(), prof)
    with pytest.raises(InadmissibleState, match="imaginary"):
        build_bulk_state(s, Ball(Fraction(1, 5), 0), 1, PhysicalParams(), TwoValueMass(1.0, 1.0))
    with pytest.raises(ValueError):
        build_bulk_state(s, Ball(Fraction(1, 5), 0), 1, PhysicalParams(), prof, branch=0)


def test_bulk_rejects_nonconstant_mass():
    s = GridSpec(5, 1, 1)
    pieces = []
    for a in range(1, 25):
        x = Fraction(a, 5)
        sign = 1 if PAdicScalar.from_rational(x, 5, 1).leading_digit in (1, 4) else -1
        pieces.append((Ball(x, -1), 5.0 if a == 6 else 30.0 * sign))
    prof = PiecewiseMass(5, tuple(pieces))
    # 1/5 + Z_5 avoids 0 but holds both 1/5 (mass 30) and 6/5 (mass 5)
    with pytest.raises(InadmissibleState, match="constant"):
        build_bulk_state(s, Ball(Fraction(1, 5), 0), 1, PhysicalParams(), prof)


# -- Hamiltonian -------------------------------------------------------------------------

def test_pauli_algebra():
    sx, sy, sz = PAULI["x"], PAULI["y"], PAULI["z"]
    assert np.array_equal(sx @ sy - sy @ sx, 2j * sz)
    assert np.array_equal(sy @ np.array([1j, 1]), -np.array([1j, 1]))


def test_hamiltonian_residual_modes_agree():
    s = GridSpec(3, 2, 2)
    bs = build_zero_mode(s, 0, 0, 1, 2, dmode="none")
    prof = TwoValueMass(3.0, 3.0)
    a = hamiltonian_residual(bs.field, 0.0, prof, dmode="kernel")
    b = hamiltonian_residual(bs.field, 0.0, prof, dmode="spectral")
    c = hamiltonian_residual(bs.field, 0.0, prof, dmode="kernel-direct")
    assert a == pytest.approx(b, rel=1e-9) and a == pytest.approx(c, rel=1e-12)
    assert math.isnan(hamiltonian_residual(bs.field, 0.0, prof, dmode="none"))


# -- 2D ------------------------------------------------------------------------------------

@pytest.mark.parametrize("l", [0, 1, 2])
@pytest.mark.parametrize("s_digit", [1, 2])
def test_2d_energy(l, s_digit):
    sx = sy = GridSpec(3, 2, 2)
    st2 = solve_2d(sx, sy, 0, 0, 1, 2, l, 0, s_digit)
    want = -chirality(3, s_digit) * 3.0 ** (1 - l)
    assert st2.E == want
    assert st2.norm == pytest.approx(1.0, abs=1e-12)
    assert st2.residual_report["y_part"] < 1e-12
    assert st2.residual_report["rayleigh_energy"] == pytest.approx(want, abs=1e-12)


def test_2d_rejects_bad_y_state():
    s = GridSpec(3, 1, 1)
    with pytest.raises(InadmissibleState):
        solve_2d(s, s, 0, 0, 1, 2, 3, 0, 1)
    with pytest.raises(ValueError):
        solve_2d(s, GridSpec(5, 1, 1), 0, 0, 1, 2, 0, 0, 1)


def test_2d_to_dict_layout():
    s = GridSpec(3, 1, 1)
    d = solve_2d(s, s, 0, 0, 1, 2, 0, Fraction(1, 3), 2).to_dict()
    assert d["m"] == "1/3" and len(d["field"]) == 3
    assert d["lambda_minus"] == d["lambda_plus"] == 3.0


def test_dispersion_table():
    rows = dispersion_table(3, [0, 1, 2])
    assert rows == [(0, 2, -3.0), (0, 1, 3.0), (1, 2, -1.0), (1, 1, 1.0), (2, 2, -1 / 3), (2, 1, 1 / 3)]


def test_2d_tensor_norm_weights():
    s = GridSpec(3, 1, 1)
    st2 = solve_2d(s, s, 0, 0, 1, 2, 0, 0, 1)
    assert l2_norm(st2.y_factor) == pytest.approx(1.0)
    up, down = st2.tensor()
    assert up.shape == (9, 9)
