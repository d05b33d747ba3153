"""Harmonic analysis on p-adic grids and the p-adic Jackiw-Rebbi model."""

from .fourier import dft_fft, dft_naive, forward, forward_fft, inverse
from .grid import (
    Ball,
    GridFunction,
    GridSpec,
    ThetaIndex,
    haar_integral,
    haar_integral_signed,
    indicator,
    inner,
    l2_norm,
    theta,
    theta_indices,
)
from .jackiw_rebbi import (
    BoundState,
    BoundState2D,
    InadmissibleMass,
    InadmissibleState,
    PhysicalParams,
    PiecewiseMass,
    SpinorField,
    TwoValueMass,
    admissible_scale,
    build_bulk_state,
    build_interface_superposition,
    build_zero_mode,
    matching_residual,
    matching_scan,
    solve_2d,
)
from .operators import apply_kernel, apply_spectral, eigen_sweep, gamma_p, theta_eigenvalue
from .padic import PAdicScalar, Phase, chi_p, frac_part, norm_p, ord_p, pi_character

__version__ = "0.1.0"
