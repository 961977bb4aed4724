"""Linear stability spectra, growth-rate fits, and bifurcation analysis.

At a cylinder of radius a the linearized flow acts diagonally on Fourier
modes with rates

    mu_k = k^2 * (1/a^2 - k^2),

so mode k = 1 changes sign at a = 1: wide cylinders damp every mode, thin
ones amplify the long waves.  In the zero-mean reduction the k = 0 rate
drops out.  With the inverse radius lam = 1/a as parameter the reduced
linearization has Fourier symbol M_k = k^2 (lam^2 - k^2), whose only zero
crossings in lam occur at integers: the cylinder family intersects the
unduloid branches there, and the branches bend toward smaller lam
(subcritical pitchfork; the quadratic fit of lam against the mode-l cosine
amplitude certifies lam'(0) = 0 and lam''(0) < 0 numerically).

Jacobians of the full nonlinear operator are assembled in the collocation
basis by symmetric differencing and eigen-decomposed densely (the operator
is not self-adjoint in this basis); n <= 512 keeps that tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .dynamics import TrajectoryRecord
from .equilibria import unduloid_profile
from .errors import ParameterError
from .geometry import rhs_values, surface_diffusion_rhs
from .grid import PeriodicProfile, TorusGrid, cosine_coefficient, mean_project
from .reduced import equivalent_cylinder_radius

_EQUILIBRIUM_RESIDUAL_BOUND = 1e-5


@dataclass
class SpectrumReport:
    """Mode-indexed growth rates of a linearization.

    Analytic entries are (mode k, rate, multiplicity); numerical entries are
    (eigen-index, rate, 1) sorted by descending real part.
    """

    source: str  # "analytic_cylinder" | "numerical_jacobian"
    entries: list[tuple[int, complex, int]]
    radius: float | None = None


@dataclass
class BranchSample:
    """One point on a bifurcating equilibrium branch."""

    ecc: float
    lam: float  # 1 / equivalent cylinder radius (bifurcation parameter)
    amplitude: float  # signed cos(l x) coefficient of the zero-mean part
    residual: float  # max|rhs| at the sample
    leading_mu: float  # largest real part of the numerical spectrum


class PitchforkFit(NamedTuple):
    lambda0: float
    dlambda: float
    d2lambda: float


def cylinder_spectrum(radius: float, k_max: int, reduced: bool = False) -> SpectrumReport:
    """Analytic rates mu_k = k^2 (1/radius^2 - k^2) for k = 1..k_max.

    The reduced variant omits the k = 0 zero rate that the full problem
    always carries (the constant direction).
    """
    if radius <= 0.0:
        raise ParameterError(f"radius must be positive, got {radius}")
    entries: list[tuple[int, complex, int]] = []
    if not reduced:
        entries.append((0, 0.0 + 0.0j, 1))
    inv2 = 1.0 / (radius * radius)
    for k in range(1, k_max + 1):
        entries.append((k, complex(k * k * (inv2 - k * k)), 2))
    return SpectrumReport("analytic_cylinder", entries, radius=float(radius))


def default_jacobian_step(r_eq: PeriodicProfile) -> float:
    return float(np.cbrt(np.finfo(float).eps) * (1.0 + np.max(np.abs(r_eq.values))))


def numerical_jacobian(
    r_eq: PeriodicProfile, h: float | None = None, extrapolate: bool = False
) -> np.ndarray:
    """Differencing Jacobian of the flow operator at an approximate equilibrium.

    Column j is [rhs(r + h e_j) - rhs(r - h e_j)] / (2h) with e_j the j-th
    collocation unit bump.  With ``extrapolate`` the h and 2h column sets are
    combined as (4 J(h) - J(2h))/3, cancelling the O(h^2) term; that is what
    the 1e-6-level spectrum comparisons need, since the plain columns carry a
    third-derivative bias from the bump's large high-order derivatives.

    If a perturbed profile loses positivity the step is reduced once (h/16)
    before failing.
    """
    residual = float(np.max(np.abs(rhs_values(r_eq.values))))
    if residual > _EQUILIBRIUM_RESIDUAL_BOUND:
        raise ParameterError(
            f"not an approximate equilibrium: max|rhs| = {residual:.3e} "
            f"> {_EQUILIBRIUM_RESIDUAL_BOUND:.0e}"
        )
    if h is None:
        h = default_jacobian_step(r_eq)
    if extrapolate:
        return (4.0 * _plain_jacobian(r_eq, h) - _plain_jacobian(r_eq, 2.0 * h)) / 3.0
    return _plain_jacobian(r_eq, h)


def _plain_jacobian(r_eq: PeriodicProfile, h: float) -> np.ndarray:
    values = r_eq.values
    if values.min() - h <= 0.0:
        h = h / 16.0
        if values.min() - h <= 0.0:
            raise ParameterError(
                f"differencing step {h:.3e} breaks positivity (min r = {values.min():.3e})"
            )
    n = values.shape[0]
    jac = np.empty((n, n))
    plus = values.copy()
    minus = values.copy()
    for j in range(n):
        plus[j] = values[j] + h
        minus[j] = values[j] - h
        jac[:, j] = (rhs_values(plus) - rhs_values(minus)) / (2.0 * h)
        plus[j] = values[j]
        minus[j] = values[j]
    return jac


def jacobian_spectrum(jac: np.ndarray, radius: float | None = None) -> SpectrumReport:
    """Dense eigenvalues of a collocation Jacobian, descending real part."""
    eig = np.linalg.eigvals(jac)
    order = np.argsort(-eig.real)
    entries = [(int(i), complex(eig[idx]), 1) for i, idx in enumerate(order)]
    return SpectrumReport("numerical_jacobian", entries, radius=radius)


def leading_rate(jac: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(jac).real))


# ---------------------------------------------------------------------------
# trajectory rate fitting


def fit_mode_rate(record: TrajectoryRecord, k: int, window: tuple[float, float]) -> float:
    """Least-squares slope of log amplitude of mode k over a time window."""
    if not 1 <= k <= record.mode_amps.shape[0]:
        raise ValueError(f"mode {k} was not tracked (k_track = {record.mode_amps.shape[0]})")
    t_a, t_b = window
    amps = record.mode_amps[k - 1]
    mask = (record.times >= t_a) & (record.times <= t_b) & (amps > 0.0)
    if mask.sum() < 5:
        raise ValueError(f"need at least 5 samples in window, have {int(mask.sum())}")
    t = record.times[mask]
    design = np.vstack([np.ones(t.size), t]).T
    coeffs, *_ = np.linalg.lstsq(design, np.log(amps[mask]), rcond=None)
    return float(coeffs[1])


# ---------------------------------------------------------------------------
# branch tracing and pitchfork certification


def trace_branch(
    mode: int,
    ecc_grid: Sequence[float],
    n: int,
    polish: bool = False,
    with_spectrum: bool = True,
) -> list[BranchSample]:
    """Sample the 2*pi/mode-periodic equilibrium branch at the given ecc values."""
    grid = TorusGrid(n)
    samples = []
    for ecc in ecc_grid:
        profile = unduloid_profile(float(ecc), mode, grid)
        if polish:
            profile = newton_polish(profile)
        zero_mean = mean_project(profile)
        lam = 1.0 / equivalent_cylinder_radius(profile)
        amplitude = cosine_coefficient(zero_mean, mode)
        residual = float(np.max(np.abs(surface_diffusion_rhs(profile).values)))
        lead = leading_rate(numerical_jacobian(profile)) if with_spectrum else float("nan")
        samples.append(BranchSample(float(ecc), lam, amplitude, residual, lead))
    return samples


def fit_pitchfork(samples: Sequence[BranchSample]) -> PitchforkFit:
    """Quadratic least squares lam(s) ~ lam0 + dlam*s + d2lam*s^2/2.

    The amplitude coordinate s is the signed mode cosine coefficient.  Grids
    symmetric about 0 give unbiased odd coefficients; one-sided grids are
    accepted as long as the fit matrix is nondegenerate.
    """
    if len(samples) < 5:
        raise ValueError(f"need at least 5 branch samples, have {len(samples)}")
    s = np.array([b.amplitude for b in samples])
    lam = np.array([b.lam for b in samples])
    design = np.vstack([np.ones(s.size), s, 0.5 * s * s]).T
    if np.linalg.matrix_rank(design) < 3:
        raise ValueError("degenerate pitchfork fit matrix (amplitudes not distinct)")
    coeffs, *_ = np.linalg.lstsq(design, lam, rcond=None)
    return PitchforkFit(float(coeffs[0]), float(coeffs[1]), float(coeffs[2]))


def reduced_symbol(lam: float, k: int) -> float:
    """Fourier symbol M_k = k^2 (lam^2 - k^2) of the reduced linearization."""
    return float(k * k * (lam * lam - k * k))


def bifurcation_scan(lams: Sequence[float], k_max: int) -> list[float]:
    """Parameter values where some reduced symbol M_k crosses or touches zero.

    Zero crossings of M_k in lam > 0 happen only at lam = k, so a scan over
    a grid avoiding integers flags nothing.
    """
    lams = np.asarray(sorted(lams), dtype=float)
    flagged: set[float] = set()
    for k in range(1, k_max + 1):
        m = k * k * (lams * lams - k * k)
        for i in np.nonzero(m == 0.0)[0]:
            flagged.add(float(lams[i]))
        for i in np.nonzero(m[:-1] * m[1:] < 0.0)[0]:
            lo, hi = lams[i], lams[i + 1]
            flagged.add(float(lo + (hi - lo) * m[i] / (m[i] - m[i + 1])))
    return sorted(flagged)


# ---------------------------------------------------------------------------
# Newton polish of branch profiles
#
# Works in the even zero-mean cosine coordinates (translation symmetry is
# factored out by evenness, the constant direction by the volume-matched
# lift), so the reduced Jacobian is square and nonsingular off the
# bifurcation points.


def newton_polish(profile: PeriodicProfile, max_iter: int = 6, tol: float = 1e-10) -> PeriodicProfile:
    """Drive the equilibrium residual of an even profile below ``tol``.

    Newton iteration on the zero-mean reduction at fixed enclosed volume;
    the iterate keeps the volume of the input profile.
    """
    from .reduced import volume_matched_lift  # local import avoids cycle at import time

    grid = profile.grid
    n = grid.n
    base = equivalent_cylinder_radius(profile)
    n_modes = n // 2 - 1
    nodes = grid.nodes
    cos_table = np.array([np.cos(k * nodes) for k in range(1, n_modes + 1)])

    def coords_to_deviation(a: np.ndarray) -> PeriodicProfile:
        return PeriodicProfile(grid, a @ cos_table)

    def residual_coords(a: np.ndarray) -> np.ndarray:
        lifted = volume_matched_lift(coords_to_deviation(a), 0.0, base)
        g = rhs_values(lifted.values + base)
        g = g - g.mean()
        return (cos_table @ g) * (2.0 / n)

    zero_mean = mean_project(profile)
    a = (cos_table @ zero_mean.values) * (2.0 / n)
    step_h = 1e-7 * (1.0 + base)
    for _ in range(max_iter):
        res = residual_coords(a)
        if float(np.max(np.abs(res))) <= tol:
            break
        jac = np.empty((n_modes, n_modes))
        for j in range(n_modes):
            bumped = a.copy()
            bumped[j] += step_h
            jac[:, j] = (residual_coords(bumped) - res) / step_h
        a = a - np.linalg.solve(jac, res)
    lifted = volume_matched_lift(coords_to_deviation(a), 0.0, base)
    return PeriodicProfile(grid, lifted.values + base)
