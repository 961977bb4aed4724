"""Uniform torus grid and exact spectral calculus.

The domain is the one-dimensional torus [-pi, pi] sampled at n equispaced
collocation nodes.  Collocation values are the source of truth everywhere in
the package; Fourier coefficients are computed on demand.  Differentiation,
integration, zero-mean projection and grid-aligned translation are all exact
(to roundoff) for trigonometric polynomials the grid can represent.

Conventions:
  - n must be even and >= 8; the Nyquist mode is zeroed in odd-order
    derivatives (the standard real-signal convention).
  - Nonlinear products are *not* dealiased; resolution n is the accuracy
    knob and the fourth-order dissipation of the flow damps the high modes.
  - Only grid-aligned translations are supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class TorusGrid:
    """Equispaced collocation grid x_j = -pi + 2*pi*j/n, j = 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if self.n % 2 != 0 or self.n < 8:
            raise ValueError(f"grid size must be even and >= 8, got {self.n}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers 0..n/2 of the half (rfft) spectrum."""
        return np.fft.rfftfreq(self.n, d=1.0 / self.n)


@dataclass
class PeriodicProfile:
    """Real samples of a 2*pi-periodic function on a :class:`TorusGrid`.

    When used as a flow state the values must be strictly positive; that is
    enforced by the geometry operators, not here, so that diagnostics can
    still be carried on sign-indefinite fields (deviations, velocities, ...).
    """

    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must all be finite")
        self.values = v

    @classmethod
    def from_function(cls, grid: TorusGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "PeriodicProfile":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float))

    @classmethod
    def constant(cls, grid: TorusGrid, value: float) -> "PeriodicProfile":
        return cls(grid, np.full(grid.n, float(value)))

    def with_values(self, values: np.ndarray) -> "PeriodicProfile":
        return PeriodicProfile(self.grid, values)

    def copy(self) -> "PeriodicProfile":
        return PeriodicProfile(self.grid, self.values.copy())

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())


# ---------------------------------------------------------------------------
# array-level kernels (shared by the operator modules, which work on raw
# values in their inner loops and wrap profiles only at the API boundary)


def derivative_values(values: np.ndarray, order: int) -> np.ndarray:
    """Spectral d^order/dx^order of a value array; order in 1..4."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    n = values.shape[0]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    coeffs = np.fft.rfft(values)
    if order % 2 == 0:
        coeffs *= (-1.0) ** (order // 2) * k**order
    else:
        coeffs *= 1j * (-1.0) ** ((order - 1) // 2) * k**order
        coeffs[-1] = 0.0  # Nyquist has no well-defined odd derivative
    return np.fft.irfft(coeffs, n)


def integrate_values(values: np.ndarray) -> float:
    """Trapezoid rule on the torus: exact for resolvable trigonometric modes."""
    n = values.shape[0]
    return float(2.0 * np.pi * values.sum() / n)


# ---------------------------------------------------------------------------
# profile-level operations


def derivative(u: PeriodicProfile, order: int) -> PeriodicProfile:
    """Spectral derivative; exact for trigonometric polynomials of degree < n/2."""
    return u.with_values(derivative_values(u.values, order))


def integrate(u: PeriodicProfile) -> float:
    """Integral of u over the torus, (2*pi/n) * sum of samples."""
    return integrate_values(u.values)


def mean_project(u: PeriodicProfile) -> PeriodicProfile:
    """Remove the mean: u - (1/2*pi) * integral(u).  Idempotent."""
    return u.with_values(u.values - u.values.mean())


def translate(u: PeriodicProfile, m: int) -> PeriodicProfile:
    """Grid-aligned shift: the result samples u(x + 2*pi*m/n)."""
    return u.with_values(np.roll(u.values, -int(m) % u.grid.n))


# ---------------------------------------------------------------------------
# Fourier coefficient access
#
# The DFT sees the samples as starting at index 0, but node 0 sits at
# x = -pi; true coefficients with respect to e^{ikx} therefore carry an
# extra phase e^{ik*pi} = (-1)^k relative to the raw rfft output.


def spectral_coefficients(u: PeriodicProfile) -> np.ndarray:
    """Half-spectrum coefficients c_k, k = 0..n/2, of u = sum c_k e^{ikx} + c.c.

    Normalized so that a pure mode a*cos(kx) (0 < k < n/2) has c_k = a/2.
    The full spectrum is recovered by conjugate symmetry c_{-k} = conj(c_k).
    """
    n = u.grid.n
    c = np.fft.rfft(u.values) / n
    signs = np.where(np.arange(n // 2 + 1) % 2 == 0, 1.0, -1.0)
    return c * signs


def profile_from_coefficients(grid: TorusGrid, coeffs: np.ndarray) -> PeriodicProfile:
    """Inverse of :func:`spectral_coefficients`."""
    n = grid.n
    if coeffs.shape != (n // 2 + 1,):
        raise ValueError(f"expected {n // 2 + 1} coefficients, got {coeffs.shape}")
    signs = np.where(np.arange(n // 2 + 1) % 2 == 0, 1.0, -1.0)
    return PeriodicProfile(grid, np.fft.irfft(coeffs * signs * n, n))


def cosine_coefficient(u: PeriodicProfile, k: int) -> float:
    """Signed coefficient of cos(kx) in the trigonometric interpolant of u."""
    n = u.grid.n
    if not 0 <= k <= n // 2:
        raise ValueError(f"mode {k} outside 0..{n // 2}")
    c = spectral_coefficients(u)[k]
    if k == 0 or k == n // 2:
        return float(c.real)
    return float(2.0 * c.real)


def mode_amplitude(u: PeriodicProfile, k: int) -> float:
    """|coefficient| of mode k, scaled so a*cos(kx) has amplitude |a|."""
    n = u.grid.n
    if not 0 <= k <= n // 2:
        raise ValueError(f"mode {k} outside 0..{n // 2}")
    c = spectral_coefficients(u)[k]
    scale = 1.0 if k in (0, n // 2) else 2.0
    return float(scale * abs(c))


def mode_amplitudes_values(values: np.ndarray, k_max: int) -> np.ndarray:
    """Amplitudes of modes 1..k_max of a value array (diagnostics fast path)."""
    n = values.shape[0]
    c = np.fft.rfft(values)
    return 2.0 * np.abs(c[1 : k_max + 1]) / n
