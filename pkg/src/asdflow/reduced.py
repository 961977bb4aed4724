"""Zero-mean reduction of the flow around a reference cylinder.

The enclosed-volume functional is conserved by the flow, so its level sets
foliate the state space.  Splitting a deviation from the reference radius
into its zero-mean part plus a constant, the constant is pinned by volume
matching: for a zero-mean deviation d and volume offset eta the lifted
deviation is d + c with

    c = sqrt((eta + r_base)^2 - ||d||_{L2}^2 / (2*pi)) - r_base,

the unique constant making the lifted profile enclose the same volume as the
cylinder of radius r_base + eta (the cross term vanishes because d has zero
mean).  On the torus the volume functional is quadratic, so this closed form
realizes the lift globally on its admissible set; a scalar root-finder
cross-check is kept as a test oracle.

Restricting the flow to zero-mean deviations through this lift removes the
constant direction and with it the zero eigenvalue of the cylinder
linearization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LiftRangeError
from .geometry import rhs_values, volume_functional
from .grid import PeriodicProfile, integrate_values


@dataclass
class ReducedState:
    """Zero-mean deviation plus the (volume offset, base radius) parameters."""

    deviation: PeriodicProfile
    volume_offset: float
    base_radius: float

    def __post_init__(self) -> None:
        _check_zero_mean(self.deviation)
        if self.base_radius <= 0.0:
            raise ValueError(f"base radius must be positive, got {self.base_radius}")


def _check_zero_mean(d: PeriodicProfile) -> None:
    mean_integral = abs(integrate_values(d.values))
    bound = 1e-12 * float(np.max(np.abs(d.values))) + 1e-14
    if mean_integral > 2.0 * np.pi * bound:
        raise ValueError(
            f"deviation must have zero mean; integral is {mean_integral:.3e}"
        )


def volume_matched_lift(
    deviation: PeriodicProfile, volume_offset: float, base_radius: float
) -> PeriodicProfile:
    """Add the volume-matching constant to a zero-mean deviation.

    Returns the deviation-from-base profile d + c; the full profile is the
    result plus base_radius.  Raises :class:`LiftRangeError` when the
    deviation is too large for the target volume (radicand <= 0).
    """
    _check_zero_mean(deviation)
    target = volume_offset + base_radius
    l2sq = integrate_values(deviation.values**2)
    radicand = target * target - l2sq / (2.0 * np.pi)
    if radicand <= 0.0:
        raise LiftRangeError(
            f"no volume-matched lift: ||deviation||^2/(2*pi) = {l2sq / (2 * np.pi):.6g} "
            f">= (volume_offset + base_radius)^2 = {target * target:.6g}"
        )
    c = np.sqrt(radicand) - base_radius
    return deviation.with_values(deviation.values + c)


def reduced_rhs(state: ReducedState) -> PeriodicProfile:
    """Zero-mean projection of the flow operator at the lifted profile."""
    lifted = volume_matched_lift(state.deviation, state.volume_offset, state.base_radius)
    full = lifted.values + state.base_radius
    if full.min() <= 0.0:
        raise LiftRangeError("lifted profile is not strictly positive")
    g = rhs_values(full)
    return state.deviation.with_values(g - g.mean())


def equivalent_cylinder_radius(r: PeriodicProfile) -> float:
    """Radius of the cylinder enclosing the same volume as the profile r."""
    return float(np.sqrt(volume_functional(r) / (2.0 * np.pi)))
