"""Time integration of the flow with a stabilized IMEX splitting.

One baseline step solves

    (1 + dt*stab*d^4/dx^4) r_new = r + dt*(rhs(r) + stab*d^4/dx^4 r),

which is diagonal in Fourier space and reduces to

    r_hat_new(k) = r_hat(k) + dt*rhs_hat(k) / (1 + dt*stab*k^4).

The scheme is first-order consistent, leaves constants untouched exactly, and
is unconditionally stable for the dominant linear part as long as stab bounds
the fourth-order coefficient 1/(1+r_x^2)^2 <= 1 (we use stab_margin times the
pointwise maximum, recomputed every step).  An optional second-order variant
keeps the same splitting with a trapezoidal implicit part and a Heun-style
explicit corrector; the baseline is the default everywhere.

Step control is classic step doubling: a full step is compared against two
half steps and accepted (keeping the half-step result) when the discrepancy
is below adapt_tol * max|r|, else dt is halved.  Volume and area are recorded
as diagnostics; the splitting does not conserve them exactly, and the volume
error grows in the pinch collapse where the step size underresolves the
blow-up (pinch states are detected and never continued through).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .errors import NumericError
from .geometry import rhs_values
from .grid import PeriodicProfile, derivative_values, integrate_values, mode_amplitudes_values

REACHED_T_END = "reached_t_end"
PINCH_DETECTED = "pinch_detected"
DIVERGED = "diverged"
STEP_UNDERFLOW = "step_underflow"

_DT_FLOOR = 1e-14
_DIVERGENCE_BOUND = 1e6


@dataclass
class SimConfig:
    """Integration parameters.

    ``fixed_dt`` disables adaptivity and forces that exact step, which makes
    step sequences reproducible across runs that should be compared
    snapshot-by-snapshot (e.g. translation-equivariance checks).
    """

    t_end: float
    dt0: float = 1e-3
    stab_margin: float = 1.25
    adapt_tol: float = 1e-8
    pinch_frac: float = 0.25
    snapshot_every: int = 1000
    k_track: int = 4
    fixed_dt: float | None = None
    order: int = 1

    def __post_init__(self) -> None:
        for name in ("t_end", "dt0", "pinch_frac", "snapshot_every", "k_track"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.stab_margin < 1.0:
            raise ValueError(f"stab_margin must be >= 1, got {self.stab_margin}")
        if not 1e-10 <= self.adapt_tol <= 1e-2:
            raise ValueError(f"adapt_tol must be in [1e-10, 1e-2], got {self.adapt_tol}")
        if not 0.0 < self.pinch_frac < 1.0:
            raise ValueError(f"pinch_frac must be in (0, 1), got {self.pinch_frac}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.fixed_dt is not None and self.fixed_dt <= 0:
            raise ValueError(f"fixed_dt must be positive, got {self.fixed_dt}")


@dataclass
class TrajectoryRecord:
    """Diagnostics time series plus sparse profile snapshots."""

    times: np.ndarray
    volume: np.ndarray
    area: np.ndarray
    min_r: np.ndarray
    max_r: np.ndarray
    mode_amps: np.ndarray  # shape (k_track, len(times)); row k-1 is mode k
    snapshots: list[tuple[float, PeriodicProfile]] = field(repr=False)
    termination: str = REACHED_T_END

    def final_profile(self) -> PeriodicProfile:
        return self.snapshots[-1][1]


# ---------------------------------------------------------------------------
# stepping


def _step_values(values: np.ndarray, dt: float, stab: float, k4: np.ndarray) -> np.ndarray:
    g = rhs_values(values)
    n = values.shape[0]
    return np.fft.irfft(np.fft.rfft(values) + dt * np.fft.rfft(g) / (1.0 + dt * stab * k4), n)


def _step_values_order2(values: np.ndarray, dt: float, stab: float, k4: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    half = 0.5 * dt * stab * k4
    vhat = np.fft.rfft(values)
    ghat0 = np.fft.rfft(rhs_values(values))
    pred = np.fft.irfft(vhat + dt * ghat0 / (1.0 + dt * stab * k4), n)
    nhat0 = ghat0 + stab * k4 * vhat
    nhat1 = np.fft.rfft(rhs_values(pred)) + stab * k4 * np.fft.rfft(pred)
    return np.fft.irfft(((1.0 - half) * vhat + 0.5 * dt * (nhat0 + nhat1)) / (1.0 + half), n)


def _stabilizer(values: np.ndarray, margin: float) -> float:
    rx = derivative_values(values, 1)
    return margin * float(np.max(1.0 / (1.0 + rx * rx) ** 2))


def imex_step(r: PeriodicProfile, dt: float, stab: float) -> PeriodicProfile:
    """One baseline IMEX step; ``stab`` must bound max 1/(1+r_x^2)^2."""
    k = r.grid.wavenumbers
    out = _step_values(r.values, dt, stab, k**4)
    if not np.all(np.isfinite(out)):
        raise NumericError("IMEX step produced non-finite values")
    return r.with_values(out)


# ---------------------------------------------------------------------------
# trajectory loop


class _Recorder:
    def __init__(self, cfg: SimConfig, grid):
        self.cfg = cfg
        self.grid = grid
        self.times: list[float] = []
        self.volume: list[float] = []
        self.area: list[float] = []
        self.min_r: list[float] = []
        self.max_r: list[float] = []
        self.amps: list[np.ndarray] = []
        self.snapshots: list[tuple[float, PeriodicProfile]] = []

    def record(self, t: float, values: np.ndarray, snapshot: bool) -> None:
        rx = derivative_values(values, 1)
        self.times.append(t)
        self.volume.append(integrate_values(values * values))
        self.area.append(integrate_values(kernels.area_integrand(values, rx)))
        self.min_r.append(float(values.min()))
        self.max_r.append(float(values.max()))
        self.amps.append(mode_amplitudes_values(values, self.cfg.k_track))
        if snapshot:
            self.snapshots.append((t, PeriodicProfile(self.grid, values.copy())))

    def finish(self, t: float, values: np.ndarray, termination: str) -> TrajectoryRecord:
        if not self.snapshots or self.snapshots[-1][0] != t:
            self.snapshots.append((t, PeriodicProfile(self.grid, values.copy())))
        return TrajectoryRecord(
            times=np.array(self.times),
            volume=np.array(self.volume),
            area=np.array(self.area),
            min_r=np.array(self.min_r),
            max_r=np.array(self.max_r),
            mode_amps=np.array(self.amps).T,
            snapshots=self.snapshots,
            termination=termination,
        )


def simulate(r0: PeriodicProfile, cfg: SimConfig) -> TrajectoryRecord:
    """Integrate from r0 until t_end, pinch, divergence, or step underflow.

    The termination reason is data on the returned record, not an error.
    """
    if r0.min() <= 0.0:
        raise ValueError("initial profile must be strictly positive")
    step = _step_values if cfg.order == 1 else _step_values_order2
    k4 = r0.grid.wavenumbers**4
    v = r0.values.copy()
    t = 0.0
    dt = cfg.fixed_dt if cfg.fixed_dt is not None else cfg.dt0
    pinch_level = cfg.pinch_frac * float(v.min())
    rec = _Recorder(cfg, r0.grid)
    rec.record(t, v, snapshot=True)
    accepted = 0
    termination = REACHED_T_END
    while t < cfg.t_end - 1e-15:
        dt = min(dt, cfg.t_end - t)
        stab = _stabilizer(v, cfg.stab_margin)
        if cfg.fixed_dt is not None:
            new = step(v, dt, stab, k4)
        else:
            coarse = step(v, dt, stab, k4)
            new = step(step(v, 0.5 * dt, stab, k4), 0.5 * dt, stab, k4)
            err = float(np.max(np.abs(coarse - new)))
            tol = cfg.adapt_tol * float(np.max(np.abs(v)))
            if not np.isfinite(err) or err > tol:
                dt *= 0.5
                if dt < _DT_FLOOR:
                    termination = STEP_UNDERFLOW
                    break
                continue
            if err <= 0.25 * tol:
                dt *= 2.0
        v = new
        t += dt
        accepted += 1
        rec.record(t, v, snapshot=accepted % cfg.snapshot_every == 0)
        if not np.all(np.isfinite(v)) or float(np.max(np.abs(v))) > _DIVERGENCE_BOUND:
            termination = DIVERGED
            break
        if float(v.min()) < pinch_level:
            termination = PINCH_DETECTED
            break
    return rec.finish(t, v, termination)
