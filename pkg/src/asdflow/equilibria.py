"""Constant-mean-curvature equilibrium profiles (cylinders and unduloids).

The stationary states of the flow are exactly the profiles with constant mean
curvature.  On the periodic domain these are the undulary curves: with shape
parameter ecc (the eccentricity of the rolled ellipse in the classical
Delaunay construction, |ecc| < 1) and mean curvature hm > 0 they are given in
arc length s by

    x(s)   = integral from s0 to s of (1 + ecc*sin(hm*t)) /
                                       sqrt(1 + ecc^2 + 2*ecc*sin(hm*t)) dt
    rho(s) = sqrt(1 + ecc^2 + 2*ecc*sin(hm*s)) / hm

with s0 = pi/(2*hm).  ecc = 0 gives the cylinder of radius 1/hm; |ecc| = 1
degenerates to a chain of spheres and |ecc| > 1 to nodary curves, neither of
which is a positive periodic graph.  The curve closes with x-period 2*pi/k
exactly when

    hm = (k/pi) * integral from pi/2 to 3*pi/2 of (1 + ecc*sin t) /
                                         sqrt(1 + ecc^2 + 2*ecc*sin t) dt.

Profiles are anchored so that x(s0) = 0; the curve is even about x = 0, with
its radius maximum there for ecc >= 0 (for ecc < 0 the minimum sits at x = 0,
which is the same curve shifted by half a period).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import NumericError, ParameterError
from .grid import PeriodicProfile, TorusGrid

#: largest supported |ecc|; beyond this the integrand denominator 1 - |ecc|
#: is too close to the sphere-chain degeneracy and requests fail loudly.
ECC_MAX = 0.95

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class CmcClass:
    """Classification of the constant-mean-curvature curve family at ecc."""

    kind: str  # cylinder | undulary | sphere-chain | nodary
    graph_representable: bool


@dataclass(frozen=True)
class UnduloidSpec:
    """A 2*pi/k-periodic undulary: shape ecc, period count k, mean curvature."""

    ecc: float
    k: int
    mean_curvature: float


@dataclass
class ParametricCurve:
    """Arc-length samples of one x-period of an undulary curve."""

    s: np.ndarray
    x: np.ndarray
    rho: np.ndarray


def classify_cmc(ecc: float) -> CmcClass:
    """Classify the curve family at shape parameter ecc."""
    a = abs(ecc)
    if a == 0.0:
        return CmcClass("cylinder", True)
    if a < 1.0:
        return CmcClass("undulary", True)
    if a == 1.0:
        return CmcClass("sphere-chain", False)
    return CmcClass("nodary", False)


def _check_ecc(ecc: float) -> None:
    a = abs(ecc)
    if a >= 1.0:
        kind = classify_cmc(ecc).kind
        raise ParameterError(
            f"|ecc| = {a:.6g} >= 1 gives a {kind}, not a positive periodic graph"
        )
    if a > ECC_MAX:
        raise ParameterError(f"|ecc| = {a:.6g} exceeds the supported bound {ECC_MAX}")


def _arc_integrand(ecc: float):
    def f(t):
        return (1.0 + ecc * np.sin(t)) / np.sqrt(1.0 + ecc * ecc + 2.0 * ecc * np.sin(t))

    return f


def unduloid_mean_curvature(ecc: float, k: int) -> float:
    """Mean curvature hm making the undulary 2*pi/k-periodic in x.

    Adaptive Gauss-Kronrod quadrature at absolute tolerance 1e-12; the
    integrand is smooth for |ecc| <= 0.95.  ecc = 0 returns exactly k.
    """
    if k < 1:
        raise ParameterError(f"period count k must be >= 1, got {k}")
    _check_ecc(ecc)
    if ecc == 0.0:
        return float(k)
    val, err = quad(
        _arc_integrand(ecc), np.pi / 2, 3 * np.pi / 2, epsabs=1e-12, epsrel=1e-12, limit=200
    )
    if not np.isfinite(val) or err > 1e-9:
        raise NumericError(f"periodicity quadrature did not converge (err={err:.2e})")
    return float(k * val / np.pi)


def make_spec(ecc: float, k: int) -> UnduloidSpec:
    return UnduloidSpec(float(ecc), int(k), unduloid_mean_curvature(ecc, k))


# ---------------------------------------------------------------------------
# arc-length -> x cumulative integral and its inversion


class _ArcMap:
    """Cumulative x(s) over one s-period, 12-point Gauss-Legendre per segment.

    Segment sums are essentially exact for this analytic integrand, so x(s)
    evaluates to roundoff accuracy anywhere via one local panel.
    """

    def __init__(self, ecc: float, hm: float, nseg: int):
        self.ecc = ecc
        self.hm = hm
        nseg += nseg % 2  # even, so an edge lands on the anchor point s0
        s0 = np.pi / (2.0 * hm)
        period = 2.0 * np.pi / hm
        self.s_edges = np.linspace(s0 - period / 2.0, s0 + period / 2.0, nseg + 1)
        width = period / nseg
        mids = 0.5 * (self.s_edges[:-1] + self.s_edges[1:])
        pts = mids[:, None] + 0.5 * width * _GL_NODES[None, :]
        vals = self._integrand(pts)
        segments = 0.5 * width * (vals @ _GL_WEIGHTS)
        cum = np.concatenate([[0.0], np.cumsum(segments)])
        # anchor x(s0) = 0 through the local panel at the middle edge
        self.cum_x = cum - self._partial(self.s_edges[nseg // 2], cum[nseg // 2], s0)

    def _integrand(self, s):
        u = self.hm * s
        e = self.ecc
        return (1.0 + e * np.sin(u)) / np.sqrt(1.0 + e * e + 2.0 * e * np.sin(u))

    def _partial(self, a: float, xa: float, s: float) -> float:
        mid = 0.5 * (a + s)
        half = 0.5 * (s - a)
        return xa + half * float(np.dot(self._integrand(mid + half * _GL_NODES), _GL_WEIGHTS))

    def x_of_s(self, s: float) -> float:
        i = np.searchsorted(self.s_edges, s, side="right") - 1
        i = min(max(i, 0), len(self.s_edges) - 2)
        return self._partial(self.s_edges[i], self.cum_x[i], s)

    def s_of_x(self, x_target: float) -> float:
        """Invert the strictly increasing x(s) by bracketed root solve."""
        xt = min(max(x_target, self.cum_x[0]), self.cum_x[-1])
        i = int(np.searchsorted(self.cum_x, xt, side="right")) - 1
        i = min(max(i, 0), len(self.s_edges) - 2)
        a, b = self.s_edges[i], self.s_edges[i + 1]
        fa = self.x_of_s(a) - xt
        fb = self.x_of_s(b) - xt
        if fa == 0.0:
            return float(a)
        if fb == 0.0:
            return float(b)
        if fa * fb > 0.0:
            # target sits on a panel edge up to roundoff
            if min(abs(fa), abs(fb)) > 1e-11:
                raise NumericError("arc-length inversion lost its bracket")
            return float(a if abs(fa) <= abs(fb) else b)
        return float(brentq(lambda s: self.x_of_s(s) - xt, a, b, xtol=1e-14, rtol=8.9e-16))

    def rho_of_s(self, s) -> np.ndarray:
        e = self.ecc
        return np.sqrt(1.0 + e * e + 2.0 * e * np.sin(self.hm * np.asarray(s))) / self.hm


def unduloid_parametric(spec: UnduloidSpec, m: int) -> ParametricCurve:
    """Sample one full x-period (length 2*pi/k) at m arc-length samples."""
    if m < 64:
        raise ParameterError(f"need at least 64 samples per period, got {m}")
    _check_ecc(spec.ecc)
    hm = spec.mean_curvature
    s0 = np.pi / (2.0 * hm)
    period = 2.0 * np.pi / hm
    s = np.linspace(s0 - period / 2.0, s0 + period / 2.0, m)
    if spec.ecc == 0.0:
        return ParametricCurve(s, s - s0, np.full(m, 1.0 / hm))
    amap = _ArcMap(spec.ecc, hm, max(1024, 8 * m))
    x = np.array([amap.x_of_s(si) for si in s])
    return ParametricCurve(s, x, amap.rho_of_s(s))


def unduloid_profile(ecc: float, k: int, grid: TorusGrid) -> PeriodicProfile:
    """Resample the undulary onto the uniform grid by monotone inversion of x(s).

    The result is strictly positive, has period 2*pi/k, and is even about
    x = 0 (radius maximum there for ecc >= 0).
    """
    spec = make_spec(ecc, k)
    if spec.ecc == 0.0:
        return PeriodicProfile.constant(grid, 1.0 / spec.mean_curvature)
    amap = _ArcMap(spec.ecc, spec.mean_curvature, max(2048, 8 * grid.n))
    half_x = np.pi / k
    values = np.empty(grid.n)
    cache: dict[float, float] = {}
    for j, xj in enumerate(grid.nodes):
        xt = (xj + half_x) % (2.0 * half_x) - half_x  # fold into the base period
        if xt not in cache:
            cache[xt] = float(amap.rho_of_s(amap.s_of_x(xt)))
        values[j] = cache[xt]
    return PeriodicProfile(grid, values)
