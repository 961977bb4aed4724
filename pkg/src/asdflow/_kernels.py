"""Pointwise hot kernels with a numba fast path and a pure-numpy fallback.

Every kernel maps collocation-value arrays to collocation-value arrays; all
spectral differentiation stays outside (FFTs are not numba-compilable).  The
active backend is chosen at import time from the ``ASDFLOW_NUMBA`` environment
variable ("1" default, "0" forces numpy) and can be switched at runtime with
:func:`set_backend`.  Both paths evaluate identical expression trees, so they
agree to the last few ulps; ``benchmarks/bench_kernels.py`` compares their
throughput.
"""

from __future__ import annotations

import os

import numpy as np

# ---------------------------------------------------------------------------
# numpy reference implementations


def _np_curvature_triple(r, rx, rxx):
    w = 1.0 + rx * rx
    sw = np.sqrt(w)
    k1 = 1.0 / (r * sw)
    k2 = -rxx / (w * sw)
    return k1, k2, k1 + k2


def _np_mean_curvature(r, rx, rxx):
    w = 1.0 + rx * rx
    sw = np.sqrt(w)
    return 1.0 / (r * sw) - rxx / (w * sw)


def _np_transport_weight(r, rx):
    return r / np.sqrt(1.0 + rx * rx)


def _np_area_integrand(r, rx):
    return r * np.sqrt(1.0 + rx * rx)


def _np_quasilinear_triple(r, rx, rxx):
    w = 1.0 + rx * rx
    w2 = w * w
    w3 = w2 * w
    rx2 = rx * rx
    b4 = 1.0 / w2
    b3 = 2.0 * rx * (w - 5.0 * r * rxx) / (r * w3)
    low = (
        (rx2 - 1.0) / (r * r * w2) * rxx
        + (6.0 * rx2 - 1.0) / (r * w3) * rxx * rxx
        + (3.0 - 15.0 * rx2) / (w3 * w) * rxx * rxx * rxx
        + rx2 / (r * r * r * w)
    )
    return b4, b3, low


_NUMPY = {
    "curvature_triple": _np_curvature_triple,
    "mean_curvature": _np_mean_curvature,
    "transport_weight": _np_transport_weight,
    "area_integrand": _np_area_integrand,
    "quasilinear_triple": _np_quasilinear_triple,
}

# ---------------------------------------------------------------------------
# numba fast path (loop form so the whole pointwise block fuses)

_NUMBA: dict | None
try:
    from numba import njit

    @njit(cache=True)
    def _nb_curvature_triple(r, rx, rxx):
        n = r.shape[0]
        k1 = np.empty(n)
        k2 = np.empty(n)
        h = np.empty(n)
        for i in range(n):
            w = 1.0 + rx[i] * rx[i]
            sw = np.sqrt(w)
            k1[i] = 1.0 / (r[i] * sw)
            k2[i] = -rxx[i] / (w * sw)
            h[i] = k1[i] + k2[i]
        return k1, k2, h

    @njit(cache=True)
    def _nb_mean_curvature(r, rx, rxx):
        n = r.shape[0]
        h = np.empty(n)
        for i in range(n):
            w = 1.0 + rx[i] * rx[i]
            sw = np.sqrt(w)
            h[i] = 1.0 / (r[i] * sw) - rxx[i] / (w * sw)
        return h

    @njit(cache=True)
    def _nb_transport_weight(r, rx):
        n = r.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = r[i] / np.sqrt(1.0 + rx[i] * rx[i])
        return out

    @njit(cache=True)
    def _nb_area_integrand(r, rx):
        n = r.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = r[i] * np.sqrt(1.0 + rx[i] * rx[i])
        return out

    @njit(cache=True)
    def _nb_quasilinear_triple(r, rx, rxx):
        n = r.shape[0]
        b4 = np.empty(n)
        b3 = np.empty(n)
        low = np.empty(n)
        for i in range(n):
            w = 1.0 + rx[i] * rx[i]
            w2 = w * w
            w3 = w2 * w
            rx2 = rx[i] * rx[i]
            b4[i] = 1.0 / w2
            b3[i] = 2.0 * rx[i] * (w - 5.0 * r[i] * rxx[i]) / (r[i] * w3)
            low[i] = (
                (rx2 - 1.0) / (r[i] * r[i] * w2) * rxx[i]
                + (6.0 * rx2 - 1.0) / (r[i] * w3) * rxx[i] * rxx[i]
                + (3.0 - 15.0 * rx2) / (w3 * w) * rxx[i] * rxx[i] * rxx[i]
                + rx2 / (r[i] * r[i] * r[i] * w)
            )
        return b4, b3, low

    _NUMBA = {
        "curvature_triple": _nb_curvature_triple,
        "mean_curvature": _nb_mean_curvature,
        "transport_weight": _nb_transport_weight,
        "area_integrand": _nb_area_integrand,
        "quasilinear_triple": _nb_quasilinear_triple,
    }
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA = None

# ---------------------------------------------------------------------------
# backend selection

_BACKENDS = {"numpy": _NUMPY}
if _NUMBA is not None:
    _BACKENDS["numba"] = _NUMBA

_active_name = "numpy"
_active = _NUMPY


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _active_name


def set_backend(name: str) -> None:
    global _active_name, _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _active_name = name
    _active = _BACKENDS[name]


def _default_backend() -> str:
    if os.environ.get("ASDFLOW_NUMBA", "1") != "0" and "numba" in _BACKENDS:
        return "numba"
    return "numpy"


set_backend(_default_backend())


# thin dispatchers so callers never hold a stale backend reference
def curvature_triple(r, rx, rxx):
    return _active["curvature_triple"](r, rx, rxx)


def mean_curvature(r, rx, rxx):
    return _active["mean_curvature"](r, rx, rxx)


def transport_weight(r, rx):
    return _active["transport_weight"](r, rx)


def area_integrand(r, rx):
    return _active["area_integrand"](r, rx)


def quasilinear_triple(r, rx, rxx):
    return _active["quasilinear_triple"](r, rx, rxx)
