"""Per-stage solver kernels and backend selection.

One forward-Euler stage splits into two phases:

* ``stage_fluxes`` - reconstruction, correction, speeds, fluxes, source.
  Independent of dt, so the CFL step can be chosen from its speeds.
* ``apply_update`` - draining times, effective interface steps, and the
  height/momentum updates for a given dt.

Two implementations exist: a numpy one (composed from the reconstruction
and numerics modules) and a compiled extension (``swe1d._corefv``) with
identical arithmetic.  The compiled one is preferred when importable; set
SWE1D_BACKEND=numpy|compiled to force a choice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import numerics, reconstruction
from .boundary import NGHOST, pad_draining

try:  # pragma: no cover - exercised indirectly via backend tests
    from . import _corefv
except ImportError:  # pragma: no cover
    _corefv = None


@dataclass
class StageFluxes:
    """dt-independent output of one stage over n cells / n+1 interfaces."""

    h1: np.ndarray
    h2a: np.ndarray
    h2g: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    s2: np.ndarray
    dx_star: np.ndarray
    amax: float
    counters: dict


@dataclass
class UpdateResult:
    h: np.ndarray
    hu: np.ndarray
    dt_drain: np.ndarray
    dt_eff: np.ndarray
    n_clamped: int
    min_h_raw: float


def draining_time(h_bar, h1_left, h1_right, dx):
    """Time for a cell's volume to leave through its outflow fluxes.

    +inf when there is no outflow; exactly 0 for an empty cell with
    outflow, which cuts the outgoing flux completely.
    """
    h_bar = np.asarray(h_bar, dtype=float)
    out_r = np.maximum(0.0, np.asarray(h1_right, dtype=float))
    out_l = np.maximum(0.0, -np.asarray(h1_left, dtype=float))
    denom = out_r + out_l
    live = denom > 0.0
    res = np.where(live, dx * h_bar / np.where(live, denom, 1.0), np.inf)
    if res.ndim == 0:
        return float(res)
    return res


def effective_dt(dt, dt_drain_padded, h1):
    """Per-interface step: min(dt, draining time of the upwind cell).

    ``dt_drain_padded`` has one ghost entry per side (see pad_draining).
    A zero flux needs no cut, so dt is kept there.
    """
    h1 = np.asarray(h1, dtype=float)
    pad = np.asarray(dt_drain_padded, dtype=float)
    upwind = np.where(h1 > 0.0, pad[:-1], np.where(h1 < 0.0, pad[1:], np.inf))
    return np.minimum(dt, upwind)


# --- numpy backend -------------------------------------------------------


def _stage_numpy(h_ext, hu_ext, b_ifc_ext, b_cell_ext, dx, g, theta, eps, variant, n):
    lo = NGHOST
    ext = reconstruction._base_ext(h_ext, hu_ext, b_ifc_ext, b_cell_ext, dx, theta, eps)
    wl, wr, hl, hr, dxs, counters = reconstruction.correct_edges(ext, variant, (lo, lo + n))

    h_m = hr[lo - 1 : lo + n]
    u_m = ext.ur[lo - 1 : lo + n]
    h_p = hl[lo : lo + n + 1]
    u_p = ext.ul[lo : lo + n + 1]

    a_plus, a_minus = numerics.local_speeds(h_m, u_m, h_p, u_p, g)
    h1, h2a, h2g = numerics.cu_flux(h_m, u_m, h_p, u_p, a_plus, a_minus, g)
    s2 = numerics.source_quadrature(
        h_ext[lo : lo + n], b_ifc_ext[lo : lo + n + 1], dx, g
    )
    amax = float(np.maximum(a_plus, -a_minus).max(initial=0.0))
    return StageFluxes(h1, h2a, h2g, a_plus, a_minus, s2, dxs[lo : lo + n], amax, counters)


def _update_numpy(h, hu, fx: StageFluxes, dt, dx, bc_left, bc_right, limiter=True):
    if limiter:
        dt_drain = draining_time(h, fx.h1[:-1], fx.h1[1:], dx)
        dt_eff = effective_dt(dt, pad_draining(dt_drain, bc_left, bc_right), fx.h1)
    else:
        dt_drain = np.full(h.shape[0], np.inf)
        dt_eff = np.full(fx.h1.shape[0], float(dt))

    h_new = h - (dt_eff[1:] * fx.h1[1:] - dt_eff[:-1] * fx.h1[:-1]) / dx
    min_h_raw = float(h_new.min())
    neg = h_new < 0.0
    n_clamped = int(np.count_nonzero(neg))
    if n_clamped:
        h_new[neg] = 0.0
    hu_new = (
        hu
        - (dt_eff[1:] * fx.h2a[1:] - dt_eff[:-1] * fx.h2a[:-1]) / dx
        - dt * (fx.h2g[1:] - fx.h2g[:-1]) / dx
        + dt * fx.s2
    )
    return UpdateResult(h_new, hu_new, dt_drain, dt_eff, n_clamped, min_h_raw)


# --- compiled backend ----------------------------------------------------


def _stage_compiled(h_ext, hu_ext, b_ifc_ext, b_cell_ext, dx, g, theta, eps, variant, n):
    m = h_ext.shape[0]
    work = np.empty((10, m))
    h1 = np.empty(n + 1)
    h2a = np.empty(n + 1)
    h2g = np.empty(n + 1)
    a_plus = np.empty(n + 1)
    a_minus = np.empty(n + 1)
    s2 = np.empty(n)
    dxs = np.empty(n)
    counts = np.zeros(len(reconstruction.COUNTER_NAMES), dtype=np.int64)
    amax = _corefv.stage(
        h_ext, hu_ext, b_ifc_ext, b_cell_ext, dx, g, theta, eps, int(variant), n,
        work, h1, h2a, h2g, a_plus, a_minus, s2, dxs, counts,
    )
    counters = dict(zip(reconstruction.COUNTER_NAMES, (int(c) for c in counts)))
    return StageFluxes(h1, h2a, h2g, a_plus, a_minus, s2, dxs, float(amax), counters)


def _update_compiled(h, hu, fx: StageFluxes, dt, dx, bc_left, bc_right, limiter=True):
    n = h.shape[0]
    h_new = np.empty(n)
    hu_new = np.empty(n)
    dt_drain = np.empty(n)
    dt_eff = np.empty(n + 1)
    wrap = 1 if bc_left.kind == "periodic" else 0
    out = np.empty(2)
    _corefv.update(
        h, hu, fx.h1, fx.h2a, fx.h2g, fx.s2, dt, dx, wrap, 1 if limiter else 0,
        h_new, hu_new, dt_drain, dt_eff, out,
    )
    return UpdateResult(h_new, hu_new, dt_drain, dt_eff, int(out[0]), float(out[1]))


class Backend:
    def __init__(self, name, stage, update):
        self.name = name
        self.stage = stage
        self.update = update


_NUMPY = Backend("numpy", _stage_numpy, _update_numpy)
_COMPILED = Backend("compiled", _stage_compiled, _update_compiled) if _corefv else None


def available_backends():
    return ("numpy", "compiled") if _COMPILED else ("numpy",)


def get_backend(name="auto") -> Backend:
    """Pick a kernel backend: 'auto' prefers the compiled extension."""
    if name == "auto":
        name = os.environ.get("SWE1D_BACKEND", "auto")
    if name == "auto":
        return _COMPILED or _NUMPY
    if name == "numpy":
        return _NUMPY
    if name == "compiled":
        if _COMPILED is None:
            raise RuntimeError("compiled backend requested but swe1d._corefv is not built")
        return _COMPILED
    raise ValueError(f"unknown backend {name!r}")
