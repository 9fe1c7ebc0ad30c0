"""Piecewise-linear reconstruction with a well-balanced wet/dry correction.

The free surface w and the velocity u are reconstructed with the
generalized minmod limiter.  Cells whose average surface lies between the
two interface bottom heights (or whose limited edges dip below the bottom)
are then corrected so that every one-sided interface depth is nonnegative
while cell mass is conserved, and so that combined lake-at-rest / dry-lake
states reconstruct to a flat surface exactly.  Partially flooded cells
carry a wet length dx* < dx.

Two correction variants are provided:

* ``bckn`` - the full case tree (conservative, positivity preserving and
  well-balanced also at wet/dry fronts).
* ``kp``   - the classical fix only: where a limited edge dips below the
  bottom, raise it to the bottom and lower the opposite edge by the same
  amount.  Conservative and positivity preserving, but not well-balanced
  at fronts; kept as a comparison baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import NGHOST, check_pair, extend_bathymetry, extend_state
from .grid import cell_depth

VARIANT_BCKN = 0
VARIANT_KP = 1

_VARIANTS = {"bckn": VARIANT_BCKN, "kp": VARIANT_KP}

# Interface depths may round a few ulps below zero when rebuilt from w - B;
# anything beyond this (relative) guard is a logic error, not rounding.
_NEG_GUARD = 1e-9

COUNTER_NAMES = (
    "case1b",
    "case2a1",
    "case2a2",
    "case2b",
    "case3a1",
    "case3a2",
    "case3b",
    "kp_fix",
)


def variant_code(name: str) -> int:
    try:
        return _VARIANTS[name]
    except KeyError:
        raise ValueError(f"unknown scheme variant {name!r}; expected 'bckn' or 'kp'") from None


def minmod(values):
    """min if all arguments are positive, max if all negative, else 0."""
    values = [np.asarray(v, dtype=float) for v in values]
    if not values:
        raise ValueError("minmod needs at least one argument")
    lo = values[0]
    hi = values[0]
    for v in values[1:]:
        lo = np.minimum(lo, v)
        hi = np.maximum(hi, v)
    out = np.where(hi < 0.0, hi, 0.0)
    out = np.where(lo > 0.0, lo, out)
    if out.ndim == 0:
        return float(out)
    return out


def slope(q_left, q_center, q_right, theta, dx):
    """Generalized minmod slope from three neighbouring cell averages."""
    q_left = np.asarray(q_left, dtype=float)
    q_center = np.asarray(q_center, dtype=float)
    q_right = np.asarray(q_right, dtype=float)
    return minmod(
        [
            theta * (q_center - q_left) / dx,
            (q_right - q_left) / (2.0 * dx),
            theta * (q_right - q_center) / dx,
        ]
    )


def mean_velocity(h_bar, hu_bar, eps):
    """Desingularized velocity: hu/h when h >= eps, exactly 0 otherwise."""
    h_bar = np.asarray(h_bar, dtype=float)
    hu_bar = np.asarray(hu_bar, dtype=float)
    wet = h_bar >= eps
    out = np.where(wet, hu_bar / np.where(wet, h_bar, 1.0), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def free_surface_level(h_bar, b_left, b_right, dx):
    """Surface level of still water holding volume dx*h_bar over a linear bottom.

    Returns (w, dxw): for a fully flooded cell (h_bar >= |b_left-b_right|/2)
    the trapezoid gives w = h_bar + (b_left+b_right)/2 and dxw = dx; otherwise
    the water forms a triangle against the lower interface, w sits sqrt(2*h*|dB|)
    above it, and dxw < dx is the wet length.  A flat bottom always takes the
    trapezoid branch.
    """
    h_bar = np.asarray(h_bar, dtype=float)
    b_left = np.asarray(b_left, dtype=float)
    b_right = np.asarray(b_right, dtype=float)
    db = b_left - b_right
    flooded = h_bar >= 0.5 * np.abs(db)
    safe_db = np.where(flooded, 1.0, np.abs(db))
    root = np.sqrt(np.where(flooded, 0.0, 2.0 * h_bar * safe_db))
    w = np.where(
        flooded,
        h_bar + 0.5 * (b_left + b_right),
        np.where(db > 0.0, b_right, b_left) + root,
    )
    dxw = np.where(flooded, dx, dx * np.sqrt(np.where(flooded, 1.0, 2.0 * h_bar / safe_db)))
    if w.ndim == 0:
        return float(w), float(dxw)
    return w, dxw


@dataclass
class InterfaceRecon:
    """One-sided values at the n+1 interfaces (minus = left, plus = right)."""

    w_minus: np.ndarray
    w_plus: np.ndarray
    h_minus: np.ndarray
    h_plus: np.ndarray
    u_minus: np.ndarray
    u_plus: np.ndarray

    @property
    def hu_minus(self):
        return self.h_minus * self.u_minus

    @property
    def hu_plus(self):
        return self.h_plus * self.u_plus


@dataclass
class WetLengths:
    """Per-cell wet lengths dx* (= dx for every fully flooded cell)."""

    dx_star: np.ndarray


class _ExtRecon:
    """Edge values on the ghost-extended cell range (internal plumbing)."""

    __slots__ = ("w", "h", "u", "wl", "wr", "ul", "ur", "b_ifc", "b_cell", "dx")

    def __init__(self, w, h, u, wl, wr, ul, ur, b_ifc, b_cell, dx):
        self.w, self.h, self.u = w, h, u
        self.wl, self.wr = wl, wr
        self.ul, self.ur = ul, ur
        self.b_ifc, self.b_cell = b_ifc, b_cell
        self.dx = dx


def limited_edges(q_ext, dx, theta):
    """Left/right edge values of the limited linear pieces, per extended cell.

    The outermost cells get zero slope; their edges are never used as flux
    input, only (for the outermost ghost) as neighbour data in the wet/dry
    case test.
    """
    s = np.zeros_like(q_ext)
    s[1:-1] = slope(q_ext[:-2], q_ext[1:-1], q_ext[2:], theta, dx)
    half = 0.5 * dx * s
    return q_ext - half, q_ext + half


def _base_ext(h_ext, hu_ext, b_ifc_ext, b_cell_ext, dx, theta, eps):
    u_ext = mean_velocity(h_ext, hu_ext, eps)
    w_ext = h_ext + b_cell_ext
    wl, wr = limited_edges(w_ext, dx, theta)
    ul, ur = limited_edges(u_ext, dx, theta)
    return _ExtRecon(w_ext, h_ext, u_ext, wl, wr, ul, ur, b_ifc_ext, b_cell_ext, dx)


def correct_edges(ext: _ExtRecon, variant: int, interior):
    """Wet/dry correction of the w-edges over cells [lo, hi).

    ``interior`` is the (lo, hi) extended-index range of the physical cells;
    the correction itself also covers one ghost cell on each side (their
    edge values feed the boundary fluxes).  Returns corrected per-cell edge
    arrays (wl, wr, hl, hr), wet lengths dx*, and case counters restricted
    to the physical cells.
    """
    lo, hi = interior
    m = ext.w.shape[0]
    dx = ext.dx
    w_bar = ext.w
    h_bar = ext.h
    bl = ext.b_ifc[:-1]
    br = ext.b_ifc[1:]

    wl = ext.wl.copy()
    wr = ext.wr.copy()
    dxs = np.full(m, dx)
    within = np.zeros(m, dtype=bool)
    within[lo - 1 : hi + 1] = True

    if variant == VARIANT_KP:
        low_r = within & (ext.wr < br)
        low_l = within & ~low_r & (ext.wl < bl)
        wr[low_r] = br[low_r]
        wl[low_r] = (2.0 * w_bar - br)[low_r]
        wl[low_l] = bl[low_l]
        wr[low_l] = (2.0 * w_bar - bl)[low_l]
        hl = np.maximum(wl - bl, 0.0)
        hr = np.maximum(wr - br, 0.0)
        counters = dict.fromkeys(COUNTER_NAMES, 0)
        counters["kp_fix"] = int(np.count_nonzero((low_r | low_l)[lo:hi]))
        return wl, wr, hl, hr, dxs, counters

    # --- bckn case tree ---
    case1 = within & (w_bar >= bl) & (w_bar >= br)
    low_r = case1 & (ext.wr < br)
    low_l = case1 & (ext.wl < bl)
    if np.any(low_r & low_l):
        raise AssertionError("limited edges below the bottom on both sides of a cell with h>=0")
    wr[low_r] = br[low_r]
    wl[low_r] = (2.0 * w_bar - br)[low_r]
    wl[low_l] = bl[low_l]
    wr[low_l] = (2.0 * w_bar - bl)[low_l]

    # Neighbour edge data (uncorrected), shifted onto each cell.
    wl_next = np.empty(m)
    wr_next = np.empty(m)
    wl_next[:-1] = ext.wl[1:]
    wr_next[:-1] = ext.wr[1:]
    wl_next[-1] = wr_next[-1] = 0.0
    wl_prev = np.empty(m)
    wr_prev = np.empty(m)
    wl_prev[1:] = ext.wl[:-1]
    wr_prev[1:] = ext.wr[:-1]
    wl_prev[0] = wr_prev[0] = 0.0
    br_next = np.empty(m)
    br_next[:-1] = br[1:]
    br_next[-1] = 0.0
    bl_prev = np.empty(m)
    bl_prev[1:] = bl[:-1]
    bl_prev[0] = 0.0

    hl = wl - bl
    hr = wr - br

    # Case 2: descending bottom, average surface between the interface bottoms.
    case2 = within & (bl > w_bar) & (w_bar > br)
    flooded_next = (wl_next > br) & (wr_next > br_next)
    case2a = case2 & flooded_next
    wr = np.where(case2a, wl_next, wr)
    hr = np.where(case2a, wr - br, hr)
    rest = 2.0 * h_bar - hr
    c2a1 = case2a & (rest >= 0.0)
    c2a2 = case2a & (rest < 0.0)
    hl = np.where(c2a1, rest, hl)
    wl = np.where(c2a1, bl + rest, wl)
    hl = np.where(c2a2, 0.0, hl)
    wl = np.where(c2a2, bl, wl)
    safe_hr = np.where(c2a2, hr, 1.0)
    dxs = np.where(c2a2, dx * np.minimum(2.0 * h_bar / safe_hr, 1.0), dxs)

    case2b = case2 & ~flooded_next
    db2 = np.where(case2b, bl - br, 1.0)
    root2 = np.sqrt(np.where(case2b, 2.0 * h_bar * db2, 0.0))
    hr = np.where(case2b, root2, hr)
    wr = np.where(case2b, br + root2, wr)
    hl = np.where(case2b, 0.0, hl)
    wl = np.where(case2b, bl, wl)
    dxs = np.where(case2b, dx * np.sqrt(2.0 * h_bar / db2), dxs)

    # Case 3: ascending bottom, mirror image of case 2.
    case3 = within & (bl < w_bar) & (w_bar < br)
    flooded_prev = (wr_prev > bl) & (wl_prev > bl_prev)
    case3a = case3 & flooded_prev
    wl = np.where(case3a, wr_prev, wl)
    hl = np.where(case3a, wl - bl, hl)
    rest3 = 2.0 * h_bar - hl
    c3a1 = case3a & (rest3 >= 0.0)
    c3a2 = case3a & (rest3 < 0.0)
    hr = np.where(c3a1, rest3, hr)
    wr = np.where(c3a1, br + rest3, wr)
    hr = np.where(c3a2, 0.0, hr)
    wr = np.where(c3a2, br, wr)
    safe_hl = np.where(c3a2, hl, 1.0)
    dxs = np.where(c3a2, dx * np.minimum(2.0 * h_bar / safe_hl, 1.0), dxs)

    case3b = case3 & ~flooded_prev
    db3 = np.where(case3b, br - bl, 1.0)
    root3 = np.sqrt(np.where(case3b, 2.0 * h_bar * db3, 0.0))
    hl = np.where(case3b, root3, hl)
    wl = np.where(case3b, bl + root3, wl)
    hr = np.where(case3b, 0.0, hr)
    wr = np.where(case3b, br, wr)
    dxs = np.where(case3b, dx * np.sqrt(2.0 * h_bar / db3), dxs)

    scale = max(1.0, float(np.max(h_bar[within], initial=0.0)))
    if min(hl[within].min(initial=0.0), hr[within].min(initial=0.0)) < -_NEG_GUARD * scale:
        raise AssertionError("corrected interface depth went negative beyond rounding")
    np.maximum(hl, 0.0, out=hl)
    np.maximum(hr, 0.0, out=hr)

    # 2B/3B on a dry cell is just the trivial limit (all edges dry); only
    # wet cells taking those branches signal under-resolution.
    wet = h_bar > 0.0
    counters = {
        "case1b": int(np.count_nonzero((low_r | low_l)[lo:hi])),
        "case2a1": int(np.count_nonzero(c2a1[lo:hi])),
        "case2a2": int(np.count_nonzero(c2a2[lo:hi])),
        "case2b": int(np.count_nonzero((case2b & wet)[lo:hi])),
        "case3a1": int(np.count_nonzero(c3a1[lo:hi])),
        "case3a2": int(np.count_nonzero(c3a2[lo:hi])),
        "case3b": int(np.count_nonzero((case3b & wet)[lo:hi])),
        "kp_fix": 0,
    }
    return wl, wr, hl, hr, dxs, counters


def _slice_interfaces(n, wl, wr, hl, hr, ul, ur, lo):
    """Gather the n+1 interface one-sided values from per-cell edges."""
    return InterfaceRecon(
        w_minus=wr[lo - 1 : lo + n].copy(),
        w_plus=wl[lo : lo + n + 1].copy(),
        h_minus=hr[lo - 1 : lo + n].copy(),
        h_plus=hl[lo : lo + n + 1].copy(),
        u_minus=ur[lo - 1 : lo + n].copy(),
        u_plus=ul[lo : lo + n + 1].copy(),
    )


def base_reconstruct(state, bathy, params, bc_left, bc_right):
    """Uncorrected limited reconstruction at all interior interfaces.

    The returned interface depths may be negative near fronts; the wet/dry
    correction fixes them.  The extended edge data is kept on the result
    (``_ext``) for the correction pass.
    """
    check_pair(bc_left, bc_right)
    n = state.n
    h = cell_depth(state, bathy)
    b_ifc_ext, b_cell_ext = extend_bathymetry(bathy.b_ifc, bc_left, bc_right)
    h_ext, hu_ext = extend_state(h, state.hu_bar, bc_left, bc_right)
    ext = _base_ext(h_ext, hu_ext, b_ifc_ext, b_cell_ext, bathy.grid.dx, params.theta, params.eps)
    lo = NGHOST
    w_minus = ext.wr[lo - 1 : lo + n].copy()
    w_plus = ext.wl[lo : lo + n + 1].copy()
    recon = InterfaceRecon(
        w_minus=w_minus,
        w_plus=w_plus,
        h_minus=w_minus - bathy.b_ifc,
        h_plus=w_plus - bathy.b_ifc,
        u_minus=ext.ur[lo - 1 : lo + n].copy(),
        u_plus=ext.ul[lo : lo + n + 1].copy(),
    )
    recon._ext = ext
    return recon


def wetdry_correct(recon, state, bathy, params, variant="bckn"):
    """Apply the wet/dry correction to a base reconstruction.

    Returns (corrected InterfaceRecon, WetLengths); the corrected result
    additionally carries the case counters as ``.counters``.
    """
    ext = getattr(recon, "_ext", None)
    if ext is None:
        raise ValueError("recon must come from base_reconstruct")
    n = state.n
    lo = NGHOST
    wl, wr, hl, hr, dxs, counters = correct_edges(ext, variant_code(variant), (lo, lo + n))
    out = _slice_interfaces(n, wl, wr, hl, hr, ext.ul, ext.ur, lo)
    out.counters = counters
    out._ext = ext
    return out, WetLengths(dx_star=dxs[lo : lo + n].copy())
