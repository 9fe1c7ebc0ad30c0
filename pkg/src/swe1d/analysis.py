"""Error norms, convergence orders, front tracking, steady-state deviation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import cell_depth
from .reconstruction import free_surface_level


@dataclass
class ErrorReport:
    l1_h: float
    l1_hu: float
    linf_h: float
    linf_hu: float


def project_to_coarse(fine_values, ratio):
    """Conservative projection: average each block of ``ratio`` fine cells."""
    fine_values = np.asarray(fine_values, dtype=float)
    if fine_values.shape[0] % ratio:
        raise ValueError("fine cell count not divisible by the ratio")
    return fine_values.reshape(-1, ratio).mean(axis=1)


def error_norms(coarse_state, coarse_bathy, fine_state, fine_bathy) -> ErrorReport:
    """L1/Linf errors of (h, hu) against a finer-grid reference.

    The reference is projected onto the coarse cells by conservative
    averaging, which is exact for cell-average data.
    """
    gc = coarse_bathy.grid
    gf = fine_bathy.grid
    if (gc.x_left, gc.x_right) != (gf.x_left, gf.x_right):
        raise ValueError("grids must cover the same domain")
    if gf.n % gc.n:
        raise ValueError("fine cell count must be a multiple of the coarse count")
    ratio = gf.n // gc.n

    dh = cell_depth(coarse_state, coarse_bathy) - project_to_coarse(
        cell_depth(fine_state, fine_bathy), ratio
    )
    dhu = coarse_state.hu_bar - project_to_coarse(fine_state.hu_bar, ratio)
    dx = gc.dx
    return ErrorReport(
        l1_h=float(np.abs(dh).sum() * dx),
        l1_hu=float(np.abs(dhu).sum() * dx),
        linf_h=float(np.abs(dh).max()),
        linf_hu=float(np.abs(dhu).max()),
    )


def eoc(err_coarse, err_fine):
    """Experimental order of convergence between grids differing by 2x.

    A vanishing error means the pair is exact to machine precision; +inf
    is returned to flag it.
    """
    if err_coarse <= 0.0 or err_fine <= 0.0:
        return math.inf
    return math.log2(err_coarse / err_fine)


def convergence_rows(ns, errors_h, errors_hu):
    """Table rows (n, err_h, eoc_h, err_hu, eoc_hu); EOC only across 2x pairs."""
    rows = []
    for i, n in enumerate(ns):
        if i and ns[i] == 2 * ns[i - 1]:
            e_h = eoc(errors_h[i - 1], errors_h[i])
            e_hu = eoc(errors_hu[i - 1], errors_hu[i])
        else:
            e_h = e_hu = None
        rows.append((n, errors_h[i], e_h, errors_hu[i], e_hu))
    return rows


def format_convergence_table(rows):
    lines = [f"{'n':>7} {'h error':>12} {'EOC':>6} {'hu error':>12} {'EOC':>6}"]
    for n, eh, oh, ehu, ohu in rows:
        so = f"{oh:6.2f}" if oh is not None and math.isfinite(oh) else "     -"
        sohu = f"{ohu:6.2f}" if ohu is not None and math.isfinite(ohu) else "     -"
        lines.append(f"{n:>7d} {eh:12.3e} {so} {ehu:12.3e} {sohu}")
    return "\n".join(lines)


def front_position(state, bathy, eps=1e-9):
    """Centre of the rightmost cell with depth above eps; None if fully dry."""
    h = cell_depth(state, bathy)
    wet = np.nonzero(h > eps)[0]
    if wet.size == 0:
        return None
    return float(bathy.grid.centers[wet[-1]])


def equilibrium_deviation(state, bathy, target_w, eps=1e-9):
    """Max deviations (surface level, |hu|) from a flat lake at ``target_w``.

    The per-cell surface level is the still-water level of the cell's
    volume (so a partially flooded front cell at equilibrium contributes
    exactly zero), measured against max(target_w, local bottom) so that
    stranded puddles count only their own depth.
    """
    h = cell_depth(state, bathy)
    b_l = bathy.b_ifc[:-1]
    b_r = bathy.b_ifc[1:]
    w_level, _ = free_surface_level(h, b_l, b_r, bathy.grid.dx)
    flooded = h >= 0.5 * np.abs(b_l - b_r)
    base = np.where(flooded, bathy.b_cell, np.minimum(b_l, b_r))
    wet = h > eps
    if wet.any():
        dev_w = float(np.abs(w_level - np.maximum(target_w, base))[wet].max())
    else:
        dev_w = 0.0
    dev_hu = float(np.abs(state.hu_bar).max(initial=0.0))
    return dev_w, dev_hu
