"""Uniform grid, continuous piecewise-linear bottom, and state containers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform 1D finite-volume grid with ``n`` cells on [x_left, x_right]."""

    n: int
    x_left: float
    x_right: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 cells, got n={self.n}")
        if not np.isfinite([self.x_left, self.x_right]).all():
            raise ValueError("domain bounds must be finite")
        if self.x_right <= self.x_left:
            raise ValueError("x_right must exceed x_left")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n

    @property
    def interfaces(self) -> np.ndarray:
        """The n+1 interface positions."""
        return self.x_left + self.dx * np.arange(self.n + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + self.dx * (np.arange(self.n) + 0.5)


class Bathymetry:
    """Continuous piecewise-linear bottom, stored as interface values only.

    Cell values are the midpoints (b_cell[j] = (b_ifc[j] + b_ifc[j+1]) / 2,
    which equals the cell average of the interpolant) and slopes follow from
    the interface differences.  Both are derived once from ``b_ifc`` so there
    is a single source of truth.
    """

    def __init__(self, grid: Grid, b_ifc):
        b_ifc = np.ascontiguousarray(b_ifc, dtype=float)
        if b_ifc.shape != (grid.n + 1,):
            raise ValueError(f"expected {grid.n + 1} interface values, got {b_ifc.shape}")
        if not np.isfinite(b_ifc).all():
            raise ValueError("bottom samples must be finite")
        self.grid = grid
        self.b_ifc = b_ifc
        self.b_cell = 0.5 * (b_ifc[:-1] + b_ifc[1:])
        self.slope = (b_ifc[1:] - b_ifc[:-1]) / grid.dx
        for a in (self.b_ifc, self.b_cell, self.slope):
            a.setflags(write=False)


def build_bathymetry(grid: Grid, bottom=None, samples=None) -> Bathymetry:
    """Discretize the bottom as interface values.

    Either ``bottom`` (a vectorized callable evaluated at the interfaces) or
    ``samples`` is given.  ``samples`` is an array of n+1 interface heights,
    or of shape (n+1, 2) holding one-sided limits at each interface, which
    are averaged (the continuous interpolant takes the mean value at jumps).
    """
    if (bottom is None) == (samples is None):
        raise ValueError("give exactly one of bottom= or samples=")
    if bottom is not None:
        vals = np.asarray(bottom(grid.interfaces), dtype=float)
        if vals.shape != (grid.n + 1,):
            raise ValueError("bottom function must return one value per interface")
    else:
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 2 and samples.shape == (grid.n + 1, 2):
            vals = 0.5 * (samples[:, 0] + samples[:, 1])
        elif samples.shape == (grid.n + 1,):
            vals = samples
        else:
            raise ValueError(f"samples must have shape ({grid.n + 1},) or ({grid.n + 1}, 2)")
    return Bathymetry(grid, vals)


@dataclass
class CellState:
    """Cell averages of the conserved variables (free surface w, discharge hu)."""

    w_bar: np.ndarray
    hu_bar: np.ndarray

    def __post_init__(self):
        self.w_bar = np.ascontiguousarray(self.w_bar, dtype=float)
        self.hu_bar = np.ascontiguousarray(self.hu_bar, dtype=float)
        if self.w_bar.shape != self.hu_bar.shape or self.w_bar.ndim != 1:
            raise ValueError("w_bar and hu_bar must be 1D arrays of equal length")

    @property
    def n(self) -> int:
        return self.w_bar.shape[0]

    def copy(self) -> "CellState":
        return CellState(self.w_bar.copy(), self.hu_bar.copy())


def cell_depth(state: CellState, bathy: Bathymetry, j=None):
    """Water depth h = w - B, for one cell or (j=None) all cells."""
    if j is None:
        return state.w_bar - bathy.b_cell
    return state.w_bar[j] - bathy.b_cell[j]


@dataclass(frozen=True)
class SchemeParams:
    """Scheme parameters: gravity, minmod theta, dry tolerance, Courant number."""

    g: float
    theta: float = 1.3
    eps: float = 1e-9
    cfl: float = 0.5

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if not 1.0 <= self.theta <= 2.0:
            raise ValueError("theta must lie in [1, 2]")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not 0.0 < self.cfl <= 0.5:
            raise ValueError("cfl must lie in (0, 1/2]")
