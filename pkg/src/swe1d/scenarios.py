"""Benchmark scenarios and conservative initialization from interface states.

Initial data is prescribed at cell interfaces.  Momentum averages always
use the trapezoidal rule.  Height averages use the trapezoidal rule for
wet cells and for the mixed configurations that cannot be still water;
for an adverse-slope cell (dry interface on the high side) the average is
the still-water triangle volume h_wet^2 / (2|dB|), so a flat lake surface
ending on a slope is reproduced exactly by the wet/dry reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .boundary import BoundaryCondition
from .friction import FrictionParams
from .grid import Bathymetry, CellState, Grid, SchemeParams, build_bathymetry

WET = 0
ADVERSE = 1
DOWNWARD = 2
DRY = 3

G_STANDARD = 9.812


def classify_cells(h_left, h_right, b_left, b_right):
    """Per-cell class: WET, ADVERSE (still water possible), DOWNWARD, DRY.

    Mixed cells with a flat bottom cannot be still water and count as
    DOWNWARD (trapezoidal).  The mirrored configurations (dry right
    interface) are classified symmetrically.
    """
    h_left = np.asarray(h_left, dtype=float)
    h_right = np.asarray(h_right, dtype=float)
    b_left = np.asarray(b_left, dtype=float)
    b_right = np.asarray(b_right, dtype=float)
    out = np.full(h_left.shape, DOWNWARD, dtype=np.int64)
    out[(h_left > 0.0) & (h_right > 0.0)] = WET
    out[(h_left <= 0.0) & (h_right <= 0.0)] = DRY
    adverse = ((h_left <= 0.0) & (h_right > 0.0) & (b_left > b_right)) | (
        (h_right <= 0.0) & (h_left > 0.0) & (b_right > b_left)
    )
    out[adverse] = ADVERSE
    return out


def init_cell_averages(h_ifc, hu_ifc, bathy: Bathymetry) -> CellState:
    """Cell averages from interface states.

    ``h_ifc``/``hu_ifc`` are arrays of n+1 shared interface values, or of
    shape (n, 2) with per-cell one-sided values (for data with a jump at
    an interface).
    """
    n = bathy.grid.n
    h_ifc = np.asarray(h_ifc, dtype=float)
    hu_ifc = np.asarray(hu_ifc, dtype=float)
    if h_ifc.shape == (n + 1,):
        h_l, h_r = h_ifc[:-1], h_ifc[1:]
    elif h_ifc.shape == (n, 2):
        h_l, h_r = h_ifc[:, 0], h_ifc[:, 1]
    else:
        raise ValueError(f"h_ifc must have shape ({n + 1},) or ({n}, 2)")
    if hu_ifc.shape == (n + 1,):
        hu_l, hu_r = hu_ifc[:-1], hu_ifc[1:]
    elif hu_ifc.shape == (n, 2):
        hu_l, hu_r = hu_ifc[:, 0], hu_ifc[:, 1]
    else:
        raise ValueError(f"hu_ifc must have shape ({n + 1},) or ({n}, 2)")
    if h_l.min(initial=0.0) < 0.0 or h_r.min(initial=0.0) < 0.0:
        raise ValueError("interface depths must be nonnegative")
    if not (np.isfinite(h_l).all() and np.isfinite(hu_l).all()):
        raise ValueError("interface states must be finite")

    b_l = bathy.b_ifc[:-1]
    b_r = bathy.b_ifc[1:]
    cls = classify_cells(h_l, h_r, b_l, b_r)

    h_bar = 0.5 * (h_l + h_r)
    adv = cls == ADVERSE
    if adv.any():
        db = np.abs(b_l - b_r)
        if np.any(adv & (db == 0.0)):
            raise ValueError("adverse-slope cell over a flat bottom is contradictory")
        h_wet = np.where(h_l > 0.0, h_l, h_r)
        h_bar = np.where(adv, h_wet * h_wet / np.where(adv, 2.0 * db, 1.0), h_bar)
    hu_bar = 0.5 * (hu_l + hu_r)
    return CellState(bathy.b_cell + h_bar, hu_bar)


@dataclass(frozen=True)
class Scenario:
    """A runnable experiment: bottom, initial interface data, BCs, timing."""

    name: str
    x_left: float
    x_right: float
    g: float
    t_end: float
    default_n: int
    bottom: Callable
    initial: Callable  # (x_ifc, b_ifc) -> (h_ifc, hu_ifc), shared or per-cell
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    gauges: tuple = ()  # (name, x) pairs
    friction: Optional[FrictionParams] = None
    equilibrium_w: Optional[float] = None
    front_exact: Optional[Callable] = None  # t -> (x_front, u_front)

    def grid(self, n=None) -> Grid:
        return Grid(n or self.default_n, self.x_left, self.x_right)

    def build(self, n=None):
        """Return (grid, bathymetry, initial state) at resolution n."""
        grid = self.grid(n)
        bathy = build_bathymetry(grid, bottom=self.bottom)
        h_ifc, hu_ifc = self.initial(grid.interfaces, bathy.b_ifc)
        state = init_cell_averages(h_ifc, hu_ifc, bathy)
        return grid, bathy, state

    def params(self, theta=1.3, eps=1e-9, cfl=0.5) -> SchemeParams:
        return SchemeParams(g=self.g, theta=theta, eps=eps, cfl=cfl)

    def with_friction(self, friction) -> "Scenario":
        return replace(self, friction=friction)


# --- the individual experiments ---------------------------------------


def make_accuracy_test() -> Scenario:
    """Smooth periodic flow over a sine-squared bump (convergence study)."""

    def bottom(x):
        return np.sin(np.pi * x) ** 2

    def initial(x, b):
        h = 5.0 + np.exp(np.cos(2.0 * np.pi * x))
        hu = np.sin(np.cos(2.0 * np.pi * x))
        return h, hu

    return Scenario(
        name="accuracy-test",
        x_left=0.0,
        x_right=1.0,
        g=G_STANDARD,
        t_end=0.1,
        default_n=100,
        bottom=bottom,
        initial=initial,
        bc_left=BoundaryCondition("periodic"),
        bc_right=BoundaryCondition("periodic"),
    )


def _lake_bottom(x):
    return 0.25 - 0.25 * np.cos((2.0 * x - 1.0) * np.pi)


def make_lake_at_rest(perturbed=False) -> Scenario:
    """Still lake in a basin with dry shores; optionally a small sine wave."""

    def initial(x, b):
        if perturbed:
            h = np.maximum(
                0.0,
                0.4 + np.sin(4.0 * x - 2.0 - np.maximum(0.0, -0.4 + b)) / 25.0 - b,
            )
        else:
            h = np.maximum(0.0, 0.4 - b)
        return h, np.zeros_like(h)

    return Scenario(
        name="oscillating-lake" if perturbed else "lake-at-rest",
        x_left=0.0,
        x_right=1.0,
        g=G_STANDARD,
        t_end=19.87,
        default_n=200,
        bottom=_lake_bottom,
        initial=initial,
        bc_left=BoundaryCondition("wall"),
        bc_right=BoundaryCondition("wall"),
        equilibrium_w=0.4,
    )


RUNUP_D = 1.0
RUNUP_DELTA = 0.019
RUNUP_GAMMA = math.sqrt(3.0 * RUNUP_DELTA / (4.0 * RUNUP_D))
RUNUP_XA = math.sqrt(4.0 * RUNUP_D / (3.0 * RUNUP_DELTA)) * math.acosh(math.sqrt(20.0))


def make_runup() -> Scenario:
    """Wave run-up and reflection on a sloping shore, settling to a lake."""

    def bottom(x):
        return np.where(x < 2.0 * RUNUP_XA, 0.0, (x - 2.0 * RUNUP_XA) / 19.85)

    def initial(x, b):
        surf = RUNUP_D + RUNUP_DELTA / np.cosh(RUNUP_GAMMA * (x - RUNUP_XA)) ** 2
        h0 = np.maximum(surf, b) - b
        u0 = math.sqrt(G_STANDARD / RUNUP_D) * np.maximum(surf, b)
        return h0, h0 * u0

    return Scenario(
        name="runup",
        x_left=0.0,
        x_right=80.0,
        g=G_STANDARD,
        t_end=80.0,
        default_n=200,
        bottom=bottom,
        initial=initial,
        bc_left=BoundaryCondition("outflow"),
        bc_right=BoundaryCondition("wall"),
        equilibrium_w=RUNUP_D,
    )


def exact_front(t, alpha, g=G_STANDARD):
    """Exact dam-break front position and velocity on a plane of angle alpha."""
    c = 2.0 * math.sqrt(g * math.cos(alpha))
    x_f = c * t - 0.5 * g * t * t * math.tan(alpha)
    u_f = c - g * t * math.tan(alpha)
    return x_f, u_f


def make_dambreak_plane(alpha=0.0) -> Scenario:
    """Dam break over an inclined plane; alpha>0 tilts the bottom uphill.

    The reservoir (x<0) has a flat surface w=1; the plane downstream is dry.
    The bottom x*tan(alpha) rises in +x for alpha>0, matching the exact
    front solution, which decelerates uphill and accelerates downhill.
    """

    tan_a = math.tan(alpha)

    def bottom(x):
        return x * tan_a

    def initial(x, b):
        n = x.shape[0] - 1
        h = np.zeros((n, 2))
        hu = np.zeros((n, 2))
        xl, xr = x[:-1], x[1:]
        h[:, 0] = np.where(xl < 0.0, 1.0 - b[:-1], 0.0)
        h[:, 1] = np.where(xr <= 0.0, 1.0 - b[1:], 0.0)
        return h, hu

    return Scenario(
        name="dambreak-plane",
        x_left=-15.0,
        x_right=15.0,
        g=G_STANDARD,
        t_end=2.0,
        default_n=200,
        bottom=bottom,
        initial=initial,
        bc_left=BoundaryCondition("discharge", 0.0),
        bc_right=BoundaryCondition("outflow"),
        front_exact=lambda t: exact_front(t, alpha, G_STANDARD),
    )


CADAM_DAM_X = 15.5
CADAM_GAUGES = tuple(
    (f"GP{d}", CADAM_DAM_X + d) for d in (2, 4, 8, 10, 11, 13, 20)
)


def make_cadam_hump() -> Scenario:
    """Laboratory dam-break over a triangular obstacle with Manning friction.

    38 m channel, dam at 15.5 m holding 0.75 m of still water, a symmetric
    triangle 6 m long and 0.4 m high starting 13 m downstream of the dam,
    dry floodplain, reflecting wall upstream and a free outlet downstream.
    """

    def bottom(x):
        up = 0.4 * (x - 28.5) / 3.0
        down = 0.4 * (34.5 - x) / 3.0
        return np.maximum(0.0, np.minimum(up, down))

    def initial(x, b):
        h = np.where(x < CADAM_DAM_X, 0.75 - b, 0.0)
        return h, np.zeros_like(h)

    return Scenario(
        name="cadam-hump",
        x_left=0.0,
        x_right=38.0,
        g=G_STANDARD,
        t_end=90.0,
        default_n=200,
        bottom=bottom,
        initial=initial,
        bc_left=BoundaryCondition("wall"),
        bc_right=BoundaryCondition("outflow"),
        gauges=CADAM_GAUGES,
        friction=FrictionParams(n=0.0125),
    )


SCENARIOS = {
    "accuracy-test": make_accuracy_test,
    "lake-at-rest": lambda: make_lake_at_rest(perturbed=False),
    "oscillating-lake": lambda: make_lake_at_rest(perturbed=True),
    "runup": make_runup,
    "dambreak-plane": make_dambreak_plane,
    "cadam-hump": make_cadam_hump,
}


def get_scenario(name, **kwargs) -> Scenario:
    try:
        factory = SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ValueError(f"unknown scenario {name!r} (known: {known})") from None
    return factory(**kwargs) if kwargs else factory()
