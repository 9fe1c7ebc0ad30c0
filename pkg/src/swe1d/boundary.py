"""Ghost-cell boundary conditions.

Three ghost cells per side: slopes need one neighbour, the wet/dry
correction of the outermost flux cell reads its neighbour's uncorrected
edge values, and that neighbour's slope needs one more cell average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NGHOST = 3

PERIODIC = "periodic"
OUTFLOW = "outflow"
WALL = "wall"
DISCHARGE = "discharge"

_KINDS = (PERIODIC, OUTFLOW, WALL, DISCHARGE)


@dataclass(frozen=True)
class BoundaryCondition:
    """One side's boundary treatment.

    periodic   - wrap-around copy (both sides must be periodic)
    outflow    - zero-order extrapolation of depth and discharge
    wall       - reflective: mirror depth, negate discharge
    discharge  - mirror depth, prescribe discharge ``value``
    """

    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")


def check_pair(bc_left: BoundaryCondition, bc_right: BoundaryCondition):
    if (bc_left.kind == PERIODIC) != (bc_right.kind == PERIODIC):
        raise ValueError("periodic boundaries must be used on both sides")


def extend_bathymetry(b_ifc, bc_left, bc_right):
    """Interface bottom values extended by NGHOST cells per side.

    Returns (b_ifc_ext, b_cell_ext) of lengths n+2*NGHOST+1 and n+2*NGHOST.
    """
    b_ifc = np.asarray(b_ifc, dtype=float)
    n = b_ifc.shape[0] - 1
    g = NGHOST
    ext = np.empty(n + 2 * g + 1)
    ext[g : g + n + 1] = b_ifc

    if bc_left.kind == PERIODIC:
        if abs(b_ifc[0] - b_ifc[-1]) > 1e-12 * max(1.0, np.abs(b_ifc).max()):
            raise ValueError("periodic boundaries need a periodic bottom")
        for k in range(1, g + 1):
            ext[g - k] = b_ifc[n - k]
    elif bc_left.kind == OUTFLOW:
        ext[:g] = b_ifc[0]
    else:  # wall / discharge: mirror about the boundary interface
        for k in range(1, g + 1):
            ext[g - k] = b_ifc[k]

    if bc_right.kind == PERIODIC:
        for k in range(1, g + 1):
            ext[g + n + k] = b_ifc[k]
    elif bc_right.kind == OUTFLOW:
        ext[g + n + 1 :] = b_ifc[n]
    else:
        for k in range(1, g + 1):
            ext[g + n + k] = b_ifc[n - k]

    b_cell_ext = 0.5 * (ext[:-1] + ext[1:])
    return ext, b_cell_ext


def extend_state(h, hu, bc_left, bc_right):
    """Depth and discharge cell averages extended with ghost values."""
    n = h.shape[0]
    g = NGHOST
    h_ext = np.empty(n + 2 * g)
    hu_ext = np.empty(n + 2 * g)
    h_ext[g : g + n] = h
    hu_ext[g : g + n] = hu

    if bc_left.kind == PERIODIC:
        h_ext[:g] = h[n - g :]
        hu_ext[:g] = hu[n - g :]
    elif bc_left.kind == OUTFLOW:
        h_ext[:g] = h[0]
        hu_ext[:g] = hu[0]
    elif bc_left.kind == WALL:
        h_ext[:g] = h[g - 1 :: -1]
        hu_ext[:g] = -hu[g - 1 :: -1]
    else:  # discharge
        h_ext[:g] = h[g - 1 :: -1]
        hu_ext[:g] = bc_left.value

    if bc_right.kind == PERIODIC:
        h_ext[g + n :] = h[:g]
        hu_ext[g + n :] = hu[:g]
    elif bc_right.kind == OUTFLOW:
        h_ext[g + n :] = h[n - 1]
        hu_ext[g + n :] = hu[n - 1]
    elif bc_right.kind == WALL:
        h_ext[g + n :] = h[: n - g - 1 : -1]
        hu_ext[g + n :] = -hu[: n - g - 1 : -1]
    else:
        h_ext[g + n :] = h[: n - g - 1 : -1]
        hu_ext[g + n :] = bc_right.value

    return h_ext, hu_ext


def pad_draining(dt_drain, bc_left, bc_right):
    """Per-cell draining times padded with one ghost value per side.

    Outflow through a domain-boundary interface is only limited by an
    interior cell; a ghost never cuts it (pad = +inf), except for periodic
    runs where the ghost is the wrapped far cell and must cut identically,
    or water could be created/destroyed at the seam.
    """
    n = dt_drain.shape[0]
    out = np.empty(n + 2)
    out[1:-1] = dt_drain
    out[0] = dt_drain[-1] if bc_left.kind == PERIODIC else np.inf
    out[-1] = dt_drain[0] if bc_right.kind == PERIODIC else np.inf
    return out
