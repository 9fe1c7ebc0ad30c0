"""Manning bed friction, applied as a partially implicit post-step update.

The hydrodynamic step runs friction-free; afterwards the momentum is
relaxed through the closed-form quotient of the partially implicit
discretization, which is unconditionally stable, only ever reduces the
momentum magnitude, and never reverses the flow direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reconstruction import mean_velocity


@dataclass(frozen=True)
class FrictionParams:
    """Manning coefficient n (s/m^(1/3)) and an enable flag."""

    n: float
    enabled: bool = True

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Manning coefficient must be nonnegative")


def apply_friction(h, hu, dt, n, g, eps):
    """Relax momentum: hu * h^(4/3) / (h^(4/3) + dt*g*n^2*|u|).

    Depths are untouched (the mass equation has no friction term).  Cells
    with h < eps get exactly zero momentum; the desingularized velocity
    keeps the h^(1/3) singularity of the roughness coefficient harmless.
    """
    h = np.asarray(h, dtype=float)
    hu = np.asarray(hu, dtype=float)
    u = mean_velocity(h, hu, eps)
    wet = h >= eps
    h43 = np.where(wet, h, 1.0) ** (4.0 / 3.0)
    out = np.where(wet, hu * h43 / (h43 + dt * g * n * n * np.abs(u)), 0.0)
    if out.ndim == 0:
        return float(out)
    return out
