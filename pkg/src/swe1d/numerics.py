"""Central-upwind fluxes, local speeds, and the bed source quadrature.

The momentum flux is split into an advective part (hu)*u and a gravity
part (g/2)h^2.  The mass flux and the gravity part carry the local-speed
diffusion brackets (on h and hu respectively); the advective part carries
none.  Only the mass and advective-momentum fluxes are later cut by the
draining-time limiter, so the gravity/source balance is never disturbed.
"""

from __future__ import annotations

import numpy as np

# Below this speed gap the interface is dry/degenerate and the exact flux
# is zero; guards the division by a+ - a-.
SPEED_FLOOR = 1e-12


def physical_flux(w, hu, b, g, eps=1e-9):
    """Flux (F1, F2a, F2g) of a single state; F2a uses the desingularized u."""
    w = np.asarray(w, dtype=float)
    hu = np.asarray(hu, dtype=float)
    h = w - np.asarray(b, dtype=float)
    wet = h >= eps
    u = np.where(wet, hu / np.where(wet, h, 1.0), 0.0)
    f1 = hu
    f2a = hu * u
    f2g = 0.5 * g * h * h
    if f1.ndim == 0:
        return float(f1), float(f2a), float(f2g)
    return f1, f2a, f2g


def local_speeds(h_minus, u_minus, h_plus, u_plus, g):
    """One-sided characteristic speed bounds, clamped to straddle zero."""
    h_minus = np.asarray(h_minus, dtype=float)
    h_plus = np.asarray(h_plus, dtype=float)
    u_minus = np.asarray(u_minus, dtype=float)
    u_plus = np.asarray(u_plus, dtype=float)
    c_minus = np.sqrt(g * h_minus)
    c_plus = np.sqrt(g * h_plus)
    a_plus = np.maximum(np.maximum(u_plus + c_plus, u_minus + c_minus), 0.0)
    a_minus = np.minimum(np.minimum(u_plus - c_plus, u_minus - c_minus), 0.0)
    if a_plus.ndim == 0:
        return float(a_plus), float(a_minus)
    return a_plus, a_minus


def cu_flux(h_minus, u_minus, h_plus, u_plus, a_plus, a_minus, g):
    """Central-upwind flux components (H1, H2a, H2g) at interfaces.

    H1 carries the depth diffusion bracket (equal to the w bracket, the
    bottom being single-valued at the interface); H2g carries the hu
    bracket; H2a carries none.  All components vanish where the speed gap
    is below SPEED_FLOOR.
    """
    h_minus = np.asarray(h_minus, dtype=float)
    h_plus = np.asarray(h_plus, dtype=float)
    u_minus = np.asarray(u_minus, dtype=float)
    u_plus = np.asarray(u_plus, dtype=float)
    a_plus = np.asarray(a_plus, dtype=float)
    a_minus = np.asarray(a_minus, dtype=float)

    hu_minus = h_minus * u_minus
    hu_plus = h_plus * u_plus
    denom = a_plus - a_minus
    live = denom >= SPEED_FLOOR
    safe = np.where(live, denom, 1.0)
    coef = a_plus * a_minus / safe

    h1 = (a_plus * hu_minus - a_minus * hu_plus) / safe + coef * (h_plus - h_minus)
    h2a = (a_plus * (hu_minus * u_minus) - a_minus * (hu_plus * u_plus)) / safe
    h2g = (
        a_plus * (0.5 * g * h_minus * h_minus) - a_minus * (0.5 * g * h_plus * h_plus)
    ) / safe + coef * (hu_plus - hu_minus)

    h1 = np.where(live, h1, 0.0)
    h2a = np.where(live, h2a, 0.0)
    h2g = np.where(live, h2g, 0.0)
    if h1.ndim == 0:
        return float(h1), float(h2a), float(h2g)
    return h1, h2a, h2g


def source_quadrature(h_bar, b_ifc, dx, g):
    """Momentum source cell averages -g*h_bar*(B_right - B_left)/dx.

    The mass equation has no source.  Zero on flat bottoms and dry cells.
    """
    h_bar = np.asarray(h_bar, dtype=float)
    b_ifc = np.asarray(b_ifc, dtype=float)
    out = -g * h_bar * (b_ifc[1:] - b_ifc[:-1]) / dx
    return out
