"""Time stepping: CFL step selection, draining-limited Euler stages, SSP-RK3.

The solver marches (h, hu) cell averages.  Heights are updated with
per-interface effective time steps (cut to the upwind cell's draining
time), the advective momentum flux is cut the same way, and the gravity
flux and bed source keep the full step so their balance is untouched.
The three RK stages reuse the stage-one dt; stage combinations are formed
in increment form, so an exactly steady stage output leaves the state
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .boundary import BoundaryCondition, check_pair, extend_bathymetry, extend_state
from .friction import apply_friction
from .grid import CellState
from .kernels import StageFluxes, draining_time, effective_dt  # re-exported  # noqa: F401
from .reconstruction import variant_code

# A raw post-update height below -POSITIVITY_GUARD*scale indicates a bug,
# not rounding; rounding-level negatives are flushed to zero.
POSITIVITY_GUARD = 1e-9


class SolverError(RuntimeError):
    """Raised when a run cannot continue (NaN/Inf state, dt underflow)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def cfl_dt(amax, dx, cfl, dt_max):
    """CFL time step cfl*dx/amax, or dt_max when no wave exists."""
    if amax <= 0.0:
        return float(dt_max)
    return float(min(cfl * dx / amax, dt_max))


@dataclass
class StepDiagnostics:
    """Per-step data: global dt, draining/effective steps, speeds, counters."""

    dt: float
    dt_drain: np.ndarray
    dt_eff: np.ndarray
    a_cell: np.ndarray
    cfl_star: float
    amax: float
    counters: dict
    n_cut: int
    n_clamped: int
    min_h_raw: float


@dataclass
class RunResult:
    state: CellState
    t: float
    n_steps: int
    dt_history: list = field(default_factory=list)
    mass_history: list = field(default_factory=list)
    time_history: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    gauge_names: tuple = ()
    gauge_times: list = field(default_factory=list)
    gauge_depths: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)

    @property
    def mass_drift(self):
        if len(self.mass_history) < 2 or self.mass_history[0] == 0.0:
            return 0.0
        m0 = self.mass_history[0]
        return max(abs(m - m0) for m in self.mass_history) / abs(m0)


class Solver:
    """Central-upwind solver bound to one grid/bottom/parameter set."""

    def __init__(
        self,
        grid,
        bathy,
        params,
        bc_left: BoundaryCondition,
        bc_right: BoundaryCondition,
        variant="bckn",
        draining_limiter=True,
        friction=None,
        backend="auto",
    ):
        check_pair(bc_left, bc_right)
        self.grid = grid
        self.bathy = bathy
        self.params = params
        self.bc_left = bc_left
        self.bc_right = bc_right
        self.variant = variant
        self._variant_code = variant_code(variant)
        self.draining_limiter = draining_limiter
        self.friction = friction
        self.backend = kernels.get_backend(backend)
        self._b_ifc_ext, self._b_cell_ext = extend_bathymetry(bathy.b_ifc, bc_left, bc_right)

    # -- array-level pipeline ------------------------------------------

    def depths(self, state: CellState):
        h = state.w_bar - self.bathy.b_cell
        if h.min(initial=0.0) < -POSITIVITY_GUARD * max(1.0, float(np.abs(state.w_bar).max())):
            raise SolverError("state has negative depth")
        return np.maximum(h, 0.0)

    def stage_fluxes(self, h, hu) -> StageFluxes:
        h_ext, hu_ext = extend_state(h, hu, self.bc_left, self.bc_right)
        p = self.params
        return self.backend.stage(
            h_ext, hu_ext, self._b_ifc_ext, self._b_cell_ext,
            self.grid.dx, p.g, p.theta, p.eps, self._variant_code, self.grid.n,
        )

    def _apply(self, h, hu, fx, dt):
        res = self.backend.update(
            h, hu, fx, dt, self.grid.dx, self.bc_left, self.bc_right,
            limiter=self.draining_limiter,
        )
        scale = max(1.0, float(h.max(initial=0.0)))
        if res.min_h_raw < -POSITIVITY_GUARD * scale:
            raise SolverError(
                f"positivity violated beyond rounding: min h = {res.min_h_raw:.3e}"
            )
        return res

    def _diagnostics(self, fx, res, dt):
        a_cell = np.maximum(
            np.maximum(fx.a_plus[:-1], -fx.a_minus[:-1]),
            np.maximum(fx.a_plus[1:], -fx.a_minus[1:]),
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = 2.0 * a_cell / fx.dx_star
        ratio = np.where((a_cell == 0.0) & (fx.dx_star == 0.0), 0.0, ratio)
        cfl_star = float(dt * ratio.max(initial=0.0))
        return StepDiagnostics(
            dt=dt,
            dt_drain=res.dt_drain,
            dt_eff=res.dt_eff,
            a_cell=a_cell,
            cfl_star=cfl_star,
            amax=fx.amax,
            counters=fx.counters,
            n_cut=int(np.count_nonzero(res.dt_eff < dt)),
            n_clamped=res.n_clamped,
            min_h_raw=res.min_h_raw,
        )

    # -- public stepping -------------------------------------------------

    def euler_step(self, state: CellState, dt):
        """One draining-limited forward-Euler step; returns (state', diagnostics)."""
        h = self.depths(state)
        hu = state.hu_bar
        fx = self.stage_fluxes(h, hu)
        res = self._apply(h, hu, fx, dt)
        new = CellState(self.bathy.b_cell + res.h, res.hu)
        self._check_finite(new)
        return new, self._diagnostics(fx, res, dt)

    def lemma_dt(self, state: CellState):
        """Wet-length CFL bound min_j dx*_j/(2 a_j) (test mode, not production)."""
        h = self.depths(state)
        fx = self.stage_fluxes(h, state.hu_bar)
        a_cell = np.maximum(
            np.maximum(fx.a_plus[:-1], -fx.a_minus[:-1]),
            np.maximum(fx.a_plus[1:], -fx.a_minus[1:]),
        )
        live = a_cell > 0.0
        if not live.any():
            return np.inf
        return float(np.min(fx.dx_star[live] / (2.0 * a_cell[live])))

    def _rk3_arrays(self, h0, hu0, dt, fx1=None):
        if fx1 is None:
            fx1 = self.stage_fluxes(h0, hu0)
        r1 = self._apply(h0, hu0, fx1, dt)

        fx2 = self.stage_fluxes(r1.h, r1.hu)
        r2 = self._apply(r1.h, r1.hu, fx2, dt)
        h_b = h0 + 0.25 * ((r1.h - h0) + (r2.h - r1.h))
        hu_b = hu0 + 0.25 * ((r1.hu - hu0) + (r2.hu - r1.hu))
        np.maximum(h_b, 0.0, out=h_b)

        fx3 = self.stage_fluxes(h_b, hu_b)
        r3 = self._apply(h_b, hu_b, fx3, dt)
        h_new = h0 + (2.0 / 3.0) * ((h_b - h0) + (r3.h - h_b))
        hu_new = hu0 + (2.0 / 3.0) * ((hu_b - hu0) + (r3.hu - hu_b))
        np.maximum(h_new, 0.0, out=h_new)
        return h_new, hu_new, fx1, r1

    def ssp_rk3_step(self, state: CellState, dt):
        """One three-stage SSP-RK3 step (same dt in every stage)."""
        h = self.depths(state)
        h_new, hu_new, fx1, r1 = self._rk3_arrays(h, state.hu_bar, dt)
        new = CellState(self.bathy.b_cell + h_new, hu_new)
        self._check_finite(new)
        return new, self._diagnostics(fx1, r1, dt)

    def _check_finite(self, state):
        if not (np.isfinite(state.w_bar).all() and np.isfinite(state.hu_bar).all()):
            raise SolverError("non-finite state; aborting")

    def run(
        self,
        state: CellState,
        t_end,
        t0=0.0,
        dt_max=None,
        dt_floor=1e-13,
        gauges=(),
        gauge_dt=None,
        snapshot_times=(),
        on_step=None,
        max_steps=None,
        record_mass=True,
    ) -> RunResult:
        """March RK3 steps to t_end, clipping the last step to land exactly.

        ``gauges`` are x positions sampled every ``gauge_dt`` (nearest step).
        ``snapshot_times`` are copied out at the first step reaching them.
        ``on_step(t, state, diag)`` is called after every step.
        """
        grid = self.grid
        h = self.depths(state)
        hu = state.hu_bar.copy()
        t = float(t0)
        result = RunResult(state=state, t=t, n_steps=0)

        gauge_idx = None
        if gauges:
            gx = np.asarray(gauges, dtype=float)
            if gx.min() < grid.x_left or gx.max() > grid.x_right:
                raise ValueError("gauges must lie inside the domain")
            gauge_idx = np.clip(((gx - grid.x_left) / grid.dx).astype(int), 0, grid.n - 1)
            result.gauge_names = tuple(f"x={x:g}" for x in gx)
        next_gauge = t if gauge_dt else np.inf

        snap_queue = sorted(float(ts) for ts in snapshot_times)
        while snap_queue and snap_queue[0] <= t:
            result.snapshots[snap_queue.pop(0)] = (t, CellState(self.bathy.b_cell + h, hu.copy()))

        def record(tq):
            nonlocal next_gauge
            if gauge_idx is not None and tq >= next_gauge:
                result.gauge_times.append(tq)
                result.gauge_depths.append(h[gauge_idx].copy())
                while next_gauge <= tq:
                    next_gauge += gauge_dt

        if record_mass:
            result.mass_history.append(float(h.sum()) * grid.dx)
            result.time_history.append(t)
        record(t)

        totals = {}
        fric = self.friction
        while t < t_end - 1e-14 * max(1.0, abs(t_end)):
            fx1 = self.stage_fluxes(h, hu)
            cap = t_end - t if dt_max is None else min(dt_max, t_end - t)
            dt = cfl_dt(fx1.amax, grid.dx, self.params.cfl, cap)
            dt = min(dt, t_end - t)
            if dt < dt_floor:
                raise SolverError(
                    f"time step underflow (dt={dt:.3e} at t={t:.6g})",
                    {"t": t, "dt": dt},
                )
            h, hu, fx1, r1 = self._rk3_arrays(h, hu, dt, fx1)
            if fric is not None and fric.enabled:
                hu = apply_friction(h, hu, dt, fric.n, self.params.g, self.params.eps)
            t += dt
            result.n_steps += 1
            if not (np.isfinite(h).all() and np.isfinite(hu).all()):
                raise SolverError(f"non-finite state at t={t:.6g}", {"t": t, "dt": dt})

            result.dt_history.append(dt)
            if record_mass:
                result.mass_history.append(float(h.sum()) * grid.dx)
                result.time_history.append(t)
            for key, val in fx1.counters.items():
                totals[key] = totals.get(key, 0) + val
            totals["draining_cuts"] = totals.get("draining_cuts", 0) + int(
                np.count_nonzero(r1.dt_eff < dt)
            )
            totals["clamped"] = totals.get("clamped", 0) + r1.n_clamped
            record(t)
            while snap_queue and t >= snap_queue[0] - 1e-12:
                result.snapshots[snap_queue.pop(0)] = (
                    t,
                    CellState(self.bathy.b_cell + h, hu.copy()),
                )
            if on_step is not None:
                on_step(t, CellState(self.bathy.b_cell + h, hu), self._diagnostics(fx1, r1, dt))
            if max_steps is not None and result.n_steps >= max_steps:
                break

        result.state = CellState(self.bathy.b_cell + h, hu)
        result.t = t
        result.counters = totals
        return result
