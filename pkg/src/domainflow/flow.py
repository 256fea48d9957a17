"""Time stepping of the Hele-Shaw flow in moving normal-graph charts.

The boundary moves along its own normal ``nu`` with speed ``V_n``. Over a chart
with base normal ``n`` this is ``rho_dot = V_n / <nu, n>``. The flow smooths
like a third-order operator, so explicit steps are unstable for modes whose
arclength wavenumber ``k`` has ``dt k^3`` above RK4's real stability limit. We
therefore project the normal flux ``q = V_n |theta'|`` onto the lowest
``filter_modes`` Fourier modes before converting it to ``rho_dot``. The mean
of ``q`` is kept, so the enclosed area still changes at rate zero.

When the chart fills up (C^1 norm of rho above ``rechart_threshold * delta``)
or a step leaves it, the domain is re-anchored over a low-passed copy of its
own boundary.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .charts import Chart, DomainRep, boundary_hausdorff, is_admissible, standard_chart
from .errors import ChartTangency, NotInChart
from .field import BoundaryDiscretization, boundary_geometry, heleshaw_field
from .functionspace import PeriodicScalarField, holder_norm
from .geometry import Collar, _dot

log = logging.getLogger(__name__)

TANGENCY_LIMIT = 0.1
RK4_REAL_LIMIT = 2.78
MIN_FILTER_MODES = 4


@dataclass(frozen=True)
class FlowConfig:
    dt: float
    T: float
    rechart_threshold: float = 0.5
    smoothing_cutoff: int | None = None
    n: int | None = None
    integrator: str = "rk4"
    snapshot_every: int = 1
    filter_modes: int | None = None
    stability_safety: float = 0.5

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if not 0 < self.rechart_threshold < 1:
            raise ValueError("rechart_threshold must lie in (0, 1)")
        if self.integrator not in ("rk4", "euler"):
            raise ValueError("integrator must be 'rk4' or 'euler'")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be at least 1")


@dataclass(frozen=True)
class Diagnostics:
    area: float
    perimeter: float
    max_speed: float
    chart_c1_fill: float
    rechart_count: int


@dataclass(frozen=True)
class RechartEvent:
    t: float
    c1_fill_before: float
    hausdorff: float
    reason: str


@dataclass(frozen=True, eq=False)
class FlowState:
    t: float
    dom: DomainRep
    vn: PeriodicScalarField
    bd: BoundaryDiscretization
    diagnostics: Diagnostics
    events: tuple = ()

    @classmethod
    def initial(cls, dom: DomainRep, t: float = 0.0, rechart_count: int = 0, events=()) -> "FlowState":
        bd = boundary_geometry(dom)
        vn = heleshaw_field(dom, bd)
        diag = Diagnostics(
            area=bd.area,
            perimeter=bd.perimeter,
            max_speed=vn.sup(),
            chart_c1_fill=holder_norm(dom.rho, (1, 0)) / dom.chart.delta,
            rechart_count=rechart_count,
        )
        if not diag.area > 0:
            raise NotInChart("domain has lost positive area")
        return cls(t, dom, vn, bd, diag, tuple(events))


def low_pass(values: np.ndarray, modes: int) -> np.ndarray:
    X = np.fft.rfft(values)
    X[modes + 1:] = 0.0
    return np.fft.irfft(X, len(values))


def filter_modes(cfg: FlowConfig, dom: DomainRep, bd: BoundaryDiscretization) -> int:
    """Highest parameter mode kept in the rate."""
    nyq = dom.n // 2 - 1
    if cfg.filter_modes is not None:
        return max(0, min(int(cfg.filter_modes), nyq))
    if cfg.integrator == "euler":
        limit = 2.0
    else:
        limit = RK4_REAL_LIMIT
    k = float(np.min(bd.speed)) * (cfg.stability_safety * limit / cfg.dt) ** (1.0 / 3.0)
    return max(MIN_FILTER_MODES, min(int(math.floor(k)), nyq))


def chart_rate(dom: DomainRep, vn: PeriodicScalarField, bd: BoundaryDiscretization | None = None,
               modes: int | None = None) -> PeriodicScalarField:
    """``rho_dot = V_n / <nu, n>``; with ``modes``, the flux is low-passed first."""
    bd = boundary_geometry(dom) if bd is None else bd
    cosang = _dot(bd.normals, dom.curve.normals)
    if np.min(cosang) < TANGENCY_LIMIT:
        j = int(np.argmin(cosang))
        raise ChartTangency(f"<nu, n> = {cosang[j]:.3g} at s={dom.curve.s[j]:.6g}")
    v = vn.values
    if modes is None:
        return PeriodicScalarField(dom.curve, v / cosang)
    flux = low_pass(v * bd.speed, modes)
    return PeriodicScalarField(dom.curve, flux / (cosang * bd.speed))


def _stage(dom: DomainRep, values: np.ndarray, modes: int) -> np.ndarray:
    trial = dom.with_rho(values)
    ok, diag = is_admissible(trial.chart, trial.rho)
    if not ok:
        raise NotInChart(f"stage left the chart: {diag}")
    bd = boundary_geometry(trial)
    return chart_rate(trial, heleshaw_field(trial, bd), bd, modes).values


def step(state: FlowState, cfg: FlowConfig, dt: float | None = None) -> FlowState:
    """One explicit step in the current chart."""
    dt = cfg.dt if dt is None else dt
    dom = state.dom
    modes = filter_modes(cfg, dom, state.bd)
    r0 = dom.rho.values
    k1 = chart_rate(dom, state.vn, state.bd, modes).values
    if cfg.integrator == "euler":
        r1 = r0 + dt * k1
    else:
        k2 = _stage(dom, r0 + 0.5 * dt * k1, modes)
        k3 = _stage(dom, r0 + 0.5 * dt * k2, modes)
        k4 = _stage(dom, r0 + dt * k3, modes)
        r1 = r0 + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    new = dom.with_rho(r1)
    ok, diag = is_admissible(new.chart, new.rho)
    if not ok:
        raise NotInChart(f"step left the chart: {diag}")
    return FlowState.initial(new, state.t + dt, state.diagnostics.rechart_count, state.events)


def rechart(state: FlowState, cfg: FlowConfig, reason: str) -> FlowState:
    cutoff = cfg.smoothing_cutoff if cfg.smoothing_cutoff is not None else state.dom.n // 4
    _, dom = standard_chart(state.dom, cutoff, arclength=True)
    jump = boundary_hausdorff(state.dom, dom)
    event = RechartEvent(state.t, state.diagnostics.chart_c1_fill, jump, reason)
    log.info("rechart at t=%.6g (%s): fill %.3g, boundary jump %.3g",
             state.t, reason, event.c1_fill_before, jump)
    return FlowState.initial(dom, state.t, state.diagnostics.rechart_count + 1, state.events + (event,))


def resample(dom: DomainRep, n: int) -> DomainRep:
    if n == dom.n:
        return dom
    curve = dom.curve.with_samples(n)
    chart = Chart(Collar(curve, dom.chart.delta))
    return DomainRep(chart, dom.rho.on(curve))


Sink = Callable[[FlowState, bool], None]

MAX_SPLIT = 8


def _advance(state: FlowState, cfg: FlowConfig, dt: float, fresh: bool = False, depth: int = 0) -> FlowState:
    """Advance by ``dt``, re-anchoring on failure and halving the step when even
    a fresh chart cannot absorb it."""
    if not fresh and state.diagnostics.chart_c1_fill > cfg.rechart_threshold:
        state, fresh = rechart(state, cfg, "fill"), True
    try:
        return step(state, cfg, dt)
    except (NotInChart, ChartTangency) as exc:
        if not fresh:
            state, fresh = rechart(state, cfg, type(exc).__name__), True
            try:
                return step(state, cfg, dt)
            except (NotInChart, ChartTangency):
                pass
        if depth >= MAX_SPLIT:
            raise
    log.debug("splitting step at t=%.6g into two of %.3g", state.t, dt / 2)
    half = _advance(state, cfg, dt / 2, fresh, depth + 1)
    return _advance(half, cfg, dt / 2, False, depth + 1)


def simulate(dom0: DomainRep, cfg: FlowConfig, sink: Sink | None = None) -> FlowState:
    """Integrate to ``cfg.T``; ``sink(state, recharted)`` receives snapshots,
    where ``recharted`` says whether a rechart happened since the last one."""
    dom0 = resample(dom0, cfg.n) if cfg.n else dom0
    state = FlowState.initial(dom0)
    if sink:
        sink(state, False)
    nsteps = max(1, int(round(cfg.T / cfg.dt)))
    seen = 0
    for i in range(1, nsteps + 1):
        dt = cfg.T - state.t if i == nsteps else cfg.dt
        state = _advance(state, cfg, dt)
        if sink and (i % cfg.snapshot_every == 0 or i == nsteps):
            count = state.diagnostics.rechart_count
            sink(state, count > seen)
            seen = count
    return state
