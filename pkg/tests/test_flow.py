import numpy as np
import pytest

from domainflow.charts import Chart, DomainRep
from domainflow.corpus import perturbed_disk
from domainflow.errors import NotInChart
from domainflow.field import boundary_geometry
from domainflow.flow import (FlowConfig, FlowState, chart_rate, filter_modes, low_pass, simulate,
                             step)
from domainflow.functionspace import PeriodicScalarField
from domainflow.geometry import Circle


def test_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(dt=0.0, T=1.0)
    with pytest.raises(ValueError):
        FlowConfig(dt=1e-3, T=1.0, integrator="leapfrog")
    with pytest.raises(ValueError):
        FlowConfig(dt=1e-3, T=1.0, rechart_threshold=1.5)


def test_low_pass_is_a_projection(rng):
    v = rng.normal(size=64)
    once = low_pass(v, 5)
    assert np.allclose(low_pass(once, 5), once, atol=1e-15)
    assert np.allclose(low_pass(v, 32), v, atol=1e-14)
    assert abs(np.mean(once) - np.mean(v)) < 1e-15


def test_filter_modes_grow_as_dt_shrinks(unit_disk):
    bd = boundary_geometry(unit_disk)
    m = [filter_modes(FlowConfig(dt=dt, T=1.0), unit_disk, bd) for dt in (1e-2, 1e-3, 1e-4)]
    assert m[0] < m[1] < m[2] <= unit_disk.n // 2 - 1
    assert filter_modes(FlowConfig(dt=1e-3, T=1.0, filter_modes=7), unit_disk, bd) == 7


def test_rate_of_a_translating_circle():
    # unit circle centred at (-d, 0) over the unit chart at the origin, moving with velocity (w, 0)
    d, w = 0.02, 1.0
    c = Circle(n=128)
    s = c.s
    root = np.sqrt(1 - (d * np.sin(s)) ** 2)
    rho = PeriodicScalarField(c, -d * np.cos(s) + root - 1)
    dom = DomainRep(Chart.over(c), rho)
    bd = boundary_geometry(dom)
    vn = PeriodicScalarField(c, w * bd.normals[:, 0])
    # the centre offset d decreases at rate w
    expected = w * (np.cos(s) + d * np.sin(s) ** 2 / root)
    assert np.max(np.abs(chart_rate(dom, vn, bd).values - expected)) < 1e-12


def test_disk_is_stationary(unit_disk):
    end = simulate(unit_disk, FlowConfig(dt=1e-3, T=0.02))
    assert np.max(np.abs(end.dom.rho.values)) < 1e-10


def _one_step(dom, dt, substeps, modes=10):
    cfg = FlowConfig(dt=dt / substeps, T=dt, filter_modes=modes)
    state = FlowState.initial(dom)
    for _ in range(substeps):
        state = step(state, cfg)
    return state.dom.rho.values


def test_rk4_one_step_order():
    dom = perturbed_disk(3, 2e-3, 64)
    errs = []
    for dt in (2e-3, 1e-3):
        ref = _one_step(dom, dt, 16)
        errs.append(np.max(np.abs(_one_step(dom, dt, 1) - ref)))
    assert errs[0] / errs[1] >= 12


def test_mode2_amplitude_after_one_step():
    eps, dt = 1e-4, 1e-4
    dom = perturbed_disk(2, eps, 128)
    rho = step(FlowState.initial(dom), FlowConfig(dt=dt, T=dt)).dom.rho
    amp = 2 * np.mean(rho.values * np.cos(2 * dom.curve.s))
    # nonlinear corrections are O(eps^2)
    assert amp / eps == pytest.approx(np.exp(-6 * dt), abs=5 * eps**2 + 1e-9)


def test_mode2_rate_fit_half_unit_time():
    ts, amps = [], []

    def record(state, recharted):
        ts.append(state.t)
        amps.append(2 * np.mean(state.dom.rho.values * np.cos(2 * state.dom.curve.s)))

    simulate(perturbed_disk(2, 1e-2, 128), FlowConfig(dt=1e-3, T=0.5, snapshot_every=10), record)
    assert np.polyfit(ts, np.log(amps), 1)[0] == pytest.approx(-6, rel=0.02)


def test_huge_step_leaves_the_chart():
    dom = perturbed_disk(2, 1e-2, 64)
    with pytest.raises(NotInChart):
        step(FlowState.initial(dom), FlowConfig(dt=1e-3, T=1.0), dt=5.0)


def _areas_and_perimeters(integrator, dt):
    states = []
    simulate(perturbed_disk(3, 1e-2, 64), FlowConfig(dt=dt, T=0.05, integrator=integrator),
             lambda s, r: states.append(s))
    return (np.array([s.diagnostics.area for s in states]),
            np.array([s.diagnostics.perimeter for s in states]))


def test_area_conserved_and_perimeter_decreases():
    areas, per = _areas_and_perimeters("rk4", 1e-3)
    assert np.max(np.abs(areas - areas[0])) < 1e-10
    assert np.all(np.diff(per) < 0)


def test_euler_area_drift_is_first_order_in_dt():
    drift = []
    for dt in (1e-3, 5e-4):
        areas, _ = _areas_and_perimeters("euler", dt)
        drift.append(abs(areas[-1] - areas[0]))
    assert drift[0] / drift[1] == pytest.approx(2.0, rel=0.05)


def test_sink_sees_every_snapshot():
    seen = []
    simulate(DomainRep.reference(Chart.over(Circle(n=32))), FlowConfig(dt=1e-3, T=0.01, snapshot_every=5),
             lambda s, r: seen.append(round(s.t, 12)))
    assert seen == [0.0, 0.005, 0.01]
