"""Property suites run by ``domainflow check``.

Each check records what was measured, the tolerance, and the identity it
exercises, so a failing line is self-explanatory.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bundle, charts, field, flow, functionspace, geometry, groups
from .charts import Chart, DomainRep
from .corpus import overlapping_pair, perturbed_disk, random_domain
from .functionspace import PeriodicScalarField
from .groups import GroupElement


_RELATIONS = {"<=": operator.le, ">=": operator.ge, ">": operator.gt, "==": operator.eq}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    anchor: str
    measured: float
    tolerance: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        return bool(_RELATIONS[self.relation](self.measured, self.tolerance))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} [{self.suite}] {self.name}: measured {self.measured:.3e} "
                f"{self.relation} {self.tolerance:.3e} | {self.anchor}")


class _Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.results: list[CheckResult] = []

    def __call__(self, name, anchor, measured, tolerance, relation="<="):
        self.results.append(CheckResult(self.suite, name, anchor, float(measured), float(tolerance), relation))


def _max(a) -> float:
    return float(np.max(np.abs(a)))


def geometry_suite(rng: np.random.Generator) -> list[CheckResult]:
    rec = _Recorder("geometry")
    p, t, nrm, k = geometry.curve_frame(geometry.Circle(n=64), 0.0)
    rec("unit circle frame at s=0", "gamma=(1,0), n=(1,0), kappa=1",
        _max(np.concatenate([p - [1, 0], t - [0, 1], nrm - [1, 0], [k - 1]])), 1e-14)
    e = geometry.Ellipse(a=2.0, b=1.0, n=128)
    rec("ellipse reach", "reach = b^2/a", abs(geometry.reach(e) - 0.5), 1e-12)
    f = geometry.FourierCurve.from_samples(e.points)
    rec("Fourier interpolant reach", "reach of interpolated ellipse = b^2/a", abs(geometry.reach(f) - 0.5), 1e-8)
    collar = geometry.Collar.default(e)
    s = rng.uniform(0, 2 * np.pi, 50)
    lam = rng.uniform(-3.9, 3.9, 50) * collar.delta
    pts = e.point(s) + lam[:, None] * e.normal(s)
    s2, lam2, inside = geometry.collar_coordinates(collar, pts)
    ds = np.angle(np.exp(1j * (s2 - s)))
    rec("collar coordinates round trip", "y = gamma(s) + lam n(s)",
        max(_max(ds), _max(lam2 - lam)) if inside.all() else np.inf, 1e-10)
    rec("Gauss-Bonnet on reference curve", "sum kappa ds = 2 pi",
        abs(np.sum(e.curvature * e.speed) * 2 * np.pi / e.n - 2 * np.pi), 1e-10)
    return rec.results


def functionspace_suite(rng: np.random.Generator) -> list[CheckResult]:
    rec = _Recorder("functionspace")
    c = geometry.Circle(n=64)
    f = PeriodicScalarField.from_function(c, np.cos)
    rec("interpolation off-node", "eval cos at 0.3", abs(functionspace.eval_field(f, 0.3)[0] - np.cos(0.3)), 1e-12)
    rec("C^1 norm of cos", "sup|f| + sup|f'| = 2", abs(functionspace.holder_norm(f, (1, 0)) - 2), 1e-12)
    rho = PeriodicScalarField.from_function(c, lambda s: 0.1 * np.cos(s))
    eta = PeriodicScalarField.from_function(c, np.sin)
    d1 = functionspace.composition_map_derivative(rho, eta, 1)
    d2 = functionspace.composition_map_derivative(rho, eta, 2)
    F = functionspace.superposition
    errs1, errs2 = [], []
    for h in (1e-3, 1e-4):
        fd1 = (F(rho + h * eta).values - F(rho - h * eta).values) / (2 * h)
        fd2 = (F(rho + h * eta).values - 2 * F(rho).values + F(rho - h * eta).values) / h**2
        errs1.append(_max(fd1 - d1.values) / _max(d1.values))
        errs2.append(_max(fd2 - d2.values) / _max(d2.values))
    rec("first superposition derivative", "F'(rho) eta = rho'(f) f_r eta + eta(f)", min(errs1), 1e-6)
    rec("second superposition derivative", "F''(rho)(eta, eta) by chain rule", min(errs2), 1e-5)
    worst = -np.inf
    fam = [PeriodicScalarField.from_fourier(c, rng.normal(size=4) * 0.3, rng.normal(size=3) * 0.3)
           for _ in range(8)]
    norm = max(functionspace.holder_norm(e, (0, 1)) for e in fam)
    for _ in range(50):
        i, j = rng.integers(0, len(fam), 2)
        s1, s2 = rng.uniform(0, 2 * np.pi, 2)
        lhs, rhs = functionspace.evaluation_bound(fam[i], s1, fam[j], s2, norm)
        worst = max(worst, lhs - rhs)
    rec("evaluation-map Lipschitz bound", "|e1(s1)-e2(s2)| <= (1+sup||e||)(arc + sup|e1-e2|)", worst, 0.0)
    return rec.results


def charts_suite(rng: np.random.Generator, pairs: int = 5) -> list[CheckResult]:
    rec = _Recorder("charts")
    rt, haus, der = 0.0, 0.0, 0.0
    for _ in range(pairs):
        dom, chart2 = overlapping_pair(rng)
        rho2 = charts.transition(dom, chart2)
        dom2 = DomainRep(chart2, rho2)
        rt = max(rt, _max(charts.transition(dom2, dom.chart).values - dom.rho.values))
        haus = max(haus, charts.boundary_hausdorff(dom, dom2) / dom.scale)
        zeta = PeriodicScalarField.from_fourier(dom.curve, rng.normal(size=3), rng.normal(size=2))
        exact = charts.transition_derivative(dom, chart2, zeta)
        fd = charts.transition_derivative(dom, chart2, zeta, mode="fd", h=1e-5)
        der = max(der, _max(fd.values - exact.values) / _max(exact.values))
    rec("transition round trip", "rho2 = <chi - y, n2> + rho1(chi)<n1(chi), n2>", rt, 1e-8)
    rec("boundary Hausdorff consistency", "theta_rho1(S1) = theta_rho2(S2)", haus, 1e-8)
    rec("transition derivative vs finite differences", "d_rho chi = -[d_x G]^-1 d_rho G", der, 1e-6)
    circ = Chart.over(geometry.Circle(n=128))
    std = DomainRep.reference(circ)
    target = Chart.over(geometry.Circle((0.05, 0.0), 1.0, 0.0, 128))
    zeta = PeriodicScalarField.from_function(circ.curve, np.cos)
    ab = charts.standard_chart_derivative(std, target, zeta)
    direct = charts.transition_derivative(std, target, zeta)
    rec("standard-chart A,B assembly", "v = -<A^-1 B zeta, n> + zeta <nu, n>", _max(ab.values - direct.values), 1e-8)
    dom = DomainRep(circ, PeriodicScalarField.from_function(circ.curve, lambda s: 0.02 * np.cos(2 * s)))
    _, fresh = charts.standard_chart(dom)
    rec("exact standard chart", "re-anchored rho = 0", fresh.rho.sup(), 1e-8)
    return rec.results


def bundle_suite(rng: np.random.Generator, points: int = 500) -> list[CheckResult]:
    rec = _Recorder("bundle")
    dom = random_domain(rng, 128, fill=0.5)
    zero = dom.with_rho(np.zeros(dom.n))
    x = bundle.sample_interior(dom, points, rng, margin=1e-4 * dom.scale)
    rec("Theta_0 is the identity", "Theta_0(x) = x", _max(bundle.hanzawa_map(zero, x) - x), 0.0)
    rec("boundary restriction", "Theta_rho(gamma) = theta_rho(gamma)",
        _max(bundle.hanzawa_map(dom, dom.curve.points) - dom.points), 0.0)
    rec("Jacobian positivity", "det D Theta_rho > 0", float(np.min(bundle.jacobian_determinant(dom, x))), 0.0, ">")
    y = bundle.hanzawa_map(dom, x)
    rec("inverse round trip", "Theta(Theta^-1(y)) = y", _max(bundle.hanzawa_map(dom, bundle.hanzawa_inverse(dom, y)) - y),
        1e-10 * dom.scale)
    src, chart2 = overlapping_pair(rng)
    z = lambda p: np.sin(p[:, 0]) + p[:, 1] ** 2
    rho2, z2 = bundle.bundle_transition(src, z, chart2)
    rho1, z1 = bundle.bundle_transition(DomainRep(chart2, rho2), z2, src.chart)
    q = bundle.sample_interior(src, 100, rng)
    rec("bundle chart round trip", "z o Theta1^-1 o Theta2 and back", max(_max(z1(q) - z(q)),
                                                                           _max(rho1.values - src.rho.values)), 1e-8)
    return rec.results


def groups_suite(rng: np.random.Generator) -> list[CheckResult]:
    rec = _Recorder("groups")
    dom = random_domain(rng, 128)
    z1, z2 = np.array([0.25, -0.125]), np.array([0.5, 0.375])
    a = groups.act(GroupElement.translation(z1), groups.act(GroupElement.translation(z2), dom))
    b = groups.act(GroupElement.translation(z1 + z2), dom)
    rec("translation group law", "p(z1+z2) = p(z1) p(z2)",
        max(_max(a.points - b.points), _max(a.rho.values - b.rho.values)), 1e-12)
    a = groups.act(GroupElement.dilation(2.0), groups.act(GroupElement.dilation(0.75), dom))
    b = groups.act(GroupElement.dilation(1.5), dom)
    rec("dilation group law", "q(l1 l2) = q(l1) q(l2)",
        max(_max(a.points - b.points), _max(a.rho.values - b.rho.values)), 1e-12)
    lam, z = 1.7, np.array([0.3, -0.2])
    a = groups.act(GroupElement.dilation(lam), groups.act(GroupElement.translation(z), dom))
    b = groups.act(GroupElement.translation(lam * z), groups.act(GroupElement.dilation(lam), dom))
    rec("quasi-commutation", "q(l, p(z, O)) = p(l z, q(l, O))",
        max(_max(a.points - b.points), _max(a.rho.values - b.rho.values)), 1e-12)
    disk = DomainRep.reference(Chart.over(geometry.Circle(n=128)))
    rank, sv = groups.action_jacobian_rank(disk, return_singular_values=True)
    rec("action Jacobian rank on the disk", "rank d_(z,l) g = n + 1", rank, 3, "==")
    rec("singular-value gap", "s3 / (1e-6 s1)", sv[2] / (groups.RANK_TOL * sv[0]), 1e4, ">=")
    rank4, sv4 = groups.action_jacobian_rank(disk, ("z1", "z2", "lam", "angle"), return_singular_values=True)
    rec("gap against the rotation direction", "s3 / s4 with rotation column", sv4[2] / max(sv4[3], 1e-300), 1e4, ">=")
    ell = DomainRep.reference(Chart.over(geometry.Ellipse(a=1.3, b=1.0, n=128)))
    rec("action Jacobian rank on an ellipse", "rank d_(z,l) g = n + 1", groups.action_jacobian_rank(ell), 3, "==")
    return rec.results


def field_suite(rng: np.random.Generator) -> list[CheckResult]:
    rec = _Recorder("field")
    disk = DomainRep.reference(Chart.over(geometry.Circle(n=128)))
    bd = field.boundary_geometry(disk)
    t = disk.curve.s
    err = max(_max(field.solve_dirichlet(bd, np.cos(k * t)) - k * np.cos(k * t)) for k in range(1, 6))
    rec("disk harmonics", "d_n (r^k cos k t) = k cos k t", err, 1e-9)
    rec("constant data", "u = c has d_n u = 0", _max(field.solve_dirichlet(bd, np.full(128, 2.5))), 1e-10)
    shifted = DomainRep.reference(Chart.over(geometry.Circle((0.3, -0.2), 2.0, 0.0, 128)))
    rec("disk equilibrium", "V_n = 0 on any disk", field.heleshaw_field(shifted).sup(), 1e-8)
    worst = 0.0
    for k in (2, 3, 4):
        eps = 1e-3
        d = perturbed_disk(k, eps, 256)
        v = field.heleshaw_field(d).values
        amp = 2 * np.mean(v * np.cos(k * d.curve.s)) / eps
        worst = max(worst, abs(amp + k * (k * k - 1)) / (k * (k * k - 1)))
    rec("linearized mode rates", "V_n = -k(k^2-1) eps cos k t", worst, 1e-2)
    dom = random_domain(rng, 128)
    v0 = field.heleshaw_field(dom).values
    vt = field.heleshaw_field(groups.act(GroupElement.translation((0.4, -0.3)), dom)).values
    vr = field.heleshaw_field(groups.act(GroupElement.rotation(0.7), dom)).values
    rec("translation equivariance", "F(p(a,O)) = F(O)", _max(vt - v0), 1e-8)
    rec("rotation equivariance", "F(r(A,O)) = F(O)", _max(vr - v0), 1e-8)
    dil = max(_max(field.heleshaw_field(groups.act(GroupElement.dilation(lam), dom)).values - v0 / lam**2)
              for lam in (0.5, 2.0))
    rec("dilation scaling", "V_n(l O) = l^-2 V_n(O)", dil, 1e-8)
    bd = field.boundary_geometry(dom)
    rec("mass neutrality", "sum V_n ds = 0", abs(np.sum(v0 * bd.weights)), 1e-8)
    return rec.results


def flow_suite(rng: np.random.Generator) -> list[CheckResult]:
    rec = _Recorder("flow")
    disk = DomainRep.reference(Chart.over(geometry.Circle(n=128)))
    end = flow.simulate(disk, flow.FlowConfig(dt=1e-3, T=0.05))
    rec("disk stays put", "disks are equilibria", charts.boundary_hausdorff(disk, end.dom), 1e-6)
    dom = perturbed_disk(2, 1e-2, 128)
    states = []
    flow.simulate(dom, flow.FlowConfig(dt=1e-3, T=0.1), lambda s, r: states.append(s))
    areas = np.array([s.diagnostics.area for s in states])
    perims = np.array([s.diagnostics.perimeter for s in states])
    rec("area conservation", "d/dt area = sum V_n ds = 0", _max(areas - areas[0]) / areas[0], 1e-5)
    rec("perimeter monotone", "d/dt perimeter = -int |grad u|^2", float(np.max(np.diff(perims))), 1e-8)
    ts = np.array([s.t for s in states])
    amp = np.array([2 * np.mean(s.dom.rho.values * np.cos(2 * s.dom.curve.s)) for s in states])
    rate = np.polyfit(ts, np.log(amp), 1)[0]
    rec("mode-2 decay rate", "rate -k(k^2-1) = -6", abs(rate + 6) / 6, 0.02)
    return rec.results


SUITES: dict[str, Callable[[np.random.Generator], list[CheckResult]]] = {
    "geometry": geometry_suite,
    "functionspace": functionspace_suite,
    "charts": charts_suite,
    "bundle": bundle_suite,
    "groups": groups_suite,
    "field": field_suite,
    "flow": flow_suite,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        out.extend(SUITES[n](np.random.default_rng(seed)))
    return out
