"""Normal-graph charts over reference curves.

A domain is represented over a chart (a reference curve with a collar) by a
scalar field ``rho``: its boundary is ``theta(s) = gamma(s) + rho(s) n(s)``.
Changing charts means re-expressing the same boundary as a normal graph over
another curve; :func:`transition` does this by solving, for every node of the
new curve, for the source parameter whose boundary point lies on that node's
normal line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely

from .errors import NewtonFailure, NotInChart, SingularLinearization
from .functionspace import (PeriodicScalarField, antiderivative, eval_field,
                            holder_norm, spectral_derivative)
from .geometry import (TWO_PI, Collar, FourierCurve, ReferenceCurve, _dot,
                       collar_coordinates, reach)

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
SINGULAR_TOL = 1e-8
RETRY_CANDIDATES = 3


@dataclass(frozen=True, eq=False)
class Chart:
    collar: Collar

    @classmethod
    def over(cls, curve: ReferenceCurve, delta: float | None = None) -> "Chart":
        return cls(Collar.default(curve) if delta is None else Collar(curve, delta))

    @property
    def curve(self) -> ReferenceCurve:
        return self.collar.curve

    @property
    def delta(self) -> float:
        return self.collar.delta

    @property
    def n(self) -> int:
        return self.curve.n

    def zero(self) -> PeriodicScalarField:
        return PeriodicScalarField.constant(self.curve, 0.0)

    def field(self, values) -> PeriodicScalarField:
        return PeriodicScalarField(self.curve, values)

    def to_spec(self) -> dict:
        return {"curve": self.curve.to_spec(), "delta": self.delta}


@dataclass(frozen=True, eq=False)
class DomainRep:
    """A domain written over ``chart`` by the normal offset ``rho``."""

    chart: Chart
    rho: PeriodicScalarField

    def __post_init__(self):
        if self.rho.n != self.chart.n:
            raise ValueError("rho must be sampled on the chart's base curve")
        if self.rho.curve is not self.chart.curve:
            object.__setattr__(self, "rho", PeriodicScalarField(self.chart.curve, self.rho.values))

    @classmethod
    def reference(cls, chart: Chart) -> "DomainRep":
        return cls(chart, chart.zero())

    @property
    def curve(self) -> ReferenceCurve:
        return self.chart.curve

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def scale(self) -> float:
        return self.curve.scale

    @property
    def points(self) -> np.ndarray:
        """Boundary samples ``theta(s_j)``."""
        return self.curve.points + self.rho.values[:, None] * self.curve.normals

    def boundary(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return self.curve.point(s) + eval_field(self.rho, s)[:, None] * self.curve.normal(s)

    def boundary_d1(self, s) -> np.ndarray:
        """Parameter derivative of the offset curve, ``gamma' + rho' n + rho n'``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        c = self.curve
        r = eval_field(self.rho, s)
        r1 = eval_field(self.rho, s, 1)
        return c.derivative(s, 1) + r1[:, None] * c.normal(s) + r[:, None] * c.normal_derivative(s)

    def with_rho(self, rho) -> "DomainRep":
        if not isinstance(rho, PeriodicScalarField):
            rho = self.chart.field(rho)
        return DomainRep(self.chart, rho)

    def validate(self) -> None:
        ok, diag = is_admissible(self.chart, self.rho)
        if not ok:
            raise NotInChart(f"representation is not admissible: {diag}")

    def to_spec(self) -> dict:
        return {"chart": self.chart.to_spec(), "rho": {"n": self.n, "values": self.rho.values.tolist()}}


def boundary_point(dom: DomainRep, s: float) -> np.ndarray:
    """``gamma(s) + rho(s) n(s)``."""
    return dom.boundary(s)[0]


# -- admissibility --------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityReport:
    c1_norm: float
    delta: float
    min_offset_regularity: float
    simple: bool

    def as_dict(self) -> dict:
        return {"c1_norm": self.c1_norm, "delta": self.delta,
                "min_offset_regularity": self.min_offset_regularity, "simple": self.simple}


def offset_speed(curve: ReferenceCurve, rho: PeriodicScalarField) -> np.ndarray:
    r1 = spectral_derivative(rho, 1).values
    d1 = curve.d1 + r1[:, None] * curve.normals + rho.values[:, None] * curve.normal_derivatives
    return np.linalg.norm(d1, axis=1)


def is_admissible(chart: Chart, rho: PeriodicScalarField) -> tuple[bool, dict]:
    """C^1 norm below delta, offset curve regular and simple."""
    curve = chart.curve
    c1 = holder_norm(rho, (1, 0))
    regularity = float(np.min(offset_speed(curve, rho)) / np.mean(curve.speed))
    pts = curve.points + rho.values[:, None] * curve.normals
    simple = bool(shapely.LinearRing(pts).is_simple)
    diag = AdmissibilityReport(c1, chart.delta, regularity, simple)
    ok = c1 < chart.delta and regularity > 1e-8 and simple
    return ok, diag.as_dict()


# -- transition -----------------------------------------------------------------

@dataclass(frozen=True)
class TransitionSolution:
    """Source parameters ``chi`` for each destination node, and the new rho."""

    chi: np.ndarray
    rho: PeriodicScalarField


def _newton_chi(src: DomainRep, y, tau, s0, scale):
    """Solve <theta(s) - y, tau> = 0 per row; returns (s, converged)."""
    s = s0.astype(float).copy()
    h = TWO_PI / src.n
    ok = np.zeros(len(s), dtype=bool)
    active = np.ones(len(s), dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        if not active.any():
            break
        sa = s[active]
        g = _dot(src.boundary(sa) - y[active], tau[active])
        gp = _dot(src.boundary_d1(sa), tau[active])
        safe = np.abs(gp) > 1e-14 * scale
        step = np.where(safe, -g / np.where(safe, gp, 1.0), h)
        step = np.clip(step, -2 * h, 2 * h)
        s[active] = sa + step
        done = (np.abs(g) <= NEWTON_TOL * 1e-2 * scale) | (np.abs(step) <= NEWTON_TOL)
        idx = np.flatnonzero(active)
        ok[idx[done]] = True
        active[idx[done]] = False
    return s, ok


def _initial_guesses(src: DomainRep, dst: Chart, src_coords_s: np.ndarray):
    """Candidate source parameters per destination node.

    First the source sample whose projection onto the destination curve is
    closest in parameter, then the nearest source samples in space.
    """
    t = dst.curve.s
    dpar = np.abs(np.angle(np.exp(1j * (t[:, None] - src_coords_s[None, :]))))
    first = np.argmin(dpar, axis=1)
    dist = np.linalg.norm(dst.curve.points[:, None, :] - src.points[None, :, :], axis=-1)
    near = np.argsort(dist, axis=1)[:, :RETRY_CANDIDATES]
    return np.concatenate([first[:, None], near], axis=1)


def solve_transition(src: DomainRep, dst_chart: Chart, check_admissible: bool = True) -> TransitionSolution:
    """Transition with the source parameters it found; see :func:`transition`."""
    pts = src.points
    s_proj, lam, inside = collar_coordinates(dst_chart.collar, pts)
    if not inside.all():
        j = int(np.flatnonzero(~inside)[0])
        raise NotInChart(f"boundary point at s={src.curve.s[j]:.6g} lies outside the target collar",
                         parameter=float(src.curve.s[j]))
    dst = dst_chart.curve
    y, tau, nrm = dst.points, dst.tangents, dst.normals
    scale = max(src.scale, dst.scale)
    guesses = _initial_guesses(src, dst_chart, s_proj)
    width = dst_chart.collar.width

    chi = np.full(dst.n, np.nan)
    pending = np.arange(dst.n)
    for col in range(guesses.shape[1]):
        if len(pending) == 0:
            break
        s, ok = _newton_chi(src, y[pending], tau[pending], src.curve.s[guesses[pending, col]], scale)
        # a root far along the normal line belongs to another sheet of the boundary
        off = _dot(src.boundary(s) - y[pending], nrm[pending])
        ok &= np.abs(off) < width
        chi[pending[ok]] = np.mod(s[ok], TWO_PI)
        pending = pending[~ok]
    if len(pending):
        raise NewtonFailure(f"transition Newton failed at target parameter {dst.s[pending[0]]:.6g}")

    c1 = src.curve
    rho2 = (_dot(c1.point(chi) - y, nrm)
            + eval_field(src.rho, chi) * _dot(c1.normal(chi), nrm))
    out = PeriodicScalarField(dst, rho2)
    if check_admissible:
        ok, diag = is_admissible(dst_chart, out)
        if not ok:
            j = int(np.argmax(np.abs(rho2)))
            raise NotInChart(f"transitioned representation is not admissible: {diag}",
                             parameter=float(dst.s[j]))
    return TransitionSolution(chi, out)


def transition(src: DomainRep, dst_chart: Chart, check_admissible: bool = True) -> PeriodicScalarField:
    """Rho of the same domain over ``dst_chart``, sampled at its own nodes.

    With ``check_admissible=False`` the result is only required to stay in the
    target collar; the C^1 bound is not enforced.
    """
    return solve_transition(src, dst_chart, check_admissible).rho


def transition_rep(src: DomainRep, dst_chart: Chart, check_admissible: bool = True) -> DomainRep:
    return DomainRep(dst_chart, transition(src, dst_chart, check_admissible))


def transition_derivative(src: DomainRep, dst_chart: Chart, zeta: PeriodicScalarField,
                          mode: str = "formula", h: float | None = None,
                          check_admissible: bool = True) -> PeriodicScalarField:
    """Directional derivative of the transition map at ``src.rho`` along ``zeta``.

    ``mode="fd"`` gives a central finite difference for cross-validation.
    """
    dst = dst_chart.curve
    if mode == "fd":
        if h is None:
            h = 1e-6 * src.scale / max(zeta.sup(), 1e-300)
        plus = transition(src.with_rho(src.rho + h * zeta), dst_chart, check_admissible)
        minus = transition(src.with_rho(src.rho - h * zeta), dst_chart, check_admissible)
        return PeriodicScalarField(dst, (plus.values - minus.values) / (2 * h))
    if mode != "formula":
        raise ValueError(f"unknown mode {mode!r}")

    sol = solve_transition(src, dst_chart, check_admissible)
    chi = sol.chi
    c1 = src.curve
    tau2, n2 = dst.tangents, dst.normals
    n1 = c1.normal(chi)
    dtheta = src.boundary_d1(chi)
    # d_x G: parameter speed of the projection of theta onto the target curve
    lam = sol.rho.values
    dxg = _dot(dtheta, tau2) / ((1.0 - lam * dst.curvature) * dst.speed)
    if np.any(np.abs(dxg) < SINGULAR_TOL):
        j = int(np.argmin(np.abs(dxg)))
        raise SingularLinearization(f"|d_x G| = {abs(dxg[j]):.3g} at target s={dst.s[j]:.6g}")
    z = eval_field(zeta, chi)
    ds = -z * _dot(n1, tau2) / _dot(dtheta, tau2)
    out = _dot(dtheta, n2) * ds + z * _dot(n1, n2)
    return PeriodicScalarField(dst, out)


def standard_chart_derivative(std: DomainRep, dst_chart: Chart, zeta: PeriodicScalarField) -> PeriodicScalarField:
    """Transition derivative out of a standard chart (``rho = 0``) assembled from
    the projection-derivative blocks A (along the boundary) and B (along its
    normal): ``v = -<A^{-1} B zeta, n> + zeta <nu, n>``."""
    if np.any(std.rho.values != 0.0):
        raise ValueError("standard-chart assembly needs rho = 0 in the source chart")
    sol = solve_transition(std, dst_chart, check_admissible=False)
    chi = sol.chi
    gam = std.curve
    _, tau_g, nu, _ = gam.frame(chi)
    dst = dst_chart.curve
    tau_s, n_s = dst.tangents, dst.normals
    lam = sol.rho.values
    out = np.empty(dst.n)
    z = eval_field(zeta, chi)
    for j in range(dst.n):
        dpi = np.outer(tau_s[j], tau_s[j]) / ((1.0 - lam[j] * dst.curvature[j]) * dst.speed[j])
        proj = np.outer(nu[j], nu[j])
        a = tau_s[j] @ dpi @ (np.eye(2) - proj) @ tau_g[j]
        b = tau_s[j] @ dpi @ proj @ (z[j] * nu[j])
        if abs(a) < SINGULAR_TOL:
            raise SingularLinearization(f"A is singular at target s={dst.s[j]:.6g}")
        out[j] = -(b / a) * (tau_g[j] @ n_s[j]) + z[j] * (nu[j] @ n_s[j])
    return PeriodicScalarField(dst, out)


def arclength_parameters(dom: DomainRep, tol: float = 1e-14) -> np.ndarray:
    """Parameters ``sigma_j`` splitting the boundary into ``n`` arcs of equal length."""
    n = dom.n
    speed = PeriodicScalarField(dom.curve, np.linalg.norm(dom.boundary_d1(dom.curve.s), axis=1))
    mean = float(np.mean(speed.values))
    periodic = antiderivative(speed - mean)
    target = dom.curve.s * mean
    sigma = dom.curve.s.copy()
    for _ in range(50):
        f = mean * sigma + eval_field(periodic, sigma) - target
        step = f / eval_field(speed, sigma)
        sigma = sigma - step
        if np.max(np.abs(step)) < tol:
            break
    return sigma


def standard_chart(dom: DomainRep, smoothing_cutoff: int | None = None,
                   arclength: bool = False) -> tuple[Chart, DomainRep]:
    """Re-anchor ``dom`` over a Fourier curve fitted to its own boundary.

    With ``smoothing_cutoff`` at least ``n/2`` (or None) the new base
    interpolates the boundary samples and the new rho vanishes up to roundoff;
    a smaller cutoff low-passes the base and leaves a small residual rho.
    ``arclength=True`` first resamples the boundary at equal arclength, so the
    new base has uniform parameter speed.
    """
    n = dom.n
    cutoff = n // 2 if smoothing_cutoff is None else int(smoothing_cutoff)
    pts = dom.boundary(arclength_parameters(dom)) if arclength else dom.points
    base = FourierCurve.from_samples(pts, n=n, cutoff=cutoff)
    chart = Chart(Collar(base, reach(base) / 8))
    rho = transition(dom, chart)
    return chart, DomainRep(chart, rho)


# -- boundary distances -----------------------------------------------------------

def _distance_to_curve(dom: DomainRep, pts: np.ndarray) -> np.ndarray:
    """Distance from each point to the continuous boundary of ``dom``."""
    d = np.linalg.norm(pts[:, None, :] - dom.points[None, :, :], axis=-1)
    s = dom.curve.s[np.argmin(d, axis=1)].astype(float)
    h = TWO_PI / dom.n
    for _ in range(30):
        r = dom.boundary(s) - pts
        t = dom.boundary_d1(s)
        step = np.clip(-_dot(r, t) / _dot(t, t), -h, h)
        s = s + step
        if np.max(np.abs(step)) < 1e-15:
            break
    return np.linalg.norm(dom.boundary(s) - pts, axis=1)


def boundary_hausdorff(a: DomainRep, b: DomainRep) -> float:
    """Two-sided Hausdorff distance from each sample set to the other boundary curve."""
    return float(max(np.max(_distance_to_curve(b, a.points)),
                     np.max(_distance_to_curve(a, b.points))))
