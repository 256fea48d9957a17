"""Hanzawa extension of a boundary offset to the whole closed domain.

Inside the collar a point has coordinates ``x = gamma(s) + lam n(s)``. The
extension moves it along its own normal line,

    Theta(x) = x + phi(1 + lam / (3 delta)) rho(s) n(s),

and leaves every point with ``lam <= -3 delta`` (or outside the collar) fixed.
The profile is exactly 1 at ``lam = 0`` so Theta agrees with the boundary map,
and its slope is at most 4, so the normal coordinate stays monotone whenever
``sup|rho| < 3 delta / 4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .charts import Chart, DomainRep, transition
from .errors import NewtonFailure, NotInChart, OutsideDomain
from .functionspace import PeriodicScalarField, eval_field
from .geometry import collar_coordinates, polygon_contains

INVERSE_MAX_ITER = 60


def _h(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _h1(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos]) / u[pos] ** 2
    return out


@dataclass(frozen=True)
class CutoffProfile:
    """Smooth step, 0 for ``t <= 1/2`` and 1 for ``t >= 1``."""

    max_slope: float = 4.0

    def __call__(self, t) -> np.ndarray:
        u = 2.0 * np.asarray(t, dtype=float) - 1.0
        a, b = _h(u), _h(1.0 - u)
        return a / (a + b)

    def derivative(self, t) -> np.ndarray:
        u = 2.0 * np.asarray(t, dtype=float) - 1.0
        a, b = _h(u), _h(1.0 - u)
        a1, b1 = _h1(u), -_h1(1.0 - u)
        return 2.0 * (a1 * (a + b) - a * (a1 + b1)) / (a + b) ** 2


PROFILE = CutoffProfile()

InteriorField = Callable[[np.ndarray], np.ndarray]


def bundle_bound(dom: DomainRep) -> float:
    """Largest sup|rho| for which Theta is certified injective."""
    return 3.0 * dom.chart.delta / PROFILE.max_slope


def _check_bound(dom: DomainRep) -> None:
    lim = bundle_bound(dom)
    if dom.rho.sup() >= lim:
        j = int(np.argmax(np.abs(dom.rho.values)))
        raise NotInChart(f"sup|rho| = {dom.rho.sup():.6g} exceeds the Hanzawa bound {lim:.6g}",
                         parameter=float(dom.curve.s[j]))


def _base_coordinates(dom: DomainRep, pts):
    """Collar coordinates plus interior membership for the base domain."""
    collar = dom.chart.collar
    s, lam, inside_collar = collar_coordinates(collar, pts)
    in_base = np.where(inside_collar, np.nan_to_num(lam, nan=1.0) <= 0.0, False)
    far = ~inside_collar
    if far.any():
        in_base[far] = polygon_contains(dom.curve.points, pts[far])
    return s, lam, inside_collar, in_base


def hanzawa_map(dom: DomainRep, x) -> np.ndarray:
    """Apply Theta to one point ``(2,)`` or a batch ``(M, 2)``."""
    _check_bound(dom)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    s, lam, inside_collar, in_base = _base_coordinates(dom, pts)
    if not in_base.all():
        raise OutsideDomain(f"point {pts[~in_base][0]} is outside the base domain")
    delta = dom.chart.delta
    out = pts.copy()
    moving = inside_collar & (lam > -3.0 * delta)
    if moving.any():
        curve = dom.curve
        sm = s[moving]
        nrm = curve.normal(sm)
        r = eval_field(dom.rho, sm)
        # exact node hits reuse the cached frame so Theta(gamma_j) == theta_j bit for bit
        j = np.rint(sm * curve.n / (2 * np.pi)).astype(int) % curve.n
        node = sm == curve.s[j]
        nrm[node] = curve.normals[j[node]]
        w = PROFILE(1.0 + lam[moving] / (3.0 * delta))
        out[moving] = pts[moving] + (w * r)[:, None] * nrm
    return out[0] if single else out


def _solve_fiber(mu, r, delta):
    """Find lam with lam + phi(1 + lam/3delta) r = mu on [-1.5 delta, 0]."""
    lo = np.full_like(mu, -1.5 * delta)
    hi = np.zeros_like(mu)
    lam = np.clip(mu - r, lo, hi)
    for _ in range(INVERSE_MAX_ITER):
        t = 1.0 + lam / (3.0 * delta)
        f = lam + PROFILE(t) * r - mu
        fp = 1.0 + PROFILE.derivative(t) * r / (3.0 * delta)
        lo = np.where(f < 0, lam, lo)
        hi = np.where(f > 0, lam, hi)
        new = lam - f / fp
        bad = (new <= lo) | (new >= hi)
        new = np.where(bad, 0.5 * (lo + hi), new)
        if np.max(np.abs(new - lam)) <= 1e-15 * max(delta, 1.0):
            return new
        lam = new
    if np.max(hi - lo) > 1e-12 * delta:
        raise NewtonFailure("Hanzawa inverse did not converge")
    return lam


def hanzawa_inverse(dom: DomainRep, y) -> np.ndarray:
    """Invert Theta by a safeguarded Newton solve along each normal fiber."""
    _check_bound(dom)
    pts = np.asarray(y, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    curve = dom.curve
    delta = dom.chart.delta
    tol = 1e-12 * dom.scale
    s, mu, inside_collar, _ = _base_coordinates(dom, pts)
    out = pts.copy()
    if inside_collar.any():
        sc, mc = s[inside_collar], mu[inside_collar]
        r = eval_field(dom.rho, sc)
        if np.any(mc > r + tol):
            raise OutsideDomain("point lies outside the deformed domain")
        lam = mc.copy()
        active = mc > -1.5 * delta
        if active.any():
            lam[active] = _solve_fiber(mc[active], r[active], delta)
        lam = np.where(np.abs(mc - r) <= tol, 0.0, lam)
        out[inside_collar] = curve.point(sc) + lam[:, None] * curve.normal(sc)
    far = ~inside_collar
    if far.any() and not polygon_contains(curve.points, pts[far]).all():
        raise OutsideDomain("point lies outside the deformed domain")
    return out[0] if single else out


def pullback(dom: DomainRep, v: InteriorField, x) -> np.ndarray:
    """``v(Theta(x))``."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    vals = np.asarray(v(hanzawa_map(dom, pts)), dtype=float)
    return vals[0] if np.asarray(x).ndim == 1 else vals


def bundle_transition(src: DomainRep, z: InteriorField, dst_chart: Chart,
                      check_admissible: bool = True) -> tuple[PeriodicScalarField, InteriorField]:
    """Move (rho, z) to ``dst_chart``; the second component is evaluated lazily
    as ``x -> z(Theta_src^{-1}(Theta_dst(x)))``."""
    rho2 = transition(src, dst_chart, check_admissible)
    dst = DomainRep(dst_chart, rho2)
    _check_bound(dst)

    def moved(x):
        return z(hanzawa_inverse(src, hanzawa_map(dst, np.atleast_2d(np.asarray(x, dtype=float)))))

    return rho2, moved


def jacobian_determinant(dom: DomainRep, x, step: float | None = None) -> np.ndarray:
    """Central-difference Jacobian determinant of Theta at interior points."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    h = 1e-6 * dom.scale if step is None else step
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    dx = (hanzawa_map(dom, pts + ex) - hanzawa_map(dom, pts - ex)) / (2 * h)
    dy = (hanzawa_map(dom, pts + ey) - hanzawa_map(dom, pts - ey)) / (2 * h)
    return dx[:, 0] * dy[:, 1] - dx[:, 1] * dy[:, 0]


def sample_interior(dom: DomainRep, count: int, rng: np.random.Generator, margin: float = 0.0) -> np.ndarray:
    """Uniform points inside the base domain, optionally ``margin`` away from its boundary."""
    curve = dom.curve
    lo, hi = curve.points.min(axis=0), curve.points.max(axis=0)
    out = []
    while sum(len(o) for o in out) < count:
        cand = rng.uniform(lo, hi, size=(4 * count, 2))
        keep = polygon_contains(curve.points, cand)
        cand = cand[keep]
        if margin > 0 and len(cand):
            _, lam, inside = collar_coordinates(dom.chart.collar, cand)
            cand = cand[~inside | (lam < -margin)]
        out.append(cand)
    return np.concatenate(out)[:count]
