"""Smooth closed reference curves, their frames, reach, and collar projection.

A reference curve is a counterclockwise, regular, simple, 2*pi-periodic map
``s -> gamma(s)`` sampled at ``s_j = 2*pi*j/n``. The outward normal is the unit
tangent rotated by -90 degrees and curvature is positive on convex arcs.

The collar of half-width ``delta`` is the region within distance ``4*delta`` of
the curve; inside it every point ``y`` has unique collar coordinates
``(s, lam)`` with ``y = gamma(s) + lam * n(s)`` and ``lam < 0`` inside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import shapely

from .errors import DegenerateCurve, NewtonFailure, OutsideCollar

TWO_PI = 2.0 * np.pi
PROJECT_MAX_ITER = 50


def nodes(n: int) -> np.ndarray:
    """Uniform parameter nodes ``2*pi*j/n``."""
    return TWO_PI * np.arange(n) / n


def _rot(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def rotate_minus_90(v: np.ndarray) -> np.ndarray:
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


class ReferenceCurve:
    """Common machinery for the concrete curve kinds.

    Subclasses implement ``derivative(s, order)`` returning an ``(M, 2)`` array
    and the affine transforms used by the group actions.
    """

    kind = "abstract"
    n: int

    def derivative(self, s, order: int = 0) -> np.ndarray:
        raise NotImplementedError

    # -- arbitrary-parameter evaluation -------------------------------------
    def point(self, s) -> np.ndarray:
        return self.derivative(s, 0)

    def frame(self, s):
        """Point, unit tangent, outward unit normal and curvature at ``s``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        g0 = self.derivative(s, 0)
        g1 = self.derivative(s, 1)
        g2 = self.derivative(s, 2)
        speed = np.hypot(g1[:, 0], g1[:, 1])
        if np.any(speed < 1e-12 * self.scale):
            raise DegenerateCurve(f"|gamma'| vanishes on {self.kind} curve")
        tangent = g1 / speed[:, None]
        normal = rotate_minus_90(tangent)
        curvature = _cross(g1, g2) / speed**3
        return g0, tangent, normal, curvature

    def normal(self, s) -> np.ndarray:
        return self.frame(s)[2]

    def normal_derivative(self, s) -> np.ndarray:
        """d n / d s (parameter derivative of the outward normal)."""
        _, tangent, _, curvature = self.frame(s)
        speed = np.linalg.norm(self.derivative(s, 1), axis=1)
        return (curvature * speed)[:, None] * tangent

    # -- cached samples ------------------------------------------------------
    @cached_property
    def s(self) -> np.ndarray:
        return nodes(self.n)

    @cached_property
    def points(self) -> np.ndarray:
        return self.derivative(self.s, 0)

    @cached_property
    def d1(self) -> np.ndarray:
        return self.derivative(self.s, 1)

    @cached_property
    def d2(self) -> np.ndarray:
        return self.derivative(self.s, 2)

    @cached_property
    def speed(self) -> np.ndarray:
        return np.hypot(self.d1[:, 0], self.d1[:, 1])

    @cached_property
    def tangents(self) -> np.ndarray:
        return self.d1 / self.speed[:, None]

    @cached_property
    def normals(self) -> np.ndarray:
        return rotate_minus_90(self.tangents)

    @cached_property
    def curvature(self) -> np.ndarray:
        return _cross(self.d1, self.d2) / self.speed**3

    @cached_property
    def normal_derivatives(self) -> np.ndarray:
        return (self.curvature * self.speed)[:, None] * self.tangents

    @cached_property
    def scale(self) -> float:
        """Curve diameter, the unit for all length tolerances."""
        p = self.derivative(nodes(self.n), 0)
        d = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
        return float(d.max())

    @cached_property
    def cumulative_arclength(self) -> np.ndarray:
        """Arclength from s=0 to each node, by spectral integration of speed."""
        n = self.n
        sp = np.fft.fft(self.speed)
        k = np.fft.fftfreq(n, 1.0 / n)
        mean = sp[0].real / n
        with np.errstate(divide="ignore", invalid="ignore"):
            anti = np.where(k != 0, sp / (1j * k), 0.0)
        if n % 2 == 0:
            anti[n // 2] = 0.0
        a = np.fft.ifft(anti).real
        return mean * self.s + (a - a[0])

    @cached_property
    def length(self) -> float:
        return float(TWO_PI / self.n * self.speed.sum())

    @cached_property
    def arc_distance(self) -> np.ndarray:
        """Pairwise shortest arclength distances between nodes."""
        c = self.cumulative_arclength
        d = np.abs(c[:, None] - c[None, :])
        return np.minimum(d, self.length - d)

    @cached_property
    def signed_area(self) -> float:
        x, y = self.points[:, 0], self.points[:, 1]
        return float(0.5 * TWO_PI / self.n * np.sum(x * self.d1[:, 1] - y * self.d1[:, 0]))

    def validate(self) -> None:
        if self.n < 8 or self.n % 2:
            raise DegenerateCurve(f"sample count must be an even integer >= 8, got {self.n}")
        if not np.all(np.isfinite(self.points)):
            raise DegenerateCurve("non-finite curve samples")
        if self.speed.min() <= 1e-12 * self.scale:
            raise DegenerateCurve("curve is not regular (|gamma'| ~ 0)")
        if self.signed_area <= 0:
            raise DegenerateCurve("curve must be counterclockwise")
        if not is_simple_polygon(self.points):
            raise DegenerateCurve("curve self-intersects")

    # -- derived objects -----------------------------------------------------
    def reach(self) -> float:
        return reach(self)

    def with_samples(self, n: int) -> "ReferenceCurve":
        raise NotImplementedError

    def contains(self, pts) -> np.ndarray:
        """Point-in-polygon test against the sampled curve."""
        return polygon_contains(self.points, pts)


def is_simple_polygon(points: np.ndarray) -> bool:
    ring = shapely.LinearRing(points)
    return bool(ring.is_simple)


def polygon_contains(poly: np.ndarray, pts) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    return shapely.contains_xy(shapely.Polygon(poly), pts[:, 0], pts[:, 1])


@dataclass(frozen=True, eq=False)
class Circle(ReferenceCurve):
    """``gamma(s) = center + radius * R(angle) (cos s, sin s)``."""

    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    angle: float = 0.0
    n: int = 128
    kind = "circle"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.radius > 0:
            raise DegenerateCurve("circle radius must be positive")
        self.validate()

    def derivative(self, s, order=0):
        s = np.atleast_1d(np.asarray(s, dtype=float)) + self.angle
        ph = s + order * np.pi / 2
        out = self.radius * np.stack([np.cos(ph), np.sin(ph)], axis=-1)
        if order == 0:
            out = out + np.asarray(self.center)
        return out

    def translated(self, z):
        return Circle(np.asarray(self.center) + np.asarray(z), self.radius, self.angle, self.n)

    def scaled(self, lam):
        return Circle(lam * np.asarray(self.center), lam * self.radius, self.angle, self.n)

    def rotated(self, theta):
        return Circle(_rot(theta) @ np.asarray(self.center), self.radius, self.angle + theta, self.n)

    def with_samples(self, n):
        return Circle(self.center, self.radius, self.angle, n)

    def to_spec(self):
        return {"kind": "circle", "center": list(self.center), "radius": self.radius,
                "angle": self.angle, "n": self.n}


@dataclass(frozen=True, eq=False)
class Ellipse(ReferenceCurve):
    """``gamma(s) = center + R(angle) (a cos s, b sin s)``."""

    center: tuple = (0.0, 0.0)
    a: float = 1.0
    b: float = 1.0
    angle: float = 0.0
    n: int = 128
    kind = "ellipse"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not (self.a > 0 and self.b > 0):
            raise DegenerateCurve("ellipse semi-axes must be positive")
        self.validate()

    def derivative(self, s, order=0):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        ph = s + order * np.pi / 2
        local = np.stack([self.a * np.cos(ph), self.b * np.sin(ph)], axis=-1)
        out = local @ _rot(self.angle).T
        if order == 0:
            out = out + np.asarray(self.center)
        return out

    def translated(self, z):
        return Ellipse(np.asarray(self.center) + np.asarray(z), self.a, self.b, self.angle, self.n)

    def scaled(self, lam):
        return Ellipse(lam * np.asarray(self.center), lam * self.a, lam * self.b, self.angle, self.n)

    def rotated(self, theta):
        return Ellipse(_rot(theta) @ np.asarray(self.center), self.a, self.b,
                       self.angle + theta, self.n)

    def with_samples(self, n):
        return Ellipse(self.center, self.a, self.b, self.angle, n)

    def to_spec(self):
        return {"kind": "ellipse", "center": list(self.center), "a": self.a, "b": self.b,
                "angle": self.angle, "n": self.n}


def _pack(a, b):
    out = [a[0]]
    for k in range(1, len(a)):
        out += [a[k], b[k]]
    return out


def _unpack(c):
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or len(c) % 2 != 1:
        raise DegenerateCurve("fourier coefficients must be a0, a1, b1, a2, b2, ...")
    a = np.concatenate([[c[0]], c[1::2]])
    b = np.concatenate([[0.0], c[2::2]])
    return a, b


@dataclass(frozen=True, eq=False)
class FourierCurve(ReferenceCurve):
    """Band-limited curve; ``cx``, ``cy`` hold a0, a1, b1, a2, b2, ... ."""

    cx: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))
    cy: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    n: int = 128
    kind = "fourier"

    def __post_init__(self):
        ax, bx = _unpack(self.cx)
        ay, by = _unpack(self.cy)
        if len(ax) != len(ay):
            raise DegenerateCurve("cx and cy must have the same length")
        object.__setattr__(self, "_coef", (ax, bx, ay, by))
        self.validate()

    @property
    def bandwidth(self) -> int:
        return len(self._coef[0]) - 1

    def derivative(self, s, order=0):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        ax, bx, ay, by = self._coef
        k = np.arange(len(ax), dtype=float)
        ph = np.outer(s, k) + order * np.pi / 2
        c, sn = np.cos(ph), np.sin(ph)
        w = k**order
        if order > 0:
            w[0] = 0.0
        x = c @ (w * ax) + sn @ (w * bx)
        y = c @ (w * ay) + sn @ (w * by)
        return np.stack([x, y], axis=-1)

    @classmethod
    def from_samples(cls, points: np.ndarray, n: int | None = None, cutoff: int | None = None):
        """Trigonometric interpolant of uniformly sampled points.

        ``cutoff`` keeps modes ``k <= cutoff``; with ``cutoff >= len(points)//2``
        the interpolant passes exactly through the samples.
        """
        points = np.asarray(points, dtype=float)
        m = len(points)
        n = m if n is None else n
        kmax = m // 2 if cutoff is None else min(cutoff, m // 2)
        coefs = []
        for comp in range(2):
            X = np.fft.rfft(points[:, comp]) / m
            a = 2 * X.real
            b = -2 * X.imag
            a[0] = X[0].real
            b[0] = 0.0
            if m % 2 == 0:
                a[m // 2] = X[m // 2].real
                b[m // 2] = 0.0
            coefs.append(_pack(a[: kmax + 1], b[: kmax + 1]))
        return cls(np.array(coefs[0]), np.array(coefs[1]), n)

    def _transform(self, mat=None, shift=None, lam=1.0):
        ax, bx, ay, by = self._coef
        A = np.stack([ax, ay]) * lam
        B = np.stack([bx, by]) * lam
        if mat is not None:
            A, B = mat @ A, mat @ B
        if shift is not None:
            A[:, 0] += np.asarray(shift, dtype=float)
        return FourierCurve(np.array(_pack(A[0], B[0])), np.array(_pack(A[1], B[1])), self.n)

    def translated(self, z):
        return self._transform(shift=z)

    def scaled(self, lam):
        return self._transform(lam=lam)

    def rotated(self, theta):
        return self._transform(mat=_rot(theta))

    def with_samples(self, n):
        return FourierCurve(self.cx, self.cy, n)

    def to_spec(self):
        return {"kind": "fourier", "cx": [float(v) for v in self.cx],
                "cy": [float(v) for v in self.cy], "n": self.n}


def curve_frame(curve: ReferenceCurve, s: float):
    """Point, unit tangent, outward normal and curvature at a single parameter."""
    p, t, nrm, k = curve.frame(s)
    return p[0], t[0], nrm[0], float(k[0])


# -- reach ---------------------------------------------------------------------

def _max_abs_curvature(curve: ReferenceCurve, m: int) -> float:
    from scipy.optimize import minimize_scalar

    s = nodes(m)
    k = np.abs(curve.frame(s)[3])
    i = int(np.argmax(k))
    h = TWO_PI / m
    res = minimize_scalar(lambda t: -abs(curve.frame(t)[3][0]),
                          bounds=(s[i] - h, s[i] + h), method="bounded",
                          options={"xatol": 1e-12})
    return max(float(k[i]), -float(res.fun))


def _bottleneck(curve: ReferenceCurve, m: int) -> float:
    """Smallest distance between doubly-critical pairs (local minima of |g(s)-g(t)|)."""
    s = nodes(m)
    p = curve.point(s)
    d2 = np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=-1)
    is_min = np.ones_like(d2, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= d2 <= np.roll(np.roll(d2, di, axis=0), dj, axis=1)
    np.fill_diagonal(is_min, False)
    ii, jj = np.nonzero(np.triu(is_min, 1))
    if len(ii) == 0:
        return np.inf
    order = np.argsort(d2[ii, jj])[:32]
    best = np.inf
    for i, j in zip(ii[order], jj[order]):
        a, b = s[i], s[j]
        for _ in range(30):
            ga, gb = curve.point(a)[0], curve.point(b)[0]
            da1, db1 = curve.derivative(a, 1)[0], curve.derivative(b, 1)[0]
            da2, db2 = curve.derivative(a, 2)[0], curve.derivative(b, 2)[0]
            d = ga - gb
            F = np.array([d @ da1, -(d @ db1)])
            J = np.array([[da1 @ da1 + d @ da2, -(db1 @ da1)],
                          [-(da1 @ db1), db1 @ db1 - d @ db2]])
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            step = np.clip(step, -TWO_PI / m, TWO_PI / m)
            a, b = a + step[0], b + step[1]
            if np.max(np.abs(step)) < 1e-14:
                break
        dist = float(np.linalg.norm(curve.point(a)[0] - curve.point(b)[0]))
        if dist > 1e-9 * curve.scale:
            best = min(best, dist)
    return best


def reach(curve: ReferenceCurve, samples: int | None = None) -> float:
    """Largest collar half-width on which nearest-point projection is unique.

    ``min(1/max|kappa|, bottleneck/2)``; closed forms for circles and
    ellipses, dense sampling plus Newton refinement for Fourier curves.
    """
    cached = getattr(curve, "_reach_cache", None)
    if cached is not None and samples is None:
        return cached
    if isinstance(curve, Circle):
        r = float(curve.radius)
    elif isinstance(curve, Ellipse):
        lo, hi = sorted((curve.a, curve.b))
        r = float(lo * lo / hi)
    else:
        m = samples or max(4 * curve.n, 512)
        kmax = _max_abs_curvature(curve, m)
        r = min(1.0 / kmax if kmax > 0 else np.inf, 0.5 * _bottleneck(curve, m))
    if samples is None:
        object.__setattr__(curve, "_reach_cache", r)
    return r


# -- collar --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Collar:
    """Tubular neighborhood of half-width ``delta``; needs ``4*delta < reach``."""

    curve: ReferenceCurve
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DegenerateCurve("collar half-width must be positive")
        r = reach(self.curve)
        if not 4 * self.delta < r:
            raise DegenerateCurve(f"4*delta={4 * self.delta:.6g} must be below reach={r:.6g}")

    @classmethod
    def default(cls, curve: ReferenceCurve) -> "Collar":
        return cls(curve, reach(curve) / 8)

    @property
    def width(self) -> float:
        return 4 * self.delta


def _project_params(curve: ReferenceCurve, pts: np.ndarray, s0: np.ndarray):
    """Newton on the stationarity <y - gamma(s), gamma'(s)> = 0 from ``s0``."""
    s = s0.copy()
    h = TWO_PI / curve.n
    tol = 1e-13 * curve.scale
    converged = np.zeros(len(s), dtype=bool)
    active = np.ones(len(s), dtype=bool)
    for _ in range(PROJECT_MAX_ITER):
        if not active.any():
            break
        sa = s[active]
        r = curve.point(sa) - pts[active]
        g1 = curve.derivative(sa, 1)
        g2 = curve.derivative(sa, 2)
        f = _dot(r, g1)
        fp = _dot(g1, g1) + _dot(r, g2)
        step = np.where(fp > 0, -f / np.where(fp > 0, fp, 1.0), -np.sign(f) * h)
        step = np.clip(step, -2 * h, 2 * h)
        sa = sa + step
        s[active] = sa
        done = (np.abs(f) <= tol * np.sqrt(_dot(g1, g1))) | (np.abs(step) < 1e-15)
        idx = np.flatnonzero(active)
        converged[idx[done]] = True
        active[idx[done]] = False
    return np.mod(s, TWO_PI), converged


def collar_coordinates(collar: Collar, pts):
    """Vectorized collar coordinates.

    Returns ``(s, lam, in_collar)``; ``s`` and ``lam`` are meaningful only
    where ``in_collar`` is true. Raises NewtonFailure if a point inside the
    collar cannot be projected.
    """
    curve = collar.curve
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    d = np.linalg.norm(pts[:, None, :] - curve.points[None, :, :], axis=-1)
    j = np.argmin(d, axis=1)
    dmin = d[np.arange(len(pts)), j]
    exact = dmin == 0.0
    near = (dmin < collar.width) & ~exact
    s = curve.s[j].astype(float)
    lam = np.full(len(pts), np.nan)
    lam[exact] = 0.0
    if near.any():
        sp, ok = _project_params(curve, pts[near], s[near])
        if not ok.all():
            raise NewtonFailure("collar projection did not converge; collar too wide?")
        foot, _, nrm, _ = curve.frame(sp)
        s[near] = sp
        lam[near] = _dot(pts[near] - foot, nrm)
    in_collar = (near | exact) & (np.abs(np.nan_to_num(lam, nan=np.inf)) < collar.width)
    return s, lam, in_collar


def collar_project(collar: Collar, y):
    """Collar coordinates ``(s, lam)`` of one point, ``y = gamma(s) + lam n(s)``."""
    s, lam, inside = collar_coordinates(collar, np.asarray(y, dtype=float)[None, :])
    if not inside[0]:
        raise OutsideCollar(f"point {tuple(np.ravel(y))} is not within 4*delta of the curve")
    return float(s[0]), float(lam[0])
