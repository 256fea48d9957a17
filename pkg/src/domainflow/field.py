"""Interior Laplace Dirichlet solver and the Hele-Shaw normal velocity.

The harmonic function is written as a single-layer potential plus a constant,
``u = S sigma + c`` with ``int sigma ds = 0``. The extra constant and constraint
remove the degeneracy of the first-kind equation on curves of logarithmic
capacity one. The log singularity of the kernel is integrated with Kress's
trigonometric product rule, which keeps the Nystrom scheme spectrally accurate.
The interior normal derivative follows from the jump relation
``d_n u = K' sigma + sigma / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve

from .charts import DomainRep
from .errors import DegenerateCurve, SingularSystem
from .functionspace import PeriodicScalarField
from .geometry import TWO_PI, _cross, _dot, nodes, rotate_minus_90

COND_LIMIT = 1e12
GAUSS_BONNET_TOL = 1e-8
MIN_N = 32


def _spectral_d(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Parameter derivative of periodic samples along axis 0, Nyquist zeroed for odd orders."""
    n = values.shape[0]
    X = np.fft.rfft(values, axis=0)
    k = np.arange(X.shape[0], dtype=float)
    mult = (1j * k) ** order
    if n % 2 == 0 and order % 2:
        mult[-1] = 0.0
    return np.fft.irfft(X * mult.reshape((-1,) + (1,) * (values.ndim - 1)), n, axis=0)


@dataclass(frozen=True, eq=False)
class BoundaryDiscretization:
    """Samples of a closed boundary at uniform parameters."""

    points: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    speed: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray
    curvature: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def s(self) -> np.ndarray:
        return nodes(self.n)

    @classmethod
    def from_points(cls, points: np.ndarray) -> "BoundaryDiscretization":
        points = np.asarray(points, dtype=float)
        d1 = _spectral_d(points, 1)
        d2 = _spectral_d(points, 2)
        speed = np.hypot(d1[:, 0], d1[:, 1])
        scale = np.ptp(points, axis=0).max()
        if np.any(speed < 1e-12 * scale):
            raise DegenerateCurve("boundary parameterization is singular")
        tangents = d1 / speed[:, None]
        curvature = _cross(d1, d2) / speed**3
        weights = (TWO_PI / len(points)) * speed
        bd = cls(points, d1, d2, speed, tangents, rotate_minus_90(tangents), curvature, weights)
        total = float(np.sum(curvature * weights))
        if abs(total - TWO_PI) > GAUSS_BONNET_TOL:
            raise DegenerateCurve(f"total curvature {total:.12g} differs from 2*pi")
        return bd

    @property
    def area(self) -> float:
        return 0.5 * float(np.sum(_cross(self.points, self.d1))) * TWO_PI / self.n

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.weights))

    @property
    def centroid(self) -> np.ndarray:
        """Area centroid from the boundary, ``(1/2A) sum (x^2 n_x, y^2 n_y) ds``."""
        moments = np.sum(self.points**2 * self.normals * self.weights[:, None], axis=0)
        return moments / (2.0 * self.area)


def boundary_geometry(dom: DomainRep) -> BoundaryDiscretization:
    """Spectral frame and curvature of the offset curve ``theta(s_j)``."""
    return BoundaryDiscretization.from_points(dom.points)


def area(dom: DomainRep) -> float:
    bd = dom if isinstance(dom, BoundaryDiscretization) else boundary_geometry(dom)
    return bd.area


def perimeter(dom: DomainRep) -> float:
    bd = dom if isinstance(dom, BoundaryDiscretization) else boundary_geometry(dom)
    return bd.perimeter


def centroid(dom: DomainRep) -> np.ndarray:
    bd = dom if isinstance(dom, BoundaryDiscretization) else boundary_geometry(dom)
    return bd.centroid


@lru_cache(maxsize=16)
def _kress_weights(n: int) -> np.ndarray:
    """Circulant matrix ``R_ij`` integrating ``log(4 sin^2((t_i - t)/2)) f(t)``."""
    t = nodes(n)
    m = np.arange(1, n // 2)
    r = -(4 * np.pi / n) * (np.cos(np.outer(t, m)) @ (1.0 / m)) - (4 * np.pi / n**2) * np.cos(n / 2 * t)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    out = r[idx]
    out.setflags(write=False)
    return out


def single_layer_matrix(bd: BoundaryDiscretization) -> np.ndarray:
    """Nystrom matrix of ``S sigma (x_i) = int G(x_i, y) sigma(y) ds_y``, ``G = -log|x-y| / 2pi``."""
    n = bd.n
    t = bd.s
    diff = bd.points[:, None, :] - bd.points[None, :, :]
    dist2 = _dot(diff, diff)
    dt = t[:, None] - t[None, :]
    sin2 = 4.0 * np.sin(dt / 2) ** 2
    np.fill_diagonal(sin2, 1.0)
    smooth = 0.5 * np.log(np.where(np.eye(n, dtype=bool), 1.0, dist2) / sin2)
    np.fill_diagonal(smooth, np.log(bd.speed))
    mat = 0.5 * _kress_weights(n) + (TWO_PI / n) * smooth
    return -(1.0 / TWO_PI) * mat * bd.speed[None, :]


def adjoint_double_layer_matrix(bd: BoundaryDiscretization) -> np.ndarray:
    """Trapezoid matrix of ``K' sigma (x_i) = int d_{n_x} G(x_i, y) sigma(y) ds_y``."""
    diff = bd.points[:, None, :] - bd.points[None, :, :]
    dist2 = _dot(diff, diff)
    np.fill_diagonal(dist2, 1.0)
    ker = _dot(diff, bd.normals[:, None, :]) / dist2
    np.fill_diagonal(ker, 0.5 * bd.curvature)
    return -(1.0 / TWO_PI) * ker * bd.weights[None, :]


@dataclass(frozen=True)
class DirichletSolution:
    density: np.ndarray
    constant: float
    normal_derivative: np.ndarray
    residual: float
    condition: float


def _augmented(bd: BoundaryDiscretization) -> np.ndarray:
    n = bd.n
    a = np.zeros((n + 1, n + 1))
    a[:n, :n] = single_layer_matrix(bd)
    a[:n, n] = 1.0
    a[n, :n] = bd.weights
    return a


def solve_dirichlet_full(bd: BoundaryDiscretization, g) -> DirichletSolution:
    if bd.n < MIN_N:
        raise ValueError(f"the solver needs at least {MIN_N} boundary samples")
    g = np.asarray(g.values if isinstance(g, PeriodicScalarField) else g, dtype=float)
    n = bd.n
    a = _augmented(bd)
    anorm = np.linalg.norm(a, 1)
    lu, piv = lu_factor(a, check_finite=True)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if info != 0 or cond > COND_LIMIT:
        raise SingularSystem(f"boundary integral system condition estimate {cond:.3g}")
    sol = lu_solve((lu, piv), np.concatenate([g, [0.0]]))
    sigma, c = sol[:n], float(sol[n])
    residual = float(np.max(np.abs(a[:n, :n] @ sigma + c - g)))
    dn = adjoint_double_layer_matrix(bd) @ sigma + 0.5 * sigma
    return DirichletSolution(sigma, c, dn, residual, cond)


def solve_dirichlet(bd: BoundaryDiscretization, g, carrier=None) -> PeriodicScalarField | np.ndarray:
    """Interior normal derivative of the harmonic extension of ``g``.

    Returned as a field on ``carrier`` (a curve, or the curve of ``g`` when it
    is a field); a bare array otherwise.
    """
    dn = solve_dirichlet_full(bd, g).normal_derivative
    if carrier is None and isinstance(g, PeriodicScalarField):
        carrier = g.curve
    return dn if carrier is None else PeriodicScalarField(carrier, dn)


def heleshaw_field(dom: DomainRep, bd: BoundaryDiscretization | None = None) -> PeriodicScalarField:
    """Normal velocity ``d_n u`` with ``u`` harmonic and ``u = -kappa`` on the boundary."""
    bd = boundary_geometry(dom) if bd is None else bd
    return PeriodicScalarField(dom.curve, solve_dirichlet_full(bd, -bd.curvature).normal_derivative)
