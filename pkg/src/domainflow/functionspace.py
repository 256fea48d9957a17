"""Scalar fields on reference curves and their spectral calculus.

A :class:`PeriodicScalarField` stores ``n`` samples at the uniform nodes of its
carrying curve and is read as the trigonometric interpolant of those samples.
Derivatives in ``spectral_derivative`` are with respect to the curve parameter;
Hölder norms use arclength derivatives and arclength distances so that they do
not depend on how the curve is parameterized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import OrderTooHigh
from .geometry import TWO_PI, ReferenceCurve

MAX_ORDER = 4


@dataclass(frozen=True, eq=False)
class PeriodicScalarField:
    curve: ReferenceCurve
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.curve.n,):
            raise ValueError(f"field has {v.shape} samples, curve has {self.curve.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, curve, f: Callable) -> "PeriodicScalarField":
        return cls(curve, f(curve.s))

    @classmethod
    def constant(cls, curve, c: float) -> "PeriodicScalarField":
        return cls(curve, np.full(curve.n, float(c)))

    @classmethod
    def from_fourier(cls, curve, a, b=()) -> "PeriodicScalarField":
        """``a[0] + sum a[k] cos(ks) + b[k-1] sin(ks)``."""
        s = curve.s
        v = np.full(curve.n, float(a[0]) if len(a) else 0.0)
        for k, ak in enumerate(a[1:], start=1):
            v += ak * np.cos(k * s)
        for k, bk in enumerate(b, start=1):
            v += bk * np.sin(k * s)
        return cls(curve, v)

    @property
    def n(self) -> int:
        return self.curve.n

    # -- arithmetic (samplewise; products alias above Nyquist) --------------
    def _other(self, o):
        if isinstance(o, PeriodicScalarField):
            if o.n != self.n:
                raise ValueError("fields live on different grids")
            return o.values
        return o

    def __add__(self, o):
        return PeriodicScalarField(self.curve, self.values + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return PeriodicScalarField(self.curve, self.values - self._other(o))

    def __rsub__(self, o):
        return PeriodicScalarField(self.curve, self._other(o) - self.values)

    def __mul__(self, o):
        return PeriodicScalarField(self.curve, self.values * self._other(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return PeriodicScalarField(self.curve, self.values / self._other(o))

    def __neg__(self):
        return PeriodicScalarField(self.curve, -self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    # -- spectral representation --------------------------------------------
    @cached_property
    def _rfft(self) -> np.ndarray:
        return np.fft.rfft(self.values) / self.n

    def __call__(self, s, order: int = 0) -> np.ndarray:
        return eval_field(self, s, order)

    def on(self, curve: ReferenceCurve) -> "PeriodicScalarField":
        """Resample onto the same curve geometry with a different node count."""
        return PeriodicScalarField(curve, eval_field(self, curve.s))


def _mode_weights(n: int, order: int) -> np.ndarray:
    k = np.arange(n // 2 + 1, dtype=float)
    w = np.where(k == 0, 1.0, 2.0).astype(complex)
    if n % 2 == 0:
        w[-1] = 1.0
        if order % 2:
            w[-1] = 0.0
    return w * (1j * k) ** order


def eval_field(field: PeriodicScalarField, s, order: int = 0) -> np.ndarray:
    """Trigonometric interpolant (or its ``order``-th derivative) at ``s``.

    Parameters that coincide bit-for-bit with a node return the exact sample.
    """
    if order > MAX_ORDER:
        raise OrderTooHigh(f"derivative order {order} > {MAX_ORDER}")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    n = field.n
    c = field._rfft * _mode_weights(n, order)
    k = np.arange(len(c))
    out = np.real(np.exp(1j * np.outer(s, k)) @ c)
    idx = np.rint(s * n / TWO_PI).astype(int) % n
    hit = s == field.curve.s[idx]
    if hit.any():
        base = field.values if order == 0 else spectral_derivative(field, order).values
        out[hit] = base[idx[hit]]
    return out


def spectral_derivative(field: PeriodicScalarField, order: int = 1) -> PeriodicScalarField:
    """Parameter derivative via Fourier multipliers ``(ik)**order``."""
    if order > MAX_ORDER:
        raise OrderTooHigh(f"derivative order {order} > {MAX_ORDER}")
    if order == 0:
        return field
    n = field.n
    X = np.fft.rfft(field.values)
    k = np.arange(len(X), dtype=float)
    Y = X * (1j * k) ** order
    if n % 2 == 0 and order % 2:
        Y[-1] = 0.0
    return PeriodicScalarField(field.curve, np.fft.irfft(Y, n))


def antiderivative(field: PeriodicScalarField) -> PeriodicScalarField:
    """Mean-zero antiderivative of the mean-zero part of ``field``."""
    n = field.n
    X = np.fft.rfft(field.values)
    k = np.arange(len(X), dtype=float)
    Y = np.zeros_like(X)
    Y[1:] = X[1:] / (1j * k[1:])
    if n % 2 == 0:
        Y[-1] = 0.0
    return PeriodicScalarField(field.curve, np.fft.irfft(Y, n))


def arc_derivative(field: PeriodicScalarField, order: int = 1) -> PeriodicScalarField:
    """Derivative with respect to arclength, ``(|gamma'|**-1 d/ds)**order``."""
    if order > MAX_ORDER:
        raise OrderTooHigh(f"derivative order {order} > {MAX_ORDER}")
    out = field
    for _ in range(order):
        out = spectral_derivative(out, 1) / field.curve.speed
    return out


@dataclass(frozen=True)
class HolderIndex:
    m: int
    mu: float = 0.0

    def __post_init__(self):
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError("m must be a nonnegative integer")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError("mu must lie in [0, 1]")


def holder_seminorm(values: np.ndarray, curve: ReferenceCurve, mu: float) -> float:
    """Discrete mu-Hölder seminorm over all node pairs, arclength distance."""
    dist = curve.arc_distance
    diff = np.abs(values[:, None] - values[None, :])
    mask = dist > 0
    return float(np.max(diff[mask] / dist[mask] ** mu))


def holder_norm(field: PeriodicScalarField, idx: HolderIndex | tuple) -> float:
    """Sampled C^{m+mu} norm: sum of sup-norms of arclength derivatives up to m,
    plus (mu > 0) the discrete mu-Hölder seminorm of the m-th derivative.

    A lower bound of the true norm, converging as the sample count grows.
    mu = 1 is the Lipschitz seminorm.
    """
    if not isinstance(idx, HolderIndex):
        idx = HolderIndex(*idx)
    if idx.m > MAX_ORDER:
        raise OrderTooHigh(f"Hölder order {idx.m} > {MAX_ORDER}")
    total = 0.0
    d = field
    for j in range(idx.m + 1):
        if j:
            d = arc_derivative(d, 1)
        total += d.sup()
    if idx.mu > 0:
        total += holder_seminorm(d.values, field.curve, idx.mu)
    return total


# -- superposition operator rho -> rho(f(., rho(.))) --------------------------

@dataclass(frozen=True)
class ShiftMap:
    """A smooth map ``(s, r) -> f(s, r)`` into the curve parameter, with its
    first two partial derivatives in ``r``."""

    f: Callable
    df_dr: Callable
    d2f_dr2: Callable


TRANSLATION_SHIFT = ShiftMap(
    f=lambda s, r: s + r,
    df_dr=lambda s, r: np.ones_like(r),
    d2f_dr2=lambda s, r: np.zeros_like(r),
)


def superposition(rho: PeriodicScalarField, shift: ShiftMap = TRANSLATION_SHIFT) -> PeriodicScalarField:
    """``F(rho)(s) = rho(f(s, rho(s)))`` sampled at the nodes."""
    s = rho.curve.s
    return PeriodicScalarField(rho.curve, eval_field(rho, shift.f(s, rho.values)))


def composition_map_derivative(rho: PeriodicScalarField, eta: PeriodicScalarField,
                               order: int = 1,
                               shift: ShiftMap = TRANSLATION_SHIFT) -> PeriodicScalarField:
    """First derivative ``F'(rho) eta`` or second derivative ``F''(rho)(eta, eta)``
    of the superposition operator, by the closed-form chain rule."""
    if order not in (1, 2):
        raise OrderTooHigh("composition derivative is available for order 1 or 2")
    s = rho.curve.s
    r = rho.values
    fs = shift.f(s, r)
    f1 = shift.df_dr(s, r)
    e = eta.values
    if order == 1:
        out = eval_field(rho, fs, 1) * f1 * e + eval_field(eta, fs)
    else:
        f2 = shift.d2f_dr2(s, r)
        out = (eval_field(rho, fs, 2) * (f1 * e) ** 2
               + eval_field(rho, fs, 1) * f2 * e * e
               + 2 * eval_field(eta, fs, 1) * f1 * e)
    return PeriodicScalarField(rho.curve, out)


def evaluation_bound(eta1: PeriodicScalarField, s1: float, eta2: PeriodicScalarField, s2: float,
                     family_norm: float) -> tuple[float, float]:
    """Left and right side of the Lipschitz bound for the evaluation map,

    ``|eta1(s1) - eta2(s2)| <= (1 + sup_U ||eta||_{C^{0+1}}) (arc(s1, s2) + sup|eta1 - eta2|)``.
    """
    curve = eta1.curve
    lhs = abs(float(eval_field(eta1, s1)[0] - eval_field(eta2, s2)[0]))
    arc = _arc_between(curve, s1, s2)
    rhs = (1.0 + family_norm) * (arc + (eta1 - eta2).sup())
    return lhs, rhs


def _arc_between(curve: ReferenceCurve, s1: float, s2: float) -> float:
    from scipy.integrate import quad

    a, b = sorted((float(s1) % TWO_PI, float(s2) % TWO_PI))
    speed = lambda t: float(np.linalg.norm(curve.derivative(t, 1)[0]))
    inner = quad(speed, a, b, limit=200)[0]
    return min(inner, curve.length - inner)
