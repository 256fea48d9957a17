"""Randomized test configurations shared by the check suites and the tests."""

from __future__ import annotations

import numpy as np

from .charts import Chart, DomainRep, is_admissible, transition
from .errors import DomainFlowError
from .functionspace import PeriodicScalarField, holder_norm
from .geometry import Circle, Ellipse, FourierCurve

MAX_DRAWS = 50


def random_field(rng: np.random.Generator, curve, c1_target: float, modes: int = 4) -> PeriodicScalarField:
    """Random band-limited field scaled to a given C^1 norm."""
    a = rng.normal(size=modes + 1)
    b = rng.normal(size=modes)
    a[1:] /= np.arange(1, modes + 1)
    b /= np.arange(1, modes + 1)
    f = PeriodicScalarField.from_fourier(curve, a, b)
    return f * (c1_target / holder_norm(f, (1, 0)))


def random_ellipse(rng: np.random.Generator, n: int = 128) -> Ellipse:
    return Ellipse(tuple(rng.uniform(-0.1, 0.1, 2)), rng.uniform(1.0, 1.3), rng.uniform(0.85, 1.0),
                   rng.uniform(0, np.pi), n)


def random_domain(rng: np.random.Generator, n: int = 128, fill: float = 0.25) -> DomainRep:
    chart = Chart.over(random_ellipse(rng, n))
    return DomainRep(chart, random_field(rng, chart.curve, fill * chart.delta))


def perturbed_curve(rng: np.random.Generator, curve: Ellipse, size: float = 0.004):
    """A nearby curve: the ellipse moved slightly, sometimes with a mode-3 ripple."""
    moved = Ellipse(tuple(np.add(curve.center, rng.uniform(-size, size, 2))),
                    curve.a + rng.uniform(-size, size), curve.b + rng.uniform(-size, size),
                    curve.angle + rng.uniform(-size, size), curve.n)
    if rng.random() < 0.5:
        return moved
    bump = size * np.cos(3 * moved.s + rng.uniform(0, 2 * np.pi))
    pts = moved.points + bump[:, None] * moved.normals
    return FourierCurve.from_samples(pts, n=curve.n, cutoff=curve.n // 4)


def overlapping_pair(rng: np.random.Generator, n: int = 128) -> tuple[DomainRep, Chart]:
    """A domain and a second chart in which it is admissible (rejection sampled)."""
    for _ in range(MAX_DRAWS):
        dom = random_domain(rng, n)
        chart2 = Chart.over(perturbed_curve(rng, dom.curve))
        try:
            rho2 = transition(dom, chart2)
        except DomainFlowError:
            continue
        if is_admissible(chart2, rho2)[0]:
            return dom, chart2
    raise RuntimeError("could not draw an overlapping chart pair")


def perturbed_disk(k: int, eps: float, n: int = 256, radius: float = 1.0, center=(0.0, 0.0)) -> DomainRep:
    """``r = radius + eps cos(k s)`` written over the circle chart."""
    circle = Circle(center, radius, 0.0, n)
    chart = Chart.over(circle)
    return DomainRep(chart, PeriodicScalarField.from_function(circle, lambda s: eps * np.cos(k * s)))
