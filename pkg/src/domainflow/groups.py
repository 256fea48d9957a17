"""Translations, dilations about the origin, and rotations acting on domains.

``act`` moves the chart along with the domain, which keeps every
representation exactly covariant. ``reexpress`` reads the moved domain back in
the original chart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import Chart, DomainRep, transition
from .functionspace import PeriodicScalarField
from .geometry import Collar

RANK_TOL = 1e-6


@dataclass(frozen=True)
class GroupElement:
    kind: str
    value: tuple | float

    def __post_init__(self):
        if self.kind == "translate":
            v = tuple(float(c) for c in np.ravel(self.value))
            if len(v) != 2:
                raise ValueError("translation needs a 2-vector")
            object.__setattr__(self, "value", v)
        elif self.kind == "dilate":
            if not float(self.value) > 0:
                raise ValueError("dilation factor must be positive")
            object.__setattr__(self, "value", float(self.value))
        elif self.kind == "rotate":
            object.__setattr__(self, "value", float(self.value))
        else:
            raise ValueError(f"unknown group element kind {self.kind!r}")

    @classmethod
    def translation(cls, z) -> "GroupElement":
        return cls("translate", z)

    @classmethod
    def dilation(cls, lam: float) -> "GroupElement":
        return cls("dilate", lam)

    @classmethod
    def rotation(cls, angle: float) -> "GroupElement":
        return cls("rotate", angle)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        """Composition within one subgroup: ``(g @ h)`` acts as ``g`` after ``h``."""
        if self.kind != other.kind:
            raise ValueError("only elements of the same subgroup compose here")
        if self.kind == "translate":
            return GroupElement.translation(np.add(self.value, other.value))
        if self.kind == "dilate":
            return GroupElement.dilation(self.value * other.value)
        return GroupElement.rotation(self.value + other.value)

    def to_spec(self) -> dict:
        v = list(self.value) if self.kind == "translate" else self.value
        return {self.kind: v}


def act_chart(g: GroupElement, chart: Chart) -> Chart:
    curve = chart.curve
    if g.kind == "translate":
        return Chart(Collar(curve.translated(g.value), chart.delta))
    if g.kind == "dilate":
        return Chart(Collar(curve.scaled(g.value), g.value * chart.delta))
    return Chart(Collar(curve.rotated(g.value), chart.delta))


def act(g: GroupElement, dom: DomainRep) -> DomainRep:
    """The transformed domain in the transformed chart."""
    chart = act_chart(g, dom.chart)
    values = dom.rho.values * g.value if g.kind == "dilate" else dom.rho.values
    return DomainRep(chart, PeriodicScalarField(chart.curve, values))


def reexpress(g: GroupElement, dom: DomainRep, check_admissible: bool = False) -> PeriodicScalarField:
    """Rho of ``g`` applied to ``dom``, written over the original chart.

    Only collar membership is required by default; the transformed domain may
    sit farther from the base curve than the C^1 bound allows.
    """
    return transition(act(g, dom), dom.chart, check_admissible)


def _element(column: str, t: float) -> GroupElement:
    if column == "z1":
        return GroupElement.translation((t, 0.0))
    if column == "z2":
        return GroupElement.translation((0.0, t))
    if column == "lam":
        return GroupElement.dilation(1.0 + t)
    if column == "angle":
        return GroupElement.rotation(t)
    raise ValueError(f"unknown Jacobian column {column!r}")


def action_jacobian(dom: DomainRep, columns=("z1", "z2", "lam"), h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian of the group parameters -> reexpressed rho, ``(n, len(columns))``."""
    step = h * dom.scale
    cols = []
    for c in columns:
        hc = h if c in ("lam", "angle") else step
        plus = reexpress(_element(c, hc), dom).values
        minus = reexpress(_element(c, -hc), dom).values
        cols.append((plus - minus) / (2 * hc))
    return np.stack(cols, axis=1)


def action_jacobian_rank(dom: DomainRep, columns=("z1", "z2", "lam"), h: float = 1e-5,
                         return_singular_values: bool = False):
    """Numerical rank: singular values above ``1e-6`` times the largest."""
    sv = np.linalg.svd(action_jacobian(dom, columns, h), compute_uv=False)
    rank = int(np.sum(sv > RANK_TOL * sv[0])) if sv[0] > 0 else 0
    return (rank, sv) if return_singular_values else rank
