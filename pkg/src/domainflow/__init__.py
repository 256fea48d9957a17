"""Planar domains as normal graphs over reference curves, and Hele-Shaw flow
tracked through chart changes."""

from .bundle import bundle_transition, hanzawa_inverse, hanzawa_map, pullback
from .charts import (Chart, DomainRep, boundary_hausdorff, boundary_point, is_admissible,
                     standard_chart, transition, transition_derivative)
from .errors import (ChartTangency, DegenerateCurve, DomainFlowError, NewtonFailure, NotInChart,
                     OrderTooHigh, OutsideCollar, OutsideDomain, SingularLinearization,
                     SingularSystem)
from .field import area, boundary_geometry, heleshaw_field, perimeter, solve_dirichlet
from .flow import FlowConfig, FlowState, chart_rate, simulate, step
from .functionspace import (HolderIndex, PeriodicScalarField, composition_map_derivative,
                            eval_field, holder_norm, spectral_derivative)
from .geometry import Circle, Collar, Ellipse, FourierCurve, collar_project, reach
from .groups import GroupElement, act, action_jacobian_rank, reexpress

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
