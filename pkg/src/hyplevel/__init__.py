"""Level sets of holomorphic self-maps of the unit disc.

Trace the boundary of {|f|^2 - lam |z|^2 + lam - 1 > 0}, evaluate its
Euclidean and hyperbolic curvature, measure the enclosed region in the
Poincare metric, and check curvature bounds along the way.
"""
from .errors import (BoundaryNotFound, DomainError, DSLParseError, HyplevelError,
                     InfinitePerimeter, NoConvergence, OpenCurve, RequirementMismatch)
from .holomap import (BlaschkeProduct, Compose, Constant, HoloMap, Identity, MaMindaG,
                      MaMindaK, Mobius, NegMobiusNeg, Product, Rotation, Scale, ScalarMul,
                      blaschke, evaluate, f_alpha, hyperbolic_derivatives)
from .dsl import parse
from .problem import LevelProblem, u_value, u_wirtinger
from .levelset import TraceOptions, TracedCurve, find_boundary_seed, trace, trace_problem
from .curvature import cross_validate, kh_implicit, kh_parametric
from .fixedpoint import FixedPointMap, c_quantity, p_of_w, psi, psi_prime
from .bounds import BoundReport, evaluate_bound, full_report
from .measures import MeasureSet, area_h, measure, perimeter_h, total_kh
from .convexity import certify, ke_at_pi_closed_form, radius_of_convexity

__version__ = "0.1.0"
