"""Time-optimal navigation in planar flow fields with space-dependent ship
speed, solved through Randers-type Finsler norms.

A problem instance is the triple (h, W, speed): a Riemannian background, a
mild flow field, and the ship's own speed with |W|_h < speed <= 1.  The
package builds the travel-time norm of that data, extracts its geodesic
spray from exact forward-mode jets, integrates time-optimal paths with an
adaptive embedded Runge-Kutta pair, and provides indicatrix, reachable-set,
shooting, and transit-time comparison experiments on top, plus a CLI that
exports deterministic CSV and SVG artifacts.
"""

from .analysis import (CurveComparison, Indicatrix, ReachableSet,
                       ShootingResult, TransitComparison,
                       indicatrix_intersections, lemma_transit_comparison,
                       point_in_closed_curve, reachable_set, sample_indicatrix,
                       shoot_to_target)
from .config import ProblemConfig, load_problem, loads_problem
from .errors import (ConfigError, ConvexityError, DegeneracyError,
                     DegenerateVectorError, DomainError, ExpressionError,
                     ReconstructionError, ZermeloError)
from .expressions import parse_expression
from .fields import (ConvexityReport, LineSlice, MetricField, NavigationData,
                     Point2, Rect, ScalarField, Tangent2, VectorField,
                     euclidean_problem, heading_grid)
from .randers import (EffectiveWind, RandersDecomposition, RandersMetric,
                      SecondOrderJet, reconstruct_navigation, resultant_speed)
from .spray import (GeodesicState, InitialCondition, SprayField, StepControl,
                    Trajectory, initial_velocity, integrate_fan,
                    integrate_geodesic, path_time_integral, transit_time)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvexityError", "ConvexityReport", "CurveComparison",
    "DegeneracyError", "DegenerateVectorError", "DomainError",
    "EffectiveWind", "ExpressionError", "GeodesicState", "Indicatrix",
    "InitialCondition", "LineSlice", "MetricField", "NavigationData",
    "Point2", "ProblemConfig", "RandersDecomposition", "RandersMetric",
    "ReachableSet", "ReconstructionError", "Rect", "ScalarField",
    "SecondOrderJet", "ShootingResult", "SprayField", "StepControl",
    "Tangent2", "Trajectory", "TransitComparison", "VectorField",
    "ZermeloError", "euclidean_problem", "heading_grid",
    "indicatrix_intersections", "initial_velocity", "integrate_fan",
    "integrate_geodesic", "lemma_transit_comparison", "load_problem",
    "loads_problem", "parse_expression", "path_time_integral",
    "point_in_closed_curve", "reachable_set", "reconstruct_navigation",
    "resultant_speed", "sample_indicatrix", "shoot_to_target",
    "transit_time",
]
