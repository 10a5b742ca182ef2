"""Numerical laboratory for neutralized Bowen pressure.

Three independent routes to the same quantity on subshifts of finite
type and expanding circle maps:

  * truncated ball-cover costs and their critical exponents (cover),
  * mass-constrained cover exponents for a reference measure (cover,
    measures.katok_pressure),
  * sampled local pressure along measure-typical orbits (measures),

plus a max-flow construction of measures saturating the cover bound
(frostman) and a reporting harness that runs the grid, checks the
inequalities tying the routes together, and writes deterministic CSV
artifacts (harness).
"""

from .cover import (
    CoverProblem,
    FiveRResult,
    InstanceTooLargeError,
    KatokCost,
    NonBracketableError,
    PressureEstimate,
    SubcriticalFlowError,
    Target,
    TruncationError,
    ball_weight,
    brute_force_cover_cost,
    cover_cost,
    critical_exponent,
    five_r_subfamily,
    fractional_cover_lp,
    katok_cover_cost,
    weighted_cover_cost,
)
from .frostman import construct as frostman_construct
from .frostman import verify_bound as frostman_verify_bound
from .harness import VPConfig, baseline_expectations, vp_report
from .measures import (
    BernoulliMeasure,
    LebesgueMeasure,
    MarkovMeasure,
    TreeMeasure,
    bk_local,
    bk_pressure,
    katok_pressure,
    sample,
)
from .potentials import (
    AdditivePotential,
    CircleLipschitzPotential,
    CocyclePotential,
    TablePotential,
    tempered_report,
    variation,
)
from .systems import (
    Ball,
    CirclePoint,
    CircleSystem,
    Point,
    SymbolicSystem,
    bowen_distance,
    cylinder_length,
    neutralized_ball,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
