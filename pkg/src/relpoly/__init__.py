"""Exact two-terminal reliability polynomials and their geometry."""

from .geometry import (
    DiagonalPattern,
    cube_extrema,
    curve_report,
    curve_samples,
    diagonal_patterns,
    gradient,
    hessian_class,
    level_contains_variety,
    level_profile,
    verify_critical_family,
)
from .netmodel import Network, NetworkError, fixture, load_network, minimal_cuts, minimal_paths, parse_network
from .reliability import bruteforce_poly, bruteforce_value, from_min_cuts, from_min_paths, monte_carlo
from .roots import RealRoot, RootProfile, real_roots
from .ruling import (
    AffineLine,
    ZeroPattern,
    coefficient_system,
    complete_point,
    enumerate_branches,
    plausibility_report,
    probability_window,
    solve_directions,
    verify_line,
)
from .sqfree_poly import DensePoly, SqFreePoly

__version__ = "0.1.0"
