from .automorphism import (
    HYPERBOLICITY_TOL,
    HyperbolicityFailure,
    HyperbolicityReport,
    NonHyperbolicError,
    ToralAutomorphism,
    apply,
    apply_batch,
    apply_exact,
    check_hyperbolic,
)
from .measure import ChiSquareResult, uniformity_chi_square
from .periodic import (
    PeriodicOrbit,
    count_points,
    fixed_points_of_power,
    grid_periodic_points,
    minimal_period_counts,
    orbit_of,
    periodic_points,
)
from .points import (
    RationalTorusPoint,
    TorusPoint,
    exact_torus_distance_squared,
    torus_distance,
    torus_distance_batch,
)
