from .coverage import (
    CoverageReport,
    CoverageTracker,
    coverage,
    coverage_curve,
    write_coverage_curve_csv,
    write_first_hits_csv,
)
from .grid import COVERAGE_THRESHOLD, OVERFLOW, GridSpec
from .search import (
    SearchConfig,
    SearchResult,
    WeakMixingReport,
    sobol_starts,
    transitive_point_search,
    weak_mixing_diagnostic,
)
from .simulator import SkewProductSimulator, skew_orbit
from .state import SkewBatchState, SkewState
from .stop_conditions import (
    AllTargetsHitCondition,
    CompoundStopCondition,
    MaxStepsCondition,
    StopCondition,
)
