from .cocycle import (
    Cocycle,
    birkhoff_steps,
    birkhoff_sum,
    evaluate,
    orbit_sum,
    skew_step,
    truncation_certificate,
    truncation_perturbation,
)
from .construction import (
    ConstructionError,
    ConstructionResult,
    ConstructionStep,
    construct_inseparable,
)
from .distances import DistanceBounds, SampleSpec, holder_distance, sup_distance
from .functions import (
    ZERO,
    Bump,
    BumpSum,
    Coboundary,
    Constant,
    CoordinateFunction,
    FunctionSum,
    TrigPoly,
)
from .periodic_data import (
    DEFAULT_ENUMERATION_BUDGET,
    EnumerationBudgetError,
    PeriodicData,
    PeriodicDataEntry,
    enumerate_orbits,
    orbit_weight,
    periodic_data,
    select_orbits,
)
from .serde import (
    cocycle_from_dict,
    cocycle_to_dict,
    load_cocycle,
    save_cocycle,
    write_periodic_data_csv,
)
