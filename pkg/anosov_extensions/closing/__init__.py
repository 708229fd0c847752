from .lemma import (
    DEFAULT_C_MAX,
    ClosingConstants,
    NearReturn,
    ShadowingResult,
    close_orbit,
    exact_orbit,
    find_near_returns,
    near_return_at,
    verify_shadowing,
    weight_closeness,
)
from .trials import (
    ApproximateWeight,
    ClosingSummary,
    ClosingTrial,
    approximate_weight,
    closing_trials,
    sample_near_returns,
    write_closing_trials_csv,
)
