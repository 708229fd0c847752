from .cli import cli_dispatch, main, parse_matrix
from .config import (
    CAT_MAP,
    ClosingConfig,
    CocycleSource,
    ConfigError,
    ExperimentConfig,
    PerturbationConfig,
    PeriodicConfig,
    SimulationConfig,
    WeakMixingConfig,
)
from .report import Report, Section, StageResult, StageStatus
from .runner import STAGES, ExperimentRunner, required_stages, run, stage_seed
