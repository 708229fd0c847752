from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, TypeVar

from ..closing.lemma import DEFAULT_C_MAX
from ..cocycles.construction import DEFAULT_ORBIT_BUDGET
from ..cocycles.distances import SampleSpec
from ..cocycles.periodic_data import DEFAULT_ENUMERATION_BUDGET
from ..skew.grid import GridSpec
from ..skew.search import SearchConfig
from ..torus._integer import IntMatrixT, as_int_matrix
from ..util.serde import PathT, read_json

CONFIG_SCHEMA_VERSION = 1

CAT_MAP = ((2, 1), (1, 1))

T = TypeVar("T")


class ConfigError(ValueError):
    """
    Raised when an experiment configuration is invalid. All violations
    found are reported at once.
    """

    def __init__(self, violations: List[str]):
        super().__init__(
            "Invalid experiment configuration:\n"
            + "\n".join(f"  - {v}" for v in violations)
        )
        self.violations = violations


@dataclass
class CocycleSource:
    """
    Where the cocycle of an experiment comes from.

    :param kind:
        ``"construct"`` to build an inseparable cocycle, ``"file"`` to load
        one from JSON, or ``"zero"`` for the zero cocycle.
    :param levels:
        Number of coordinates of a constructed cocycle.
    :param n_max:
        Largest minimal period of the orbits used by the construction.
    :param path:
        Cocycle JSON file for ``"file"``.
    """

    kind: str = "construct"
    levels: int = 3
    n_max: int = DEFAULT_ORBIT_BUDGET
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("construct", "file", "zero"):
            raise ValueError(
                f"Cocycle source must be 'construct', 'file' or 'zero', was: {self.kind!r}"
            )
        if self.kind == "construct" and (self.levels < 1 or self.n_max < 1):
            raise ValueError("Constructed cocycles need positive levels and n_max")
        if self.kind == "file" and not self.path:
            raise ValueError("Cocycle source 'file' needs a path")


@dataclass
class PeriodicConfig:
    """
    Periodic data enumeration.

    :param n_max:
        Largest minimal period.
    :param budget:
        Largest number of fixed points enumerated for a single power.
    """

    n_max: int = 5
    budget: int = DEFAULT_ENUMERATION_BUDGET

    def __post_init__(self):
        if self.n_max < 1 or self.budget < 1:
            raise ValueError("Periodic n_max and budget must be positive")


@dataclass
class SimulationConfig:
    """
    Coverage simulation of orbits of ``(x, 0)``.

    :param steps:
        Trajectory length.
    :param starts:
        Number of Sobol start points.
    :param grid:
        Partition of the skew-product space. Defaults to the grid of the
        transitivity diagnostic.
    """

    steps: int = 10_000
    starts: int = 4
    grid: GridSpec = field(default_factory=GridSpec.transitivity_diagnostic)

    def __post_init__(self):
        if self.steps < 1 or self.starts < 1:
            raise ValueError("Simulation steps and starts must be positive")


@dataclass
class WeakMixingConfig:
    """
    Product-system coverage.

    :param budget:
        Number of steps.
    :param pairs:
        Number of start pairs.
    :param grid:
        Single-system grid of each factor.
    """

    budget: int = 10_000
    pairs: int = 4
    grid: GridSpec = field(default_factory=lambda: GridSpec(level=1, base_subdivisions=4, fiber_subdivisions=8))

    def __post_init__(self):
        if self.budget < 1 or self.pairs < 1:
            raise ValueError("Weak mixing budget and pairs must be positive")


@dataclass
class ClosingConfig:
    """
    Closing lemma trials.

    :param count:
        Number of sampled near-returns.
    :param n_range:
        Inclusive range of return times.
    :param eps_range:
        Range of return distances.
    :param c_max:
        Threshold for shadowing violations.
    """

    count: int = 100
    n_range: Tuple[int, int] = (1, 25)
    eps_range: Tuple[float, float] = (1e-4, 1e-2)
    c_max: float = DEFAULT_C_MAX

    def __post_init__(self):
        self.n_range = tuple(self.n_range)  # type: ignore
        self.eps_range = tuple(self.eps_range)  # type: ignore
        if self.count < 1:
            raise ValueError(f"Number of closing trials must be positive, was: {self.count}")
        if len(self.n_range) != 2 or not 1 <= self.n_range[0] <= self.n_range[1]:
            raise ValueError(f"Invalid return time range: {self.n_range}")
        if len(self.eps_range) != 2 or not 0 < self.eps_range[0] <= self.eps_range[1] < 0.5:
            raise ValueError(f"Invalid return distance range: {self.eps_range}")


@dataclass
class PerturbationConfig:
    """
    Truncation perturbations ``π_n ∘ f``.

    :param levels:
        Truncation levels ``n``.
    :param alpha:
        Hölder exponent of the Hölder distance.
    :param points_per_dim:
        Sample grid size per torus dimension.
    :param offsets:
        Pair offsets of the Hölder distance sample.
    :param random_points:
        Additional random sample points.
    """

    levels: Tuple[int, ...] = (1, 2)
    alpha: float = 1.0
    points_per_dim: int = 16
    offsets: Tuple[float, ...] = (0.1, 0.01, 0.001)
    random_points: int = 0

    def __post_init__(self):
        self.levels = tuple(self.levels)
        self.offsets = tuple(self.offsets)
        if any(n < 0 for n in self.levels):
            raise ValueError(f"Truncation levels must be non-negative, got: {self.levels}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"Hölder exponent must lie in (0, 1], was: {self.alpha}")

    def sample(self, seed: int) -> SampleSpec:
        return SampleSpec(
            points_per_dim=self.points_per_dim,
            offsets=self.offsets,
            random_points=self.random_points,
            seed=seed,
        )


@dataclass
class ExperimentConfig:
    """
    Configuration of an experiment run. Loaded from versioned JSON with
    :meth:`from_json`.
    """

    seed: int
    matrix: IntMatrixT
    cocycle: CocycleSource
    periodic: PeriodicConfig
    simulation: SimulationConfig
    search: SearchConfig
    weak_mixing: WeakMixingConfig
    closing: ClosingConfig
    perturbation: PerturbationConfig
    output_dir: Optional[str]

    def __init__(
        self,
        *,
        seed: int,
        matrix: IntMatrixT = CAT_MAP,
        cocycle: Optional[CocycleSource] = None,
        periodic: Optional[PeriodicConfig] = None,
        simulation: Optional[SimulationConfig] = None,
        search: Optional[SearchConfig] = None,
        weak_mixing: Optional[WeakMixingConfig] = None,
        closing: Optional[ClosingConfig] = None,
        perturbation: Optional[PerturbationConfig] = None,
        output_dir: Optional[str] = None,
    ):
        """
        :param seed:
            Seed of every random choice of the run. There is no default, so
            that runs are always reproducible.
        :param matrix:
            Integer matrix of the base map.
        :param cocycle:
            Source of the cocycle.
        :param periodic:
            Periodic data enumeration.
        :param simulation:
            Coverage simulation.
        :param search:
            Transitive point search. Its seed is derived from ``seed``.
        :param weak_mixing:
            Product-system coverage.
        :param closing:
            Closing lemma trials.
        :param perturbation:
            Truncation perturbations.
        :param output_dir:
            Directory for CSV and JSON outputs, ``None`` to write nothing.
        """
        self.seed = seed
        self.matrix = as_int_matrix(matrix)
        self.cocycle = cocycle or CocycleSource()
        self.periodic = periodic or PeriodicConfig()
        self.simulation = simulation or SimulationConfig()
        self.search = search or SearchConfig(budget=10_000, starts=8)
        self.weak_mixing = weak_mixing or WeakMixingConfig()
        self.closing = closing or ClosingConfig()
        self.perturbation = perturbation or PerturbationConfig()
        self.output_dir = output_dir

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        """
        Parse and validate a configuration.

        :raises ConfigError:
            Listing every violation found.
        """
        violations: List[str] = []

        def section(name: str, parse: Callable[[Mapping[str, Any]], T]) -> Optional[T]:
            value = data.get(name, {})
            if not isinstance(value, Mapping):
                violations.append(f"'{name}' must be an object")
                return None
            try:
                return parse(value)
            except (TypeError, ValueError) as e:
                violations.append(f"'{name}': {e}")
                return None

        if not isinstance(data, Mapping):
            raise ConfigError(["Configuration must be a JSON object"])

        if data.get("schema_version") != CONFIG_SCHEMA_VERSION:
            violations.append(
                f"'schema_version' must be {CONFIG_SCHEMA_VERSION}, was: {data.get('schema_version')!r}"
            )
        seed = data.get("seed")
        if not isinstance(seed, int) or isinstance(seed, bool):
            violations.append(f"'seed' is mandatory and must be an integer, was: {seed!r}")
        matrix = CAT_MAP
        if "matrix" in data:
            try:
                matrix = as_int_matrix(data["matrix"])
            except (TypeError, ValueError) as e:
                violations.append(f"'matrix': {e}")

        known = {
            "schema_version",
            "seed",
            "matrix",
            "cocycle",
            "periodic",
            "simulation",
            "search",
            "weak_mixing",
            "closing",
            "perturbation",
            "output_dir",
        }
        for key in sorted(set(data) - known):
            violations.append(f"Unknown configuration key: {key!r}")

        cocycle = section("cocycle", lambda d: CocycleSource(**d))
        periodic = section("periodic", lambda d: PeriodicConfig(**d))
        simulation = section("simulation", _parse_simulation)
        search = section("search", _parse_search)
        weak_mixing = section("weak_mixing", _parse_weak_mixing)
        closing = section("closing", lambda d: ClosingConfig(**d))
        perturbation = section("perturbation", lambda d: PerturbationConfig(**d))
        output_dir = data.get("output_dir")
        if output_dir is not None and not isinstance(output_dir, str):
            violations.append(f"'output_dir' must be a string, was: {output_dir!r}")

        if violations:
            raise ConfigError(violations)
        assert isinstance(seed, int)
        return cls(
            seed=seed,
            matrix=matrix,
            cocycle=cocycle,
            periodic=periodic,
            simulation=simulation,
            search=search,
            weak_mixing=weak_mixing,
            closing=closing,
            perturbation=perturbation,
            output_dir=output_dir,
        )

    @classmethod
    def from_json(cls, path: PathT) -> "ExperimentConfig":
        """
        Load a configuration file.
        """
        try:
            data = read_json(path)
        except ValueError as e:
            raise ConfigError([f"Configuration is not valid JSON: {e}"])
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": CONFIG_SCHEMA_VERSION,
            "seed": self.seed,
            "matrix": [list(row) for row in self.matrix],
            "cocycle": {
                "kind": self.cocycle.kind,
                "levels": self.cocycle.levels,
                "n_max": self.cocycle.n_max,
                "path": self.cocycle.path,
            },
            "periodic": {"n_max": self.periodic.n_max, "budget": self.periodic.budget},
            "simulation": {
                "steps": self.simulation.steps,
                "starts": self.simulation.starts,
                "grid": _grid_to_dict(self.simulation.grid),
            },
            "search": {
                "levels": list(self.search.levels),
                "target_half_width": self.search.target_half_width,
                "target_fiber_subdivisions": self.search.target_fiber_subdivisions,
                "target_base_subdivisions": self.search.target_base_subdivisions,
                "starts": self.search.starts,
                "budget": self.search.budget,
            },
            "weak_mixing": {
                "budget": self.weak_mixing.budget,
                "pairs": self.weak_mixing.pairs,
                "grid": _grid_to_dict(self.weak_mixing.grid),
            },
            "closing": {
                "count": self.closing.count,
                "n_range": list(self.closing.n_range),
                "eps_range": list(self.closing.eps_range),
                "c_max": self.closing.c_max,
            },
            "perturbation": {
                "levels": list(self.perturbation.levels),
                "alpha": self.perturbation.alpha,
                "points_per_dim": self.perturbation.points_per_dim,
                "offsets": list(self.perturbation.offsets),
                "random_points": self.perturbation.random_points,
            },
            "output_dir": self.output_dir,
        }


def _grid_to_dict(grid: GridSpec) -> Dict[str, Any]:
    return {
        "level": grid.level,
        "half_width": grid.half_width,
        "base_subdivisions": grid.base_subdivisions,
        "fiber_subdivisions": grid.fiber_subdivisions,
    }


def _parse_grid(data: Any, default: GridSpec) -> GridSpec:
    if data is None:
        return default
    if not isinstance(data, Mapping):
        raise ValueError("'grid' must be an object")
    return GridSpec(**data)


def _parse_simulation(data: Mapping[str, Any]) -> SimulationConfig:
    data = dict(data)
    grid = _parse_grid(data.pop("grid", None), SimulationConfig().grid)
    return SimulationConfig(grid=grid, **data)


def _parse_weak_mixing(data: Mapping[str, Any]) -> WeakMixingConfig:
    data = dict(data)
    grid = _parse_grid(data.pop("grid", None), WeakMixingConfig().grid)
    return WeakMixingConfig(grid=grid, **data)


def _parse_search(data: Mapping[str, Any]) -> SearchConfig:
    if "seed" in data:
        raise ValueError("the search seed is derived from the experiment seed")
    defaults = {"budget": 10_000, "starts": 8}
    defaults.update(data)
    return SearchConfig(**defaults)
