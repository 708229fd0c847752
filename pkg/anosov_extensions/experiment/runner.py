import dataclasses
import logging
import math
import time
import warnings
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

import torch

from ..closing.trials import closing_trials, sample_near_returns, write_closing_trials_csv
from ..cocycles.cocycle import Cocycle, truncation_certificate, truncation_perturbation
from ..cocycles.construction import construct_inseparable
from ..cocycles.distances import holder_distance, sup_distance
from ..cocycles.periodic_data import PeriodicData, periodic_data
from ..cocycles.serde import load_cocycle, save_cocycle, write_periodic_data_csv
from ..separation.decide import decide
from ..sequences.vector import truncation_tail_bound
from ..skew.coverage import coverage_curve, write_coverage_curve_csv, write_first_hits_csv
from ..skew.grid import COVERAGE_THRESHOLD
from ..skew.search import sobol_starts, transitive_point_search, weak_mixing_diagnostic
from ..skew.simulator import SkewProductSimulator
from ..torus.automorphism import ToralAutomorphism, check_hyperbolic
from ..torus.periodic import count_points, minimal_period_counts
from .config import ExperimentConfig
from .report import Report, Section, StageResult, StageStatus

logger = logging.getLogger(__name__)

#: Pipeline stages in execution order.
STAGES = (
    "map",
    "cocycle",
    "periodic_data",
    "separation",
    "coverage",
    "search",
    "weak_mixing",
    "closing",
    "perturbation",
)

_SECTIONS = {
    "map": Section.EXACT,
    "cocycle": Section.EXACT,
    "periodic_data": Section.EXACT,
    "separation": Section.EXACT,
    "coverage": Section.STATISTICAL,
    "search": Section.STATISTICAL,
    "weak_mixing": Section.STATISTICAL,
    "closing": Section.STATISTICAL,
    "perturbation": Section.SAMPLED,
}

_REQUIREMENTS = {
    "map": (),
    "cocycle": ("map",),
    "periodic_data": ("map", "cocycle"),
    "separation": ("periodic_data",),
    "coverage": ("map", "cocycle"),
    "search": ("map", "cocycle"),
    "weak_mixing": ("map", "cocycle"),
    "closing": ("map", "cocycle"),
    "perturbation": ("map", "cocycle"),
}

# Offsets added to the experiment seed, one independent stream per stage.
_SEED_OFFSETS = {
    "coverage": 1,
    "search": 2,
    "weak_mixing": 3,
    "closing": 4,
    "perturbation": 5,
}


def stage_seed(config: ExperimentConfig, stage: str) -> int:
    """
    Seed of the random choices of a stage.
    """
    return config.seed + _SEED_OFFSETS[stage]


def required_stages(stages: Iterable[str]) -> Tuple[str, ...]:
    """
    The given stages together with the stages they depend on, in pipeline
    order.
    """
    needed = set()
    pending = list(stages)
    while pending:
        stage = pending.pop()
        if stage not in _REQUIREMENTS:
            raise ValueError(f"Unknown stage {stage!r}, expected one of: {', '.join(STAGES)}")
        if stage not in needed:
            needed.add(stage)
            pending.extend(_REQUIREMENTS[stage])
    return tuple(stage for stage in STAGES if stage in needed)


class ExperimentRunner:
    """
    Runs the pipeline stages of an experiment in order. A failing stage is
    recorded in the report and only the stages that depend on it are
    skipped with a failure; independent stages still run.
    """

    def __init__(self, config: ExperimentConfig):
        """
        Construct a runner.

        :param config:
            The validated experiment configuration.
        """
        self.config = config
        self.automorphism: Optional[ToralAutomorphism] = None
        self.cocycle: Optional[Cocycle] = None
        self.periodic_data: Optional[PeriodicData] = None
        self._output_dir = (
            None if config.output_dir is None else Path(config.output_dir)
        )
        self._handlers: Dict[str, Callable[[], Dict[str, Any]]] = {
            "map": self._validate_map,
            "cocycle": self._build_cocycle,
            "periodic_data": self._periodic_data,
            "separation": self._separation,
            "coverage": self._coverage,
            "search": self._search,
            "weak_mixing": self._weak_mixing,
            "closing": self._closing,
            "perturbation": self._perturbation,
        }

    def __call__(self, stages: Optional[Iterable[str]] = None) -> Report:
        """
        Alias for :meth:`.run`.
        """
        return self.run(stages)

    def run(self, stages: Optional[Iterable[str]] = None) -> Report:
        """
        Run the pipeline.

        :param stages:
            Stages to run, all stages when not given. Stages they depend on
            are added automatically.
        :returns:
            The report.
        """
        selected = STAGES if stages is None else required_stages(stages)
        if self._output_dir is not None:
            self._output_dir.mkdir(parents=True, exist_ok=True)

        report = Report()
        report.metadata["started"] = datetime.now(timezone.utc).isoformat()
        report.metadata["seed"] = self.config.seed
        timings: Dict[str, float] = {}
        for stage in selected:
            start = time.perf_counter()
            report.add(self._run_stage(stage, report))
            timings[stage] = time.perf_counter() - start
        report.metadata["wall_clock"] = timings

        if self._output_dir is not None:
            report.save(self._output_dir)
        return report

    def _run_stage(self, stage: str, report: Report) -> StageResult:
        section = _SECTIONS[stage]
        missing = [
            requirement
            for requirement in _REQUIREMENTS[stage]
            if requirement not in report or not report.stage(requirement).ok
        ]
        if missing:
            logger.warning("Skipping stage '%s', it requires: %s", stage, ", ".join(missing))
            return StageResult(
                name=stage,
                section=section,
                status=StageStatus.FAILED,
                error=f"Requires stage(s) that did not succeed: {', '.join(missing)}",
            )

        logger.info("Running stage '%s'", stage)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                data = self._handlers[stage]()
            except Exception as e:
                logger.warning("Stage '%s' failed: %s", stage, e)
                return StageResult(
                    name=stage,
                    section=section,
                    status=StageStatus.FAILED,
                    error=f"{type(e).__name__}: {e}",
                )
        if caught:
            data["warnings"] = [str(w.message) for w in caught]
            for w in caught:
                logger.warning("Stage '%s': %s", stage, w.message)
        return StageResult(name=stage, section=section, status=StageStatus.OK, data=data)

    def _output(self, name: str) -> Optional[Path]:
        return None if self._output_dir is None else self._output_dir / name

    def _validate_map(self) -> Dict[str, Any]:
        validation = check_hyperbolic(self.config.matrix)
        validation.raise_if_rejected()
        automorphism = ToralAutomorphism.from_matrix(self.config.matrix)
        self.automorphism = automorphism
        return {
            "matrix": [list(row) for row in automorphism.matrix],
            "determinant": validation.determinant,
            "moduli": list(validation.moduli),
            "contraction_rate": automorphism.contraction_rate(),
        }

    def _build_cocycle(self) -> Dict[str, Any]:
        assert self.automorphism is not None, "Cocycle stage runs after map validation"
        source = self.config.cocycle
        data: Dict[str, Any] = {"kind": source.kind}
        if source.kind == "construct":
            result = construct_inseparable(
                self.automorphism,
                source.levels,
                source.n_max,
                budget=self.config.periodic.budget,
            )
            cocycle = result.cocycle
            data["radius"] = result.radius
            data["orbit_periods"] = [orbit.period for orbit in result.orbits]
            data["steps"] = [
                {
                    "level": step.level,
                    "amplitude": step.amplitude,
                    "lipschitz_constant": step.lipschitz_constant,
                    "lipschitz_bound": math.ldexp(1.0, -(step.level - 1)),
                    "positive_orbits": step.positive_orbits,
                    "negative_orbits": step.negative_orbits,
                }
                for step in result.steps
            ]
        elif source.kind == "file":
            assert source.path is not None
            cocycle = load_cocycle(source.path)
            if cocycle.dim != self.automorphism.dim:
                raise ValueError(
                    f"Cocycle has base dimension {cocycle.dim}, but the map acts on dimension {self.automorphism.dim}"
                )
            data["path"] = source.path
        else:
            cocycle = Cocycle.zero(self.automorphism.dim)

        self.cocycle = cocycle
        data["num_coordinates"] = cocycle.num_coordinates
        data["lipschitz_constants"] = list(cocycle.lipschitz_constants())
        data["lipschitz_constant"] = cocycle.lipschitz_constant()

        path = self._output("cocycle.json")
        if path is not None:
            save_cocycle(path, cocycle)
        return data

    def _periodic_data(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = self.config.periodic
        data = periodic_data(self.cocycle, self.automorphism, settings.n_max, settings.budget)
        self.periodic_data = data

        orbits = [entry.orbit for entry in data.entries]
        counts = []
        for n in range(1, settings.n_max + 1):
            fixed = count_points([orbit for orbit in orbits if n % orbit.period == 0])
            determinant = abs(self.automorphism.periodic_determinant(n))
            if fixed != determinant:
                raise AssertionError(
                    f"Enumerated {fixed} fixed points of A^{n}, but |det(A^{n} - I)| = {determinant}"
                )
            counts.append({"n": n, "fixed_points": fixed, "determinant": determinant})

        path = self._output("periodic_data.csv")
        if path is not None:
            write_periodic_data_csv(path, data, self.automorphism.dim, max(data.support, 1))
        return {
            "n_max": settings.n_max,
            "orbits": len(data),
            "orbits_per_period": {
                str(period): count for period, count in minimal_period_counts(orbits).items()
            },
            "fixed_point_counts": counts,
            "support": data.support,
        }

    def _separation(self) -> Dict[str, Any]:
        assert self.periodic_data is not None
        levels = []
        for level in range(1, max(self.periodic_data.support, 1) + 1):
            certificate = decide(self.periodic_data.weights(level))
            levels.append({"level": level, **certificate.to_dict()})
        return {
            "levels": levels,
            "inseparable_levels": [
                entry["level"] for entry in levels if entry["verdict"] == "inseparable"
            ],
        }

    def _coverage(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = self.config.simulation
        starts = sobol_starts(
            self.automorphism.dim, settings.starts, stage_seed(self.config, "coverage")
        )
        simulator = SkewProductSimulator(self.automorphism, self.cocycle)
        reports = simulator.coverage(starts, settings.grid, settings.steps)
        best = max(range(len(reports)), key=lambda i: reports[i].boxes_hit)
        report = reports[best]

        boxes = torch.tensor([box for _, box in report.first_hits], dtype=torch.long)
        fiber_boxes = int(settings.grid.fiber_box_indices(boxes).unique().numel())

        curve = coverage_curve(report)
        path = self._output("coverage_curve.csv")
        if path is not None:
            write_coverage_curve_csv(path, curve)
            write_first_hits_csv(path.with_name("first_hits.csv"), report)
        return {
            "level": settings.grid.level,
            "steps": settings.steps,
            "best_start": best,
            "best_start_point": starts[best].tolist(),
            "fractions": [r.fraction for r in reports],
            "fiber_boxes_hit": fiber_boxes,
            "fiber_boxes": settings.grid.fiber_boxes(),
            "coverage_threshold": COVERAGE_THRESHOLD,
            "meets_threshold": report.fraction >= COVERAGE_THRESHOLD,
            "best": report.to_dict(),
        }

    def _search(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = dataclasses.replace(
            self.config.search, seed=stage_seed(self.config, "search")
        )
        return transitive_point_search(self.automorphism, self.cocycle, settings).to_dict()

    def _weak_mixing(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = self.config.weak_mixing
        result = weak_mixing_diagnostic(
            self.automorphism,
            self.cocycle,
            settings.grid,
            settings.budget,
            pairs=settings.pairs,
            seed=stage_seed(self.config, "weak_mixing"),
        )
        return {**result.to_dict(), "single_fraction": result.single_fraction}

    def _closing(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = self.config.closing
        near_returns = sample_near_returns(
            self.automorphism,
            n_range=settings.n_range,
            eps_range=settings.eps_range,
            count=settings.count,
            seed=stage_seed(self.config, "closing"),
        )
        summary = closing_trials(
            self.automorphism, near_returns, f=self.cocycle, c_max=settings.c_max
        )
        path = self._output("closing_trials.csv")
        if path is not None:
            write_closing_trials_csv(path, summary)
        return {
            **summary.to_dict(),
            "lambda_theoretical": self.automorphism.contraction_rate(),
            "lipschitz_constant": self.cocycle.lipschitz_constant(),
        }

    def _perturbation(self) -> Dict[str, Any]:
        assert self.automorphism is not None and self.cocycle is not None
        settings = self.config.perturbation
        sample = settings.sample(stage_seed(self.config, "perturbation"))
        periodic = self.config.periodic
        levels = []
        for n in settings.levels:
            truncated = truncation_perturbation(self.cocycle, n)
            sup = sup_distance(self.cocycle, truncated, sample)
            holder = holder_distance(self.cocycle, truncated, settings.alpha, sample)
            weights = periodic_data(
                truncated, self.automorphism, periodic.n_max, periodic.budget
            ).weights(n + 1)
            certificate = decide(weights)
            expected = truncation_certificate(n)
            tail = truncation_tail_bound(n)
            levels.append(
                {
                    "n": n,
                    "tail_bound": tail,
                    "sup_distance": {"lower": sup.lower, "upper": sup.upper},
                    "holder_distance": {
                        "alpha": settings.alpha,
                        "lower": holder.lower,
                        "upper": holder.upper,
                    },
                    "bounds_consistent": sup.is_consistent and holder.is_consistent,
                    "certificate": certificate.to_dict(),
                    "truncation_certificate_holds": certificate.is_separable
                    and certificate.as_functional() == expected,
                }
            )
        return {"levels": levels}


def run(config: ExperimentConfig, *, stages: Optional[Iterable[str]] = None) -> Report:
    """
    Run an experiment: validate the map, build or load the cocycle, compute
    periodic data and separation verdicts, run the simulation diagnostics,
    the closing trials and the truncation perturbations.

    The run is deterministic given the configuration and its seed. Stage
    failures are recorded in the report.

    :param config:
        The experiment configuration.
    :param stages:
        Restrict the run to these stages and their dependencies.
    :returns:
        The report.
    """
    return ExperimentRunner(config).run(stages)
