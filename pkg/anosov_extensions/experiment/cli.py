import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

from ..cocycles.construction import ConstructionError
from ..cocycles.periodic_data import EnumerationBudgetError
from ..cocycles.serde import periodic_data_rows
from ..separation.decide import decide
from ..torus._integer import IntMatrixT
from ..torus.automorphism import NonHyperbolicError, ToralAutomorphism, check_hyperbolic
from ..torus.periodic import grid_periodic_points, periodic_points
from ..util.serde import fraction_from_str, fraction_to_str, read_json, write_csv, write_json
from .config import CocycleSource, ConfigError, ExperimentConfig
from .runner import ExperimentRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2


def parse_matrix(value: str) -> IntMatrixT:
    """
    Parse the ``"2,1;1,1"`` matrix shorthand: rows separated by semicolons,
    entries by commas.
    """
    try:
        return tuple(
            tuple(int(entry) for entry in row.split(",")) for row in value.split(";")
        )
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"Invalid matrix {value!r}, expected integer rows such as '2,1;1,1'"
        )


def _positive_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected an integer, got: {value!r}")
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got: {parsed}")
    return parsed


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="experiment configuration (JSON)")
    common.add_argument("--seed", type=int, help="seed, overrides the configuration")
    common.add_argument("--output", metavar="DIR", help="directory for JSON and CSV outputs")
    common.add_argument(
        "--matrix",
        type=parse_matrix,
        help="base map, e.g. '2,1;1,1' (default: the cat map)",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="log progress")

    cocycle = argparse.ArgumentParser(add_help=False)
    source = cocycle.add_mutually_exclusive_group()
    source.add_argument("--cocycle", metavar="FILE", help="load the cocycle from JSON")
    source.add_argument("--zero-cocycle", action="store_true", help="use the zero cocycle")
    cocycle.add_argument("--levels", type=_positive_int, help="levels of a constructed cocycle")
    cocycle.add_argument(
        "--n-max", type=_positive_int, help="largest orbit period used by the construction"
    )

    parser = argparse.ArgumentParser(
        prog="anosov-lab",
        description="Periodic data, separation and skew-product diagnostics for "
        "R^ω-extensions of hyperbolic toral automorphisms.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser(
        "validate-map", parents=[common], help="check that the map is hyperbolic"
    )
    validate.set_defaults(handler=_validate_map)

    points = subparsers.add_parser(
        "periodic-points", parents=[common], help="fixed points of A^n as exact rationals"
    )
    points.add_argument("--n", type=_positive_int, required=True, help="power n")
    points.add_argument(
        "--oracle", action="store_true", help="cross-check with a brute-force grid scan"
    )
    points.set_defaults(handler=_periodic_points)

    weights = subparsers.add_parser(
        "weights", parents=[common, cocycle], help="periodic data of the cocycle"
    )
    weights.add_argument("--periods", type=_positive_int, help="largest minimal period")
    weights.add_argument("--level", type=_positive_int, help="number of weight coordinates")
    weights.set_defaults(handler=_weights)

    decide_parser = subparsers.add_parser(
        "decide", parents=[common], help="decide separability of a point set"
    )
    decide_parser.add_argument(
        "--points",
        metavar="FILE",
        required=True,
        help="JSON list of points; entries are numbers or 'num/den' strings",
    )
    decide_parser.set_defaults(handler=_decide)

    construct = subparsers.add_parser(
        "construct", parents=[common, cocycle], help="construct an inseparable cocycle"
    )
    construct.set_defaults(handler=_stages("cocycle"), construct=True)

    simulate = subparsers.add_parser(
        "simulate", parents=[common, cocycle], help="skew-product coverage diagnostics"
    )
    simulate.add_argument("--steps", type=_positive_int, help="trajectory length")
    simulate.add_argument("--starts", type=_positive_int, help="number of start points")
    simulate.set_defaults(handler=_stages("coverage", "search", "weak_mixing"))

    close = subparsers.add_parser(
        "close", parents=[common, cocycle], help="closing lemma trials"
    )
    close.add_argument("--count", type=_positive_int, help="number of near-returns")
    close.set_defaults(handler=_stages("closing"))

    perturb = subparsers.add_parser(
        "perturb", parents=[common, cocycle], help="truncation perturbations"
    )
    perturb.add_argument(
        "--n",
        type=int,
        action="append",
        dest="truncation_levels",
        help="truncation level, may be repeated",
    )
    perturb.set_defaults(handler=_stages("perturbation"))

    run = subparsers.add_parser("run", parents=[common, cocycle], help="run the full pipeline")
    run.set_defaults(handler=_stages())

    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        base = ExperimentConfig.from_json(args.config)
    else:
        base = ExperimentConfig(seed=0)

    periodic, closing, perturbation = base.periodic, base.closing, base.perturbation
    simulation, search, weak_mixing = base.simulation, base.search, base.weak_mixing
    try:
        if getattr(args, "periods", None) is not None:
            periodic = dataclasses.replace(periodic, n_max=args.periods)
        if getattr(args, "steps", None) is not None:
            simulation = dataclasses.replace(simulation, steps=args.steps)
            search = dataclasses.replace(search, budget=args.steps)
            weak_mixing = dataclasses.replace(weak_mixing, budget=args.steps)
        if getattr(args, "starts", None) is not None:
            simulation = dataclasses.replace(simulation, starts=args.starts)
            search = dataclasses.replace(search, starts=args.starts)
        if getattr(args, "count", None) is not None:
            closing = dataclasses.replace(closing, count=args.count)
        if getattr(args, "truncation_levels", None):
            perturbation = dataclasses.replace(
                perturbation, levels=tuple(args.truncation_levels)
            )
        return ExperimentConfig(
            seed=base.seed if args.seed is None else args.seed,
            matrix=base.matrix if args.matrix is None else args.matrix,
            cocycle=_cocycle_source(args, base.cocycle),
            periodic=periodic,
            simulation=simulation,
            search=search,
            weak_mixing=weak_mixing,
            closing=closing,
            perturbation=perturbation,
            output_dir=base.output_dir if args.output is None else args.output,
        )
    except ValueError as e:
        raise ConfigError([str(e)])


def _cocycle_source(args: argparse.Namespace, current: CocycleSource) -> CocycleSource:
    if getattr(args, "cocycle", None) is not None:
        return CocycleSource(kind="file", path=args.cocycle)
    if getattr(args, "zero_cocycle", False):
        return CocycleSource(kind="zero")
    levels = getattr(args, "levels", None)
    n_max = getattr(args, "n_max", None)
    if levels is None and n_max is None and not getattr(args, "construct", False):
        return current
    return CocycleSource(
        kind="construct",
        levels=levels if levels is not None else current.levels,
        n_max=n_max if n_max is not None else current.n_max,
    )


def _print_json(data: Any):
    json.dump(data, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _print_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _output_path(config: ExperimentConfig, name: str) -> Optional[Path]:
    if config.output_dir is None:
        return None
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir / name


def _validate_map(args: argparse.Namespace, config: ExperimentConfig) -> int:
    validation = check_hyperbolic(config.matrix)
    _print_json(
        {
            "accepted": validation.accepted,
            "reason": None if validation.reason is None else validation.reason.value,
            "message": validation.message,
            "determinant": validation.determinant,
            "moduli": list(validation.moduli),
        }
    )
    if not validation.accepted:
        print(f"error: {validation.message}", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


def _periodic_points(args: argparse.Namespace, config: ExperimentConfig) -> int:
    automorphism = ToralAutomorphism.from_matrix(config.matrix)
    count = abs(automorphism.periodic_determinant(args.n))
    if count > config.periodic.budget:
        raise EnumerationBudgetError(args.n, count, config.periodic.budget)

    orbits = periodic_points(automorphism, args.n)
    header = ["point_id", "orbit_id", "period"] + [
        f"x{i + 1}" for i in range(automorphism.dim)
    ]
    rows: List[List[Any]] = []
    for orbit_id, orbit in enumerate(orbits):
        for point in orbit.points:
            coords = [fraction_to_str(c) for c in point.to_fractions()]
            rows.append([len(rows), orbit_id, orbit.period, *coords])

    if args.oracle:
        enumerated = {point.to_fractions() for orbit in orbits for point in orbit.points}
        scanned = {point.to_fractions() for point in grid_periodic_points(automorphism, args.n)}
        if enumerated != scanned:
            print(
                f"error: enumeration found {len(enumerated)} points, "
                f"the grid scan {len(scanned)}",
                file=sys.stderr,
            )
            return EXIT_REJECTED
        logger.info("Grid scan agrees on %d points", len(scanned))

    path = _output_path(config, f"periodic_points_n{args.n}.csv")
    if path is not None:
        write_csv(path, header, rows)
    _print_csv(header, rows)
    return EXIT_OK


def _weights(args: argparse.Namespace, config: ExperimentConfig) -> int:
    runner = ExperimentRunner(config)
    report = runner.run(["periodic_data"])
    if not report.ok:
        _print_json(report.to_dict())
        return EXIT_REJECTED
    data = runner.periodic_data
    assert data is not None
    level = args.level if args.level is not None else max(data.support, 1)
    dim = len(config.matrix)
    header = ["orbit_id", "period"] + [f"x{i + 1}" for i in range(dim)]
    header += [f"w{k + 1}" for k in range(level)]
    _print_csv(header, periodic_data_rows(data, level))
    return EXIT_OK


def _read_points(path: str) -> List[List[Any]]:
    try:
        data = read_json(path)
    except (OSError, ValueError) as e:
        raise ConfigError([f"Cannot read points from {path}: {e}"])
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise ConfigError([f"Points file {path} must contain a JSON list of points"])
    return [
        [fraction_from_str(c) if isinstance(c, str) else c for c in point]
        for point in data
    ]


def _decide(args: argparse.Namespace, config: ExperimentConfig) -> int:
    points = _read_points(args.points)
    certificate = decide(points).to_dict()
    path = _output_path(config, "certificate.json")
    if path is not None:
        write_json(path, certificate)
    _print_json(certificate)
    return EXIT_OK


def _stages(*stages: str):
    def handler(args: argparse.Namespace, config: ExperimentConfig) -> int:
        report = ExperimentRunner(config).run(stages or None)
        _print_json(report.to_dict())
        for name in report.failed:
            print(f"error: stage '{name}' failed: {report.stage(name).error}", file=sys.stderr)
        return EXIT_OK if report.ok else EXIT_REJECTED

    return handler


def cli_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse the command line and run a subcommand.

    :param argv:
        Arguments without the program name, ``sys.argv[1:]`` when not given.
    :returns:
        ``0`` on success, ``1`` when the input was rejected on domain
        grounds (for instance a non-hyperbolic map or a failed stage) and
        ``2`` on usage errors.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = _load_config(args)
        return args.handler(args, config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NonHyperbolicError, ConstructionError, EnumerationBudgetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REJECTED


def main():
    sys.exit(cli_dispatch())
