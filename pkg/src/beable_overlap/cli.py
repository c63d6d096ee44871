"""Command-line front end.

Every invocation runs one named experiment and writes a delimited table
(<out>.csv) plus a JSON summary (<out>.json); --format svg renders a
figure (<out>.svg) next to them. The table and summary are always both
written, so --format csv and --format json behave identically and exist
to state intent. Exit codes: 0 success, 1 filesystem trouble, 2 bad
arguments or a domain error raised by the experiment itself.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import BeableOverlapError, InvalidParameterError
from .experiments import (
    ExperimentResult,
    run_bound,
    run_counterexample,
    run_cube_check,
    run_ec_curve,
    run_figure1,
    run_integral_f,
    run_localized,
    run_pair_overlap,
    run_product_decay,
)
from .grids import GridFunction, read_grid_file
from .report import write_csv, write_figure, write_json


class Experiment(Enum):
    FIGURE1 = "figure1"
    EC_CURVE = "ec-curve"
    INTEGRAL_F = "integral-f"
    CUBE_CHECK = "cube-check"
    LOCALIZED = "localized"
    BOUND = "bound"
    COUNTEREXAMPLE = "counterexample"
    PRODUCT_DECAY = "product-decay"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: no optional field is left to guess later."""

    experiment: Experiment
    dims: Optional[tuple[int, ...]]
    samples: int
    seed: int
    epsilon: Optional[float]
    output_format: str
    out: str
    grid0: Optional[str]
    grid1: Optional[str]
    workers: int


_DEFAULT_SAMPLES = 100_000

_SAMPLES_OVERRIDE = {Experiment.COUNTEREXAMPLE: 200_000}

_DEFAULT_DIMS = {
    Experiment.FIGURE1: tuple(2**k for k in range(1, 11)),
    Experiment.EC_CURVE: tuple(2**k for k in range(1, 11)),
    Experiment.INTEGRAL_F: (1,) + tuple(2**k for k in range(1, 9)),
    Experiment.CUBE_CHECK: tuple(range(2, 9)),
    Experiment.LOCALIZED: tuple(2**k for k in range(1, 8)),
    Experiment.BOUND: tuple(2**k for k in range(1, 13)),
    Experiment.PRODUCT_DECAY: tuple(range(1, 9)),
}

_DEFAULT_EPSILON = {Experiment.LOCALIZED: 0.5, Experiment.BOUND: 0.1}

_EPSILON_USERS = (Experiment.LOCALIZED, Experiment.BOUND)

_SINGLE_VALUE = (Experiment.COUNTEREXAMPLE, Experiment.OVERLAP)


def parse_grid_file(path) -> GridFunction:
    """Load one tabulated amplitude; small norm drift is absorbed, large is an error."""
    return read_grid_file(path)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidParameterError(f"cannot parse dimension list {text!r}")
    if not dims:
        raise InvalidParameterError("empty dimension list")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beable-overlap",
        description="Monte Carlo and quadrature studies of wave function overlap "
        "over pilot-wave configurations.",
    )
    parser.add_argument(
        "--experiment",
        required=True,
        choices=[exp.value for exp in Experiment],
        help="which study to run",
    )
    parser.add_argument("--dims", help="comma-separated dimensions (or factor counts)")
    parser.add_argument("--samples", type=int, help="Monte Carlo samples per row")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--epsilon", type=float, help="localization threshold parameter")
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=["csv", "json", "svg"],
        default="csv",
        help="svg additionally renders a figure; the table and summary are always written",
    )
    parser.add_argument("--out", help="output base path (default ./<experiment>)")
    parser.add_argument("--grid0", help="tabulated amplitude file for the first state")
    parser.add_argument("--grid1", help="tabulated amplitude file for the second state")
    parser.add_argument("--workers", type=int, default=1, help="thread count for rows")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    experiment = Experiment(args.experiment)
    if args.dims is not None and experiment in _SINGLE_VALUE:
        raise InvalidParameterError(f"{experiment.value} does not take --dims")
    if args.epsilon is not None and experiment not in _EPSILON_USERS:
        raise InvalidParameterError(f"{experiment.value} does not take --epsilon")
    if experiment is Experiment.OVERLAP:
        if args.grid0 is None or args.grid1 is None:
            raise InvalidParameterError("overlap needs both --grid0 and --grid1")
    elif args.grid0 is not None or args.grid1 is not None:
        raise InvalidParameterError("--grid0/--grid1 apply only to the overlap experiment")
    if args.workers < 1:
        raise InvalidParameterError(f"workers must be at least 1, got {args.workers}")
    dims = _parse_dims(args.dims) if args.dims is not None else _DEFAULT_DIMS.get(experiment)
    samples = args.samples
    if samples is None:
        samples = _SAMPLES_OVERRIDE.get(experiment, _DEFAULT_SAMPLES)
    epsilon = args.epsilon
    if epsilon is None:
        epsilon = _DEFAULT_EPSILON.get(experiment)
    out = args.out if args.out is not None else experiment.value
    return RunConfig(
        experiment=experiment,
        dims=dims,
        samples=samples,
        seed=args.seed,
        epsilon=epsilon,
        output_format=args.output_format,
        out=out,
        grid0=args.grid0,
        grid1=args.grid1,
        workers=args.workers,
    )


def _dispatch(config: RunConfig) -> ExperimentResult:
    exp = config.experiment
    if exp is Experiment.FIGURE1:
        return run_figure1(config.dims, config.samples, config.seed, config.workers)
    if exp is Experiment.EC_CURVE:
        return run_ec_curve(config.dims, config.samples, config.seed, config.workers)
    if exp is Experiment.INTEGRAL_F:
        return run_integral_f(config.dims, config.samples, config.seed, config.workers)
    if exp is Experiment.CUBE_CHECK:
        return run_cube_check(config.dims, config.samples, config.seed, config.workers)
    if exp is Experiment.LOCALIZED:
        return run_localized(
            config.dims, config.epsilon, config.samples, config.seed, config.workers
        )
    if exp is Experiment.BOUND:
        return run_bound(config.dims, config.epsilon, config.workers)
    if exp is Experiment.COUNTEREXAMPLE:
        return run_counterexample(config.samples, config.seed)
    if exp is Experiment.PRODUCT_DECAY:
        return run_product_decay(
            config.dims, config.samples, config.seed, workers=config.workers
        )
    grid0 = parse_grid_file(config.grid0)
    grid1 = parse_grid_file(config.grid1)
    return run_pair_overlap(grid0, grid1, config.samples, config.seed)


def run(config: RunConfig) -> list[str]:
    """Run the configured experiment and write its artifacts; returns the paths."""
    started = time.perf_counter()
    result = _dispatch(config)
    wall_time = time.perf_counter() - started
    csv_path = config.out + ".csv"
    json_path = config.out + ".json"
    write_csv(result, csv_path)
    write_json(result, json_path, wall_time)
    written = [csv_path, json_path]
    if config.output_format == "svg":
        svg_path = config.out + ".svg"
        write_figure(result, svg_path)
        written.append(svg_path)
    return written


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        written = run(_config_from_args(args))
    except BeableOverlapError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
