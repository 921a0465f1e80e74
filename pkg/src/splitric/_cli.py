"""Command line front end: ``splitric <command> [options]``.

Results go to standard output, or to the file given by ``--output-path``.
Diagnostics go to standard error. Errors are reported as a single line
``splitric: error: <kind>: <message>``, with exit status 2 for usage and
configuration errors and 1 for evaluation and validation failures.
"""

import argparse
import json
import logging
import pathlib
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any, NoReturn, Optional, TextIO

from ._config import (
    WORKLOAD_PRESETS,
    OutputFormat,
    RunConfig,
    ConfigError,
    paper_defaults_toml,
)
from ._feasibility import (
    Condition,
    CostBasis,
    Method,
    boundary,
    classify,
    crossover,
    power_budget_check,
    recommend,
)
from ._lifecycle import (
    Scenario,
    Objective,
    control_loop_latency,
    lifecycle_energy,
    lifecycle_latency,
)
from ._parameters import AXIS_ALIASES, parameter_dimension, resolve_parameter
from ._quantities import Dimension, QuantityError, parse_quantity
from ._sweep import (
    ORACLE_POINTS,
    AxisSpec,
    Spacing,
    default_axis,
    oracle_verify,
    run_energy_map,
    run_latency_map,
    run_sweep,
    urgency_grid,
    write_csv,
)
from ._validate import run_validation

logger = logging.getLogger(__name__)

PROGRAM = "splitric"


class UsageError(Exception):
    """The command line is malformed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _quantity(dimension: Dimension) -> Callable[[str], float]:
    def parse(text: str) -> float:
        try:
            return parse_quantity(text, dimension).value
        except QuantityError as error:
            raise argparse.ArgumentTypeError(str(error)) from None

    parse.__name__ = dimension.name.lower()
    return parse


def _pair(text: str) -> tuple[Scenario, Scenario]:
    try:
        first, second = (Scenario(part.strip()) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"pair {text!r} is not of the form s1:s2"
        ) from None
    if first is second:
        raise argparse.ArgumentTypeError(
            f"pair {text!r} compares a scenario with itself"
        )
    return first, second


def _scenarios(text: str) -> tuple[Scenario, ...]:
    try:
        return tuple(Scenario(part.strip()) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"scenario list {text!r} is not of the form s1,s2,s3"
        ) from None


@dataclass
class Output:
    """What a command emits: a JSON document, optionally a table for CSV
    output, or plain text."""

    data: Any = None
    table: Optional[tuple[list[str], list[list[Any]]]] = None
    text: Optional[str] = None
    success: bool = True
    failure: str = ""


# -- Commands --


def _cost(args: argparse.Namespace, config: RunConfig) -> Output:
    scenario = Scenario(args.scenario)
    return Output(
        {
            "energy": lifecycle_energy(
                scenario, config.topology, config.workload
            ).as_dict(),
            "latency": lifecycle_latency(
                scenario, config.topology, config.workload
            ).as_dict(),
        }
    )


def _loop(args: argparse.Namespace, config: RunConfig) -> Output:
    loop = control_loop_latency(
        Scenario(args.scenario), config.topology, config.workload
    )
    return Output(loop.as_dict())


def _boundary(args: argparse.Namespace, config: RunConfig) -> Output:
    verdict = boundary(Condition(args.condition), config.topology, config.workload)
    return Output(verdict.as_dict())


def _axis_range(axis: str, texts: Optional[Sequence[str]]) -> tuple[float, float]:
    if texts is None:
        try:
            default = default_axis(axis)
        except ValueError:
            raise UsageError(f"axis {axis!r} has no default range, use --range")
        return default.lo, default.hi
    dimension = parameter_dimension(axis)
    lo, hi = (parse_quantity(text, dimension).value for text in texts)
    return lo, hi


def _spacing(axis: str, lo: float, requested: Optional[str]) -> Spacing:
    if requested is not None:
        return Spacing(requested)
    try:
        spacing = default_axis(axis).spacing
    except ValueError:
        spacing = Spacing.LINEAR
    return spacing if lo > 0 else Spacing.LINEAR


def _crossover(args: argparse.Namespace, config: RunConfig) -> Output:
    axis = resolve_parameter(args.axis)
    lo, hi = _axis_range(args.axis, args.range)
    basis = (
        CostBasis.PER_OPERATION
        if args.per_op
        else CostBasis.AMORTIZED
        if args.amortized
        else CostBasis.LIFECYCLE
    )
    result = crossover(
        axis,
        Objective(args.objective),
        args.pair,
        config.topology,
        config.workload,
        (lo, hi),
        basis,
        Method.BISECTION if args.bisection else None,
    )
    data = result.as_dict()
    if not args.verify:
        return Output(data)
    grid = AxisSpec(axis, lo, hi, ORACLE_POINTS, _spacing(args.axis, lo, None))
    report = oracle_verify(result, grid, config.topology, config.workload)
    data["oracle"] = report.as_dict()
    return Output(data, success=report.passed, failure=f"oracle: {report.message}")


def _classify(args: argparse.Namespace, config: RunConfig) -> Output:
    label = classify(config.topology, config.workload, Objective(args.objective))
    return Output(label.as_dict())


def _sweep(args: argparse.Namespace, config: RunConfig) -> Output:
    lo, hi = _axis_range(args.axis, args.range)
    spacing = _spacing(args.axis, lo, args.spacing)
    axis = AxisSpec(args.axis, lo, hi, args.points, spacing)
    scenarios = args.scenarios
    if scenarios is None:
        scenarios = tuple(
            s
            for s in Scenario
            if config.topology.has_multilayer or s is not Scenario.S3_MULTI_LAYER
        )
    table = run_sweep(axis, config.topology, config.workload, scenarios)
    return Output(table.as_dict(), (table.header(), table.records()))


def _map(args: argparse.Namespace, config: RunConfig) -> Output:
    energy = args.kind == "energy"
    x_name = args.x_axis or ("input_size" if energy else "wait_time")
    x_lo, x_hi = _axis_range(x_name, args.x_range)
    x = AxisSpec(
        x_name, x_lo, x_hi, args.x_points, _spacing(x_name, x_lo, args.x_spacing)
    )
    if energy:
        y_name = args.y_axis or "complexity"
        y_lo, y_hi = _axis_range(y_name, args.y_range)
        y = AxisSpec(
            y_name, y_lo, y_hi, args.y_points, _spacing(y_name, y_lo, args.y_spacing)
        )
        feasibility_map = run_energy_map(
            config.topology, config.workload, x, y, args.include_geo
        )
    else:
        if args.y_axis is not None:
            raise UsageError("the latency map has the update deadline as y axis")
        if args.y_range is None:
            y_lo, y_hi = 1.0, 3600.0
        else:
            y_lo, y_hi = (
                parse_quantity(text, Dimension.SECONDS).value for text in args.y_range
            )
        deadlines = urgency_grid(
            y_lo, y_hi, args.y_points, Spacing(args.y_spacing or "log")
        )
        feasibility_map = run_latency_map(
            config.topology, config.workload, x, deadlines
        )
    return Output(
        feasibility_map.as_dict(),
        (feasibility_map.header(), feasibility_map.records()),
    )


def _validate(args: argparse.Namespace, config: RunConfig) -> Output:
    report = run_validation()
    failed = sum(not check.passed for check in report.checks)
    return Output(
        report.as_dict(),
        text="\n".join(report.lines()) + "\n",
        success=report.passed,
        failure=f"validation: {failed} checks failed",
    )


def _preset(args: argparse.Namespace, config: RunConfig) -> Output:
    return Output(text=paper_defaults_toml())


def _power(args: argparse.Namespace, config: RunConfig) -> Output:
    node = getattr(config.topology, args.node)
    if node is None:
        raise ConfigError(f"topology has no node {args.node!r}")
    return Output(power_budget_check(node, config.workload, args.rate).as_dict())


def _recommend(args: argparse.Namespace, config: RunConfig) -> Output:
    return Output(
        recommend(config.topology, config.workload, args.deadline).as_dict()
    )


# -- Parser --


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress (-v) or details (-vv) to standard error",
    )
    common.add_argument(
        "--config", type=pathlib.Path, help="TOML file with scenario parameters"
    )
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="PATH=QUANTITY",
        help="override a parameter, e.g., links.feeder.wait_time=45 min",
    )
    common.add_argument(
        "--workload-preset",
        choices=sorted(WORKLOAD_PRESETS),
        help="start from the parameters of a typical workload",
    )
    common.add_argument(
        "--output", choices=[f.value for f in OutputFormat], help="output format"
    )
    common.add_argument(
        "--output-path", type=pathlib.Path, help="file to write the result to"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the command line interface."""
    common = _common_options()
    parser = _Parser(
        prog=PROGRAM,
        description="Energy and latency feasibility of split-RIC deployments "
        "in non-terrestrial O-RAN networks.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    def command(name: str, handler: Callable[..., Output], text: str) -> Any:
        sub = commands.add_parser(name, parents=[common], help=text, description=text)
        sub.set_defaults(handler=handler)
        return sub

    scenarios = [s.value for s in Scenario]
    objectives = [o.value for o in Objective]
    axes = sorted(AXIS_ALIASES)

    sub = command("cost", _cost, "lifecycle energy and latency of a scenario")
    sub.add_argument("--scenario", choices=scenarios, required=True)

    sub = command("loop", _loop, "latency of one control decision")
    sub.add_argument("--scenario", choices=scenarios, required=True)

    sub = command("boundary", _boundary, "evaluate a dominance condition")
    sub.add_argument(
        "--condition", choices=[c.value for c in Condition], required=True
    )

    sub = command("crossover", _crossover, "solve for equal cost along an axis")
    sub.add_argument(
        "--axis",
        required=True,
        help=f"parameter path or one of {', '.join(axes)} (dashes allowed)",
    )
    sub.add_argument("--pair", type=_pair, required=True, help="e.g., s1:s2")
    sub.add_argument("--objective", choices=objectives, required=True)
    basis = sub.add_mutually_exclusive_group()
    basis.add_argument(
        "--per-op", action="store_true", help="compare the cost per inference"
    )
    basis.add_argument(
        "--amortized",
        action="store_true",
        help="compare the lifecycle cost per inference",
    )
    sub.add_argument("--range", nargs=2, metavar=("LO", "HI"))
    sub.add_argument("--bisection", action="store_true", help="force bisection")
    sub.add_argument(
        "--verify", action="store_true", help="check the result by a grid scan"
    )

    sub = command("classify", _classify, "optimal scenario for an objective")
    sub.add_argument("--objective", choices=objectives, required=True)

    sub = command("sweep", _sweep, "costs of the scenarios along an axis")
    sub.add_argument("--axis", required=True)
    sub.add_argument("--range", nargs=2, metavar=("LO", "HI"))
    sub.add_argument("--points", type=int, default=200)
    sub.add_argument("--spacing", choices=[s.value for s in Spacing])
    sub.add_argument("--scenarios", type=_scenarios, help="e.g., s1,s2")

    sub = command("map", _map, "feasibility map over two parameters")
    sub.add_argument("--kind", choices=["energy", "latency"], default="energy")
    sub.add_argument("--x-axis")
    sub.add_argument("--x-range", nargs=2, metavar=("LO", "HI"))
    sub.add_argument("--x-points", type=int, default=100)
    sub.add_argument("--x-spacing", choices=[s.value for s in Spacing])
    sub.add_argument("--y-axis", help="energy map only")
    sub.add_argument("--y-range", nargs=2, metavar=("LO", "HI"))
    sub.add_argument("--y-points", type=int, default=100)
    sub.add_argument("--y-spacing", choices=[s.value for s in Spacing])
    sub.add_argument(
        "--include-geo", action="store_true", help="let S3 compete in energy"
    )

    command("validate", _validate, "run the acceptance checks")

    sub = command("preset", _preset, "write a configuration file")
    sub.add_argument(
        "--paper-defaults",
        action="store_true",
        required=True,
        help="the reference parameters",
    )

    sub = command("power", _power, "average inference power against the budget")
    sub.add_argument("--node", choices=["ground", "leo", "geo"], required=True)
    sub.add_argument(
        "--rate",
        type=_quantity(Dimension.HERTZ),
        required=True,
        help="inferences per second, e.g., '100 Hz'",
    )

    sub = command("recommend", _recommend, "guidance region of the workload")
    sub.add_argument(
        "--deadline",
        type=_quantity(Dimension.SECONDS),
        required=True,
        help="longest tolerable learning cycle, e.g., '60 s'",
    )
    return parser


# -- Running --


def _configure_logging(verbosity: int) -> None:
    level = (
        logging.DEBUG
        if verbosity >= 2
        else logging.INFO
        if verbosity == 1
        else logging.WARNING
    )
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    logging.captureWarnings(True)


def _format(args: argparse.Namespace, output: Output) -> OutputFormat:
    if args.output is not None:
        return OutputFormat(args.output)
    return OutputFormat.CSV if output.table is not None else OutputFormat.JSON


def _write(
    args: argparse.Namespace, output: Output, output_format: OutputFormat
) -> None:
    def write(stream: TextIO) -> None:
        if args.output is None and output.text is not None:
            stream.write(output.text)
        elif output_format is OutputFormat.CSV:
            assert output.table is not None
            write_csv(*output.table, stream)
        else:
            json.dump(output.data, stream, indent=2)
            stream.write("\n")

    if output_format is OutputFormat.CSV and output.table is None:
        raise UsageError(f"{args.command} has no CSV output")
    if output.data is None and args.output is not None:
        raise UsageError(f"{args.command} does not support --output")
    if args.output_path is None:
        write(sys.stdout)
        return
    with open(args.output_path, "w", encoding="utf-8", newline="") as stream:
        write(stream)
    logger.info("Result written to %s", args.output_path)


def _error(kind: str, message: str) -> None:
    line = " ".join(str(message).split())
    print(f"{PROGRAM}: error: {kind}: {line}", file=sys.stderr)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line *argv* (without the program name) and return
    the exit status.

    >>> import contextlib, io
    >>> stream = io.StringIO()
    >>> with contextlib.redirect_stdout(stream):
    ...     status = run_command(["boundary", "--condition", "edge"])
    >>> status, json.loads(stream.getvalue())["holds"]
    (0, True)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_logging(args.verbose)
        config = RunConfig.load(
            args.config,
            args.overrides,
            args.workload_preset,
            output_path=args.output_path,
        )
        output = args.handler(args, config)
        _write(args, output, _format(args, output))
    except SystemExit as exit_:
        # --help and --version
        return exit_.code if isinstance(exit_.code, int) else 0
    except UsageError as error:
        _error("usage", str(error))
        return 2
    except ConfigError as error:
        _error("config", str(error))
        return 2
    except QuantityError as error:
        _error("quantity", str(error))
        return 2
    except ValueError as error:
        _error("value", str(error))
        return 2
    except RuntimeError as error:
        _error("evaluation", str(error))
        return 1
    except OSError as error:
        _error("output", f"{error.filename}: {error.strerror}")
        return 1
    if not output.success:
        _error(*output.failure.split(": ", 1))
        return 1
    return 0


def main() -> NoReturn:
    """Entry point of the ``splitric`` console script."""
    sys.exit(run_command())
