"""Sensitivity curves along one parameter, feasibility maps over two, and a
brute-force check of crossover points.

Grid points are evaluated one after the other in row-major order, so that
identical inputs give identical tables.
"""

import csv
import enum
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Optional, TextIO

import numpy as np

from ._compatibility import pairwise
from ._feasibility import (
    CrossoverResult,
    RegionLabel,
    classify,
    deadline_admission,
    difference_function,
)
from ._lifecycle import Scenario, Objective
from ._parameters import (
    resolve_parameter,
    parameter_dimension,
    parameter_label,
    with_parameter,
)
from ._quantities import Dimension
from ._types import Topology, WorkloadProfile, ScenarioUnavailable

logger = logging.getLogger(__name__)


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOGARITHMIC = "log"


def _grid(lo: float, hi: float, points: int, spacing: Spacing) -> list[float]:
    if spacing is Spacing.LOGARITHMIC:
        values = np.geomspace(lo, hi, points)
    else:
        values = np.linspace(lo, hi, points)
    grid = [float(value) for value in values]
    grid[0], grid[-1] = lo, hi
    return grid


def _check_range(
    owner: str, lo: float, hi: float, points: int, spacing: Spacing
) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"{owner}: invalid range [{lo!r}, {hi!r}]")
    if points < 2:
        raise ValueError(f"{owner}: at least 2 points needed, got {points!r}")
    if spacing is Spacing.LOGARITHMIC and not lo > 0:
        raise ValueError(f"{owner}: logarithmic spacing needs lo > 0, got {lo!r}")


@dataclass(frozen=True)
class AxisSpec:
    """A grid along one parameter.

    >>> axis = AxisSpec("input-size", 1e3, 1e5, 3, Spacing.LOGARITHMIC)
    >>> [round(value, 6) for value in axis.values()]
    [1000.0, 10000.0, 100000.0]

    :param parameter: Parameter path or short axis name. It is stored as
        full path.
    :param lo: First grid value, in the canonical unit of the parameter.
    :param hi: Last grid value.
    :param points: Number of grid values, at least 2.
    """

    parameter: str
    lo: float
    hi: float
    points: int
    spacing: Spacing = Spacing.LINEAR

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameter", resolve_parameter(self.parameter))
        _check_range(self.parameter, self.lo, self.hi, self.points, self.spacing)

    @property
    def dimension(self) -> Dimension:
        return parameter_dimension(self.parameter)

    @property
    def column(self) -> str:
        """CSV column name, e.g., *input_size_bits*."""
        return _column(parameter_label(self.parameter), self.dimension)

    def values(self) -> list[float]:
        """The grid values, ascending, with exact end points."""
        return _grid(self.lo, self.hi, self.points, self.spacing)


def _column(name: str, dimension: Dimension) -> str:
    suffix = dimension.column_suffix
    return f"{name}_{suffix}" if suffix else name


# Ranges swept by the sensitivity analyses, in canonical units
_DEFAULT_RANGES = {
    "input_size": (8e4, 4e8, Spacing.LOGARITHMIC),
    "complexity": (1e8, 5e11, Spacing.LOGARITHMIC),
    "wait_time": (0.0, 3600.0, Spacing.LINEAR),
    "uplink_rate": (5e7, 1e9, Spacing.LOGARITHMIC),
    "longevity": (1.0, 1e7, Spacing.LOGARITHMIC),
}


def default_axis(name: str, points: int = 200) -> AxisSpec:
    """Axis over the default range of one of the short axis names.

    >>> axis = default_axis("wait_time", 61)
    >>> axis.values()[1], axis.column
    (60.0, 'wait_time_s')
    """
    try:
        lo, hi, spacing = _DEFAULT_RANGES[name.replace("-", "_")]
    except KeyError:
        raise ValueError(f"no default range for axis {name!r}") from None
    return AxisSpec(name, lo, hi, points, spacing)


@dataclass(frozen=True)
class UrgencySpec:
    """Required freshness of the model: the longest tolerable duration of a
    learning cycle, in s. Its reciprocal is the required update frequency."""

    update_deadline: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.update_deadline) and self.update_deadline > 0):
            raise ValueError(
                f"update deadline must be positive, got {self.update_deadline!r}"
            )


def urgency_grid(
    lo: float, hi: float, points: int, spacing: Spacing = Spacing.LOGARITHMIC
) -> list[UrgencySpec]:
    """Update deadlines from *lo* to *hi* seconds.

    >>> [spec.update_deadline for spec in urgency_grid(1.0, 100.0, 3)]
    [1.0, 10.0, 100.0]
    """
    _check_range("update_deadline", lo, hi, points, spacing)
    return [UrgencySpec(value) for value in _grid(lo, hi, points, spacing)]


@dataclass(frozen=True)
class SkippedValue:
    """A grid value that violates an invariant of a profile."""

    value: float
    reason: str


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    energy: dict[Scenario, float]
    latency: dict[Scenario, float]
    winner_energy: Scenario
    winner_latency: Scenario


@dataclass(frozen=True)
class SweepTable:
    axis: AxisSpec
    scenarios: tuple[Scenario, ...]
    rows: list[SweepRow]
    skipped: list[SkippedValue] = field(default_factory=list)

    def header(self) -> list[str]:
        return (
            [self.axis.column]
            + [f"{s.value}_energy_J" for s in self.scenarios]
            + [f"{s.value}_latency_s" for s in self.scenarios]
            + ["winner_energy", "winner_latency"]
        )

    def records(self) -> list[list[Any]]:
        """Rows in the order of `header`."""
        return [
            [row.axis_value]
            + [row.energy[s] for s in self.scenarios]
            + [row.latency[s] for s in self.scenarios]
            + [row.winner_energy.value, row.winner_latency.value]
            for row in self.rows
        ]

    def as_dict(self) -> dict[str, Any]:
        return _table_dict(self.header(), self.records(), self.skipped)


def _check_scenarios(
    topology: Topology, scenarios: Iterable[Scenario]
) -> tuple[Scenario, ...]:
    chosen = tuple(sorted(set(scenarios), key=lambda s: s.rank))
    if not chosen:
        raise ValueError("empty scenario set")
    if Scenario.S3_MULTI_LAYER in chosen and not topology.has_multilayer:
        raise ScenarioUnavailable(
            "The multi-layer scenario needs a GEO node and an ISL"
        )
    return chosen


def _skip(
    skipped: list[SkippedValue], axis: str, value: float, error: Exception
) -> None:
    logger.warning("Skipped %s = %r: %s", axis, value, error)
    skipped.append(SkippedValue(value, str(error)))


def run_sweep(
    axis: AxisSpec,
    topology: Topology,
    workload: WorkloadProfile,
    scenarios: Iterable[Scenario] = tuple(Scenario),
) -> SweepTable:
    """Energy and latency of the *scenarios* along the *axis*, all other
    parameters held at their values in *topology* and *workload*.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> axis = AxisSpec("uplink_rate", 5e7, 5e8, 2)
    >>> table = run_sweep(axis, topology, workload, {Scenario.S1_GROUND_CENTRIC})
    >>> s1 = Scenario.S1_GROUND_CENTRIC
    >>> round(table.rows[0].energy[s1] / table.rows[1].energy[s1], 9)
    10.0

    Grid values that violate an invariant of a profile are left out and
    reported in the *skipped* list of the table.

    :raises ScenarioUnavailable: The multi-layer scenario is requested for
        a topology that cannot host it.
    """
    chosen = _check_scenarios(topology, scenarios)
    rows: list[SweepRow] = []
    skipped: list[SkippedValue] = []
    logger.debug("Sweep of %s over %d points", axis.parameter, axis.points)
    for value in axis.values():
        try:
            point = with_parameter(topology, workload, axis.parameter, value)
        except ValueError as error:
            _skip(skipped, axis.parameter, value, error)
            continue
        energy = classify(*point, Objective.ENERGY, chosen)
        latency = classify(*point, Objective.LATENCY, chosen)
        assert energy.winner is not None and latency.winner is not None
        rows.append(
            SweepRow(
                value,
                dict(energy.totals),
                dict(latency.totals),
                energy.winner,
                latency.winner,
            )
        )
    return SweepTable(axis, chosen, rows, skipped)


@dataclass(frozen=True)
class MapCell:
    x: float
    y: float
    label: RegionLabel


class MapKind(enum.Enum):
    ENERGY = "energy"
    LATENCY = "latency"


@dataclass(frozen=True)
class FeasibilityMap:
    """Labeled grid, in row-major order: the x value changes fastest."""

    kind: MapKind
    x_column: str
    y_column: str
    scenarios: tuple[Scenario, ...]
    cells: list[MapCell]
    skipped: list[SkippedValue] = field(default_factory=list)

    def header(self) -> list[str]:
        unit = "J" if self.kind is MapKind.ENERGY else "s"
        return (
            [self.x_column, self.y_column]
            + [f"{s.value}_{self.kind.value}_{unit}" for s in self.scenarios]
            + ["winner"]
        )

    def records(self) -> list[list[Any]]:
        """Cells in the order of `header`. Infeasible cells of a latency map
        have the winner *infeasible*."""
        return [
            [cell.x, cell.y]
            + [cell.label.totals[s] for s in self.scenarios]
            + ["infeasible" if cell.label.winner is None else cell.label.winner.value]
            for cell in self.cells
        ]

    def as_dict(self) -> dict[str, Any]:
        return _table_dict(self.header(), self.records(), self.skipped)


def run_energy_map(
    topology: Topology,
    workload: WorkloadProfile,
    x: Optional[AxisSpec] = None,
    y: Optional[AxisSpec] = None,
    include_geo: bool = False,
) -> FeasibilityMap:
    """Energy optimal scenario over a grid of two parameters, by default
    input size and inference complexity over their default ranges.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> energy_map = run_energy_map(
    ...     topology, workload,
    ...     AxisSpec("input_size", 8e4, 1.6e8, 2),
    ...     AxisSpec("complexity", 1e9, 1e10, 2))
    >>> [(cell.x, cell.y, cell.label.winner.value) for cell in energy_map.cells]
    ... # doctest: +NORMALIZE_WHITESPACE
    [(80000.0, 1000000000.0, 's1'), (160000000.0, 1000000000.0, 's2'),
     (80000.0, 10000000000.0, 's1'), (160000000.0, 10000000000.0, 's2')]

    :param include_geo: Let the multi-layer scenario compete, too.
    """
    x = default_axis("input_size", 100) if x is None else x
    y = default_axis("complexity", 100) if y is None else y
    scenarios = (Scenario.S1_GROUND_CENTRIC, Scenario.S2_SPLIT_RIC)
    if include_geo:
        scenarios += (Scenario.S3_MULTI_LAYER,)
    chosen = _check_scenarios(topology, scenarios)
    cells: list[MapCell] = []
    skipped: list[SkippedValue] = []
    logger.debug("Energy map over %d x %d points", x.points, y.points)
    for y_value in y.values():
        try:
            row_point = with_parameter(topology, workload, y.parameter, y_value)
        except ValueError as error:
            _skip(skipped, y.parameter, y_value, error)
            continue
        for x_value in x.values():
            try:
                point = with_parameter(*row_point, x.parameter, x_value)
            except ValueError as error:
                _skip(skipped, x.parameter, x_value, error)
                continue
            label = classify(*point, Objective.ENERGY, chosen)
            cells.append(MapCell(x_value, y_value, label))
    return FeasibilityMap(MapKind.ENERGY, x.column, y.column, chosen, cells, skipped)


def run_latency_map(
    topology: Topology,
    workload: WorkloadProfile,
    x: Optional[AxisSpec] = None,
    y: Optional[Sequence[UrgencySpec]] = None,
) -> FeasibilityMap:
    """Admissible learning loop over a grid of a parameter, by default the
    wait time for a ground station pass, and the update deadline. Each cell
    is labeled by `deadline_admission`.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> latency_map = run_latency_map(
    ...     topology, workload, AxisSpec("wait_time", 0.0, 2700.0, 2),
    ...     urgency_grid(5.0, 60.0, 2))
    >>> [(cell.x, cell.y, cell.label.winner) for cell in latency_map.cells]
    ... # doctest: +NORMALIZE_WHITESPACE
    [(0.0, 5.0, None), (2700.0, 5.0, None),
     (0.0, 60.0, <Scenario.S2_SPLIT_RIC: 's2'>),
     (2700.0, 60.0, <Scenario.S3_MULTI_LAYER: 's3'>)]
    """
    x = default_axis("wait_time", 61) if x is None else x
    y = urgency_grid(1.0, 3600.0, 50) if y is None else y
    scenarios = (Scenario.S2_SPLIT_RIC,)
    if topology.has_multilayer:
        scenarios += (Scenario.S3_MULTI_LAYER,)
    columns: list[tuple[float, tuple[Topology, WorkloadProfile]]] = []
    skipped: list[SkippedValue] = []
    for x_value in x.values():
        try:
            columns.append(
                (x_value, with_parameter(topology, workload, x.parameter, x_value))
            )
        except ValueError as error:
            _skip(skipped, x.parameter, x_value, error)
    logger.debug("Latency map over %d x %d points", len(columns), len(y))
    cells = [
        MapCell(
            x_value,
            urgency.update_deadline,
            deadline_admission(*point, urgency.update_deadline),
        )
        for urgency in y
        for x_value, point in columns
    ]
    return FeasibilityMap(
        MapKind.LATENCY,
        x.column,
        _column("update_deadline", Dimension.SECONDS),
        scenarios,
        cells,
        skipped,
    )


# -- Brute-force check of crossovers --

#: Minimal number of grid points of `oracle_verify`.
ORACLE_POINTS = 10_000


@dataclass(frozen=True)
class OracleReport:
    """Result of scanning a cost difference on a dense grid.

    *grid_crossing* is the grid value after which the sign of the difference
    changes, and *grid_step* the distance to the next grid value. The
    *deviation* is the distance between the solver result and the grid
    crossing.
    """

    axis: str
    points: int
    sign_changes: int
    grid_crossing: Optional[float]
    grid_step: Optional[float]
    deviation: Optional[float]
    passed: bool
    message: str

    def as_dict(self) -> dict[str, Any]:
        return {
            "axis": self.axis,
            "points": self.points,
            "sign_changes": self.sign_changes,
            "grid_crossing": self.grid_crossing,
            "grid_step": self.grid_step,
            "deviation": self.deviation,
            "passed": self.passed,
            "message": self.message,
        }


def oracle_verify(
    cross: CrossoverResult,
    axis: AxisSpec,
    topology: Topology,
    workload: WorkloadProfile,
    points: int = ORACLE_POINTS,
) -> OracleReport:
    """Check a crossover against a scan of the cost difference on a grid of
    at least *points* values of the *axis* range.

    A bracketed crossover passes if the difference changes its sign exactly
    once on the grid, and the crossover lies within one grid step of that
    change. A crossover that is not bracketed passes if the sign never
    changes. Failures are reported, not raised.

    >>> from splitric import paper_defaults, crossover, CostBasis
    >>> topology, workload = paper_defaults()
    >>> pair = (Scenario.S1_GROUND_CENTRIC, Scenario.S2_SPLIT_RIC)
    >>> axis = default_axis("input_size")
    >>> result = crossover("input_size", Objective.ENERGY, pair, topology,
    ...                    workload, (axis.lo, axis.hi), CostBasis.PER_OPERATION)
    >>> report = oracle_verify(result, axis, topology, workload)
    >>> report.passed, report.sign_changes
    (True, 1)
    """
    if axis.parameter != cross.axis:
        raise ValueError(
            f"axis {axis.parameter!r} differs from crossover axis {cross.axis!r}"
        )
    grid_axis = replace(axis, points=max(axis.points, points))
    difference = difference_function(
        cross.axis, cross.objective, cross.pair, topology, workload, cross.basis
    )
    values: list[float] = []
    differences: list[float] = []
    for value in grid_axis.values():
        try:
            differences.append(difference(value))
        except ValueError:
            continue
        values.append(value)
    signs = np.sign(np.array(differences))
    nonzero = np.flatnonzero(signs)
    changes = np.flatnonzero(signs[nonzero][1:] != signs[nonzero][:-1])
    sign_changes = int(changes.size)

    def report(
        passed: bool,
        message: str,
        crossing: Optional[float] = None,
        step: Optional[float] = None,
        deviation: Optional[float] = None,
    ) -> OracleReport:
        return OracleReport(
            cross.axis,
            len(values),
            sign_changes,
            crossing,
            step,
            deviation,
            passed,
            message,
        )

    if not cross.bracketed:
        return report(
            sign_changes == 0,
            f"solver found no crossover, grid shows {sign_changes} sign changes",
        )
    assert cross.value is not None
    if sign_changes != 1:
        return report(False, f"expected 1 sign change, grid shows {sign_changes}")
    # Sign changes between two consecutive grid values with non-zero difference
    left = int(nonzero[changes[0]])
    right = int(nonzero[changes[0] + 1])
    crossing, step = values[left], values[right] - values[left]
    if right - left > 1:
        # An exact zero of the difference lies in between
        crossing = values[left + 1]
        step = max(b - a for a, b in pairwise(values[left : right + 1]))
    deviation = abs(cross.value - crossing)
    passed = deviation <= step
    return report(
        passed,
        f"crossover {cross.value!r} is {deviation!r} from the grid crossing"
        f" {crossing!r} (grid step {step!r})",
        crossing=crossing,
        step=step,
        deviation=deviation,
    )


# -- Tables --


def _table_dict(
    header: list[str], records: list[list[Any]], skipped: list[SkippedValue]
) -> dict[str, Any]:
    return {
        "columns": header,
        "rows": records,
        "skipped": [{"value": s.value, "reason": s.reason} for s in skipped],
    }


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def write_csv(
    header: Sequence[str], records: Iterable[Sequence[Any]], stream: TextIO
) -> None:
    """Write a table as CSV: numbers in full precision scientific notation,
    LF line endings.

    >>> import io
    >>> stream = io.StringIO()
    >>> write_csv(["input_size_bits", "winner_energy"], [[80000.0, "s1"]], stream)
    >>> stream.getvalue()
    'input_size_bits,winner_energy\\n8.0000000000000000e+04,s1\\n'
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for record in records:
        writer.writerow([_cell(value) for value in record])


def write_sweep_csv(table: SweepTable, stream: TextIO) -> None:
    write_csv(table.header(), table.records(), stream)


def write_map_csv(feasibility_map: FeasibilityMap, stream: TextIO) -> None:
    write_csv(feasibility_map.header(), feasibility_map.records(), stream)
