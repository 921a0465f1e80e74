"""Self-contained acceptance suite of the model, run by ``splitric validate``.

Each check recomputes a published or derived reference result from the
reference parameters and compares it with its expected value. The suite
needs no external data.
"""

import logging
import math
import random
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any, Optional

from ._config import paper_defaults
from ._feasibility import (
    CostBasis,
    Method,
    classify,
    complexity_ceiling,
    continuity_gain,
    crossover,
    uplink_rate_for_ceiling,
)
from ._lifecycle import (
    Scenario,
    Objective,
    amortized_energy_per_inference,
    control_loop_latency,
    lifecycle_energy,
    lifecycle_latency,
)
from ._parameters import with_parameter
from ._sweep import (
    AxisSpec,
    Spacing,
    default_axis,
    oracle_verify,
    run_latency_map,
    run_sweep,
    urgency_grid,
)
from ._types import Topology, WorkloadProfile

logger = logging.getLogger(__name__)

S1, S2, S3 = Scenario

#: Number of random parameter draws of the invariant check.
RANDOM_DRAWS = 1000


@dataclass
class Check:
    """Outcome of one acceptance check, with report lines."""

    number: int
    title: str
    passed: bool = True
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def expect(self, condition: bool, message: str) -> None:
        """Record *message*, and fail the check if *condition* is false."""
        if not condition:
            self.passed = False
            message = f"FAILED: {message}"
        self.details.append(message)


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def lines(self) -> Iterator[str]:
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            yield f"{status} [{check.number}] {check.title} ({check.seconds:.3f} s)"
            for detail in check.details:
                yield f"    {detail}"
        failed = sum(not check.passed for check in self.checks)
        yield (
            f"{len(self.checks) - failed} of {len(self.checks)} checks passed"
            if failed
            else f"all {len(self.checks)} checks passed"
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "number": check.number,
                    "title": check.title,
                    "passed": check.passed,
                    "details": check.details,
                    "seconds": check.seconds,
                }
                for check in self.checks
            ],
        }


def _relative_error(value: float, expected: float) -> float:
    return abs(value - expected) / abs(expected)


def _at(
    topology: Topology, workload: WorkloadProfile, **values: float
) -> tuple[Topology, WorkloadProfile]:
    for path, value in values.items():
        topology, workload = with_parameter(topology, workload, path, value)
    return topology, workload


def draw_parameters(
    rng: random.Random, topology: Topology, workload: WorkloadProfile
) -> tuple[Topology, WorkloadProfile]:
    """A random point within the swept parameter ranges of input size,
    inference complexity, wait time, uplink rate and longevity."""

    def log_uniform(lo: float, hi: float) -> float:
        return math.exp(rng.uniform(math.log(lo), math.log(hi)))

    return _at(
        topology,
        workload,
        input_size=log_uniform(8e4, 4e8),
        complexity=log_uniform(1e8, 5e11),
        wait_time=rng.uniform(0.0, 3600.0),
        uplink_rate=log_uniform(5e7, 1e9),
        longevity=float(rng.randint(1, 1_000_000)),
    )


# -- The checks --


def _data_volume_crossover(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    axis = default_axis("input_size")
    result = crossover(
        "input_size",
        Objective.ENERGY,
        (S1, S2),
        topology,
        workload,
        (axis.lo, axis.hi),
        CostBasis.PER_OPERATION,
    )
    check.expect(result.bracketed, "S1/S2 per-operation energy crossover bracketed")
    if result.value is not None:
        kilobytes = result.value / 8000
        deviation = _relative_error(kilobytes, 85.0)
        check.expect(
            deviation <= 0.05,
            f"crossover at {kilobytes:.2f} kB, {deviation:.2%} from 85 kB",
        )


def _energy_reduction(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    point = _at(topology, workload, input_size=8e7)
    s1 = lifecycle_energy(S1, *point).total
    s2 = lifecycle_energy(S2, *point).total
    check.expect(
        _relative_error(s1, 240300.0) <= 1e-9, f"S1 energy {s1!r} J, expected 240300 J"
    )
    check.expect(
        _relative_error(s2, 2300.5) <= 1e-9, f"S2 energy {s2!r} J, expected 2300.5 J"
    )
    reduction = 1 - s2 / s1
    check.expect(reduction > 0.9, f"S2 saves {reduction:.2%} of the S1 energy")


def _continuity_gain(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    verdict = continuity_gain(topology, workload)
    check.expect(
        abs(verdict.lhs - 0.82) <= 1e-9,
        f"GEO overhead over ground overhead {verdict.lhs:.6f} s, expected 0.82 s",
    )
    axis = AxisSpec("wait_time", 60.0, 3600.0, 100)
    table = run_sweep(axis, topology, workload)
    losers = [row.axis_value for row in table.rows if row.winner_latency is not S3]
    check.expect(
        not losers and len(table.rows) == 100,
        f"S3 wins the latency classification for all {len(table.rows)} wait times"
        f" from 60 s to 3600 s"
        + (f", except {losers[0]!r} s" if losers else ""),
    )


def _learning_loop(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    breakdown = lifecycle_latency(S3, topology, workload)
    loop = breakdown.learning_total
    check.expect(
        _relative_error(loop, 2.0) <= 0.1,
        f"S3 learning loop {loop:.4f} s, expected about 2 s",
    )
    check.expect(breakdown.wait == 0.0, "S3 wait component is exactly 0")


def _complexity_ceiling(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    ceiling = complexity_ceiling(topology, workload)
    check.expect(
        _relative_error(ceiling, 6e10) <= 1e-9,
        f"complexity ceiling {ceiling / 1e9:.3f} GFLOP at"
        f" {topology.feeder.uplink_rate / 1e6:g} Mbit/s, expected 60 GFLOP",
    )
    slow = _at(topology, workload, uplink_rate=1.2e8)
    slow_ceiling = complexity_ceiling(*slow)
    check.expect(
        _relative_error(slow_ceiling, 2.5e11) <= 1e-9,
        f"complexity ceiling {slow_ceiling / 1e9:.3f} GFLOP at 120 Mbit/s,"
        f" expected 250 GFLOP",
    )
    rate = uplink_rate_for_ceiling(topology, workload, 2.5e11)
    check.expect(
        _relative_error(rate, 1.2e8) <= 1e-9,
        f"a 250 GFLOP ceiling needs an uplink rate of {rate / 1e6:.3f} Mbit/s",
    )


def _oracle_equivalence(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    cases = [
        (default_axis("input_size"), Objective.ENERGY, CostBasis.PER_OPERATION, {}),
        (default_axis("complexity"), Objective.ENERGY, CostBasis.LIFECYCLE, {}),
        (
            AxisSpec("longevity", 1.0, 1e5, 200, Spacing.LOGARITHMIC),
            Objective.ENERGY,
            CostBasis.AMORTIZED,
            {},
        ),
        (
            AxisSpec("wait_time", 0.0, 18000.0, 200),
            Objective.LATENCY,
            CostBasis.LIFECYCLE,
            {},
        ),
        (
            default_axis("uplink_rate"),
            Objective.ENERGY,
            CostBasis.PER_OPERATION,
            {"input_size": 8e5},
        ),
    ]
    for axis, objective, basis, changes in cases:
        point = _at(topology, workload, **changes)
        result = crossover(
            axis.parameter, objective, (S1, S2), *point, (axis.lo, axis.hi), basis
        )
        report = oracle_verify(result, axis, *point)
        check.expect(
            result.bracketed and report.passed,
            f"{axis.parameter} ({basis.value} {objective.value}, {result.method.value})"
            f" at {result.value!r}: {report.message}",
        )
    axis = default_axis("input_size")
    closed_form, bisection = (
        crossover(
            "input_size",
            Objective.ENERGY,
            (S1, S2),
            topology,
            workload,
            (axis.lo, axis.hi),
            CostBasis.PER_OPERATION,
            method,
        ).value
        for method in (Method.CLOSED_FORM, Method.BISECTION)
    )
    assert closed_form is not None and bisection is not None
    agreement = _relative_error(bisection, closed_form)
    check.expect(
        agreement <= 2e-9,
        f"closed form and bisection agree to {agreement:.1e} relative",
    )


def _increases(
    scenario: Scenario,
    topology: Topology,
    workload: WorkloadProfile,
    **changes: float,
) -> bool:
    before = lifecycle_energy(scenario, topology, workload).total
    after = lifecycle_energy(scenario, *_at(topology, workload, **changes)).total
    return after > before


def _invariants(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    rng = random.Random(20240517)
    failures: dict[str, int] = {}

    def expect(name: str, condition: bool) -> None:
        failures.setdefault(name, 0)
        if not condition:
            failures[name] += 1

    for _ in range(RANDOM_DRAWS):
        t, w = draw_parameters(rng, topology, workload)
        _, other = draw_parameters(rng, topology, workload)
        for scenario in Scenario:
            energy = lifecycle_energy(scenario, t, w)
            latency = lifecycle_latency(scenario, t, w)
            expect(
                "decomposition",
                energy.total == math.fsum(energy.components().values())
                and latency.total == math.fsum(latency.components().values()),
            )
        moved = _at(t, w, input_size=other.inference.input_size)
        expect(
            "input size independence of S2/S3 energy",
            all(
                lifecycle_energy(s, t, w).total == lifecycle_energy(s, *moved).total
                for s in (S2, S3)
            ),
        )
        inference = w.inference
        expect(
            "monotonicity",
            _increases(S1, t, w, input_size=inference.input_size * 1.5)
            and _increases(S1, t, w, longevity=w.longevity + 1)
            and _increases(S1, t, w, uplink_rate=t.feeder.uplink_rate / 1.5)
            and _increases(S2, t, w, complexity=inference.complexity * 1.5)
            and _increases(S2, t, w, longevity=w.longevity + 1),
        )
        t1 = lifecycle_latency(S1, t, w).total
        t2 = lifecycle_latency(S2, t, w).total
        identity = t.feeder.wait_time + w.longevity * (
            inference.complexity / t.leo.compute_capacity
            - t.feeder.rtt
            - inference.input_size / t.feeder.uplink_rate
        )
        expect(
            "latency difference identity",
            abs((t2 - t1) - identity) <= 1e-9 * max(t1, t2),
        )
        # At the reference rates, the update overhead fades below 0.1 %
        limit = inference.complexity * topology.leo.energy_per_flop
        amortized = amortized_energy_per_inference(
            S2, *_at(topology, w, longevity=1e9)
        )
        expect("amortization limit", _relative_error(amortized, limit) <= 1e-3)
        expect("latency map monotonicity", _latency_map_monotone(t, w))
        axis = default_axis("input_size", 4)
        expect(
            "sweep determinism",
            run_sweep(axis, t, w).records() == run_sweep(axis, t, w).records(),
        )
    for name, count in failures.items():
        check.expect(count == 0, f"{name}: {count} violations")
    check.details.append(
        f"{RANDOM_DRAWS} random parameter draws, each with a 4 x 4 latency map"
        " and a repeated sweep"
    )


def _latency_map_monotone(
    topology: Topology, workload: WorkloadProfile, points: int = 4
) -> bool:
    x = AxisSpec("wait_time", 0.0, 3600.0, points)
    y = urgency_grid(1.0, 1e6, points)
    cells = run_latency_map(topology, workload, x, y).cells
    grid = [cells[i * points : (i + 1) * points] for i in range(points)]
    for row in grid:
        split = [cell.label.winner is S2 for cell in row]
        # Once S2 misses the deadline, it misses it for all longer waits
        if any(b and not a for a, b in zip(split, split[1:])):
            return False
    for column in zip(*grid):
        infeasible = [cell.label.winner is None for cell in column]
        # Infeasible cells only below feasible ones
        if any(a is False and b is True for a, b in zip(infeasible, infeasible[1:])):
            return False
    return True


def _control_loop(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    deadline = workload.inference.deadline
    misses = [
        control_loop_latency(S1, *_at(topology, workload, input_size=value))
        for value in default_axis("input_size", 100).values()
    ]
    check.expect(
        not any(loop.deadline_met for loop in misses),
        f"S1 control loop exceeds {deadline * 1e3:g} ms for all inputs from 10 kB",
    )
    complexities = AxisSpec("complexity", 1e8, 1e11, 100, Spacing.LOGARITHMIC)
    meets = [
        control_loop_latency(scenario, *_at(topology, workload, complexity=value))
        for value in complexities.values()
        for scenario in (S2, S3)
    ]
    check.expect(
        all(loop.deadline_met for loop in meets),
        f"S2/S3 control loops meet {deadline * 1e3:g} ms up to 100 GFLOP",
    )


def _longevity_threshold(
    check: Check, topology: Topology, workload: WorkloadProfile
) -> None:
    result = crossover(
        "longevity",
        Objective.ENERGY,
        (S1, S2),
        topology,
        workload,
        (1.0, 1e7),
        CostBasis.AMORTIZED,
    )
    check.expect(
        result.value is not None and 200 < result.value < 300,
        f"S2 saves energy from {result.value!r} inference events on",
    )
    label = classify(topology, workload, Objective.ENERGY, (S1, S2))
    check.expect(
        label.winner is S2, "S2 wins the energy comparison at 100000 inference events"
    )


_CHECKS: list[tuple[str, Callable[[Check, Topology, WorkloadProfile], None]]] = [
    ("Data-volume crossover", _data_volume_crossover),
    ("Energy reduction of on-board inference", _energy_reduction),
    ("Continuity gain of the GEO hub", _continuity_gain),
    ("Learning loop of the multi-layer scenario", _learning_loop),
    ("Complexity ceiling", _complexity_ceiling),
    ("Crossovers against grid scans", _oracle_equivalence),
    ("Invariants on random parameters", _invariants),
    ("Control loop deadlines", _control_loop),
    ("Amortization threshold", _longevity_threshold),
]


def run_validation(only: Optional[set[int]] = None) -> ValidationReport:
    """Run the acceptance checks on the reference parameters.

    >>> report = run_validation({1, 5})
    >>> report.passed
    True
    >>> print("\\n".join(report.checks[1].details))
    complexity ceiling 60.000 GFLOP at 500 Mbit/s, expected 60 GFLOP
    complexity ceiling 250.000 GFLOP at 120 Mbit/s, expected 250 GFLOP
    a 250 GFLOP ceiling needs an uplink rate of 120.000 Mbit/s

    :param only: Numbers of the checks to run, all by default.
    """
    topology, workload = paper_defaults()
    checks = []
    for number, (title, function) in enumerate(_CHECKS, start=1):
        if only is not None and number not in only:
            continue
        check = Check(number, title)
        start = time.perf_counter()
        function(check, topology, workload)
        check.seconds = time.perf_counter() - start
        logger.info(
            "Check %d %s in %.3f s",
            number,
            "passed" if check.passed else "failed",
            check.seconds,
        )
        checks.append(check)
    return ValidationReport(checks)
