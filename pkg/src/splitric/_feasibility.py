"""Dominance conditions between the scenarios, crossover points along a
parameter axis, and classification of a point into its optimal scenario."""

import enum
import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any, Optional

import scipy.optimize

from ._lifecycle import Scenario, Objective, lifecycle, update_overhead
from ._parameters import (
    resolve_parameter,
    parameter_dimension,
    parameter_label,
    with_parameter,
)
from ._types import NodeProfile, Topology, WorkloadProfile, ScenarioUnavailable

logger = logging.getLogger(__name__)


# -- Boundary conditions --


class Condition(enum.Enum):
    """The three analytic dominance conditions."""

    EDGE_ADVANTAGE = "edge"
    LINK_EFFICIENCY = "link"
    CONTINUITY_GAIN = "continuity"

    @property
    def units(self) -> str:
        return "s" if self is Condition.CONTINUITY_GAIN else "J"


@dataclass(frozen=True)
class BoundaryVerdict:
    """Outcome of a dominance condition of the form *lhs < rhs*.

    The *margin* is rhs - lhs, so the condition holds exactly if the margin
    is positive. Ties do not hold.
    """

    condition: Condition
    lhs: float
    rhs: float
    margin: float = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "margin", self.rhs - self.lhs)
        object.__setattr__(self, "holds", self.margin > 0)

    def as_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition.value,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "units": self.condition.units,
        }


def edge_advantage(topology: Topology, workload: WorkloadProfile) -> BoundaryVerdict:
    """On-board inference beats streaming the telemetry to the ground, per
    operation: ω_inf · ε_LEO < P_tx · δ_in / R_ul.

    >>> from splitric import paper_defaults, with_parameter
    >>> topology, workload = paper_defaults()
    >>> point = with_parameter(topology, workload, "input_size", 680000.0)
    >>> verdict = edge_advantage(*point)
    >>> verdict.holds, round(verdict.rhs, 12)
    (True, 0.0204)
    """
    feeder = topology.feeder
    inference = workload.inference
    return BoundaryVerdict(
        Condition.EDGE_ADVANTAGE,
        lhs=inference.complexity * topology.leo.energy_per_flop,
        rhs=feeder.tx_power * inference.input_size / feeder.uplink_rate,
    )


def link_efficiency(topology: Topology, workload: WorkloadProfile) -> BoundaryVerdict:
    """Offloading the training over the ISL, including the training energy
    of the GEO hub, costs less than offloading the dataset over the feeder
    link.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> verdict = link_efficiency(topology, workload)
    >>> verdict.holds, round(verdict.lhs, 6), verdict.rhs
    (False, 15004.01, 300.0)

    :raises ScenarioUnavailable: The topology has no GEO hub or no ISL.
    """
    geo, isl = topology.multilayer()
    feeder = topology.feeder
    dataset = workload.training.dataset_size
    model_size = workload.model_size
    geo_overhead = (
        workload.training.complexity * geo.energy_per_flop
        + isl.rx_power * dataset / isl.uplink_rate
        + isl.tx_power * model_size / isl.downlink_rate
    )
    return BoundaryVerdict(
        Condition.LINK_EFFICIENCY,
        lhs=isl.tx_power * dataset / isl.uplink_rate + geo_overhead,
        rhs=feeder.tx_power * dataset / feeder.uplink_rate,
    )


def continuity_gain(topology: Topology, workload: WorkloadProfile) -> BoundaryVerdict:
    """The time lost waiting for a ground station pass exceeds the additional
    propagation and training time of the GEO hub. Only a single wait is
    charged, although the split scenario waits twice per lifecycle.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> verdict = continuity_gain(topology, workload)
    >>> verdict.holds, round(verdict.lhs, 9), verdict.rhs
    (True, 0.82, 600.0)

    :raises ScenarioUnavailable: The topology has no GEO hub or no ISL.
    """
    geo, isl = topology.multilayer()
    training = workload.training.complexity
    geo_overhead = isl.rtt + training / geo.compute_capacity
    ground_overhead = topology.feeder.rtt + training / topology.ground.compute_capacity
    return BoundaryVerdict(
        Condition.CONTINUITY_GAIN,
        lhs=geo_overhead - ground_overhead,
        rhs=topology.feeder.wait_time,
    )


def boundary(
    condition: Condition, topology: Topology, workload: WorkloadProfile
) -> BoundaryVerdict:
    """Evaluate the given *condition*."""
    if condition is Condition.EDGE_ADVANTAGE:
        return edge_advantage(topology, workload)
    if condition is Condition.LINK_EFFICIENCY:
        return link_efficiency(topology, workload)
    return continuity_gain(topology, workload)


# -- Costs on different bases --


class CostBasis(enum.Enum):
    """What the cost of a scenario refers to.

    LIFECYCLE: the lifecycle total at the configured longevity.
    PER_OPERATION: the cost of a single inference event, the limit of the
    cost per event for infinite longevity.
    AMORTIZED: update overhead plus inference cost, divided by the number of
    inference events. For energy, the ground-centric scenario trains on the
    telemetry it streams anyway and has no separate update overhead. Its
    waits, offload and training still delay the first decision, so for
    latency its overhead is charged like that of any other scenario.
    """

    LIFECYCLE = "lifecycle"
    PER_OPERATION = "per-operation"
    AMORTIZED = "amortized"


def scenario_cost(
    scenario: Scenario,
    objective: Objective,
    topology: Topology,
    workload: WorkloadProfile,
    basis: CostBasis = CostBasis.LIFECYCLE,
) -> float:
    """Cost of a scenario for the *objective*, on the given *basis*.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> scenario_cost(Scenario.S1_GROUND_CENTRIC, Objective.ENERGY, topology,
    ...               workload, CostBasis.PER_OPERATION)
    1.2
    """
    if basis is CostBasis.LIFECYCLE:
        return lifecycle(scenario, objective, topology, workload).total
    if basis is CostBasis.PER_OPERATION:
        return lifecycle(scenario, objective, topology, workload, 1.0).inference_total
    inference = lifecycle(scenario, objective, topology, workload).inference_total
    overhead = (
        0.0
        if scenario is Scenario.S1_GROUND_CENTRIC and objective is Objective.ENERGY
        else update_overhead(scenario, objective, topology, workload)
    )
    return (overhead + inference) / workload.longevity


# -- Crossover points --


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    BISECTION = "bisection"


# Axes along which every cost difference is affine, and the transformation
# of the axis value that makes it affine. For the uplink rate, the costs are
# affine in the reciprocal rate.
_AFFINE_AXES: Mapping[str, Callable[[float], float]] = {
    "workload.inference.input_size": lambda x: x,
    "workload.inference.complexity": lambda x: x,
    "links.feeder.wait_time": lambda x: x,
    "links.feeder.uplink_rate": lambda x: 1.0 / x,
}

BISECTION_RTOL = 1e-9
BISECTION_XTOL = 1e-12
BISECTION_MAXITER = 200
# Residuals are accepted up to this fraction of the compared costs
RESIDUAL_RTOL = 1e-6


def difference_function(
    axis: str,
    objective: Objective,
    pair: tuple[Scenario, Scenario],
    topology: Topology,
    workload: WorkloadProfile,
    basis: CostBasis = CostBasis.LIFECYCLE,
) -> Callable[[float], float]:
    """Function that maps a value of the parameter *axis* to the cost of the
    first scenario of the *pair* minus the cost of the second.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> f = difference_function("input_size", Objective.ENERGY,
    ...     (Scenario.S1_GROUND_CENTRIC, Scenario.S2_SPLIT_RIC), topology, workload,
    ...     CostBasis.PER_OPERATION)
    >>> f(4e5) < 0 < f(4e6)
    True
    """
    path = resolve_parameter(axis)
    first, second = pair

    def difference(value: float) -> float:
        changed_topology, changed_workload = with_parameter(
            topology, workload, path, value
        )
        return scenario_cost(
            first, objective, changed_topology, changed_workload, basis
        ) - scenario_cost(second, objective, changed_topology, changed_workload, basis)

    return difference


@dataclass(frozen=True)
class CrossoverResult:
    """Point along an axis where two scenarios cost the same.

    If the cost difference does not change its sign over the search range,
    the result is not *bracketed*, *value* and *residual* are None, and
    *sign* tells which scenario was more expensive throughout: +1 for the
    first of the pair, -1 for the second, 0 if both costs are equal over the
    whole range.

    For a bracketed result, *residual* is the cost difference at *value*, in
    the units of the objective, and *tolerance* is the accepted bound of its
    absolute value.
    """

    axis: str
    objective: Objective
    pair: tuple[Scenario, Scenario]
    basis: CostBasis
    search_range: tuple[float, float]
    method: Method
    bracketed: bool
    value: Optional[float] = None
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    iterations: int = 0
    sign: int = 0

    @property
    def units(self) -> str:
        """Symbol of the canonical unit of the axis values."""
        return parameter_dimension(self.axis).value

    def as_dict(self) -> dict[str, Any]:
        return {
            "axis": parameter_label(self.axis),
            "parameter": self.axis,
            "units": self.units,
            "objective": self.objective.value,
            "pair": [scenario.value for scenario in self.pair],
            "basis": self.basis.value,
            "search_range": list(self.search_range),
            "method": self.method.value,
            "bracketed": self.bracketed,
            "value": self.value,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "iterations": self.iterations,
            "sign": self.sign,
        }


def _sign(value: float) -> int:
    return (value > 0) - (value < 0)


def _checked(difference: Callable[[float], float]) -> Callable[[float], float]:
    def checked(value: float) -> float:
        result = difference(value)
        if not math.isfinite(result):
            raise RuntimeError(
                f"cost difference is not finite at axis value {value!r}"
            )
        return result

    return checked


def crossover(
    axis: str,
    objective: Objective,
    pair: tuple[Scenario, Scenario],
    topology: Topology,
    workload: WorkloadProfile,
    search_range: tuple[float, float],
    basis: CostBasis = CostBasis.LIFECYCLE,
    method: Optional[Method] = None,
) -> CrossoverResult:
    """Find the value of the parameter *axis* within *search_range* where
    both scenarios of the *pair* cost the same, all other parameters fixed.

    Along axes where the cost difference is affine (input size, inference
    complexity, wait time, and the reciprocal of the uplink rate), the
    crossover is computed in closed form. Otherwise, or if *method* demands
    it, the crossover is searched by bisection.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> result = crossover(
    ...     "input_size", Objective.ENERGY,
    ...     (Scenario.S1_GROUND_CENTRIC, Scenario.S2_SPLIT_RIC),
    ...     topology, workload, (8e4, 4e8), CostBasis.PER_OPERATION)
    >>> result.method.value, round(result.value / 8000, 2)
    ('closed_form', 83.33)

    :param axis: Parameter path or short axis name, see `resolve_parameter`.
    :param pair: The compared scenarios.
    :param search_range: Lower and upper end of the search, in the canonical
        unit of the parameter.
    :param basis: The compared costs.
    :param method: Forces the solver. The closed form is only available on
        affine axes.
    :raises ValueError: The range is empty or not finite, or the closed form
        is forced on an axis that is not affine.
    :raises RuntimeError: A cost difference is not finite.
    """
    path = resolve_parameter(axis)
    lo, hi = search_range
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid search range [{lo!r}, {hi!r}]")
    affine = path in _AFFINE_AXES
    if method is None:
        method = Method.CLOSED_FORM if affine else Method.BISECTION
    elif method is Method.CLOSED_FORM and not affine:
        raise ValueError(f"no closed form along axis {axis!r}")

    difference = _checked(
        difference_function(path, objective, pair, topology, workload, basis)
    )

    def result(bracketed: bool, **kwargs: Any) -> CrossoverResult:
        return CrossoverResult(
            path, objective, pair, basis, (lo, hi), method, bracketed, **kwargs
        )

    def tolerance_at(value: float) -> float:
        changed_topology, changed_workload = with_parameter(
            topology, workload, path, value
        )
        scale = max(
            abs(scenario_cost(s, objective, changed_topology, changed_workload, basis))
            for s in pair
        )
        return RESIDUAL_RTOL * scale

    f_lo, f_hi = difference(lo), difference(hi)
    sign_lo, sign_hi = _sign(f_lo), _sign(f_hi)
    if sign_lo == 0 or sign_hi == 0:
        value = lo if sign_lo == 0 else hi
        if sign_lo == sign_hi == 0:
            logger.debug("Costs equal at both ends of [%r, %r]", lo, hi)
            return result(False, sign=0)
        return result(
            True, value=value, residual=0.0, tolerance=tolerance_at(value)
        )
    if sign_lo == sign_hi:
        logger.debug("No crossover in [%r, %r], sign %d", lo, hi, sign_lo)
        return result(False, sign=sign_lo)

    if method is Method.CLOSED_FORM:
        transform = _AFFINE_AXES[path]
        t_lo, t_hi = transform(lo), transform(hi)
        t_root = t_lo - f_lo * (t_hi - t_lo) / (f_hi - f_lo)
        # Both transformations are their own inverse
        value = min(max(transform(t_root), lo), hi)
        iterations = 0
    else:
        value, info = scipy.optimize.bisect(
            difference,
            lo,
            hi,
            xtol=BISECTION_XTOL,
            rtol=BISECTION_RTOL,
            maxiter=BISECTION_MAXITER,
            full_output=True,
            disp=False,
        )
        iterations = info.iterations
        if not info.converged:
            logger.warning(
                "Bisection along %s stopped after %d iterations", path, iterations
            )
    residual = difference(value)
    logger.debug(
        "Crossover along %s by %s at %r (residual %r)",
        path,
        method.value,
        value,
        residual,
    )
    return result(
        True,
        value=value,
        residual=residual,
        tolerance=tolerance_at(value),
        iterations=iterations,
    )


# -- Classification --


@dataclass(frozen=True)
class RegionLabel:
    """Optimal scenario at a point, for an *objective*.

    For a cost comparison, *margins* holds, for each losing scenario, how
    much more it costs than the winner. For a deadline admission (where
    *deadline* is set), *margins* holds the slack of the winner against the
    deadline, and *winner* is None if no scenario meets the deadline.
    A *partial* label was determined without some requested scenario, since
    the topology cannot host it.
    """

    objective: Objective
    winner: Optional[Scenario]
    totals: Mapping[Scenario, float]
    margins: Mapping[Scenario, float]
    partial: bool = False
    deadline: Optional[float] = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "objective": self.objective.value,
            "units": self.objective.units,
            "winner": None if self.winner is None else self.winner.value,
            "totals": {s.value: v for s, v in self.totals.items()},
            "margins": {s.value: v for s, v in self.margins.items()},
            "partial": self.partial,
            "deadline": self.deadline,
        }


def select_winner(totals: Mapping[Scenario, float]) -> Scenario:
    """Scenario with the smallest total. Ties go to the architecturally
    simpler scenario.

    >>> select_winner({Scenario.S2_SPLIT_RIC: 1.0, Scenario.S1_GROUND_CENTRIC: 1.0})
    <Scenario.S1_GROUND_CENTRIC: 's1'>
    """
    if not totals:
        raise ValueError("no scenario to select from")
    return min(totals, key=lambda scenario: (totals[scenario], scenario.rank))


def classify(
    topology: Topology,
    workload: WorkloadProfile,
    objective: Objective,
    scenarios: Optional[Iterable[Scenario]] = None,
    basis: CostBasis = CostBasis.LIFECYCLE,
) -> RegionLabel:
    """Label a point with the scenario that minimizes the *objective*.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> classify(topology, workload, Objective.ENERGY).winner
    <Scenario.S2_SPLIT_RIC: 's2'>

    :param scenarios: The competing scenarios, all of them by default.
        Scenarios that the topology cannot host are left out, and the label
        is marked as partial.
    """
    candidates = sorted(
        Scenario if scenarios is None else set(scenarios), key=lambda s: s.rank
    )
    if not candidates:
        raise ValueError("no scenario to classify with")
    totals: dict[Scenario, float] = {}
    partial = False
    for scenario in candidates:
        try:
            totals[scenario] = scenario_cost(
                scenario, objective, topology, workload, basis
            )
        except ScenarioUnavailable:
            partial = True
    winner = select_winner(totals)
    margins = {s: v - totals[winner] for s, v in totals.items() if s is not winner}
    return RegionLabel(objective, winner, totals, margins, partial)


def deadline_admission(
    topology: Topology, workload: WorkloadProfile, update_deadline: float
) -> RegionLabel:
    """Label a point by the learning loop that meets the *update_deadline*:
    the split scenario if its lifecycle latency meets the deadline, else the
    multi-layer scenario if its latency does, else none.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> deadline_admission(topology, workload, 60.0).winner
    <Scenario.S3_MULTI_LAYER: 's3'>
    >>> print(deadline_admission(topology, workload, 5.0).winner)
    None
    """
    if not (math.isfinite(update_deadline) and update_deadline > 0):
        raise ValueError(f"update deadline must be positive, got {update_deadline!r}")
    totals = {
        Scenario.S2_SPLIT_RIC: lifecycle(
            Scenario.S2_SPLIT_RIC, Objective.LATENCY, topology, workload
        ).total
    }
    if topology.has_multilayer:
        totals[Scenario.S3_MULTI_LAYER] = lifecycle(
            Scenario.S3_MULTI_LAYER, Objective.LATENCY, topology, workload
        ).total
    winner = next(
        (s for s, total in totals.items() if total <= update_deadline), None
    )
    margins = {} if winner is None else {winner: update_deadline - totals[winner]}
    return RegionLabel(
        Objective.LATENCY,
        winner,
        totals,
        margins,
        partial=not topology.has_multilayer,
        deadline=update_deadline,
    )


class Region(enum.Enum):
    """Operator guidance regions."""

    GROUND_OPTIMAL = "I"
    LEO_OPTIMAL = "II"
    GEO_OPTIMAL = "III"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Recommendation:
    region: Region
    scenario: Optional[Scenario]
    admission: RegionLabel
    energy: RegionLabel

    def as_dict(self) -> dict[str, Any]:
        return {
            "region": self.region.value,
            "scenario": None if self.scenario is None else self.scenario.value,
            "admission": self.admission.as_dict(),
            "energy": self.energy.as_dict(),
        }


def recommend(
    topology: Topology, workload: WorkloadProfile, update_deadline: float
) -> Recommendation:
    """Guidance for a workload with the given model *update_deadline*.

    If only the multi-layer scenario retrains fast enough, the workload
    belongs to the GEO-optimal region. If the split scenario retrains fast
    enough, the energy comparison of the ground-centric and the split
    scenario decides between the ground-optimal and the LEO-optimal region.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> recommend(topology, workload, 3600.0).region
    <Region.LEO_OPTIMAL: 'II'>
    >>> recommend(topology, workload, 60.0).region
    <Region.GEO_OPTIMAL: 'III'>
    """
    admission = deadline_admission(topology, workload, update_deadline)
    energy = classify(
        topology,
        workload,
        Objective.ENERGY,
        (Scenario.S1_GROUND_CENTRIC, Scenario.S2_SPLIT_RIC),
    )
    if admission.winner is None:
        return Recommendation(Region.INFEASIBLE, None, admission, energy)
    if admission.winner is Scenario.S3_MULTI_LAYER:
        return Recommendation(
            Region.GEO_OPTIMAL, Scenario.S3_MULTI_LAYER, admission, energy
        )
    region = (
        Region.GROUND_OPTIMAL
        if energy.winner is Scenario.S1_GROUND_CENTRIC
        else Region.LEO_OPTIMAL
    )
    return Recommendation(region, energy.winner, admission, energy)


# -- Workload related limits --


@dataclass(frozen=True)
class PowerVerdict:
    """Average power drawn by inference on a node, against its budget."""

    node: str
    average_power: float
    power_budget: Optional[float]
    passes: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "passes",
            self.power_budget is None or self.average_power <= self.power_budget,
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "node": self.node,
            "average_power": self.average_power,
            "power_budget": self.power_budget,
            "passes": self.passes,
            "units": "W",
        }


def power_budget_check(
    node: NodeProfile, workload: WorkloadProfile, inference_rate: float
) -> PowerVerdict:
    """Average power of running *inference_rate* inferences per second on
    *node*. The value is a duty-cycled average: thermal throttling is assumed
    to spread bursts over time.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> verdict = power_budget_check(topology.leo, workload, 100.0)
    >>> round(verdict.average_power, 12), verdict.passes
    (2.0, True)
    """
    if not (math.isfinite(inference_rate) and inference_rate >= 0):
        raise ValueError(f"inference rate must not be negative, got {inference_rate!r}")
    complexity = workload.inference.complexity
    average_power = inference_rate * complexity * node.energy_per_flop
    return PowerVerdict(node.id, average_power, node.power_budget)


def complexity_ceiling(topology: Topology, workload: WorkloadProfile) -> float:
    """Inference complexity in FLOP above which computing on board costs more
    energy than streaming the input to the ground: P_tx·δ_in/(R_ul·ε_LEO).

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> round(complexity_ceiling(topology, workload) / 1e9, 6)
    60.0
    """
    feeder = topology.feeder
    return (
        feeder.tx_power
        * workload.inference.input_size
        / (feeder.uplink_rate * topology.leo.energy_per_flop)
    )


def uplink_rate_for_ceiling(
    topology: Topology, workload: WorkloadProfile, ceiling: float
) -> float:
    """Feeder uplink rate in bit/s at which `complexity_ceiling` equals the
    given *ceiling*.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> round(uplink_rate_for_ceiling(topology, workload, 250e9) / 1e6, 6)
    120.0
    """
    if not (math.isfinite(ceiling) and ceiling > 0):
        raise ValueError(f"ceiling must be positive, got {ceiling!r}")
    return (
        topology.feeder.tx_power
        * workload.inference.input_size
        / (ceiling * topology.leo.energy_per_flop)
    )
