"""Lifecycle energy and latency of the three deployment scenarios.

A lifecycle consists of one offload of the training dataset, one training run,
one dissemination of the model weights, and *N_inf* inference events served by
the trained model. Energy is the energy spent by the space segment (ground
compute is not charged to the satellite budget); latency is the time needed to
close one learning loop plus the time spent on the inference events.
"""

import enum
import math
from dataclasses import dataclass, field, fields
from typing import Any, Optional, Union

from ._costs import compute_energy, compute_latency, comm_energy, comm_latency
from ._types import Topology, WorkloadProfile, Direction, Role


class Scenario(enum.Enum):
    """The three placements of the RIC functions. The definition order is the
    order of architectural simplicity, used to break ties."""

    S1_GROUND_CENTRIC = "s1"
    S2_SPLIT_RIC = "s2"
    S3_MULTI_LAYER = "s3"

    @property
    def title(self) -> str:
        return _TITLES[self]

    @property
    def rank(self) -> int:
        """Position in the order of architectural simplicity."""
        return _RANKS[self]


_TITLES = {
    Scenario.S1_GROUND_CENTRIC: "Ground-Centric",
    Scenario.S2_SPLIT_RIC: "Ground-LEO Split",
    Scenario.S3_MULTI_LAYER: "GEO-LEO Multi-Layer",
}
_RANKS = {scenario: rank for rank, scenario in enumerate(Scenario)}


class Objective(enum.Enum):
    ENERGY = "energy"
    LATENCY = "latency"

    @property
    def units(self) -> str:
        return "J" if self is Objective.ENERGY else "s"


@dataclass(frozen=True)
class EnergyBreakdown:
    """Lifecycle energy of a scenario in J, per phase. Components that a
    scenario does not have are reported as 0, so that all scenarios share
    one schema. The GEO components belong to the multi-layer scenario."""

    scenario: Scenario
    training_offload: float
    model_transfer: float
    inference_total: float
    geo_training_compute: float = 0.0
    geo_dataset_rx: float = 0.0
    geo_model_tx: float = 0.0
    total: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "total", math.fsum(self.components().values()))

    def components(self) -> dict[str, float]:
        """The phase components, in a stable order."""
        return _components(self, exclude=("scenario", "total"))

    def as_dict(self) -> dict[str, Any]:
        """JSON compatible form with fixed field names."""
        return {
            "scenario": self.scenario.value,
            "objective": Objective.ENERGY.value,
            "units": Objective.ENERGY.units,
            "components": self.components(),
            "total": self.total,
        }


@dataclass(frozen=True)
class LatencyBreakdown:
    """Lifecycle latency of a scenario in s, per phase.

    Besides *total*, the breakdown offers *learning_total*, the time to close
    the learning loop alone (the total without the inference events).
    """

    scenario: Scenario
    wait: float
    data_upload: float
    training_compute: float
    model_download: float
    inference_total: float
    propagation: float
    total: float = field(init=False)
    learning_total: float = field(init=False)

    def __post_init__(self) -> None:
        components = self.components()
        object.__setattr__(self, "total", math.fsum(components.values()))
        del components["inference_total"]
        object.__setattr__(self, "learning_total", math.fsum(components.values()))

    def components(self) -> dict[str, float]:
        """The phase components, in a stable order."""
        return _components(self, exclude=("scenario", "total", "learning_total"))

    def as_dict(self) -> dict[str, Any]:
        """JSON compatible form with fixed field names."""
        return {
            "scenario": self.scenario.value,
            "objective": Objective.LATENCY.value,
            "units": Objective.LATENCY.units,
            "components": self.components(),
            "total": self.total,
            "learning_total": self.learning_total,
        }


Breakdown = Union[EnergyBreakdown, LatencyBreakdown]


def _components(breakdown: Breakdown, exclude: tuple[str, ...]) -> dict[str, float]:
    return {
        f.name: getattr(breakdown, f.name)
        for f in fields(breakdown)
        if f.name not in exclude
    }


def _longevity(workload: WorkloadProfile, longevity: Optional[float]) -> float:
    if longevity is None:
        return workload.longevity
    if not (math.isfinite(longevity) and longevity >= 0):
        raise ValueError(f"longevity must be finite and >= 0, got {longevity!r}")
    return longevity


def lifecycle_energy(
    scenario: Scenario,
    topology: Topology,
    workload: WorkloadProfile,
    longevity: Optional[float] = None,
) -> EnergyBreakdown:
    """Lifecycle energy of the *scenario*, with its phase components.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> round(lifecycle_energy(Scenario.S2_SPLIT_RIC, topology, workload).total, 6)
    2300.5

    :param longevity: Number of inference events to use instead of the
        longevity of the workload. With 0, the result is the update overhead
        of the scenario.
    :raises ScenarioUnavailable: The multi-layer scenario is requested for
        a topology without GEO hub or ISL.
    """
    n_inf = _longevity(workload, longevity)
    inference, training = workload.inference, workload.training
    feeder, leo = topology.feeder, topology.leo

    if scenario is Scenario.S1_GROUND_CENTRIC:
        streaming = comm_energy(
            inference.input_size, feeder, Direction.UPLINK, Role.TRANSMIT
        )
        return EnergyBreakdown(
            scenario,
            training_offload=comm_energy(
                training.dataset_size, feeder, Direction.UPLINK, Role.TRANSMIT
            ),
            model_transfer=0.0,
            inference_total=n_inf * streaming,
        )

    on_board = n_inf * compute_energy(inference.complexity, leo)
    if scenario is Scenario.S2_SPLIT_RIC:
        return EnergyBreakdown(
            scenario,
            training_offload=comm_energy(
                training.dataset_size, feeder, Direction.UPLINK, Role.TRANSMIT
            ),
            model_transfer=comm_energy(
                workload.model_size, feeder, Direction.DOWNLINK, Role.RECEIVE
            ),
            inference_total=on_board,
        )

    geo, isl = topology.multilayer()
    return EnergyBreakdown(
        scenario,
        training_offload=comm_energy(
            training.dataset_size, isl, Direction.UPLINK, Role.TRANSMIT
        ),
        model_transfer=comm_energy(
            workload.model_size, isl, Direction.DOWNLINK, Role.RECEIVE
        ),
        inference_total=on_board,
        geo_training_compute=compute_energy(training.complexity, geo),
        geo_dataset_rx=comm_energy(
            training.dataset_size, isl, Direction.UPLINK, Role.RECEIVE
        ),
        geo_model_tx=comm_energy(
            workload.model_size, isl, Direction.DOWNLINK, Role.TRANSMIT
        ),
    )


def lifecycle_latency(
    scenario: Scenario,
    topology: Topology,
    workload: WorkloadProfile,
    longevity: Optional[float] = None,
) -> LatencyBreakdown:
    """Lifecycle latency of the *scenario*, with its phase components.

    The ground-centric scenario waits once for a ground station pass (for the
    training offload), the split scenario twice (offload, then model upload).
    The multi-layer scenario never waits, but pays the ISL round trip.
    The inference events of the ground-centric scenario are assumed to find
    the feeder link available.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> breakdown = lifecycle_latency(Scenario.S3_MULTI_LAYER, topology, workload)
    >>> breakdown.wait, round(breakdown.learning_total, 9)
    (0.0, 1.99)

    :param longevity: See `lifecycle_energy`.
    :raises ScenarioUnavailable: See `lifecycle_energy`.
    """
    n_inf = _longevity(workload, longevity)
    inference, training = workload.inference, workload.training
    feeder, ground, leo = topology.feeder, topology.ground, topology.leo

    if scenario is Scenario.S1_GROUND_CENTRIC:
        per_decision = feeder.rtt + inference.input_size / feeder.uplink_rate
        return LatencyBreakdown(
            scenario,
            wait=feeder.wait_time,
            data_upload=training.dataset_size / feeder.uplink_rate,
            training_compute=compute_latency(training.complexity, ground),
            model_download=0.0,
            inference_total=n_inf * per_decision,
            propagation=0.0,
        )

    on_board = n_inf * compute_latency(inference.complexity, leo)
    if scenario is Scenario.S2_SPLIT_RIC:
        return LatencyBreakdown(
            scenario,
            wait=2 * feeder.wait_time,
            data_upload=training.dataset_size / feeder.uplink_rate,
            training_compute=compute_latency(training.complexity, ground),
            model_download=0.0,
            inference_total=on_board,
            propagation=0.0,
        )

    geo, isl = topology.multilayer()
    return LatencyBreakdown(
        scenario,
        wait=0.0,
        data_upload=training.dataset_size / isl.uplink_rate,
        training_compute=compute_latency(training.complexity, geo),
        model_download=0.0,
        inference_total=on_board,
        propagation=isl.rtt,
    )


def lifecycle(
    scenario: Scenario,
    objective: Objective,
    topology: Topology,
    workload: WorkloadProfile,
    longevity: Optional[float] = None,
) -> Breakdown:
    """Energy or latency breakdown, depending on *objective*."""
    if objective is Objective.ENERGY:
        return lifecycle_energy(scenario, topology, workload, longevity)
    return lifecycle_latency(scenario, topology, workload, longevity)


def update_overhead(
    scenario: Scenario,
    objective: Objective,
    topology: Topology,
    workload: WorkloadProfile,
) -> float:
    """Cost of one learning cycle without any inference event: the lifecycle
    total for zero inference events.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> update_overhead(Scenario.S2_SPLIT_RIC, Objective.ENERGY, topology, workload)
    300.5
    """
    return lifecycle(scenario, objective, topology, workload, longevity=0.0).total


def amortized_energy_per_inference(
    scenario: Scenario, topology: Topology, workload: WorkloadProfile
) -> float:
    """Lifecycle energy divided by the number of inference events.

    >>> from dataclasses import replace
    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> round(amortized_energy_per_inference(
    ...     Scenario.S2_SPLIT_RIC, topology, replace(workload, longevity=1)), 9)
    300.52
    """
    return lifecycle_energy(scenario, topology, workload).total / workload.longevity


@dataclass(frozen=True)
class LoopLatency:
    """Latency of one control decision, and whether it meets the deadline."""

    scenario: Scenario
    latency: float
    deadline: float
    deadline_met: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "deadline_met", self.latency <= self.deadline)

    def as_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario.value,
            "latency": self.latency,
            "deadline": self.deadline,
            "deadline_met": self.deadline_met,
            "units": "s",
        }


def control_loop_latency(
    scenario: Scenario, topology: Topology, workload: WorkloadProfile
) -> LoopLatency:
    """Latency of a single inference decision, from telemetry to command.

    In the ground-centric scenario, telemetry travels down the feeder link,
    the ground computes, and the command travels back. In the other scenarios
    inference runs on the LEO node and the command reaches the O-DU over the
    internal bus.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> loop = control_loop_latency(Scenario.S2_SPLIT_RIC, topology, workload)
    >>> loop.latency, loop.deadline_met
    (0.0001, True)
    """
    inference = workload.inference
    if scenario is Scenario.S1_GROUND_CENTRIC:
        feeder = topology.feeder
        latency = (
            comm_latency(inference.input_size, feeder, Direction.UPLINK)
            + compute_latency(inference.complexity, topology.ground)
            + comm_latency(inference.output_size, feeder, Direction.DOWNLINK)
        )
    else:
        if scenario is Scenario.S3_MULTI_LAYER:
            topology.multilayer()
        latency = compute_latency(inference.complexity, topology.leo) + comm_latency(
            inference.output_size, topology.internal, Direction.DOWNLINK
        )
    return LoopLatency(scenario, latency, inference.deadline)


def feeder_rate_sensitivity(
    scenario: Scenario, topology: Topology, workload: WorkloadProfile
) -> float:
    """Derivative of the lifecycle energy with respect to the reciprocal
    feeder uplink rate 1/R_ul, in J·bit/s. It measures how strongly a
    degrading feeder channel raises the energy of the scenario.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> feeder_rate_sensitivity(Scenario.S2_SPLIT_RIC, topology, workload)
    150000000000.0
    """
    tx_power = topology.feeder.tx_power
    dataset = workload.training.dataset_size
    if scenario is Scenario.S1_GROUND_CENTRIC:
        return tx_power * (dataset + workload.longevity * workload.inference.input_size)
    if scenario is Scenario.S2_SPLIT_RIC:
        return tx_power * dataset
    topology.multilayer()
    return 0.0
