"""Domain types of the cost model. All values are in canonical SI units
(bits, bit/s, seconds, joules, watts, FLOP, FLOP/s, J/FLOP)."""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional


class AssumptionWarning(UserWarning):
    """A soft modelling assumption, e.g., that the inference output is much
    smaller than its input, does not hold for the given values. The values are
    accepted anyway, so that sweeps can cross such assumptions."""


class NodeKind(enum.Enum):
    GROUND = "ground"
    LEO = "leo"
    GEO = "geo"


class LinkKind(enum.Enum):
    FEEDER_RF = "feeder"
    OPTICAL_ISL = "isl"
    INTERNAL_BUS = "internal"


class Direction(enum.Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"


class Role(enum.Enum):
    TRANSMIT = "transmit"
    RECEIVE = "receive"


def _check(owner: str, name: str, value: float, *, positive: bool) -> None:
    # Raise ValueError if value is not finite, or not (strictly) positive
    if not math.isfinite(value):
        raise ValueError(f"{owner}.{name} must be finite, got {value!r}")
    if positive and not value > 0:
        raise ValueError(f"{owner}.{name} must be positive, got {value!r}")
    if value < 0:
        raise ValueError(f"{owner}.{name} must not be negative, got {value!r}")


@dataclass(frozen=True)
class NodeProfile:
    """A compute site: the ground segment, a LEO satellite or a GEO hub.

    :param id: Name of the node, e.g., *leo*.
    :param kind: Segment the node belongs to.
    :param compute_capacity: Computational capacity F in FLOP/s.
    :param energy_per_flop: Hardware efficiency ε in J/FLOP.
    :param power_budget: Average power cap in W. None means unbounded
        (the ground segment).
    """

    id: str
    kind: NodeKind
    compute_capacity: float
    energy_per_flop: float
    power_budget: Optional[float] = None

    def __post_init__(self) -> None:
        _check(self.id, "compute_capacity", self.compute_capacity, positive=True)
        _check(self.id, "energy_per_flop", self.energy_per_flop, positive=True)
        if self.power_budget is not None:
            _check(self.id, "power_budget", self.power_budget, positive=True)


@dataclass(frozen=True)
class LinkProfile:
    """A transport between two nodes.

    The uplink direction of the feeder link carries data from the satellite
    down to the ground segment (training data, telemetry), the downlink
    direction carries model weights from the ground up to the satellite. For
    the LEO-GEO inter-satellite link, the uplink leads from LEO to GEO.

    :param id: Name of the link, e.g., *feeder*.
    :param kind: Physical kind of the link.
    :param uplink_rate: Rate of the uplink direction in bit/s.
    :param downlink_rate: Rate of the downlink direction in bit/s.
    :param tx_power: Power drawn while transmitting, in W.
    :param rx_power: Power drawn while receiving, in W.
    :param rtt: Round-trip propagation delay in s.
    :param wait_time: Mean time until the link becomes available, in s.
    """

    id: str
    kind: LinkKind
    uplink_rate: float
    downlink_rate: float
    tx_power: float
    rx_power: float
    rtt: float = 0.0
    wait_time: float = 0.0

    def __post_init__(self) -> None:
        _check(self.id, "uplink_rate", self.uplink_rate, positive=True)
        _check(self.id, "downlink_rate", self.downlink_rate, positive=True)
        for name in ("tx_power", "rx_power", "rtt", "wait_time"):
            _check(self.id, name, getattr(self, name), positive=False)
        if self.kind is LinkKind.INTERNAL_BUS and (self.rtt or self.wait_time):
            raise ValueError(f"Internal bus {self.id} cannot have rtt or wait_time")

    @classmethod
    def internal_bus(cls, id: str = "e2") -> "LinkProfile":
        """The on-board bus between the Near-RT RIC and the O-DU/O-RU
        functions. Communication over it costs neither energy nor time; the
        nominal rates only satisfy the profile invariants."""
        return cls(id, LinkKind.INTERNAL_BUS, 1e11, 1e11, 0.0, 0.0)

    def rate(self, direction: Direction) -> float:
        """Rate of the link in the given direction."""
        return self.uplink_rate if direction is Direction.UPLINK else self.downlink_rate

    def power(self, role: Role) -> float:
        """Power drawn by the link endpoint in the given role."""
        return self.tx_power if role is Role.TRANSMIT else self.rx_power


@dataclass(frozen=True)
class InferenceProfile:
    """Near real-time part of an AI task.

    :param input_size: Raw input telemetry per inference δ_in, in bits.
    :param output_size: Inference output (control command) δ_out, in bits.
    :param complexity: FLOPs of one forward pass ω_inf.
    :param deadline: Hard latency deadline τ_max of one decision, in s.
    """

    input_size: float
    output_size: float
    complexity: float
    deadline: float

    def __post_init__(self) -> None:
        _check("inference", "input_size", self.input_size, positive=True)
        _check("inference", "output_size", self.output_size, positive=False)
        _check("inference", "complexity", self.complexity, positive=True)
        _check("inference", "deadline", self.deadline, positive=True)
        if self.output_size >= self.input_size:
            warnings.warn(
                f"inference output ({self.output_size!r} bit) is not smaller "
                f"than its input ({self.input_size!r} bit)",
                AssumptionWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class TrainingProfile:
    """Model update part of an AI task.

    :param dataset_size: Historical training dataset Δ_train, in bits.
    :param complexity: FLOPs of one training run Ω_train.
    """

    dataset_size: float
    complexity: float

    def __post_init__(self) -> None:
        _check("training", "dataset_size", self.dataset_size, positive=True)
        _check("training", "complexity", self.complexity, positive=True)


@dataclass(frozen=True)
class WorkloadProfile:
    """The composite AI task: inference profile, training profile, model
    artifact and model longevity.

    :param model_size: Size σ of the compressed model weights, in bits.
    :param longevity: Number of inference events N_inf a trained model serves
        before it has to be retrained. Configurations give integral values;
        the solvers treat the parameter as continuous.
    """

    inference: InferenceProfile
    training: TrainingProfile
    model_size: float
    longevity: float

    def __post_init__(self) -> None:
        _check("workload", "model_size", self.model_size, positive=True)
        _check("workload", "longevity", self.longevity, positive=True)
        if self.longevity < 1:
            raise ValueError(
                f"workload.longevity must be at least 1, got {self.longevity!r}"
            )
        if self.training.dataset_size <= self.inference.input_size:
            warnings.warn(
                f"training dataset ({self.training.dataset_size!r} bit) is not "
                f"larger than one inference input ({self.inference.input_size!r} bit)",
                AssumptionWarning,
                stacklevel=3,
            )


class ScenarioUnavailable(RuntimeError):
    """The topology lacks a node or link that the requested scenario needs."""


@dataclass(frozen=True)
class Topology:
    """Static snapshot of the nodes and links of the network.

    :param geo: The GEO hub, needed by the multi-layer scenario only.
    :param isl: The LEO-GEO optical link, needed by the multi-layer scenario only.
    """

    ground: NodeProfile
    leo: NodeProfile
    feeder: LinkProfile
    geo: Optional[NodeProfile] = None
    isl: Optional[LinkProfile] = None
    internal: LinkProfile = LinkProfile.internal_bus()

    @property
    def has_multilayer(self) -> bool:
        """True if both the GEO hub and the ISL are present."""
        return self.geo is not None and self.isl is not None

    def multilayer(self) -> tuple[NodeProfile, LinkProfile]:
        """Return GEO hub and ISL, or raise *ScenarioUnavailable*."""
        if self.geo is None or self.isl is None:
            raise ScenarioUnavailable(
                "The multi-layer scenario needs a GEO node and an ISL"
            )
        return self.geo, self.isl
