"""The generalized cost primitives: energy and latency of computing a workload
on a node and of moving data over a link."""

import math

from ._types import NodeProfile, LinkProfile, LinkKind, Direction, Role


def compute_energy(flop: float, node: NodeProfile) -> float:
    """Energy in J for executing *flop* operations on *node*: Ω · ε.

    >>> from splitric import paper_defaults
    >>> topology, _ = paper_defaults()
    >>> round(compute_energy(1e9, topology.leo), 15)
    0.02
    >>> compute_energy(0.0, topology.leo)
    0.0
    """
    return flop * node.energy_per_flop


def compute_latency(flop: float, node: NodeProfile) -> float:
    """Time in s for executing *flop* operations on *node*: Ω / F.

    >>> from splitric import paper_defaults
    >>> topology, _ = paper_defaults()
    >>> compute_latency(1.5e14, topology.geo)
    0.75
    """
    return flop / node.compute_capacity


def _without_transport(link: LinkProfile, co_located: bool) -> bool:
    return co_located or link.kind is LinkKind.INTERNAL_BUS


def comm_energy(
    data: float,
    link: LinkProfile,
    direction: Direction,
    role: Role,
    co_located: bool = False,
) -> float:
    """Energy in J that one endpoint of *link* spends for moving *data* bits
    in the given *direction*: P · D / R, with P the transmit or receive power
    depending on *role*.

    Data that stays on its node (*co_located*), or that moves over the
    internal bus, costs nothing.

    >>> from splitric import paper_defaults, Direction, Role
    >>> topology, _ = paper_defaults()
    >>> comm_energy(1e10, topology.feeder, Direction.UPLINK, Role.TRANSMIT)
    300.0
    >>> comm_energy(5e7, topology.feeder, Direction.DOWNLINK, Role.RECEIVE)
    0.5
    >>> comm_energy(1e10, topology.feeder, Direction.UPLINK, Role.TRANSMIT, True)
    0.0
    """
    if _without_transport(link, co_located):
        return 0.0
    return link.power(role) * data / link.rate(direction)


def comm_latency(
    data: float, link: LinkProfile, direction: Direction, co_located: bool = False
) -> float:
    """Time in s for moving *data* bits over *link*: serialization delay
    D / R plus the one-way propagation delay RTT / 2.

    >>> from splitric import paper_defaults, Direction
    >>> topology, _ = paper_defaults()
    >>> comm_latency(1e10, topology.feeder, Direction.UPLINK)
    20.01
    >>> comm_latency(0.0, topology.isl, Direction.UPLINK)
    0.12
    """
    if _without_transport(link, co_located):
        return 0.0
    return data / link.rate(direction) + link.rtt / 2


def shannon_rate(bandwidth: float, snr_linear: float) -> float:
    """Capacity limit in bit/s of a channel with the given *bandwidth* (Hz)
    and linear signal-to-noise ratio: B · log2(1 + SNR).

    >>> shannon_rate(400e6, 7.0)
    1200000000.0
    """
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth!r}")
    if not snr_linear >= 0:
        raise ValueError(f"snr_linear must not be negative, got {snr_linear!r}")
    return bandwidth * math.log2(1 + snr_linear)
