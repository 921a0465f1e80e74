"""Addressing the numeric fields of a topology and a workload by dotted paths.

The same paths are used by configuration files, by ``--set`` overrides and
by the axes of crossovers and sweeps, e.g., ``links.feeder.uplink_rate`` or
``workload.inference.input_size``.
"""

from collections.abc import Mapping
from dataclasses import replace
from typing import Any

from ._quantities import Dimension
from ._types import Topology, WorkloadProfile


class ConfigError(ValueError):
    """A configuration, a parameter path or an override is invalid."""


_NODE_FIELDS = {
    "compute_capacity": Dimension.FLOP_RATE,
    "energy_per_flop": Dimension.JOULES_PER_FLOP,
    "power_budget": Dimension.WATTS,
}
_LINK_FIELDS = {
    "uplink_rate": Dimension.BIT_RATE,
    "downlink_rate": Dimension.BIT_RATE,
    "tx_power": Dimension.WATTS,
    "rx_power": Dimension.WATTS,
    "rtt": Dimension.SECONDS,
    "wait_time": Dimension.SECONDS,
}
_WORKLOAD_FIELDS = {
    "workload.model_size": Dimension.BITS,
    "workload.longevity": Dimension.DIMENSIONLESS,
    "workload.inference.input_size": Dimension.BITS,
    "workload.inference.output_size": Dimension.BITS,
    "workload.inference.complexity": Dimension.FLOP,
    "workload.inference.deadline": Dimension.SECONDS,
    "workload.training.dataset_size": Dimension.BITS,
    "workload.training.complexity": Dimension.FLOP,
}

NODE_NAMES = ("ground", "leo", "geo")
LINK_NAMES = ("feeder", "isl")

#: All parameter paths, with the dimension of their values.
PARAMETERS: Mapping[str, Dimension] = {
    **{
        f"nodes.{node}.{name}": dimension
        for node in NODE_NAMES
        for name, dimension in _NODE_FIELDS.items()
    },
    **{
        f"links.{link}.{name}": dimension
        for link in LINK_NAMES
        for name, dimension in _LINK_FIELDS.items()
    },
    **_WORKLOAD_FIELDS,
}

#: Short names of the axes of the crossover analysis.
AXIS_ALIASES: Mapping[str, str] = {
    "input_size": "workload.inference.input_size",
    "complexity": "workload.inference.complexity",
    "longevity": "workload.longevity",
    "wait_time": "links.feeder.wait_time",
    "uplink_rate": "links.feeder.uplink_rate",
}
_ALIAS_OF_PATH = {path: alias for alias, path in AXIS_ALIASES.items()}


def resolve_parameter(name: str) -> str:
    """Return the full path of a parameter, given either its path or the
    short name of an axis. Dashes in short names are read as underscores.

    >>> resolve_parameter("input-size")
    'workload.inference.input_size'
    >>> resolve_parameter("nodes.leo.energy_per_flop")
    'nodes.leo.energy_per_flop'
    >>> resolve_parameter("nodes.mars.energy")
    Traceback (most recent call last):
    ...
    splitric._parameters.ConfigError: unknown parameter path 'nodes.mars.energy'
    """
    path = AXIS_ALIASES.get(name.replace("-", "_"), name)
    if path not in PARAMETERS:
        raise ConfigError(f"unknown parameter path {name!r}")
    return path


def parameter_dimension(path: str) -> Dimension:
    """Dimension of the values of the parameter *path*."""
    return PARAMETERS[resolve_parameter(path)]


def parameter_label(path: str) -> str:
    """Short, column friendly name of a parameter: its axis name if it has
    one, otherwise its path with underscores."""
    path = resolve_parameter(path)
    return _ALIAS_OF_PATH.get(path, path.replace(".", "_"))


def _member(topology: Topology, section: str, name: str) -> Any:
    member = getattr(topology, name)
    if member is None:
        raise ConfigError(f"topology has no {section[:-1]} {name!r}")
    return member


def get_parameter(topology: Topology, workload: WorkloadProfile, path: str) -> float:
    """Current value of the parameter *path*.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> get_parameter(topology, workload, "uplink_rate")
    500000000.0
    """
    parts = resolve_parameter(path).split(".")
    if parts[0] == "workload":
        owner: Any = workload
        for part in parts[1:-1]:
            owner = getattr(owner, part)
    else:
        owner = _member(topology, parts[0], parts[1])
    value = getattr(owner, parts[-1])
    if value is None:
        raise ConfigError(f"parameter {path!r} is not set")
    return float(value)


def with_parameter(
    topology: Topology, workload: WorkloadProfile, path: str, value: float
) -> tuple[Topology, WorkloadProfile]:
    """Copies of *topology* and *workload* where the parameter *path* has the
    given *value*. The arguments stay unchanged.

    >>> from splitric import paper_defaults
    >>> topology, workload = paper_defaults()
    >>> _, changed = with_parameter(topology, workload, "complexity", 6e10)
    >>> changed.inference.complexity, workload.inference.complexity
    (60000000000.0, 1000000000.0)

    :raises ValueError: The value violates an invariant of the changed
        profile.
    :raises ConfigError: The path is unknown, or it addresses a node or
        link that the topology does not have.
    """
    parts = resolve_parameter(path).split(".")
    field_name = parts[-1]
    if parts[0] == "workload":
        if len(parts) == 2:
            return topology, replace(workload, **{field_name: value})
        profile_name = parts[1]
        profile = replace(getattr(workload, profile_name), **{field_name: value})
        return topology, replace(workload, **{profile_name: profile})
    member_name = parts[1]
    member = replace(_member(topology, parts[0], member_name), **{field_name: value})
    return replace(topology, **{member_name: member}), workload
