"""Scenario configuration: the default parameter table, TOML files, workload
presets and ``--set`` overrides.

All sources are merged into one flat table of parameter paths before any
profile is constructed. Later sources win: defaults, then the workload
preset, then the file, then the overrides. A value set by an override is
therefore indistinguishable from the same value written in the file.
"""

import enum
import functools
import logging
import math
import pathlib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Optional, Union

from ._compatibility import tomllib
from ._costs import shannon_rate
from ._parameters import ConfigError, PARAMETERS, NODE_NAMES, LINK_NAMES
from ._quantities import Dimension, Quantity, QuantityError, parse_quantity
from ._types import (
    NodeKind,
    LinkKind,
    NodeProfile,
    LinkProfile,
    InferenceProfile,
    TrainingProfile,
    WorkloadProfile,
    Topology,
)

logger = logging.getLogger(__name__)

# Raw value of a table entry: a quantity text, a canonical number, or a flag
RawValue = Union[str, float, bool]

#: The reference parameters of the model. Node and link values follow the
#: published resource and simulation tables; the training complexity is
#: calibrated to a GEO learning loop of about 2 s; inference values
#: describe a spectrogram based xApp.
PAPER_DEFAULTS: Mapping[str, Mapping[str, str]] = {
    "nodes.ground": {
        "compute_capacity": "1 PFLOPS",
        "energy_per_flop": "200 pJ/FLOP",
    },
    "nodes.leo": {
        "compute_capacity": "10 TFLOPS",
        "energy_per_flop": "20 pJ/FLOP",
        "power_budget": "20 W",
    },
    "nodes.geo": {
        "compute_capacity": "200 TFLOPS",
        "energy_per_flop": "100 pJ/FLOP",
        "power_budget": "1000 W",
    },
    "links.feeder": {
        "uplink_rate": "500 Mbit/s",
        "downlink_rate": "500 Mbit/s",
        "tx_power": "15 W",
        "rx_power": "5 W",
        "rtt": "20 ms",
        "wait_time": "10 min",
        "bandwidth": "400 MHz",
    },
    "links.isl": {
        "uplink_rate": "10 Gbit/s",
        "downlink_rate": "10 Gbit/s",
        "tx_power": "2 W",
        "rx_power": "2 W",
        "rtt": "240 ms",
        "wait_time": "0 s",
    },
    "workload": {
        "model_size": "50 Mbit",
        "longevity": "100000",
    },
    "workload.inference": {
        "input_size": "5 MB",
        "output_size": "100 B",
        "complexity": "1 GFLOP",
        "deadline": "10 ms",
    },
    "workload.training": {
        "dataset_size": "10 Gbit",
        "complexity": "150 TFLOP",
    },
}

#: Workloads of the operator guidance, as changes of the default table.
WORKLOAD_PRESETS: Mapping[str, Mapping[str, str]] = {
    "beam-management": {
        "workload.inference.input_size": "20 MB",
        "workload.inference.complexity": "1 GFLOP",
    },
    "traffic-prediction": {
        "workload.inference.input_size": "10 kB",
        "workload.inference.complexity": "10 GFLOP",
    },
}

# Keys of link sections that describe the channel instead of the link profile
_CHANNEL_KEYS = {"snr": Dimension.DIMENSIONLESS, "bandwidth": Dimension.HERTZ}
_MULTILAYER = "topology.multilayer"
_SECTIONS = frozenset(
    ["nodes", "links", "workload", "workload.inference", "workload.training"]
    + [f"nodes.{name}" for name in NODE_NAMES]
    + [f"links.{name}" for name in LINK_NAMES]
    + ["topology"]
)


def _dimension_of_key(path: str) -> Dimension:
    if path in PARAMETERS:
        return PARAMETERS[path]
    section, _, key = path.rpartition(".")
    if section in {f"links.{name}" for name in LINK_NAMES} and key in _CHANNEL_KEYS:
        return _CHANNEL_KEYS[key]
    raise ConfigError(f"unknown key {path!r}")


def _flat_defaults() -> dict[str, RawValue]:
    table: dict[str, RawValue] = {
        f"{section}.{key}": value
        for section, values in PAPER_DEFAULTS.items()
        for key, value in values.items()
    }
    table[_MULTILAYER] = True
    return table


def _flatten(document: Mapping[str, Any], prefix: str = "") -> dict[str, RawValue]:
    """Flatten a parsed TOML document into dotted keys, checking section
    names, key names and value types."""
    table: dict[str, RawValue] = {}
    for key, value in document.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            if path not in _SECTIONS:
                raise ConfigError(f"unknown section [{path}]")
            table.update(_flatten(value, f"{path}."))
        elif path == _MULTILAYER:
            if not isinstance(value, bool):
                raise ConfigError(f"{path} needs to be true or false")
            table[path] = value
        else:
            dimension = _dimension_of_key(path)
            if isinstance(value, str):
                table[path] = value
            elif (
                isinstance(value, (int, float))
                and not isinstance(value, bool)
                and dimension is Dimension.DIMENSIONLESS
            ):
                table[path] = float(value)
            else:
                raise ConfigError(
                    f"{path} needs a quantity text like '15 W', got {value!r}"
                )
    return table


def parse_override(text: str) -> tuple[str, Quantity]:
    """Read an override of the form *path=quantity*.

    >>> path, quantity = parse_override("links.feeder.uplink_rate=120 Mbit/s")
    >>> path, quantity.value
    ('links.feeder.uplink_rate', 120000000.0)
    """
    path, separator, quantity = text.partition("=")
    path = path.strip()
    if not separator or not path:
        raise ConfigError(f"override {text!r} is not of the form path=quantity")
    dimension = _dimension_of_key(path)
    try:
        return path, parse_quantity(quantity, dimension)
    except QuantityError as error:
        raise ConfigError(f"override {path}: {error}") from None


def _value(table: Mapping[str, RawValue], path: str) -> float:
    raw = table[path]
    if isinstance(raw, bool):
        raise ConfigError(f"{path} needs a quantity, got {raw!r}")
    if isinstance(raw, float):
        return raw
    try:
        return parse_quantity(raw, _dimension_of_key(path)).value
    except QuantityError as error:
        raise ConfigError(f"{path}: {error}") from None


def _apply_channels(
    table: dict[str, RawValue], explicit: Mapping[str, RawValue]
) -> None:
    # A link with an SNR gets its Shannon capacity as rate, unless the
    # explicit sources give the rate themselves
    for link in LINK_NAMES:
        section = f"links.{link}"
        if f"{section}.snr" not in explicit:
            continue
        if f"{section}.bandwidth" not in table:
            raise ConfigError(f"{section}.snr needs {section}.bandwidth")
        rate = shannon_rate(
            _value(table, f"{section}.bandwidth"), _value(table, f"{section}.snr")
        )
        for key in ("uplink_rate", "downlink_rate"):
            if f"{section}.{key}" not in explicit:
                table[f"{section}.{key}"] = rate
        logger.debug("Rate of %s from its channel: %r bit/s", section, rate)


def _node(table: Mapping[str, RawValue], name: str, kind: NodeKind) -> NodeProfile:
    section = f"nodes.{name}"
    budget = f"{section}.power_budget"
    return NodeProfile(
        name,
        kind,
        compute_capacity=_value(table, f"{section}.compute_capacity"),
        energy_per_flop=_value(table, f"{section}.energy_per_flop"),
        power_budget=_value(table, budget) if budget in table else None,
    )


def _link(table: Mapping[str, RawValue], name: str, kind: LinkKind) -> LinkProfile:
    section = f"links.{name}"
    return LinkProfile(
        name,
        kind,
        **{
            key: _value(table, f"{section}.{key}")
            for key in (
                "uplink_rate",
                "downlink_rate",
                "tx_power",
                "rx_power",
                "rtt",
                "wait_time",
            )
        },
    )


def _build(table: Mapping[str, RawValue]) -> tuple[Topology, WorkloadProfile]:
    multilayer = table[_MULTILAYER]
    try:
        longevity = _value(table, "workload.longevity")
        if longevity != math.floor(longevity):
            raise ConfigError(
                f"workload.longevity needs to be a whole number, got {longevity!r}"
            )
        topology = Topology(
            ground=_node(table, "ground", NodeKind.GROUND),
            leo=_node(table, "leo", NodeKind.LEO),
            feeder=_link(table, "feeder", LinkKind.FEEDER_RF),
            geo=_node(table, "geo", NodeKind.GEO) if multilayer else None,
            isl=_link(table, "isl", LinkKind.OPTICAL_ISL) if multilayer else None,
        )
        workload = WorkloadProfile(
            inference=InferenceProfile(
                input_size=_value(table, "workload.inference.input_size"),
                output_size=_value(table, "workload.inference.output_size"),
                complexity=_value(table, "workload.inference.complexity"),
                deadline=_value(table, "workload.inference.deadline"),
            ),
            training=TrainingProfile(
                dataset_size=_value(table, "workload.training.dataset_size"),
                complexity=_value(table, "workload.training.complexity"),
            ),
            model_size=_value(table, "workload.model_size"),
            longevity=longevity,
        )
    except ConfigError:
        raise
    except ValueError as error:
        raise ConfigError(str(error)) from error
    return topology, workload


@functools.lru_cache(maxsize=None)
def paper_defaults() -> tuple[Topology, WorkloadProfile]:
    """Topology and workload of the reference parameter table.

    >>> topology, workload = paper_defaults()
    >>> topology.leo.compute_capacity, workload.training.dataset_size
    (10000000000000.0, 10000000000.0)
    """
    return _build(_flat_defaults())


def read_config_file(path: Union[str, pathlib.Path]) -> dict[str, RawValue]:
    """Read a TOML configuration file into a flat table of dotted keys."""
    try:
        with open(path, "rb") as file:
            document = tomllib.load(file)
    except OSError as error:
        raise ConfigError(f"cannot read {str(path)!r}: {error.strerror}") from None
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"{str(path)!r} is not valid TOML: {error}") from None
    return _flatten(document)


def load_config(
    path: Union[str, pathlib.Path, None] = None,
    overrides: Sequence[str] = (),
    workload_preset: Optional[str] = None,
) -> tuple[Topology, WorkloadProfile]:
    """Build topology and workload from the default table, an optional
    workload preset, an optional TOML file and a list of overrides.

    >>> topology, workload = load_config(
    ...     overrides=["links.feeder.wait_time=45 min"],
    ...     workload_preset="traffic-prediction")
    >>> topology.feeder.wait_time, workload.inference.input_size
    (2700.0, 80000.0)

    :param path: TOML file, giving only the values that differ from the
        defaults.
    :param overrides: Texts of the form *path=quantity*.
    :param workload_preset: Name of an entry of `WORKLOAD_PRESETS`.
    :raises ConfigError: A source is unreadable, names an unknown section,
        key or preset, or gives an invalid value.
    """
    table = _flat_defaults()
    explicit: dict[str, RawValue] = {}
    if workload_preset is not None:
        try:
            explicit.update(WORKLOAD_PRESETS[workload_preset])
        except KeyError:
            raise ConfigError(f"unknown workload preset {workload_preset!r}") from None
    if path is not None:
        explicit.update(read_config_file(path))
        logger.info("Configuration read from %s", path)
    for text in overrides:
        key, quantity = parse_override(text)
        explicit[key] = quantity.value
    table.update(explicit)
    try:
        _apply_channels(table, explicit)
    except ConfigError:
        raise
    except ValueError as error:
        raise ConfigError(str(error)) from error
    return _build(table)


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    """Everything a command evaluates, and where its result goes. The
    overrides are already applied to *topology* and *workload*; they are kept
    for reporting."""

    topology: Topology
    workload: WorkloadProfile
    overrides: tuple[tuple[str, Quantity], ...] = ()
    output: OutputFormat = OutputFormat.JSON
    output_path: Optional[pathlib.Path] = None

    @classmethod
    def load(
        cls,
        path: Union[str, pathlib.Path, None] = None,
        overrides: Sequence[str] = (),
        workload_preset: Optional[str] = None,
        output: OutputFormat = OutputFormat.JSON,
        output_path: Optional[pathlib.Path] = None,
    ) -> "RunConfig":
        topology, workload = load_config(path, overrides, workload_preset)
        return cls(
            topology,
            workload,
            tuple(parse_override(text) for text in overrides),
            output,
            output_path,
        )


def paper_defaults_toml() -> str:
    """The default table as a TOML configuration file.

    >>> print(paper_defaults_toml().splitlines()[3])
    [nodes.ground]
    """
    lines = [
        "# Reference parameters of the split-RIC feasibility model.",
        "# Every value is a quantity text; missing keys take these defaults.",
        "",
    ]
    for section, values in PAPER_DEFAULTS.items():
        lines.append(f"[{section}]")
        lines.extend(f'{key} = "{value}"' for key, value in values.items())
        lines.append("")
    lines.extend(["[topology]", "multilayer = true", ""])
    return "\n".join(lines)
