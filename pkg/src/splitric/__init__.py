# In the following, all API elements are listed that are
# not private of the module that defines it.
# Elements that are meant to be package private are
# commented out to document this property.
# All other elements are imported and exported "flat"
# as direct elements of the package.

import logging

from ._quantities import (
    Dimension,
    QuantityError,
    Quantity,
    parse_quantity,
    format_quantity,
)
from ._types import (
    AssumptionWarning,
    NodeKind,
    LinkKind,
    Direction,
    Role,
    NodeProfile,
    LinkProfile,
    InferenceProfile,
    TrainingProfile,
    WorkloadProfile,
    ScenarioUnavailable,
    Topology,
)
from ._costs import (
    compute_energy,
    compute_latency,
    comm_energy,
    comm_latency,
    shannon_rate,
)
from ._lifecycle import (
    Scenario,
    Objective,
    EnergyBreakdown,
    LatencyBreakdown,
    Breakdown,
    lifecycle_energy,
    lifecycle_latency,
    lifecycle,
    update_overhead,
    amortized_energy_per_inference,
    LoopLatency,
    control_loop_latency,
    feeder_rate_sensitivity,
)
from ._parameters import (
    ConfigError,
    # NODE_NAMES,
    # LINK_NAMES,
    PARAMETERS,
    AXIS_ALIASES,
    resolve_parameter,
    parameter_dimension,
    parameter_label,
    get_parameter,
    with_parameter,
)
from ._feasibility import (
    # -- dominance conditions
    Condition,
    BoundaryVerdict,
    edge_advantage,
    link_efficiency,
    continuity_gain,
    boundary,
    # -- crossovers
    CostBasis,
    scenario_cost,
    Method,
    BISECTION_RTOL,
    BISECTION_XTOL,
    BISECTION_MAXITER,
    RESIDUAL_RTOL,
    difference_function,
    CrossoverResult,
    crossover,
    # -- classification and guidance
    RegionLabel,
    select_winner,
    classify,
    deadline_admission,
    Region,
    Recommendation,
    recommend,
    PowerVerdict,
    power_budget_check,
    complexity_ceiling,
    uplink_rate_for_ceiling,
)
from ._config import (
    PAPER_DEFAULTS,
    WORKLOAD_PRESETS,
    parse_override,
    paper_defaults,
    read_config_file,
    load_config,
    OutputFormat,
    RunConfig,
    paper_defaults_toml,
)
from ._sweep import (
    Spacing,
    AxisSpec,
    default_axis,
    UrgencySpec,
    urgency_grid,
    SkippedValue,
    SweepRow,
    SweepTable,
    run_sweep,
    MapCell,
    MapKind,
    FeasibilityMap,
    run_energy_map,
    run_latency_map,
    ORACLE_POINTS,
    OracleReport,
    oracle_verify,
    write_csv,
    write_sweep_csv,
    write_map_csv,
)
from ._validate import (
    # RANDOM_DRAWS,
    Check,
    ValidationReport,
    draw_parameters,
    run_validation,
)
from ._cli import (
    UsageError,
    build_parser,
    run_command,
    # main,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = (
    # -- quantities --
    "Dimension",
    "QuantityError",
    "Quantity",
    "parse_quantity",
    "format_quantity",
    # -- types --
    "AssumptionWarning",
    "NodeKind",
    "LinkKind",
    "Direction",
    "Role",
    "NodeProfile",
    "LinkProfile",
    "InferenceProfile",
    "TrainingProfile",
    "WorkloadProfile",
    "ScenarioUnavailable",
    "Topology",
    # -- costs --
    "compute_energy",
    "compute_latency",
    "comm_energy",
    "comm_latency",
    "shannon_rate",
    # -- lifecycle --
    "Scenario",
    "Objective",
    "EnergyBreakdown",
    "LatencyBreakdown",
    "Breakdown",
    "lifecycle_energy",
    "lifecycle_latency",
    "lifecycle",
    "update_overhead",
    "amortized_energy_per_inference",
    "LoopLatency",
    "control_loop_latency",
    "feeder_rate_sensitivity",
    # -- parameters --
    "ConfigError",
    "PARAMETERS",
    "AXIS_ALIASES",
    "resolve_parameter",
    "parameter_dimension",
    "parameter_label",
    "get_parameter",
    "with_parameter",
    # -- feasibility --
    "Condition",
    "BoundaryVerdict",
    "edge_advantage",
    "link_efficiency",
    "continuity_gain",
    "boundary",
    "CostBasis",
    "scenario_cost",
    "Method",
    "BISECTION_RTOL",
    "BISECTION_XTOL",
    "BISECTION_MAXITER",
    "RESIDUAL_RTOL",
    "difference_function",
    "CrossoverResult",
    "crossover",
    "RegionLabel",
    "select_winner",
    "classify",
    "deadline_admission",
    "Region",
    "Recommendation",
    "recommend",
    "PowerVerdict",
    "power_budget_check",
    "complexity_ceiling",
    "uplink_rate_for_ceiling",
    # -- config --
    "PAPER_DEFAULTS",
    "WORKLOAD_PRESETS",
    "parse_override",
    "paper_defaults",
    "read_config_file",
    "load_config",
    "OutputFormat",
    "RunConfig",
    "paper_defaults_toml",
    # -- sweep --
    "Spacing",
    "AxisSpec",
    "default_axis",
    "UrgencySpec",
    "urgency_grid",
    "SkippedValue",
    "SweepRow",
    "SweepTable",
    "run_sweep",
    "MapCell",
    "MapKind",
    "FeasibilityMap",
    "run_energy_map",
    "run_latency_map",
    "ORACLE_POINTS",
    "OracleReport",
    "oracle_verify",
    "write_csv",
    "write_sweep_csv",
    "write_map_csv",
    # -- validate --
    "Check",
    "ValidationReport",
    "draw_parameters",
    "run_validation",
    # -- cli --
    "UsageError",
    "build_parser",
    "run_command",
)
