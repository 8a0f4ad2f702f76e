"""uavlift: optimal placement of a single aerial base station that collects
uplink data, maximizing the summed transmission lifetimes of ground devices.

The public API mirrors the pipeline: build or load a :class:`Scenario`,
derive the :class:`SystemConstant`, inspect the :class:`FeasibleRegion`,
and run :func:`solve` (or the grid-search oracle) over it.
"""

from .channel import (
    SPEED_OF_LIGHT,
    SystemConstant,
    lifetime,
    path_loss,
    rate,
    required_power,
    system_constant,
)
from .errors import (
    ConfigurationError,
    EmptyRegionError,
    NumericalError,
    ParseError,
    UavliftError,
    ValidationError,
)
from .objective import (
    ConcavityCertificate,
    ObjectiveEval,
    concavity_certificate,
    evaluate,
    gradient,
    hessian,
    nsd_scan,
    per_user_nsd_conditions,
    value,
)
from .oracle import GridSpec, fd_gradient, fd_hessian, grid_search
from .region import (
    Disk,
    FeasibleRegion,
    UserRangeLimit,
    build,
    check_empty,
    contains,
    max_range_energy,
    max_range_power,
    project,
    project_many,
)
from .rng import SplitMix64
from .scenario import (
    AreaBounds,
    ClusterSpec,
    RfParams,
    Scenario,
    UserDevice,
    generate_clustered,
    generate_uniform,
    load,
    save,
)
from .solver import SolveReport, SolverConfig, solve, solve_grid_refined

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "AreaBounds",
    "ClusterSpec",
    "ConcavityCertificate",
    "ConfigurationError",
    "Disk",
    "EmptyRegionError",
    "FeasibleRegion",
    "GridSpec",
    "NumericalError",
    "ObjectiveEval",
    "ParseError",
    "RfParams",
    "Scenario",
    "SolveReport",
    "SolverConfig",
    "SplitMix64",
    "SystemConstant",
    "UavliftError",
    "UserDevice",
    "UserRangeLimit",
    "ValidationError",
    "build",
    "check_empty",
    "concavity_certificate",
    "contains",
    "evaluate",
    "fd_gradient",
    "fd_hessian",
    "generate_clustered",
    "generate_uniform",
    "gradient",
    "grid_search",
    "hessian",
    "lifetime",
    "load",
    "max_range_energy",
    "max_range_power",
    "nsd_scan",
    "path_loss",
    "per_user_nsd_conditions",
    "project",
    "project_many",
    "rate",
    "required_power",
    "save",
    "solve",
    "solve_grid_refined",
    "system_constant",
    "value",
]
