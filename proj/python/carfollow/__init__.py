"""Car-following model simulation and verification toolkit."""

from ._core import (
    ConfigError,
    DomainError,
    GippsBrakingSolution,
    ModelParams,
    PreconditionError,
    SearchError,
    UnsupportedError,
    build_id,
    classify,
    critical_spacing,
    equilibrium_speed,
    fundamental_diagram,
    idm_accel,
    idm_linearize,
    min_beta_for_compliance,
    model_keys,
    model_next,
    safe_stopping_distance,
    simulate_slvp,
    __version__,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "GippsBrakingSolution",
    "ModelParams",
    "PreconditionError",
    "SearchError",
    "UnsupportedError",
    "build_id",
    "classify",
    "critical_spacing",
    "equilibrium_speed",
    "fundamental_diagram",
    "idm_accel",
    "idm_linearize",
    "min_beta_for_compliance",
    "model_keys",
    "model_next",
    "safe_stopping_distance",
    "simulate_slvp",
    "__version__",
]
