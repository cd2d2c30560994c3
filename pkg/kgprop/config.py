"""
Configuration types and utilities for kgprop.
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, Optional

from kgprop.errors import KgpropValidationError

# Constants
DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-12
DEFAULT_DECAY_THRESHOLD = 1e-12
DEFAULT_MAX_WINDOW = 200.0
DEFAULT_WRONSKIAN_TOL = 1e-6
DEFAULT_BOUND_STATE_TOL = 1e-8
DEFAULT_MATCH_CONDITION_LIMIT = 1e8
DEFAULT_SINGULAR_RATIO = 1e-12
DEFAULT_COMPLEMENTARY_CONDITION_LIMIT = 1e10
DEFAULT_REFLECTION_TOL = 1e-6
DEFAULT_LIGHT_CONE_TOL = 1e-10
DEFAULT_FD_STEP = 1e-4
THREADS_ENV_VAR = "KGPROP_THREADS"


def _threads_from_env() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class KgpropConfig:
    """
    Numerical configuration shared by all kgprop modules.

    Attributes:
        rtol: Relative tolerance of every ODE integration.
        atol: Absolute tolerance of every ODE integration.
        decay_threshold: Size of the declared potential tail at the matching window edge.
        max_window: Largest admissible half-width T of the matching window.
        wronskian_tol: Allowed relative spread between Wronskian evaluations.
        bound_state_tol: Relative size of the Jost function below which a resolvent pole is reported.
        match_condition_limit: Largest condition number accepted when matching scattering data.
        singular_ratio: sigma_min / sigma_max below which a matrix counts as singular.
        complementary_condition_limit: Largest condition number of Upsilon for complementary pairs.
        reflection_tol: Reflection coefficient magnitude below which a mode counts as reflectionless.
        light_cone_tol: Distance of |Z| from 1 (or from a chart boundary) treated as null separation.
        fd_step: Relative step of the finite differences used for derivatives of scale factors.
        seed: Seed for every randomized construction.
        threads: Worker cap for grid evaluation. Defaults to $KGPROP_THREADS or 1.
        debug: Enable debug logging.
    """

    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD
    max_window: float = DEFAULT_MAX_WINDOW
    wronskian_tol: float = DEFAULT_WRONSKIAN_TOL
    bound_state_tol: float = DEFAULT_BOUND_STATE_TOL
    match_condition_limit: float = DEFAULT_MATCH_CONDITION_LIMIT
    singular_ratio: float = DEFAULT_SINGULAR_RATIO
    complementary_condition_limit: float = DEFAULT_COMPLEMENTARY_CONDITION_LIMIT
    reflection_tol: float = DEFAULT_REFLECTION_TOL
    light_cone_tol: float = DEFAULT_LIGHT_CONE_TOL
    fd_step: float = DEFAULT_FD_STEP
    seed: int = 0
    threads: Optional[int] = None
    debug: bool = False

    def __post_init__(self) -> None:
        """Fill the worker cap from the environment when not given."""
        if self.threads is None:
            self.threads = _threads_from_env()

    def validate(self) -> None:
        """
        Validate the configuration.

        Raises:
            KgpropValidationError: If a field is out of range.
        """
        for name in (
            "rtol",
            "atol",
            "decay_threshold",
            "max_window",
            "wronskian_tol",
            "bound_state_tol",
            "match_condition_limit",
            "singular_ratio",
            "complementary_condition_limit",
            "reflection_tol",
            "light_cone_tol",
            "fd_step",
        ):
            if not getattr(self, name) > 0:
                raise KgpropValidationError(f"{name} must be positive", field=name)

        if self.decay_threshold >= 1:
            raise KgpropValidationError("decay_threshold must be below 1", field="decay_threshold")

        if self.threads is not None and self.threads < 1:
            raise KgpropValidationError("threads must be at least 1", field="threads")

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "rtol": self.rtol,
            "atol": self.atol,
            "decay_threshold": self.decay_threshold,
            "max_window": self.max_window,
            "wronskian_tol": self.wronskian_tol,
            "bound_state_tol": self.bound_state_tol,
            "match_condition_limit": self.match_condition_limit,
            "singular_ratio": self.singular_ratio,
            "complementary_condition_limit": self.complementary_condition_limit,
            "reflection_tol": self.reflection_tol,
            "light_cone_tol": self.light_cone_tol,
            "fd_step": self.fd_step,
            "seed": self.seed,
            "threads": self.threads,
            "debug": self.debug,
        }


class ConfigBuilder:
    """
    Builder for KgpropConfig instances.

    Example:
        config = (
            ConfigBuilder()
            .with_tolerances(rtol=1e-10, atol=1e-12)
            .with_window(max_window=120.0)
            .with_seed(7)
            .with_debug(True)
            .build()
        )
    """

    def __init__(self) -> None:
        self._values: Dict[str, Any] = {}

    def with_tolerances(self, rtol: Optional[float] = None, atol: Optional[float] = None) -> "ConfigBuilder":
        """Set the ODE tolerances."""
        if rtol is not None:
            self._values["rtol"] = rtol
        if atol is not None:
            self._values["atol"] = atol
        return self

    def with_window(
        self, max_window: Optional[float] = None, decay_threshold: Optional[float] = None
    ) -> "ConfigBuilder":
        """Set the matching-window cap and tail threshold."""
        if max_window is not None:
            self._values["max_window"] = max_window
        if decay_threshold is not None:
            self._values["decay_threshold"] = decay_threshold
        return self

    def with_wronskian_tol(self, tol: float) -> "ConfigBuilder":
        """Set the Wronskian consistency tolerance."""
        self._values["wronskian_tol"] = tol
        return self

    def with_bound_state_tol(self, tol: float) -> "ConfigBuilder":
        """Set the resolvent-pole threshold."""
        self._values["bound_state_tol"] = tol
        return self

    def with_reflection_tol(self, tol: float) -> "ConfigBuilder":
        """Set the reflectionless threshold."""
        self._values["reflection_tol"] = tol
        return self

    def with_fd_step(self, step: float) -> "ConfigBuilder":
        """Set the finite-difference step."""
        self._values["fd_step"] = step
        return self

    def with_seed(self, seed: int) -> "ConfigBuilder":
        """Set the seed used by randomized constructions."""
        self._values["seed"] = seed
        return self

    def with_threads(self, threads: int) -> "ConfigBuilder":
        """Set the worker cap."""
        self._values["threads"] = threads
        return self

    def with_debug(self, debug: bool) -> "ConfigBuilder":
        """Enable or disable debug logging."""
        self._values["debug"] = debug
        return self

    def build(self) -> KgpropConfig:
        """
        Build the configuration.

        Returns:
            The built KgpropConfig instance.
        """
        return KgpropConfig(**self._values)

    def build_with_validation(self) -> KgpropConfig:
        """
        Build the configuration and validate it.

        Raises:
            KgpropValidationError: If validation fails.
        """
        config = self.build()
        config.validate()
        return config


_DEFAULT = KgpropConfig()


def default_config() -> KgpropConfig:
    """Return the shared default configuration."""
    return _DEFAULT


def resolve_config(config: Any = None) -> KgpropConfig:
    """
    Resolve configuration from various input types.

    Args:
        config: None (defaults), a KgpropConfig instance, or a dict of field values.

    Returns:
        A KgpropConfig instance.

    Raises:
        KgpropValidationError: If the config type or a dict key is not recognized.
    """
    if config is None:
        return _DEFAULT

    if isinstance(config, KgpropConfig):
        return config

    if isinstance(config, dict):
        known = set(KgpropConfig.__dataclass_fields__)
        unknown = sorted(set(config) - known)
        if unknown:
            raise KgpropValidationError(f"Unknown config fields: {', '.join(unknown)}", field=unknown[0])
        resolved = KgpropConfig(**config)
        resolved.validate()
        return resolved

    raise KgpropValidationError(f"Unsupported config type: {type(config)}")
