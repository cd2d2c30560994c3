"""
kgprop

Klein-Gordon propagators on model spacetimes (static and time-dependent mode
systems, FLRW, de Sitter, the universal cover of anti-de Sitter) together with
executable checks of the identities relating them.
"""

from kgprop.config import ConfigBuilder, KgpropConfig
from kgprop.errors import KgpropError, KgpropNumericalError, KgpropValidationError
from kgprop.models.common import CutComplex, GegenbauerParams, PropagatorKind, Side
from kgprop.models.scenario import Scenario

__version__ = "0.1.0"
__all__ = [
    "ConfigBuilder",
    "CutComplex",
    "GegenbauerParams",
    "KgpropConfig",
    "KgpropError",
    "KgpropNumericalError",
    "KgpropValidationError",
    "PropagatorKind",
    "Scenario",
    "Side",
]
