"""
Scenario runners, one per geometry.
"""

from typing import Dict, Type

from kgprop.config import KgpropConfig
from kgprop.models.scenario import Geometry, Scenario
from kgprop.runners.base import BaseRunner, CheckResult, SuiteReport
from kgprop.runners.evolution import DynamicsRunner, StaticRunner
from kgprop.runners.line1d import FlrwModeRunner, LineRunner
from kgprop.runners.spacetimes import AntiDeSitterRunner, DeSitterRunner

RUNNERS: Dict[Geometry, Type[BaseRunner]] = {
    Geometry.LINE1D: LineRunner,
    Geometry.STATIC: StaticRunner,
    Geometry.DYNAMICS: DynamicsRunner,
    Geometry.FLRW: FlrwModeRunner,
    Geometry.DS: DeSitterRunner,
    Geometry.ADS: AntiDeSitterRunner,
}


def runner_for(scenario: Scenario, config: KgpropConfig) -> BaseRunner:
    """Build the runner of the scenario's geometry; parameters are validated here."""
    return RUNNERS[scenario.geometry](scenario, config)


__all__ = [
    "AntiDeSitterRunner",
    "BaseRunner",
    "CheckResult",
    "DeSitterRunner",
    "DynamicsRunner",
    "FlrwModeRunner",
    "LineRunner",
    "RUNNERS",
    "StaticRunner",
    "SuiteReport",
    "runner_for",
]
