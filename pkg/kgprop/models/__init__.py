"""
Value types for kgprop.
"""

from kgprop.models.antidesitter import AdsPairGeometry, AdsPoint, PoschlTellerRegime, PoschlTellerReport
from kgprop.models.common import CutComplex, GegenbauerParams, Number, PropagatorKind, Side
from kgprop.models.desitter import DsPairGeometry, DsPoint, DsRegion, VacuumParameter
from kgprop.models.evolution import AsymptoticProjections, BogoliubovMap, DynamicsFamily, StaticModel, TwoStateKernels
from kgprop.models.flrw import FlrwModel, FlrwScan, ScaleFactor, ScaleFactorKind
from kgprop.models.krein import (
    AdmissibilityReport,
    AngularPair,
    BogoliubovReport,
    Involution,
    KreinSpaceFD,
    LemmaReport,
    ProjectionQuad,
    VacuumCoefficients,
)
from kgprop.models.potential import Direction, JostPair, ModeReport, Potential, PotentialKind, ScatteringData
from kgprop.models.scenario import Geometry, GridAxis, Scenario, Suite

__all__ = [
    "AdmissibilityReport",
    "AdsPairGeometry",
    "AdsPoint",
    "AngularPair",
    "AsymptoticProjections",
    "BogoliubovMap",
    "BogoliubovReport",
    "CutComplex",
    "Direction",
    "DsPairGeometry",
    "DsPoint",
    "DsRegion",
    "DynamicsFamily",
    "FlrwModel",
    "FlrwScan",
    "GegenbauerParams",
    "Geometry",
    "GridAxis",
    "Involution",
    "JostPair",
    "KreinSpaceFD",
    "LemmaReport",
    "ModeReport",
    "Number",
    "PoschlTellerRegime",
    "PoschlTellerReport",
    "Potential",
    "PotentialKind",
    "ProjectionQuad",
    "PropagatorKind",
    "ScaleFactor",
    "ScaleFactorKind",
    "ScatteringData",
    "Scenario",
    "Side",
    "StaticModel",
    "Suite",
    "TwoStateKernels",
    "VacuumCoefficients",
    "VacuumParameter",
]
