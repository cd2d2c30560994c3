"""
Invariant propagators on de Sitter space and on the universal cover of anti-de Sitter space.
"""

from kgprop.spacetimes.antidesitter import (
    ads_classical,
    ads_geometry,
    ads_identity_residuals,
    ads_kernel,
    ads_kg_residual,
    ads_nu,
    ads_pair,
    ads_pos_neg,
    ads_prefactor,
    ads_resolvent,
    hyperbolic_kernel,
    op_feynman_ads,
    pt_mode_analysis,
)
from kgprop.spacetimes.base import KgResidual, identity_residuals, sample
from kgprop.spacetimes.desitter import (
    alpha_twostate_kernel,
    alpha_vacuum_kernel,
    antipodal,
    ds_coefficient,
    ds_dalembertian_residual,
    ds_geometry,
    ds_identity_residuals,
    ds_pair,
    ds_resolvent,
    euclidean_kernel,
    inout_vacua,
    op_feynman_ds,
    scarf_mode_map,
    sphere_kernel,
    vacuum_coefficients,
)

__all__ = [
    "KgResidual",
    "ads_classical",
    "ads_geometry",
    "ads_identity_residuals",
    "ads_kernel",
    "ads_kg_residual",
    "ads_nu",
    "ads_pair",
    "ads_pos_neg",
    "ads_prefactor",
    "ads_resolvent",
    "alpha_twostate_kernel",
    "alpha_vacuum_kernel",
    "antipodal",
    "ds_coefficient",
    "ds_dalembertian_residual",
    "ds_geometry",
    "ds_identity_residuals",
    "ds_pair",
    "ds_resolvent",
    "euclidean_kernel",
    "hyperbolic_kernel",
    "identity_residuals",
    "inout_vacua",
    "op_feynman_ds",
    "pt_mode_analysis",
    "sample",
    "scarf_mode_map",
    "sphere_kernel",
    "vacuum_coefficients",
]
