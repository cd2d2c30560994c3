"""
Special functions: the Olver-normalized Gauss hypergeometric function and the
Gegenbauer functions S and Z with boundary values on their cuts.
"""

from kgprop.specfun.gegenbauer import (
    ConnectionResiduals,
    check_connection_formulas,
    dot_power,
    gegenbauer_ode_residual,
    gegenbauer_s,
    gegenbauer_z,
    gegenbauer_z_continued,
    is_reflectionless_index,
    one_minus_square_power,
)
from kgprop.specfun.hyp2f1 import gamma, hyp2f1_olver, near_integer, rgamma, side_pow

rgamma_complex = rgamma

__all__ = [
    "ConnectionResiduals",
    "check_connection_formulas",
    "dot_power",
    "gamma",
    "gegenbauer_ode_residual",
    "gegenbauer_s",
    "gegenbauer_z",
    "gegenbauer_z_continued",
    "hyp2f1_olver",
    "is_reflectionless_index",
    "near_integer",
    "one_minus_square_power",
    "rgamma",
    "rgamma_complex",
    "side_pow",
]
