"""p-adic height pairings on odd hyperelliptic curves over Q.

The pairing is a sum of local terms: at the distinguished good prime p the
term is t * int_z omega_W(y) computed by Coleman integration with the
Frobenius-equivariant projection of log-singular differentials; at every
other prime where the supports meet it is l_q(q) times an intersection
multiplicity on the smooth model.
"""

from .padic import LogBranch, PadicNumber, exp, log, log0, teichmuller
from .poly import Poly, TruncatedSeries, parse_poly
from .curve import (
    CurvePoint,
    Divisor,
    HyperellipticCurve,
    ResidueDisk,
    ThirdKindForm,
    local_expansion,
    reduce_point,
    residue_divisor,
    third_kind_with_residue,
)
from .rigidcoh import (
    FrobeniusData,
    Subspace,
    annihilator,
    cup_product,
    frobenius_matrix,
    omega_w,
    psi,
    random_complementary_subspace,
    unit_root_subspace,
)
from .coleman import (
    ColemanContext,
    coleman_integral,
    integral_over_divisor,
    tiny_integral,
)
from .heights import (
    HeightResult,
    IdeleCharacter,
    global_height,
    intersection_multiplicity,
    local_height_at_p,
    local_height_away,
    validate_character,
)
from .zeta import count_points_fp, count_points_fp2, weil_polynomial

__version__ = "0.1.0"

__all__ = [
    "ColemanContext", "CurvePoint", "Divisor", "FrobeniusData",
    "HeightResult", "HyperellipticCurve", "IdeleCharacter", "LogBranch",
    "PadicNumber", "Poly", "ResidueDisk", "Subspace", "ThirdKindForm",
    "TruncatedSeries", "annihilator", "coleman_integral", "count_points_fp",
    "count_points_fp2", "cup_product", "exp", "frobenius_matrix",
    "global_height", "integral_over_divisor", "intersection_multiplicity",
    "local_expansion", "local_height_at_p", "local_height_away", "log",
    "log0", "omega_w", "parse_poly", "psi", "random_complementary_subspace",
    "reduce_point", "residue_divisor", "teichmuller",
    "third_kind_with_residue", "tiny_integral", "unit_root_subspace",
    "validate_character", "weil_polynomial",
]
