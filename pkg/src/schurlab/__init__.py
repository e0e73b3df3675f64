"""schurlab: a desk-scale numerical laboratory for Schur multipliers.

Symbol constructors, Schatten-class multiplier norms and estimators,
symbol regularity functionals, matrix BMO, twisted Fourier multipliers,
Littlewood-Paley decompositions, and a reproducible sweep harness.
"""

__version__ = "0.1.0"

from .bmo import BallFamily, MatrixField, bmo_norm, default_ball_family, pi_embed, sigma_embed
from .errors import (
    LatticeMismatchError,
    NumericalFailureError,
    SchurLabError,
    ValidationError,
)
from .estimation import (
    FactorizationWitness,
    NormEstimate,
    amplify,
    op_norm_infty_haagerup,
    op_norm_infty_lower_bound,
    op_norm_lower_bound,
    op_norm_p2,
)
from .lattice import Lattice, MultiIndex, derivative_order_cap, make_lattice, multi_indices
from .lp import (
    PartitionFamily,
    covered_pair_mask,
    lp_decompose,
    make_profile,
    partition_sum_check,
    radial_generator,
    rc_split_upper,
    square_function_norm,
    symbol_partition,
)
from .regularity import (
    HmsBreakdown,
    SobolevParams,
    discrete_derivative,
    hm_toeplitz_sum_1d,
    hms_delta_norm,
    hms_norm,
    hms_sobolev_norm,
    holder_modulus,
    sobolev_window_norm,
)
from .report import ExperimentConfig, Report, ReportRow, emit_report, read_report, run_sweep
from .schatten import (
    MatrixOperator,
    conjugate_exponent,
    random_matrix,
    random_symbol,
    schatten_norm,
    schur_adjoint_check,
    schur_apply,
)
from .symbols import (
    SymbolGrid,
    alpha_divided_difference,
    corona_symbol,
    divided_difference,
    row_col_symbols,
    toeplitz_symbol,
)
from .twist import (
    TwistedMultiplier,
    column_square_bound_check,
    field_l2_norm,
    l2_bound_check,
    make_twisted,
    random_field,
    twisted_apply,
    verify_intertwining,
)
