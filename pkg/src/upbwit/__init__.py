"""Inseparable PPT states and entanglement witnesses from unextendible product bases."""

from .construct import (
    build_witness,
    evaluate_conditions,
    frustum_threshold,
    lambda_of_t,
    mu_of_p,
    pmax_threshold,
    r_matrix_spectrum,
    rho_of_p,
    solve_condition2,
)
from .linalg import DimensionProfile, hermitian_eig, is_psd, kron, partial_transpose, trace_inner
from .separability import epsilon_grid_oracle, epsilon_seesaw, is_ppt, validate_witness
from .states import (
    ProductStateSet,
    ProductVector,
    builtin_family,
    check_subset_basis_condition,
    gram_q,
    is_unextendible,
)

__version__ = "0.1.0"
