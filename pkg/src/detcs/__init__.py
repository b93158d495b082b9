"""Determinantal Cauchy-Schwarz: |det(A*MB)|^2 <= det(A*MA) det(B*MB).

The package verifies the bound, classifies every equality/strictness regime,
and exposes the determinantal correlation |det(Qa*Qb)| between column
spaces that controls the gap.
"""

from .errors import (
    DetcsError,
    InequalityViolation,
    MatrixParseError,
    NotHermitian,
    NotPositiveDefinite,
    OracleError,
    RankDeficient,
    WrongRegime,
)
from .fuzz import ENSEMBLES, FuzzConfig, FuzzSummary, run_fuzz
from .inequality import (
    EQUALITY_TOL,
    SUBSPACE_TOL,
    CaseTag,
    CsReport,
    classify_case,
    column_norm_profile,
    det_correlation,
    enforce_equality_contract,
    gram,
    hadamard_bound,
    subspace_equal,
    verify_inequality,
    whitened_pair,
)
from .linalg import (
    HpdFactor,
    QRFactors,
    SignedLogDet,
    SubspaceBasis,
    as_matrix,
    cholesky_hpd,
    conj_transpose,
    estimate_rank,
    log_det,
    matmul,
    qr_thin,
)
from .matrixio import load_matrix, parse_matrix, save_matrix, serialize_matrix
from .oracles import (
    BilinearityWitness,
    PrincipalAngles,
    det_cofactor,
    find_bilinearity_counterexample,
    hermitian_eigenvalues,
    matmul_naive,
    principal_angle_cosines,
)

__all__ = [
    "DetcsError",
    "InequalityViolation",
    "MatrixParseError",
    "NotHermitian",
    "NotPositiveDefinite",
    "OracleError",
    "RankDeficient",
    "WrongRegime",
    "ENSEMBLES",
    "FuzzConfig",
    "FuzzSummary",
    "run_fuzz",
    "EQUALITY_TOL",
    "SUBSPACE_TOL",
    "CaseTag",
    "CsReport",
    "classify_case",
    "column_norm_profile",
    "det_correlation",
    "enforce_equality_contract",
    "gram",
    "hadamard_bound",
    "subspace_equal",
    "verify_inequality",
    "whitened_pair",
    "HpdFactor",
    "QRFactors",
    "SignedLogDet",
    "SubspaceBasis",
    "as_matrix",
    "cholesky_hpd",
    "conj_transpose",
    "estimate_rank",
    "log_det",
    "matmul",
    "qr_thin",
    "load_matrix",
    "parse_matrix",
    "save_matrix",
    "serialize_matrix",
    "BilinearityWitness",
    "PrincipalAngles",
    "det_cofactor",
    "find_bilinearity_counterexample",
    "hermitian_eigenvalues",
    "matmul_naive",
    "principal_angle_cosines",
]
