"""The determinantal Cauchy-Schwarz inequality |det(A*MB)|^2 <= det(A*MA) det(B*MB).

Five mutually exclusive regimes decide equality versus strictness:

* m < n: every Gram product is singular, both sides vanish.
* m = n: det(A*MB) factors through det(WA) and det(WB), so the two sides
  agree exactly.
* m > n with a rank-deficient factor: both sides vanish again.
* m > n, full rank, identical column spans: equality with positive sides.
* m > n, full rank, distinct spans: strict inequality, and the defect is
  exactly one minus the squared determinantal correlation |det(Qa*Qb)|^2.

Wide and rank-deficient regimes are flagged zero structurally (by shape and
rank), never by testing a computed determinant against noise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InequalityViolation, WrongRegime
from .linalg import (
    RANK_TOL,
    HpdFactor,
    SignedLogDet,
    SubspaceBasis,
    as_matrix,
    conj_transpose,
    estimate_rank,
    log_det,
    matmul,
    qr_thin,
)
from .oracles import hermitian_eigenvalues

EQUALITY_TOL = 1e-9       # default relative gap below which equality is accepted
SUBSPACE_TOL = 1e-8       # default principal-angle-cosine deviation for span equality
CORRELATION_SLACK = 1e-10  # |det(Qa*Qb)| may exceed 1 by at most this before clamping
PROFILE_SLACK = 1e-10     # column norms of Qa*Qb may exceed 1 by at most this


class CaseTag(enum.Enum):
    """Which regime an (A, B, M) instance falls in."""

    WIDE_EQUAL_ZERO = "WideEqualZero"
    SQUARE_EQUAL = "SquareEqual"
    RANK_DEFICIENT_ZERO = "RankDeficientZero"
    FULL_RANK_SAME_SPAN = "FullRankSameSpan"
    FULL_RANK_STRICT = "FullRankStrict"

    def implies_equality(self) -> bool:
        return self is not CaseTag.FULL_RANK_STRICT


CLAUSE_TEXT = {
    CaseTag.WIDE_EQUAL_ZERO: (
        "m < n: the n x n Gram products have rank at most m, so both sides vanish "
        "and equality holds"
    ),
    CaseTag.SQUARE_EQUAL: (
        "m = n: det(A*MB) = conj(det(WA)) det(WB), so the two sides agree exactly"
    ),
    CaseTag.RANK_DEFICIENT_ZERO: (
        "m > n with rank(A) < n or rank(B) < n: both sides vanish and equality holds"
    ),
    CaseTag.FULL_RANK_SAME_SPAN: (
        "m > n, full column rank, identical column spans: equality with both sides "
        "positive"
    ),
    CaseTag.FULL_RANK_STRICT: (
        "m > n, full column rank, distinct column spans: the inequality is strict"
    ),
}


@dataclass(frozen=True)
class CsReport:
    """Verdict record for one (A, B, M) instance.

    ``lhs_log`` carries |det(A*MB)|^2 and ``rhs_log`` carries
    det(A*MA) det(B*MB), both in signed-log form.  ``correlation`` is present
    exactly for the two full-rank tall regimes, where the proof's
    |det(Qa*Qb)| is defined.
    """

    case_tag: CaseTag
    lhs_log: SignedLogDet
    rhs_log: SignedLogDet
    correlation: float | None
    relative_gap: float
    equality: bool
    tol_used: float


def gram(a, b, m_fac: HpdFactor | None = None) -> np.ndarray:
    """A*MB, computed as (WA)*(WB) when a weight is given, A*B otherwise."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    if m_fac is None:
        return matmul(conj_transpose(a), b)
    wa, wb = whitened_pair(a, b, m_fac)
    return matmul(conj_transpose(wa), wb)


def whitened_pair(a, b, m_fac: HpdFactor):
    """(WA, WB) for the weight's factor W; Gram products under M of the
    originals equal unweighted Gram products of the pair."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    w = m_fac.w_factor
    if w.shape[1] != a.shape[0]:
        raise ValueError(
            f"weight is {w.shape[0]} x {w.shape[1]} but the matrices have {a.shape[0]} rows"
        )
    return matmul(w, a), matmul(w, b)


def det_correlation(a, b, m_fac: HpdFactor | None = None) -> float:
    """|det(Qa*Qb)| for thin-QR bases of the (whitened) inputs, in [0, 1].

    This is the product of the cosines of the principal angles between the
    two column spaces: 1 exactly when the spans coincide, 0 when some
    direction of one span is orthogonal to all of the other.  The raw value
    is checked against 1 before clamping, so a value past 1 + 1e-10 raises
    instead of being silently pulled back.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    m, n = a.shape
    if m <= n:
        raise WrongRegime(f"correlation is defined only for m > n, got {m} x {n}")
    if m_fac is not None:
        a, b = whitened_pair(a, b, m_fac)
    qa = qr_thin(a).q
    qb = qr_thin(b).q
    raw = log_det(matmul(conj_transpose(qa), qb)).magnitude()
    if raw > 1.0 + CORRELATION_SLACK:
        raise InequalityViolation(
            f"|det(Qa*Qb)| = {raw!r} exceeds 1 + {CORRELATION_SLACK:g}"
        )
    return raw if raw < 1.0 else 1.0


def hadamard_bound(h):
    """(product of column norms, |det|) for a square matrix.

    The determinant magnitude can never exceed the column-norm product; a
    numerical excess past the 1e-10 slack raises.
    """
    mat = as_matrix(h)
    n, cols = mat.shape
    if n != cols:
        raise ValueError(f"bound requires a square matrix, got {mat.shape}")
    log_bound = 0.0
    for j in range(n):
        norm = math.sqrt(float((np.abs(mat[:, j]) ** 2).sum()))
        log_bound = float("-inf") if norm == 0.0 else log_bound + math.log(norm)
    d = log_det(mat)
    det_mag = d.magnitude()
    log_mag = float("-inf") if d.zero else d.log_magnitude
    if log_mag > log_bound + math.log1p(1e-10):
        raise InequalityViolation(
            f"|det| = {det_mag!r} exceeds the column-norm product exp({log_bound!r})"
        )
    bound = 0.0 if log_bound == float("-inf") else math.exp(log_bound)
    return bound, det_mag


def column_norm_profile(u: SubspaceBasis, v: SubspaceBasis) -> list[float]:
    """Euclidean norms of the columns of U*V for two orthonormal bases.

    Each column of U*V is a coordinate shadow of a unit vector, so every norm
    is at most 1; an excess past the 1e-10 slack raises.
    """
    if u.shape != v.shape:
        raise ValueError(f"bases must share a shape, got {u.shape} and {v.shape}")
    m, n = u.shape
    if m <= n:
        raise WrongRegime(f"profile is defined only for m > n, got {m} x {n}")
    w = matmul(conj_transpose(u.ortho), v.ortho)
    profile = []
    for j in range(n):
        norm = math.sqrt(float((np.abs(w[:, j]) ** 2).sum()))
        if norm > 1.0 + PROFILE_SLACK:
            raise InequalityViolation(
                f"column {j} of U*V has norm {norm!r} > 1 + {PROFILE_SLACK:g}"
            )
        profile.append(norm)
    return profile


def subspace_equal(a, b, tol: float = SUBSPACE_TOL) -> bool:
    """Whether two full-column-rank matrices span the same subspace.

    True iff every singular value of Qa*Qb is at least 1 - tol, i.e. the
    largest principal angle between the spans has cosine within tol of 1.
    The singular values come from Jacobi eigenvalues of (Qa*Qb)*(Qa*Qb).
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    if a.shape[0] < a.shape[1]:
        raise WrongRegime(f"span comparison needs m >= n, got {a.shape[0]} x {a.shape[1]}")
    if not tol > 0.0:
        raise ValueError("subspace tolerance must be positive")
    qa = qr_thin(a).q
    qb = qr_thin(b).q
    p = matmul(conj_transpose(qa), qb)
    eigs = hermitian_eigenvalues(matmul(conj_transpose(p), p))
    smallest_sq = eigs[0]
    smallest = math.sqrt(smallest_sq) if smallest_sq > 0.0 else 0.0
    return smallest >= 1.0 - tol


def classify_case(a, b, m_fac: HpdFactor | None = None, tol: float = SUBSPACE_TOL) -> CaseTag:
    """Decide the regime of an (A, B, M) instance.

    Shape settles the wide and square regimes outright; for tall instances
    the (whitened) pair is rank-tested, then span-compared.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    m, n = a.shape
    if m < n:
        return CaseTag.WIDE_EQUAL_ZERO
    if m == n:
        return CaseTag.SQUARE_EQUAL
    work_a, work_b = (a, b) if m_fac is None else whitened_pair(a, b, m_fac)
    if estimate_rank(work_a, RANK_TOL) < n or estimate_rank(work_b, RANK_TOL) < n:
        return CaseTag.RANK_DEFICIENT_ZERO
    if subspace_equal(work_a, work_b, tol):
        return CaseTag.FULL_RANK_SAME_SPAN
    return CaseTag.FULL_RANK_STRICT


def verify_inequality(
    a,
    b,
    m_fac: HpdFactor | None = None,
    tol: float = EQUALITY_TOL,
    subspace_tol: float = SUBSPACE_TOL,
) -> CsReport:
    """Compute both sides of the inequality in log domain and certify the bound.

    Raises InequalityViolation if the left side exceeds the right beyond
    log(1 + tol): the bound holds for every input, so a breach means a
    kernel bug, not a counterexample.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"a and b must share a shape, got {a.shape} and {b.shape}")
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    work_a, work_b = (a, b) if m_fac is None else whitened_pair(a, b, m_fac)
    tag = classify_case(work_a, work_b, None, subspace_tol)
    correlation = None
    if tag in (CaseTag.WIDE_EQUAL_ZERO, CaseTag.RANK_DEFICIENT_ZERO):
        # both sides vanish by rank arithmetic; no determinant is evaluated
        lhs = SignedLogDet.of_zero()
        rhs = SignedLogDet.of_zero()
    else:
        lhs = log_det(matmul(conj_transpose(work_a), work_b)).abs_squared()
        rhs = log_det(matmul(conj_transpose(work_a), work_a)) * log_det(
            matmul(conj_transpose(work_b), work_b)
        )
        if tag in (CaseTag.FULL_RANK_SAME_SPAN, CaseTag.FULL_RANK_STRICT):
            correlation = det_correlation(work_a, work_b)
    if not lhs.zero:
        if rhs.zero:
            raise InequalityViolation(
                "left side is nonzero while the right side vanishes"
            )
        slack = lhs.log_magnitude - rhs.log_magnitude
        if slack > math.log1p(tol):
            raise InequalityViolation(
                f"log slack {slack!r} exceeds log(1 + {tol:g}): "
                f"lhs log {lhs.log_magnitude!r}, rhs log {rhs.log_magnitude!r}"
            )
    if lhs.zero and rhs.zero:
        relative_gap = 0.0
    elif lhs.zero:
        relative_gap = 1.0
    else:
        relative_gap = max(0.0, -math.expm1(lhs.log_magnitude - rhs.log_magnitude))
    return CsReport(
        case_tag=tag,
        lhs_log=lhs,
        rhs_log=rhs,
        correlation=correlation,
        relative_gap=relative_gap,
        equality=tag.implies_equality(),
        tol_used=tol,
    )


def enforce_equality_contract(report: CsReport) -> None:
    """Raise unless an equality-tagged report's gap sits inside its tolerance.

    The four equality regimes promise exact equality in exact arithmetic, so
    a computed gap beyond the tolerance signals a kernel bug, a tolerance
    tighter than roundoff, or spans that pass the (looser) span tolerance
    while the gap resolves their tilt.  Verification front ends apply this
    after verify_inequality so that replayed violations stay violations.
    """
    if report.equality and not report.lhs_log.zero and report.relative_gap > report.tol_used:
        raise InequalityViolation(
            f"case {report.case_tag.value} demands equality but the relative gap is "
            f"{report.relative_gap!r} > {report.tol_used:g}"
        )
