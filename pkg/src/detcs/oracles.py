"""Brute-force reference routes used to cross-check the fast kernels.

Everything here favors obviousness over speed: Laplace expansion for
determinants, a bare triple loop for products, and cyclic Jacobi rotations
for hermitian eigenvalues.  Scale guards keep the factorial-cost paths from
silently dominating a test run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleError, WrongRegime
from .linalg import SubspaceBasis, as_matrix, conj_transpose, matmul

COFACTOR_MAX_N = 6        # Laplace expansion is n!, refuse beyond this
JACOBI_OFFDIAG_TOL = 1e-13  # stop when every off-diagonal magnitude is below tol * trace
JACOBI_MAX_SWEEPS = 60
COSINE_SLACK = 1e-10      # principal-angle cosines may exceed 1 by at most this
SEARCH_TRIALS = 1000


def det_cofactor(a) -> complex:
    """Exact Laplace-expansion determinant, guarded to n <= 6."""
    mat = as_matrix(a)
    n, cols = mat.shape
    if n != cols:
        raise ValueError(f"determinant requires a square matrix, got {mat.shape}")
    if n > COFACTOR_MAX_N:
        raise OracleError(f"cofactor expansion is limited to n <= {COFACTOR_MAX_N}, got n = {n}")
    return _laplace(mat)


def _laplace(mat: np.ndarray) -> complex:
    n = mat.shape[0]
    if n == 1:
        return complex(mat[0, 0])
    total = 0j
    sign = 1.0
    for j in range(n):
        minor = np.delete(mat[1:, :], j, axis=1)
        total += sign * complex(mat[0, j]) * _laplace(minor)
        sign = -sign
    return total


def matmul_naive(a, b) -> np.ndarray:
    """Entrywise triple-loop product; the reference for matmul."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.complex128)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0j
            for k in range(a.shape[1]):
                acc += complex(a[i, k]) * complex(b[k, j])
            out[i, j] = acc
    return out


def jacobi_sweep(w: np.ndarray, threshold: float) -> float:
    """One cyclic sweep of complex Jacobi rotations on hermitian ``w``, in place.

    Rotates every (p, q) pair whose off-diagonal magnitude exceeds
    ``threshold`` and returns the off-diagonal Frobenius mass left afterwards.
    """
    n = w.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            h = w[p, q]
            r = abs(h)
            if r <= threshold:
                continue
            a = w[p, p].real
            b = w[q, q].real
            phi = h / r
            tau = (b - a) / (2.0 * r)
            t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            col_p = w[:, p].copy()
            col_q = w[:, q].copy()
            w[:, p] = c * col_p - s * phi.conjugate() * col_q
            w[:, q] = s * phi * col_p + c * col_q
            row_p = w[p, :].copy()
            row_q = w[q, :].copy()
            w[p, :] = c * row_p - s * phi * row_q
            w[q, :] = s * phi.conjugate() * row_p + c * row_q
            # the rotation was chosen to zero this pair exactly; writing the
            # closed-form results keeps w hermitian to the last bit
            w[p, p] = a - t * r
            w[q, q] = b + t * r
            w[p, q] = 0.0
            w[q, p] = 0.0
    off = w - np.diag(np.diagonal(w))
    return float(np.linalg.norm(off))


def hermitian_eigenvalues(h, offdiag_tol: float = JACOBI_OFFDIAG_TOL) -> list[float]:
    """Eigenvalues of a hermitian matrix by cyclic Jacobi, ascending.

    Iteration stops once every off-diagonal magnitude drops below
    ``offdiag_tol`` times the trace (the natural scale for the PSD products
    this package feeds in).
    """
    mat = as_matrix(h)
    n, cols = mat.shape
    if n != cols:
        raise ValueError(f"eigenvalues require a square matrix, got {mat.shape}")
    w = mat.copy()
    trace = float(np.diagonal(w).real.sum())
    threshold = offdiag_tol * abs(trace)
    for _ in range(JACOBI_MAX_SWEEPS):
        off_mags = np.abs(w - np.diag(np.diagonal(w)))
        if off_mags.max() <= threshold:
            break
        jacobi_sweep(w, threshold)
    else:
        raise OracleError(f"Jacobi failed to converge in {JACOBI_MAX_SWEEPS} sweeps")
    return sorted(float(x) for x in np.diagonal(w).real)


@dataclass(frozen=True)
class PrincipalAngles:
    """Cosines of the principal angles between two subspaces, sorted
    descending; their product is the determinantal correlation."""

    cosines: tuple[float, ...]

    def correlation(self) -> float:
        out = 1.0
        for c in self.cosines:
            out *= c
        return out


def principal_angle_cosines(qa: SubspaceBasis, qb: SubspaceBasis) -> PrincipalAngles:
    """Singular values of Qa*Qb via Jacobi on the hermitian product
    (Qa*Qb)*(Qa*Qb): the cosines of the principal angles between the spans."""
    if qa.shape != qb.shape:
        raise ValueError(f"bases must share a shape, got {qa.shape} and {qb.shape}")
    m, n = qa.shape
    if m <= n:
        raise WrongRegime(f"principal angles need m > n, got {m} x {n}")
    p = matmul(conj_transpose(qa.ortho), qb.ortho)
    eigs = hermitian_eigenvalues(matmul(conj_transpose(p), p))
    cosines = []
    for e in reversed(eigs):
        if e > (1.0 + COSINE_SLACK) ** 2:
            raise OracleError(f"squared cosine {e!r} exceeds 1 + {COSINE_SLACK:g}")
        cosines.append(math.sqrt(e) if e > 0.0 else 0.0)
    return PrincipalAngles(cosines=tuple(cosines))


@dataclass(frozen=True)
class BilinearityWitness:
    """A triple showing det((A1+A2)*B) differs from det(A1*B) + det(A2*B)."""

    a1: np.ndarray
    a2: np.ndarray
    b: np.ndarray
    discrepancy: float


def find_bilinearity_counterexample(seed: int) -> BilinearityWitness:
    """Search random square triples until the additivity defect exceeds 0.1.

    The defect is generic for n >= 2 (1x1 determinants are the one linear
    case, so n = 1 is excluded), so the search ends almost immediately; a full
    sweep of 1000 trials without a witness means the generator is broken.
    """
    for trial in range(SEARCH_TRIALS):
        rng = np.random.default_rng([abs(int(seed)), trial])
        n = 2 + trial % 2
        a1 = _complex_normal(rng, n, n)
        a2 = _complex_normal(rng, n, n)
        b = _complex_normal(rng, n, n)
        joint = det_cofactor(matmul(conj_transpose(a1 + a2), b))
        split = det_cofactor(matmul(conj_transpose(a1), b)) + det_cofactor(
            matmul(conj_transpose(a2), b)
        )
        discrepancy = abs(joint - split)
        if discrepancy > 0.1:
            return BilinearityWitness(a1=a1, a2=a2, b=b, discrepancy=discrepancy)
    raise OracleError(f"no bilinearity defect above 0.1 in {SEARCH_TRIALS} trials")


def _complex_normal(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / math.sqrt(2.0)
