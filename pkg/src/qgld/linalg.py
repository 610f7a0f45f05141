"""Dense complex linear algebra and the classical oracles used for cross-checking.

Everything here is plain numpy/scipy on dense arrays.  Matrices are
``np.ndarray`` of complex dtype; "hermitian" always means hermitian within
``HERMITICITY_RTOL`` relative to the largest entry.  All tolerances are
keyword-overridable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateEigenvalue,
    NonHermitianInput,
    NotPositiveSemidefinite,
    RankDeficientBlock,
    SingularMatrix,
)

HERMITICITY_RTOL = 1e-12
PIVOT_RTOL = 1e-13
DEGENERACY_RTOL = 1e-8
RANK_RTOL = 1e-10


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a square complex128 array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    """max_ij |a_ij - conj(a_ji)|, the absolute deviation from hermiticity."""
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def require_hermitian(a, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    a = as_complex_matrix(a)
    scale = max(float(np.max(np.abs(a))), 1e-300)
    if hermiticity_defect(a) > rtol * scale:
        raise NonHermitianInput(
            f"hermiticity defect {hermiticity_defect(a):.3e} exceeds {rtol:.1e} * {scale:.3e}"
        )
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending, orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.values)


def eig_hermitian(a, rtol: float = HERMITICITY_RTOL) -> EigenDecomposition:
    """Full eigendecomposition of a hermitian matrix.

    Ordering is deterministic: eigenvalues ascending, and each eigenvector's
    first component of magnitude above 1e-8 is made real and positive.
    """
    a = require_hermitian(a, rtol)
    values, vectors = np.linalg.eigh(a)
    vectors = _fix_phases(vectors)
    return EigenDecomposition(values=values, vectors=vectors)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.argmax(np.abs(col) > 1e-8)
        pivot = col[idx]
        if abs(pivot) > 0:
            out[:, k] = col * (abs(pivot) / pivot)
    return out


def unitary_phase_exp(a, t: float, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """exp(i*t*A) for hermitian A, through the eigendecomposition."""
    dec = eig_hermitian(a, rtol)
    phases = np.exp(1j * t * dec.values)
    return (dec.vectors * phases) @ dec.vectors.conj().T


def _lu_pivots(a: np.ndarray, pivot_rtol: float):
    import warnings

    with warnings.catch_warnings():
        # exact zero pivots surface via our SingularMatrix check below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    diag = np.diag(lu)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    if np.min(np.abs(diag)) <= pivot_rtol * scale:
        raise SingularMatrix(
            f"LU pivot {np.min(np.abs(diag)):.3e} below {pivot_rtol:.1e} * ||A||_F"
        )
    return lu, piv, diag


def logdet_lu(a, pivot_rtol: float = PIVOT_RTOL) -> complex:
    """log det A by LU factorization, imaginary part on the principal branch (-pi, pi]."""
    a = as_complex_matrix(a)
    lu, piv, diag = _lu_pivots(a, pivot_rtol)
    real = float(np.sum(np.log(np.abs(diag))))
    # row swaps contribute a sign: permutation parity from the pivot list
    swaps = int(np.sum(piv != np.arange(len(piv))))
    phase = float(np.sum(np.angle(diag))) + np.pi * (swaps % 2)
    phase = float(np.remainder(phase + np.pi, 2 * np.pi) - np.pi)
    if phase == -np.pi:
        phase = np.pi
    return complex(real, phase)


def inverse(a, pivot_rtol: float = PIVOT_RTOL) -> np.ndarray:
    """A^-1 via LU with partial pivoting; raises SingularMatrix on pivot underflow."""
    a = as_complex_matrix(a)
    lu, piv, _ = _lu_pivots(a, pivot_rtol)
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex))


def psd_sqrt(b2, eig_rtol: float = 1e-12) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues in [-eig_rtol*||B2||_F, 0) are clamped to zero; anything more
    negative raises NotPositiveSemidefinite.
    """
    dec = eig_hermitian(b2)
    scale = max(float(np.linalg.norm(np.asarray(b2))), 1e-300)
    if np.min(dec.values) < -eig_rtol * scale:
        raise NotPositiveSemidefinite(
            f"eigenvalue {np.min(dec.values):.3e} below -{eig_rtol:.1e} * ||B2||_F"
        )
    roots = np.sqrt(np.clip(dec.values, 0.0, None))
    out = (dec.vectors * roots) @ dec.vectors.conj().T
    return (out + out.conj().T) / 2


def orthonormalize_svd(block, rank_rtol: float = RANK_RTOL) -> np.ndarray:
    """Replace an N x b block by U V^dag from its SVD (orthonormal, same span)."""
    block = np.asarray(block, dtype=complex)
    if block.ndim == 1:
        block = block[:, None]
    u, s, vh = np.linalg.svd(block, full_matrices=False)
    if s[-1] <= rank_rtol * s[0]:
        raise RankDeficientBlock(
            f"singular value ratio {s[-1] / s[0]:.3e} below {rank_rtol:.1e}"
        )
    return u @ vh


def _eigenvalue_gap(values: np.ndarray, p: int) -> float:
    gaps = []
    if p > 0:
        gaps.append(abs(values[p] - values[p - 1]))
    if p < len(values) - 1:
        gaps.append(abs(values[p + 1] - values[p]))
    return min(gaps) if gaps else np.inf


def directional_eigen_derivative(
    a,
    delta,
    p: int,
    mode: str = "hellmann_feynman",
    h: float = 1e-5,
    gap_rtol: float = DEGENERACY_RTOL,
) -> float:
    """d/ds of the p-th ascending eigenvalue of A + s*Delta at s = 0.

    ``hellmann_feynman`` evaluates <p|Delta|p> and requires the eigenvalue to
    be nondegenerate; ``central_difference`` re-diagonalizes at +-h and is the
    independent cross-check.  For degenerate eigenvalues see
    :func:`degenerate_directional_derivatives`.
    """
    a = require_hermitian(a)
    delta = require_hermitian(delta)
    if mode == "hellmann_feynman":
        dec = eig_hermitian(a)
        scale = max(float(np.linalg.norm(a)), 1e-300)
        if _eigenvalue_gap(dec.values, p) <= gap_rtol * scale:
            raise DegenerateEigenvalue(
                f"gap at index {p} below {gap_rtol:.1e} * ||A||_F; "
                "use degenerate_directional_derivatives"
            )
        v = dec.vectors[:, p]
        return float(np.real(v.conj() @ delta @ v))
    if mode == "central_difference":
        up = np.linalg.eigvalsh(a + h * delta)
        dn = np.linalg.eigvalsh(a - h * delta)
        return float((up[p] - dn[p]) / (2 * h))
    raise ValueError(f"unknown mode {mode!r}")


def degenerate_directional_derivatives(a, delta, p: int, gap_rtol: float = DEGENERACY_RTOL) -> np.ndarray:
    """Directional derivatives for a degenerate eigenvalue.

    Diagonalizes Delta restricted to the degenerate subspace containing index
    p and returns its eigenvalues ascending (standard degenerate perturbation
    theory).
    """
    a = require_hermitian(a)
    delta = require_hermitian(delta)
    dec = eig_hermitian(a)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    members = np.abs(dec.values - dec.values[p]) <= gap_rtol * scale
    basis = dec.vectors[:, members]
    restricted = basis.conj().T @ delta @ basis
    return np.linalg.eigvalsh((restricted + restricted.conj().T) / 2)
