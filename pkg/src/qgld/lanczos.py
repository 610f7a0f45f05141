"""Randomized block Lanczos with full reorthogonalization.

Builds the three-term block recursion

    Psi_{p+1} B_{p+1} = X Psi_p - Psi_p A_p - Psi_{p-1} B_p^dag

with A_p = Psi_p^dag X Psi_p, B_{p+1} the hermitian square root of R^dag R
for the residual block R, and every new block reorthogonalized against the
whole accumulated basis.  The blocks assemble into the block-tridiagonal S
whose eigenpairs, lifted through the basis, are the Ritz approximations used
as probe input states.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import eig_hermitian, orthonormalize_svd, psd_sqrt

BREAKDOWN_RTOL = 1e-10
PINV_RTOL = 1e-12


@dataclass
class LanczosFactorization:
    """Accumulated blocks: A_p (hermitian b x b), B_p (b x b), basis blocks Psi_p."""

    block_size: int
    a_blocks: list = field(default_factory=list)
    b_blocks: list = field(default_factory=list)
    basis_blocks: list = field(default_factory=list)
    breakdown: bool = False

    @property
    def steps(self) -> int:
        return len(self.a_blocks)

    def basis(self) -> np.ndarray:
        """All basis blocks concatenated into an N x (steps*b) matrix."""
        return np.hstack(self.basis_blocks)

    def orthonormality_defect(self) -> float:
        q = self.basis()
        return float(np.linalg.norm(q.conj().T @ q - np.eye(q.shape[1])))


@dataclass(frozen=True)
class RitzSolution:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray


@dataclass(frozen=True)
class LanczosStep:
    a_block: np.ndarray
    b_next: np.ndarray
    psi_next: np.ndarray | None
    breakdown: bool


def rqbl_init(n: int, b: int, rng_seed: int) -> np.ndarray:
    """Random orthonormal N x b starting block (Gaussian entries, then U V^dag)."""
    if not 1 <= b <= n:
        raise ValueError(f"block size {b} outside [1, {n}]")
    rng = np.random.default_rng(rng_seed)
    block = rng.standard_normal((n, b)) + 1j * rng.standard_normal((n, b))
    return orthonormalize_svd(block)


def _project_out(block: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # twice-is-enough Gram-Schmidt against the accumulated basis
    for _ in range(2):
        block = block - basis @ (basis.conj().T @ block)
    return block


def rqbl_step(x: np.ndarray, psi_p: np.ndarray, psi_prev: np.ndarray | None,
              b_p: np.ndarray | None, history: np.ndarray | None = None) -> LanczosStep:
    """One block recursion step.

    ``history`` holds every previous basis block concatenated (full
    reorthogonalization); without it, only psi_p and psi_prev are projected
    out.  Breakdown (residual block numerically rank-zero, i.e. an invariant
    subspace) is reported on the returned step, not raised.
    """
    x = np.asarray(x, dtype=complex)
    work = x @ psi_p
    a_p = psi_p.conj().T @ work
    a_p = (a_p + a_p.conj().T) / 2
    r = work - psi_p @ a_p
    if psi_prev is not None and b_p is not None:
        r = r - psi_prev @ b_p.conj().T
    basis = history if history is not None else np.hstack(
        [blk for blk in (psi_prev, psi_p) if blk is not None]
    )
    r = _project_out(r, basis)

    b_next = psd_sqrt(r.conj().T @ r)
    smallest = np.linalg.svd(r, compute_uv=False)[-1]
    if smallest < BREAKDOWN_RTOL * max(np.linalg.norm(x), 1e-300):
        return LanczosStep(a_block=a_p, b_next=b_next, psi_next=None, breakdown=True)

    # Psi_{p+1} = R B^{-1} with a pseudo-inverse guard near breakdown
    w, q = np.linalg.eigh(b_next)
    keep = w > PINV_RTOL * max(w[-1], 1.0)
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    psi_next = r @ ((q * inv) @ q.conj().T)
    psi_next = orthonormalize_svd(_project_out(psi_next, basis))
    return LanczosStep(a_block=a_p, b_next=b_next, psi_next=psi_next, breakdown=False)


def assemble_block_tridiagonal(fact: LanczosFactorization) -> np.ndarray:
    """Dense hermitian S with A_p on the diagonal and B_p on the sub-diagonal."""
    k, b = fact.steps, fact.block_size
    s = np.zeros((k * b, k * b), dtype=complex)
    for p, a in enumerate(fact.a_blocks):
        s[p * b:(p + 1) * b, p * b:(p + 1) * b] = a
    for p, bb in enumerate(fact.b_blocks):
        s[(p + 1) * b:(p + 2) * b, p * b:(p + 1) * b] = bb
        s[p * b:(p + 1) * b, (p + 1) * b:(p + 2) * b] = bb.conj().T
    return s


def assemble_and_solve(x: np.ndarray, fact: LanczosFactorization) -> RitzSolution:
    """Diagonalize S and lift its eigenvectors through the basis blocks."""
    if fact.steps < 1:
        raise ValueError("factorization holds no blocks")
    s = assemble_block_tridiagonal(fact)
    dec = eig_hermitian(s)
    q = fact.basis()
    vectors = q @ dec.vectors
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    residuals = np.linalg.norm(x @ vectors - vectors * dec.values, axis=0)
    return RitzSolution(values=dec.values, vectors=vectors, residuals=residuals)


def run_rqbl(x: np.ndarray, b: int, k: int, rng_seed: int) -> RitzSolution:
    """Random init plus k recursion steps (early stop on breakdown), then the
    Ritz pairs of S sorted by |value| descending (most relevant first).
    Equal magnitudes keep their ascending-eigenvalue order (stable sort)."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[0]
    if k * b > n:
        raise ValueError(f"k*b = {k * b} exceeds the dimension {n}")
    fact = build_factorization(x, b, k, rng_seed)
    sol = assemble_and_solve(x, fact)
    order = np.argsort(-np.abs(sol.values), kind="stable")
    return RitzSolution(
        values=sol.values[order],
        vectors=sol.vectors[:, order],
        residuals=sol.residuals[order],
    )


def build_factorization(x: np.ndarray, b: int, k: int, rng_seed: int) -> LanczosFactorization:
    """The raw factorization behind run_rqbl, kept for inspection and dumps."""
    psi = rqbl_init(x.shape[0], b, rng_seed)
    fact = LanczosFactorization(block_size=b)
    fact.basis_blocks.append(psi)
    psi_prev, b_p = None, None
    for _ in range(k):
        step = rqbl_step(x, psi, psi_prev, b_p, history=fact.basis())
        fact.a_blocks.append(step.a_block)
        if step.breakdown or fact.steps == k:
            fact.breakdown = step.breakdown
            break
        fact.b_blocks.append(step.b_next)
        fact.basis_blocks.append(step.psi_next)
        psi_prev, b_p, psi = psi, step.b_next, step.psi_next
    return fact


def dump_factorization(fact: LanczosFactorization) -> dict:
    """JSON-ready nested-array dump of all blocks."""
    def arr(a):
        return {"re": np.asarray(a).real.tolist(), "im": np.asarray(a).imag.tolist()}

    return {
        "block_size": fact.block_size,
        "steps": fact.steps,
        "breakdown": fact.breakdown,
        "a_blocks": [arr(a) for a in fact.a_blocks],
        "b_blocks": [arr(b) for b in fact.b_blocks],
        "basis_blocks": [arr(p) for p in fact.basis_blocks],
    }
