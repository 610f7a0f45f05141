"""Dense statevector simulator for the two-register gradient probe circuits.

The state holds m deviation qubits and n system qubits.  Deviation qubits
occupy the high-order bits, so amplitude index eps*N + s addresses deviation
basis state eps and system basis state s, and applying one controlled family
member touches a contiguous block of N amplitudes.

Operations mutate the passed state in place and also return it, so they can
be chained; a state belongs to a single circuit execution.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FamilySizeMismatch,
    IndexOutOfRange,
    NonUnitaryMember,
    NotInGroundRegister,
    UnnormalizedTarget,
)

NORM_ATOL = 1e-10
MAX_QUBITS = 26


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit counts: m deviation qubits (M = 2^m), n system qubits (N = 2^n)."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("need at least one qubit in each register")
        if self.m + self.n > MAX_QUBITS:
            raise ValueError(f"m + n = {self.m + self.n} exceeds the {MAX_QUBITS}-qubit guard")

    @property
    def deviation_dim(self) -> int:
        return 1 << self.m

    @property
    def system_dim(self) -> int:
        return 1 << self.n


@dataclass
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def as_matrix(self) -> np.ndarray:
        """View of the amplitudes as a (M, N) matrix, one row per deviation index."""
        return self.amplitudes.reshape(self.layout.deviation_dim, self.layout.system_dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes.copy())


def system_qubits_for_dim(dim: int) -> int:
    """Number of qubits for a dimension that must be a power of two."""
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


def init_basis(layout: RegisterLayout, index: int) -> StateVector:
    """State with amplitude 1 at the given joint basis index."""
    total = layout.deviation_dim * layout.system_dim
    if not 0 <= index < total:
        raise IndexOutOfRange(f"index {index} outside [0, {total})")
    amplitudes = np.zeros(total, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(layout, amplitudes)


def preparation_unitary(v: np.ndarray) -> np.ndarray:
    """Unitary completion whose first column is v (Householder reflection).

    A phase-adjusted reflection maps e_0 exactly onto v; the remaining columns
    complete an orthonormal basis.
    """
    v = np.asarray(v, dtype=complex)
    n = v.shape[0]
    e0 = np.zeros(n, dtype=complex)
    e0[0] = 1.0
    phase = v[0] / abs(v[0]) if abs(v[0]) > 1e-14 else 1.0
    w = e0 - v / phase
    wn = np.linalg.norm(w)
    if wn < 1e-14:
        return np.eye(n, dtype=complex) * phase
    refl = np.eye(n, dtype=complex) - 2.0 * np.outer(w, w.conj()) / wn**2
    return phase * refl


def prepare_system_state(state: StateVector, v: np.ndarray) -> StateVector:
    """Load v into the system register; requires the system register in |0...0>."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (state.layout.system_dim,):
        raise ValueError(f"target has shape {v.shape}, expected ({state.layout.system_dim},)")
    if abs(np.linalg.norm(v) - 1.0) > NORM_ATOL:
        raise UnnormalizedTarget(f"target norm {np.linalg.norm(v):.12f} != 1")
    mat = state.as_matrix()
    if np.linalg.norm(mat[:, 1:]) > NORM_ATOL:
        raise NotInGroundRegister("system register carries weight outside |0...0>")
    gamma = preparation_unitary(v)
    mat[:] = mat @ gamma.T
    return state


def unprepare_system_state(state: StateVector, v: np.ndarray) -> StateVector:
    """Apply the inverse of the preparation unitary for v to the system register."""
    v = np.asarray(v, dtype=complex)
    gamma = preparation_unitary(v)
    mat = state.as_matrix()
    mat[:] = mat @ gamma.conj()
    return state


def hadamard_deviation_register(state: StateVector) -> StateVector:
    """H on every deviation qubit, system register untouched."""
    m, n_dim = state.layout.m, state.layout.system_dim
    x = state.amplitudes.reshape((2,) * m + (n_dim,))
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for axis in range(m):
        a = np.take(x, 0, axis=axis)
        b = np.take(x, 1, axis=axis)
        hi, lo = (a + b) * inv_sqrt2, (a - b) * inv_sqrt2
        x = np.stack([hi, lo], axis=axis)
    state.amplitudes = x.reshape(-1)
    return state


def unitarity_defect(u: np.ndarray) -> float:
    n = u.shape[0]
    return float(np.linalg.norm(u.conj().T @ u - np.eye(n)))


def apply_controlled_family(state: StateVector, family) -> StateVector:
    """For each deviation basis index eps, multiply the system block by family[eps]."""
    m_dim = state.layout.deviation_dim
    n_dim = state.layout.system_dim
    if len(family) != m_dim:
        raise FamilySizeMismatch(f"family has {len(family)} members, expected {m_dim}")
    mat = state.as_matrix()
    for eps, u in enumerate(family):
        u = np.asarray(u, dtype=complex)
        if u.shape != (n_dim, n_dim):
            raise FamilySizeMismatch(f"member {eps} has shape {u.shape}")
        if unitarity_defect(u) > NORM_ATOL * n_dim:
            raise NonUnitaryMember(f"member {eps} unitarity defect {unitarity_defect(u):.3e}")
        mat[eps] = u @ mat[eps]
    return state


def inverse_qft_deviation(state: StateVector) -> StateVector:
    """M-point inverse Fourier kernel exp(-2*pi*i*j*k/M)/sqrt(M) on the deviation register."""
    mat = state.as_matrix()
    m_dim = state.layout.deviation_dim
    out = np.fft.fft(mat, axis=0) / np.sqrt(m_dim)
    state.amplitudes = out.reshape(-1)
    return state


def deviation_distribution(state: StateVector) -> np.ndarray:
    """Marginal probabilities of the deviation register."""
    mat = state.as_matrix()
    return np.sum(np.abs(mat) ** 2, axis=1)


def conditional_deviation_distribution(state: StateVector, system_state: np.ndarray) -> np.ndarray:
    """Deviation distribution conditioned on the system register being in system_state.

    Equivalent to undoing the preparation of system_state and post-selecting
    the system register on |0...0>, renormalized.
    """
    system_state = np.asarray(system_state, dtype=complex)
    mat = state.as_matrix()
    amps = mat @ system_state.conj()
    weight = float(np.sum(np.abs(amps) ** 2))
    if weight < 1e-30:
        raise NotInGroundRegister("conditioning state has no overlap with the register")
    return np.abs(amps) ** 2 / weight


def sample_deviation(state: StateVector, rng_seed: int, shots: int) -> np.ndarray:
    """Multinomial counts over deviation outcomes; seed-reproducible (PCG64)."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = deviation_distribution(state)
    probs = probs / probs.sum()
    rng = np.random.default_rng(rng_seed)
    return rng.multinomial(shots, probs)


def dump_state(state: StateVector) -> dict:
    """Debug representation: {"m", "n", "re", "im"}."""
    return {
        "m": state.layout.m,
        "n": state.layout.n,
        "re": state.amplitudes.real.tolist(),
        "im": state.amplitudes.imag.tolist(),
    }
