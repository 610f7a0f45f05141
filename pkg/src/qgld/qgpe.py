"""Gradient probe circuits: perturbation directions, controlled evolution
families, and readout of eigenvalue gradients from the deviation register.

Conventions.  A deviation register of m qubits (M = 2^m) indexes perturbation
strengths s(eps), either the unshifted window s = L*eps/M or the centered
window s = (L/M)*(eps - M/2).  Each controlled family member is

    U(eps) = exp(i * t * (X + s(eps) * Delta)),   t = M/(W*L)

with an optional 2*pi factor in t.  Under the canonical convention
(unshifted, no 2*pi, W = 1) the eps-dependent phase is exp(i*eps*grad/W), so
for m = 1 the gradient magnitude is 2*arccos(sqrt(p0))*W, and for m >= 2 the
inverse QFT peaks at bin j = M*grad/(2*pi*W).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import statevector as sv
from .errors import (
    FlatDistribution,
    IndexOutOfRange,
    ProbabilityOutOfRange,
    UnnormalizedPhi,
)
from .linalg import require_hermitian, unitary_phase_exp

DELTA_KINDS = ("element", "all_ones", "outer", "custom")
SHIFTS = ("unshifted", "centered")


@dataclass(frozen=True)
class PerturbationDirection:
    """Hermitian direction Delta selecting which entries of X are differentiated."""

    kind: str
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_delta(kind: str, n: int, i: int | None = None, j: int | None = None,
                phi: np.ndarray | None = None, matrix=None) -> PerturbationDirection:
    """Construct a perturbation direction of the given kind.

    element   -- ones at (i, j) and (j, i), zero-based; a single 1 when i == j
    all_ones  -- every entry 1
    outer     -- conj(phi_i) * phi_j from a normalized weight vector phi
    custom    -- any hermitian matrix
    """
    if kind == "element":
        if i is None or j is None:
            raise ValueError("element direction needs indices i and j")
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"indices ({i}, {j}) outside [0, {n})")
        mat = np.zeros((n, n), dtype=complex)
        mat[i, j] = 1.0
        mat[j, i] = 1.0
    elif kind == "all_ones":
        mat = np.ones((n, n), dtype=complex)
    elif kind == "outer":
        if phi is None:
            raise ValueError("outer direction needs the weight vector phi")
        phi = np.asarray(phi, dtype=complex)
        if phi.shape != (n,):
            raise ValueError(f"phi has shape {phi.shape}, expected ({n},)")
        if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
            raise UnnormalizedPhi(f"phi norm {np.linalg.norm(phi):.12f} != 1")
        mat = np.outer(phi, phi.conj())
    elif kind == "custom":
        if matrix is None:
            raise ValueError("custom direction needs a matrix")
        mat = require_hermitian(matrix)
        if mat.shape != (n, n):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({n}, {n})")
    else:
        raise ValueError(f"unknown direction kind {kind!r}; choose from {DELTA_KINDS}")
    return PerturbationDirection(kind=kind, matrix=(mat + mat.conj().T) / 2)


@dataclass(frozen=True)
class GradientEncoding:
    """Probe parameters: linearization length L, gradient scale W, m deviation
    qubits, deviation window, and whether the 2*pi factor sits inside the
    evolution operator or in the readout decode (the canonical choice)."""

    L: float = 1e-6
    W: float = 1.0
    m: int = 1
    shift: str = "unshifted"
    prefactor_2pi: bool = False

    def __post_init__(self):
        if not 0.0 < self.L <= 1e-2:
            raise ValueError(f"L = {self.L} outside (0, 1e-2]")
        if self.W <= 0.0:
            raise ValueError("W must be positive")
        if not 1 <= self.m <= 12:
            raise ValueError(f"m = {self.m} outside [1, 12]")
        if self.shift not in SHIFTS:
            raise ValueError(f"shift must be one of {SHIFTS}")

    @property
    def deviation_dim(self) -> int:
        return 1 << self.m

    def offsets(self) -> np.ndarray:
        """Perturbation strengths s(eps) for eps = 0..M-1."""
        eps = np.arange(self.deviation_dim, dtype=float)
        if self.shift == "centered":
            eps = eps - self.deviation_dim / 2
        return self.L * eps / self.deviation_dim

    def time_step(self) -> float:
        t = self.deviation_dim / (self.W * self.L)
        return 2 * np.pi * t if self.prefactor_2pi else t

    def bin_to_gradient(self, j: int) -> float:
        """Map an inverse-QFT bin index to a gradient value."""
        m_dim = self.deviation_dim
        if self.shift == "centered" and j >= m_dim / 2:
            j = j - m_dim
        scale = 1.0 if self.prefactor_2pi else 2 * np.pi
        return j * scale * self.W / m_dim

    def amplitude_scale(self) -> float:
        """Multiplier turning the m = 1 arccos phase into a gradient."""
        return self.W if not self.prefactor_2pi else self.W / (2 * np.pi)


def suggest_gradient_bound(delta: PerturbationDirection) -> float:
    """A safe W: twice the spectral norm of Delta, so |grad|/W <= 1/2 < pi."""
    return 2.0 * float(np.linalg.norm(delta.matrix, ord=2))


def evolution_family(x, delta: PerturbationDirection, enc: GradientEncoding) -> list[np.ndarray]:
    """The M controlled members exp(i * t * (X + s(eps) * Delta))."""
    x = require_hermitian(x)
    if delta.matrix.shape != x.shape:
        raise ValueError(f"direction shape {delta.matrix.shape} != matrix shape {x.shape}")
    t = enc.time_step()
    return [unitary_phase_exp(x + s * delta.matrix, t) for s in enc.offsets()]


@dataclass(frozen=True)
class QgpeOutcome:
    """Readout of one gradient probe circuit."""

    distribution: np.ndarray
    peak_index: int
    peak_gradient: float
    amplitude_gradient: float | None
    eigenresidual: float
    conditioned: bool = False


def extract_gradient_m1(p0: float, p1: float, w: float = 1.0) -> float:
    """Gradient magnitude from the two-outcome distribution: 2*arccos(sqrt(p0))*W."""
    if not (0.0 <= p0 <= 1.0 + 1e-12 and 0.0 <= p1 <= 1.0 + 1e-12):
        raise ProbabilityOutOfRange(f"p0 = {p0}, p1 = {p1}")
    if abs(p0 + p1 - 1.0) > 1e-8:
        raise ProbabilityOutOfRange(f"p0 + p1 = {p0 + p1} != 1")
    from_p0 = 2.0 * np.arccos(min(1.0, np.sqrt(p0))) * w
    from_p1 = 2.0 * np.arcsin(min(1.0, np.sqrt(p1))) * w
    if abs(from_p0 - from_p1) > 1e-8 * max(1.0, w):
        raise ProbabilityOutOfRange(
            f"arccos/arcsin extractions disagree: {from_p0} vs {from_p1}"
        )
    return float(from_p0)


def extract_gradient_peak(distribution: np.ndarray, enc: GradientEncoding) -> float:
    """Gradient from the argmax bin of the deviation distribution."""
    distribution = np.asarray(distribution, dtype=float)
    m_dim = len(distribution)
    if float(np.max(distribution)) < 2.0 / m_dim:
        raise FlatDistribution(
            f"max probability {np.max(distribution):.3e} below 2/M = {2.0 / m_dim:.3e}"
        )
    j = int(np.argmax(distribution))
    return enc.bin_to_gradient(j)


def qgpe_run(x, p_state: np.ndarray, delta: PerturbationDirection, enc: GradientEncoding,
             family: list[np.ndarray] | None = None, project_back: bool = False) -> QgpeOutcome:
    """Run the full probe circuit on an (intended) eigenvector p_state.

    Sequence: basis init, eigenstate preparation, Hadamard fan-out of the
    deviations, controlled evolution family, inverse QFT, deviation readout.
    With ``project_back`` the readout undoes the eigenstate preparation and
    conditions the deviation register on the system returning to |0...0>,
    which suppresses contamination from the small eigenvector tilt at finite
    L.  A precomputed ``family`` may be passed to amortize the matrix
    exponentials across runs that share (x, delta, enc).

    The input need not be an exact eigenvector; ``eigenresidual`` reports
    ||X p - (p^dag X p) p|| so callers can detect drift.
    """
    x = require_hermitian(x)
    p_state = np.asarray(p_state, dtype=complex)
    n = sv.system_qubits_for_dim(x.shape[0])
    layout = sv.RegisterLayout(m=enc.m, n=n)
    if family is None:
        family = evolution_family(x, delta, enc)

    state = sv.init_basis(layout, 0)
    sv.prepare_system_state(state, p_state)
    sv.hadamard_deviation_register(state)
    sv.apply_controlled_family(state, family)
    sv.inverse_qft_deviation(state)
    if project_back:
        distribution = sv.conditional_deviation_distribution(state, p_state)
    else:
        distribution = sv.deviation_distribution(state)

    rayleigh = complex(p_state.conj() @ x @ p_state)
    eigenresidual = float(np.linalg.norm(x @ p_state - rayleigh * p_state))

    peak_index = int(np.argmax(distribution))
    peak_gradient = enc.bin_to_gradient(peak_index)
    amplitude_gradient = None
    if enc.m == 1:
        amplitude_gradient = extract_gradient_m1(
            float(distribution[0]), float(distribution[1]), enc.amplitude_scale()
        )
    return QgpeOutcome(
        distribution=distribution,
        peak_index=peak_index,
        peak_gradient=peak_gradient,
        amplitude_gradient=amplitude_gradient,
        eigenresidual=eigenresidual,
        conditioned=project_back,
    )
