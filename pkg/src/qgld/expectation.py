"""Inverse expectation values assembled from eigenvalue-gradient probes.

The entrywise derivative of log det X recovers the inverse: summing the
per-eigenvalue directional derivatives weighted by 1/E_p gives, at full rank,
the matrix element of X^-1 selected by the perturbation direction.  This
module runs one probe circuit per eigenpair (per-eigenvector pipeline), or a
single run on an equal superposition of eigenvectors with the perturbation
rescaled by 1/E_p per eigenstate (superposition pipeline), and cross-checks
both against the direct classical evaluation.

Sign handling: the single-deviation-qubit readout yields |gradient| only, so
probes that can go negative (single-entry directions on indefinite matrices)
are run with an identity-shifted direction Delta + c*I.  The shift adds
exactly c to every eigenvalue slope, keeps every probe phase positive, and is
subtracted after readout.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import statevector as sv
from .errors import NearZeroEigenvalue
from .linalg import eig_hermitian, inverse, require_hermitian, unitary_phase_exp
from .qgpe import (
    GradientEncoding,
    PerturbationDirection,
    build_delta,
    evolution_family,
    qgpe_run,
)
from .lanczos import run_rqbl

PSEUDO_INVERSE_RTOL = 1e-10
EIGEN_RESIDUAL_RTOL = 1e-6
SUPERPOSITION_ZOOM = 1e4


# ---------------------------------------------------------------------------
# eigenpair sources

@dataclass(frozen=True)
class DenseSource:
    """All eigenpairs from the dense solver."""

    def resolve(self, x: np.ndarray):
        dec = eig_hermitian(x)
        residuals = np.linalg.norm(x @ dec.vectors - dec.vectors * dec.values, axis=0)
        return dec.values, dec.vectors, residuals


@dataclass(frozen=True)
class RqblSource:
    """Ritz pairs from the randomized block Lanczos run."""

    b: int
    seed: int
    steps: int | None = None

    def resolve(self, x: np.ndarray):
        n = x.shape[0]
        steps = self.steps if self.steps is not None else n // self.b
        sol = run_rqbl(x, self.b, steps, self.seed)
        return sol.values, sol.vectors, sol.residuals


# ---------------------------------------------------------------------------
# request / report types

@dataclass(frozen=True)
class InverseExpectationRequest:
    x: np.ndarray
    phi: np.ndarray
    k: int
    enc: GradientEncoding = GradientEncoding()
    eigensource: DenseSource | RqblSource = DenseSource()

    def __post_init__(self):
        x = require_hermitian(self.x)
        if not 1 <= self.k <= x.shape[0]:
            raise ValueError(f"k = {self.k} outside [1, {x.shape[0]}]")
        if abs(np.linalg.norm(self.phi) - 1.0) > 1e-10:
            raise ValueError(f"phi norm {np.linalg.norm(self.phi):.12f} != 1")


@dataclass(frozen=True)
class EigenContribution:
    """One eigenvalue's share: raw probed gradient and its 1/E_p weighted value."""

    eigenvalue: float
    delta_e: float
    value: float


@dataclass(frozen=True)
class InverseExpectationReport:
    contributions: tuple
    total: float
    classical_reference: float | None
    residuals: tuple
    skipped: tuple = ()

    def to_dict(self) -> dict:
        return {
            "contributions": [
                {"E_p": c.eigenvalue, "deltaE_p": c.delta_e, "Yp": c.value}
                for c in self.contributions
            ],
            "total": self.total,
            "classical_reference": self.classical_reference,
            "residuals": list(self.residuals),
            "skipped_eigenvalues": list(self.skipped),
        }


# ---------------------------------------------------------------------------
# probes

def eigenvalue_gradient_probe(x, p_vec, delta: PerturbationDirection, enc: GradientEncoding,
                              identity_shift: float = 0.0, symmetric: bool = False,
                              families: dict | None = None) -> float:
    """Probed directional eigenvalue derivative for one eigenvector.

    Runs the circuit with the deviation register conditioned back on the
    prepared eigenvector.  ``identity_shift`` c probes Delta + c*I and
    subtracts c, recovering the sign of slopes in [-c, c].  ``symmetric``
    averages the unshifted and centered deviation windows, which cancels the
    O(L) curvature term of the one-sided probe.  ``families`` caches the
    evolution families across probes sharing (x, delta, enc).
    """
    if identity_shift:
        mat = delta.matrix + identity_shift * np.eye(delta.dim)
        delta = PerturbationDirection(kind="custom", matrix=mat)
    encodings = [enc]
    if symmetric:
        other = "centered" if enc.shift == "unshifted" else "unshifted"
        encodings.append(replace(enc, shift=other))
    grads = []
    for enc_w in encodings:
        family = None
        if families is not None:
            family = families.get(enc_w.shift)
            if family is None:
                family = evolution_family(x, delta, enc_w)
                families[enc_w.shift] = family
        outcome = qgpe_run(x, p_vec, delta, enc_w, family=family, project_back=True)
        grad = outcome.amplitude_gradient
        if grad is None:
            grad = outcome.peak_gradient
        grads.append(grad)
    return float(np.mean(grads)) - identity_shift


def adapt_degenerate_eigenvectors(x, values: np.ndarray, vectors: np.ndarray,
                                  delta_matrix: np.ndarray, l_value: float) -> tuple[np.ndarray, np.ndarray]:
    """Rotate eigenvector clusters so Delta is diagonal inside each degenerate
    (or nearly degenerate at the probe scale) eigenspace.

    Within a cluster whose internal gaps are below the perturbation reach
    ~L*||Delta||, the perturbed eigenvectors re-sort along Delta's internal
    eigendirections, so probing an unadapted basis vector reads a phase
    mixture.  Standard degenerate perturbation theory: diagonalizing the
    restriction of Delta fixes the basis the probes need.  Returns rotated
    vectors and recomputed residuals.
    """
    tol = max(1e-8 * float(np.linalg.norm(x)), 4.0 * l_value * float(np.linalg.norm(delta_matrix, ord=2)))
    vectors = vectors.copy()
    order = np.argsort(values, kind="stable")
    start = 0
    sorted_values = values[order]
    while start < len(order):
        stop = start + 1
        while stop < len(order) and sorted_values[stop] - sorted_values[stop - 1] <= tol:
            stop += 1
        if stop - start > 1:
            idx = order[start:stop]
            basis = vectors[:, idx]
            restricted = basis.conj().T @ delta_matrix @ basis
            _, rot = np.linalg.eigh((restricted + restricted.conj().T) / 2)
            vectors[:, idx] = basis @ rot
        start = stop
    residuals = np.linalg.norm(x @ vectors - vectors * values, axis=0)
    return vectors, residuals


def _select_relevant(values: np.ndarray, k: int, x_norm: float):
    """Indices of the k most relevant eigenvalues (|E| descending), splitting
    out those under the pseudo-inverse threshold."""
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    threshold = PSEUDO_INVERSE_RTOL * max(x_norm, 1e-300)
    used = [int(i) for i in order if abs(values[i]) > threshold]
    skipped = [float(values[i]) for i in order if abs(values[i]) <= threshold]
    if not used:
        raise NearZeroEigenvalue("every requested eigenvalue is below the pseudo-inverse threshold")
    return used, skipped


def qgld_expectation(request: InverseExpectationRequest, symmetric: bool = False,
                     with_classical_reference: bool = False) -> InverseExpectationReport:
    """Per-eigenvector pipeline: one probe per relevant eigenpair with the
    outer-product direction of phi, accumulated as sum_p deltaE_p / E_p.

    The outer-product direction makes every deltaE_p = |<p|phi>|^2 >= 0, so
    the magnitude readout is already signed; eigenvalue signs enter through
    the classical 1/E_p weights.  Accumulation runs in descending |E_p| order
    for bitwise reproducibility.
    """
    x = require_hermitian(request.x)
    phi = np.asarray(request.phi, dtype=complex)
    values, vectors, residuals = request.eigensource.resolve(x)
    x_norm = float(np.linalg.norm(x))
    used, skipped = _select_relevant(values, request.k, x_norm)
    bad = [i for i in used if residuals[i] > EIGEN_RESIDUAL_RTOL * x_norm]
    if bad:
        raise ValueError(
            f"eigensource residual {max(residuals[i] for i in bad):.3e} exceeds "
            f"{EIGEN_RESIDUAL_RTOL:.0e} * ||X||_F; increase Lanczos steps"
        )

    delta = build_delta("outer", x.shape[0], phi=phi)
    vectors, residuals = adapt_degenerate_eigenvectors(x, values, vectors, delta.matrix, request.enc.L)
    families: dict = {}
    contributions = []
    used_residuals = []
    for i in used:
        delta_e = eigenvalue_gradient_probe(
            x, vectors[:, i], delta, request.enc, symmetric=symmetric, families=families
        )
        contributions.append(
            EigenContribution(eigenvalue=float(values[i]), delta_e=delta_e,
                              value=delta_e / float(values[i]))
        )
        used_residuals.append(float(residuals[i]))
    total = 0.0
    for c in contributions:
        total += c.value
    reference = classical_reference_expectation(x, phi) if with_classical_reference else None
    return InverseExpectationReport(
        contributions=tuple(contributions),
        total=float(total),
        classical_reference=reference,
        residuals=tuple(used_residuals),
        skipped=tuple(skipped),
    )


def logdet_gradient_entry(x, i: int, j: int, k: int, enc: GradientEncoding = GradientEncoding(),
                          eigensource: DenseSource | RqblSource = DenseSource(),
                          symmetric: bool = False) -> float:
    """Entry of the log-determinant gradient via probes with a single-entry
    direction (zero-based indices, symmetric-direction convention).

    At k = N and L -> 0 this converges to (X^-1)_ij + (X^-1)_ji for i != j and
    (X^-1)_ii on the diagonal, because the probe direction carries both (i, j)
    and (j, i).  Slopes may be negative here, so probes use an identity shift
    equal to the direction's spectral norm (1 for single-entry directions).
    """
    x = require_hermitian(x)
    values, vectors, residuals = eigensource.resolve(x)
    used, _ = _select_relevant(values, k, float(np.linalg.norm(x)))

    delta = build_delta("element", x.shape[0], i=i, j=j)
    vectors, residuals = adapt_degenerate_eigenvectors(x, values, vectors, delta.matrix, enc.L)
    families: dict = {}
    total = 0.0
    for p in used:
        delta_e = eigenvalue_gradient_probe(
            x, vectors[:, p], delta, enc, identity_shift=1.0, symmetric=symmetric,
            families=families,
        )
        total += delta_e / float(values[p])
    return float(total)


def classical_reference_expectation(x, phi) -> float:
    """Ground truth <phi| X^-1 |phi> through the LU inverse."""
    x = np.asarray(x, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    value = complex(phi.conj() @ inverse(x) @ phi)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


# ---------------------------------------------------------------------------
# superposition pipeline

def equal_superposition(vectors: np.ndarray) -> np.ndarray:
    """Equal-weight combination of eigenvector columns, each phase-fixed so its
    largest-magnitude component is real positive."""
    n = vectors.shape[1]
    psi = np.zeros(vectors.shape[0], dtype=complex)
    for p in range(n):
        col = vectors[:, p]
        pivot = col[np.argmax(np.abs(col))]
        psi += col * (abs(pivot) / pivot)
    return psi / np.sqrt(n)


def _two_basis_conditional_phase(x, psi, family) -> float:
    """Signed phase of the conditional deviation-register amplitude.

    Runs the single-deviation-qubit circuit twice, once as-is and once with a
    quarter-wave offset on the eps = 1 member (the X- and Y-basis readings of
    the deviation qubit), both conditioned on the system register returning to
    the prepared state.  atan2 of the two population differences recovers the
    signed phase without the arccos sign loss.
    """
    quadratures = []
    for offset in (1.0, -1j):
        members = [family[0], offset * family[1]]
        layout = sv.RegisterLayout(m=1, n=sv.system_qubits_for_dim(x.shape[0]))
        state = sv.init_basis(layout, 0)
        sv.prepare_system_state(state, psi)
        sv.hadamard_deviation_register(state)
        sv.apply_controlled_family(state, members)
        sv.inverse_qft_deviation(state)
        dist = sv.conditional_deviation_distribution(state, psi)
        quadratures.append(float(dist[0] - dist[1]))
    return float(np.arctan2(quadratures[1], quadratures[0]))


def _scaled_phase_family(x, weights: np.ndarray, w_run: float) -> list[np.ndarray]:
    """Family Sum_p |p><p| exp(i t s(eps) weight_p) composed from the scaled
    evolution and the inverse evolution of the unperturbed matrix, so the bare
    eigenphases cancel member by member."""
    dec = eig_hermitian(x)
    enc = GradientEncoding(L=1e-6, W=w_run, m=1)
    t = enc.time_step()
    offsets = enc.offsets()
    u_inverse = unitary_phase_exp(x, -t)
    members = []
    for s in offsets:
        phases = np.exp(1j * t * (dec.values + s * weights))
        u_scaled = (dec.vectors * phases) @ dec.vectors.conj().T
        members.append(u_scaled @ u_inverse)
    return members


def _superposition_weights(x, phi, inverse_scaled: bool):
    """Per-eigenstate derivative weights <p|outer(phi)|p>, optionally divided
    by E_p, with pseudo-inverse skipping."""
    x = require_hermitian(x)
    dec = eig_hermitian(x)
    overlaps = np.abs(dec.vectors.conj().T @ np.asarray(phi, dtype=complex)) ** 2
    threshold = PSEUDO_INVERSE_RTOL * max(float(np.linalg.norm(x)), 1e-300)
    usable = np.abs(dec.values) > threshold
    if not np.any(usable):
        raise NearZeroEigenvalue("all eigenvalues below the pseudo-inverse threshold")
    weights = overlaps.copy()
    if inverse_scaled:
        weights[usable] = overlaps[usable] / dec.values[usable]
    weights[~usable] = 0.0
    return dec, weights


def sigma_qgld_expectation(x, phi, enc: GradientEncoding = GradientEncoding()) -> float:
    """Superposition pipeline: a single probe on the equal superposition of all
    eigenvectors, with the perturbation rescaled per eigenstate by 1/E_p.

    The conditioned family is synthesized in the eigenbasis and composed with
    the inverse evolution exp(-i t X), so each eigenstate keeps only the phase
    eps * weight_p / W.  The probe scale W is raised far above max |weight|
    (factor SUPERPOSITION_ZOOM), pushing every phase into the regime where the
    coherent average of the per-eigenstate phases equals their mean; N * W *
    phase then returns sum_p deltaE_p / E_p directly.
    """
    x = require_hermitian(x)
    phi = np.asarray(phi, dtype=complex)
    n = x.shape[0]
    dec, weights = _superposition_weights(x, phi, inverse_scaled=True)
    if float(np.max(np.abs(weights))) == 0.0:
        return 0.0
    w_run = max(enc.W, SUPERPOSITION_ZOOM * float(np.max(np.abs(weights))))
    family = _scaled_phase_family(x, weights, w_run)
    psi = equal_superposition(dec.vectors)
    phase = _two_basis_conditional_phase(x, psi, family)
    return float(n * w_run * phase)


def sampled_qgld(x, phi, n_samples: int, rng_seed: int,
                 enc: GradientEncoding = GradientEncoding()) -> tuple[float, float]:
    """Superposition pipeline averaged over random orthonormal starting states.

    Each sample runs two probes on a random state |r>: one with the
    1/E_p-rescaled weights and one with the raw weights.  Their ratio is a
    self-normalized estimate of <Y> (the raw weights integrate to tr of the
    outer direction, which is 1), so a full orthonormal batch averages exactly
    and the identity matrix gives 1.0 per sample.  Returns (mean, sample
    standard deviation); convergence over few samples is not promised.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    x = require_hermitian(x)
    phi = np.asarray(phi, dtype=complex)
    n = x.shape[0]
    dec, scaled = _superposition_weights(x, phi, inverse_scaled=True)
    _, raw = _superposition_weights(x, phi, inverse_scaled=False)
    w_num = max(enc.W, SUPERPOSITION_ZOOM * float(np.max(np.abs(scaled))))
    w_den = max(enc.W, SUPERPOSITION_ZOOM * float(np.max(np.abs(raw))))
    family_num = _scaled_phase_family(x, scaled, w_num)
    family_den = _scaled_phase_family(x, raw, w_den)

    rng = np.random.default_rng(rng_seed)
    estimates = []
    batch: list[np.ndarray] = []
    for _ in range(n_samples):
        if not batch:
            gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            q, _ = np.linalg.qr(gauss)
            batch = [q[:, c] for c in range(n)]
        r = batch.pop(0)
        numer = n * w_num * _two_basis_conditional_phase(x, r, family_num)
        denom = n * w_den * _two_basis_conditional_phase(x, r, family_den)
        estimates.append(numer / denom if abs(denom) > 1e-12 else 0.0)
    estimates = np.asarray(estimates)
    spread = float(np.std(estimates, ddof=1)) if n_samples > 1 else 0.0
    return float(np.mean(estimates)), spread
