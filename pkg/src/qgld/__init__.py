"""Quantum gradient of the logarithm-determinant on a dense statevector
simulator, with independent classical oracles for every quantum readout."""

from .errors import (
    DegenerateEigenvalue,
    FamilySizeMismatch,
    FlatDistribution,
    IllConditioned,
    IndexOutOfRange,
    NearZeroEigenvalue,
    NonHermitianInput,
    NonUnitaryMember,
    NotInGroundRegister,
    NotPositiveSemidefinite,
    ProbabilityOutOfRange,
    QgldError,
    RankDeficientBlock,
    SingularMatrix,
    UnnormalizedPhi,
    UnnormalizedTarget,
)
from .linalg import (
    EigenDecomposition,
    directional_eigen_derivative,
    degenerate_directional_derivatives,
    eig_hermitian,
    inverse,
    logdet_lu,
    orthonormalize_svd,
    psd_sqrt,
    unitary_phase_exp,
)
from .statevector import (
    RegisterLayout,
    StateVector,
    apply_controlled_family,
    conditional_deviation_distribution,
    deviation_distribution,
    hadamard_deviation_register,
    init_basis,
    inverse_qft_deviation,
    prepare_system_state,
    preparation_unitary,
    sample_deviation,
)
from .qgpe import (
    GradientEncoding,
    PerturbationDirection,
    QgpeOutcome,
    build_delta,
    evolution_family,
    extract_gradient_m1,
    extract_gradient_peak,
    qgpe_run,
    suggest_gradient_bound,
)
from .lanczos import (
    LanczosFactorization,
    RitzSolution,
    assemble_and_solve,
    assemble_block_tridiagonal,
    build_factorization,
    rqbl_init,
    rqbl_step,
    run_rqbl,
)
from .expectation import (
    DenseSource,
    EigenContribution,
    adapt_degenerate_eigenvectors,
    InverseExpectationReport,
    InverseExpectationRequest,
    RqblSource,
    classical_reference_expectation,
    eigenvalue_gradient_probe,
    equal_superposition,
    logdet_gradient_entry,
    qgld_expectation,
    sampled_qgld,
    sigma_qgld_expectation,
)
from .kernel import KernelModel, gaussian_kernel_matrix, kernel_fit, kernel_predict

__version__ = "0.1.0"
