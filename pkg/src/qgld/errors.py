"""Exception types shared across the package."""


class QgldError(Exception):
    """Base class for all errors raised by this package."""


class NonHermitianInput(QgldError):
    """Input matrix violates the hermiticity tolerance."""


class SingularMatrix(QgldError):
    """A pivot underflowed tolerance during factorization."""


class NotPositiveSemidefinite(QgldError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class RankDeficientBlock(QgldError):
    """Block has numerical rank below its column count."""


class DegenerateEigenvalue(QgldError):
    """Eigenvalue gap too small for a well-defined directional derivative."""


class IndexOutOfRange(QgldError, IndexError):
    """Index outside the valid range."""


class NotInGroundRegister(QgldError):
    """System register is not in the all-zeros state."""


class UnnormalizedTarget(QgldError):
    """Target state vector is not normalized."""


class UnnormalizedPhi(QgldError):
    """Weight vector for an outer-product direction is not normalized."""


class FamilySizeMismatch(QgldError):
    """Controlled family length does not match the deviation register size."""


class NonUnitaryMember(QgldError):
    """A controlled-family member is not unitary within tolerance."""


class ProbabilityOutOfRange(QgldError):
    """Probabilities are outside [0, 1] or do not sum to one."""


class FlatDistribution(QgldError):
    """Readout distribution has no usable peak (aliasing or wrong scale)."""


class NearZeroEigenvalue(QgldError):
    """All usable eigenvalues fell below the pseudo-inverse threshold."""


class IllConditioned(QgldError):
    """Linear system condition estimate exceeds the supported range."""
