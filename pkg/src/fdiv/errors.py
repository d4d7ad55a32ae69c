"""Exception types shared across the package."""


class FdivError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(FdivError):
    """An argument violates a documented precondition."""


class NotATransitionMatrix(FdivError):
    """A matrix is not invertible over the required ring."""


class ExtractionDiverged(FdivError):
    """Flat-section extraction never stabilised at the expected rank."""


class IsoFailed(FdivError):
    """No invertible change of basis exists between two extracted levels."""


class CohomologyDiverged(FdivError):
    """A cohomology window exceeded its cap without stabilising."""


class FactorizationFailed(FdivError):
    """The transition-matrix factorization loop exceeded its iteration cap."""


class OracleDiverged(FdivError):
    """The twist window for the section-count oracle never saturated."""


class InvalidTower(FdivError):
    """The given tower data cannot carry a Frobenius-divided structure."""
