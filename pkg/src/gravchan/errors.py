"""Exception types shared across the package."""


class GravchanError(Exception):
    """Base class for all package-specific errors."""


class ZeroNormError(GravchanError):
    """State has (numerically) zero norm and cannot be normalized."""


class UncoveredBasisVectorError(GravchanError):
    """An operator was applied to a ket its rules do not cover."""


class BasisMismatchError(GravchanError):
    """Two states live on different basis configurations (atom counts)."""


class InvalidSpecError(GravchanError):
    """Channel description violates its invariants."""


class ResidualPhotonError(GravchanError):
    """Cavity failed to factor out as the vacuum after entanglement prep."""


class IllConditionedError(GravchanError):
    """Phase readout requested at a fringe extremum where the count-to-phase
    inversion is singular."""


class PhaseOutOfRangeError(GravchanError):
    """Observed probability is incompatible with the fringe amplitude."""


class MultimodalError(GravchanError):
    """Objective failed the unimodality pre-check for golden-section search."""


class InternalInvariantError(GravchanError):
    """A should-never-happen condition; indicates a bug, not bad input."""
