"""Exception hierarchy shared by all aqt modules."""


class AqtError(Exception):
    """Base class for all errors raised by this package."""


# --- linear algebra ---------------------------------------------------------

class DimensionMismatch(AqtError):
    pass


class NotHermitian(AqtError):
    pass


class NoConvergence(AqtError):
    pass


class Overflow(AqtError):
    pass


# --- Hamiltonian families ---------------------------------------------------

class InvalidParameter(AqtError):
    pass


class SpecError(AqtError):
    pass


class NonUnitaryOracle(AqtError):
    pass


# --- spectral frames --------------------------------------------------------

class DegenerateSpectrum(AqtError):
    """Adjacent instantaneous levels closer than the gap floor."""

    def __init__(self, msg, s=None, T=None):
        super().__init__(msg)
        self.s = s
        self.T = T


# --- dynamics ---------------------------------------------------------------

class StepSizeTooLarge(AqtError):
    pass


class NormDrift(AqtError):
    pass


class GridMismatch(AqtError):
    pass


class SolverDivergence(AqtError):
    pass


# --- phases and metrics -----------------------------------------------------

class NotClosedLoop(AqtError):
    pass


class NotNormalized(AqtError):
    pass


# --- condition audits -------------------------------------------------------

class PairEqual(AqtError):
    pass


class HypothesisAViolated(AqtError):
    pass
