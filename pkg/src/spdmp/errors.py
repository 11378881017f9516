"""Exception types raised by spdmp."""


class SpdDmpError(ValueError):
    """Base class for all spdmp errors."""


class DefinitenessError(SpdDmpError):
    """A matrix required to be SPD has an eigenvalue below the floor."""

    def __init__(self, message, min_eigenvalue=None, step=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.step = step


class AsymmetryError(SpdDmpError):
    """A matrix required to be symmetric is not."""


class DimensionMismatch(SpdDmpError):
    pass


class InvalidDimension(SpdDmpError):
    """Vector length is not a triangular number m(m+1)/2."""


class InvalidParameter(SpdDmpError):
    pass


class DegenerateActivation(SpdDmpError):
    """All basis activations underflowed at the requested phase."""


class RankDeficiency(SpdDmpError):
    pass
