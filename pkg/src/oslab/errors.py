"""Semantic exception hierarchy for the toolkit."""


class OslabError(Exception):
    """Base class for all toolkit errors."""


class DomainExceededError(OslabError):
    """Evaluation or inversion requested outside the trusted domain."""


class NonConvexInputError(OslabError):
    """A Young-function operation received a non-convex growth function."""


class IndivisibleLevelError(OslabError):
    """A dyadic level does not divide the grid resolution."""


class IncompatibleTilingError(OslabError):
    """A tiling scale is not grid-compatible."""


class BoundaryMarginError(OslabError):
    """Function support sits too close to the box boundary for the operation."""


class InsufficientResolutionError(OslabError):
    """The frequency lattice cannot resolve the requested band."""


class ZeroIntegralTestFunctionError(OslabError):
    """A maximal-function kernel has vanishing integral."""


class ExponentOutOfRangeError(OslabError):
    """Space exponents violate a theorem's hypothesis window."""


class ParameterWindowError(OslabError):
    """Operator parameters violate the boundedness hypothesis window."""


class DegenerateCubeError(OslabError):
    """A cube holds fewer grid points than the constraints require."""


class DimensionMismatchError(OslabError):
    """Operator and grid dimensions disagree."""


class UnsupportedDimensionError(OslabError):
    """Only dimensions 1 and 2 are supported."""


class EmptyLevelRangeError(OslabError):
    """The level-set range of a decomposition is empty."""


class UnknownSuiteError(OslabError):
    """Requested verification suite is not registered."""
