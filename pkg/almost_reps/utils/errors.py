"""Exception hierarchy shared across the package"""


class AlmostRepError(ValueError):
    """Base class for every error raised by the library"""


class SpecError(AlmostRepError):
    """Malformed algebra spec, graph spec, element literal or run config"""


class CarrierMismatchError(AlmostRepError):
    """Operands live over different carriers or fields"""


class NotInSubspaceError(AlmostRepError):
    """An element was required to lie in a finite subspace but does not"""


class UnsupportedExhaustionError(AlmostRepError):
    """The requested exhaustion type is not defined for the carrier kind"""


class WindowMarginError(AlmostRepError):
    """A vertex set reaches too close to the boundary of a graph window"""


class InvariantError(AlmostRepError):
    """An identity that must hold exactly was found to fail"""
