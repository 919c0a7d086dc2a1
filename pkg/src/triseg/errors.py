"""Exception taxonomy shared by all modules."""


class TrisegError(Exception):
    """Base class for all package errors."""


class InvalidArgument(TrisegError):
    pass


class OutOfTube(TrisegError):
    """Closest-point coordinates requested outside the unique-projection tube."""


class DegenerateTube(TrisegError):
    """Tubular coordinate change degenerates (1 + s*kappa <= 0)."""


class DegenerateSector(TrisegError):
    """Junction sector too narrow for the requested transition width."""


class UnsupportedGeometry(TrisegError):
    """More than three regions meeting at a point, or similar."""


class InvalidGeometry(TrisegError):
    pass


class InvalidBoundaryData(TrisegError):
    pass


class SolverFailure(TrisegError):
    pass


class ResolutionError(TrisegError):
    """Grid too coarse to resolve the transition layer of some eps."""


class CannotFit(TrisegError):
    """Slope fit impossible (non-positive values)."""


class ConfigError(TrisegError):
    pass
