"""Exception types shared across the package.

Everything derives from GeometryError so callers (and the CLI) can map
failures to exit codes without enumerating concrete classes.
"""


class GeometryError(Exception):
    """Base class for all domain/scene/metric errors."""


class SpecInvalid(GeometryError):
    """A generator spec (comb depth, spiral pitch, ...) fails its preconditions."""


class DomainInvalid(GeometryError):
    """A planar domain violates a structural invariant (orientation,
    simplicity, slit placement, interior connectivity)."""


class SceneInvalid(GeometryError):
    """An obstacle scene violates a structural invariant (crossing obstacle
    segments, terminal outside the boundary closure, ...)."""


class OffsetFailed(GeometryError):
    """No interior point was found within the requested offset distance."""


class MissingHint(GeometryError):
    """A query point lies on a two-sided slit and no side hint was given."""


class TerminalInsideFloor(GeometryError):
    """A confined query terminal lies strictly inside the forbidden disk."""


class OutsideCone(GeometryError):
    """A point handed to the meridian projection lies outside the wedge cone."""


class PathNotConfined(GeometryError):
    """A path fed to the layered covering check leaves the required annulus."""


class UnreachableError(GeometryError):
    """An operation that must return a concrete path found none."""


class NotReachedWithinBound(GeometryError):
    """An incremental search exhausted its size budget before certifying."""


class SizeMismatch(GeometryError):
    """Two boundary profiles have different sample counts."""


class NotAligned(GeometryError):
    """A congruence check was invoked with a non-matching alignment."""


class MultipleBoundaryComponents(GeometryError):
    """Profiling requires the boundary to be a single closed curve."""


class ProfileUnconverged(GeometryError):
    """Equal-gap boundary sampling failed to converge to the 1% tolerance."""
