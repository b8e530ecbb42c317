"""Exception types shared across the package."""


class CurrentProjError(Exception):
    """Base class for all library errors."""


class NotHyperbolic(CurrentProjError):
    """Matrix trace too close to [-2, 2]: no translation length exists."""


class DegenerateConfiguration(CurrentProjError):
    """Boundary endpoints coincide within tolerance; linking is undefined."""


class NonPositiveLength(CurrentProjError):
    """A geodesic length argument must be strictly positive."""


class EmptyWord(CurrentProjError):
    """Operation requires a nonempty reduced word."""


class BadIndex(CurrentProjError):
    """Pants-curve index out of range."""


class OutOfRange(CurrentProjError):
    """Fenchel-Nielsen coordinates outside the supported numerical range."""


class ConstructionFailure(CurrentProjError):
    """Holonomy construction failed its own consistency checks."""


class CutoffUnstable(CurrentProjError):
    """Intersection counts at consecutive enumeration radii disagree."""


class DegenerateCrossing(CurrentProjError):
    """Crossing positions too close to separate reliably; perturb the metric."""


class OracleInconclusive(CurrentProjError):
    """A crossing passed too close to the fundamental domain boundary."""


class EmptyPool(CurrentProjError):
    """A curve pool argument was empty."""


class NonFillingInput(CurrentProjError):
    """Projection requires a filling current (override available)."""


class SamplingStarvation(CurrentProjError):
    """Rejection sampling failed to produce a filling current."""
