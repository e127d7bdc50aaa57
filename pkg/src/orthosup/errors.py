"""Exception types shared across the package."""


class OrthosupError(ValueError):
    """Base class; subclasses ``ValueError`` since every case is bad input."""


class DimensionMismatch(OrthosupError):
    pass


class NotNormalized(OrthosupError):
    pass


class ZeroVector(OrthosupError):
    pass


class NotOrthogonal(OrthosupError):
    pass


class DegenerateOverlap(OrthosupError):
    """An overlap with the reference state vanishes, so its phase is undefined."""


class DegenerateCoefficient(OrthosupError):
    """alpha or beta is zero where the construction divides by it."""


class DegenerateBasis(OrthosupError):
    pass


class DegenerateTarget(OrthosupError):
    pass
