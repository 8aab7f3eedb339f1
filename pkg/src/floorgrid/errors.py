"""Exception types shared across the package."""


class FloorgridError(Exception):
    """Base class for all library errors."""


class InvalidSqueeze(FloorgridError):
    """Notch rectangle would disconnect, empty, or miss the polygon."""


class DegeneratePolygon(FloorgridError):
    """Polygon rasterizes to zero interior pixels."""


class EmptyInterior(FloorgridError):
    """Operation requires at least one interior pixel."""


class ShapeMismatch(FloorgridError):
    """Grid or matrix dimensions do not line up."""


class LengthMismatch(FloorgridError):
    """Paired sequences differ in length."""


class EmptyRegion(FloorgridError):
    """A region unexpectedly has no pixels."""


class EmptyFeatureSet(FloorgridError):
    """At least one feature row is required."""


class PlanFormatError(FloorgridError):
    """A plan or config file failed to parse; names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
