class GeolinkError(Exception):
    """Base class for domain errors raised by the calculi."""


class DegenerateInput(GeolinkError):
    pass


class ShapeError(GeolinkError):
    pass


class EmptyCollection(GeolinkError):
    pass


class HomologyError(GeolinkError):
    """Raised when an operation needs a null-homologous collection."""


class UnsupportedParams(GeolinkError):
    pass


class NotGeodesic(GeolinkError):
    pass
