"""Exact linking numbers of periodic orbits of geodesic flows.

Three calculi share one exact kernel: flat tori (lattice polygons), Hecke
orbifolds (syllable codes) and genus-g surfaces (quadratic forms on reduced
codes).
"""
from .errors import (
    DegenerateInput,
    EmptyCollection,
    GeolinkError,
    HomologyError,
    NotGeodesic,
    ShapeError,
    UnsupportedParams,
)

__version__ = "0.1.0"
