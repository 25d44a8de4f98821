"""Orbit collections of the flat-torus geodesic flow and their lattice polygons.

A finite collection of periodic orbits is identified with its combinatorial
type: the multiset of primitive slopes with multiplicities, sorted by angle.
The closed polygon obtained by chaining the weighted slopes carries every
invariant: Euler characteristic and genus of transverse surfaces, existence of
Birkhoff sections, and linking numbers (through the mixed area).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInput, EmptyCollection, HomologyError
from .exact_core import (
    LatticeVector,
    angle_compare,
    angle_key,
    cross,
    is_primitive,
    lattice_point_counts,
    primitive,
    shoelace_twice_area,
    vec,
)


@dataclass(frozen=True)
class Slope:
    direction: LatticeVector
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "direction", vec(self.direction))
        if not is_primitive(self.direction):
            raise DegenerateInput(f"slope direction {self.direction} is not primitive")
        if self.multiplicity < 1:
            raise DegenerateInput("slope multiplicity must be positive")

    @property
    def vector(self) -> LatticeVector:
        return self.direction.scale(self.multiplicity)


@dataclass(frozen=True)
class TorusCollection:
    slopes: tuple[Slope, ...]

    def __post_init__(self):
        s = tuple(self.slopes)
        for a, b in zip(s, s[1:]):
            if angle_compare(a.direction, b.direction) >= 0:
                raise DegenerateInput("slopes must be strictly increasing in angle; use canonicalize()")
        object.__setattr__(self, "slopes", s)

    def __len__(self):
        return len(self.slopes)

    def __iter__(self):
        return iter(self.slopes)

    @property
    def total_multiplicity(self) -> int:
        return sum(s.multiplicity for s in self.slopes)

    def homology(self) -> LatticeVector:
        total = LatticeVector(0, 0)
        for s in self.slopes:
            total = total + s.vector
        return total

    def to_json(self) -> list:
        return [{"mult": s.multiplicity, "dir": [s.direction.x, s.direction.y]} for s in self.slopes]

    @classmethod
    def from_json(cls, data) -> "TorusCollection":
        """Accept ``[{"mult": n, "dir": [p, q]}, ...]`` or ``[[n, [p, q]], ...]``."""
        raw = []
        for item in data:
            if isinstance(item, dict):
                raw.append((item.get("mult", 1), item["dir"]))
            else:
                n, d = item
                raw.append((n, d))
        return canonicalize(raw)


@dataclass(frozen=True)
class LatticePolygon:
    vertices: tuple[LatticeVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(vec(v) for v in self.vertices))

    def edges(self) -> list[LatticeVector]:
        vs = self.vertices
        return [b - a for a, b in zip(vs[-1:] + vs[:-1], vs)]

    def is_convex(self) -> bool:
        es = [e for e in self.edges() if not e.is_zero()]
        return all(cross(a, b) >= 0 for a, b in zip(es, es[1:] + es[:1]))

    def translate(self, t) -> "LatticePolygon":
        return LatticePolygon(tuple(v + t for v in self.vertices))


@dataclass(frozen=True)
class PolygonInvariants:
    twice_area: int
    interior: int
    boundary: int
    euler: int
    genus: int

    @property
    def area(self) -> Fraction:
        return Fraction(self.twice_area, 2)


@dataclass(frozen=True)
class BirkhoffStatus:
    negative_transverse_surface: bool
    birkhoff_section: bool
    positive_transverse_surface: bool = False


def canonicalize(raw: Iterable[tuple[int, Sequence[int]]]) -> TorusCollection:
    """Normal form of a list of ``(count, vector)`` pairs.

    Vectors are split into primitive direction times a factor absorbed into the
    multiplicity; equal directions are merged; slopes are sorted by angle.
    """
    merged: dict[LatticeVector, int] = {}
    seen = False
    for count, v in raw:
        seen = True
        if int(count) != count or count < 1:
            raise DegenerateInput(f"multiplicity must be a positive integer, got {count!r}")
        m, d = primitive(v)
        merged[d] = merged.get(d, 0) + int(count) * m
    if not seen:
        raise EmptyCollection("collection has no slopes")
    dirs = sorted(merged, key=angle_key)
    return TorusCollection(tuple(Slope(d, merged[d]) for d in dirs))


def sym(u, mult: int = 1) -> TorusCollection:
    """Both orientations of the closed geodesic with primitive direction ``u``."""
    u = vec(u)
    return canonicalize([(mult, u), (mult, -u)])


def is_null_homologous(c: TorusCollection) -> bool:
    return c.homology().is_zero()


def _require_null(c: TorusCollection):
    if not is_null_homologous(c):
        raise HomologyError(f"collection has nonzero homology class {tuple(c.homology())}")


def polygon_of(c: TorusCollection) -> LatticePolygon:
    """Vertex ``j`` is the ``j``-th partial sum of the weighted slopes."""
    _require_null(c)
    verts = []
    acc = LatticeVector(0, 0)
    for s in c.slopes:
        acc = acc + s.vector
        verts.append(acc)
    return LatticePolygon(tuple(verts))


def invariants_of(c: TorusCollection) -> PolygonInvariants:
    poly = polygon_of(c)
    twice_area = shoelace_twice_area(poly.vertices)
    interior, _ = lattice_point_counts(poly.vertices)
    # genus equals the interior count; euler = -2A
    return PolygonInvariants(
        twice_area=twice_area,
        interior=interior,
        boundary=c.total_multiplicity,
        euler=-twice_area,
        genus=interior,
    )


def _twice_area(c: TorusCollection) -> int:
    # shoelace over partial sums, without building the polygon
    _require_null(c)
    s = x = y = 0
    for sl in c.slopes:
        dx, dy = sl.direction.x * sl.multiplicity, sl.direction.y * sl.multiplicity
        s += x * dy - y * dx
        x, y = x + dx, y + dy
    return abs(s)


def area(c: TorusCollection) -> Fraction:
    return Fraction(_twice_area(c), 2)


def union(c1: TorusCollection, c2: TorusCollection) -> TorusCollection:
    """Multiset union; at the polygon level this is the Minkowski sum."""
    return canonicalize([(s.multiplicity, s.direction) for s in (*c1.slopes, *c2.slopes)])


def linking(c1: TorusCollection, c2: TorusCollection) -> Fraction:
    """Linking number ``A(c1) + A(c2) - A(c1 u c2)``; never positive."""
    _require_null(c1)
    _require_null(c2)
    return area(c1) + area(c2) - area(union(c1, c2))


def birkhoff_status(c: TorusCollection) -> BirkhoffStatus:
    """Existence of transverse surfaces and Birkhoff sections bounded by ``c``.

    A negatively transverse surface always exists (translate the polygon so the
    origin sits on its boundary).  A Birkhoff section needs a translate with the
    origin strictly inside, i.e. at least one interior lattice point.  Positively
    transverse surfaces never exist.
    """
    inv = invariants_of(c)
    return BirkhoffStatus(
        negative_transverse_surface=True,
        birkhoff_section=inv.interior >= 1,
        positive_transverse_surface=False,
    )


def symmetric_linking_oracle(u, v) -> int:
    """Minus the number of intersections of the closed geodesics of slopes u, v."""
    u, v = vec(u), vec(v)
    if not (is_primitive(u) and is_primitive(v)):
        raise DegenerateInput("oracle needs primitive directions")
    return -abs(cross(u, v))


def all_parallel(c1: TorusCollection, c2: TorusCollection) -> bool:
    return all(cross(a.direction, b.direction) == 0 for a in c1 for b in c2)
