"""Exact integer/rational kernel: lattice vectors, polygons, bilinear forms.

Nothing in here touches floating point.  Rationals are ``fractions.Fraction``
(always in lowest terms with a positive denominator).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateInput, ShapeError

Rational = Fraction


class LatticeVector(NamedTuple):
    x: int
    y: int

    def __add__(self, other):
        return LatticeVector(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticeVector(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return LatticeVector(-self.x, -self.y)

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(k * self.x, k * self.y)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def vec(v) -> LatticeVector:
    if type(v) is LatticeVector:
        return v
    x, y = v
    if isinstance(x, bool) or isinstance(y, bool) or int(x) != x or int(y) != y:
        raise DegenerateInput(f"lattice vector needs integer coordinates, got {v!r}")
    return LatticeVector(int(x), int(y))


def cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def primitive(v) -> tuple[int, LatticeVector]:
    """Split ``v`` as ``multiplicity * direction`` with a coprime direction."""
    v = vec(v)
    if v.is_zero():
        raise DegenerateInput("zero vector has no primitive direction")
    m = gcd(v.x, v.y)
    return m, LatticeVector(v.x // m, v.y // m)


def is_primitive(v) -> bool:
    v = vec(v)
    return not v.is_zero() and gcd(v.x, v.y) == 1


def _half_plane(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def angle_compare(u, v) -> int:
    """Compare the angles of ``u`` and ``v`` in [0, 2pi); returns -1, 0 or 1."""
    u, v = vec(u), vec(v)
    if u.is_zero() or v.is_zero():
        raise DegenerateInput("angle of the zero vector is undefined")
    hu, hv = _half_plane(u), _half_plane(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


angle_key = functools.cmp_to_key(angle_compare)


def shoelace_twice_area(vertices: Sequence) -> int:
    """Twice the area of a counterclockwise polygon, as an exact integer."""
    pts = [vec(p) for p in vertices]
    if not pts:
        raise DegenerateInput("polygon needs at least one vertex")
    s = 0
    for a, b in zip(pts, pts[1:] + pts[:1]):
        s += cross(a, b)
    return abs(s)


def _on_segment(p, a, b) -> bool:
    if cross(b - a, p - a) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def lattice_point_counts(vertices: Sequence) -> tuple[int, int]:
    """Count lattice points strictly inside and on the boundary of a convex polygon.

    Brute-force scan of the bounding box.  Degenerate (collinear) polygons have
    no interior; their boundary is the union of their edges.
    """
    pts = [vec(p) for p in vertices]
    if not pts:
        return 0, 0
    edges = [(a, b) for a, b in zip(pts, pts[1:] + pts[:1]) if a != b]
    flat = shoelace_twice_area(pts) == 0
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    interior = boundary = 0
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            p = LatticeVector(x, y)
            if not edges:
                boundary += p == pts[0]
            elif any(_on_segment(p, a, b) for a, b in edges):
                boundary += 1
            elif not flat and all(cross(b - a, p - a) > 0 for a, b in edges):
                interior += 1
    return interior, boundary


@dataclass(frozen=True)
class FormMatrix:
    """Dense exact matrix of rationals, stored row-major."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(e) for e in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ShapeError("form matrix must have at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged rows in form matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_function(cls, rows: int, cols: int, f) -> "FormMatrix":
        return cls(tuple(tuple(Fraction(f(i, j)) for j in range(cols)) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FormMatrix":
        return cls.from_function(rows, cols, lambda i, j: 0)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "FormMatrix":
        return FormMatrix(tuple(zip(*self.entries)))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self.entries == self.transpose().entries

    def apply(self, b: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product ``M b``."""
        if len(b) != self.cols:
            raise ShapeError(f"vector of length {len(b)} against {self.rows}x{self.cols} matrix")
        b = [Fraction(x) for x in b]
        nz = [(j, x) for j, x in enumerate(b) if x]
        return tuple(sum((row[j] * x for j, x in nz), Fraction(0)) for row in self.entries)

    def to_csv(self) -> str:
        return "".join(",".join(fraction_str(e) for e in row) + "\n" for row in self.entries)


def direct_sum(*blocks: FormMatrix) -> FormMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    grid = [[Fraction(0)] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            grid[r + i][c:c + b.cols] = b.entries[i]
        r += b.rows
        c += b.cols
    return FormMatrix(tuple(tuple(row) for row in grid))


def bilinear_eval(M: FormMatrix, a: Sequence, b: Sequence) -> Fraction:
    """Exact ``a^T M b``."""
    if len(a) != M.rows or len(b) != M.cols:
        raise ShapeError(f"vectors of lengths {len(a)}, {len(b)} against {M.rows}x{M.cols} matrix")
    Mb = M.apply(b)
    return sum((Fraction(x) * y for x, y in zip(a, Mb) if x), Fraction(0))


def fraction_str(x) -> str:
    """Serialize a rational as ``"n"`` or ``"num/den"``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, float):
        raise TypeError("refusing to build an exact rational from a float")
    return Fraction(s)


def as_fractions(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(parse_fraction(x) for x in xs)
