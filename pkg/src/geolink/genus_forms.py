"""Quadratic-form bounds for linking of template orbits on genus-g surfaces.

The genus-g surface is glued from a regular (4g+2)-gon with opposite sides
identified; it covers the orbifold (2, 3, 4g+2) with index 3(4g+2).  Orbits
invariant under the rotation of the polygon are summarized by a reduced code of
dimension 6g+1, and the form ``S = Qhat + R + R`` evaluated on two reduced
codes bounds their linking number from above.

Sides of the polygon are indexed 0..4g+1.  Vertex ``c`` joins side ``c`` to
side ``c+1``; it is *even* or *odd* with ``c``.  Vertex heights are integers in
units of pi/(4g+2), upward positive.
"""
from __future__ import annotations

import enum
import functools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateInput, NotGeodesic, ShapeError
from .exact_core import FormMatrix, as_fractions, bilinear_eval, direct_sum, fraction_str


class Interpretation(str, enum.Enum):
    """Value of the two isolated entries of a cone generator's first block."""

    A = "A"  # entries equal to 1
    B = "B"  # entries equal to 2


# Neither interpretation makes the literal form negative on the cone (see README);
# A matches the displayed generator tuple and the pinned s_eval values.
DEFAULT_INTERPRETATION = Interpretation.A


class RotationVariant(str, enum.Enum):
    """Coefficient of ``(j-2g-1)(l-2g-1)`` in the reduced form Qhat."""

    LKSYM = "lksym"  # 1/(2g-2), the closed formula for Qhat
    LKV = "lkv"  # (2g-1)/(2g-2), the coefficient in the expanded generator-pair formula


@dataclass(frozen=True)
class GenusParams:
    g: int

    def __post_init__(self):
        if int(self.g) != self.g or self.g < 2:
            raise DegenerateInput(f"genus must be an integer >= 2, got {self.g!r}")

    @property
    def sides(self) -> int:
        return 4 * self.g + 2

    @property
    def reduced_dim(self) -> int:
        return 6 * self.g + 1


@dataclass(frozen=True)
class ReducedCode:
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    d: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("b", "c", "d"):
            object.__setattr__(self, name, as_fractions(getattr(self, name)))
        if len(self.c) != len(self.d) or len(self.b) != 4 * len(self.c) + 1:
            raise ShapeError(f"block lengths {len(self.b)}, {len(self.c)}, {len(self.d)} do not fit any genus")

    @property
    def g(self) -> int:
        return len(self.c)

    @classmethod
    def zero(cls, gp: GenusParams) -> "ReducedCode":
        return cls((0,) * (4 * gp.g + 1), (0,) * gp.g, (0,) * gp.g)

    def vector(self) -> tuple[Fraction, ...]:
        return self.b + self.c + self.d

    def __add__(self, other: "ReducedCode") -> "ReducedCode":
        if self.g != other.g:
            raise ShapeError("cannot add reduced codes of different genus")
        return ReducedCode(
            tuple(x + y for x, y in zip(self.b, other.b)),
            tuple(x + y for x, y in zip(self.c, other.c)),
            tuple(x + y for x, y in zip(self.d, other.d)),
        )

    def scale(self, k) -> "ReducedCode":
        k = Fraction(k)
        return ReducedCode(tuple(k * x for x in self.b), tuple(k * x for x in self.c), tuple(k * x for x in self.d))

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "b": [fraction_str(x) for x in self.b],
            "c": [fraction_str(x) for x in self.c],
            "d": [fraction_str(x) for x in self.d],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReducedCode":
        code = cls(tuple(data["b"]), tuple(data["c"]), tuple(data["d"]))
        if "g" in data and int(data["g"]) != code.g:
            raise ShapeError(f"declared g={data['g']} but blocks have genus {code.g}")
        return code


@dataclass(frozen=True)
class DynamicalCode:
    """Cyclic turning word ``L^x1 R^y1 ... L^xn R^yn`` stored as its blocks."""

    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(x), int(y)) for x, y in self.blocks)
        if not blocks:
            raise DegenerateInput("dynamical code needs at least one block")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_string(cls, word: str) -> "DynamicalCode":
        w = word.strip().upper()
        if not w or set(w) - {"L", "R"}:
            raise DegenerateInput(f"dynamical code must be a nonempty word over L, R: {word!r}")
        starts = [k for k in range(len(w)) if w[k] == "L" and w[k - 1] == "R"]
        if not starts:
            raise NotGeodesic(f"{word!r} turns the same way forever and cannot be a geodesic")
        w = w[starts[0]:] + w[:starts[0]]
        blocks = []
        k = 0
        while k < len(w):
            x = 0
            while k < len(w) and w[k] == "L":
                x, k = x + 1, k + 1
            y = 0
            while k < len(w) and w[k] == "R":
                y, k = y + 1, k + 1
            blocks.append((x, y))
        return cls(tuple(blocks))

    def to_string(self) -> str:
        return "".join("L" * x + "R" * y for x, y in self.blocks)


@dataclass(frozen=True)
class ConeGenerator:
    x: int
    y: int
    code: ReducedCode
    interpretation: Interpretation


def rotation_coefficient(gp: GenusParams, variant=RotationVariant.LKSYM) -> Fraction:
    variant = RotationVariant(variant)
    g = gp.g
    if variant is RotationVariant.LKSYM:
        return Fraction(1, 2 * g - 2)
    return Fraction(2 * g - 1, 2 * g - 2)


def qhat_entry(gp: GenusParams, j: int, l: int, coefficient: Fraction) -> Fraction:
    g = gp.g
    return (2 * g + 1) * abs(j - l) - 2 * g * (2 * g + 1) + coefficient * (j - 2 * g - 1) * (l - 2 * g - 1)


def qhat(gp: GenusParams, variant=RotationVariant.LKSYM) -> FormMatrix:
    """Reduced linking form on ribbon-jump counts, indices 1..4g+1."""
    coef = rotation_coefficient(gp, variant)
    n = 4 * gp.g + 1
    return FormMatrix.from_function(n, n, lambda a, b: qhat_entry(gp, a + 1, b + 1, coef))


def r_form(gp: GenusParams) -> FormMatrix:
    g = gp.g
    return FormMatrix.from_function(g, g, lambda m, n: -(2 * g + 1) if (m == n and m > 0) else 0)


def s_form(gp: GenusParams, variant=RotationVariant.LKSYM) -> FormMatrix:
    return _s_form(gp, RotationVariant(variant))


@functools.lru_cache(maxsize=32)
def _s_form(gp: GenusParams, variant: RotationVariant) -> FormMatrix:
    R = r_form(gp)
    return direct_sum(qhat(gp, variant), R, R)


def _check_genus(gp: GenusParams, *codes: ReducedCode):
    for code in codes:
        if code.g != gp.g:
            raise ShapeError(f"reduced code has genus {code.g}, expected {gp.g}")


def s_eval(gp: GenusParams, code1: ReducedCode, code2: ReducedCode, variant=RotationVariant.LKSYM) -> Fraction:
    """Upper bound for the linking number of two symmetric collections on the surface."""
    _check_genus(gp, code1, code2)
    return bilinear_eval(s_form(gp, variant), code1.vector(), code2.vector())


def covering_index(gp: GenusParams) -> int:
    """Degree of the covering of the orbifold (2, 3, 4g+2) by the genus-g surface."""
    return 3 * gp.sides


def lk_bound_orbifold(gp: GenusParams, code1: ReducedCode, code2: ReducedCode,
                      variant=RotationVariant.LKSYM) -> Fraction:
    """Bound pushed down to the orbifold (2, 3, 4g+2) through the covering."""
    return s_eval(gp, code1, code2, variant) / covering_index(gp)


def _run_block(z: int, g: int) -> list[int]:
    # floor((z-1)/2) twos, then a single 1 when z is even
    out = [0] * g
    k = (z - 1) // 2
    for m in range(k):
        out[m] = 2
    if z % 2 == 0:
        out[k] = 1
    return out


def _generator_vector(g: int, x: int, y: int, value: int) -> list[int]:
    b = [0] * (4 * g + 1)
    b[0] += x - 1
    b[4 * g] += y - 1
    b[y] += value  # position y+1
    b[4 * g - x] += value  # position 4g-x+1
    return b + _run_block(x, g) + _run_block(y, g)


def cone_generator(gp: GenusParams, x: int, y: int,
                   interpretation=DEFAULT_INTERPRETATION) -> ConeGenerator:
    interpretation = Interpretation(interpretation)
    g = gp.g
    if not (1 <= x <= 2 * g and 1 <= y <= 2 * g):
        raise DegenerateInput(f"generator indices must lie in [1, {2 * g}], got ({x}, {y})")
    v = _generator_vector(g, x, y, 1 if interpretation is Interpretation.A else 2)
    n = 4 * g + 1
    return ConeGenerator(x, y, ReducedCode(tuple(v[:n]), tuple(v[n:n + g]), tuple(v[n + g:])), interpretation)


def validate_reduced(code: ReducedCode) -> bool:
    if any(x < 0 for x in code.vector()):
        return False
    return all(a >= b for blk in (code.c, code.d) for a, b in zip(blk, blk[1:]))


def dynamical_to_reduced(gp: GenusParams, word, interpretation=DEFAULT_INTERPRETATION) -> ReducedCode:
    """Sum of the cone generators of the blocks of a dynamical code."""
    if isinstance(word, str):
        word = DynamicalCode.from_string(word)
    total = ReducedCode.zero(gp)
    for x, y in word.blocks:
        if not (1 <= x <= 2 * gp.g and 1 <= y <= 2 * gp.g):
            raise NotGeodesic(f"block L^{x} R^{y} turns more than {2 * gp.g} times; not a geodesic")
        total = total + cone_generator(gp, x, y, interpretation).code
    return total


# -- exhaustive cone check ---------------------------------------------------


@dataclass(frozen=True)
class ConeReport:
    g: int
    interpretation: Interpretation
    variant: RotationVariant
    pairs: int
    max_value: Fraction
    argmax: tuple[int, int, int, int]
    all_negative: bool
    corner_values: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "interpretation": self.interpretation.value,
            "variant": self.variant.value,
            "pairs": self.pairs,
            "all_negative": self.all_negative,
            "max": fraction_str(self.max_value),
            "argmax": list(self.argmax),
            "corners": {",".join(map(str, k)): fraction_str(v) for k, v in self.corner_values.items()},
        }


def _integer_form(S: FormMatrix) -> tuple[np.ndarray, int]:
    scale = lcm(*(e.denominator for row in S.entries for e in row))
    ints = [[int(e * scale) for e in row] for row in S.entries]
    return ints, scale


def _pair_values(G: list[list[int]], S_int: list[list[int]], rows: range) -> tuple[int, int]:
    """Max of ``G[a] S G[b]`` over a in rows and all b; returns (value, flat index)."""
    gmax = max(abs(v) for r in G for v in r)
    smax = max(abs(v) for r in S_int for v in r)
    d = len(S_int)
    dtype = np.int64 if gmax * gmax * smax * d * d < 2 ** 62 else object
    Gm = np.array(G, dtype=dtype)
    Sm = np.array(S_int, dtype=dtype)
    block = Gm[rows.start:rows.stop] @ Sm @ Gm.T
    k = int(np.argmax(block))
    return int(block.flat[k]), rows.start * len(G) + k


def _chunk(args):
    return _pair_values(*args)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GEOLINK_WORKERS", "1")))
    except ValueError:
        return 1


def cone_negativity_report(gp: GenusParams, interpretation=DEFAULT_INTERPRETATION,
                           variant=RotationVariant.LKSYM, workers: Optional[int] = None) -> ConeReport:
    """Evaluate S on every pair of cone generators and report the largest value.

    S is bilinear, so it is negative on the whole cone minus the origin exactly
    when it is negative on every generator pair.
    """
    interpretation = Interpretation(interpretation)
    variant = RotationVariant(variant)
    g = gp.g
    keys = [(x, y) for x in range(1, 2 * g + 1) for y in range(1, 2 * g + 1)]
    value = 1 if interpretation is Interpretation.A else 2
    G = [_generator_vector(g, x, y, value) for x, y in keys]
    S_int, scale = _integer_form(s_form(gp, variant))
    n = len(G)
    workers = workers or default_workers()
    if workers <= 1:
        best = [_pair_values(G, S_int, range(0, n))]
    else:
        step = -(-n // workers)
        jobs = [(G, S_int, range(a, min(n, a + step))) for a in range(0, n, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            best = list(ex.map(_chunk, jobs))
    # first occurrence in row-major order breaks ties
    top, idx = max(best, key=lambda t: (t[0], -t[1]))
    a, b = divmod(idx, n)
    max_value = Fraction(top, scale)

    corners = {}
    for x, y, x2, y2 in _corner_points(g):
        corners[(x, y, x2, y2)] = s_eval(
            gp,
            cone_generator(gp, x, y, interpretation).code,
            cone_generator(gp, x2, y2, interpretation).code,
            variant,
        )
    return ConeReport(
        g=g,
        interpretation=interpretation,
        variant=variant,
        pairs=n * n,
        max_value=max_value,
        argmax=keys[a] + keys[b],
        all_negative=max_value < 0,
        corner_values=corners,
    )


def _corner_points(g: int):
    t = 2 * g
    return [(1, 1, 1, 1), (1, 1, 1, t), (1, 1, t, t), (1, t, 1, t), (1, t, t, 1), (t, t, t, t)]


# -- vertex rotations and the full form --------------------------------------


@dataclass(frozen=True)
class VertexRotationTable:
    g: int
    v0: dict
    v1: dict
    h0: dict
    h1: dict


def _ribbon_increments(g: int, i: int, j: int) -> dict[int, int]:
    """Height change, per vertex, of the left and right pushes of ribbon (i, j)."""
    N = 4 * g + 2
    inc: dict[int, int] = {}
    d = (j - i) % N
    left = [(i + t) % N for t in range(d)]
    right = [(j + t) % N for t in range(N - d)]
    # left push turns right at every vertex, so it goes down; right push is the mirror
    for verts, sign in ((left, -1), (right, 1)):
        if len(verts) == 1:
            inc[verts[0]] = inc.get(verts[0], 0) - sign * 4
            continue
        for k, c in enumerate(verts):
            h = 2 * g - 3 if k in (0, len(verts) - 1) else 4 * g - 2
            inc[c] = inc.get(c, 0) + sign * h
    return inc


def vh_tables(gp: GenusParams) -> VertexRotationTable:
    g, N = gp.g, gp.sides
    v0, v1, h0, h1 = {}, {}, {}, {}
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            inc = _ribbon_increments(g, i, j)
            v0[i, j] = sum(h for c, h in inc.items() if c % 2 == 0)
            v1[i, j] = sum(h for c, h in inc.items() if c % 2 == 1)
            d = (j - i) % N
            h0[i, j] = Fraction(d - (2 * g + 1) + j % 2 - i % 2, 2 * g + 1)
            h1[i, j] = Fraction(d - (2 * g + 1) - j % 2 + i % 2, 2 * g + 1)
    return VertexRotationTable(g, v0, v1, h0, h1)


def calibration_candidates(gp: GenusParams) -> list[Fraction]:
    """Unit conversions for heights: pi/(4g+2) in full turns, and in half turns."""
    return [Fraction(1, 2 * gp.sides), Fraction(1, gp.sides)]


def _cyc_between(a: int, b: int, c: int, start: int, N: int) -> bool:
    # start < a < b <= c in the cyclic order of Z/N
    oa, ob, oc = (a - start) % N, (b - start) % N, (c - start) % N
    return 0 < oa < ob <= oc


def ribbon_pairs(gp: GenusParams) -> list[tuple[int, int]]:
    N = gp.sides
    return [(i, j) for i in range(N) for j in range(N) if i != j]


def full_q_entry(gp: GenusParams, tables: VertexRotationTable, calibration: Fraction,
                 i: int, j: int, k: int, l: int) -> Fraction:
    g, N = gp.g, gp.sides
    bar = lambda a: (a + 2 * g + 1) % N
    val = Fraction(int(_cyc_between(k, l, j, i, N)) + int(_cyc_between(i, j, l, k, N)), 2)
    val -= Fraction(int(k not in (i, j)) + int(k not in (bar(i), bar(j))), 8)
    a0, a1 = calibration * tables.v0[i, j], calibration * tables.v1[i, j]
    b0, b1 = calibration * tables.v0[k, l], calibration * tables.v1[k, l]
    val += a0 * tables.h0[k, l] + a1 * tables.h1[k, l]
    val += Fraction(1, 2 * g - 2) * (a0 + a1) * (b0 + b1)
    return val


def full_q(gp: GenusParams, calibration) -> FormMatrix:
    """Unreduced bound form on ribbon counts, ribbons (i, j) in lexicographic order.

    Diagnostic only: heights enter through ``calibration`` (a unit conversion
    whose correct value is not pinned down), so the primary bounds use qhat.
    """
    calibration = Fraction(calibration)
    tables = vh_tables(gp)
    pairs = ribbon_pairs(gp)
    return FormMatrix(tuple(
        tuple(full_q_entry(gp, tables, calibration, i, j, k, l) for k, l in pairs)
        for i, j in pairs
    ))


@dataclass(frozen=True)
class ReductionReport:
    g: int
    calibration: Fraction
    passes: bool
    max_discrepancy: Fraction
    failures: tuple  # (j, l, reduced, expected)
    implied_rotation_coefficient: Optional[Fraction]

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "calibration": fraction_str(self.calibration),
            "passes": self.passes,
            "max_discrepancy": fraction_str(self.max_discrepancy),
            "failures": [[j, l, fraction_str(a), fraction_str(e)] for j, l, a, e in self.failures],
            "implied_rotation_coefficient": (
                None if self.implied_rotation_coefficient is None
                else fraction_str(self.implied_rotation_coefficient)
            ),
        }


def reduced_full_q(gp: GenusParams, calibration) -> dict[tuple[int, int], Fraction]:
    """Sum of full-form coefficients over all rotations of both ribbons, per jump pair."""
    calibration = Fraction(calibration)
    tables = vh_tables(gp)
    N = gp.sides
    out = {}
    for j in range(1, N):
        for l in range(1, N):
            out[j, l] = sum(
                (full_q_entry(gp, tables, calibration, i, (i + j) % N, k, (k + l) % N)
                 for i in range(N) for k in range(N)),
                Fraction(0),
            )
    return out


def reduction_check(gp: GenusParams, calibration, variant=RotationVariant.LKSYM) -> ReductionReport:
    calibration = Fraction(calibration)
    g = gp.g
    coef = rotation_coefficient(gp, variant)
    reduced = reduced_full_q(gp, calibration)
    failures = []
    worst = Fraction(0)
    implied = set()
    for (j, l), got in sorted(reduced.items()):
        want = qhat_entry(gp, j, l, coef)
        if got != want:
            failures.append((j, l, got, want))
            worst = max(worst, abs(got - want))
        w = (j - 2 * g - 1) * (l - 2 * g - 1)
        base = qhat_entry(gp, j, l, Fraction(0))
        if w:
            implied.add((got - base) / w)
        elif got != base:
            implied.add(None)
    coefficient = implied.pop() if len(implied) == 1 else None
    return ReductionReport(g, calibration, not failures, worst, tuple(failures), coefficient)
