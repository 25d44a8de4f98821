"""Syllable codes for periodic geodesics on Hecke orbifolds (p, q, oo).

A periodic geodesic is coded by a cyclic word ``u^i1 v^j1 ... u^im v^jm`` in the
free product Z/p * Z/q.  From the code we get the wheel turn, the linking
number with the cusp fiber of the compactified unit tangent bundle (a lens
space), and, for p = 2, a bilinear upper bound on pairwise linking numbers.
"""
from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DegenerateInput, UnsupportedParams
from .exact_core import FormMatrix, LatticeVector, bilinear_eval, cross

log = logging.getLogger(__name__)

# Linking number of the horocyclic boundary orbit h (code (u^1 v^1)^Z) with the
# cusp fiber.  -1 is the only value consistent with the wheel-turn formula for
# every (p, q); -1/r coincides with it only when r = 1.
HOROCYCLE_CUSP_LINKING = Fraction(-1)


@dataclass(frozen=True)
class HeckeParams:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2 or self.q < 3:
            raise UnsupportedParams(f"need p >= 2 and q >= 3, got ({self.p}, {self.q})")
        if Fraction(1, self.p) + Fraction(1, self.q) >= 1:
            raise UnsupportedParams(f"(p, q) = ({self.p}, {self.q}) is not hyperbolic")

    @property
    def r(self) -> int:
        return self.p * self.q - self.p - self.q


@dataclass(frozen=True, order=True)
class Syllable:
    i: int
    j: int


def _least_rotation(items: tuple) -> tuple:
    n = len(items)
    return min(items[k:] + items[:k] for k in range(n))


@dataclass(frozen=True)
class HeckeCode:
    """Cyclic word of syllables, stored as its lexicographically least rotation."""

    syllables: tuple[Syllable, ...]

    def __post_init__(self):
        syl = tuple(s if isinstance(s, Syllable) else Syllable(*s) for s in self.syllables)
        if not syl:
            raise DegenerateInput("a code needs at least one syllable")
        object.__setattr__(self, "syllables", _least_rotation(syl))

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def check(self, params: HeckeParams) -> "HeckeCode":
        for s in self.syllables:
            if not (1 <= s.i <= params.p - 1 and 1 <= s.j <= params.q - 1):
                raise DegenerateInput(f"syllable ({s.i}, {s.j}) out of range for {params}")
        return self

    def mirror(self, params: HeckeParams) -> "HeckeCode":
        return HeckeCode(tuple(Syllable(params.p - s.i, params.q - s.j) for s in self.syllables))

    def to_json(self) -> dict:
        return {"syllables": [[s.i, s.j] for s in self.syllables]}

    @classmethod
    def from_json(cls, data) -> "HeckeCode":
        if isinstance(data, dict):
            data = data["syllables"]
        return cls(tuple(Syllable(int(i), int(j)) for i, j in data))


class Classification(enum.Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    BOUNDARY_ORBIT = "BoundaryOrbit"


@dataclass(frozen=True)
class FreeProductWord:
    letters: tuple[tuple[str, int], ...]

    def __post_init__(self):
        letters = []
        for g, e in self.letters:
            g = str(g).upper()
            if g not in ("U", "V"):
                raise DegenerateInput(f"unknown generator {g!r}")
            letters.append((g, int(e)))
        object.__setattr__(self, "letters", tuple(letters))

    def inverse(self) -> "FreeProductWord":
        return FreeProductWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        return FreeProductWord(self.letters + other.letters)

    @classmethod
    def from_code(cls, code: HeckeCode) -> "FreeProductWord":
        out = []
        for s in code:
            out += [("U", s.i), ("V", s.j)]
        return cls(tuple(out))


def _order(g: str, params: HeckeParams) -> int:
    return params.p if g == "U" else params.q


def _free_reduce(letters, params):
    stack: list[list] = []
    for g, e in letters:
        e %= _order(g, params)
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] = (stack[-1][1] + e) % _order(g, params)
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return stack


def _cyclic_reduce(stack, params):
    while len(stack) >= 2 and stack[0][0] == stack[-1][0]:
        g, e = stack.pop()
        stack[0][1] = (stack[0][1] + e) % _order(g, params)
        if stack[0][1] == 0:
            stack.pop(0)
    return stack


def normalize(word: FreeProductWord, params: HeckeParams) -> Union[HeckeCode, Classification]:
    """Cyclic normal form of a word in Z/p * Z/q.

    Returns a HeckeCode for hyperbolic conjugacy classes, or a Classification
    for the identity, elliptic elements, and the two template boundary orbits.
    """
    stack = _cyclic_reduce(_free_reduce(word.letters, params), params)
    if not stack:
        return Classification.IDENTITY
    if len(stack) == 1:
        return Classification.ELLIPTIC
    if stack[0][0] == "V":
        stack = stack[1:] + stack[:1]
    code = HeckeCode(tuple(Syllable(stack[k][1], stack[k + 1][1]) for k in range(0, len(stack), 2)))
    if is_boundary_orbit(code, params):
        return Classification.BOUNDARY_ORBIT
    return code


def is_boundary_orbit(code: HeckeCode, params: HeckeParams) -> bool:
    lo = Syllable(1, 1)
    hi = Syllable(params.p - 1, params.q - 1)
    return all(s == lo for s in code) or all(s == hi for s in code)


def wheel_turn(code: HeckeCode, params: HeckeParams) -> Fraction:
    code.check(params)
    p, q = params.p, params.q
    return sum(
        (Fraction(2 * s.i - p, 2 * p) + Fraction(2 * s.j - q, 2 * q) for s in code),
        Fraction(0),
    )


def lk_cusp(code: HeckeCode, params: HeckeParams) -> Fraction:
    """Linking number of the orbit with the cusp fiber, ``pq/r * WT``."""
    return Fraction(params.p * params.q, params.r) * wheel_turn(code, params)


def lk_cusp_homology_oracle(code: HeckeCode, params: HeckeParams,
                            horocycle_linking: Fraction = HOROCYCLE_CUSP_LINKING) -> Fraction:
    """Same linking number, assembled from the homology decomposition of the orbit.

    Each syllable contributes one copy of the horocyclic orbit h plus
    ``i - 1`` copies of the fiber over P and ``j - 1`` copies of the fiber over
    Q, which link the cusp fiber ``q/r`` and ``p/r`` times respectively.
    """
    code.check(params)
    p, q, r = params.p, params.q, params.r
    m = len(code)
    si = sum(s.i - 1 for s in code)
    sj = sum(s.j - 1 for s in code)
    return m * Fraction(horocycle_linking) + si * Fraction(q, r) + sj * Fraction(p, r)


def rademacher_oracle(code: HeckeCode, params: HeckeParams = HeckeParams(2, 3)) -> int:
    if (params.p, params.q) != (2, 3):
        raise UnsupportedParams("the Rademacher count applies to the modular surface (2, 3) only")
    code.check(params)
    return sum(1 for s in code if s.j == 2) - sum(1 for s in code if s.j == 1)


def lens_space(params: HeckeParams) -> tuple[int, int]:
    """``(order, twist)`` of the lens space compactifying the unit tangent bundle."""
    return params.r, params.p - 1


@dataclass(frozen=True)
class MedianTorusClasses:
    a_Z: LatticeVector
    dP: LatticeVector
    dQ: LatticeVector

    def meridian_determinant(self) -> int:
        return cross(self.dP, self.dQ)


def median_classes(params: HeckeParams) -> MedianTorusClasses:
    p, q = params.p, params.q
    return MedianTorusClasses(
        a_Z=LatticeVector(1, 1),
        dP=LatticeVector(p - 1, -1),
        dQ=LatticeVector(-1, q - 1),
    )


@dataclass(frozen=True)
class ArcCountVector:
    q: int
    counts: tuple[int, ...]


def arc_counts(code: HeckeCode, params: HeckeParams) -> ArcCountVector:
    if params.p != 2:
        raise UnsupportedParams("arc counts are defined for p = 2 templates only")
    code.check(params)
    counts = [0] * (params.q - 1)
    for s in code:
        counts[s.j - 1] += 1
    return ArcCountVector(params.q, tuple(counts))


def bound_coefficient_p2(q: int, i: int, j: int) -> int:
    """Coefficient of ``b_i b'_j`` in the p = 2 linking bound (1-based indices)."""
    c = 0
    # crossings with the 2-chain inside the Q solid torus
    if i < j:
        c += ((j - i) // 2 + 1) * (i - 1)
    elif j < i:
        c += ((i - j) // 2 + 1) * (q - 1 - i)
    # levels of the median-torus 2-chain; j <= q/2 compared exactly
    c -= (i - 1) * (q - 1 - i)
    if 2 * j <= q:
        if i <= j:
            c += i - 1
    elif i > j:
        c += q - 1 - i
    return c


def bound_matrix_p2(q: int) -> FormMatrix:
    if q < 3:
        raise UnsupportedParams("need q >= 3")
    return FormMatrix.from_function(q - 1, q - 1, lambda a, b: bound_coefficient_p2(q, a + 1, b + 1))


def bound_matrix_sign_report(q: int) -> dict:
    """Counts of negative, zero and positive entries of the p = 2 bound matrix."""
    M = bound_matrix_p2(q)
    flat = [e for row in M.entries for e in row]
    report = {
        "q": q,
        "negative": sum(1 for e in flat if e < 0),
        "zero": sum(1 for e in flat if e == 0),
        "positive": sum(1 for e in flat if e > 0),
    }
    report["all_negative"] = report["zero"] == 0 and report["positive"] == 0
    log.debug("bound matrix signs at q=%d: %s", q, report)
    return report


def lk_bound_p2(code1: HeckeCode, code2: HeckeCode, q: int) -> Fraction:
    """Upper bound on the linking number of two orbits of the (2, q, oo) template."""
    params = HeckeParams(2, q)
    for c in (code1, code2):
        if is_boundary_orbit(c, params):
            raise DegenerateInput(f"{c.to_json()} is a template boundary orbit, not a geodesic")
    b1 = arc_counts(code1, params).counts
    b2 = arc_counts(code2, params).counts
    return bilinear_eval(bound_matrix_p2(q), b1, b2)


def codes_of_length(params: HeckeParams, length: int) -> Iterable[HeckeCode]:
    """All distinct cyclic codes with exactly ``length`` syllables."""
    alphabet = [Syllable(i, j) for i in range(1, params.p) for j in range(1, params.q)]
    seen = set()
    for word in itertools.product(alphabet, repeat=length):
        code = HeckeCode(word)
        if code.syllables not in seen:
            seen.add(code.syllables)
            yield code


def parse_code(data: Sequence) -> HeckeCode:
    return HeckeCode.from_json(data)
