"""Tolerance-disciplined planar geometry kernel.

Immutable points, sign-normalized lines, rotational similarities, and the
incidence predicates the rest of the package is built on.  Coordinates are
IEEE doubles in circumradius units (every polygon served by this kernel is
inscribed in a circle of radius about 1) and the default tolerances are
calibrated to that scale.  Angles are carried as exact rational multiples of
pi for as long as possible; trigonometry happens only at the moment a
coordinate is produced.

All types are immutable values and all operations are pure functions, so
everything here can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Angle",
    "CenterMismatch",
    "CoincidentPoints",
    "DEFAULT_TOL",
    "DegenerateSimilarity",
    "GeometryError",
    "Line",
    "ParallelLines",
    "Point",
    "Similarity",
    "TolerancePolicy",
    "apply_similarity",
    "compose",
    "cospi",
    "distance",
    "incident",
    "intersect",
    "line_through",
    "lines_equal",
    "midpoint",
    "sinpi",
]

RationalLike = Union[int, Fraction]

# Coefficient magnitude that anchors the sign of a normalized line; anything
# smaller is treated as zero noise.
_SIGN_EPS = 1e-12
# A coefficient norm this close to 1 is not re-divided, which makes line
# normalization exactly idempotent.
_RENORM_SKIP = 1e-15
# Determinant threshold below which two normalized lines count as parallel.
_PARALLEL_EPS = 1e-12
# Similarity ratios at or below this are construction errors, not geometry.
_RATIO_FLOOR = 1e-12

class GeometryError(Exception):
    """Base class for degeneracies raised by the geometry kernel."""


class CoincidentPoints(GeometryError):
    """Two points expected to be distinct were numerically equal."""


class ParallelLines(GeometryError):
    """Two lines expected to meet were numerically parallel."""


class CenterMismatch(GeometryError):
    """Similarities can only be composed about a common center."""


class DegenerateSimilarity(GeometryError):
    """Similarity ratio collapsed to (numerical) zero."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Incidence threshold plus the separation-audit multiplier.

    A point is incident with a line when its distance is at most ``eps_inc``.
    Distances in the half-open band ``(eps_inc, eps_inc * sep_factor]`` are
    neither incidences nor trustworthy non-incidences; scans report them as
    ambiguous instead of guessing.
    """

    eps_inc: float = 1e-9
    sep_factor: float = 100.0

    def __post_init__(self) -> None:
        if not self.eps_inc > 0.0:
            raise ValueError(f"eps_inc must be positive, got {self.eps_inc}")
        if not self.sep_factor > 1.0:
            raise ValueError(f"sep_factor must exceed 1, got {self.sep_factor}")

    @property
    def ambiguous_band(self) -> float:
        """Upper edge of the distance band that is too close to call."""
        return self.eps_inc * self.sep_factor


DEFAULT_TOL = TolerancePolicy()


def _sinpi_ints(num: int, den: int) -> float:
    """sin(pi * num/den) with exact integer quadrant reduction.

    The fraction need not be in lowest terms; den must be positive.
    """
    num %= 2 * den
    sign = 1.0
    if num >= den:
        num -= den
        sign = -1.0
    if 2 * num > den:
        num = den - num
    return sign * math.sin(math.pi * num / den)


def _cospi_ints(num: int, den: int) -> float:
    return _sinpi_ints(2 * num + den, 2 * den)


def sinpi(x: RationalLike) -> float:
    """sin(pi * x) for an exact rational x.

    The argument is reduced with exact rational arithmetic into [0, 1/2]
    before any float conversion, so large multiples of pi lose no accuracy
    and sin(pi * k) is exactly 0.0 for integer k.
    """
    f = Fraction(x)
    return _sinpi_ints(f.numerator, f.denominator)


def cospi(x: RationalLike) -> float:
    """cos(pi * x) for an exact rational x, via the shifted sine."""
    f = Fraction(x)
    return _cospi_ints(f.numerator, f.denominator)


@dataclass(frozen=True)
class Angle:
    """Exact rational multiple of pi: (num/den) * pi radians.

    Stored in lowest terms with a positive denominator; conversion to float
    radians and trig evaluation are the only lossy operations.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        if self.den == 0:
            raise ValueError("angle denominator must be nonzero")
        num, den = self.num, self.den
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "Angle":
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def radians(self) -> float:
        return math.pi * self.num / self.den

    def cos(self) -> float:
        return _cospi_ints(self.num, self.den)

    def sin(self) -> float:
        return _sinpi_ints(self.num, self.den)

    def __add__(self, other: "Angle") -> "Angle":
        return Angle.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: "Angle") -> "Angle":
        return Angle.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> "Angle":
        return Angle(-self.num, self.den)

    def __mul__(self, k: int) -> "Angle":
        return Angle(self.num * k, self.den)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Point:
    """Planar point in circumradius units."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)


@dataclass(frozen=True)
class Line:
    """Line a*x + b*y + c = 0, normalized on construction.

    Normalization scales the coefficients so a**2 + b**2 == 1 (skipping the
    division when the norm is already within 1e-15 of 1, which makes
    normalization exactly idempotent) and then flips the overall sign so the
    first of (a, b, c) whose magnitude exceeds 1e-12 is positive.  Equal
    lines therefore carry near-identical coefficient triples, and serialized
    output is deterministic.
    """

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        a, b, c = float(self.a), float(self.b), float(self.c)
        if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
            raise GeometryError(f"non-finite line coefficients ({a}, {b}, {c})")
        norm = math.hypot(a, b)
        if norm < 1e-150:
            raise GeometryError("degenerate line: a = b = 0")
        if abs(norm - 1.0) >= _RENORM_SKIP:
            a, b, c = a / norm, b / norm, c / norm
        for coeff in (a, b, c):
            if abs(coeff) > _SIGN_EPS:
                if coeff < 0.0:
                    a, b, c = -a, -b, -c
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def signed_distance(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y + self.c


def line_through(p: Point, q: Point, tol: TolerancePolicy = DEFAULT_TOL) -> Line:
    """Normalized line through two distinct points.

    The offset is computed against the chord midpoint, so the cancellation
    happens at chord scale and both endpoints stay within ~1e-16 of the
    result even for short chords far from the origin.  Raises
    CoincidentPoints when the points are closer than tol.eps_inc.
    """
    if distance(p, q) <= tol.eps_inc:
        raise CoincidentPoints(f"points coincide within {tol.eps_inc}: {p}, {q}")
    a = p.y - q.y
    b = q.x - p.x
    c = -(a * (p.x + q.x) + b * (p.y + q.y)) / 2.0
    return Line(a, b, c)


def intersect(l1: Line, l2: Line) -> Point:
    """Intersection point of two non-parallel normalized lines."""
    det = l1.a * l2.b - l2.a * l1.b
    if abs(det) <= _PARALLEL_EPS:
        raise ParallelLines(f"lines are parallel within {_PARALLEL_EPS}")
    x = (l1.b * l2.c - l2.b * l1.c) / det
    y = (l2.a * l1.c - l1.a * l2.c) / det
    return Point(x, y)


def incident(p: Point, l: Line, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return abs(l.signed_distance(p)) <= tol.eps_inc


def lines_equal(l1: Line, l2: Line, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when the coefficient triples agree up to a global sign."""
    same = max(abs(l1.a - l2.a), abs(l1.b - l2.b), abs(l1.c - l2.c))
    flip = max(abs(l1.a + l2.a), abs(l1.b + l2.b), abs(l1.c + l2.c))
    return min(same, flip) <= tol.eps_inc


@dataclass(frozen=True)
class Similarity:
    """Rotational similarity: rotate by ``angle`` about ``center``, then
    scale radially by ``ratio`` (> 0)."""

    center: Point
    angle: float
    ratio: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.angle) and math.isfinite(self.ratio)):
            raise DegenerateSimilarity("non-finite similarity parameters")
        if self.ratio <= _RATIO_FLOOR:
            raise DegenerateSimilarity(f"similarity ratio {self.ratio} <= {_RATIO_FLOOR}")


def apply_similarity(s: Similarity, p: Point) -> Point:
    dx = p.x - s.center.x
    dy = p.y - s.center.y
    ca = math.cos(s.angle)
    sa = math.sin(s.angle)
    return Point(
        s.center.x + s.ratio * (ca * dx - sa * dy),
        s.center.y + s.ratio * (sa * dx + ca * dy),
    )


def compose(s1: Similarity, s2: Similarity, tol: TolerancePolicy = DEFAULT_TOL) -> Similarity:
    """Composition of two similarities about the same center.

    Similarities sharing a center commute, so the result has the summed
    angle and the multiplied ratio regardless of application order.
    """
    if distance(s1.center, s2.center) > tol.eps_inc:
        raise CenterMismatch(f"centers differ: {s1.center} vs {s2.center}")
    return Similarity(s1.center, s1.angle + s2.angle, s1.ratio * s2.ratio)
