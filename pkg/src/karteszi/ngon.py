"""Regular n-gons, diagonal classes, derived n-gons, and common lines.

The k-th diagonals of a regular n-gon are the chords A_j A_{j+k}; consecutive
ones intersect in the vertices of a smaller regular n-gon, the k-th derived
n-gon.  The map carrying the original polygon onto the derived one is a
rotational similarity about the shared center with angle (k-1)*pi/n and ratio
cos(k*pi/n) / cos(pi/n).  Because all of these similarities share one center
they commute, and chasing a polygon side through two of them yields a single
line that simultaneously carries an m-th diagonal of the ell-th derived
polygon and an ell-th diagonal of the m-th derived polygon.  That common line
is the raw material for the configurations assembled in
:mod:`karteszi.config`.

Diagonal classes run over 1 <= k <= floor((n-1)/2); class k = n/2 (diameters
of even polygons) is deliberately out of range, since the derived polygon
degenerates to the center there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

from .geom import (
    Angle,
    Line,
    Point,
    Similarity,
    _cospi_ints,
    _sinpi_ints,
    apply_similarity,
    compose,
    distance,
    intersect,
    line_through,
    midpoint,
)

__all__ = [
    "ClassOutOfRange",
    "DerivedNGon",
    "DiagonalRef",
    "RegularNGon",
    "common_line",
    "diagonal",
    "kth_ngon",
    "max_class",
    "midpoint_map_check",
    "phi",
    "vertex",
]

# Agreement threshold for the derived-vertex vs similarity-image check.
_MIDPOINT_TOL = 1e-10

_ORIGIN = Point(0.0, 0.0)
_ZERO = Angle(0)


class ClassOutOfRange(ValueError):
    """Diagonal class outside 1..floor((n-1)/2)."""


def max_class(n: int) -> int:
    """Largest legal diagonal class of an n-gon: floor((n-1)/2)."""
    return (n - 1) // 2


def _check_class(n: int, k: int) -> None:
    if not 1 <= k <= max_class(n):
        raise ClassOutOfRange(f"class {k} outside 1..{max_class(n)} for n={n}")


@dataclass(frozen=True)
class RegularNGon:
    """Convex regular n-gon; vertex j sits at angle phase + j * 2*pi/n."""

    n: int
    circumradius: float = 1.0
    phase: Angle = _ZERO
    center: Point = _ORIGIN

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if not self.circumradius > 0.0:
            raise ValueError(f"circumradius must be positive, got {self.circumradius}")

    @property
    def beta(self) -> Angle:
        """Central angle between consecutive vertices, 2*pi/n."""
        return Angle(2, self.n)


@dataclass(frozen=True)
class DiagonalRef:
    """Chord A_j A_{j+k}: start index j (mod n) and class k >= 1."""

    j: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ClassOutOfRange(f"diagonal class must be >= 1, got {self.k}")


def vertex(g: RegularNGon, j: int) -> Point:
    """Vertex j of the polygon (index reduced mod n)."""
    # phase + j * 2*pi/n as one exact fraction of pi; no Angle object needed
    # on this hot path.
    num = g.phase.num * g.n + 2 * (j % g.n) * g.phase.den
    den = g.phase.den * g.n
    return Point(
        g.center.x + g.circumradius * _cospi_ints(num, den),
        g.center.y + g.circumradius * _sinpi_ints(num, den),
    )


def diagonal(g: RegularNGon, d: DiagonalRef) -> Line:
    """Line carrying the chord A_j A_{j+k}."""
    _check_class(g.n, d.k)
    return line_through(vertex(g, d.j), vertex(g, d.j + d.k))


def phi(g: RegularNGon, k: int) -> Similarity:
    """Rotational similarity mapping the polygon onto its k-th derived n-gon.

    Centered at the polygon's center, with angle (k-1)*pi/n and ratio
    cos(k*pi/n) / cos(pi/n); k = 1 gives the identity.
    """
    _check_class(g.n, k)
    n = g.n
    return Similarity(
        center=g.center,
        angle=Angle(k - 1, n).radians,
        ratio=Angle(k, n).cos() / Angle(1, n).cos(),
    )


@dataclass(frozen=True)
class DerivedNGon:
    """The k-th derived n-gon: vertex j is the intersection of the
    consecutive class-k diagonals A_{j-1} A_{j-1+k} and A_j A_{j+k}.

    Vertices are stored explicitly because incidence scans read them O(n^2)
    times.  They all lie on a circle of radius
    circumradius * cos(k*pi/n) / cos(pi/n), and vertex j equals the image of
    the parent's vertex j under ``phi(parent, k)``.
    """

    parent: RegularNGon
    k: int
    vertices: Tuple[Point, ...] = field(repr=False)


def kth_ngon(g: RegularNGon, k: int) -> DerivedNGon:
    """Construct the k-th derived n-gon from pairwise diagonal intersections."""
    _check_class(g.n, k)
    n = g.n
    base = [vertex(g, j) for j in range(n)]
    diags = [line_through(base[j], base[(j + k) % n]) for j in range(n)]
    verts = tuple(intersect(diags[(j - 1) % n], diags[j]) for j in range(n))
    return DerivedNGon(parent=g, k=k, vertices=verts)


def midpoint_map_check(g: RegularNGon, k: int) -> bool:
    """Does phi(g, k) send the midpoint of side A_0 A_1 to the midpoint of
    the chord A_0 A_k?  True for every legal class; exposed as a cheap
    self-check of the similarity parameters."""
    _check_class(g.n, k)
    f = midpoint(vertex(g, 0), vertex(g, 1))
    target = midpoint(vertex(g, 0), vertex(g, k))
    return distance(apply_similarity(phi(g, k), f), target) <= _MIDPOINT_TOL


def common_line(g: RegularNGon, ell: int, m: int, j: int) -> Line:
    """The shared carrier of an m-th diagonal of the ell-th derived n-gon
    and an ell-th diagonal of the m-th derived n-gon.

    Computed by pushing the side A_j A_{j+1} through phi(ell) and then
    phi(m); since the two similarities commute, swapping ell and m yields
    the same line.
    """
    _check_class(g.n, ell)
    _check_class(g.n, m)
    psi = compose(phi(g, m), phi(g, ell))
    return line_through(
        apply_similarity(psi, vertex(g, j)),
        apply_similarity(psi, vertex(g, j + 1)),
    )
