"""Assembly of the Karteszi configuration K(n; ell, m).

From a regular n-gon A, the configuration takes as points the 3n vertices of
A, of its ell-th derived n-gon, and of its m-th derived n-gon; as lines it
takes the n ell-th diagonals of A, the n m-th diagonals of A, and the n
common lines joining the two derived polygons.  Each point then lies on at
least four lines and each line carries at least four points; for most
parameters exactly four, making a ((3n)_4) point-line configuration.

Incidence is never asserted from the construction: ``build`` runs a full
3n x 3n point-line distance sweep and records what the geometry actually
says, so parameter choices with extra incidences build fine and simply carry
diagnostic flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

import numpy as np

from .geom import (
    DEFAULT_TOL,
    Angle,
    GeometryError,
    Line,
    Point,
    TolerancePolicy,
    line_through,
)
from .ngon import RegularNGon, common_line, kth_ngon, max_class, vertex

__all__ = [
    "BadClassRange",
    "BadN",
    "CelestialSymbol",
    "ConfigFlags",
    "ConnectivityReport",
    "EqualClasses",
    "KConfig",
    "KParams",
    "LINE_ORBITS",
    "LineEntry",
    "ORBIT_LC",
    "ORBIT_LL",
    "ORBIT_LM",
    "ORBIT_P1",
    "ORBIT_PL",
    "ORBIT_PM",
    "POINT_ORBITS",
    "PointEntry",
    "build",
    "celestial_symbol",
    "connectivity",
    "designed_incidence",
    "point_line_distances",
    "validate_params",
]

# Orbit tags, in id order.  Points: base polygon, ell-th derived, m-th
# derived.  Lines: ell-diagonals, m-diagonals, common lines.
ORBIT_P1 = "P1"
ORBIT_PL = "Pl"
ORBIT_PM = "Pm"
ORBIT_LL = "Ll"
ORBIT_LM = "Lm"
ORBIT_LC = "Lc"
POINT_ORBITS = (ORBIT_P1, ORBIT_PL, ORBIT_PM)
LINE_ORBITS = (ORBIT_LL, ORBIT_LM, ORBIT_LC)


class BadN(ValueError):
    """n too small to admit two distinct classes >= 2."""


class BadClassRange(ValueError):
    """Diagonal class outside 2..floor((n-1)/2)."""


class EqualClasses(ValueError):
    """The two diagonal classes must differ."""


@dataclass(frozen=True)
class KParams:
    """Validated parameter triple (n; ell, m) with 2 <= ell < m <= floor((n-1)/2).

    The class pair is order-normalized on construction, so KParams(7, 3, 2)
    and KParams(7, 2, 3) are the same value.
    """

    n: int
    ell: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 7:
            raise BadN(f"need n >= 7, got {self.n}")
        lo, hi = sorted((self.ell, self.m))
        top = max_class(self.n)
        for k in (lo, hi):
            if not 2 <= k <= top:
                raise BadClassRange(f"class {k} outside 2..{top} for n={self.n}")
        if lo == hi:
            raise EqualClasses(f"classes must differ, got {lo} twice")
        object.__setattr__(self, "ell", lo)
        object.__setattr__(self, "m", hi)


def validate_params(n: int, ell: int, m: int) -> KParams:
    """Normalize and validate a parameter triple (raises on bad input)."""
    return KParams(n, ell, m)


@dataclass(frozen=True)
class PointEntry:
    id: int
    orbit: str
    index: int
    point: Point


@dataclass(frozen=True)
class LineEntry:
    id: int
    orbit: str
    index: int
    line: Line


@dataclass(frozen=True)
class ConfigFlags:
    """Diagnostics attached to a built configuration.

    ``extra_pairs`` are observed incidences beyond the designed 4-structure;
    ``min_margin`` is the smallest point-line distance among non-incident
    pairs, the quantity that guards the floating-point threshold.
    """

    extra_pairs: Tuple[Tuple[int, int], ...]
    min_margin: float

    @property
    def has_extras(self) -> bool:
        return bool(self.extra_pairs)


@dataclass(frozen=True)
class KConfig:
    """The built configuration: 3n tagged points, 3n tagged lines, and the
    incidence relation observed by the distance sweep."""

    params: KParams
    tolerance: TolerancePolicy
    points: Tuple[PointEntry, ...]
    lines: Tuple[LineEntry, ...]
    incidence: FrozenSet[Tuple[int, int]]
    flags: ConfigFlags

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def is_ambiguous(self) -> bool:
        """True when some non-incident distance falls inside the audit band."""
        return self.flags.min_margin <= self.tolerance.ambiguous_band

    @property
    def has_extras(self) -> bool:
        return self.flags.has_extras


def point_line_distances(points: Sequence[Point], lines: Sequence[Line]) -> np.ndarray:
    """|signed distance| matrix, shape (len(points), len(lines))."""
    px = np.fromiter((p.x for p in points), dtype=float, count=len(points))
    py = np.fromiter((p.y for p in points), dtype=float, count=len(points))
    a = np.fromiter((l.a for l in lines), dtype=float, count=len(lines))
    b = np.fromiter((l.b for l in lines), dtype=float, count=len(lines))
    c = np.fromiter((l.c for l in lines), dtype=float, count=len(lines))
    return np.abs(px[:, None] * a[None, :] + py[:, None] * b[None, :] + c[None, :])


def designed_incidence(params: KParams) -> FrozenSet[Tuple[int, int]]:
    """The 12n point-line incidences guaranteed by the construction.

    With points id'd P1_j = j, Pl_j = n + j, Pm_j = 2n + j and lines
    Ll_j = j, Lm_j = n + j, Lc_j = 2n + j:

      * Ll_j (chord A_j A_{j+ell}) carries P1_j, P1_{j+ell}, Pl_j, Pl_{j+1};
      * Lm_j (chord A_j A_{j+m})  carries P1_j, P1_{j+m}, Pm_j, Pm_{j+1};
      * Lc_j                      carries Pl_j, Pl_{j+m}, Pm_j, Pm_{j+ell}.
    """
    n, ell, m = params.n, params.ell, params.m
    pairs: Set[Tuple[int, int]] = set()
    for j in range(n):
        pairs.update(
            {
                (j, j),
                ((j + ell) % n, j),
                (n + j, j),
                (n + (j + 1) % n, j),
                (j, n + j),
                ((j + m) % n, n + j),
                (2 * n + j, n + j),
                (2 * n + (j + 1) % n, n + j),
                (n + j, 2 * n + j),
                (n + (j + m) % n, 2 * n + j),
                (2 * n + j, 2 * n + j),
                (2 * n + (j + ell) % n, 2 * n + j),
            }
        )
    return frozenset(pairs)


def build(
    params: KParams,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    circumradius: float = 1.0,
    phase: Angle = Angle(0),
    center: Point = Point(0.0, 0.0),
) -> KConfig:
    """Construct K(n; ell, m) and scan its incidence relation.

    Never fails on parameters with extra incidences; those build normally
    and come back with non-empty ``flags.extra_pairs``.
    """
    n, ell, m = params.n, params.ell, params.m
    g = RegularNGon(n, circumradius, phase, center)

    base = [vertex(g, j) for j in range(n)]
    derived_l = kth_ngon(g, ell).vertices
    derived_m = kth_ngon(g, m).vertices

    points: List[PointEntry] = []
    for orbit, verts in ((ORBIT_P1, base), (ORBIT_PL, derived_l), (ORBIT_PM, derived_m)):
        offset = len(points)
        points.extend(PointEntry(offset + j, orbit, j, p) for j, p in enumerate(verts))

    lines: List[LineEntry] = []
    for orbit, mk in (
        (ORBIT_LL, lambda j: line_through(base[j], base[(j + ell) % n])),
        (ORBIT_LM, lambda j: line_through(base[j], base[(j + m) % n])),
        (ORBIT_LC, lambda j: common_line(g, ell, m, j)),
    ):
        offset = len(lines)
        lines.extend(LineEntry(offset + j, orbit, j, mk(j)) for j in range(n))

    dist = point_line_distances([e.point for e in points], [e.line for e in lines])
    inc_mask = dist <= tol.eps_inc
    incidence = frozenset((int(p), int(l)) for p, l in np.argwhere(inc_mask))

    designed = designed_incidence(params)
    missing = designed - incidence
    if missing:
        raise GeometryError(
            f"construction lost {len(missing)} designed incidences for "
            f"K({n};{ell},{m}); first: {sorted(missing)[:3]}"
        )
    extras = tuple(sorted(incidence - designed))
    min_margin = float(dist[~inc_mask].min())

    return KConfig(
        params=params,
        tolerance=tol,
        points=tuple(points),
        lines=tuple(lines),
        incidence=incidence,
        flags=ConfigFlags(extra_pairs=extras, min_margin=min_margin),
    )


@dataclass(frozen=True)
class CelestialSymbol:
    """Celestial notation n#(p1,q1; p2,q2; p3,q3) for the configuration.

    K(n; ell, m) is the trivial 3-celestial configuration
    n#(1,ell; m,1; ell,m): the span multisets P = (p_i) and Q = (q_i) both
    equal {1, ell, m}, which forces the shift parameter t = (sum P - sum Q)/2
    to vanish.
    """

    n: int
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def p_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(p for p, _ in self.pairs))

    @property
    def q_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(q for _, q in self.pairs))

    @property
    def t(self) -> int:
        diff = sum(self.p_multiset) - sum(self.q_multiset)
        if diff % 2:
            raise ValueError(f"parameter sums differ by odd {diff}; no geometric realization")
        return diff // 2

    @property
    def is_trivial(self) -> bool:
        return self.p_multiset == self.q_multiset

    @property
    def connectivity_gcd(self) -> int:
        """gcd of all spans and n; 1 is the connectivity condition."""
        return math.gcd(self.n, *(v for pair in self.pairs for v in pair))

    def notation(self) -> str:
        inner = ";".join(f"{p},{q}" for p, q in self.pairs)
        return f"{self.n}#({inner})"

    def __str__(self) -> str:
        return self.notation()


def celestial_symbol(params: KParams) -> CelestialSymbol:
    """Celestial symbol of K(n; ell, m): n#(1,ell; m,1; ell,m)."""
    return CelestialSymbol(params.n, ((1, params.ell), (params.m, 1), (params.ell, params.m)))


@dataclass(frozen=True)
class ConnectivityReport:
    """Incidence-graph connectivity plus the gcd connectivity condition.

    Truthy exactly when the graph is connected; ``gcd`` is always 1 for
    Karteszi parameters because the span 1 appears in the symbol.
    """

    connected: bool
    gcd: int

    def __bool__(self) -> bool:
        return self.connected


def connectivity(config: KConfig) -> ConnectivityReport:
    """BFS connectivity of the bipartite incidence graph."""
    n_pts = len(config.points)
    n_lns = len(config.lines)
    total = n_pts + n_lns
    adj: Dict[int, List[int]] = {v: [] for v in range(total)}
    for p, l in config.incidence:
        adj[p].append(n_pts + l)
        adj[n_pts + l].append(p)

    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)

    sym = celestial_symbol(config.params)
    return ConnectivityReport(connected=(len(seen) == total), gcd=sym.connectivity_gcd)
