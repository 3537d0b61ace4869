"""Extra-incidence detection and classification.

Two independent routes decide whether K(n; ell, m) is a genuine ((3n)_4)
configuration:

* a geometric route: the full 3n x 3n incidence sweep (``scan``) and a
  brute-force search for triples of concurrent diagonals of the regular
  n-gon (``concurrent_triples``), and
* a closed-form route (``is_exceptional``): extra incidences occur exactly
  for two infinite families of parameters, at n = 6k and n = 12k + 6, plus
  finitely many sporadic pairs at n = 30 and n = 42.

``cross_validate`` runs both routes over every valid parameter triple up to
a bound and reports any disagreement, which is the package's main
correctness harness.

The underlying number theory is the classification by Poonen and Rubinstein
of rational solutions of the sine-product equation

    sin(pi*U) sin(pi*V) sin(pi*W) = sin(pi*X) sin(pi*Y) sin(pi*Z)

which holds for six arcs U..Z (summing to the full circle) exactly when the
three chords cut by those arcs meet in one point.  ``pr_equation`` evaluates
that criterion directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from .config import (
    KConfig,
    KParams,
    build,
    designed_incidence,
    point_line_distances,
    validate_params,
)
from .geom import DEFAULT_TOL, Point, TolerancePolicy, intersect, line_through, sinpi
from .ngon import RegularNGon, max_class, vertex

__all__ = [
    "ArcSumMismatch",
    "ConcurrencyTriple",
    "ConcurrencyWitness",
    "CrossValidation",
    "FamilyTag",
    "IncidenceReport",
    "MidpointCase",
    "PRArcs",
    "PrEquationResult",
    "SecondVertex",
    "VERDICT_AMBIGUOUS",
    "VERDICT_CLEAN",
    "VERDICT_EXTRA",
    "astral_obstruction",
    "concurrent_triples",
    "cross_validate",
    "exceptional_triples",
    "is_exceptional",
    "pr_equation",
    "scan",
    "second_vertex",
]

VERDICT_CLEAN = "clean"
VERDICT_EXTRA = "extra_incidences"
VERDICT_AMBIGUOUS = "ambiguous"

# Absolute equality band for the sine-product identity.  Legal sine products
# at the denominators used here stay many orders of magnitude above it.
PR_EQ_TOL = 1e-12


class ArcSumMismatch(ValueError):
    """The six arcs must partition the full circle exactly."""


class MidpointCase(ValueError):
    """The derived vertex is the chord's own midpoint; the mirror vertex
    coincides with it and no partner diagonal exists."""


# ---------------------------------------------------------------------------
# Geometric scan of a built configuration


@dataclass(frozen=True)
class IncidenceReport:
    """Full account of one 3n x 3n incidence sweep.

    ``extras`` lists observed incidences beyond the designed 4-structure.
    ``min_margin`` is the smallest distance among non-incident point-line
    pairs; the verdict is ``ambiguous`` whenever that margin dips into the
    separation-audit band, i.e. the tolerance cannot be trusted either way.
    """

    point_degrees: Tuple[int, ...]
    line_degrees: Tuple[int, ...]
    extras: Tuple[Tuple[int, int], ...]
    min_margin: float
    verdict: str


def scan(config: KConfig, tol: Optional[TolerancePolicy] = None) -> IncidenceReport:
    """Re-sweep all point-line distances of a built configuration."""
    tol = tol or config.tolerance
    dist = point_line_distances(
        [e.point for e in config.points], [e.line for e in config.lines]
    )
    inc = dist <= tol.eps_inc
    point_degrees = tuple(int(d) for d in inc.sum(axis=1))
    line_degrees = tuple(int(d) for d in inc.sum(axis=0))
    observed = {(int(p), int(l)) for p, l in np.argwhere(inc)}
    extras = tuple(sorted(observed - designed_incidence(config.params)))
    min_margin = float(dist[~inc].min())

    if min_margin <= tol.ambiguous_band:
        verdict = VERDICT_AMBIGUOUS
    elif extras:
        verdict = VERDICT_EXTRA
    else:
        verdict = VERDICT_CLEAN
    return IncidenceReport(point_degrees, line_degrees, extras, min_margin, verdict)


# ---------------------------------------------------------------------------
# Sine-product concurrency criterion


@dataclass(frozen=True)
class PRArcs:
    """Six positive arcs (fractions of the full circle) cut by six points
    on a circle, in the circular order X, V, Y, W, Z, U.  The chords joining
    opposite pairs of those points meet in one point iff the sine products
    over {U, V, W} and {X, Y, Z} agree."""

    u: Fraction
    v: Fraction
    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self) -> None:
        for name in ("u", "v", "w", "x", "y", "z"):
            val = Fraction(getattr(self, name))
            if val <= 0:
                raise ValueError(f"arc {name} must be positive, got {val}")
            object.__setattr__(self, name, val)

    @property
    def arcs(self) -> Tuple[Fraction, ...]:
        return (self.u, self.v, self.w, self.x, self.y, self.z)

    @property
    def total(self) -> Fraction:
        return sum(self.arcs, Fraction(0))

    @property
    def n(self) -> int:
        """Smallest n such that every arc is a multiple of 1/n."""
        out = 1
        for a in self.arcs:
            out = out * a.denominator // math.gcd(out, a.denominator)
        return out


class PrEquationResult(Tuple[float, float, bool]):
    """(lhs, rhs, equal) of the sine-product criterion."""

    __slots__ = ()

    def __new__(cls, lhs: float, rhs: float, equal: bool) -> "PrEquationResult":
        return super().__new__(cls, (lhs, rhs, equal))

    @property
    def lhs(self) -> float:
        return self[0]

    @property
    def rhs(self) -> float:
        return self[1]

    @property
    def equal(self) -> bool:
        return self[2]


def pr_equation(arcs: PRArcs) -> PrEquationResult:
    """Evaluate sin(pi*U) sin(pi*V) sin(pi*W) against sin(pi*X) sin(pi*Y) sin(pi*Z).

    Raises ArcSumMismatch unless the six arcs sum exactly to 1.
    """
    if arcs.total != 1:
        raise ArcSumMismatch(f"arcs sum to {arcs.total}, need exactly 1")
    lhs = sinpi(arcs.u) * sinpi(arcs.v) * sinpi(arcs.w)
    rhs = sinpi(arcs.x) * sinpi(arcs.y) * sinpi(arcs.z)
    return PrEquationResult(lhs, rhs, abs(lhs - rhs) <= PR_EQ_TOL)


# ---------------------------------------------------------------------------
# Brute-force oracle: concurrent diagonal triples of the regular n-gon


@dataclass(frozen=True)
class ConcurrencyWitness:
    """Location of one concurrence: vertex ``i`` of the k-th derived n-gon
    (taken as the crossing of the class-k diagonals starting at i and i+1)
    lies on the class-r diagonal starting at ``diag_j``."""

    k: int
    i: int
    diag_j: int
    point: Point


@dataclass(frozen=True)
class ConcurrencyTriple:
    """Classes (r, l1, l2) of three diagonals through a common off-center
    point, normalized so l1 <= l2.  Witness data is carried along but does
    not take part in equality."""

    r: int
    l1: int
    l2: int
    witness: ConcurrencyWitness = field(compare=False)


def _circ_class(delta: int, n: int) -> int:
    d = delta % n
    return min(d, n - d)


def concurrent_triples(n: int, tol: TolerancePolicy = DEFAULT_TOL) -> Set[ConcurrencyTriple]:
    """All diagonal-class triples of the regular n-gon that meet off-center.

    Brute force over the reduction that any extra concurrence involves two
    consecutive diagonals of one class (whose crossing is a derived-polygon
    vertex) plus one further diagonal: for every class k and index i, the
    crossing B_i of the class-k diagonals at i and i+1 is tested against
    every diagonal of every class r.  The two defining diagonals are
    skipped, as are diagonals that merely pass through B_i because it is a
    polygon vertex (k = 1 only); diameters never appear since class n/2 is
    out of range.  Triples are deduplicated by (r, min, max) with the first
    witness in (k, i, r, j) iteration order retained.
    """
    if n < 7:
        raise ValueError(f"need n >= 7, got {n}")
    g = RegularNGon(n)
    h = max_class(n)
    eps = tol.eps_inc

    base = [vertex(g, j) for j in range(n)]
    lines_by_class = [
        [line_through(base[j], base[(j + r) % n]) for j in range(n)]
        for r in range(1, h + 1)
    ]
    flat = [ln for per_class in lines_by_class for ln in per_class]
    a = np.array([ln.a for ln in flat])
    b = np.array([ln.b for ln in flat])
    c = np.array([ln.c for ln in flat])

    found: Dict[Tuple[int, int, int], ConcurrencyTriple] = {}
    for k in range(1, h + 1):
        kl = lines_by_class[k - 1]
        bpts = [intersect(kl[i], kl[(i + 1) % n]) for i in range(n)]
        bx = np.array([p.x for p in bpts])
        by = np.array([p.y for p in bpts])
        dist = np.abs(bx[:, None] * a[None, :] + by[:, None] * b[None, :] + c[None, :])
        for i, col in np.argwhere(dist <= eps):
            i, col = int(i), int(col)
            r = col // n + 1
            j = col % n
            if r == k and (j == i or j == (i + 1) % n):
                continue
            if k == 1 and ((j - i - 1) % n == 0 or (j + r - i - 1) % n == 0):
                # B_i is the polygon vertex A_{i+1}; diagonals ending there
                # are designed incidences, not concurrences.
                continue
            line = lines_by_class[r - 1][j]
            partners = [
                i2
                for i2 in range(n)
                if i2 != i and abs(line.signed_distance(bpts[i2])) <= eps
            ]
            classes = (
                [_circ_class(i2 - i, n) for i2 in partners] if partners else [k]
            )
            for cls in classes:
                if not 1 <= cls <= h:
                    continue
                key = (r, min(k, cls), max(k, cls))
                if key not in found:
                    found[key] = ConcurrencyTriple(
                        r=key[0],
                        l1=key[1],
                        l2=key[2],
                        witness=ConcurrencyWitness(k=k, i=i, diag_j=j, point=bpts[i]),
                    )
    return set(found.values())


@dataclass(frozen=True)
class SecondVertex:
    index: int
    partner_class: int


def second_vertex(n: int, r: int, k: int, i: int) -> SecondVertex:
    """Mirror vertex implied by one incidence on the chord A_0 A_r.

    If vertex B_i of the k-th derived n-gon lies on the class-r diagonal
    A_0 A_r and is not its midpoint, the reflection across the chord's
    perpendicular bisector places B_{r-i-k-1} on the chord too, and the
    derived-polygon diagonal joining the two has class 2i - r + k + 1.  Both
    formulas are reduced mod n, with the class folded into 1..n/2, so the
    result is meaningful for any representative index i.  The caller is
    responsible for the incidence itself holding.
    """
    if not 1 <= r <= max_class(n):
        raise ValueError(f"class r={r} outside 1..{max_class(n)} for n={n}")
    j2 = (r - i - k - 1) % n
    if j2 == i % n:
        raise MidpointCase(
            f"vertex {i} of the class-{k} derived polygon is the midpoint of A_0 A_{r}"
        )
    return SecondVertex(index=j2, partner_class=_circ_class(2 * i - r + k + 1, n))


# ---------------------------------------------------------------------------
# Closed-form classifier


@dataclass(frozen=True)
class FamilyTag:
    """Which exceptional family a parameter pair belongs to.

    ``kind`` is one of F1 (n = 6k, k >= 2), F2 (n = 12k + 6, k >= 1), or the
    sporadic labels S30a/S30b/S30c/S42.  ``pair_role`` records which two of
    the underlying concurrency triple (r, l1, l2) the pair {ell, m} matches:
    "l1l2", "l1r", or "l2r".
    """

    kind: str
    k: Optional[int]
    pair_role: str
    triple: Tuple[int, int, int]

    def __post_init__(self) -> None:
        if self.kind == "F1" and (self.k is None or self.k < 2):
            raise ValueError(f"family F1 needs k >= 2, got {self.k}")
        if self.kind == "F2" and (self.k is None or self.k < 1):
            raise ValueError(f"family F2 needs k >= 1, got {self.k}")

    @property
    def label(self) -> str:
        if self.k is not None:
            return f"{self.kind}(k={self.k})"
        return self.kind


def exceptional_triples(n: int) -> Tuple[Tuple[str, Optional[int], Tuple[int, int, int]], ...]:
    """Closed-form list of (label, k, (r, l1, l2)) triples active at n.

    Two infinite families plus four sporadic triples:

      * n = 6k  (k >= 2):   (3k-1, 2k, 3k-2) up to ordering of the last two;
      * n = 12k+6 (k >= 1): (4k+2, 3k+1, 3k+2);
      * n = 30: (7, 4, 6), (11, 6, 10), (13, 8, 12);
      * n = 42: (13, 6, 12).
    """
    out: List[Tuple[str, Optional[int], Tuple[int, int, int]]] = []
    if n % 6 == 0 and n >= 12:
        k = n // 6
        lo, hi = sorted((2 * k, 3 * k - 2))
        out.append(("F1", k, (3 * k - 1, lo, hi)))
    if n % 12 == 6 and n >= 18:
        k = (n - 6) // 12
        out.append(("F2", k, (4 * k + 2, 3 * k + 1, 3 * k + 2)))
    if n == 30:
        out.extend(
            [
                ("S30a", None, (7, 4, 6)),
                ("S30b", None, (11, 6, 10)),
                ("S30c", None, (13, 8, 12)),
            ]
        )
    if n == 42:
        out.append(("S42", None, (13, 6, 12)))
    return tuple(out)


def is_exceptional(params: KParams) -> Optional[FamilyTag]:
    """Closed-form verdict: the family tag of {ell, m}, or None when
    K(n; ell, m) is a genuine ((3n)_4) configuration.

    A pair is exceptional exactly when it matches two of the three classes
    of some concurrency triple active at n.  Degenerate pairs produced by
    the family formulas (equal classes, e.g. {4, 4} at n = 12) are skipped;
    they are not valid parameter pairs.
    """
    pair = frozenset((params.ell, params.m))
    for label, k, (r, l1, l2) in exceptional_triples(params.n):
        for cand, role in (
            (frozenset((l1, l2)), "l1l2"),
            (frozenset((l1, r)), "l1r"),
            (frozenset((l2, r)), "l2r"),
        ):
            if len(cand) < 2:
                continue
            if cand == pair:
                return FamilyTag(kind=label, k=k, pair_role=role, triple=(r, l1, l2))
    return None


def astral_obstruction(
    params: KParams, triples: Optional[Set[ConcurrencyTriple]] = None
) -> Optional[int]:
    """Witness class x for which the classes {ell, m, x} support an astral
    (2-celestial) concurrence, or None.

    Searches the brute-force triple oracle for a triple whose class multiset
    contains both ell and m; the leftover class is the witness.  Such an x
    exists exactly when the parameters are exceptional.
    """
    if triples is None:
        triples = concurrent_triples(params.n)
    for t in sorted(triples, key=lambda t: (t.r, t.l1, t.l2)):
        classes = [t.r, t.l1, t.l2]
        for v in (params.ell, params.m):
            if v in classes:
                classes.remove(v)
            else:
                break
        else:
            return classes[0]
    return None


# ---------------------------------------------------------------------------
# Oracle vs classifier sweep


@dataclass(frozen=True)
class CrossValidation:
    """Outcome of the scan-vs-classifier sweep over all valid (n, ell, m).

    ``exceptional`` lists parameter triples whose geometric scan found extra
    incidences; ``disagreements`` lists triples where scan and closed form
    differ; ``ambiguous`` lists triples whose scan could not decide.  All in
    lexicographic (n, ell, m) order.  ``min_clean_margin`` is the smallest
    separation margin seen among clean scans, the sweep-level health number
    for the incidence threshold.
    """

    n_max: int
    cases: int
    exceptional: Tuple[Tuple[int, int, int], ...]
    disagreements: Tuple[Tuple[int, int, int], ...]
    ambiguous: Tuple[Tuple[int, int, int], ...]
    min_clean_margin: float

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.ambiguous


def cross_validate(n_max: int, tol: TolerancePolicy = DEFAULT_TOL) -> CrossValidation:
    """Compare the geometric scan against the closed-form classifier for
    every valid parameter triple with 7 <= n <= n_max."""
    if n_max < 7:
        raise ValueError(f"need n_max >= 7, got {n_max}")
    cases = 0
    exceptional: List[Tuple[int, int, int]] = []
    disagreements: List[Tuple[int, int, int]] = []
    ambiguous: List[Tuple[int, int, int]] = []
    min_clean_margin = float("inf")
    for n in range(7, n_max + 1):
        top = max_class(n)
        for ell in range(2, top):
            for m in range(ell + 1, top + 1):
                params = validate_params(n, ell, m)
                report = scan(build(params, tol))
                tag = is_exceptional(params)
                cases += 1
                case = (n, ell, m)
                if report.verdict == VERDICT_AMBIGUOUS:
                    ambiguous.append(case)
                if report.verdict == VERDICT_EXTRA:
                    exceptional.append(case)
                elif report.verdict == VERDICT_CLEAN:
                    min_clean_margin = min(min_clean_margin, report.min_margin)
                if (report.verdict == VERDICT_EXTRA) != (tag is not None):
                    disagreements.append(case)
    return CrossValidation(
        n_max=n_max,
        cases=cases,
        exceptional=tuple(exceptional),
        disagreements=tuple(disagreements),
        ambiguous=tuple(ambiguous),
        min_clean_margin=min_clean_margin,
    )
