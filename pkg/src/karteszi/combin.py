"""Abstract incidence structures, Levi graphs, and canonical forms.

Geometry is forgotten here: an :class:`IncidenceStructure` is just point and
line counts plus a set of incidence flags.  On top of that sit the
configuration axioms (constant degree k on both sides, no two points sharing
two lines), the bipartite Levi graph, and a canonical labeling that makes
isomorphism testing a byte comparison.

Canonicalization is color refinement seeded by (side, degree), with
individualization backtracking on ties.  Discovered automorphisms prune
branches that can only repeat an already-explored subtree, which keeps the
search tree close to one leaf per automorphism orbit; the structures handled
here have at most a few hundred vertices, so no external canonical-labeling
dependency is needed.  Certificates are versioned byte strings (format
documented at :func:`canonical_form`) and stable across releases.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .config import KConfig

__all__ = [
    "CanonicalForm",
    "IncidenceStructure",
    "LeviGraph",
    "RefuseAmbiguous",
    "are_isomorphic",
    "canonical_form",
    "connected",
    "dual",
    "from_geometry",
    "girth",
    "is_configuration",
    "is_isomorphism",
    "levi",
]

CERTIFICATE_VERSION = 1


class RefuseAmbiguous(ValueError):
    """The geometric scan could not decide incidence; no reliable
    combinatorial structure can be extracted."""


@dataclass(frozen=True)
class IncidenceStructure:
    """Points 0..num_points-1, lines 0..num_lines-1, and incidence flags."""

    num_points: int
    num_lines: int
    flags: FrozenSet[Tuple[int, int]]

    def __post_init__(self) -> None:
        if self.num_points < 0 or self.num_lines < 0:
            raise ValueError("negative element counts")
        object.__setattr__(self, "flags", frozenset(self.flags))
        for p, l in self.flags:
            if not (0 <= p < self.num_points and 0 <= l < self.num_lines):
                raise ValueError(f"flag ({p}, {l}) out of range")

    def point_degrees(self) -> List[int]:
        deg = [0] * self.num_points
        for p, _ in self.flags:
            deg[p] += 1
        return deg

    def line_degrees(self) -> List[int]:
        deg = [0] * self.num_lines
        for _, l in self.flags:
            deg[l] += 1
        return deg


def from_geometry(config: KConfig) -> IncidenceStructure:
    """Forget coordinates, keep the observed incidence relation."""
    if config.is_ambiguous:
        raise RefuseAmbiguous(
            f"min margin {config.flags.min_margin:.3e} is inside the audit band"
        )
    return IncidenceStructure(
        num_points=len(config.points),
        num_lines=len(config.lines),
        flags=frozenset(config.incidence),
    )


def is_configuration(s: IncidenceStructure, k: int) -> bool:
    """Is s an (n_k) configuration: every degree k, and no two points on
    two common lines?"""
    if any(d != k for d in s.point_degrees()):
        return False
    if any(d != k for d in s.line_degrees()):
        return False
    lines_of: Dict[int, List[int]] = {p: [] for p in range(s.num_points)}
    for p, l in s.flags:
        lines_of[p].append(l)
    seen_pairs = set()
    for p in range(s.num_points):
        ls = lines_of[p]
        for a in range(len(ls)):
            for b in range(a + 1, len(ls)):
                key = (min(ls[a], ls[b]), max(ls[a], ls[b]))
                if key in seen_pairs:
                    return False
                seen_pairs.add(key)
    return True


@dataclass(frozen=True)
class LeviGraph:
    """Bipartite incidence graph: vertices 0..num_points-1 are points,
    num_points..num_points+num_lines-1 are lines."""

    num_points: int
    num_lines: int
    adjacency: Tuple[Tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return self.num_points + self.num_lines

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2


def levi(s: IncidenceStructure) -> LeviGraph:
    adj: List[List[int]] = [[] for _ in range(s.num_points + s.num_lines)]
    for p, l in sorted(s.flags):
        adj[p].append(s.num_points + l)
        adj[s.num_points + l].append(p)
    return LeviGraph(s.num_points, s.num_lines, tuple(tuple(x) for x in adj))


def connected(g: LeviGraph) -> bool:
    """Standard connectivity; the empty graph counts as connected."""
    if g.num_vertices == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.num_vertices


def girth(g: LeviGraph) -> float:
    """Length of the shortest cycle, or inf for a forest."""
    best = float("inf")
    for root in range(g.num_vertices):
        depth = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.adjacency[v]:
                    if w not in depth:
                        depth[w] = depth[v] + 1
                        parent[w] = v
                        nxt.append(w)
                    elif w != parent[v]:
                        cycle = depth[v] + depth[w] + 1
                        if cycle < best:
                            best = cycle
            if 2 * (depth[frontier[0]] + 1) > best:
                break
            frontier = nxt
    return best


# ---------------------------------------------------------------------------
# Canonical labeling


@dataclass(frozen=True)
class CanonicalForm:
    """Certificate plus the relabeling that achieves it.

    ``point_perm[p]`` / ``line_perm[l]`` give the canonical labels;
    re-serializing the relabeled flag set reproduces ``certificate``
    byte-for-byte.
    """

    certificate: bytes
    point_perm: Tuple[int, ...]
    line_perm: Tuple[int, ...]


def _serialize(num_points: int, num_lines: int, flags: Sequence[Tuple[int, int]]) -> bytes:
    head = struct.pack("<BII", CERTIFICATE_VERSION, num_points, num_lines)
    body = b"".join(struct.pack("<II", p, l) for p, l in sorted(flags))
    return head + body


def _refine(colors: List[int], adj: Sequence[Tuple[int, ...]]) -> List[int]:
    """Color refinement to a stable partition.

    New colors are assigned by sorting (old color, sorted neighbor colors)
    signatures, so color ids depend only on the structure and the incoming
    coloring, never on vertex numbering.
    """
    ncol = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v])))
            for v in range(len(colors))
        ]
        order = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        colors = [order[sig] for sig in sigs]
        if len(order) == ncol:
            return colors
        ncol = len(order)


class _Canonicalizer:
    def __init__(self, s: IncidenceStructure):
        self.P = s.num_points
        self.L = s.num_lines
        self.V = self.P + self.L
        g = levi(s)
        self.adj = g.adjacency
        self.flags = s.flags
        self.best_cert: Optional[bytes] = None
        self.best_labels: Optional[List[int]] = None
        # Automorphism generators discovered from equal-certificate leaves,
        # as vertex permutation lists.
        self.generators: List[List[int]] = []

    # -- leaf handling ------------------------------------------------------

    def _leaf(self, colors: List[int]) -> None:
        labels = [0] * self.V
        for rank, v in enumerate(sorted(range(self.V), key=colors.__getitem__)):
            labels[v] = rank
        # Sides never mix (side is part of the seed color), so point ranks
        # occupy one contiguous block and line ranks the other; renumber
        # each side from 0.
        point_ranks = sorted(range(self.P), key=labels.__getitem__)
        line_ranks = sorted(range(self.P, self.V), key=labels.__getitem__)
        plab = {v: i for i, v in enumerate(point_ranks)}
        llab = {v: i for i, v in enumerate(line_ranks)}
        relabeled = [(plab[p], llab[self.P + l]) for p, l in self.flags]
        cert = _serialize(self.P, self.L, relabeled)

        if self.best_cert is None or cert < self.best_cert:
            self.best_cert = cert
            self.best_labels = [0] * self.V
            for v in range(self.P):
                self.best_labels[v] = plab[v]
            for v in range(self.P, self.V):
                self.best_labels[v] = llab[v]
        elif cert == self.best_cert:
            self._record_automorphism(plab, llab)

    def _record_automorphism(self, plab: Dict[int, int], llab: Dict[int, int]) -> None:
        assert self.best_labels is not None
        inv_best = [0] * self.V
        for v in range(self.P):
            inv_best[self.best_labels[v]] = v
        for v in range(self.P, self.V):
            inv_best[self.P + self.best_labels[v]] = v
        gamma = [0] * self.V
        for v in range(self.P):
            gamma[v] = inv_best[plab[v]]
        for v in range(self.P, self.V):
            gamma[v] = inv_best[self.P + llab[v]]
        if all(gamma[v] == v for v in range(self.V)):
            return
        # Defensive check: only trust maps that truly preserve adjacency.
        for v in range(self.V):
            if sorted(gamma[w] for w in self.adj[v]) != sorted(self.adj[gamma[v]]):
                return
        self.generators.append(gamma)

    # -- search -------------------------------------------------------------

    def _orbit_partition(self, fixed: List[int]) -> List[int]:
        """Fully-compressed union-find table of vertex orbits under the
        discovered automorphisms that fix ``fixed`` pointwise."""
        parent = list(range(self.V))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            if all(g[u] == u for u in fixed):
                for u in range(self.V):
                    ru, rg = find(u), find(g[u])
                    if ru != rg:
                        parent[ru] = rg
        return [find(u) for u in range(self.V)]

    def _target_cell(self, colors: List[int]) -> Optional[List[int]]:
        cells: Dict[int, List[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        nontrivial = [(len(vs), c, vs) for c, vs in cells.items() if len(vs) > 1]
        if not nontrivial:
            return None
        _, _, cell = min(nontrivial, key=lambda t: (t[0], t[1]))
        return cell

    def _search(self, colors: List[int], fixed: List[int]) -> None:
        cell = self._target_cell(colors)
        if cell is None:
            self._leaf(colors)
            return
        fresh = max(colors) + 1
        done: List[int] = []
        orbit: Optional[List[int]] = None
        n_gens = -1
        for v in cell:
            if done:
                if orbit is None or n_gens != len(self.generators):
                    n_gens = len(self.generators)
                    orbit = self._orbit_partition(fixed)
                if any(orbit[u] == orbit[v] for u in done):
                    # An automorphism fixing the prefix maps an explored
                    # sibling's subtree onto v's; nothing new down there.
                    continue
            child = list(colors)
            child[v] = fresh
            self._search(_refine(child, self.adj), fixed + [v])
            done.append(v)

    def run(self) -> CanonicalForm:
        if self.V == 0:
            return CanonicalForm(_serialize(0, 0, []), (), ())
        deg = [len(self.adj[v]) for v in range(self.V)]
        seed_keys = sorted({(v >= self.P, deg[v]) for v in range(self.V)})
        seed_order = {key: i for i, key in enumerate(seed_keys)}
        colors = [seed_order[(v >= self.P, deg[v])] for v in range(self.V)]
        self._search(_refine(colors, self.adj), [])
        assert self.best_cert is not None and self.best_labels is not None
        return CanonicalForm(
            certificate=self.best_cert,
            point_perm=tuple(self.best_labels[: self.P]),
            line_perm=tuple(self.best_labels[self.P :]),
        )


def canonical_form(s: IncidenceStructure) -> CanonicalForm:
    """Relabeling-invariant certificate of an incidence structure.

    Byte layout: one version byte, then point and line counts as little-
    endian uint32, then the relabeled flag pairs in lexicographic order,
    each as two little-endian uint32.  Isomorphic structures produce
    identical certificates; the returned permutations map original labels
    to canonical ones.
    """
    return _Canonicalizer(s).run()


def is_isomorphism(
    s1: IncidenceStructure,
    s2: IncidenceStructure,
    point_map: Sequence[int],
    line_map: Sequence[int],
) -> bool:
    """Check that the given label maps carry the flags of s1 exactly onto
    the flags of s2."""
    if s1.num_points != s2.num_points or s1.num_lines != s2.num_lines:
        return False
    if sorted(point_map) != list(range(s1.num_points)):
        return False
    if sorted(line_map) != list(range(s1.num_lines)):
        return False
    mapped = {(point_map[p], line_map[l]) for p, l in s1.flags}
    return mapped == set(s2.flags)


def are_isomorphic(
    s1: IncidenceStructure, s2: IncidenceStructure
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Explicit isomorphism (point map, line map) from s1 to s2, or None.

    Certificates decide; when they match, the relabelings are composed into
    a concrete bijection and verified flag-by-flag before being returned.
    """
    cf1 = canonical_form(s1)
    cf2 = canonical_form(s2)
    if cf1.certificate != cf2.certificate:
        return None
    inv2_p = [0] * s2.num_points
    for orig, canon in enumerate(cf2.point_perm):
        inv2_p[canon] = orig
    inv2_l = [0] * s2.num_lines
    for orig, canon in enumerate(cf2.line_perm):
        inv2_l[canon] = orig
    point_map = tuple(inv2_p[cf1.point_perm[p]] for p in range(s1.num_points))
    line_map = tuple(inv2_l[cf1.line_perm[l]] for l in range(s1.num_lines))
    if not is_isomorphism(s1, s2, point_map, line_map):
        return None
    return point_map, line_map


def dual(s: IncidenceStructure) -> IncidenceStructure:
    """Transpose: points become lines and vice versa."""
    return IncidenceStructure(
        num_points=s.num_lines,
        num_lines=s.num_points,
        flags=frozenset((l, p) for p, l in s.flags),
    )
