import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from karteszi.combin import (
    CERTIFICATE_VERSION,
    IncidenceStructure,
    RefuseAmbiguous,
    _serialize,
    are_isomorphic,
    canonical_form,
    connected,
    dual,
    from_geometry,
    girth,
    is_configuration,
    is_isomorphism,
    levi,
)
from karteszi.config import build, validate_params
from karteszi.geom import TolerancePolicy

TRIANGLE = IncidenceStructure(3, 3, frozenset({(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)}))
PATH = IncidenceStructure(3, 2, frozenset({(0, 0), (1, 0), (1, 1), (2, 1)}))


def relabeled(s, seed):
    rng = random.Random(seed)
    pp = list(range(s.num_points))
    lp = list(range(s.num_lines))
    rng.shuffle(pp)
    rng.shuffle(lp)
    return (
        IncidenceStructure(
            s.num_points, s.num_lines, frozenset((pp[p], lp[l]) for p, l in s.flags)
        ),
        pp,
        lp,
    )


# ---------------------------------------------------------------------------
# structure extraction


def test_from_geometry_k723(built):
    s = from_geometry(built(7, 2, 3))
    assert (s.num_points, s.num_lines, len(s.flags)) == (21, 21, 84)


def test_from_geometry_k1335(built):
    s = from_geometry(built(13, 3, 5))
    assert (s.num_points, s.num_lines, len(s.flags)) == (39, 39, 156)


def test_from_geometry_k1245(built):
    s = from_geometry(built(12, 4, 5))
    assert (s.num_points, s.num_lines) == (36, 36)
    assert len(s.flags) > 144


def test_from_geometry_refuses_ambiguous():
    coarse = TolerancePolicy(eps_inc=1e-3, sep_factor=100.0)
    cfg = build(validate_params(7, 2, 3), coarse)
    with pytest.raises(RefuseAmbiguous):
        from_geometry(cfg)


def test_incidence_structure_validates_ranges():
    with pytest.raises(ValueError):
        IncidenceStructure(2, 2, frozenset({(2, 0)}))


# ---------------------------------------------------------------------------
# configuration axioms


def test_is_configuration(built):
    assert is_configuration(from_geometry(built(7, 2, 3)), 4)
    assert not is_configuration(from_geometry(built(12, 4, 5)), 4)
    assert is_configuration(TRIANGLE, 2)
    assert not is_configuration(TRIANGLE, 3)


def test_double_flagged_pair_is_not_linear():
    # two points sharing two lines: degrees are constant but linearity fails
    s = IncidenceStructure(
        2, 2, frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    )
    assert not is_configuration(s, 2)


# ---------------------------------------------------------------------------
# Levi graphs


def test_levi_triangle_is_hexagon():
    g = levi(TRIANGLE)
    assert g.num_vertices == 6
    assert g.num_edges == 6
    assert all(len(nbrs) == 2 for nbrs in g.adjacency)
    assert connected(g)
    assert girth(g) == 6


def test_levi_k723(built):
    g = levi(from_geometry(built(7, 2, 3)))
    assert g.num_vertices == 42
    assert g.num_edges == 84
    assert all(len(nbrs) == 4 for nbrs in g.adjacency)
    assert connected(g)
    assert girth(g) >= 6


def test_levi_empty():
    g = levi(IncidenceStructure(0, 0, frozenset()))
    assert g.num_vertices == 0
    assert connected(g)


def test_connected_examples():
    two_triangles = IncidenceStructure(
        6,
        6,
        frozenset(
            {(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2),
             (3, 3), (4, 3), (4, 4), (5, 4), (5, 5), (3, 5)}
        ),
    )
    assert not connected(levi(two_triangles))
    assert connected(levi(IncidenceStructure(1, 0, frozenset())))


# ---------------------------------------------------------------------------
# canonical forms


def test_certificate_version_prefix():
    cf = canonical_form(TRIANGLE)
    assert cf.certificate[0] == CERTIFICATE_VERSION


def test_canonical_form_invariant_under_relabeling(built):
    s = from_geometry(built(7, 2, 3))
    ref = canonical_form(s).certificate
    for seed in range(8):
        s2, _, _ = relabeled(s, seed)
        assert canonical_form(s2).certificate == ref


def test_canonical_relabeling_reproduces_certificate(built):
    s = from_geometry(built(9, 2, 4))
    cf = canonical_form(s)
    relabeled_flags = [(cf.point_perm[p], cf.line_perm[l]) for p, l in s.flags]
    assert _serialize(s.num_points, s.num_lines, relabeled_flags) == cf.certificate


def test_distinct_structures_distinct_certificates(built):
    a = canonical_form(from_geometry(built(7, 2, 3))).certificate
    b = canonical_form(from_geometry(built(13, 3, 5))).certificate
    assert a != b
    assert canonical_form(TRIANGLE).certificate != canonical_form(PATH).certificate


def test_k13_pairs_not_isomorphic(built):
    # computed verdict, frozen: the two 13-gon configurations differ
    a = from_geometry(built(13, 3, 4))
    b = from_geometry(built(13, 3, 5))
    assert canonical_form(a).certificate != canonical_form(b).certificate
    assert are_isomorphic(a, b) is None


# ---------------------------------------------------------------------------
# isomorphism


def test_are_isomorphic_relabeled_self(built):
    s = from_geometry(built(7, 2, 3))
    s2, _, _ = relabeled(s, 99)
    mapping = are_isomorphic(s, s2)
    assert mapping is not None
    assert is_isomorphism(s, s2, *mapping)


def test_are_isomorphic_size_mismatch(built):
    assert are_isomorphic(from_geometry(built(7, 2, 3)), from_geometry(built(13, 3, 5))) is None


def test_are_isomorphic_reflexive_and_symmetric(built):
    for args in ((7, 2, 3), (9, 2, 4), (11, 2, 5)):
        s = from_geometry(built(*args))
        assert are_isomorphic(s, s) is not None
        s2, _, _ = relabeled(s, 7)
        forward = are_isomorphic(s, s2)
        backward = are_isomorphic(s2, s)
        assert forward is not None and backward is not None
        assert is_isomorphism(s2, s, *backward)


def test_rotation_automorphism_accepted(built):
    cfg = built(10, 2, 4)
    n = cfg.n
    s = from_geometry(cfg)

    def shift(vid):
        orbit, j = divmod(vid, n)
        return orbit * n + (j + 1) % n

    point_map = [shift(p) for p in range(s.num_points)]
    line_map = [shift(l) for l in range(s.num_lines)]
    assert is_isomorphism(s, s, point_map, line_map)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_triangle_certificate_invariance(seed):
    s2, _, _ = relabeled(TRIANGLE, seed)
    assert canonical_form(s2).certificate == canonical_form(TRIANGLE).certificate


# ---------------------------------------------------------------------------
# duality


def test_clean_configurations_are_4_configurations(built):
    # every clean K(n;ell,m) is a ((3n)_4) with a connected 4-regular
    # bipartite Levi graph of girth >= 6
    from karteszi.analyze import is_exceptional
    from karteszi.ngon import max_class

    cases = [
        (n, ell, m)
        for n in range(7, 25)
        for ell in range(2, max_class(n))
        for m in range(ell + 1, max_class(n) + 1)
    ] + [(33, 5, 11), (40, 9, 17)]
    for n, ell, m in cases:
        if is_exceptional(validate_params(n, ell, m)) is not None:
            continue
        s = from_geometry(built(n, ell, m))
        assert is_configuration(s, 4), (n, ell, m)
        g = levi(s)
        assert connected(g)
        assert all(len(nbrs) == 4 for nbrs in g.adjacency)
        # bipartite by sides: no point-point or line-line edges
        assert all(
            (v < g.num_points) != (w < g.num_points)
            for v in range(g.num_vertices)
            for w in g.adjacency[v]
        )
        assert girth(g) >= 6


def test_dual_transposes(built):
    s = from_geometry(built(8, 2, 3))
    d = dual(s)
    assert (d.num_points, d.num_lines) == (s.num_lines, s.num_points)
    assert dual(d) == s


def test_dual_of_path_differs_from_path():
    d = dual(PATH)
    assert (d.num_points, d.num_lines) == (2, 3)
