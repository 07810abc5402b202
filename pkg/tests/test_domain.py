"""Domain construction, dual boundary extraction, and finite-set removal."""

import pytest

from fpplab import (CustomPerturbation, HalfPlane, Sector, SlitPlane, Window,
                    boundary_vertices, build_domain, extract_dual_boundary,
                    graph_ball, remove_set)
from fpplab.errors import BadRemovedSet, EmptyBoundary, InvalidSpec
from fpplab.geometry import HORIZONTAL, VERTICAL, Edge


def brute_crossed_edges(spec, window):
    """Independent enumeration of boundary crossings with V-side in window."""
    out = set()
    for x in range(window.x0 - 1, window.x1 + 2):
        for y in range(window.y0 - 1, window.y1 + 2):
            for e in (Edge((x, y), HORIZONTAL), Edge((x, y), VERTICAL)):
                a, b = e.endpoints
                ca, cb = spec.contains(a), spec.contains(b)
                if ca == cb:
                    continue
                v = a if ca else b
                if window.contains(v):
                    out.add(e)
    return out


def test_half_plane_window():
    d = build_domain(HalfPlane(), Window(-5, 5, 0, 5))
    assert [v for _, v in boundary_vertices(d)] == [(i, 0) for i in range(-5, 6)]
    assert d.index_lo == -5 and d.index_hi == 5
    assert d.boundary_vertex(0) == (0, 0)
    # All of Gamma runs along y = -1/2: dual vertices at dual height -1.
    assert all(dv[1] == -1 for dv in d.dual_vertices)
    assert d.escapes == ("W", "E")


@pytest.mark.parametrize("spec,window", [
    (HalfPlane(), Window(-5, 5, 0, 5)),
    (SlitPlane(), Window(-4, 4, -4, 4)),
    (Sector((0, 1), (1, 1)), Window(-8, 8, -8, 8)),
    (CustomPerturbation(HalfPlane(), remove=((0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0))),
     Window(-8, 12, 0, 8)),
])
def test_walk_matches_exhaustive_enumeration(spec, window):
    d = build_domain(spec, window)
    walked = list(d.edges)
    assert len(set(walked)) == len(walked)  # each crossing appears exactly once
    assert set(walked) == brute_crossed_edges(spec, window)


@pytest.mark.parametrize("spec,window", [
    (HalfPlane(), Window(-6, 6, 0, 6)),
    (SlitPlane(), Window(-5, 5, -5, 5)),
    (Sector((0, 1), (1, 1)), Window(-8, 8, -8, 8)),
    (Sector((0, 1), (3, 1)), Window(-8, 8, -8, 8)),
])
def test_dual_path_degree_two_and_acyclic(spec, window):
    d = build_domain(spec, window)
    # Self-avoiding dual polyline: no repeated dual vertex, hence no cycle.
    assert len(set(d.dual_vertices)) == len(d.dual_vertices)
    degree = {}
    for a, b in zip(d.dual_vertices, d.dual_vertices[1:]):
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    ends = [dv for dv, k in degree.items() if k == 1]
    assert len(ends) == 2  # only the two window escapes
    assert all(k == 2 for dv, k in degree.items() if dv not in ends)


def test_multiplicity_bound_and_sector_apex():
    slit = build_domain(SlitPlane(), Window(-4, 4, -4, 4))
    for v, idx in slit.vertex_indices.items():
        assert len(idx) <= 3
    sector = build_domain(Sector((0, 1), (1, 1)), Window(-8, 8, -8, 8))
    assert len(sector.indices_of((0, 0))) == 3
    for v, idx in sector.vertex_indices.items():
        assert len(idx) <= 3


def test_slit_plane_wraps_tip():
    d = build_domain(SlitPlane(), Window(-4, 4, -4, 4))
    assert d.boundary_vertex(0) == (1, 0)
    assert d.boundary_vertex(1) == (0, 1)
    assert d.boundary_vertex(-1) == (0, -1)
    got = {v for _, v in d.boundary_items()}
    expected = {(k, 1) for k in range(-4, 1)} | {(k, -1) for k in range(-4, 1)} | {(1, 0)}
    assert got == expected


def test_sector_orientation_increases_along_bottom():
    d = build_domain(Sector((0, 1), (1, 1)), Window(-8, 8, -8, 8))
    assert d.boundary_vertex(1) == (1, 0)
    assert d.boundary_vertex(2) == (2, 0)
    assert d.boundary_vertex(-3) == (1, 1)


def test_indices_consistent_across_windows():
    small = build_domain(SlitPlane(), Window(-4, 4, -4, 4))
    large = build_domain(SlitPlane(), Window(-8, 8, -8, 8))
    for i in small.index_range:
        assert small.boundary_vertex(i) == large.boundary_vertex(i)


def test_determinism_bit_identical():
    a = build_domain(Sector((0, 1), (2, 1)), Window(-6, 10, -6, 10))
    b = build_domain(Sector((0, 1), (2, 1)), Window(-6, 10, -6, 10))
    assert a.vertices == b.vertices
    assert a.edges == b.edges
    assert a.dual_vertices == b.dual_vertices
    assert (a.index_lo, a.index_hi) == (b.index_lo, b.index_hi)


def test_empty_boundary():
    with pytest.raises(EmptyBoundary):
        build_domain(HalfPlane(), Window(-5, 5, 3, 8))


def test_out_of_window_anchor_keeps_global_indices():
    d = build_domain(HalfPlane(), Window(10, 20, 0, 5))
    assert [v for _, v in d.boundary_items()] == [(i, 0) for i in range(10, 21)]
    assert d.index_lo == 10


def test_custom_perturbation_valid_and_invalid():
    ok = CustomPerturbation(HalfPlane(), remove=tuple((k, 0) for k in range(6)))
    d = build_domain(ok, Window(-8, 12, 0, 8))
    assert not d.contains((3, 0))
    assert d.contains((3, 1))

    # Cutting the sector across its full width pinches off the apex piece.
    cut = tuple((3, y) for y in range(0, 4))
    with pytest.raises(InvalidSpec):
        build_domain(CustomPerturbation(Sector((0, 1), (1, 1)), remove=cut),
                     Window(-8, 12, -8, 12))


def test_thin_sector_rejected():
    with pytest.raises(InvalidSpec):
        build_domain(Sector((2, 3), (9, 10)), Window(-8, 8, -8, 8))


def test_added_island_rejected():
    with pytest.raises(InvalidSpec):
        build_domain(CustomPerturbation(HalfPlane(), add=((5, -3),)),
                     Window(-8, 8, 0, 8))


def test_remove_origin_from_half_plane():
    d = build_domain(HalfPlane(), Window(-12, 12, 0, 12))
    rd = remove_set(d, [(0, 0)])
    assert not rd.domain.contains((0, 0))
    assert set(rd.contact_vertices()) == {(-1, 0), (1, 0), (0, 1)}
    # Re-indexing: v_n == vbar_{n+kappa} pointwise above the threshold.
    for n in range(rd.match_threshold + 1, d.index_hi + 1):
        assert d.boundary_vertex(n) == rd.domain.boundary_vertex(n + rd.kappa)
    assert rd.match_threshold < d.index_hi - 2


def test_remove_ball_fringe_matches_graph_ball():
    d = build_domain(HalfPlane(), Window(-12, 12, 0, 12))
    ball, fringe = graph_ball(d, (0, 0), 1)
    assert set(ball) == {(0, 0), (1, 0), (-1, 0), (0, 1)}
    rd = remove_set(d, ball)
    assert set(rd.contact_vertices()) == set(fringe)


def test_remove_set_preconditions():
    d = build_domain(HalfPlane(), Window(-10, 10, 0, 10))
    with pytest.raises(BadRemovedSet):
        remove_set(d, [(9, 0)])  # touches the window edge
    with pytest.raises(BadRemovedSet):
        remove_set(d, [(0, 0), (2, 0)])  # not connected
    with pytest.raises(BadRemovedSet):
        remove_set(d, [(0, 5)])  # no boundary vertex
    with pytest.raises(BadRemovedSet):
        remove_set(d, [])


def test_remove_set_drops_pinched_component():
    d = build_domain(HalfPlane(), Window(-16, 16, 0, 16))
    # A hook around (0,0),(1,0): those two survive in a pocket that is cut off
    # from the big component, and must not be counted as surviving vertices.
    hook = [(-1, 0), (-1, 1), (0, 1), (1, 1), (2, 1), (2, 0), (3, 0)]
    rd = remove_set(d, hook)
    assert not rd.domain.contains((0, 0))
    assert not rd.domain.contains((1, 0))
    assert rd.domain.contains((5, 5))
    for n in range(rd.match_threshold + 1, d.index_hi + 1):
        assert d.boundary_vertex(n) == rd.domain.boundary_vertex(n + rd.kappa)


def test_extract_dual_boundary_roundtrip():
    d = build_domain(HalfPlane(), Window(-3, 3, 0, 3))
    duals = extract_dual_boundary(d)
    assert [de.edge for de in duals] == list(d.edges)
