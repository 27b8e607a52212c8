import math

import pytest

from polydisk import (
    CombMap,
    Disconnected,
    MalformedRotation,
    MapError,
    NotInnerVertex,
    build_map,
    dumps_record,
    from_record,
    loads_record,
    to_record,
)

from helpers import canonical_key, centered_triangle, double_edge, polygon


def test_polygon_counts():
    m = polygon(5)
    assert m.vertex_count == 5
    assert m.edge_count == 5
    assert m.face_count == 2
    assert m.perimeter == 5
    assert all(m.degree(v) == 2 for v in range(5))


def test_polygon_boundary_walk():
    m = polygon(4)
    path, simple = m.boundary_walk()
    assert simple
    assert path == [0, 1, 2, 3, 0]
    assert m.root_vertex == 0
    assert m.boundary_vertices() == frozenset(range(4))
    assert m.inner_vertices() == []


def test_centered_triangle_counts():
    m = centered_triangle()
    n, p = 4, 3
    assert m.vertex_count == n
    assert m.edge_count == 3 * n - p - 3
    assert m.face_count == 2 * n - p - 1
    assert m.inner_vertices() == [3]
    assert m.degree(3) == 3
    assert sorted(m.neighbors(3)) == [0, 1, 2]


def test_centered_triangle_faces():
    m = centered_triangle()
    assert m.faces[m.root_face] == [0, 2, 4]
    inner = sorted(tuple(sorted(f)) for i, f in enumerate(m.faces) if i != m.root_face)
    assert inner == [(1, 6, 9), (3, 8, 11), (5, 7, 10)]


def test_euler_relation_holds():
    for m in (polygon(3), polygon(7), centered_triangle(), double_edge()):
        assert m.vertex_count - m.edge_count + m.face_count == 2


@pytest.mark.parametrize(
    "build, p, expected",
    [
        (polygon, 3, "III"),
        (centered_triangle, 3, "III"),
        (double_edge, 2, "II"),
        (polygon, 5, "invalid"),
    ],
)
def test_classify(build, p, expected):
    m = build(p) if build is polygon else build()
    assert m.classify(p) == expected


def test_classify_wrong_perimeter():
    assert polygon(4).classify(3) == "invalid"


def loop_triangulation():
    # triangle, center v joined to all corners plus a second edge to the
    # first corner; the digon between the parallel edges holds a loop at v,
    # and the loop holds a degree-1 vertex w, so every inner face is a
    # triangle (two of them with repeated vertices)
    vd = [
        [5, 6, 12, 0],
        [1, 8, 2],
        [3, 10, 4],
        [7, 11, 9, 13, 15, 16, 14],
        [17],
    ]
    return build_map(vd, 0)


def test_loop_makes_type_i():
    m = loop_triangulation()
    assert m.classify(3) == "I"
    assert m.vertex_count == 5
    assert m.edge_count == 9
    assert all(
        m.face_degree(f) == 3 for f in range(m.face_count) if f != m.root_face
    )


def test_multi_edge_makes_type_ii():
    # 2-gon whose double boundary edge encloses one vertex joined to both
    # endpoints: two triangular faces, a multiple edge, no loop
    m = build_map([[3, 4, 0], [1, 6, 2], [5, 7]], 0)
    assert m.classify(2) == "II"
    assert m.face_count == 3


def test_head_and_endpoints():
    m = centered_triangle()
    assert m.head(0) == 1
    assert m.head(6) == 3
    assert m.edge_endpoints(6) == (0, 3)
    assert m.edge_endpoints(7) == (3, 0)


def test_graph_distance():
    m = polygon(6)
    assert m.graph_distance(0, 3) == 3
    assert m.graph_distance(0, 5) == 1
    assert m.graph_distance(2, 2) == 0
    d = m.bfs_distances(0)
    assert [d[v] for v in range(6)] == [0, 1, 2, 3, 2, 1]


def test_inner_distance_requires_inner_source():
    m = centered_triangle()
    assert m.inner_distance(3, 0) == 1
    with pytest.raises(NotInnerVertex):
        m.inner_distance(0, 3)


def test_inner_distance_avoids_boundary():
    # square with two non-adjacent inner vertices u, w whose neighbors are
    # all on the boundary: u and w are linked through the boundary only
    vd = [
        [0, 7, 18, 8],
        [1, 10, 2],
        [3, 12, 14, 4],
        [5, 16, 6],
        [9, 13, 11],
        [15, 19, 17],
    ]
    m = build_map(vd, 0)
    assert m.graph_distance(4, 5) == 2
    assert m.inner_distance(4, 0) == 1
    assert math.isinf(m.inner_distance(4, 5))


def test_inner_distance_through_inner_vertex():
    m = loop_triangulation()
    assert m.inner_distance(3, 4) == 1
    assert m.inner_distance(4, 0) == 2


def test_malformed_rotation_rejected():
    with pytest.raises(MalformedRotation):
        build_map([[0, 2], [1]], 0)  # dart 3 missing
    with pytest.raises(MalformedRotation):
        build_map([[0, 1], [2, 3]], 0, twin=[0, 1, 3, 2])  # fixed points
    with pytest.raises(MalformedRotation):
        build_map([[1, 0]], 7)


def test_disconnected_rejected():
    with pytest.raises(Disconnected):
        build_map([[0, 1], [2, 3]], 0)


def test_marked_face_validation():
    m = centered_triangle()
    marked = next(i for i in range(m.face_count) if i != m.root_face)
    m2 = build_map(m.vertex_darts, 0, marked_face=marked)
    assert m2.marked_face == marked
    with pytest.raises(MapError):
        build_map(m.vertex_darts, 0, marked_face=m.root_face)
    with pytest.raises(MapError):
        build_map(m.vertex_darts, 0, marked_face=99)


def test_record_round_trip():
    m = centered_triangle()
    rec = to_record(m, extra={"labels": [0, -1, -2, -1]})
    line = dumps_record(rec)
    assert line == dumps_record(loads_record(line))
    m2 = from_record(loads_record(line))
    assert m2.vertex_darts == m.vertex_darts
    assert list(m2.twin) == list(m.twin)
    assert canonical_key(m2) == canonical_key(m)


def test_record_rejects_bad_perimeter():
    rec = to_record(polygon(3))
    rec["perimeter"] = 4
    with pytest.raises(MapError):
        from_record(rec)


def test_record_extra_collision():
    with pytest.raises(ValueError):
        to_record(polygon(3), extra={"twins": []})


def test_canonical_key_invariance():
    m = centered_triangle()
    # renumber darts arbitrarily but consistently: swap the two halves of
    # the inner edges' ids via an explicit twin table
    perm = {d: d for d in range(12)}
    perm.update({6: 8, 8: 6, 7: 9, 9: 7})
    vd = [[perm[d] for d in rot] for rot in m.vertex_darts]
    twin = [0] * 12
    for d in range(12):
        twin[perm[d]] = perm[m.twin[d]]
    m2 = build_map(vd, 0, twin=twin)
    assert canonical_key(m2) == canonical_key(m)
    assert canonical_key(polygon(3)) != canonical_key(centered_triangle())
