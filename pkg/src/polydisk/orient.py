"""Edge orientations on triangulations of the p-gon.

An orientation assigns each edge a direction; p-gonal 3-orientations give
every inner vertex out-degree 3, which forces the boundary out-degree sum
2p-3.  The minimal one has a clockwise root cycle and no counterclockwise
cycle, where the sense of a directed cycle is decided by the side holding
the marked face: on the left means clockwise.
"""

from __future__ import annotations

from collections import deque


class Orientation:
    """Per-edge direction, stored as the out-dart (the half at the tail).

    Edge k consists of darts 2k and 2k+1; out_darts[k] is whichever of the
    two leaves the tail vertex.
    """

    __slots__ = ("out_darts", "_out_set")

    def __init__(self, out_darts):
        out_darts = tuple(int(d) for d in out_darts)
        for k, d in enumerate(out_darts):
            if d // 2 != k:
                raise ValueError(f"edge {k} oriented by foreign dart {d}")
        self.out_darts = out_darts
        self._out_set = frozenset(out_darts)

    def is_out(self, d):
        """True when dart d points from tail to head."""
        return d in self._out_set

    def pairs(self, m):
        """(tail, head) vertex pairs per edge, the serialized form."""
        return [(m.origin[d], m.head(d)) for d in self.out_darts]

    @classmethod
    def from_pairs(cls, m, pairs):
        """Resolve serialized (tail, head) pairs against a map.  For a loop
        the two darts are indistinguishable; the even one is taken."""
        out = []
        for k, (tail, head) in enumerate(pairs):
            d_even = 2 * k
            if m.origin[d_even] == tail and m.head(d_even) == head:
                out.append(d_even)
            elif m.origin[d_even + 1] == tail and m.head(d_even + 1) == head:
                out.append(d_even + 1)
            else:
                raise ValueError(
                    f"edge {k} endpoints do not match pair ({tail}, {head})"
                )
        return cls(out)

    def __eq__(self, other):
        return isinstance(other, Orientation) and self.out_darts == other.out_darts

    def __hash__(self):
        return hash(self.out_darts)


def out_degree(m, orientation, v):
    return sum(1 for d in m.vertex_darts[v] if orientation.is_out(d))


def is_3_orientation(m, orientation):
    """(ok, diagnostics): ok iff every inner vertex has out-degree 3.
    Diagnostics carry the offending vertices and the boundary out-degree
    sum, which equals 2p-3 whenever ok holds."""
    boundary = m.boundary_vertices()
    bad = []
    boundary_sum = 0
    for v in range(m.vertex_count):
        deg = out_degree(m, orientation, v)
        if v in boundary:
            boundary_sum += deg
        elif deg != 3:
            bad.append((v, deg))
    ok = not bad
    diag = {
        "inner_bad": bad,
        "boundary_out_sum": boundary_sum,
        "expected_boundary_sum": 2 * m.perimeter - 3,
    }
    return ok, diag


def _left_side_faces(m, cycle_darts):
    """Faces on the left of a vertex-simple directed cycle, by dual BFS
    blocked on the cycle's edges."""
    cycle_edges = {d // 2 for d in cycle_darts}
    start = m.face_of[m.twin[cycle_darts[0]]]
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            if d // 2 in cycle_edges:
                continue
            g = m.face_of[m.twin[d]]
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return seen


def cycle_is_clockwise(m, cycle_darts):
    """Sense of a vertex-simple directed cycle given as consecutive darts:
    clockwise iff the marked face lies on its left."""
    if m.marked_face is None:
        raise ValueError("cycle sense needs a marked face")
    return m.marked_face in _left_side_faces(m, cycle_darts)


def _directed_cycles(m, orientation):
    """All vertex-simple directed cycles, as dart sequences.  Exponential
    in general; meant for small maps."""
    # adjacency by out-darts
    out = [[] for _ in range(m.vertex_count)]
    for d in orientation.out_darts:
        out[m.origin[d]].append(d)
    cycles = []
    n = m.vertex_count
    for s in range(n):
        # cycles whose smallest vertex is s
        stack = [(s, [])]
        while stack:
            v, path = stack.pop()
            for d in out[v]:
                w = m.head(d)
                if w == s:
                    cycles.append(path + [d])
                elif w > s and w != v and all(m.origin[e] != w for e in path):
                    stack.append((w, path + [d]))
    return cycles


def _facial_cycles(m, orientation):
    """Face boundaries that happen to be directed cycles."""
    out = []
    for f, orbit in enumerate(m.faces):
        if f == m.root_face:
            continue
        verts = [m.origin[d] for d in orbit]
        if len(set(verts)) != len(verts):
            continue
        # orbit darts run around the face; the directed cycle may follow
        # them or their twins
        if all(orientation.is_out(d) for d in orbit):
            out.append(list(orbit))
        else:
            rev = [m.twin[d] for d in reversed(orbit)]
            if all(orientation.is_out(d) for d in rev):
                out.append(rev)
    return out


def is_minimal(m, orientation, method="auto"):
    """True iff the root face boundary is a clockwise directed cycle and no
    counterclockwise directed cycle exists.

    method "exact" enumerates all vertex-simple directed cycles and is
    exponential (desk scale, <= ~10^4 darts); "facial" checks inner face
    boundaries only and is a necessary-condition screen for large maps;
    "auto" picks exact below 10^4 darts.
    """
    boundary_orbit = m.faces[m.root_face]
    # root cycle clockwise: every boundary edge points along the root-face
    # orbit, which keeps all inner faces (the marked one included) on the
    # left of the directed boundary
    if not all(orientation.is_out(d) for d in boundary_orbit):
        return False
    if method == "auto":
        method = "exact" if m.dart_count <= 10**4 else "facial"
    if method == "exact":
        cycles = _directed_cycles(m, orientation)
    elif method == "facial":
        cycles = _facial_cycles(m, orientation)
    else:
        raise ValueError(f"unknown method {method!r}")
    for cyc in cycles:
        if not cycle_is_clockwise(m, cyc):
            return False
    return True
