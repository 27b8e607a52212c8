"""Dart-based rooted combinatorial planar maps.

A map is a rotation system on darts (half-edges): ``twin`` is the
fixed-point-free involution pairing the two darts of each edge, and ``sigma``
sends a dart to the next dart clockwise around its origin vertex.  Faces are
the orbits of phi = sigma^{-1} o twin.  A corner is identified with the dart
it follows clockwise at its vertex, so the face sitting in corner(d) is the
phi-orbit of d.

Vertices, darts, and faces are all dense small integers.  Face ids are
assigned by first-dart order of the face orbits, which makes serialization
deterministic.  Maps are immutable after construction; everything here is
safe to share read-only across threads.
"""

from __future__ import annotations

import json
import math
from collections import deque


class MapError(ValueError):
    pass


class MalformedRotation(MapError):
    """Twin is not a fixed-point-free involution, or dart ids are not a
    permutation of 0..D-1 across the rotation lists."""


class Disconnected(MapError):
    """More than one dart-connected component."""


class NotInnerVertex(MapError):
    pass


class CombMap:
    """Immutable combinatorial map.

    Attributes
    ----------
    twin : list[int]           dart -> opposite dart (alpha)
    sigma : list[int]          dart -> next dart clockwise at the same vertex
    sigma_inv : list[int]      inverse of sigma
    origin : list[int]         dart -> vertex id
    vertex_darts : list[list[int]]   per-vertex clockwise rotation
    faces : list[list[int]]    per-face phi-orbit, phi = sigma_inv o twin
    face_of : list[int]        dart -> face id
    root_dart : int            dart encoding the root corner
    marked_face : int | None
    """

    __slots__ = (
        "twin",
        "sigma",
        "sigma_inv",
        "origin",
        "vertex_darts",
        "faces",
        "face_of",
        "root_dart",
        "marked_face",
        "_boundary_vertices",
    )

    def __init__(self, vertex_darts, root_dart, twin=None, marked_face=None):
        n_darts = sum(len(r) for r in vertex_darts)
        if n_darts == 0:
            raise MalformedRotation("map must have at least one edge")
        if n_darts % 2:
            raise MalformedRotation("odd number of darts")

        seen = [False] * n_darts
        for rot in vertex_darts:
            for d in rot:
                if not isinstance(d, int) or d < 0 or d >= n_darts or seen[d]:
                    raise MalformedRotation(f"dart ids must partition 0..{n_darts - 1}")
                seen[d] = True

        if twin is None:
            # default pairing: edge k owns darts 2k and 2k+1
            twin = [d ^ 1 for d in range(n_darts)]
        else:
            twin = list(twin)
            if len(twin) != n_darts:
                raise MalformedRotation("twin array length mismatch")
            for d in range(n_darts):
                t = twin[d]
                if not isinstance(t, int) or t < 0 or t >= n_darts or t == d or twin[t] != d:
                    raise MalformedRotation("twin is not a fixed-point-free involution")

        sigma = [0] * n_darts
        sigma_inv = [0] * n_darts
        origin = [0] * n_darts
        for v, rot in enumerate(vertex_darts):
            k = len(rot)
            for i, d in enumerate(rot):
                sigma[d] = rot[(i + 1) % k]
                sigma_inv[rot[(i + 1) % k]] = d
                origin[d] = v

        if not (0 <= root_dart < n_darts):
            raise MalformedRotation("root dart out of range")

        # connectivity over the dart graph generated by sigma and twin
        reached = [False] * n_darts
        stack = [root_dart]
        reached[root_dart] = True
        count = 1
        while stack:
            d = stack.pop()
            for nd in (sigma[d], twin[d]):
                if not reached[nd]:
                    reached[nd] = True
                    count += 1
                    stack.append(nd)
        if count != n_darts:
            raise Disconnected(f"{n_darts - count} darts unreachable from the root")

        # faces: orbits of phi = sigma_inv o twin, ids in first-dart order
        face_of = [-1] * n_darts
        faces = []
        for d0 in range(n_darts):
            if face_of[d0] >= 0:
                continue
            orbit = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = len(faces)
                orbit.append(d)
                d = sigma_inv[twin[d]]
            faces.append(orbit)

        self.twin = twin
        self.sigma = sigma
        self.sigma_inv = sigma_inv
        self.origin = origin
        self.vertex_darts = [list(r) for r in vertex_darts]
        self.faces = faces
        self.face_of = face_of
        self.root_dart = root_dart
        self.marked_face = marked_face
        self._boundary_vertices = None

        if marked_face is not None:
            if not (0 <= marked_face < len(faces)):
                raise MapError("marked face out of range")
            if marked_face == self.root_face:
                raise MapError("marked face must differ from the root face")

        # Euler check is cheap and catches most construction bugs early.
        if self.vertex_count - self.edge_count + self.face_count != 2:
            raise MapError(
                "Euler characteristic != 2: V=%d E=%d F=%d"
                % (self.vertex_count, self.edge_count, self.face_count)
            )

    # -- counts ---------------------------------------------------------

    @property
    def vertex_count(self):
        return len(self.vertex_darts)

    @property
    def edge_count(self):
        return len(self.twin) // 2

    @property
    def face_count(self):
        return len(self.faces)

    @property
    def dart_count(self):
        return len(self.twin)

    @property
    def root_face(self):
        return self.face_of[self.root_dart]

    @property
    def root_vertex(self):
        return self.origin[self.root_dart]

    @property
    def perimeter(self):
        return len(self.faces[self.root_face])

    # -- local navigation ----------------------------------------------

    def head(self, d):
        """Vertex at the far end of dart d."""
        return self.origin[self.twin[d]]

    def degree(self, v):
        return len(self.vertex_darts[v])

    def neighbors(self, v):
        for d in self.vertex_darts[v]:
            yield self.origin[self.twin[d]]

    def edge_endpoints(self, d):
        return self.origin[d], self.origin[self.twin[d]]

    def face_degree(self, f):
        return len(self.faces[f])

    # -- boundary -------------------------------------------------------

    def boundary_walk(self):
        """Closed vertex path around the root face, starting at the root
        vertex along the root dart.  Returns (path, simple) where simple is
        False when a boundary vertex repeats (legal for general maps,
        illegal for triangulations of the p-gon)."""
        orbit = self.faces[self.root_face]
        i = orbit.index(self.root_dart)
        ordered = orbit[i:] + orbit[:i]
        path = [self.origin[d] for d in ordered]
        simple = len(set(path)) == len(path)
        path.append(path[0])
        return path, simple

    def boundary_vertices(self):
        if self._boundary_vertices is None:
            path, _ = self.boundary_walk()
            self._boundary_vertices = frozenset(path)
        return self._boundary_vertices

    def is_boundary_vertex(self, v):
        return v in self.boundary_vertices()

    def inner_vertices(self):
        bnd = self.boundary_vertices()
        return [v for v in range(self.vertex_count) if v not in bnd]

    # -- classification -------------------------------------------------

    def classify(self, p):
        """Triangulation type in {'I', 'II', 'III', 'invalid'}.

        Base conditions: root face degree p with simple boundary, all other
        faces of degree 3.  III also forbids loops and multiple edges, II
        forbids loops only.  The two-edge 2-gon is the single element of the
        p=2 family and classifies as II by convention.
        """
        path, simple = self.boundary_walk()
        if self.perimeter != p or not simple:
            return "invalid"
        nonroot_ok = all(
            len(orbit) == 3
            for f, orbit in enumerate(self.faces)
            if f != self.root_face
        )
        if not nonroot_ok:
            if (
                p == 2
                and self.vertex_count == 2
                and self.edge_count == 2
                and self.face_count == 2
            ):
                return "II"  # the doubled edge; its inner-face count is 0
            return "invalid"
        has_loop = False
        pair_seen = set()
        has_multi = False
        for d in range(0, self.dart_count, 1):
            t = self.twin[d]
            if t < d:
                continue
            u, v = self.origin[d], self.origin[t]
            if u == v:
                has_loop = True
            key = (u, v) if u < v else (v, u)
            if key in pair_seen:
                has_multi = True
            pair_seen.add(key)
        if has_loop:
            return "I"
        if has_multi:
            return "II"
        return "III"

    # -- distances ------------------------------------------------------

    def graph_distance(self, u, v):
        """BFS distance in the underlying graph."""
        if u == v:
            return 0
        dist = [-1] * self.vertex_count
        dist[u] = 0
        q = deque([u])
        while q:
            w = q.popleft()
            dw = dist[w]
            for d in self.vertex_darts[w]:
                x = self.origin[self.twin[d]]
                if dist[x] < 0:
                    if x == v:
                        return dw + 1
                    dist[x] = dw + 1
                    q.append(x)
        return math.inf

    def bfs_distances(self, u):
        """Distance array from u; -1 marks unreachable (never happens on a
        connected map, kept for symmetry with inner BFS)."""
        dist = [-1] * self.vertex_count
        dist[u] = 0
        q = deque([u])
        while q:
            w = q.popleft()
            dw = dist[w]
            for d in self.vertex_darts[w]:
                x = self.origin[self.twin[d]]
                if dist[x] < 0:
                    dist[x] = dw + 1
                    q.append(x)
        return dist

    def inner_distance(self, u, v):
        """Shortest length among paths avoiding boundary vertices except
        possibly at the endpoint v.  math.inf when no such path exists."""
        bnd = self.boundary_vertices()
        if u in bnd:
            raise NotInnerVertex(f"vertex {u} lies on the root face")
        if u == v:
            return 0
        dist = {u: 0}
        q = deque([u])
        best = math.inf
        while q:
            w = q.popleft()
            dw = dist[w]
            if dw + 1 >= best:
                continue
            for d in self.vertex_darts[w]:
                x = self.origin[self.twin[d]]
                if x == v:
                    best = min(best, dw + 1)
                elif x not in bnd and x not in dist:
                    dist[x] = dw + 1
                    q.append(x)
        return best


def build_map(vertex_darts, root_dart, twin=None, marked_face=None):
    """Validated CombMap from per-vertex clockwise dart lists.

    With twin omitted, darts 2k and 2k+1 are opposite halves of edge k.
    """
    return CombMap(vertex_darts, root_dart, twin=twin, marked_face=marked_face)


# -- serialization ------------------------------------------------------

_RECORD_KEYS = ("perimeter", "root_dart", "marked_face", "vertices", "twins")


def to_record(m, extra=None):
    """Plain-dict JSONL record for a map; extra fields are carried verbatim."""
    rec = {
        "perimeter": m.perimeter,
        "root_dart": m.root_dart,
        "marked_face": m.marked_face,
        "vertices": [list(r) for r in m.vertex_darts],
        "twins": list(m.twin),
    }
    if extra:
        for k in extra:
            if k in rec:
                raise ValueError(f"extra field {k!r} collides with a record field")
        rec.update(extra)
    return rec


def from_record(rec):
    m = CombMap(
        rec["vertices"],
        rec["root_dart"],
        twin=rec["twins"],
        marked_face=rec.get("marked_face"),
    )
    if m.perimeter != rec["perimeter"]:
        raise MapError(
            "stored perimeter %r does not match root face degree %d"
            % (rec["perimeter"], m.perimeter)
        )
    return m


def dumps_record(rec):
    """Canonical one-line JSON: fixed key order for the map fields, then any
    extra fields sorted.  Byte-identical across runs for equal content."""
    ordered = {k: rec[k] for k in _RECORD_KEYS if k in rec}
    for k in sorted(rec):
        if k not in ordered:
            ordered[k] = rec[k]
    return json.dumps(ordered, separators=(",", ":"))


def loads_record(line):
    return json.loads(line)
