"""Blossoming forests and their closure into marked triangulations.

A blossoming forest on a p-cycle carries single-edge buds (blossoms) on
stems attached at corners: every inner vertex holds exactly two, the
boundary holds p-3 in total.  Walking the contour clockwise from the root
corner labels every corner; each blossom is then rehomed to the corner
where its matching chord lands, and the result is a triangulation of the
p-gon with a marked inner face, a 3-orientation, and the corner labels
preserved.  Everything here is exact integer combinatorics; sampling lives
elsewhere.
"""

from __future__ import annotations

from .forest import CyclicForest
from .map_core import CombMap
from .orient import Orientation


class BlossomError(ValueError):
    pass


class InvalidBlossoming(BlossomError):
    """Stem counts violate the two-per-inner-vertex / p-3-on-boundary rule."""


class ClosureStuck(BlossomError):
    """No closure step applies although unmatched blossoms remain."""


class NotValidlyLabeled(BlossomError):
    """Label function fails one of the admissibility constraints."""


class ArityMismatch(BlossomError):
    """Serialized record is internally inconsistent."""


def _parse_items(p, trees):
    """Split nested item lists into a stemless forest plus per-vertex stem
    positions, vertices taken in the depth-first order the stripped forest
    will number them."""
    stripped = []
    stem_items = []
    for tree in trees:
        stripped.append(_strip(tree, stem_items))
    return stripped, stem_items


def _strip(items, stem_items):
    # each frame is one vertex: (source items, output children list);
    # popping a frame is visiting that vertex, so the stack order keeps
    # stem_items aligned with the forest's depth-first vertex numbering
    out_children = []
    stack = [(items, out_children)]
    while stack:
        src, out = stack.pop()
        pos = []
        stem_items.append(pos)
        frames = []
        for i, item in enumerate(src):
            if item is None:
                pos.append(i)
            elif isinstance(item, (list, tuple)):
                child_out = []
                out.append(child_out)
                frames.append((item, child_out))
            else:
                raise InvalidBlossoming(f"item {item!r} is neither stem nor list")
        stack.extend(reversed(frames))
    return out_children


class BlossomForest:
    """A cyclic forest with stems, given as nested item lists.

    trees is a length-p sequence; each entry lists the root's items in
    clockwise order, where an item is either None (a stem) or a list (a
    child subtree, itself a list of items).
    """

    __slots__ = ("p", "base", "stem_items", "_fm", "_labeling")

    def __init__(self, p, trees):
        p = int(p)
        if p < 3:
            raise InvalidBlossoming(f"perimeter {p} < 3")
        if len(trees) != p:
            raise InvalidBlossoming(f"expected {p} trees, got {len(trees)}")
        stripped, stem_items = _parse_items(p, trees)
        base = CyclicForest(p, stripped)
        if base.vertex_count != len(stem_items):
            raise AssertionError("stem bookkeeping out of step with forest")
        boundary_total = 0
        for v in range(base.vertex_count):
            k = len(stem_items[v])
            if base.parent[v] is None:
                boundary_total += k
            elif k != 2:
                raise InvalidBlossoming(
                    f"inner vertex {v} carries {k} stems, needs 2"
                )
        if boundary_total != p - 3:
            raise InvalidBlossoming(
                f"boundary carries {boundary_total} stems, needs {p - 3}"
            )
        self.p = p
        self.base = base
        self.stem_items = tuple(tuple(s) for s in stem_items)
        self._fm = None
        self._labeling = None

    @property
    def proper_count(self):
        return self.base.vertex_count

    @property
    def blossom_count(self):
        return sum(len(s) for s in self.stem_items)

    def items(self, v):
        """Items at vertex v in clockwise order: ("stem", None) or
        ("child", child_vertex)."""
        kids = self.base.children[v]
        stems = set(self.stem_items[v])
        total = len(kids) + len(stems)
        out = []
        ki = 0
        for i in range(total):
            if i in stems:
                out.append(("stem", None))
            else:
                out.append(("child", kids[ki]))
                ki += 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, BlossomForest)
            and self.p == other.p
            and self.base.trees == other.base.trees
            and self.stem_items == other.stem_items
        )

    def __hash__(self):
        return hash((self.p, self.base.trees, self.stem_items))

    def to_record(self):
        return {
            "perimeter": self.p,
            "trees": [t.to_nested() for t in self.base.trees],
            "stem_positions": [list(s) for s in self.stem_items],
            "boundary_stem_counts": [
                len(self.stem_items[self.base.boundary[j]])
                for j in range(self.p)
            ],
        }

    @classmethod
    def from_record(cls, rec):
        try:
            p = int(rec["perimeter"])
            trees = rec["trees"]
            stem_positions = rec["stem_positions"]
            counts = rec["boundary_stem_counts"]
        except (KeyError, TypeError) as exc:
            raise ArityMismatch(f"malformed blossoming record: {exc}") from None
        base = CyclicForest(p, trees)
        if len(stem_positions) != base.vertex_count:
            raise ArityMismatch(
                f"{len(stem_positions)} stem lists for "
                f"{base.vertex_count} vertices"
            )
        if len(counts) != p:
            raise ArityMismatch("boundary_stem_counts length != perimeter")
        for j in range(p):
            v = base.boundary[j]
            if counts[j] != len(stem_positions[v]):
                raise ArityMismatch(
                    f"boundary vertex {j}: recorded {counts[j]} stems, "
                    f"positions list {len(stem_positions[v])}"
                )
        nested = _reinsert(base, stem_positions)
        return cls(p, nested)

    # -- contour machinery ------------------------------------------------

    def _forest_map(self):
        if self._fm is None:
            self._fm = _ForestMap(self)
        return self._fm


def _reinsert(base, stem_positions):
    """Rebuild nested item lists from a stemless forest plus per-vertex
    stem item positions."""

    def items_of(v):
        kids = base.children[v]
        stems = list(stem_positions[v])
        total = len(kids) + len(stems)
        if sorted(stems) != stems or any(
            s < 0 or s >= total for s in stems
        ) or len(set(stems)) != len(stems):
            raise ArityMismatch(f"vertex {v}: bad stem positions {stems}")
        out = [None] * total
        ki = 0
        stems_set = set(stems)
        for i in range(total):
            if i not in stems_set:
                out[i] = kids[ki]
                ki += 1
        return out

    memo = {}

    def build(v):
        # iterative post-order fill
        stack = [(v, False)]
        while stack:
            u, done = stack.pop()
            if done:
                memo[u] = [
                    None if w is None else memo[w] for w in items_of(u)
                ]
            else:
                stack.append((u, True))
                for w in base.children[u]:
                    stack.append((w, False))
        return memo[v]

    return [build(base.boundary[j]) for j in range(base.p)]


class _ForestMap:
    """Dart-level view of a blossoming forest.

    Boundary edge j owns darts 2j (forward) and 2j+1; item edges are
    numbered from p in contour-encounter order, a tree edge putting its
    even dart at the parent and a stem its even dart at the base vertex.
    Blossom tips are not vertices: a blossom-side dart is its own
    sigma-fixed point.
    """

    __slots__ = (
        "F", "p", "n", "dart_count", "edge_kind", "rot", "sigma",
        "sigma_prev", "origin", "item_darts", "up_dart",
    )

    def __init__(self, F):
        base = F.base
        p = F.p
        n = base.vertex_count
        items_per = [F.items(v) for v in range(n)]
        edge_kind = ["boundary"] * p
        item_darts = [[] for _ in range(n)]
        up_dart = [None] * n
        k = p
        for j in range(p):
            root = base.boundary[j]
            stack = [(root, 0)]
            while stack:
                v, i = stack.pop()
                items = items_per[v]
                if i < len(items):
                    stack.append((v, i + 1))
                    kind, child = items[i]
                    item_darts[v].append(2 * k)
                    if kind == "stem":
                        edge_kind.append("stem")
                    else:
                        edge_kind.append("tree")
                        up_dart[child] = 2 * k + 1
                        stack.append((child, 0))
                    k += 1
        dart_count = 2 * k
        rot = []
        for v in range(n):
            if base.parent[v] is None:
                j = base.tree_index[v] - 1
                cyc = [2 * ((j - 1) % p) + 1] + item_darts[v] + [2 * j]
            else:
                cyc = [up_dart[v]] + item_darts[v]
            rot.append(cyc)
        sigma = [None] * dart_count
        sigma_prev = [None] * dart_count
        origin = [None] * dart_count
        for v, cyc in enumerate(rot):
            m = len(cyc)
            for i, d in enumerate(cyc):
                sigma[d] = cyc[(i + 1) % m]
                sigma_prev[d] = cyc[(i - 1) % m]
                origin[d] = v
        # blossom-side darts are sigma-fixed; origin left as None since the
        # tip is not a proper vertex
        for e in range(p, k):
            if edge_kind[e] == "stem":
                b = 2 * e + 1
                sigma[b] = b
                sigma_prev[b] = b
        self.F = F
        self.p = p
        self.n = n
        self.dart_count = dart_count
        self.edge_kind = tuple(edge_kind)
        self.rot = [tuple(c) for c in rot]
        self.sigma = sigma
        self.sigma_prev = sigma_prev
        self.origin = origin
        self.item_darts = [tuple(d) for d in item_darts]
        self.up_dart = up_dart

    def is_blossom_side(self, d):
        return d % 2 == 1 and self.edge_kind[d // 2] == "stem"

    def stem_base_vertex(self, d):
        return self.origin[d - 1]


class CornerLabeling:
    """Corner labels along the clockwise contour of a blossoming forest.

    Position t anchors at a dart (the corner just past it clockwise at its
    origin); position 0 is the root corner with label 0 and position N
    revisits the same anchor as the terminal corner with label -3.
    """

    __slots__ = (
        "anchors", "lam", "vertex_of", "is_blossom", "X", "pos_of_anchor",
    )

    def __init__(self, anchors, lam, vertex_of, is_blossom, X):
        self.anchors = anchors
        self.lam = lam
        self.vertex_of = vertex_of
        self.is_blossom = is_blossom
        self.X = X
        pos = {}
        for t in range(len(anchors) - 1):
            pos[anchors[t]] = t
        self.pos_of_anchor = pos

    @property
    def N(self):
        return len(self.lam) - 1

    def corners_at(self, v):
        """Positions anchored at proper vertex v, terminal corner excluded."""
        return [
            t
            for t in range(self.N)
            if self.vertex_of[t] == v and not self.is_blossom[t]
        ]


def label_corners(F):
    """Label every corner along the contour.

    The walk starts in the root corner (label 0) and repeatedly crosses the
    next edge side clockwise: a proper side decrements, a stem side toward
    the blossom keeps the label, the side returning from the blossom
    increments.  The terminal corner always lands on -3.
    """
    if F._labeling is not None:
        return F._labeling
    fm = F._forest_map()
    start = 2 * F.p - 1
    anchors = [start]
    lam = [0]
    vertex_of = [fm.origin[start]]
    is_blossom = [False]
    d = start
    while True:
        e = fm.sigma[d]
        if fm.is_blossom_side(e):
            step = 1
        elif fm.edge_kind[e // 2] == "stem":
            step = 0
        else:
            step = -1
        d = e ^ 1
        lam.append(lam[-1] + step)
        if d == start:
            anchors.append(start)
            vertex_of.append(fm.origin[start])
            is_blossom.append(False)
            break
        anchors.append(d)
        blos = fm.is_blossom_side(d)
        is_blossom.append(blos)
        vertex_of.append(
            fm.stem_base_vertex(d) if blos else fm.origin[d]
        )
    if lam[-1] != -3:
        raise AssertionError(f"terminal corner label {lam[-1]}, expected -3")
    N = len(lam) - 1
    X = [None] * fm.n
    for t in range(N):
        if is_blossom[t]:
            continue
        v = vertex_of[t]
        if X[v] is None or lam[t] < X[v]:
            X[v] = lam[t]
    labeling = CornerLabeling(
        tuple(anchors), tuple(lam), tuple(vertex_of),
        tuple(is_blossom), tuple(X),
    )
    F._labeling = labeling
    return labeling


def successor(F, labeling, kappa):
    """(position, type) of the corner a chord from corner kappa lands in.

    Type "first": the next corner strictly after kappa with a smaller
    label, the terminal corner included.  When none exists (only possible
    for labels <= -3) the type "second" target is the first corner after
    the root with label below lam(kappa)+3.
    """
    lam = labeling.lam
    N = labeling.N
    lk = lam[kappa]
    for t in range(kappa + 1, N + 1):
        if lam[t] < lk:
            return t, "first"
    for t in range(1, N + 1):
        if lam[t] < lk + 3:
            return t, "second"
    raise ClosureStuck(f"corner {kappa} has no successor")


class ClosureLabels:
    """Corner labels carried onto the closed triangulation.

    Each dart anchors the inner corner just past it clockwise at its
    origin; read_corner gives (label, contour index).  A corner split by
    arriving chords leaves the same value on every resulting sub-corner.

    The initial and terminal contour corners share one sector at the root
    vertex, so reads there are directional: clockwise reads (corner_right)
    see the terminal corner (-3, N), while the counterclockwise read from
    the sector's far edge (corner_left on xi_left_dart) sees the initial
    corner (0, 0).  Chords landing in that sector sit between the two.
    """

    __slots__ = (
        "corner_lam", "corner_ctr", "xi_left_dart", "ell_min", "crossing",
    )

    def __init__(self, corner_lam, corner_ctr, xi_left_dart, ell_min, crossing):
        self.corner_lam = corner_lam
        self.corner_ctr = corner_ctr
        self.xi_left_dart = xi_left_dart
        self.ell_min = ell_min
        self.crossing = crossing

    def read_corner(self, d):
        """(label, contour index) of the corner anchored at dart d."""
        return self.corner_lam[d], self.corner_ctr[d]

    def corner_left(self, m, d):
        """Corner just before dart d clockwise at its origin."""
        if d == self.xi_left_dart:
            return 0, 0
        return self.read_corner(m.sigma_inv[d])

    def corner_right(self, m, d):
        """Corner just after dart d clockwise at its origin."""
        return self.read_corner(d)


def closure(F):
    """Close a blossoming forest into (map, orientation, labels).

    Every blossom-side dart is rehomed into its successor corner; the
    resulting map is a triangulation of the p-gon whose marked face holds
    the images of the three minimal-label corners.  The orientation points
    boundary edges clockwise, tree edges toward the parent and closure
    chords out of the stem base; labels keep their contour values.
    """
    fm = F._forest_map()
    labeling = label_corners(F)
    lam = labeling.lam
    anchors = labeling.anchors
    N = labeling.N
    start = 2 * F.p - 1

    ins1 = {}
    ins2 = {}
    corner_lam = {}
    corner_ctr = {}
    for t in range(N):
        d = anchors[t]
        corner_lam[d] = lam[t]
        corner_ctr[d] = t
    # the initial and terminal corners share the anchor dart; clockwise
    # reads see the terminal value, corner_left restores the initial one
    corner_lam[start] = -3
    corner_ctr[start] = N

    blossom_positions = [t for t in range(N) if labeling.is_blossom[t]]
    succ1 = _next_smaller(lam)
    pm, pm_vals = _prefix_minima(lam)
    crossing = set()
    for t in blossom_positions:
        b = anchors[t]
        tprime = succ1[t]
        if tprime is not None:
            kind = "first"
        else:
            tprime = _first_below(pm, pm_vals, lam[t] + 3)
            kind = "second"
            crossing.add(b // 2)
            if tprime is None:
                raise ClosureStuck(f"blossom corner {t} has no successor")
        if labeling.is_blossom[tprime]:
            raise ClosureStuck(
                f"blossom corner {t} resolves to blossom corner {tprime}"
            )
        A = anchors[tprime]
        table = ins1 if kind == "first" else ins2
        table.setdefault(A, []).append(b)
        corner_lam[b] = lam[tprime]
        corner_ctr[b] = tprime

    xi_left_dart = fm.sigma[start]

    vertex_darts = []
    for v in range(fm.n):
        cyc = []
        for d in fm.rot[v]:
            cyc.append(d)
            cyc.extend(reversed(ins1.get(d, ())))
            cyc.extend(reversed(ins2.get(d, ())))
        vertex_darts.append(cyc)

    m0 = CombMap(vertex_darts, 0)

    # the marked face holds the surviving image of the corner carrying the
    # minimal label: the image is the last sub-corner clockwise once chords
    # split the original gap, which is the first-processed insertion
    def image_dart(t):
        a = anchors[t]
        if ins2.get(a):
            return ins2[a][0]
        if ins1.get(a):
            return ins1[a][0]
        return a

    ell = min(lam)
    marked = m0.face_of[image_dart(lam.index(ell))]
    if not (
        m0.face_of[image_dart(lam.index(ell + 1))]
        == m0.face_of[image_dart(lam.index(ell + 2))]
        == marked
    ):
        raise AssertionError("minimal-corner images landed in distinct faces")
    m = CombMap(vertex_darts, 0, marked_face=marked)

    out = []
    for e in range(m.edge_count):
        if fm.edge_kind[e] == "tree":
            out.append(2 * e + 1)
        else:
            out.append(2 * e)
    orientation = Orientation(out)
    labels = ClosureLabels(
        corner_lam, corner_ctr, xi_left_dart, min(lam), frozenset(crossing)
    )
    return m, orientation, labels


def _next_smaller(lam):
    """succ1[t] = least t' > t with lam[t'] < lam[t], None if absent."""
    n = len(lam)
    out = [None] * n
    stack = []
    for t in range(n):
        while stack and lam[stack[-1]] > lam[t]:
            out[stack.pop()] = t
        stack.append(t)
    return out


def _prefix_minima(lam):
    """Strictly decreasing ladder of prefix minima over positions 1..N:
    parallel lists (positions, values) for first-passage queries."""
    pos = []
    vals = []
    for t in range(1, len(lam)):
        if not vals or lam[t] < vals[-1]:
            pos.append(t)
            vals.append(lam[t])
    return pos, vals


def _first_below(pm_pos, pm_vals, threshold):
    """First position t >= 1 with lam[t] < threshold, via the prefix-min
    ladder (values strictly decreasing)."""
    # find leftmost ladder entry with value < threshold
    lo, hi = 0, len(pm_vals)
    while lo < hi:
        mid = (lo + hi) // 2
        if pm_vals[mid] < threshold:
            hi = mid
        else:
            lo = mid + 1
    if lo == len(pm_vals):
        return None
    return pm_pos[lo]


def find_vstar(F, labeling=None):
    """(kappa_min, kappa_min1, kappa_min2, v_star): the first corner
    carrying the minimal label (terminal corner included), the first
    corners carrying the two labels above it, and the vertex of the
    minimal corner."""
    if labeling is None:
        labeling = label_corners(F)
    lam = labeling.lam
    ell = min(lam)
    kmin = lam.index(ell)
    k1 = lam.index(ell + 1)
    k2 = lam.index(ell + 2)
    vstar = labeling.vertex_of[kmin]
    return kmin, k1, k2, vstar


# -- valid labelings ------------------------------------------------------


class ValidLabeledForest:
    """A cyclic forest with admissible integer vertex labels.

    Constraints: around the boundary the label drops by at most 1 per step
    and gains at least 2 closing the cycle; along each vertex the child
    label offsets are non-decreasing; an edge between inner vertices
    shifts by at most 1 either way; an edge out of the boundary drops by
    at most 1 and leaves room among that root's stem slots.
    """

    __slots__ = ("forest", "X", "D")

    def __init__(self, forest, X):
        X = tuple(int(x) for x in X)
        if len(X) != forest.vertex_count:
            raise NotValidlyLabeled(
                f"{len(X)} labels for {forest.vertex_count} vertices"
            )
        p = forest.p
        bx = [X[forest.boundary[j]] for j in range(p)]
        for i in range(1, p):
            if bx[i] < bx[i - 1] - 1:
                raise NotValidlyLabeled(
                    f"boundary label drops by more than 1 at step {i}"
                )
        if bx[0] < bx[p - 1] + 2:
            raise NotValidlyLabeled(
                "boundary label gains less than 2 closing the cycle"
            )
        s = _stem_budget(bx)
        D = []
        for v in range(forest.vertex_count):
            offs = tuple(X[c] - X[v] for c in forest.children[v])
            for a, b in zip(offs, offs[1:]):
                if b < a:
                    raise NotValidlyLabeled(
                        f"child offsets decrease at vertex {v}"
                    )
            if forest.parent[v] is None:
                j = forest.tree_index[v] - 1
                cap = s[j] - 1
                for off in offs:
                    if off < -1 or off > cap:
                        raise NotValidlyLabeled(
                            f"boundary child offset {off} at root {j} "
                            f"outside [-1, {cap}]"
                        )
            else:
                for off in offs:
                    if off < -1 or off > 1:
                        raise NotValidlyLabeled(
                            f"inner child offset {off} at vertex {v}"
                        )
            D.append(offs)
        self.forest = forest
        self.X = X
        self.D = tuple(D)

    def __eq__(self, other):
        return (
            isinstance(other, ValidLabeledForest)
            and self.forest.p == other.forest.p
            and self.forest.trees == other.forest.trees
            and self.X == other.X
        )

    def __hash__(self):
        return hash((self.forest.p, self.forest.trees, self.X))


def _stem_budget(bx):
    """Stem counts per boundary root from the boundary labels: step i of
    the cycle absorbs one stem per unit the label fails to drop, the
    closing step three fewer."""
    p = len(bx)
    s = [bx[(i + 1) % p] - bx[i] + 1 for i in range(p)]
    s[p - 1] -= 3
    return s


def to_valid_labeled(F):
    """Forget the stems of a blossoming forest, keeping the labels their
    contour walk induces."""
    labeling = label_corners(F)
    return ValidLabeledForest(F.base, labeling.X)


def from_valid_labeled(V):
    """Rebuild the blossoming forest whose contour labels induce V.

    A child with offset d has exactly d+1 stems before it among its
    parent's items; at an inner vertex the two stems split the children
    into offset classes -1 / 0 / +1, at a boundary root the s stems split
    them into classes -1 .. s-1.
    """
    forest = V.forest
    p = forest.p
    bx = [V.X[forest.boundary[j]] for j in range(p)]
    s = _stem_budget(bx)

    def items_for(v, n_stems):
        kids = forest.children[v]
        offs = V.D[v]
        out = []
        ki = 0
        for slot in range(n_stems + 1):
            # children whose offset puts slot stems before them
            while ki < len(kids) and offs[ki] == slot - 1:
                out.append(("child", kids[ki]))
                ki += 1
            if slot < n_stems:
                out.append(("stem", None))
        if ki != len(kids):
            raise NotValidlyLabeled(
                f"vertex {v}: child offsets {offs} exceed stem budget"
            )
        return out

    memo = {}

    def build(root):
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(forest.children[v])
        for v in reversed(order):
            if forest.parent[v] is None:
                n_stems = s[forest.tree_index[v] - 1]
            else:
                n_stems = 2
            items = []
            for kind, c in items_for(v, n_stems):
                items.append(None if kind == "stem" else memo[c])
            memo[v] = items
        return memo[root]

    trees = [build(forest.boundary[j]) for j in range(p)]
    return BlossomForest(p, trees)
