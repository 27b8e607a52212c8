"""Plane trees and cyclic forests of perimeter p.

A cyclic forest is a p-cycle rho_1 ... rho_p with a plane tree hanging
from each cycle vertex.  Vertices carry global ids equal to their rank in
the lexicographic order (tree index, then Ulam-Harris word), which is
also the first-visit order of the contour exploration, so v_i is simply
vertex i.
"""

from __future__ import annotations

import csv
from fractions import Fraction


class PlaneTree:
    """Rooted plane tree; children are ordered clockwise from the parent
    edge.  The node itself is the root."""

    __slots__ = ("children",)

    def __init__(self, children=()):
        self.children = tuple(children)
        for c in self.children:
            if not isinstance(c, PlaneTree):
                raise TypeError("children must be PlaneTree instances")

    @classmethod
    def from_nested(cls, nested):
        """Tree from nested lists: [] is a leaf, [[], [[]]] has two
        children the second of which has one child.  Iterative: sampled
        trees can be deeper than the interpreter recursion limit."""
        post = []
        stack = [(nested, False)]
        built = {}
        while stack:
            node, expanded = stack.pop()
            if expanded:
                kids = [built[id(c)] for c in node]
                built[id(node)] = cls(kids)
            else:
                stack.append((node, True))
                for c in reversed(node):
                    stack.append((c, False))
        return built[id(nested)]

    @property
    def size(self):
        n = 0
        stack = [self]
        while stack:
            t = stack.pop()
            n += 1
            stack.extend(t.children)
        return n

    def to_nested(self):
        """Inverse of from_nested."""
        out = []
        stack = [(self, out)]
        while stack:
            node, dst = stack.pop()
            frames = []
            for c in node.children:
                lst = []
                dst.append(lst)
                frames.append((c, lst))
            stack.extend(reversed(frames))
        return out

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and self.children == other.children

    def __hash__(self):
        return hash(self.children)

    def __repr__(self):
        return f"PlaneTree({list(self.children)!r})" if self.children else "PlaneTree()"


class CyclicForest:
    """Forest (T_1, ..., T_p) on the p-cycle; tree j is rooted at rho_j.

    root_corner is the corner xi of rho_1 preceding T_1's subtrees, held
    as contour position 0.
    """

    __slots__ = (
        "p",
        "trees",
        "parent",
        "children",
        "tree_index",
        "generation",
        "boundary",
    )

    def __init__(self, p, trees):
        trees = [
            t if isinstance(t, PlaneTree) else PlaneTree.from_nested(t)
            for t in trees
        ]
        if p < 1:
            raise ValueError("perimeter must be at least 1")
        if len(trees) != p:
            raise ValueError(f"expected {p} trees, got {len(trees)}")
        self.p = p
        self.trees = tuple(trees)
        parent = []
        children = []
        tree_index = []
        generation = []
        boundary = []

        for j, t in enumerate(self.trees):
            boundary.append(len(parent))
            stack = [(t, None, 0)]
            while stack:
                node, par, gen = stack.pop()
                v = len(parent)
                parent.append(par)
                children.append([])
                tree_index.append(j + 1)
                generation.append(gen)
                if par is not None:
                    children[par].append(v)
                for c in reversed(node.children):
                    stack.append((c, v, gen + 1))
        self.parent = tuple(parent)
        self.children = tuple(tuple(c) for c in children)
        self.tree_index = tuple(tree_index)
        self.generation = tuple(generation)
        self.boundary = tuple(boundary)

    @property
    def vertex_count(self):
        return len(self.parent)

    @property
    def edge_count(self):
        # tree edges plus the p cycle edges
        return (self.vertex_count - self.p) + self.p

    @property
    def root_corner(self):
        return 0

    def __eq__(self, other):
        return (
            isinstance(other, CyclicForest)
            and self.p == other.p
            and self.trees == other.trees
        )

    def __hash__(self):
        return hash((self.p, self.trees))


def ulam_harris(forest):
    """Per-vertex label words as tuples: roots get (j,), the i-th child of
    a vertex with word w gets w + (i,), i counted from 1."""
    words = [None] * forest.vertex_count
    for j, r in enumerate(forest.boundary):
        words[r] = (j + 1,)
    for v in range(forest.vertex_count):
        for i, c in enumerate(forest.children[v]):
            words[c] = words[v] + (i + 1,)
    return words


def contour_exploration(forest):
    """Vertex sequence beta(0..2|V|-p): depth-first contour of each tree in
    turn, stepping along a cycle edge between consecutive roots and closing
    back at rho_1."""
    beta = []
    for r in forest.boundary:
        stack = [("visit", r)]
        while stack:
            op, v = stack.pop()
            beta.append(v)
            if op == "visit":
                for c in reversed(forest.children[v]):
                    stack.append(("emit", v))
                    stack.append(("visit", c))
    beta.append(forest.boundary[0])
    return beta


def height_function(forest):
    """H(i) = |v_i| - tau(v_i) + 1 over the lexicographic order, with the
    artificial terminal value -p."""
    vals = [
        forest.generation[v] - forest.tree_index[v] + 1
        for v in range(forest.vertex_count)
    ]
    vals.append(-forest.p)
    return ProcessTrace(vals, forest.vertex_count)


def contour_function(forest):
    """C(i) = |beta(i)| - tau(beta(i)) + 1, terminal value -p."""
    beta = contour_exploration(forest)
    vals = [
        forest.generation[v] - forest.tree_index[v] + 1 for v in beta[:-1]
    ]
    vals.append(-forest.p)
    return ProcessTrace(vals, len(beta) - 1)


def cyclic_interval(c, cp, order):
    """Corners from c to cp inclusive along the cyclic contour order.

    order is the full contour cycle as a sequence of corners; the interval
    from a corner to itself is the singleton, not the whole cycle.
    """
    pos = {x: i for i, x in enumerate(order)}
    i, j = pos[c], pos[cp]
    if i <= j:
        return list(order[i : j + 1])
    return list(order[i:]) + list(order[: j + 1])


class ProcessTrace:
    """Integer-valued path with exact rational linear interpolation and an
    optional (time_scale, space_scale) rescaling."""

    __slots__ = ("values", "domain_length", "rescale")

    def __init__(self, values, domain_length, rescale=(Fraction(1), Fraction(1))):
        self.values = tuple(int(v) for v in values)
        if domain_length != len(self.values) - 1:
            raise ValueError("domain_length must equal len(values) - 1")
        self.domain_length = domain_length
        self.rescale = (Fraction(rescale[0]), Fraction(rescale[1]))

    def at(self, t):
        """Exact value at rational t in [0, domain_length]."""
        t = Fraction(t)
        if t < 0 or t > self.domain_length:
            raise ValueError(f"t={t} outside [0, {self.domain_length}]")
        i = int(t)
        if i == t:
            return Fraction(self.values[i])
        frac = t - i
        return self.values[i] + frac * (self.values[i + 1] - self.values[i])

    def rescaled_at(self, s):
        """space_scale * value at time_scale * s."""
        time_scale, space_scale = self.rescale
        return space_scale * self.at(time_scale * Fraction(s))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return (
            isinstance(other, ProcessTrace)
            and self.values == other.values
            and self.rescale == other.rescale
        )

    def to_csv(self, fileobj, rescaled=False):
        """Write (index, value) rows; with rescaled=True, (s, value) rows at
        the grid s = i / time_scale with value space_scale * v_i."""
        w = csv.writer(fileobj)
        time_scale, space_scale = self.rescale
        if not rescaled:
            w.writerow(["index", "value"])
            for i, v in enumerate(self.values):
                w.writerow([i, v])
        else:
            w.writerow(["s", "value"])
            for i, v in enumerate(self.values):
                s = Fraction(i) / time_scale
                w.writerow([float(s), float(space_scale * v)])
