"""Shared builders and oracles for the test suite."""

from collections import deque
from itertools import combinations, product

from polydisk import build_map
from polydisk.forest import CyclicForest, PlaneTree


def compositions(n, parts):
    """Ordered tuples of `parts` positive integers summing to n."""
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def all_trees(n):
    """All plane trees with n vertices (Catalan(n-1) of them)."""
    if n == 1:
        yield PlaneTree()
        return
    for k in range(1, n):
        for sizes in compositions(n - 1, k):
            pools = [list(all_trees(s)) for s in sizes]
            for kids in product(*pools):
                yield PlaneTree(kids)


def all_forests(p, total):
    """All cyclic forests of perimeter p with `total` vertices."""
    for sizes in compositions(total, p):
        pools = [list(all_trees(s)) for s in sizes]
        for trees in product(*pools):
            yield CyclicForest(p, trees)


def decode_height(values):
    """Inverse of the height function: rebuild the forest from its height
    sequence (terminal -p included).  Test oracle only."""
    p = -values[-1]
    trees = []
    tau = 0
    path = []
    for h in values[:-1]:
        d = h + tau - 1
        if tau == 0 or d < 0:
            tau += 1
            assert h == 1 - tau, "tree roots must step down by one"
            node = []
            trees.append(node)
            path = [node]
        else:
            assert 1 <= d <= len(path), "height may rise by at most one"
            path = path[:d]
            node = []
            path[d - 1].append(node)
            path.append(node)
    assert len(trees) == p
    return CyclicForest(p, trees)


def polygon(p):
    """Bare p-gon: p boundary vertices, p edges, two faces."""
    vd = [[2 * ((i - 1) % p) + 1, 2 * i] for i in range(p)]
    return build_map(vd, 0)


def centered_triangle():
    """Triangle with one inner vertex joined to all three corners."""
    vd = [[5, 6, 0], [1, 8, 2], [3, 10, 4], [7, 11, 9]]
    return build_map(vd, 0)


def double_edge():
    """Two vertices joined by two parallel edges (the p=2 map)."""
    return build_map([[3, 0], [1, 2]], 0)


def canonical_key(m):
    """Isomorphism invariant for rooted maps with a possible marked face.

    Darts are renumbered by BFS first-visit order from the root dart,
    exploring twin then rotation; the renumbered twin and rotation tables
    identify the map up to root-preserving isomorphism.
    """
    n = m.dart_count
    order = {m.root_dart: 0}
    queue = deque([m.root_dart])
    seq = [m.root_dart]
    sigma = {}
    for v, rot in enumerate(m.vertex_darts):
        for i, d in enumerate(rot):
            sigma[d] = rot[(i + 1) % len(rot)]
    while queue:
        d = queue.popleft()
        for nxt in (m.twin[d], sigma[d]):
            if nxt not in order:
                order[nxt] = len(order)
                seq.append(nxt)
                queue.append(nxt)
    assert len(order) == n
    twin_c = tuple(order[m.twin[d]] for d in seq)
    sigma_c = tuple(order[sigma[d]] for d in seq)
    if m.marked_face is None:
        marked_c = None
    else:
        marked_c = min(order[d] for d in m.faces[m.marked_face])
    return twin_c, sigma_c, marked_c


def weak_compositions(n, parts):
    """Ordered tuples of `parts` nonnegative integers summing to n."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in weak_compositions(n - first, parts - 1):
            yield (first,) + rest


def _place_stems(kids, positions):
    total = len(kids) + len(positions)
    spots = set(positions)
    out = []
    ki = 0
    for i in range(total):
        if i in spots:
            out.append(None)
        else:
            out.append(kids[ki])
            ki += 1
    return tuple(out)


_SUBTREE_CACHE = {}


def _subtree_items(n):
    """Item lists for one inner vertex whose subtree holds n proper
    vertices: two stems among the child slots."""
    if n in _SUBTREE_CACHE:
        return _SUBTREE_CACHE[n]
    out = []
    if n == 1:
        out.append((None, None))
    else:
        for k in range(1, n):
            for sizes in compositions(n - 1, k):
                pools = [_subtree_items(s) for s in sizes]
                for kids in product(*pools):
                    for pos in combinations(range(k + 2), 2):
                        out.append(_place_stems(kids, pos))
    _SUBTREE_CACHE[n] = out
    return out


def _root_child_lists(tj):
    out = [()] if tj == 0 else []
    for k in range(1, tj + 1):
        for sizes in compositions(tj, k):
            pools = [_subtree_items(s) for s in sizes]
            out.extend(product(*pools))
    return out


def all_blossom_forests(p, tau):
    """All blossoming forests of perimeter p with tau inner vertices, in
    lexicographic order over shapes then stem placements."""
    from polydisk.blossom import BlossomForest

    for tsizes in weak_compositions(tau, p):
        pools = [_root_child_lists(tj) for tj in tsizes]
        for kids_tuple in product(*pools):
            for scomp in weak_compositions(p - 3, p):
                placed = []
                for kids, s in zip(kids_tuple, scomp):
                    placed.append([
                        _place_stems(kids, pos)
                        for pos in combinations(range(len(kids) + s), s)
                    ])
                for trees in product(*placed):
                    yield BlossomForest(p, list(trees))


def random_blossom_forest(p, tau, rng):
    """One random blossoming forest; coverage generator, not uniform."""
    from polydisk.blossom import BlossomForest

    def rnd_sizes(total, parts):
        cuts = sorted(rng.sample(range(total + parts - 1), parts - 1)) if parts > 1 else []
        sizes = []
        prev = -1
        for c in cuts + [total + parts - 1]:
            sizes.append(c - prev - 1)
            prev = c
        return sizes

    def rnd_subtree(n):
        if n == 1:
            kids = []
        else:
            k = rng.randint(1, n - 1)
            sizes = [s + 1 for s in rnd_sizes(n - 1 - k, k)]
            kids = [rnd_subtree(s) for s in sizes]
        pos = sorted(rng.sample(range(len(kids) + 2), 2))
        return _place_stems(kids, pos)

    tree_sizes = rnd_sizes(tau, p)
    boundary_stems = rnd_sizes(p - 3, p)
    trees = []
    for tj, s in zip(tree_sizes, boundary_stems):
        if tj == 0:
            kids = []
        else:
            k = rng.randint(1, tj)
            sizes = [x + 1 for x in rnd_sizes(tj - k, k)]
            kids = [rnd_subtree(x) for x in sizes]
        pos = sorted(rng.sample(range(len(kids) + s), s))
        trees.append(_place_stems(kids, pos))
    return BlossomForest(p, trees)


def local_closure(F, rng=None):
    """Close a blossoming forest by repeated local steps: an attached stem
    whose next two contour sides are both proper closes into a triangle,
    its blossom dart landing in the corner past the second side.  The
    result is order-free; this is the test oracle for the labeled closure.
    """
    from polydisk.blossom import ClosureStuck

    fm = F._forest_map()
    sigma = list(fm.sigma)
    attached = {
        e for e in range(fm.dart_count // 2) if fm.edge_kind[e] == "stem"
    }

    def try_step(e):
        S = 2 * e
        s1 = sigma[S]
        if s1 // 2 in attached:
            return False
        s2 = sigma[s1 ^ 1]
        if s2 // 2 in attached:
            return False
        A = s2 ^ 1
        b = S + 1
        sigma[b] = sigma[A]
        sigma[A] = b
        return True

    while attached:
        order = sorted(attached)
        if rng is not None:
            rng.shuffle(order)
        done = None
        for e in order:
            if try_step(e):
                done = e
                break
        if done is None:
            raise ClosureStuck("no local step applies")
        attached.remove(done)
    vertex_darts = []
    for v in range(fm.n):
        d0 = fm.rot[v][0]
        cyc = [d0]
        d = sigma[d0]
        while d != d0:
            cyc.append(d)
            d = sigma[d]
        vertex_darts.append(cyc)
    return build_map(vertex_darts, 0)
