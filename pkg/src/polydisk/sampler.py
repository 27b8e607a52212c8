"""Boltzmann samplers for triangulations of the p-gon.

Type III maps are sampled through the blossoming-forest encoding: bridge,
grafted trees, closure.  Type II maps are assembled from a type III core
with an independent 2-gon attachment on every edge; the 2-gon law itself
is recursive through the 3-gon family.  The inverse surgeries (simple_core,
two_connected_core) live here as well so the construction can be tested
edge for edge.

Determinism contract: every structural sampler consumes the generator's
uniform stream one logical draw at a time, in a documented order, so a
fixed (seed, stream) pair reproduces the same maps byte for byte.  The
*_sizes functions instead consume generators spawned from the one passed
in, which keeps their output independent of which sampling kernel backend
is installed.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels
from ._kernels._py import B_CDF, G_CDF, _decode_one, _stem_pair, bridge_steps
from .blossom import ArityMismatch, BlossomForest, InvalidBlossoming, closure
from .map_core import CombMap

NODE_CAP = int(os.environ.get("POLYDISK_NODE_CAP", 10**8))

# one forest can hit the node cap; whole attachment cascades get a separate
# allowance counted in 3-gon cores (branching number 1/2, so the defaults
# are astronomically safe)
CORE_BUDGET = 10**5
SIZES_CORE_BUDGET = 10**6

# a 2-gon attachment is the bare doubled edge with probability 8/9
Q_TRIVIAL = 8.0 / 9.0


class BudgetExceeded(RuntimeError):
    """A single forest needed more inner vertices than the node cap."""


class RecursionBudgetExceeded(BudgetExceeded):
    """An attachment cascade needed more 3-gon cores than its budget."""


class NotTypeII(ValueError):
    """Map outside the loopless (type II) family where one is required."""


def rng_stream(seed, stream=0):
    """Independent deterministic generator for (seed, stream)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def sample_G(rng):
    """Geometric offspring count, P[G=k] = (3/4)(1/4)^k.  One uniform."""
    return _decode_one(rng.random(), G_CDF, "G")


def sample_B(rng):
    """Size-biased offspring count, B ~ NegBin(3, 3/4).  One uniform."""
    return _decode_one(rng.random(), B_CDF, "B")


class Bridge:
    """Boundary bridge: 2p-3 steps of +-1 from b_0 = 0 down to -3, last
    step forced down.  Slot t (0-based contour corner) carries value b_t;
    a slot opens a new boundary vertex at t = 0 and after every down-step.
    """

    __slots__ = ("p", "steps", "values")

    def __init__(self, p, steps):
        p = int(p)
        if p < 3:
            raise ValueError(f"perimeter {p} < 3")
        steps = tuple(int(s) for s in steps)
        if len(steps) != 2 * p - 3:
            raise ValueError(f"{len(steps)} steps for perimeter {p}, need {2 * p - 3}")
        if any(s not in (-1, 1) for s in steps):
            raise ValueError("bridge steps must be +-1")
        if sum(steps) != -3:
            raise ValueError(f"bridge ends at {sum(steps)}, needs -3")
        if steps[-1] != -1:
            raise ValueError("bridge must end with a down-step")
        vals = [0]
        for s in steps:
            vals.append(vals[-1] + s)
        self.p = p
        self.steps = steps
        self.values = tuple(vals)

    @property
    def slot_count(self):
        return 2 * self.p - 3

    @property
    def vertex_start_slots(self):
        """First slot of each boundary vertex, clockwise from the root."""
        out = [0]
        for t in range(1, self.slot_count):
            if self.steps[t - 1] == -1:
                out.append(t)
        if len(out) != self.p:
            raise AssertionError("down-step bookkeeping off")
        return tuple(out)

    @property
    def stem_counts(self):
        """Up-run before each boundary vertex's closing down-step."""
        starts = self.vertex_start_slots
        ends = starts[1:] + (self.slot_count,)
        return tuple(e - s - 1 for s, e in zip(starts, ends))

    @property
    def boundary_labels(self):
        """Contour label of each boundary vertex (its first slot's value)."""
        return tuple(self.values[t] for t in self.vertex_start_slots)

    def __eq__(self, other):
        return (
            isinstance(other, Bridge)
            and self.p == other.p
            and self.steps == other.steps
        )

    def __hash__(self):
        return hash((self.p, self.steps))


def sample_bridge(p, rng):
    """Uniform bridge: the p-3 up-steps are placed among the first 2p-4
    positions by selection sampling, consuming exactly 2p-4 uniforms."""
    if p < 3:
        raise ValueError(f"perimeter {p} < 3")
    u = rng.random(2 * p - 4)
    return Bridge(p, bridge_steps(p, u))


def _grafted_tree(rng, budget):
    """One grafted subtree as a nested item list, depth-first with children
    drawn clockwise: per proper vertex one B uniform then one stem-pair
    uniform, matching the label kernel's stack order.  budget is a one-cell
    list counting remaining inner vertices."""
    if budget[0] <= 0:
        raise BudgetExceeded("forest hit the inner-vertex cap")
    budget[0] -= 1
    k = _decode_one(rng.random(), B_CDF, "B")
    a, b = _stem_pair(k, rng.random())
    root = [None] * (k + 2)
    stack = []
    for i in range(k + 1, -1, -1):
        if i != a and i != b:
            stack.append((root, i))
    while stack:
        items, i = stack.pop()
        if budget[0] <= 0:
            raise BudgetExceeded("forest hit the inner-vertex cap")
        budget[0] -= 1
        k = _decode_one(rng.random(), B_CDF, "B")
        a, b = _stem_pair(k, rng.random())
        sub = [None] * (k + 2)
        items[i] = sub
        for j in range(k + 1, -1, -1):
            if j != a and j != b:
                stack.append((sub, j))
    return root


def sample_blossom_tree(rng, node_cap=None):
    """One slot's tree: a root with G grafted subtrees and no stems,
    returned as the root's item list."""
    cell = [NODE_CAP if node_cap is None else node_cap]
    g = sample_G(rng)
    return [_grafted_tree(rng, cell) for _ in range(g)]


def assemble_forest(p, bridge, trees):
    """Hang one slot tree per bridge slot: boundary vertex j's item list is
    its slots' grafted subtrees with one stem between consecutive slots."""
    if bridge.p != p:
        raise ArityMismatch(f"bridge perimeter {bridge.p}, forest perimeter {p}")
    if len(trees) != 2 * p - 3:
        raise ArityMismatch(f"{len(trees)} slot trees, need {2 * p - 3}")
    starts = bridge.vertex_start_slots
    ends = starts[1:] + (2 * p - 3,)
    roots = []
    for t0, t1 in zip(starts, ends):
        items = []
        for t in range(t0, t1):
            if t > t0:
                items.append(None)
            tree = trees[t]
            if any(it is None for it in tree):
                raise InvalidBlossoming(f"slot tree {t} carries a root stem")
            items.extend(tree)
        roots.append(items)
    return BlossomForest(p, roots)


def sample_forest(p, rng, node_cap=None):
    """Free blossoming forest: bridge, then per slot one G uniform and that
    slot's subtrees depth-first.  The stream order is exactly the label
    kernel's, so the two agree draw for draw under one seed.  Raises
    BudgetExceeded past node_cap inner vertices."""
    cap = NODE_CAP if node_cap is None else node_cap
    bridge = sample_bridge(p, rng)
    cell = [cap]
    trees = []
    for _ in range(2 * p - 3):
        g = _decode_one(rng.random(), G_CDF, "G")
        trees.append([_grafted_tree(rng, cell) for _ in range(g)])
    return assemble_forest(p, bridge, trees)


def sample_bol3_marked(p, rng, node_cap=None):
    """Marked Boltzmann triangulation M*_p: closure of a free forest.
    Cap overruns retry, which conditions on at most node_cap inner
    vertices; at the default cap that mass is negligible."""
    while True:
        try:
            F = sample_forest(p, rng, node_cap=node_cap)
        except BudgetExceeded:
            continue
        m, _, _ = closure(F)
        return m


def unmark(m):
    """The same map with the marked face forgotten."""
    return CombMap(
        [list(r) for r in m.vertex_darts],
        m.root_dart,
        twin=list(m.twin),
        marked_face=None,
    )


def _acceptance_tau_max(p, u_acc, node_cap):
    # largest tau <= node_cap with u_acc (2 tau + p - 2) <= p - 2; same
    # float comparisons as the size kernel so the two laws are identical
    if u_acc * (2 * node_cap + p - 2) <= p - 2:
        return node_cap
    t = int((p - 2) * (1.0 / u_acc - 1.0) / 2.0)
    while t >= 0 and u_acc * (2 * t + p - 2) > p - 2:
        t -= 1
    while u_acc * (2 * (t + 1) + p - 2) <= p - 2:
        t += 1
    return t


def sample_bol3(p, rng, mode="rejection", node_cap=None):
    """Unmarked Boltzmann triangulation of the p-gon.

    rejection: unmark a marked sample with probability (p-2)/N, N the
    inner face count; the pre-drawn acceptance uniform turns into a vertex
    budget so doomed attempts abort early.  importance: one marked draw,
    returned as (map, 1/N); averaging f against the weights and
    normalizing gives unmarked expectations.
    """
    if mode not in ("rejection", "importance"):
        raise ValueError(f"unknown mode {mode!r}")
    cap = NODE_CAP if node_cap is None else node_cap
    if mode == "importance":
        while True:
            try:
                F = sample_forest(p, rng, node_cap=cap)
            except BudgetExceeded:
                continue
            m, _, _ = closure(F)
            n_faces = 2 * (F.proper_count - p) + p - 2
            return unmark(m), 1.0 / n_faces
    while True:
        u_acc = rng.random()
        tau_max = _acceptance_tau_max(p, u_acc, cap)
        try:
            F = sample_forest(p, rng, node_cap=tau_max)
        except BudgetExceeded:
            continue
        m, _, _ = closure(F)
        return unmark(m)


# ---------------------------------------------------------------------------
# edge surgery


def trivial_2gon():
    """The doubled edge; gluing it anywhere is a no-op."""
    return CombMap([[0, 2], [3, 1]], 0)


def is_trivial_2gon(m):
    return m.vertex_count == 2 and m.edge_count == 2


def _cycle_from(rot, d):
    i = rot.index(d)
    return rot[i:] + rot[:i]


def glue(host, d, attachment):
    """Paste a 2-gon attachment onto the host edge at dart d.

    The attachment's root edge is identified with d's edge and its other
    boundary edge becomes a fresh parallel copy; the interior lands on the
    left of d.  Host darts keep their ids, the copy takes the next two, the
    interior follows in attachment id order.
    """
    a = attachment
    if host.marked_face is not None:
        raise ValueError("gluing onto a marked map")
    if a.marked_face is not None:
        raise ValueError("gluing a marked attachment")
    if a.classify(2) != "II":
        raise NotTypeII("attachment is not a loopless 2-gon triangulation")
    if is_trivial_2gon(a):
        return host
    if host.face_of[host.twin[d]] == host.root_face:
        raise ValueError("gluing here would bury the root face")

    r = a.root_dart
    rbar = a.twin[r]
    s = a.sigma_inv[rbar]
    sbar = a.twin[s]
    D = host.dart_count
    lt, lh = D, D + 1
    amap = {r: d, rbar: host.twin[d], sbar: lt, s: lh}
    nid = D + 2
    for ad in range(a.dart_count):
        if ad not in amap:
            amap[ad] = nid
            nid += 1

    rho = a.origin[r]
    w = a.origin[s]
    rho_rot = _cycle_from(list(a.vertex_darts[rho]), r)
    w_rot = _cycle_from(list(a.vertex_darts[w]), s)
    if rho_rot[1] != sbar or w_rot[1] != rbar:
        raise AssertionError("attachment boundary rotations out of shape")
    i_rho = [amap[x] for x in rho_rot[2:]]
    i_w = [amap[x] for x in w_rot[2:]]

    rots = [list(rot) for rot in host.vertex_darts]
    tail = host.origin[d]
    head = host.origin[host.twin[d]]
    rt = rots[tail]
    rt[rt.index(d) : rt.index(d)] = [lt] + i_rho
    rh = rots[head]
    j = rh.index(host.twin[d])
    rh[j + 1 : j + 1] = i_w + [lh]
    for v in range(a.vertex_count):
        if v != rho and v != w:
            rots.append([amap[x] for x in a.vertex_darts[v]])

    twin = list(host.twin) + [0] * (a.dart_count - 2)
    twin[lt] = lh
    twin[lh] = lt
    for ad in range(a.dart_count):
        if ad not in (r, rbar, s, sbar):
            twin[amap[ad]] = amap[a.twin[ad]]
    return CombMap(rots, host.root_dart, twin=twin, marked_face=None)


def cut_root_edge(m):
    """Split the root edge with a parallel copy so the face right of the
    root dart becomes a degree-2 root face; the old root face survives as
    an inner face behind the copy."""
    if m.marked_face is not None:
        raise ValueError("cutting a marked map")
    rd = m.root_dart
    rt = m.twin[rd]
    D = m.dart_count
    lt, lh = D, D + 1
    rots = [list(r) for r in m.vertex_darts]
    tail_rot = rots[m.origin[rd]]
    tail_rot.insert(tail_rot.index(rd) + 1, lt)
    head_rot = rots[m.origin[rt]]
    head_rot.insert(head_rot.index(rt), lh)
    twin = list(m.twin) + [lh, lt]
    return CombMap(rots, rd, twin=twin, marked_face=None)


def _compact(m, drop, root_dart, twin=None):
    """Delete the darts in drop, renumbering the rest in id order.  Returns
    (map, old_ids) with old_ids[new] = old."""
    tw = m.twin if twin is None else twin
    keep = [d for d in range(m.dart_count) if d not in drop]
    nid = {old: i for i, old in enumerate(keep)}
    rots = []
    for rot in m.vertex_darts:
        nr = [nid[d] for d in rot if d not in drop]
        if nr:
            rots.append(nr)
    newtwin = [nid[tw[old]] for old in keep]
    return CombMap(rots, nid[root_dart], twin=newtwin), keep


def seal_root_edge(m):
    """Collapse a degree-2 root face onto its other edge, undoing
    cut_root_edge (dart ids included when the cut was the last surgery)."""
    rd = m.root_dart
    if m.face_degree(m.root_face) != 2:
        raise ValueError("root face is not a 2-gon")
    lh = m.sigma_inv[m.twin[rd]]
    lt = m.twin[lh]
    if m.sigma[rd] != lt:
        raise AssertionError("degree-2 root face out of shape")
    sealed, _ = _compact(m, {lt, lh}, rd)
    return sealed


def bf_edge_darts(m):
    """One dart per edge in breadth-first edge order.

    Vertices are discovered along rotations (the root vertex's rotation
    read from the root dart); edges sort by (discovery rank of earlier
    endpoint, rank of later endpoint, dart id), root edge first.  The dart
    points out of the earlier endpoint, flipped when the root face would
    sit on its left, so gluing at it never touches the root face.
    """
    pos = {m.root_vertex: 0}
    order = [m.root_vertex]
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        rot = m.vertex_darts[v]
        if v == m.root_vertex:
            rot = _cycle_from(list(rot), m.root_dart)
        for d in rot:
            w = m.origin[m.twin[d]]
            if w not in pos:
                pos[w] = len(order)
                order.append(w)
    out = []
    for d in range(m.dart_count):
        dd = m.twin[d]
        if dd < d:
            continue
        pu, pw = pos[m.origin[d]], pos[m.origin[dd]]
        g = d if pu <= pw else dd
        if m.face_of[m.twin[g]] == m.root_face:
            g = m.twin[g]
        out.append(((min(pu, pw), max(pu, pw), d), g))
    out.sort()
    return [g for _, g in out]


# ---------------------------------------------------------------------------
# type II samplers


def _sample_2gon(rng, node_cap, budget):
    """One attachment, depth-first: a trivial-or-not uniform, then on the
    1/9 branch a 3-gon core and recursively one attachment per core edge in
    breadth-first edge order, the whole thing re-rooted by cutting the root
    edge.  budget counts 3-gon cores across the cascade."""
    if rng.random() < Q_TRIVIAL:
        return trivial_2gon()
    if budget[0] <= 0:
        raise RecursionBudgetExceeded("attachment cascade hit its core budget")
    budget[0] -= 1
    core = sample_bol3(3, rng, node_cap=node_cap)
    m = core
    for d in bf_edge_darts(core):
        m = glue(m, d, _sample_2gon(rng, node_cap, budget))
    return cut_root_edge(m)


def sample_bol2_2gon(rng, node_cap=None, core_budget=None):
    """Boltzmann 2-gon triangulation: the doubled edge with probability
    8/9, otherwise a fully attached 3-gon core cut open at its root edge."""
    cap = NODE_CAP if node_cap is None else node_cap
    cell = [CORE_BUDGET if core_budget is None else core_budget]
    return _sample_2gon(rng, cap, cell)


def sample_bol2(p, rng, node_cap=None, core_budget=None):
    """Boltzmann type II triangulation of the p-gon, p >= 3: a type III
    core with an independent 2-gon attachment glued onto every edge in
    breadth-first edge order.  Each edge's cascade gets its own core
    budget."""
    if p < 3:
        raise ValueError(f"perimeter {p} < 3")
    cap = NODE_CAP if node_cap is None else node_cap
    per_edge = CORE_BUDGET if core_budget is None else core_budget
    core = sample_bol3(p, rng, node_cap=cap)
    m = core
    for d in bf_edge_darts(core):
        m = glue(m, d, _sample_2gon(rng, cap, [per_edge]))
    return m


# ---------------------------------------------------------------------------
# inverse surgeries


def _blocked_region(m, edge_darts):
    """Darts of the faces unreachable from the root face when crossing the
    given edges is forbidden."""
    blocked = set()
    for d in edge_darts:
        blocked.add(d)
        blocked.add(m.twin[d])
    seen = {m.root_face}
    stack = [m.root_face]
    while stack:
        f = stack.pop()
        for d in m.faces[f]:
            if d in blocked:
                continue
            g = m.face_of[m.twin[d]]
            if g not in seen:
                seen.add(g)
                stack.append(g)
    out = set()
    for f in range(m.face_count):
        if f not in seen:
            out.update(m.faces[f])
    return out


def _region_arc(m, v, after, before, region):
    """Rotation arc at v strictly between after and before, clockwise; the
    lens guarantee is that it consists of region darts."""
    rot = _cycle_from(list(m.vertex_darts[v]), after)
    arc = rot[1 : rot.index(before)]
    if any(x not in region for x in arc):
        raise AssertionError("attachment arc leaks out of its region")
    return arc


def _extract_attachment(m, region, g, copy):
    """Rebuild the 2-gon hanging at kept dart g (lens on its left): kept
    edge becomes the root edge 0/1, the copy edge 2/3, interior darts
    follow in id order, interior vertices keep their rotations."""
    gbar = m.twin[g]
    tail = m.origin[g]
    head = m.origin[gbar]
    ct = copy if m.origin[copy] == tail else m.twin[copy]
    ch = m.twin[ct]
    arc_t = _region_arc(m, tail, ct, g, region)
    arc_h = _region_arc(m, head, gbar, ch, region)
    interior = sorted(region - {gbar, ct})
    aid = {g: 0, gbar: 1, ch: 2, ct: 3}
    for x in interior:
        aid[x] = len(aid)
    rots = [
        [0, 3] + [aid[x] for x in arc_t],
        [2, 1] + [aid[x] for x in arc_h],
    ]
    interior_set = set(interior)
    for v in range(m.vertex_count):
        darts = m.vertex_darts[v]
        if darts and all(x in interior_set for x in darts):
            rots.append([aid[x] for x in darts])
    twin = [1, 0, 3, 2] + [0] * len(interior)
    for x in interior:
        twin[aid[x]] = aid[m.twin[x]]
    a = CombMap(rots, 0, twin=twin)
    if a.classify(2) != "II":
        raise AssertionError("extracted attachment is not a 2-gon triangulation")
    return a


def _parallel_classes(m):
    by_pair = {}
    for d in range(m.dart_count):
        dd = m.twin[d]
        if dd < d:
            continue
        u, v = m.origin[d], m.origin[dd]
        key = (u, v) if u <= v else (v, u)
        by_pair.setdefault(key, []).append(d)
    return {k: ds for k, ds in by_pair.items() if len(ds) > 1}


def _core_split(m, classes, regions, kept_of):
    """Build the core for a kept-edge choice per top class.  kept_of maps a
    class key to its kept edge's lower dart; returns (core, old_ids)."""
    drop = set()
    for key, kept in kept_of.items():
        region = regions[key]
        drop |= region
        drop.discard(kept)
        drop.discard(m.twin[kept])
        for d in classes[key]:
            if d != kept and (d in region) != (m.twin[d] in region):
                drop.add(d)
                drop.add(m.twin[d])
    return _compact(m, drop, m.root_dart)


def simple_core(m):
    """Split a loopless triangulation into its multi-edge-free core and one
    2-gon attachment per core edge, listed in the core's breadth-first edge
    order (trivial entries for bare edges).  Gluing them back at
    bf_edge_darts(core) rebuilds the map."""
    p = m.perimeter
    if p < 3:
        raise ValueError("core decomposition needs perimeter >= 3")
    if m.marked_face is not None:
        raise ValueError("unmark the map first")
    kind = m.classify(p)
    if kind not in ("II", "III"):
        raise NotTypeII(f"classify gave {kind!r}, need a loopless triangulation")
    classes = _parallel_classes(m)
    if not classes:
        return m, [trivial_2gon() for _ in range(m.edge_count)]

    regions = {k: _blocked_region(m, ds) for k, ds in classes.items()}
    top = [
        k
        for k in classes
        if not any(classes[k][0] in regions[q] for q in classes if q != k)
    ]
    outer = {}
    for k in top:
        region = regions[k]
        pair = [d for d in classes[k] if (d in region) != (m.twin[d] in region)]
        if len(pair) != 2:
            raise AssertionError("parallel class without a two-edge outer boundary")
        outer[k] = pair

    # the kept edge is the outer edge whose glue-oriented dart has the lens
    # on its left; the glue orientation needs the core's BF ranks, which do
    # not depend on the choice, so a provisional core supplies them (seeded
    # so the root dart always survives)
    def _prov_kept(pair):
        for e in pair:
            if e == m.root_dart or m.twin[e] == m.root_dart:
                return e
        return min(pair)

    kept_of = {k: _prov_kept(outer[k]) for k in top}
    core0, old0 = _core_split(m, classes, regions, kept_of)
    glue_tail = {}
    for g in bf_edge_darts(core0):
        gm = old0[g]
        key = min(gm, m.twin[gm])
        glue_tail[key] = m.origin[gm]
    for k in top:
        region = regions[k]
        e1, e2 = outer[k]
        kept_min = kept_of[k]
        tail_v = glue_tail[kept_min]
        pick = None
        for e in (e1, e2):
            for d in (e, m.twin[e]):
                if m.twin[d] in region and m.origin[d] == tail_v:
                    pick = e
        if pick is None:
            raise AssertionError("no outer edge carries the lens on its left")
        kept_of[k] = pick

    core, old_ids = _core_split(m, classes, regions, kept_of)
    kept_lookup = {}
    for k in top:
        kept = kept_of[k]
        kept_lookup[min(kept, m.twin[kept])] = k

    atts = []
    for g in bf_edge_darts(core):
        gm = old_ids[g]
        key = min(gm, m.twin[gm])
        k = kept_lookup.get(key)
        if k is None:
            atts.append(trivial_2gon())
            continue
        region = regions[k]
        e1, e2 = outer[k]
        copy = e2 if kept_of[k] == e1 else e1
        atts.append(_extract_attachment(m, region, gm, copy))
    return core, atts


def two_connected_core(m):
    """Strip self-loops: each maximal loop goes together with its enclosed
    region and the triangle leaning on it from outside, whose other two
    edges merge into one.  Loops are removed innermost-outward one at a
    time; a loop-free map returns unchanged."""
    p = m.perimeter
    if m.classify(p) == "invalid":
        raise ValueError("not a triangulation of the p-gon")
    if m.marked_face is not None:
        raise ValueError("unmark the map first")
    while True:
        loops = [
            d
            for d in range(m.dart_count)
            if m.twin[d] > d and m.origin[d] == m.origin[m.twin[d]]
        ]
        if not loops:
            return m
        regions = {d: _blocked_region(m, [d]) for d in loops}
        maximal = [
            d for d in loops if not any(d in regions[f] for f in loops if f != d)
        ]
        e = min(maximal)
        region = regions[e]
        d_out = e if e not in region else m.twin[e]
        t_face = m.faces[m.face_of[d_out]]
        if len(t_face) != 3:
            raise AssertionError("loop leans on a non-triangle face")
        walk = _cycle_from(list(t_face), d_out)
        x, y = walk[1], walk[2]
        ox, oy = m.twin[x], m.twin[y]
        tw = list(m.twin)
        tw[ox] = oy
        tw[oy] = ox
        drop = set(region)
        drop.update((e, m.twin[e], x, y))
        if m.root_dart in drop:
            raise AssertionError("loop surgery reached the root dart")
        m, _ = _compact(m, drop, m.root_dart, twin=tw)


# ---------------------------------------------------------------------------
# size-only sampling (spawned generators, backend independent)


def _attachment_cascade(V, E, cores, pending, gen, node_cap, budget):
    """Resolve outstanding 2-gon draws level by level: pending holds one
    sample index per draw; a nontrivial draw adds its core's sizes to that
    sample and queues one draw per core edge."""
    while pending.size:
        u = gen.spawn(1)[0].random(pending.size)
        live = pending[u >= Q_TRIVIAL]
        if live.size == 0:
            return
        n, _, _ = _kernels.sample_bol3_sizes(3, live.size, gen.spawn(1)[0], node_cap)
        np.add.at(V, live, n - 2)
        np.add.at(E, live, 3 * n - 6)
        np.add.at(cores, live, 1)
        if (cores > budget).any():
            raise RecursionBudgetExceeded("attachment cascade hit its core budget")
        pending = np.repeat(live, 3 * n - 6)


def sample_bol2_2gon_sizes(count, gen, node_cap=None, core_budget=None):
    """Vertex and edge counts of count independent 2-gon draws, as int64
    arrays.  Telescoping over the cascade: V = 2 plus (n_c - 2) per core,
    E = 2 for the doubled edge and otherwise 1 plus each core's 3n_c - 6."""
    cap = NODE_CAP if node_cap is None else node_cap
    budget = SIZES_CORE_BUDGET if core_budget is None else core_budget
    V = np.full(count, 2, dtype=np.int64)
    E = np.full(count, 2, dtype=np.int64)
    cores = np.zeros(count, dtype=np.int64)
    u = gen.spawn(1)[0].random(count)
    live = np.nonzero(u >= Q_TRIVIAL)[0]
    if live.size:
        E[live] -= 1
        n, _, _ = _kernels.sample_bol3_sizes(3, live.size, gen.spawn(1)[0], cap)
        V[live] += n - 2
        E[live] += 3 * n - 6
        cores[live] = 1
        _attachment_cascade(V, E, cores, np.repeat(live, 3 * n - 6), gen, cap, budget)
    return V, E


def sample_bol2_sizes(p, count, gen, node_cap=None, core_budget=None):
    """Sizes of count type II draws at perimeter p without building maps:
    returns (V, E, core_V, core_E) int64 arrays.  Cascades run one sample
    at a time in bounded slices so memory stays flat even for huge cores."""
    if p < 3:
        raise ValueError(f"perimeter {p} < 3")
    cap = NODE_CAP if node_cap is None else node_cap
    budget = SIZES_CORE_BUDGET if core_budget is None else core_budget
    nS, _, _ = _kernels.sample_bol3_sizes(p, count, gen.spawn(1)[0], cap)
    nS = nS.astype(np.int64)
    ES = 3 * nS - p - 3
    V = nS.copy()
    E = ES.copy()
    cores = np.zeros(count, dtype=np.int64)
    slice_cap = 20_000_000
    for i in range(count):
        left = int(ES[i])
        while left > 0:
            k = min(left, slice_cap)
            _attachment_cascade(
                V, E, cores, np.full(k, i, dtype=np.int64), gen, cap, budget
            )
            left -= k
    return V, E, nS, ES
