"""Pure-Python (numpy) implementation of the sampling kernels.

Determinism contract shared with the compiled backend: every logical draw
reads exactly one raw double from the generator's stream, in call order.
This backend buffers the raw stream in blocks (UniformTape) but serves it
strictly sequentially, so outputs are bit-identical to the compiled
backend's one-at-a-time consumption.  Only the generator's *final state*
may differ (the tape over-draws to its block boundary), which is why
callers hand each kernel call its own generator.
"""

from __future__ import annotations

import numpy as np

from ._tables import B_CDF, G_CDF, extend_fallback

BACKEND = "python"

_BLOCK = 1 << 16


class UniformTape:
    """Sequential view of a Generator's uniform stream with block refills."""

    def __init__(self, gen, block=_BLOCK):
        self._gen = gen
        self._block = block
        self._buf = np.empty(0)
        self._pos = 0

    def _refill(self, need):
        rest = self._buf[self._pos:]
        draw = max(self._block, need - len(rest))
        self._buf = np.concatenate([rest, self._gen.random(draw)])
        self._pos = 0

    def take(self, k):
        if len(self._buf) - self._pos < k:
            self._refill(k)
        out = self._buf[self._pos : self._pos + k]
        self._pos += k
        return out

    def one(self):
        if self._pos >= len(self._buf):
            self._refill(1)
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def view(self):
        """Remaining buffered values (refilled if empty), not yet consumed."""
        if self._pos >= len(self._buf):
            self._refill(1)
        return self._buf[self._pos:]

    def consume(self, k):
        self._pos += k


def _decode(u, cdf, law):
    idx = np.searchsorted(cdf, u, side="right")
    if idx.ndim and (idx == len(cdf)).any():
        idx = idx.copy()
        for i in np.nonzero(idx == len(cdf))[0]:
            idx[i] = extend_fallback(float(u[i]), cdf, law)
    return idx


def _decode_one(u, cdf, law):
    k = int(np.searchsorted(cdf, u, side="right"))
    if k == len(cdf):
        k = extend_fallback(float(u), cdf, law)
    return k


def bridge_steps(p, u):
    """The +-1 steps of the boundary bridge from 2p-4 uniforms.

    Uniform over the step tuples summing to -3 whose last step is down
    (equivalently: stem counts are iid Geom(1/2) conditioned to sum p-3):
    the p-3 up-steps are placed by selection sampling among the first
    2p-4 positions and the final step is forced down.
    """
    n = 2 * p - 4
    rem_up = p - 3
    steps = np.empty(n + 1, dtype=np.int64)
    for t in range(n):
        if u[t] * (n - t) < rem_up:
            steps[t] = 1
            rem_up -= 1
        else:
            steps[t] = -1
    steps[n] = -1
    return steps


def _walk(tape, target, cap):
    """Steps of the B-1 walk until first passage to target (< 0) or until
    cap steps have been consumed.  Returns (steps, hit)."""
    t = 0
    s = 0
    while True:
        left = cap - t
        if left <= 0:
            return t, False
        v = tape.view()
        b = _decode(v, B_CDF, "B")
        cs = s + np.cumsum(b - 1, dtype=np.int64)
        hits = np.nonzero(cs <= target)[0]
        if hits.size and hits[0] < left:
            j = int(hits[0])
            tape.consume(j + 1)
            return t + j + 1, True
        if len(v) >= left:
            tape.consume(left)
            return cap, False
        tape.consume(len(v))
        t += len(v)
        s = int(cs[-1])


def sample_forest_sizes(p, count, gen, node_cap):
    """Inner-vertex counts tau of count independent forests; capped[i] marks
    samples stopped at node_cap steps (tau is then node_cap, a lower bound)."""
    tape = UniformTape(gen)
    tau = np.empty(count, dtype=np.int64)
    capped = np.zeros(count, dtype=bool)
    for i in range(count):
        g = _decode(tape.take(2 * p - 3), G_CDF, "G")
        y = int(g.sum())
        if y == 0:
            tau[i] = 0
            continue
        t, hit = _walk(tape, -y, node_cap)
        tau[i] = t
        capped[i] = not hit
    return tau, capped


def sample_bol3_sizes(p, count, gen, node_cap):
    """Sizes of count accepted rejection samples: arrays (n, N, attempts)
    with n total vertices, N inner faces.  Acceptance with probability
    (p-2)/N; the walk aborts as soon as the running face count exceeds the
    acceptance budget implied by the pre-drawn uniform."""
    tape = UniformTape(gen)
    n_out = np.empty(count, dtype=np.int64)
    f_out = np.empty(count, dtype=np.int64)
    att_out = np.empty(count, dtype=np.int64)
    for i in range(count):
        attempts = 0
        while True:
            attempts += 1
            u_acc = tape.one()
            # largest tau <= node_cap with u_acc * (2 tau + p - 2) <= p - 2,
            # the exact comparison later used for acceptance
            if u_acc * (2 * node_cap + p - 2) <= p - 2:
                tau_max = node_cap
            else:
                t = int((p - 2) * (1.0 / u_acc - 1.0) / 2.0)
                while t >= 0 and u_acc * (2 * t + p - 2) > p - 2:
                    t -= 1
                while u_acc * (2 * (t + 1) + p - 2) <= p - 2:
                    t += 1
                tau_max = t
            g = _decode(tape.take(2 * p - 3), G_CDF, "G")
            y = int(g.sum())
            if y == 0:
                tau = 0
                hit = True
            else:
                tau, hit = _walk(tape, -y, tau_max)
            if hit:
                n_out[i] = p + tau
                f_out[i] = 2 * tau + p - 2
                att_out[i] = attempts
                break
    return n_out, f_out, att_out


def _stem_pair(k, u):
    """Uniform 2-subset {a < b} of the k+2 item positions, by lex unranking
    of r = floor(u * C(k+2, 2))."""
    total = (k + 1) * (k + 2) // 2
    r = int(u * total)
    if r >= total:
        r = total - 1
    a = 0
    avail = k + 1
    while r >= avail:
        r -= avail
        avail -= 1
        a += 1
    return a, a + 1 + r


def child_displacements(k, a, b):
    """D value for each of the k children given stem item positions a < b."""
    out = np.empty(k, dtype=np.int64)
    for j in range(k):
        q = j
        if a <= q:
            q += 1
        if b <= q:
            q += 1
        out[j] = (1 if a < q else 0) + (1 if b < q else 0) - 1
    return out


def sample_label_at(p, index, count, gen):
    """Label of the index-th vertex (0-based, lexicographic order) of count
    independent forests.  Returns (value, alive); alive[i] is False when the
    forest has at most index proper vertices, and value[i] is then 0."""
    tape = UniformTape(gen)
    value = np.zeros(count, dtype=np.int64)
    alive = np.zeros(count, dtype=bool)
    for i in range(count):
        steps = bridge_steps(p, tape.take(2 * p - 4))
        b = np.concatenate([[0], np.cumsum(steps)])
        v, ok = _label_walk(p, index, tape, b)
        value[i] = v
        alive[i] = ok
    return value, alive


def _label_walk(p, index, tape, b):
    # slot i (1-based, contour order from the root corner) carries label
    # b[i-1]; the first slot of each boundary vertex gives its X value
    c = 0
    stack = []  # labels of pending vertices, pushed in reverse lex order
    for t in range(len(b) - 1):
        at_vertex_start = t == 0 or b[t] - b[t - 1] == -1
        if at_vertex_start:
            # a boundary vertex occupies the next lex position
            if c == index:
                return int(b[t]), True
            c += 1
        # slot with label b[t]: one grafted tree
        g = _decode_one(tape.one(), G_CDF, "G")
        if g:
            stack.extend([int(b[t]) - 1] * g)
            c, done, lab = _dfs(index, c, tape, stack)
            if done:
                return lab, True
    return 0, False


def _dfs(index, c, tape, stack):
    while stack:
        x = stack.pop()
        if c == index:
            return c, True, x
        c += 1
        k = _decode_one(tape.one(), B_CDF, "B")
        u = tape.one()
        a, bb = _stem_pair(k, u)
        if k:
            d = child_displacements(k, a, bb)
            for j in range(k - 1, -1, -1):
                stack.append(x + int(d[j]))
    return c, False, 0
