# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Mirror of _py draw for draw: one raw double per logical draw, consumed
directly from the generator's BitGenerator, so outputs are bit-identical
to the numpy backend.  The BitGenerator lock is not taken; callers hand
each call its own generator.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdlib cimport free, malloc, realloc
from numpy.random cimport bitgen_t

from ._tables import B_CDF, G_CDF, extend_fallback

BACKEND = "cython"

cdef double[::1] _G_TAB = np.ascontiguousarray(G_CDF)
cdef double[::1] _B_TAB = np.ascontiguousarray(B_CDF)
cdef Py_ssize_t _NG = _G_TAB.shape[0]
cdef Py_ssize_t _NB = _B_TAB.shape[0]

cdef const char *_CAPSULE = b"BitGenerator"


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, _CAPSULE):
        raise TypeError("expected a numpy Generator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, _CAPSULE)


cdef inline long long _dec_g(bitgen_t *bg):
    cdef double u = bg.next_double(bg.state)
    cdef Py_ssize_t k = 0
    while k < _NG and u >= _G_TAB[k]:
        k += 1
    if k == _NG:
        k = <Py_ssize_t> extend_fallback(u, G_CDF, "G")
    return k


cdef inline long long _dec_b(bitgen_t *bg):
    cdef double u = bg.next_double(bg.state)
    cdef Py_ssize_t k = 0
    while k < _NB and u >= _B_TAB[k]:
        k += 1
    if k == _NB:
        k = <Py_ssize_t> extend_fallback(u, B_CDF, "B")
    return k


cdef long long _walk(bitgen_t *bg, long long target, long long cap,
                     bint *hit):
    # first passage of the B-1 walk to target (< 0), or cap draws consumed
    cdef long long t = 0, s = 0
    while t < cap:
        s += _dec_b(bg) - 1
        t += 1
        if s <= target:
            hit[0] = True
            return t
    hit[0] = False
    return cap


def sample_forest_sizes(p, count, gen, node_cap):
    cdef bitgen_t *bg = _bitgen(gen)
    cdef long long cp = p, cc = count, cap = node_cap
    cdef long long i, j, y, t
    cdef bint hit
    tau_arr = np.empty(count, dtype=np.int64)
    cap_arr = np.zeros(count, dtype=bool)
    cdef long long[::1] tau = tau_arr
    cdef char[::1] capped = cap_arr.view(np.int8)
    for i in range(cc):
        y = 0
        for j in range(2 * cp - 3):
            y += _dec_g(bg)
        if y == 0:
            tau[i] = 0
            continue
        t = _walk(bg, -y, cap, &hit)
        tau[i] = t
        capped[i] = not hit
    return tau_arr, cap_arr


def sample_bol3_sizes(p, count, gen, node_cap):
    cdef bitgen_t *bg = _bitgen(gen)
    cdef long long cp = p, cc = count, cap = node_cap
    cdef long long i, j, y, t, tau, tau_max, attempts
    cdef double u_acc
    cdef bint hit
    n_arr = np.empty(count, dtype=np.int64)
    f_arr = np.empty(count, dtype=np.int64)
    a_arr = np.empty(count, dtype=np.int64)
    cdef long long[::1] n_out = n_arr
    cdef long long[::1] f_out = f_arr
    cdef long long[::1] att = a_arr
    for i in range(cc):
        attempts = 0
        while True:
            attempts += 1
            u_acc = bg.next_double(bg.state)
            if u_acc * (2 * cap + cp - 2) <= cp - 2:
                tau_max = cap
            else:
                t = <long long> ((cp - 2) * (1.0 / u_acc - 1.0) / 2.0)
                while t >= 0 and u_acc * (2 * t + cp - 2) > cp - 2:
                    t -= 1
                while u_acc * (2 * (t + 1) + cp - 2) <= cp - 2:
                    t += 1
                tau_max = t
            y = 0
            for j in range(2 * cp - 3):
                y += _dec_g(bg)
            if y == 0:
                tau = 0
                hit = True
            else:
                tau = _walk(bg, -y, tau_max, &hit)
            if hit:
                n_out[i] = cp + tau
                f_out[i] = 2 * tau + cp - 2
                att[i] = attempts
                break
    return n_arr, f_arr, a_arr


cdef struct Stack:
    long long *buf
    Py_ssize_t size
    Py_ssize_t top


cdef int _push(Stack *st, long long v) except -1:
    cdef long long *nb
    if st.top == st.size:
        st.size *= 2
        nb = <long long *> realloc(st.buf, st.size * sizeof(long long))
        if nb == NULL:
            raise MemoryError()
        st.buf = nb
    st.buf[st.top] = v
    st.top += 1
    return 0


def sample_label_at(p, index, count, gen):
    cdef bitgen_t *bg = _bitgen(gen)
    cdef long long cp = p, cc = count, idx = index
    cdef long long i, t, c, x, g, k, a, b, q, d, j, total, r
    cdef long long rem_up, nsteps, bt
    cdef double u
    cdef bint found
    val_arr = np.zeros(count, dtype=np.int64)
    alive_arr = np.zeros(count, dtype=bool)
    cdef long long[::1] value = val_arr
    cdef char[::1] alive = alive_arr.view(np.int8)
    nsteps = 2 * cp - 4
    cdef long long *steps = <long long *> malloc((nsteps + 1) * sizeof(long long))
    if steps == NULL:
        raise MemoryError()
    cdef Stack st
    st.size = 1024
    st.top = 0
    st.buf = <long long *> malloc(st.size * sizeof(long long))
    if st.buf == NULL:
        free(steps)
        raise MemoryError()
    try:
        for i in range(cc):
            # bridge first (the full 2p-4 uniforms, as in the reference
            # backend), then slot and vertex draws until idx is reached
            rem_up = cp - 3
            for t in range(nsteps):
                u = bg.next_double(bg.state)
                if u * (nsteps - t) < rem_up:
                    steps[t] = 1
                    rem_up -= 1
                else:
                    steps[t] = -1
            steps[nsteps] = -1
            c = 0
            found = False
            bt = 0  # slot label b[t], updated by one step per slot
            st.top = 0
            for t in range(nsteps + 1):
                if t == 0 or steps[t - 1] == -1:
                    # a boundary vertex occupies the next lex position
                    if c == idx:
                        value[i] = bt
                        alive[i] = True
                        found = True
                        break
                    c += 1
                g = _dec_g(bg)
                for j in range(g):
                    _push(&st, bt - 1)
                while st.top:
                    st.top -= 1
                    x = st.buf[st.top]
                    if c == idx:
                        value[i] = x
                        alive[i] = True
                        found = True
                        break
                    c += 1
                    k = _dec_b(bg)
                    u = bg.next_double(bg.state)
                    total = (k + 1) * (k + 2) // 2
                    r = <long long> (u * total)
                    if r >= total:
                        r = total - 1
                    a = 0
                    q = k + 1
                    while r >= q:
                        r -= q
                        q -= 1
                        a += 1
                    b = a + 1 + r
                    for j in range(k - 1, -1, -1):
                        q = j
                        if a <= q:
                            q += 1
                        if b <= q:
                            q += 1
                        d = (1 if a < q else 0) + (1 if b < q else 0) - 1
                        _push(&st, x + d)
                if found:
                    break
                bt += steps[t]
    finally:
        free(st.buf)
        free(steps)
    return val_arr, alive_arr
