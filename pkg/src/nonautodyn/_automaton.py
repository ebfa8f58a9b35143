"""Compiled suffix-automaton kernels backing the cylinder coding trees.

The automaton of a long binary text gives, for every factor, its set of
one-symbol right extensions.  States are reached by reading words from the
root, so the node of the coding tree for word ``w`` is the state reached by
``w`` and its children are the defined transitions.
"""

import numba
import numpy as np

OK = 0
NEED_MORE = 1
INADMISSIBLE = 2
DEPTH_EXCEEDED = 3


@numba.njit(cache=True)
def build(text):
    n = text.shape[0]
    cap = 2 * n + 2
    nxt = np.full((cap, 2), -1, np.int32)
    link = np.full(cap, -1, np.int32)
    length = np.zeros(cap, np.int32)
    endpos = np.zeros(cap, np.int32)
    size = 1
    last = 0
    for i in range(n):
        c = text[i]
        cur = size
        size += 1
        length[cur] = length[last] + 1
        endpos[cur] = i
        p = last
        while p != -1 and nxt[p, c] == -1:
            nxt[p, c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = nxt[p, c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                cl = size
                size += 1
                nxt[cl, 0] = nxt[q, 0]
                nxt[cl, 1] = nxt[q, 1]
                length[cl] = length[p] + 1
                link[cl] = link[q]
                endpos[cl] = endpos[q]
                while p != -1 and nxt[p, c] == q:
                    nxt[p, c] = cl
                    p = link[p]
                link[q] = cl
                link[cur] = cl
        last = cur
    return nxt[:size].copy(), link[:size].copy(), length[:size].copy(), endpos[:size].copy()


@numba.njit(cache=True)
def factor_counts(link, length, maxn):
    """Number of distinct factors of each length 0..maxn."""
    diff = np.zeros(maxn + 2, np.int64)
    for s in range(1, link.shape[0]):
        lo = length[link[s]] + 1
        hi = length[s]
        if lo > maxn:
            continue
        if hi > maxn:
            hi = maxn
        diff[lo] += 1
        diff[hi + 1] -= 1
    out = np.zeros(maxn + 1, np.int64)
    acc = 0
    for n in range(maxn + 1):
        acc += diff[n]
        out[n] = acc
    out[0] = 1
    return out


@numba.njit(cache=True)
def encode_walk(nxt, word, start, stop, nbits, limit, out):
    """Read ``word[start:stop]`` from the root, emitting a bit at every split.

    Returns (bits emitted, symbols consumed, status).  Nodes deeper than
    ``limit`` are not trusted.
    """
    s = 0
    emitted = 0
    i = start
    while emitted < nbits:
        depth = i - start
        if depth > limit:
            return emitted, depth, DEPTH_EXCEEDED
        if i >= stop:
            return emitted, depth, NEED_MORE
        c = word[i]
        a = nxt[s, 0] != -1
        b = nxt[s, 1] != -1
        if not a and not b:
            return emitted, depth, DEPTH_EXCEEDED
        t = nxt[s, c]
        if t == -1:
            return emitted, depth, INADMISSIBLE
        if a and b:
            out[emitted] = c
            emitted += 1
        s = t
        i += 1
    return emitted, i - start, OK


@numba.njit(cache=True)
def encode_batch(nxt, text, starts, nbits, limit):
    m = starts.shape[0]
    bits = np.zeros((m, nbits), np.uint8)
    emitted = np.zeros(m, np.int64)
    status = np.zeros(m, np.int64)
    stop = text.shape[0]
    for j in range(m):
        e, _, st = encode_walk(nxt, text, starts[j], stop, nbits, limit, bits[j])
        emitted[j] = e
        status[j] = st
    return bits, emitted, status


@numba.njit(cache=True)
def decode_walk(nxt, bits, extend, limit):
    """Follow ``bits`` from the root; returns (state, depth, status).

    Without ``extend`` the walk stops at the shortest word carrying all bits;
    with it, the walk continues through forced symbols up to the next split.
    """
    s = 0
    depth = 0
    k = 0
    nb = bits.shape[0]
    while True:
        a = nxt[s, 0] != -1
        b = nxt[s, 1] != -1
        if a and b:
            if k == nb:
                return s, depth, OK
            if depth > limit:
                return s, depth, DEPTH_EXCEEDED
            s = nxt[s, bits[k]]
            k += 1
        elif a or b:
            if k == nb and not extend:
                return s, depth, OK
            if depth > limit:
                return s, depth, DEPTH_EXCEEDED
            s = nxt[s, 0] if a else nxt[s, 1]
        else:
            return s, depth, DEPTH_EXCEEDED
        depth += 1

