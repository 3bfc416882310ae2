"""Hot loops: batched boundary walks and trace powers.

Each kernel has a numba implementation and a pure-numpy one.  The numba path
is used when numba imports and ``CHORDGF_NUMBA`` is not set to ``0``; both
paths return identical arrays (bit-identical integers for the boundary walk,
equal to rounding for trace powers).

Boundary walk encoding
----------------------
Slots are numbered globally, backbone after backbone.  ``partner[d, e]`` is
the slot joined to ``e`` by a chord, or -1 for a marked point; ``twist[d, e]``
flags a twisted chord (set on both endpoints).  Every chord endpoint ``e``
contributes two boundary nodes ``2e`` (left of e) and ``2e + 1`` (right of e).
Chord sides join ``R(e)-L(f)`` and ``L(e)-R(f)`` (untwisted) or ``R(e)-R(f)``
and ``L(e)-L(f)`` (twisted); backbone corners join ``R(e)`` to ``L(next)``,
the last corner of a backbone running around its underside.  Every node has
one chord side and one corner, so boundary components are the cycles of this
2-regular graph.
"""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised through BACKEND
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("CHORDGF_NUMBA", "1") != "0"
BACKEND = "numba" if USE_NUMBA else "numpy"


def _resolve(backend: str | None) -> str:
    backend = backend or BACKEND
    if backend == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# --------------------------------------------------------------------------
# boundary walk


def _walk_python(partner, twist, bb_start, bb_end, nvec, pvec, ncyc, connected):
    D, M = partner.shape
    B = bb_start.shape[0]
    nodes = 2 * M
    chord_nb = np.empty(nodes, np.int64)
    corner_nb = np.empty(nodes, np.int64)
    corner_marked = np.zeros(nodes, np.int64)
    corner_under = np.zeros(nodes, np.int64)
    visited = np.zeros(nodes, np.uint8)
    parent = np.empty(B, np.int64)
    bb_of = np.empty(M, np.int64)
    for b in range(B):
        for e in range(bb_start[b], bb_end[b]):
            bb_of[e] = b
    for d in range(D):
        for v in range(nodes):
            visited[v] = 0
            corner_marked[v] = 0
            corner_under[v] = 0
        cycles = 0
        for b in range(B):
            parent[b] = b
        # chord sides
        for e in range(M):
            f = partner[d, e]
            if f < 0:
                continue
            if twist[d, e]:
                chord_nb[2 * e + 1] = 2 * f + 1
                chord_nb[2 * e] = 2 * f
            else:
                chord_nb[2 * e + 1] = 2 * f
                chord_nb[2 * e] = 2 * f + 1
            # union backbones
            ra = bb_of[e]
            while parent[ra] != ra:
                ra = parent[ra]
            rb = bb_of[f]
            while parent[rb] != rb:
                rb = parent[rb]
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
        # corners
        for b in range(B):
            first = -1
            prev = -1
            gap = 0
            lead = 0
            for e in range(bb_start[b], bb_end[b]):
                if partner[d, e] < 0:
                    gap += 1
                    continue
                if prev < 0:
                    first = e
                    lead = gap
                else:
                    corner_nb[2 * prev + 1] = 2 * e
                    corner_nb[2 * e] = 2 * prev + 1
                    corner_marked[2 * prev + 1] = gap
                    corner_marked[2 * e] = gap
                prev = e
                gap = 0
            if prev < 0:
                # chordless backbone: one boundary, length 1 (its underside)
                nvec[d, gap] += 1
                pvec[d, 1] += 1
                cycles += 1
            else:
                corner_nb[2 * prev + 1] = 2 * first
                corner_nb[2 * first] = 2 * prev + 1
                corner_marked[2 * prev + 1] = gap + lead
                corner_marked[2 * first] = gap + lead
                corner_under[2 * prev + 1] = 1
                corner_under[2 * first] = 1
        # walk
        for v0 in range(nodes):
            if partner[d, v0 // 2] < 0 or visited[v0]:
                continue
            length = 0
            marked = 0
            cur = v0
            while True:
                visited[cur] = 1
                nxt = chord_nb[cur]
                visited[nxt] = 1
                length += 1 + corner_under[nxt]
                marked += corner_marked[nxt]
                cur = corner_nb[nxt]
                if cur == v0:
                    break
            nvec[d, marked] += 1
            pvec[d, length] += 1
            cycles += 1
        ncyc[d] = cycles
        root0 = 0
        ok = 1
        for b in range(B):
            r = b
            while parent[r] != r:
                r = parent[r]
            if b == 0:
                root0 = r
            elif r != root0:
                ok = 0
        connected[d] = ok


if _HAVE_NUMBA:
    _walk_numba = numba.njit(cache=True)(_walk_python)
else:  # pragma: no cover
    _walk_numba = None


def _walk_numpy(partner, twist, bb_start, bb_end):
    D, M = partner.shape
    B = bb_start.shape[0]
    nodes = 2 * M
    rows = np.arange(D)[:, None]
    is_ep = partner >= 0
    safe_partner = np.where(is_ep, partner, 0)
    L = 2 * np.arange(M)[None, :]
    R = L + 1
    fL = 2 * safe_partner
    fR = fL + 1
    tw = twist.astype(bool)

    ident = np.broadcast_to(np.arange(nodes), (D, nodes))
    chord_nb = ident.copy()
    chord_nb[:, 0::2] = np.where(is_ep, np.where(tw, fL, fR), L)
    chord_nb[:, 1::2] = np.where(is_ep, np.where(tw, fR, fL), R)

    corner_nb = ident.copy()
    corner_marked = np.zeros((D, nodes), np.int64)
    corner_under = np.zeros((D, nodes), np.int64)
    nvec = np.zeros((D, M + 1), np.int64)
    pvec = np.zeros((D, M + B + 1), np.int64)
    ncyc = np.zeros(D, np.int64)
    big = M + 1
    for b in range(B):
        s, t = int(bb_start[b]), int(bb_end[b])
        if t == s:
            nvec[:, 0] += 1
            pvec[:, 1] += 1
            ncyc += 1
            continue
        seg = is_ep[:, s:t]
        pos = np.where(seg, np.arange(s, t)[None, :], big)
        # next endpoint strictly after each position
        suffix_min = np.minimum.accumulate(pos[:, ::-1], axis=1)[:, ::-1]
        nxt = np.concatenate([suffix_min[:, 1:], np.full((D, 1), big)], axis=1)
        first = suffix_min[:, 0]
        last = np.max(np.where(seg, np.arange(s, t)[None, :], -1), axis=1)
        empty = first == big
        if empty.any():
            nvec[empty, t - s] += 1
            pvec[empty, 1] += 1
            ncyc[empty] += 1
        wrap = nxt == big
        here = np.arange(s, t)[None, :]
        target = np.where(wrap, first[:, None], nxt)
        gap = np.where(wrap, (t - here - 1) + (first[:, None] - s), nxt - here - 1)
        d_idx, j_idx = np.nonzero(seg)
        e = j_idx + s
        tgt = target[d_idx, j_idx]
        g = gap[d_idx, j_idx]
        u = wrap[d_idx, j_idx].astype(np.int64)
        corner_nb[d_idx, 2 * e + 1] = 2 * tgt
        corner_nb[d_idx, 2 * tgt] = 2 * e + 1
        corner_marked[d_idx, 2 * e + 1] = g
        corner_marked[d_idx, 2 * tgt] = g
        corner_under[d_idx, 2 * e + 1] = u
        corner_under[d_idx, 2 * tgt] = u
        del last

    phi = np.take_along_axis(corner_nb, chord_nb, axis=1)
    w_len = 1 + np.take_along_axis(corner_under, chord_nb, axis=1)
    w_mark = np.take_along_axis(corner_marked, chord_nb, axis=1)
    # orbit labels (minimum node) by pointer doubling
    label = ident.copy()
    jump = phi.copy()
    steps = 1
    while steps < nodes:
        label = np.minimum(label, np.take_along_axis(label, jump, axis=1))
        jump = np.take_along_axis(jump, jump, axis=1)
        steps *= 2
    valid = np.repeat(is_ep, 2, axis=1)
    flat = (rows * nodes + label).ravel()
    sum_len = np.bincount(flat, weights=np.where(valid, w_len, 0).ravel(), minlength=D * nodes)
    sum_mark = np.bincount(flat, weights=np.where(valid, w_mark, 0).ravel(), minlength=D * nodes)
    sum_len = sum_len.reshape(D, nodes).astype(np.int64)
    sum_mark = sum_mark.reshape(D, nodes).astype(np.int64)
    # each boundary is two phi-orbits: keep the one with the smaller label
    partner_label = np.take_along_axis(label, chord_nb, axis=1)
    root = valid & (label == ident) & (label < partner_label)
    dd, vv = np.nonzero(root)
    np.add.at(nvec, (dd, sum_mark[dd, vv]), 1)
    np.add.at(pvec, (dd, sum_len[dd, vv]), 1)
    ncyc += np.bincount(dd, minlength=D)

    # connectivity: transitive closure of the backbone adjacency
    bb_of = np.empty(M, np.int64)
    for b in range(B):
        bb_of[bb_start[b]:bb_end[b]] = b
    adj = np.zeros((D, B, B), bool)
    adj[:, np.arange(B), np.arange(B)] = True
    d_idx, e_idx = np.nonzero(is_ep)
    adj[d_idx, bb_of[e_idx], bb_of[partner[d_idx, e_idx]]] = True
    reach = adj
    for _ in range(max(1, int(np.ceil(np.log2(max(B, 2)))))):
        reach = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
    connected = reach[:, 0, :].all(axis=1)
    return nvec, pvec, ncyc, connected


def boundary_spectra(partner, twist, sizes, backend: str | None = None):
    """Boundary point / length spectra for a batch of diagrams on fixed backbones.

    Returns ``(nvec, pvec, ncyc, connected)`` where ``nvec[d, i]`` counts the
    boundary cycles of diagram d carrying i marked points and ``pvec[d, i]``
    the cycles of length i.
    """
    backend = _resolve(backend)
    partner = np.ascontiguousarray(partner, dtype=np.int64)
    twist = np.ascontiguousarray(twist, dtype=np.uint8)
    sizes = np.asarray(sizes, dtype=np.int64)
    bb_end = np.cumsum(sizes)
    bb_start = bb_end - sizes
    D, M = partner.shape
    B = len(sizes)
    if backend == "numpy":
        return _walk_numpy(partner, twist, bb_start, bb_end)
    nvec = np.zeros((D, M + 1), np.int64)
    pvec = np.zeros((D, M + B + 1), np.int64)
    ncyc = np.zeros(D, np.int64)
    connected = np.zeros(D, np.uint8)
    _walk_numba(partner, twist, bb_start, bb_end, nvec, pvec, ncyc, connected)
    return nvec, pvec, ncyc, connected.astype(bool)


# --------------------------------------------------------------------------
# trace powers


def _trace_powers_python(Y, out):
    S, N, _ = Y.shape
    mmax = out.shape[1] - 1
    P = np.empty((N, N), Y.dtype)
    Q = np.empty((N, N), Y.dtype)
    for r in range(S):
        for i in range(N):
            for j in range(N):
                P[i, j] = Y[r, i, j]
        out[r, 0] = N
        if mmax == 0:
            continue
        tr = 0.0
        for i in range(N):
            tr += P[i, i].real
        out[r, 1] = tr
        for m in range(2, mmax + 1):
            for i in range(N):
                for j in range(N):
                    acc = Y[r, i, 0] * 0
                    for l in range(N):
                        acc += P[i, l] * Y[r, l, j]
                    Q[i, j] = acc
            tr = 0.0
            for i in range(N):
                tr += Q[i, i].real
                for j in range(N):
                    P[i, j] = Q[i, j]
            out[r, m] = tr


if _HAVE_NUMBA:
    _trace_powers_numba = numba.njit(cache=True)(_trace_powers_python)
else:  # pragma: no cover
    _trace_powers_numba = None


def trace_powers(Y, mmax: int, backend: str | None = None) -> np.ndarray:
    """``out[r, m] = Re Tr(Y[r]^m)`` for ``m = 0..mmax``."""
    backend = _resolve(backend)
    Y = np.ascontiguousarray(Y)
    S, N, _ = Y.shape
    if backend == "numba":
        out = np.zeros((S, mmax + 1), np.float64)
        _trace_powers_numba(Y, out)
        return out
    out = np.empty((S, mmax + 1), np.float64)
    out[:, 0] = N
    P = Y
    for m in range(1, mmax + 1):
        if m > 1:
            P = P @ Y
        out[:, m] = np.trace(P, axis1=1, axis2=2).real
    return out
