"""Compiled kernel for the low-index search.

Tables are flat int32 arrays of length ``N * NL`` (row = coset, column =
letter code), with -1 for undefined entries.  The search is Sims-style
backtracking with Felsch deductions.  A partial table survives only while
it is the lexicographic leader among all relabelings of it obtained by
moving the base point and applying a letter automorphism of the
presentation.  Once every coset exists, the next entry is the undefined one
with the fewest consistent values.
"""
import numpy as np
from numba import njit
from numba.typed import List


@njit(cache=True)
def _deduce(T, NL, c0, x0, rot, rlen, fptr, queue, undo, nundo):
    qh = 0
    qt = 1
    queue[0, 0] = c0
    queue[0, 1] = x0
    while qh < qt:
        c = queue[qh, 0]
        x = queue[qh, 1]
        qh += 1
        for k in range(fptr[x], fptr[x + 1]):
            L = rlen[k]
            f = c
            i = 0
            while i < L:
                nf = T[f * NL + rot[k, i]]
                if nf < 0:
                    break
                f = nf
                i += 1
            if i == L:
                if f != c:
                    return False, nundo
                continue
            b = c
            j = L - 1
            while j >= i:
                nb = T[b * NL + (rot[k, j] ^ 1)]
                if nb < 0:
                    break
                b = nb
                j -= 1
            if j < i:
                if f != b:
                    return False, nundo
            elif j == i:
                l = rot[k, i]
                if T[b * NL + (l ^ 1)] >= 0:
                    return False, nundo
                T[f * NL + l] = b
                T[b * NL + (l ^ 1)] = f
                undo[nundo] = f * NL + l
                undo[nundo + 1] = b * NL + (l ^ 1)
                nundo += 2
                queue[qt, 0] = f
                queue[qt, 1] = l
                qt += 1
    return True, nundo


@njit(cache=True)
def _is_leader(T, m, mprev, NL, ainv, ident, fwd, bwd, pa, pb, npar, ca, cb):
    # (automorphism, base) pairs still undecided at the parent plus those for
    # new base points; the ones still undecided here are written to (ca, cb)
    nA = ainv.shape[0]
    nout = 0
    tot = npar + nA * (m - mprev)
    for k in range(tot):
        if k < npar:
            a = pa[k]
            b = pb[k]
        else:
            q = k - npar
            a = q % nA
            b = mprev + q // nA
        if ident[a] and b == 0:
            continue
        for q in range(m):
            fwd[q] = -1
        fwd[b] = 0
        bwd[0] = b
        nxt = 1
        decided = False
        for c in range(m):
            oc = bwd[c]
            stop = False
            for x in range(NL):
                t = T[c * NL + x]
                r = T[oc * NL + ainv[a, x]]
                if t < 0 or r < 0:
                    stop = True
                    break
                rl = fwd[r]
                if rl < 0:
                    rl = nxt
                    fwd[r] = nxt
                    bwd[nxt] = r
                    nxt += 1
                if rl < t:
                    return False, 0
                if rl > t:
                    decided = True
                    stop = True
                    break
            if stop:
                break
        if not decided:
            ca[nout] = a
            cb[nout] = b
            nout += 1
    return True, nout


@njit(cache=True)
def _first_undef(T, m, NL):
    for p in range(m * NL):
        if T[p] < 0:
            return p
    return -1


@njit(cache=True)
def _choose(T, m, N, NL, rot, rlen, fptr, queue, undo, nundo):
    # -1: complete, -2: some entry has no consistent value
    p0 = _first_undef(T, m, NL)
    if p0 < 0 or m < N:
        return p0
    best = -1
    bestc = 1 << 30
    for p in range(m * NL):
        if T[p] >= 0 or (p % NL) & 1:
            continue
        c = p // NL
        x = p % NL
        xi = x ^ 1
        cnt = 0
        for d in range(m):
            if T[d * NL + xi] >= 0:
                continue
            T[p] = d
            T[d * NL + xi] = c
            undo[nundo] = p
            undo[nundo + 1] = d * NL + xi
            ok, nu = _deduce(T, NL, c, x, rot, rlen, fptr, queue, undo, nundo + 2)
            while nu > nundo:
                nu -= 1
                T[undo[nu]] = -1
            if ok:
                cnt += 1
                if cnt >= bestc:
                    break
        if cnt < bestc:
            bestc = cnt
            best = p
            if cnt <= 1:
                break
    if bestc == 0:
        return -2
    return best


@njit(cache=True)
def _search(T, m0, N, NL, rot, rlen, fptr, ainv, ident, split_depth, node_limit):
    """Explore all leader completions of the partial table ``T`` (m0 cosets).

    Returns (tables, coset counts, complete flags, nodes, exhausted).  With
    ``split_depth > 0`` nodes at that depth are returned unexplored.
    """
    out_tab = List()
    out_m = List()
    out_done = List()
    size = N * NL
    nA = ainv.shape[0]
    queue = np.empty((size + 2, 2), np.int32)
    undo = np.empty(size + 2, np.int32)
    fwd = np.empty(N, np.int32)
    bwd = np.empty(N, np.int32)
    spos = np.empty(size + 2, np.int32)
    sd = np.empty(size + 2, np.int32)
    sm = np.empty(size + 2, np.int32)
    sundo = np.empty(size + 2, np.int32)
    PA = np.empty((size + 2, nA * N), np.int32)
    PB = np.empty((size + 2, nA * N), np.int32)
    NP = np.zeros(size + 2, np.int32)
    ok0, NP[0] = _is_leader(T, m0, 0, NL, ainv, ident, fwd, bwd, PA[0], PB[0], 0, PA[0], PB[0])
    nodes = 1
    if not ok0:
        return out_tab, out_m, out_done, nodes, True
    nundo = 0
    p0 = _choose(T, m0, N, NL, rot, rlen, fptr, queue, undo, nundo)
    if p0 == -2:
        return out_tab, out_m, out_done, nodes, True
    if p0 < 0:
        out_tab.append(T[: m0 * NL].copy())
        out_m.append(m0)
        out_done.append(True)
        return out_tab, out_m, out_done, nodes, True
    if split_depth == 0:
        out_tab.append(T.copy())
        out_m.append(m0)
        out_done.append(False)
        return out_tab, out_m, out_done, nodes, True
    top = 0
    spos[0] = p0
    sd[0] = 0
    sm[0] = m0
    sundo[0] = 0
    while top >= 0:
        if node_limit > 0 and nodes >= node_limit:
            return out_tab, out_m, out_done, nodes, False
        while nundo > sundo[top]:
            nundo -= 1
            T[undo[nundo]] = -1
        pos = spos[top]
        m = sm[top]
        c = pos // NL
        x = pos % NL
        xi = x ^ 1
        lim = m + 1 if m < N else m
        pushed = False
        d = sd[top]
        while d < lim:
            if d < m and T[d * NL + xi] >= 0:
                d += 1
                continue
            T[pos] = d
            T[d * NL + xi] = c
            undo[nundo] = pos
            undo[nundo + 1] = d * NL + xi
            nundo += 2
            ok, nundo = _deduce(T, NL, c, x, rot, rlen, fptr, queue, undo, nundo)
            m2 = m + 1 if d == m else m
            lead = False
            nn = 0
            if ok:
                lead, nn = _is_leader(T, m2, m, NL, ainv, ident, fwd, bwd,
                                      PA[top], PB[top], NP[top], PA[top + 1], PB[top + 1])
            if lead:
                nodes += 1
                sd[top] = d + 1
                p2 = _choose(T, m2, N, NL, rot, rlen, fptr, queue, undo, nundo)
                if p2 == -1:
                    out_tab.append(T[: m2 * NL].copy())
                    out_m.append(m2)
                    out_done.append(True)
                elif p2 >= 0 and top + 1 == split_depth:
                    out_tab.append(T.copy())
                    out_m.append(m2)
                    out_done.append(False)
                elif p2 >= 0:
                    top += 1
                    NP[top] = nn
                    spos[top] = p2
                    sd[top] = 0
                    sm[top] = m2
                    sundo[top] = nundo
                    pushed = True
                    break
            while nundo > sundo[top]:
                nundo -= 1
                T[undo[nundo]] = -1
            d += 1
        if not pushed:
            top -= 1
    return out_tab, out_m, out_done, nodes, True


@njit(cache=True)
def _search_packed(T, m0, N, NL, rot, rlen, fptr, ainv, ident, split_depth, node_limit):
    tabs, ms, done, nodes, fin = _search(T, m0, N, NL, rot, rlen, fptr, ainv, ident, split_depth, node_limit)
    n = len(tabs)
    off = np.zeros(n + 1, np.int64)
    for i in range(n):
        off[i + 1] = off[i] + tabs[i].shape[0]
    flat = np.empty(off[n], np.int32)
    mm = np.empty(n, np.int32)
    dd = np.empty(n, np.bool_)
    for i in range(n):
        flat[off[i]:off[i + 1]] = tabs[i]
        mm[i] = ms[i]
        dd[i] = done[i]
    return flat, off, mm, dd, nodes, fin


def search(T, m0, N, NL, rot, rlen, fptr, ainv, ident, split_depth, node_limit):
    """Python-side view of :func:`_search` with plain lists (typed lists are slow to read)."""
    flat, off, mm, dd, nodes, fin = _search_packed(T, m0, N, NL, rot, rlen, fptr, ainv, ident,
                                                   split_depth, node_limit)
    tabs = [flat[off[i]:off[i + 1]] for i in range(len(mm))]
    return tabs, mm.tolist(), dd.tolist(), int(nodes), bool(fin)


def prepare(rels, NL, automorphisms):
    """Pack relator rotations and inverse automorphism tables for :func:`search`."""
    rots = []
    seen = set()
    for r in rels:
        ri = [x ^ 1 for x in reversed(r)]
        for w in (list(r), ri):
            for k in range(len(w)):
                t = tuple(w[k:] + w[:k])
                if t not in seen:
                    seen.add(t)
                    rots.append(t)
    rots.sort(key=lambda t: t[0])
    ml = max((len(t) for t in rots), default=1)
    rot = np.zeros((max(len(rots), 1), ml), np.int32)
    rlen = np.zeros(max(len(rots), 1), np.int32)
    for i, t in enumerate(rots):
        rot[i, : len(t)] = t
        rlen[i] = len(t)
    fptr = np.zeros(NL + 1, np.int32)
    for t in rots:
        fptr[t[0] + 1] += 1
    fptr = np.cumsum(fptr).astype(np.int32)
    ainv = np.zeros((len(automorphisms), NL), np.int32)
    for i, a in enumerate(automorphisms):
        for l in range(NL):
            ainv[i, a[l]] = l
    ident = np.array([all(a[l] == l for l in range(NL)) for a in automorphisms], dtype=np.bool_)
    return rot, rlen, fptr, ainv, ident
