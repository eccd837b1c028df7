"""Numba implementations of the hot kernels.

Both kernels are depth-first scans with pruning.  They release the GIL so
fan-out code can run them from worker threads.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def dfs_preservers(A, starts, memb, pow_w, base, out):
    """Mark every m-ary table (by table-integer) preserving the relation.

    A: (S, n) uint8, sequence argument codes remapped to assignment ranks and
       sorted by row maximum; starts: bucket bounds per rank; memb: relation
       bitset; pow_w: table-integer weight per rank; base: 2 total / 3
       partial (digit 2 = undefined); out: preallocated bool of base**L.

    Walks the digit odometer depth-first.  After assigning the digit at rank
    p, only sequences whose maximal rank is p can first become fully defined,
    so exactly bucket p is checked; any violation prunes the whole subtree.
    """
    S, n = A.shape
    L = starts.shape[0] - 1
    d = np.empty(L, np.int8)
    val = np.zeros(L, np.int64)
    p = 0
    d[0] = -1
    while p >= 0:
        d[p] += 1
        if d[p] >= base:
            p -= 1
            continue
        if d[p] != 2:
            ok = True
            for s in range(starts[p], starts[p + 1]):
                code = 0
                defined = True
                for j in range(n):
                    dv = d[A[s, j]]
                    if dv == 2:
                        defined = False
                        break
                    code = (code << 1) | dv
                if defined and not memb[code]:
                    ok = False
                    break
            if not ok:
                continue
        if p == 0:
            val[0] = d[0] * pow_w[0]
        else:
            val[p] = val[p - 1] + d[p] * pow_w[p]
        if p == L - 1:
            out[val[p]] = True
        else:
            p += 1
            d[p] = -1
    return out


@njit(cache=True, nogil=True)
def pol_layers_match(tuple_array, memb, K, targets_flat, target_off, target_counts):
    """First rank m <= K whose total-preserver set differs from the target
    fingerprint layer, or 0 when all match.

    Self-contained subset probe: builds the argument matrix, frequency
    ordering and buckets in-kernel, then walks the table odometer, aborting
    on the first preserver outside the target layer and finally comparing
    preserver counts.  targets_flat concatenates the per-layer bitsets.
    """
    t, n = tuple_array.shape
    for m in range(1, K + 1):
        L = 1 << m
        S = 1
        for _ in range(m):
            S *= t
        A = np.zeros((S, n), np.uint8)
        for srow in range(S):
            rem = srow
            for k in range(m):
                power = 1
                for _ in range(m - 1 - k):
                    power *= t
                ik = rem // power
                rem -= ik * power
                for j in range(n):
                    A[srow, j] = (A[srow, j] << 1) | tuple_array[ik, j]
        counts = np.zeros(L, np.int64)
        for srow in range(S):
            for j in range(n):
                counts[A[srow, j]] += 1
        sigma = np.argsort(-counts)
        rank_of = np.empty(L, np.int64)
        for r in range(L):
            rank_of[sigma[r]] = r
        maxr = np.empty(S, np.int64)
        for srow in range(S):
            mx = 0
            for j in range(n):
                rr = rank_of[A[srow, j]]
                A[srow, j] = rr
                if rr > mx:
                    mx = rr
        starts = np.zeros(L + 1, np.int64)
        for srow in range(S):
            starts[maxr[srow] + 1] += 1
        for p in range(L):
            starts[p + 1] += starts[p]
        order = np.empty(S, np.int64)
        fill = starts.copy()
        for srow in range(S):
            b = maxr[srow]
            order[fill[b]] = srow
            fill[b] += 1
        pow_w = np.empty(L, np.int64)
        for r in range(L):
            pw = 1
            for _ in range(L - 1 - sigma[r]):
                pw *= 2
            pow_w[r] = pw
        toff = target_off[m - 1]
        cnt = 0
        d = np.empty(L, np.int8)
        val = np.zeros(L, np.int64)
        p = 0
        d[0] = -1
        while p >= 0:
            d[p] += 1
            if d[p] >= 2:
                p -= 1
                continue
            ok = True
            for si in range(starts[p], starts[p + 1]):
                srow = order[si]
                code = 0
                for j in range(n):
                    code = (code << 1) | d[A[srow, j]]
                if not memb[code]:
                    ok = False
                    break
            if not ok:
                continue
            if p == 0:
                val[0] = d[0] * pow_w[0]
            else:
                val[p] = val[p - 1] + d[p] * pow_w[p]
            if p == L - 1:
                if not targets_flat[toff + val[p]]:
                    return m
                cnt += 1
            else:
                p += 1
                d[p] = -1
        if cnt != target_counts[m - 1]:
            return m
    return 0


@njit(cache=True, nogil=True)
def qpp_dfs(colbits, qmemb, prefix_ok, prefix_off, q, n, alive, target, atoms_out, early):
    """Enumerate entailed atoms Q@p and narrow the alive assignment bitset.

    colbits: (n, rows) bits of the source relation's columns; qmemb: bitset
    of Q; prefix_ok/prefix_off: concatenated prefix bitsets of Q per depth;
    alive: bitset over 2^n ambient assignments, narrowed in place by every
    discovered atom; target/early: stop once alive count reaches target.

    Returns (number of atoms written, overflowed, stopped_early).
    """
    rows = colbits.shape[1]
    W = alive.shape[0]
    alive_count = 0
    for w in range(W):
        if alive[w]:
            alive_count += 1
    pos = np.empty(q, np.int64)
    rcodes = np.zeros((q, rows), np.int64)
    natoms = 0
    overflow = False
    depth = 0
    pos[0] = -1
    while depth >= 0:
        pos[depth] += 1
        if pos[depth] >= n:
            depth -= 1
            continue
        v = pos[depth]
        off = prefix_off[depth]
        ok = True
        for r in range(rows):
            prev = rcodes[depth - 1, r] if depth > 0 else 0
            c = (prev << 1) | colbits[v, r]
            if not prefix_ok[off + c]:
                ok = False
                break
            rcodes[depth, r] = c
        if not ok:
            continue
        if depth == q - 1:
            if natoms < atoms_out.shape[0]:
                for k in range(q):
                    atoms_out[natoms, k] = pos[k]
                natoms += 1
            else:
                overflow = True
            for w in range(W):
                if alive[w]:
                    code = 0
                    for k in range(q):
                        code = (code << 1) | ((w >> (n - 1 - pos[k])) & 1)
                    if not qmemb[code]:
                        alive[w] = False
                        alive_count -= 1
            if early and alive_count == target:
                return natoms, overflow, True
        else:
            depth += 1
            pos[depth] = -1
    return natoms, overflow, False
