"""Pure-numpy fallback kernels.

Same contracts as the numba backend.  The preservation filter vectorizes
over function tables in chunks and drops violating tables block by block;
the atom scan is the identical depth-first walk in plain Python.  Correct on
any install, slower on the heavy cases - see benchmarks/bench_backends.py.
"""

from __future__ import annotations

import numpy as np


def _decode_tables(idx: np.ndarray, base: int, L: int) -> np.ndarray:
    """Digit matrix (len(idx), L) of the given table-integers, MSD first."""
    digs = np.empty((idx.size, L), dtype=np.uint8)
    x = idx.copy()
    for i in range(L - 1, -1, -1):
        digs[:, i] = x % base
        x //= base
    return digs


def chunked_preservers(
    A: np.ndarray,
    memb: np.ndarray,
    L: int,
    base: int,
    func_chunk: int = 4096,
    seq_block: int = 256,
) -> np.ndarray:
    S, n = A.shape
    N = base**L
    out = np.zeros(N, dtype=bool)
    Al = A.astype(np.int64)
    for c0 in range(0, N, func_chunk):
        idx = np.arange(c0, min(N, c0 + func_chunk), dtype=np.int64)
        digs = _decode_tables(idx, base, L)
        for b0 in range(0, S, seq_block):
            if idx.size == 0:
                break
            Ab = Al[b0 : b0 + seq_block]
            V = digs[:, Ab]  # (C, B, n)
            if base == 3:
                defined = (V != 2).all(axis=2)
                Vv = np.where(V == 2, 0, V)
            else:
                defined = None
                Vv = V
            codes = np.zeros(V.shape[:2], dtype=np.int64)
            for j in range(n):
                codes = (codes << 1) | Vv[:, :, j]
            viol = ~memb[codes]
            if defined is not None:
                viol &= defined
            keep = ~viol.any(axis=1)
            idx = idx[keep]
            digs = digs[keep]
        out[idx] = True
    return out


def pol_layers_match(A_by_m, memb, K, targets_flat, target_off, target_counts):
    """Numpy twin of the numba probe; A_by_m maps rank m to the raw argument
    matrix of the subset."""
    for m in range(1, K + 1):
        L = 1 << m
        bits = chunked_preservers(A_by_m[m], memb, L, 2)
        toff = int(target_off[m - 1])
        if int(bits.sum()) != int(target_counts[m - 1]):
            return m
        if np.any(bits & ~targets_flat[toff : toff + bits.size]):
            return m
    return 0


def qpp_dfs(colbits, qmemb, prefix_ok, prefix_off, q, n, alive, target, atoms_out, early):
    rows = colbits.shape[1]
    W = alive.shape[0]
    alive_count = int(alive.sum())
    pos = [0] * q
    rcodes = [[0] * rows for _ in range(q)]
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
        off = int(prefix_off[depth])
        ok = True
        prev_row = rcodes[depth - 1] if depth > 0 else None
        cur_row = rcodes[depth]
        for r in range(rows):
            prev = prev_row[r] if depth > 0 else 0
            c = (prev << 1) | int(colbits[v, r])
            if not prefix_ok[off + c]:
                ok = False
                break
            cur_row[r] = c
        if not ok:
            continue
        if depth == q - 1:
            if natoms < atoms_out.shape[0]:
                atoms_out[natoms] = pos
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
