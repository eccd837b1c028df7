"""Backend dispatch for the brute-force inner loops.

Two interchangeable backends implement the hot kernels:

* ``numba`` - ``@njit`` depth-first scans with prefix pruning (default when
  numba imports cleanly);
* ``numpy`` - pure-numpy chunked filtering, used as the fallback path.

Selection: set ``COCLONE_BACKEND=numpy`` or ``COCLONE_BACKEND=numba``; unset
picks numba when available.  Both backends return identical arrays; the test
suite asserts agreement and ``benchmarks/bench_backends.py`` compares their
speed.

``COCLONE_THREADS`` caps the worker count used by fan-out code paths.

Conventions shared by all kernels: a sequence of m tuples from a t-tuple
relation maps to a row of the (t^m, n) argument matrix whose entry (s, j)
is the big-endian code of the j-th coordinate's argument combination (first
tuple of the sequence in the most significant bit); result words pack
coordinate 1 into the most significant bit, matching Relation.codes.
"""

from __future__ import annotations

import os

import numpy as np

from .relation import Relation

try:
    from . import _kernels_numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    _kernels_numba = None
    NUMBA_AVAILABLE = False

from . import _kernels_numpy


def active_backend() -> str:
    """The backend name in effect for the current call."""
    choice = os.environ.get("COCLONE_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not NUMBA_AVAILABLE:
            raise RuntimeError("COCLONE_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if NUMBA_AVAILABLE else "numpy"


def worker_count() -> int:
    """CPU count capped by the COCLONE_THREADS environment variable."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get("COCLONE_THREADS", "").strip()
    if raw:
        try:
            return max(1, min(cpus, int(raw)))
        except ValueError:
            pass
    return cpus


_MAX_SEQUENCES = 1 << 26


def sequence_args(tuple_array: np.ndarray, m: int) -> np.ndarray:
    """(t^m, n) argument-combination codes for all m-sequences of tuples.

    Row order is lexicographic over tuple-index vectors (first index major),
    matching itertools.product over the canonical tuple order.
    """
    t, n = tuple_array.shape
    if t**m > _MAX_SEQUENCES:
        raise MemoryError(f"{t}^{m} sequences exceed the kernel budget")
    out = np.zeros((1, n), dtype=np.uint8)
    for _ in range(m):
        out = ((out[:, None, :] << 1) | tuple_array[None, :, :]).reshape(-1, n)
    return out


def _prepared(rel: Relation, m: int, base: int):
    """Frequency-ordered argument matrix, bucket bounds and digit weights.

    Table positions are assigned in descending order of how often the
    argument combination occurs in sequences (constant columns first), which
    spreads the violation checks across the scan instead of piling them at
    the last digit.  ``pow_w[r]`` is the table-integer weight of the digit
    assigned at rank r.
    """
    A = sequence_args(rel.tuple_array, m)
    L = 1 << m
    counts = np.bincount(A.ravel(), minlength=L)
    sigma = np.argsort(-counts, kind="stable").astype(np.int64)  # rank -> code
    rank_of = np.empty(L, dtype=np.int64)
    rank_of[sigma] = np.arange(L)
    Ar = rank_of[A.astype(np.int64)]
    mx = Ar.max(axis=1)
    order = np.argsort(mx, kind="stable")
    A_sorted = Ar[order].astype(np.uint8)
    starts = np.searchsorted(mx[order], np.arange(L + 1)).astype(np.int64)
    pow_w = np.array([base ** (L - 1 - int(c)) for c in sigma], dtype=np.int64)
    return A_sorted, starts, pow_w


def layer_preservers(rel: Relation, m: int, partial: bool) -> np.ndarray:
    """Bitset over all m-ary tables (total: 2^(2^m), partial: 3^(2^m)) that
    preserve the relation, indexed by table-integer."""
    base = 3 if partial else 2
    if active_backend() == "numba":
        A, starts, pow_w = _prepared(rel, m, base)
        out = np.zeros(base ** (1 << m), dtype=bool)
        _kernels_numba.dfs_preservers(A, starts, rel.membership, pow_w, base, out)
        return out
    A = sequence_args(rel.tuple_array, m)
    return _kernels_numpy.chunked_preservers(A, rel.membership, 1 << m, base)


def flatten_fingerprint_layers(layers: dict[int, np.ndarray], K: int):
    """Concatenate total layers 1..K into (flat bitset, offsets, counts)."""
    flat = np.concatenate([layers[m] for m in range(1, K + 1)])
    off = np.zeros(K, dtype=np.int64)
    cnt = np.zeros(K, dtype=np.int64)
    pos = 0
    for m in range(1, K + 1):
        off[m - 1] = pos
        cnt[m - 1] = int(layers[m].sum())
        pos += layers[m].size
    return flat, off, cnt


def pol_layers_match(tuple_array: np.ndarray, memb: np.ndarray, K: int, flat, off, cnt) -> int:
    """First rank whose total-preserver layer differs from the target
    fingerprint (0 = full match).  Fast path for subset minimality scans."""
    if active_backend() == "numba":
        return int(_kernels_numba.pol_layers_match(tuple_array, memb, K, flat, off, cnt))
    A_by_m = {m: sequence_args(tuple_array, m) for m in range(1, K + 1)}
    return int(_kernels_numpy.pol_layers_match(A_by_m, memb, K, flat, off, cnt))


def _prefix_tables(Q: Relation):
    """Concatenated prefix-membership bitsets for lengths 1..arity."""
    q = Q.arity
    codes = Q.codes.astype(np.int64)
    blocks = []
    offsets = np.zeros(q, dtype=np.int64)
    total = 0
    for k in range(1, q + 1):
        block = np.zeros(1 << k, dtype=bool)
        block[np.unique(codes >> (q - k))] = True
        offsets[k - 1] = total
        total += block.size
        blocks.append(block)
    return np.concatenate(blocks), offsets


def covering_atoms_pass(
    rel: Relation,
    Q: Relation,
    alive: np.ndarray,
    *,
    early_stop_target: int | None = None,
    collect_limit: int = 1 << 16,
):
    """Enumerate position vectors p with Q@p entailed by ``rel``.

    Scans positions depth-first in lexicographic order, pruning on Q's tuple
    prefixes.  Each discovered atom narrows ``alive`` (a bitset over ambient
    assignment codes, modified in place) to the assignments it admits.  With
    ``early_stop_target`` set, returns as soon as alive shrinks to that
    count.  Returns (positions array, overflowed, stopped_early).
    """
    n = rel.arity
    colbits = np.ascontiguousarray(rel.tuple_array.T)  # (n, rows)
    prefix_ok, prefix_off = _prefix_tables(Q)
    atoms_out = np.zeros((collect_limit, Q.arity), dtype=np.int64)
    target = -1 if early_stop_target is None else int(early_stop_target)
    early = early_stop_target is not None
    if active_backend() == "numba":
        natoms, overflow, stopped = _kernels_numba.qpp_dfs(
            colbits, Q.membership, prefix_ok, prefix_off, Q.arity, n, alive, target, atoms_out, early
        )
    else:
        natoms, overflow, stopped = _kernels_numpy.qpp_dfs(
            colbits, Q.membership, prefix_ok, prefix_off, Q.arity, n, alive, target, atoms_out, early
        )
    return atoms_out[:natoms], overflow, stopped
