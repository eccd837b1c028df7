"""Bounded-arity Pol/pPol fingerprints and the clone-closure operators.

A fingerprint stores, for every function rank m <= K, the bitset of m-ary
(partial) tables preserving a constraint language - the computable stand-in
for Pol and pPol.  Containment of fingerprints mirrors the two Galois
connections at bounded rank.

``c_cols`` builds C(COLS^s) directly: its rows are the truth tables of the
s-ary total functions preserving the base.  ``clone_closure`` is the generic
least-fixpoint operator; it is exact whenever the needed clone members
factor through rank <= k applications over the current tuple set, which
holds for all catalog uses (k = core size), and the two constructions are
cross-checked against each other in the verification suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArityOutOfRange, KindMismatch
from .funcs import PARTIAL_ARITY_CAP, TOTAL_ARITY_CAP
from .kernels import layer_preservers, sequence_args
from .relation import MAX_ARITY, Relation


@dataclass
class Fingerprint:
    """Per-rank preserver bitsets for a constraint language."""

    kind: str  # "total" | "partial"
    k: int
    layers: dict[int, np.ndarray]

    def count(self, m: int) -> int:
        return int(self.layers[m].sum())

    def counts(self) -> tuple[int, ...]:
        return tuple(self.count(m) for m in range(1, self.k + 1))

    def member_ints(self, m: int) -> list[int]:
        return [int(i) for i in np.nonzero(self.layers[m])[0]]

    def hexdump(self) -> dict[int, str]:
        """Per-layer hex dump (bit i of the little-endian packing = table i)."""
        return {
            m: np.packbits(layer, bitorder="little").tobytes().hex()
            for m, layer in sorted(self.layers.items())
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fingerprint):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.k == other.k
            and all(np.array_equal(self.layers[m], other.layers[m]) for m in self.layers)
        )


def _check_rank(kind: str, k: int, slow: bool) -> None:
    if kind == "total":
        cap = TOTAL_ARITY_CAP
    else:
        cap = 4 if slow else PARTIAL_ARITY_CAP
    if not 1 <= k <= cap:
        raise ArityOutOfRange(f"{kind} fingerprint rank must be 1..{cap} (slow={slow}), got {k}")


def _fingerprint(gamma: Sequence[Relation], k: int, kind: str, slow: bool) -> Fingerprint:
    _check_rank(kind, k, slow)
    gamma = list(gamma)
    partial = kind == "partial"
    layers: dict[int, np.ndarray] = {}
    for m in range(1, k + 1):
        acc: np.ndarray | None = None
        for rel in gamma:
            bits = layer_preservers(rel, m, partial)
            acc = bits if acc is None else acc & bits
        if acc is None:
            base = 3 if partial else 2
            acc = np.ones(base ** (1 << m), dtype=bool)
        layers[m] = acc
    return Fingerprint(kind, k, layers)


def pol_k(gamma: Sequence[Relation], k: int) -> Fingerprint:
    """Total m-ary preservers of every relation in gamma, for m = 1..k."""
    return _fingerprint(gamma, k, "total", slow=False)


def ppol_k(gamma: Sequence[Relation], k: int, slow: bool = False) -> Fingerprint:
    """Partial m-ary preservers of every relation in gamma, for m = 1..k.

    k = 4 scans 3^16 tables per relation and layer; request it with slow=True.
    """
    return _fingerprint(gamma, k, "partial", slow=slow)


def fingerprint_leq(a: Fingerprint, b: Fingerprint) -> bool:
    """Layerwise containment a <= b."""
    if a.kind != b.kind or a.k != b.k:
        raise KindMismatch(f"cannot compare {a.kind}@{a.k} with {b.kind}@{b.k}")
    return all(not np.any(a.layers[m] & ~b.layers[m]) for m in range(1, a.k + 1))


def _pack_words(values: np.ndarray) -> np.ndarray:
    """Row-wise big-endian bit packing of a (rows, n) 0/1 matrix."""
    codes = np.zeros(values.shape[0], dtype=np.int64)
    for j in range(values.shape[1]):
        codes = (codes << 1) | values[:, j]
    return codes


def clone_closure(rel: Relation, base: Sequence[Relation], k: int) -> Relation:
    """Least fixpoint extension of ``rel`` under all rank <= k polymorphisms
    of ``base``.

    Sound (a subset of the true C(R)); complete relative to the rank bound k,
    which suffices when the clone's relevant members compose from rank <= k
    applications - the verification suite cross-validates every catalog use
    against the direct construction ``c_cols``.
    """
    if rel.arity > MAX_ARITY:
        raise ArityOutOfRange(f"arity {rel.arity} exceeds {MAX_ARITY}")
    fp = pol_k(base, k)
    member_tables = {
        m: np.array(
            [
                [(code >> ((1 << m) - 1 - i)) & 1 for i in range(1 << m)]
                for code in fp.member_ints(m)
            ],
            dtype=np.int64,
        )
        for m in range(1, k + 1)
    }
    tuples = set(rel.tuples)
    while True:
        cur = Relation(rel.arity, tuples)
        added = False
        for m in range(1, k + 1):
            tabs = member_tables[m]
            if tabs.size == 0:
                continue
            A = sequence_args(cur.tuple_array, m).astype(np.int64)
            for table in tabs:
                codes = np.unique(_pack_words(table[A]))
                for c in codes:
                    t = tuple((int(c) >> (rel.arity - 1 - j)) & 1 for j in range(rel.arity))
                    if t not in tuples:
                        tuples.add(t)
                        added = True
        if not added:
            return Relation(rel.arity, tuples)


def c_cols(base: Sequence[Relation], s: int) -> Relation:
    """C(COLS^s) built directly: one row per s-ary total function preserving
    the base, the row being the function's truth table under the COLS
    convention."""
    if not 1 <= s <= 4:
        raise ArityOutOfRange(f"s must be 1..4 (relation arity 2^s), got {s}")
    bits = None
    for rel in base:
        b = layer_preservers(rel, s, partial=False)
        bits = b if bits is None else bits & b
    if bits is None:
        bits = np.ones(2 ** (1 << s), dtype=bool)
    L = 1 << s
    rows = [
        tuple((int(code) >> (L - 1 - i)) & 1 for i in range(L))
        for code in np.nonzero(bits)[0]
    ]
    return Relation(L, rows)
