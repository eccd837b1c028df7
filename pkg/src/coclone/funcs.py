"""Total and partial Boolean functions as truth tables.

Tables are indexed by the big-endian encoding of the argument vector
(argument 1 in the most significant bit).  A table also reads as an integer:
base 2 for total functions, base 3 for partial ones with digit 2 meaning
"undefined", most significant digit first.  Enumerators stream functions in
ascending table-integer order, which fixes the bitset indexing used by the
fingerprint machinery.

The preservation predicates here are the plain brute-force definitions and
serve as the reference implementations against which the accelerated kernel
path is checked.
"""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Iterator, Optional, Sequence

from .errors import ArityMismatch, ArityOutOfRange
from .relation import Relation

TOTAL_ARITY_CAP = 4
PARTIAL_ARITY_CAP = 3  # 4 reachable behind slow=True (3^16 tables)


class TotalFn:
    """A total Boolean function of arity 1..4 given by its truth table."""

    __slots__ = ("arity", "table")

    def __init__(self, arity: int, table: Sequence[int]):
        if not 1 <= arity <= TOTAL_ARITY_CAP:
            raise ArityOutOfRange(f"total arity must be 1..{TOTAL_ARITY_CAP}, got {arity}")
        table = tuple(int(v) for v in table)
        if len(table) != 1 << arity or any(v not in (0, 1) for v in table):
            raise ArityMismatch(f"table must hold 2^{arity} bits")
        self.arity = arity
        self.table = table

    @classmethod
    def from_table_int(cls, arity: int, code: int) -> "TotalFn":
        L = 1 << arity
        return cls(arity, [(code >> (L - 1 - i)) & 1 for i in range(L)])

    @classmethod
    def projection(cls, arity: int, i: int) -> "TotalFn":
        """e^arity_i."""
        if not 1 <= i <= arity:
            raise ArityOutOfRange(f"projection index {i} out of 1..{arity}")
        return cls(arity, [(idx >> (arity - i)) & 1 for idx in range(1 << arity)])

    def table_int(self) -> int:
        c = 0
        for v in self.table:
            c = (c << 1) | v
        return c

    def __call__(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise ArityMismatch(f"expected {self.arity} arguments, got {len(args)}")
        idx = 0
        for b in args:
            idx = (idx << 1) | b
        return self.table[idx]

    def text(self) -> str:
        """Textual encoding ``m:TTTT`` (e.g. ``2:0001`` is binary and)."""
        return f"{self.arity}:" + "".join(str(v) for v in self.table)

    @classmethod
    def from_text(cls, s: str) -> "TotalFn":
        m, _, t = s.partition(":")
        return cls(int(m), [int(ch) for ch in t])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TotalFn) and self.arity == other.arity and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.arity, self.table))

    def __repr__(self) -> str:
        return f"TotalFn({self.text()!r})"


class PartialFn:
    """A partial Boolean function; table entries are 0, 1 or None (undefined)."""

    __slots__ = ("arity", "table")

    def __init__(self, arity: int, table: Sequence[Optional[int]]):
        if not 1 <= arity <= 4:
            raise ArityOutOfRange(f"partial arity must be 1..4, got {arity}")
        table = tuple(None if v is None else int(v) for v in table)
        if len(table) != 1 << arity or any(v not in (0, 1, None) for v in table):
            raise ArityMismatch(f"table must hold 2^{arity} entries in {{0,1,None}}")
        self.arity = arity
        self.table = table

    @classmethod
    def from_table_int(cls, arity: int, code: int) -> "PartialFn":
        L = 1 << arity
        digits = []
        for i in range(L - 1, -1, -1):
            digits.append(code // 3**i % 3)
        return cls(arity, [None if d == 2 else d for d in digits])

    @classmethod
    def sub_projection(cls, arity: int, i: int, domain: Sequence[int]) -> "PartialFn":
        """e^arity_i restricted to the given argument codes."""
        dom = set(domain)
        return cls(
            arity,
            [(idx >> (arity - i)) & 1 if idx in dom else None for idx in range(1 << arity)],
        )

    def table_int(self) -> int:
        c = 0
        for v in self.table:
            c = c * 3 + (2 if v is None else v)
        return c

    def defined_at(self, idx: int) -> bool:
        return self.table[idx] is not None

    def __call__(self, args: Sequence[int]) -> Optional[int]:
        if len(args) != self.arity:
            raise ArityMismatch(f"expected {self.arity} arguments, got {len(args)}")
        idx = 0
        for b in args:
            idx = (idx << 1) | b
        return self.table[idx]

    def text(self) -> str:
        return f"{self.arity}:" + "".join("*" if v is None else str(v) for v in self.table)

    @classmethod
    def from_text(cls, s: str) -> "PartialFn":
        m, _, t = s.partition(":")
        return cls(int(m), [None if ch == "*" else int(ch) for ch in t])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PartialFn) and self.arity == other.arity and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.arity, self.table, None))

    def __repr__(self) -> str:
        return f"PartialFn({self.text()!r})"


def embed(f: TotalFn) -> PartialFn:
    """View a total function as an everywhere-defined partial function."""
    return PartialFn(f.arity, f.table)


def apply_to_tuples(f: TotalFn | PartialFn, ts: Sequence[Sequence[int]]):
    """Componentwise application of f to a sequence of arity(f) tuples.

    Returns the result tuple, or None when a partial f is undefined at any
    coordinate's argument combination.
    """
    if len(ts) != f.arity:
        raise ArityMismatch(f"need {f.arity} tuples, got {len(ts)}")
    n = len(ts[0])
    if any(len(t) != n for t in ts):
        raise ArityMismatch("tuples have differing lengths")
    out = []
    for j in range(n):
        v = f([t[j] for t in ts])
        if v is None:
            return None
        out.append(v)
    return tuple(out)


def find_violation(f: TotalFn | PartialFn, rel: Relation):
    """First tuple sequence (lexicographic tuple-index order) that f maps out of R."""
    for seq in _cartesian(rel.tuples, repeat=f.arity):
        res = apply_to_tuples(f, seq)
        if res is not None and res not in rel:
            return seq
    return None


def preserves(f: TotalFn, rel: Relation) -> bool:
    """True iff every componentwise application of f to tuples of R lands in R."""
    return find_violation(f, rel) is None


def preserves_partial(f: PartialFn, rel: Relation) -> bool:
    """Like preserves, quantified only over sequences where f is defined."""
    return find_violation(f, rel) is None


def enumerate_total(m: int) -> Iterator[TotalFn]:
    """All 2^(2^m) total m-ary functions in ascending table-integer order."""
    if not 1 <= m <= TOTAL_ARITY_CAP:
        raise ArityOutOfRange(f"m must be 1..{TOTAL_ARITY_CAP}, got {m}")
    for code in range(1 << (1 << m)):
        yield TotalFn.from_table_int(m, code)


def enumerate_partial(m: int, slow: bool = False) -> Iterator[PartialFn]:
    """All 3^(2^m) partial m-ary functions in ascending table-integer order.

    m = 4 enumerates 3^16 = 43 046 721 tables and must be requested with
    slow=True.
    """
    cap = 4 if slow else PARTIAL_ARITY_CAP
    if not 1 <= m <= cap:
        raise ArityOutOfRange(f"m must be 1..{cap} (slow={slow}), got {m}")
    for code in range(3 ** (1 << m)):
        yield PartialFn.from_table_int(m, code)


def subfunctions(f: PartialFn) -> Iterator[PartialFn]:
    """All g agreeing with f on their domains, domain(g) a subset of domain(f)."""
    defined = [i for i, v in enumerate(f.table) if v is not None]
    for keep in _cartesian((False, True), repeat=len(defined)):
        table = list(f.table)
        for pos, k in zip(defined, keep):
            if not k:
                table[pos] = None
        yield PartialFn(f.arity, table)
