"""Boolean relations as canonical tuple sets.

A relation of arity n is a finite set of n-bit tuples.  The canonical form
stores the tuples in lexicographic order, so two relations are equal iff
their serialized forms are byte-equal.  Tuples double as integer codes with
coordinate 1 in the most significant bit; lexicographic tuple order then
coincides with numeric code order.

Builders cover every named relation used by the weak-base catalog (OR^n,
NAND^n, EVEN^n, ODD^n, R^{1/3}, EQ, F, T, NEQ and COLS^n) together with the
three derivation rules (identify arguments, permute arguments, irredundant
core), complement duals, inequality padding and cartesian products.

Normative COLS^n convention: the matrix columns enumerate 0 .. 2^n - 1
ascending left to right, big-endian within a column (row 1 holds the most
significant bit).  Derivation-chain replays depend on this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, ArityOutOfRange, SizeMismatch, Underflow

MAX_ARITY = 16

BitTuple = tuple[int, ...]


class Relation:
    """An immutable set of fixed-arity bit tuples in canonical order."""

    def __init__(self, arity: int, tuples: Iterable[Sequence[int]]):
        if not 1 <= arity <= MAX_ARITY:
            raise ArityOutOfRange(f"arity must be in 1..{MAX_ARITY}, got {arity}")
        seen = set()
        for t in tuples:
            t = tuple(int(b) for b in t)
            if len(t) != arity:
                raise ArityMismatch(f"tuple {t} has length {len(t)}, expected {arity}")
            if any(b not in (0, 1) for b in t):
                raise ArityMismatch(f"tuple {t} has a non-bit entry")
            seen.add(t)
        self.arity = arity
        self.tuples: tuple[BitTuple, ...] = tuple(sorted(seen))

    # -- canonical views -------------------------------------------------

    @cached_property
    def codes(self) -> np.ndarray:
        """Sorted integer codes, coordinate 1 = most significant bit."""
        out = np.zeros(len(self.tuples), dtype=np.uint32)
        for r, t in enumerate(self.tuples):
            c = 0
            for b in t:
                c = (c << 1) | b
            out[r] = c
        return out

    @cached_property
    def tuple_array(self) -> np.ndarray:
        """(|R|, arity) uint8 matrix of the tuples in canonical row order."""
        return np.array(self.tuples, dtype=np.uint8).reshape(len(self.tuples), self.arity)

    @cached_property
    def membership(self) -> np.ndarray:
        """Bitset over all 2^arity assignment codes."""
        memb = np.zeros(1 << self.arity, dtype=bool)
        memb[self.codes] = True
        return memb

    def bitstrings(self) -> list[str]:
        return ["".join(str(b) for b in t) for t in self.tuples]

    def literal(self) -> str:
        """Canonical relation literal, e.g. ``{00001,00101}``."""
        return "{" + ",".join(self.bitstrings()) + "}"

    # -- container protocol ----------------------------------------------

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[BitTuple]:
        return iter(self.tuples)

    def __contains__(self, t: object) -> bool:
        return t in set(self.tuples)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Relation)
            and self.arity == other.arity
            and self.tuples == other.tuples
        )

    def __hash__(self) -> int:
        return hash((self.arity, self.tuples))

    def __repr__(self) -> str:
        return f"Relation({self.arity}, {self.literal()})"


@dataclass(frozen=True)
class Permutation:
    """A bijection on argument positions 1..size, given by its image array."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise SizeMismatch(f"image {self.image} is not a bijection on 1..{len(self.image)}")

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for j, i in enumerate(self.image, start=1):
            inv[i - 1] = j
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


# -- construction ---------------------------------------------------------


def relation_from_tuples(arity: int, tuples: Iterable[Sequence[int]]) -> Relation:
    """Deduplicate and canonicalize an explicit tuple list."""
    return Relation(arity, tuples)


BUILTIN_IDS = ("OR", "NAND", "EVEN", "ODD", "R13", "EQ", "F", "T", "COLS", "NEQ")

_FIXED_BUILTINS = {
    "R13": (3, [(0, 0, 1), (0, 1, 0), (1, 0, 0)]),
    "EQ": (2, [(0, 0), (1, 1)]),
    "NEQ": (2, [(0, 1), (1, 0)]),
    "F": (1, [(0,)]),
    "T": (1, [(1,)]),
}


def builtin(name: str, n: int | None = None) -> Relation:
    """The named relation; parameterized families require ``n``.

    COLS^n is the 2^n-ary relation with n rows whose column j (0-indexed,
    left to right) is the n-bit big-endian encoding of j.
    """
    if name in _FIXED_BUILTINS:
        if n is not None:
            raise ArityOutOfRange(f"{name} takes no arity parameter")
        return Relation(*_FIXED_BUILTINS[name])
    if name not in BUILTIN_IDS:
        raise ArityOutOfRange(f"unknown builtin {name!r}")
    if n is None:
        raise ArityOutOfRange(f"{name} requires an arity parameter")
    if name == "COLS":
        if not 1 <= n <= 4:
            raise ArityOutOfRange(f"COLS^n needs 1 <= n <= 4 (arity 2^n <= {MAX_ARITY}), got {n}")
        rows = []
        for i in range(1, n + 1):
            rows.append(tuple((j >> (n - i)) & 1 for j in range(1 << n)))
        return Relation(1 << n, rows)
    if not 1 <= n <= MAX_ARITY:
        raise ArityOutOfRange(f"{name}^n needs 1 <= n <= {MAX_ARITY}, got {n}")
    full = _cartesian((0, 1), repeat=n)
    if name == "OR":
        return Relation(n, [t for t in full if any(t)])
    if name == "NAND":
        return Relation(n, [t for t in full if not all(t)])
    if name == "EVEN":
        return Relation(n, [t for t in full if sum(t) % 2 == 0])
    if name == "ODD":
        return Relation(n, [t for t in full if sum(t) % 2 == 1])
    raise ArityOutOfRange(f"unknown builtin {name!r}")


def full_relation(arity: int) -> Relation:
    """All 2^arity tuples."""
    return Relation(arity, _cartesian((0, 1), repeat=arity))


# -- derivation rules and algebra ------------------------------------------


def identify_args(rel: Relation, i: int, j: int) -> Relation:
    """Keep tuples with t[i] = t[j] and delete coordinate j (1-based, i < j)."""
    if rel.arity == 1:
        raise Underflow("cannot identify arguments of a unary relation")
    if not 1 <= i < j <= rel.arity:
        raise ArityOutOfRange(f"need 1 <= i < j <= {rel.arity}, got ({i}, {j})")
    kept = [t[: j - 1] + t[j:] for t in rel.tuples if t[i - 1] == t[j - 1]]
    return Relation(rel.arity - 1, kept)


def permute_args(rel: Relation, perm: Permutation) -> Relation:
    """R'(x_1..x_n) = R(x_{perm(1)}, .., x_{perm(n)}); tuple t moves coordinate j to perm(j)."""
    if perm.size != rel.arity:
        raise SizeMismatch(f"permutation size {perm.size} != arity {rel.arity}")
    out = []
    for t in rel.tuples:
        s = [0] * rel.arity
        for pos, b in enumerate(t, start=1):
            s[perm(pos) - 1] = b
        out.append(tuple(s))
    return Relation(rel.arity, out)


def irredundant_core(rel: Relation) -> Relation:
    """Remove duplicate matrix rows; the identity map under set semantics."""
    return rel


def dual(rel: Relation) -> Relation:
    """Tuple-wise bit complement; an involution."""
    return Relation(rel.arity, [tuple(1 - b for b in t) for t in rel.tuples])


def neq_pad(rel: Relation, m: int) -> Relation:
    """Append the complements of the first m coordinates: coordinate n+i = 1 - t[i]."""
    if not 1 <= m <= rel.arity:
        raise ArityOutOfRange(f"need 1 <= m <= {rel.arity}, got {m}")
    if rel.arity + m > MAX_ARITY:
        raise ArityOutOfRange(f"padded arity {rel.arity + m} exceeds {MAX_ARITY}")
    return Relation(rel.arity + m, [t + tuple(1 - b for b in t[:m]) for t in rel.tuples])


def product(r1: Relation, r2: Relation, *rest: Relation) -> Relation:
    """Cartesian product: {s ++ t : s in R1, t in R2} (variadic)."""
    rels = (r1, r2) + rest
    arity = sum(r.arity for r in rels)
    if arity > MAX_ARITY:
        raise ArityOutOfRange(f"combined arity {arity} exceeds {MAX_ARITY}")
    tuples = [()]
    for r in rels:
        tuples = [s + t for s in tuples for t in r.tuples]
    return Relation(arity, tuples)


def duplicate_column(rel: Relation, i: int) -> Relation:
    """Append a copy of coordinate i as a new last coordinate."""
    if not 1 <= i <= rel.arity:
        raise ArityOutOfRange(f"no coordinate {i} in arity {rel.arity}")
    if rel.arity + 1 > MAX_ARITY:
        raise ArityOutOfRange("arity cap exceeded")
    return Relation(rel.arity + 1, [t + (t[i - 1],) for t in rel.tuples])
