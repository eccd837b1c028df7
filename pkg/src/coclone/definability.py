"""Quantifier-free primitive positive definability, prime implicates and
IHSB shape checks.

The q.p.p. machinery is extensional: an atom Q@positions (repeats allowed)
is *entailed* by R when every tuple of R satisfies it; the canonical
conjunction of all entailed atoms is the smallest relation over the same
variables that is q.p.p.-definable from the language and contains R, so R
is q.p.p.-definable exactly when the canonical conjunction collapses to R.

For large position spaces the decision procedure enumerates entailed atoms
depth-first with prefix pruning and stops as soon as the accumulated
conjunction has been cut down to R; the atoms seen up to that point already
form a valid witness definition.  Below an enumeration-size threshold the
witness is the complete entailed-atom list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityOutOfRange, EmptyRelation
from .kernels import covering_atoms_pass
from .relation import Relation, builtin

# full enumeration (exact entailed-atom witness) below this position count
_EXHAUSTIVE_LIMIT = 1 << 22


@dataclass(frozen=True)
class Atom:
    """A constraint: ``relation`` applied at 1-based ambient positions."""

    relation: Relation
    positions: tuple[int, ...]

    def __post_init__(self):
        if len(self.positions) != self.relation.arity:
            raise ArityOutOfRange(
                f"{len(self.positions)} positions for arity {self.relation.arity}"
            )

    def admits(self, t: Sequence[int]) -> bool:
        return tuple(t[p - 1] for p in self.positions) in self.relation

    def render(self, names: dict[Relation, str] | None = None) -> str:
        label = (names or {}).get(self.relation) or self.relation.literal()
        return label + "@[" + ",".join(str(p) for p in self.positions) + "]"


def atom_relation(n: int, atom: Atom) -> Relation:
    """The n-ary relation of all assignments admitted by the atom."""
    return conjunction_relation(n, [atom])


def conjunction_relation(n: int, atoms: Iterable[Atom]) -> Relation:
    """Evaluate a conjunction of atoms extensionally over n variables."""
    alive = np.ones(1 << n, dtype=bool)
    for atom in atoms:
        q = atom.relation.arity
        shifts = [n - p for p in atom.positions]  # bit of position p = bit (n-p)
        codes = np.arange(1 << n, dtype=np.int64)
        word = np.zeros(1 << n, dtype=np.int64)
        for s in shifts:
            word = (word << 1) | ((codes >> s) & 1)
        alive &= atom.relation.membership[word]
    rows = [tuple((int(c) >> (n - 1 - j)) & 1 for j in range(n)) for c in np.nonzero(alive)[0]]
    return Relation(n, rows)


def _eq_atoms(rel: Relation) -> list[Atom]:
    eq = builtin("EQ")
    n = rel.arity
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if all(t[i - 1] == t[j - 1] for t in rel.tuples):
                out.append(Atom(eq, (i, j)))
    return out


def _scan(rel: Relation, gamma: Sequence[Relation], allow_eq: bool, *, early_stop: bool):
    """Shared atom scan.  Returns (atoms, alive bitset, complete: bool)."""
    if len(rel) == 0:
        raise EmptyRelation("cannot scan atoms of the empty relation")
    n = rel.arity
    alive = np.ones(1 << n, dtype=bool)
    atoms: list[Atom] = []
    target = len(rel) if early_stop else None
    complete = True
    for Q in gamma:
        limit = 1 << 16 if early_stop else n**Q.arity + 1
        pos_arr, overflow, stopped = covering_atoms_pass(
            rel, Q, alive, early_stop_target=target, collect_limit=limit
        )
        if overflow:
            complete = False
        for row in pos_arr:
            atoms.append(Atom(Q, tuple(int(p) + 1 for p in row)))
        if stopped:
            return atoms, alive, False
    if allow_eq:
        for atom in _eq_atoms(rel):
            atoms.append(atom)
            i, j = atom.positions
            codes = np.arange(1 << n, dtype=np.int64)
            keep = ((codes >> (n - i)) & 1) == ((codes >> (n - j)) & 1)
            alive &= keep
            if early_stop and int(alive.sum()) == len(rel):
                return atoms, alive, False
    return atoms, alive, complete


def entailed_atoms(rel: Relation, gamma: Sequence[Relation], allow_eq: bool) -> list[Atom]:
    """Every atom over Γ (plus EQ when allowed) satisfied by all tuples of R,
    in deterministic order: Γ order, positions lexicographic, EQ last."""
    atoms, _, complete = _scan(rel, gamma, allow_eq, early_stop=False)
    if not complete:
        raise MemoryError("entailed-atom enumeration overflowed its collection limit")
    return atoms


def canonical_conjunction(rel: Relation, gamma: Sequence[Relation], allow_eq: bool) -> Relation:
    """The relation of the conjunction of all entailed atoms; always ⊇ R."""
    _, alive, _ = _scan(rel, gamma, allow_eq, early_stop=False)
    n = rel.arity
    rows = [tuple((int(c) >> (n - 1 - j)) & 1 for j in range(n)) for c in np.nonzero(alive)[0]]
    return Relation(n, rows)


def qpp_definable(
    rel: Relation, gamma: Sequence[Relation], allow_eq: bool
) -> tuple[bool, list[Atom]]:
    """Decide R ∈ ⟨Γ⟩ under quantifier-free p.p. definitions.

    True iff the canonical conjunction equals R.  The witness is a valid
    q.p.p. definition of R whenever the answer is true: the full entailed
    atom list when the position space is small, otherwise the deterministic
    prefix of it that already pins R down.
    """
    small = all(rel.arity ** Q.arity <= _EXHAUSTIVE_LIMIT for Q in gamma)
    atoms, alive, _ = _scan(rel, gamma, allow_eq, early_stop=not small)
    definable = int(alive.sum()) == len(rel) and bool(alive[rel.codes].all())
    return definable, atoms


# -- prime implicates and IHSB shapes ---------------------------------------


@dataclass(frozen=True)
class Clause:
    """A CNF clause: literals (1-based variable, polarity), no duplicates."""

    literals: frozenset[tuple[int, bool]]

    def __post_init__(self):
        if not self.literals:
            raise ArityOutOfRange("clauses must be nonempty")
        if len({v for v, _ in self.literals}) != len(self.literals):
            raise ArityOutOfRange(f"duplicate variable in clause {self.literals}")

    @property
    def width(self) -> int:
        return len(self.literals)

    def satisfied_by(self, t: Sequence[int]) -> bool:
        return any(bool(t[v - 1]) == pol for v, pol in self.literals)

    def render(self) -> str:
        parts = sorted(self.literals)
        return "(" + " | ".join(("" if pol else "~") + f"x{v}" for v, pol in parts) + ")"


def _entailed_clause(rel: Relation, lits) -> bool:
    return all(any(bool(t[v - 1]) == pol for v, pol in lits) for t in rel.tuples)


def prime_implicates(rel: Relation, max_width: int) -> set[Clause]:
    """All entailed clauses of width <= max_width with no entailed proper
    subclause.  At max_width = arity their conjunction defines R exactly."""
    if not 1 <= max_width <= rel.arity:
        raise ArityOutOfRange(f"max_width must be 1..{rel.arity}, got {max_width}")
    n = rel.arity
    entailed: set[frozenset] = set()
    primes: set[Clause] = set()
    for w in range(1, max_width + 1):
        for vars_ in combinations(range(1, n + 1), w):
            for pols in _cartesian((False, True), repeat=w):
                lits = frozenset(zip(vars_, pols))
                if not _entailed_clause(rel, lits):
                    continue
                entailed.add(lits)
                if any(
                    frozenset(sub) in entailed
                    for k in range(1, w)
                    for sub in combinations(lits, k)
                ):
                    continue
                primes.add(Clause(lits))
    return primes


def clauses_relation(n: int, clauses: Iterable[Clause]) -> Relation:
    """The n-ary relation satisfying every clause (CNF evaluation oracle)."""
    cl = list(clauses)
    rows = [t for t in _cartesian((0, 1), repeat=n) if all(c.satisfied_by(t) for c in cl)]
    return Relation(n, rows)


def ihsb_check(clauses: Iterable[Clause], n: int, sign: str) -> bool:
    """True iff every clause fits the IHSB shapes for the sign.

    plus: positive clauses of width <= n, negative units, or implications
    (one negative, one positive literal); minus is the dual reading.
    """
    if sign not in ("plus", "minus"):
        raise ArityOutOfRange(f"sign must be 'plus' or 'minus', got {sign!r}")
    want = sign == "plus"
    for c in clauses:
        pols = [pol for _, pol in c.literals]
        npos = sum(pols)
        nneg = len(pols) - npos
        main, unit = (npos, nneg) if want else (nneg, npos)
        if unit == 0 and 1 <= main <= n:
            continue  # pure clause of bounded width
        if main == 0 and unit == 1:
            continue  # unit of the opposite sign
        if main == 1 and unit == 1:
            continue  # implication
        return False
    return True
