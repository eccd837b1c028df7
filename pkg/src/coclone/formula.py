"""Propositional formulas for relation construction.

The body of a formula is a conjunction of small constraint shapes: literals,
clauses, implications and biconditionals with conjunctive sides, and parity
constraints.  These shapes cover every weak-base formula in the catalog.
Evaluation on a full assignment is total and deterministic; the relation of
a formula collects its satisfying assignments in variable-list order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Mapping, Union

from .errors import UnboundVariable
from .relation import Relation


@dataclass(frozen=True)
class Lit:
    """A single literal; as a conjunct it pins the variable to a constant."""

    var: str
    positive: bool = True

    def holds(self, a: Mapping[str, int]) -> bool:
        return bool(a[self.var]) == self.positive


@dataclass(frozen=True)
class Or:
    """Disjunction of literals."""

    lits: tuple[Lit, ...]

    def holds(self, a: Mapping[str, int]) -> bool:
        return any(l.holds(a) for l in self.lits)


@dataclass(frozen=True)
class Implies:
    """conj(if_all) -> conj(then_all)."""

    if_all: tuple[Lit, ...]
    then_all: tuple[Lit, ...]

    def holds(self, a: Mapping[str, int]) -> bool:
        if all(l.holds(a) for l in self.if_all):
            return all(l.holds(a) for l in self.then_all)
        return True


@dataclass(frozen=True)
class Iff:
    """conj(left) <-> conj(right)."""

    left: tuple[Lit, ...]
    right: tuple[Lit, ...]

    def holds(self, a: Mapping[str, int]) -> bool:
        return all(l.holds(a) for l in self.left) == all(l.holds(a) for l in self.right)


@dataclass(frozen=True)
class Parity:
    """Sum of the listed variables is even (odd=False) or odd (odd=True)."""

    vars: tuple[str, ...]
    odd: bool = False

    def holds(self, a: Mapping[str, int]) -> bool:
        return sum(a[v] for v in self.vars) % 2 == (1 if self.odd else 0)


Conjunct = Union[Lit, Or, Implies, Iff, Parity]


def _referenced(c: Conjunct) -> tuple[str, ...]:
    if isinstance(c, Lit):
        return (c.var,)
    if isinstance(c, Or):
        return tuple(l.var for l in c.lits)
    if isinstance(c, Implies):
        return tuple(l.var for l in c.if_all + c.then_all)
    if isinstance(c, Iff):
        return tuple(l.var for l in c.left + c.right)
    return tuple(c.vars)


@dataclass(frozen=True)
class FormulaAST:
    """An ordered variable list and a conjunction of constraint shapes."""

    variables: tuple[str, ...]
    body: tuple[Conjunct, ...]

    def __post_init__(self):
        names = set(self.variables)
        if len(names) != len(self.variables):
            raise UnboundVariable(f"duplicate variable names in {self.variables}")
        for c in self.body:
            for v in _referenced(c):
                if v not in names:
                    raise UnboundVariable(f"variable {v!r} not in variable list {self.variables}")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        return all(c.holds(assignment) for c in self.body)


def relation_from_formula(f: FormulaAST) -> Relation:
    """The relation of exactly the satisfying assignments, in variable-list order."""
    sat = []
    for bits in _cartesian((0, 1), repeat=f.arity):
        if f.evaluate(dict(zip(f.variables, bits))):
            sat.append(bits)
    return Relation(f.arity, sat)
