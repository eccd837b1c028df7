"""The weak-base catalog: one entry per Boolean co-clone with a finite base.

Every entry records the co-clone identifier, its core size, the weak base
built from its defining formula (variables named x1..xn, x, c0, c1), the
dual co-clone with the argument permutation realizing tuple-wise
complementation, and, for the eight co-clones whose weak bases derive from
C(COLS^s) by column collapsing, the derivation chain that replays to the
weak base bit-exactly under the normative COLS convention.

Derivation-chain data notes (all replays are machine-checked):

* The IM2 chain needs four identifications to take the 8-ary C(COLS^3) to
  the 4-ary base; the second (2=3) restores consistent arity bookkeeping.
* The ID2 chain makes the two constant-1 columns explicit via (6=7); the
  irredundant-core step here is row deduplication only.
* The IV1/IV2 chains collapse the three redundant all-ones columns onto the
  last coordinate via (2=8), (3=7), (4=6); the final permutation
  pi(4,2,3,1,5) then lands the published base exactly.

Identification steps read (i=j) as: keep rows with t[i] = t[j], delete
coordinate j; indices refer to the current (post-collapse) arity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

from .errors import ArityOutOfRange
from .formula import FormulaAST, Iff, Implies, Lit, Or, Parity, relation_from_formula
from .relation import MAX_ARITY, Permutation, Relation

IS_FAMILIES = ("IS0", "IS02", "IS01", "IS00", "IS1", "IS12", "IS11", "IS10")

PLAIN_FAMILIES = (
    "IBF", "IR0", "IR1", "IR2",
    "IM", "IM0", "IM1", "IM2",
    "ID", "ID1", "ID2",
    "IL", "IL0", "IL1", "IL2", "IL3",
    "IV", "IV0", "IV1", "IV2",
    "IE", "IE0", "IE1", "IE2",
    "IN", "IN2",
    "II", "II0", "II1",
    "BR",
)


@dataclass(frozen=True, order=True)
class CoCloneId:
    """A co-clone tag, parameterized by n >= 2 for the eight IS chains."""

    family: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.family in IS_FAMILIES:
            if self.n is None or self.n < 2:
                raise ArityOutOfRange(f"{self.family} requires a parameter n >= 2")
        elif self.family in PLAIN_FAMILIES:
            if self.n is not None:
                raise ArityOutOfRange(f"{self.family} takes no parameter")
        else:
            raise ArityOutOfRange(f"unknown co-clone family {self.family!r}")

    @property
    def text(self) -> str:
        if self.n is None:
            return self.family
        return f"IS{self.n}_{self.family[2:]}"

    def __str__(self) -> str:
        return self.text


_IS_RE = re.compile(r"^IS(\d+)_(0|02|01|00|1|12|11|10)$")


def parse_coclone_id(text: str) -> CoCloneId:
    text = text.strip()
    m = _IS_RE.match(text)
    if m:
        return CoCloneId("IS" + m.group(2), int(m.group(1)))
    if text in PLAIN_FAMILIES:
        return CoCloneId(text)
    raise ArityOutOfRange(f"unknown co-clone id {text!r}")


@dataclass(frozen=True)
class Identify:
    i: int
    j: int


@dataclass(frozen=True)
class PermuteStep:
    image: tuple[int, ...]


@dataclass(frozen=True)
class Irr:
    pass


RuleStep = Union[Identify, PermuteStep, Irr]


@dataclass(frozen=True)
class RuleChain:
    """A derivation start C(COLS^s) for a clone, then column-collapse steps."""

    start: CoCloneId
    s: int
    steps: tuple[RuleStep, ...]


@dataclass(frozen=True)
class CatalogEntry:
    id: CoCloneId
    core_size: int
    formula: FormulaAST
    dual_id: CoCloneId
    dual_perm: Permutation
    chain: Optional[RuleChain] = None
    weak_base: Relation = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weak_base", relation_from_formula(self.formula))

    @property
    def base(self) -> list[Relation]:
        """The weak base as a one-relation constraint language."""
        return [self.weak_base]


def _x(i: int) -> str:
    return f"x{i}"


def _lits(names, positive=True):
    return tuple(Lit(v, positive) for v in names)


def _neq(a: str, b: str) -> Parity:
    return Parity((a, b), odd=True)


def _identity_perm(n: int) -> Permutation:
    return Permutation.identity(n)


def _swap_last_two(n: int) -> Permutation:
    return Permutation(tuple(range(1, n - 1)) + (n, n - 1))


def _is_entry(family: str, n: int) -> CatalogEntry:
    xs = tuple(_x(i) for i in range(1, n + 1))
    positive = family in ("IS0", "IS02", "IS01", "IS00")
    has_x = family in ("IS01", "IS00", "IS11", "IS10")
    has_c0 = family in ("IS02", "IS00", "IS1", "IS12", "IS11", "IS10")
    has_c1 = family in ("IS0", "IS02", "IS01", "IS00", "IS12", "IS10")
    variables = xs + (("x",) if has_x else ()) + (("c0",) if has_c0 else ()) + (("c1",) if has_c1 else ())
    if len(variables) > MAX_ARITY:
        raise ArityOutOfRange(f"{family} with n={n} exceeds the arity cap")
    body: list = [Or(_lits(xs, positive))]
    if has_x:
        # positive side: x -> x1...xn; dual side: the complemented reading
        body.append(Implies((Lit("x", positive),), _lits(xs, positive)))
    if has_c0:
        body.append(Lit("c0", False))
    if has_c1:
        body.append(Lit("c1", True))
    dual_family = {"IS0": "IS1", "IS02": "IS12", "IS01": "IS11", "IS00": "IS10",
                   "IS1": "IS0", "IS12": "IS02", "IS11": "IS01", "IS10": "IS00"}[family]
    arity = len(variables)
    if family in ("IS02", "IS12", "IS00", "IS10"):
        dual_perm = _swap_last_two(arity)
    else:
        dual_perm = _identity_perm(arity)
    core = max(3, n) if family in ("IS00", "IS10") else n
    return CatalogEntry(
        id=CoCloneId(family, n),
        core_size=core,
        formula=FormulaAST(variables, tuple(body)),
        dual_id=CoCloneId(dual_family, n),
        dual_perm=dual_perm,
    )


def _plain_entries() -> list[CatalogEntry]:
    x1, x2, x3, x4 = _x(1), _x(2), _x(3), _x(4)
    ent = []

    def add(fam, core, variables, body, dual, perm, chain_steps=None, chain_s=None):
        cid = CoCloneId(fam)
        chain = None
        if chain_steps is not None:
            chain = RuleChain(cid, chain_s, tuple(chain_steps))
        ent.append(
            CatalogEntry(
                id=cid,
                core_size=core,
                formula=FormulaAST(tuple(variables), tuple(body)),
                dual_id=CoCloneId(dual),
                dual_perm=Permutation(tuple(perm)),
                chain=chain,
            )
        )

    add("IBF", 1, (x1, x2), [Iff((Lit(x1),), (Lit(x2),))], "IBF", (1, 2))
    add("IR0", 1, ("c0",), [Lit("c0", False)], "IR1", (1,),
        chain_steps=[Identify(1, 2), Irr()], chain_s=1)
    add("IR1", 1, ("c1",), [Lit("c1")], "IR0", (1,),
        chain_steps=[Identify(1, 2), Irr()], chain_s=1)
    add("IR2", 1, ("c0", "c1"), [Lit("c0", False), Lit("c1")], "IR2", (2, 1))

    imp12 = Implies((Lit(x1),), (Lit(x2),))
    add("IM", 1, (x1, x2), [imp12], "IM", (2, 1))
    add("IM0", 2, (x1, x2, "c0"), [imp12, Lit("c0", False)], "IM1", (2, 1, 3),
        chain_steps=[Identify(1, 2), Irr(), PermuteStep((3, 1, 2))], chain_s=2)
    add("IM1", 2, (x1, x2, "c1"), [imp12, Lit("c1")], "IM0", (2, 1, 3),
        chain_steps=[Identify(1, 2), Irr()], chain_s=2)
    add("IM2", 3, (x1, x2, "c0", "c1"), [imp12, Lit("c0", False), Lit("c1")], "IM2", (2, 1, 4, 3),
        chain_steps=[Identify(1, 2), Identify(1, 2), Identify(2, 3), Identify(2, 3),
                     Irr(), PermuteStep((3, 1, 2, 4))], chain_s=3)

    add("ID", 1, (x1, x2), [_neq(x1, x2)], "ID", (1, 2))
    add("ID1", 2, (x1, x2, "c0", "c1"), [_neq(x1, x2), Lit("c0", False), Lit("c1")],
        "ID1", (2, 1, 4, 3))
    add("ID2", 3, (x1, x2, x3, x4, "c0", "c1"),
        [Or(_lits((x1, x2))), _neq(x1, x3), _neq(x2, x4), Lit("c0", False), Lit("c1")],
        "ID2", (4, 3, 2, 1, 6, 5),
        chain_steps=[Identify(1, 2), Identify(6, 7), Irr(), PermuteStep((5, 4, 1, 3, 2, 6))],
        chain_s=3)

    add("IL", 2, (x1, x2, x3, x4), [Parity((x1, x2, x3, x4))], "IL", (1, 2, 3, 4))
    add("IL0", 2, (x1, x2, x3, "c0"), [Parity((x1, x2, x3)), Lit("c0", False)],
        "IL1", (1, 2, 3, 4))
    add("IL1", 2, (x1, x2, x3, "c1"), [Parity((x1, x2, x3), odd=True), Lit("c1")],
        "IL0", (1, 2, 3, 4))
    x5, x6, x7, x8 = _x(5), _x(6), _x(7), _x(8)
    add("IL2", 3, (x1, x2, x3, x4, x5, x6, "c0", "c1"),
        [Parity((x1, x2, x3)), _neq(x1, x4), _neq(x2, x5), _neq(x3, x6),
         Lit("c0", False), Lit("c1")],
        "IL2", (4, 5, 6, 1, 2, 3, 8, 7))
    add("IL3", 3, (x1, x2, x3, x4, x5, x6, x7, x8),
        [Parity((x1, x2, x3, x4)), _neq(x1, x5), _neq(x2, x6), _neq(x3, x7), _neq(x4, x8)],
        "IL3", (5, 6, 7, 8, 1, 2, 3, 4))

    # (neg x2 or neg x3 -> neg x4) is written contrapositively as x4 -> x2 x3.
    iv_iff = Iff((Lit(x1, False),), (Lit(x2, False), Lit(x3, False)))
    iv_imp = Implies((Lit(x4),), (Lit(x2), Lit(x3)))
    add("IV", 2, (x1, x2, x3, x4), [iv_iff, iv_imp], "IE", (1, 2, 3, 4))
    add("IV0", 2, (x1, x2, x3, "c0"), [iv_iff, Lit("c0", False)], "IE1", (1, 2, 3, 4))
    add("IV1", 3, (x1, x2, x3, x4, "c1"), [iv_iff, iv_imp, Lit("c1")], "IE0", (1, 2, 3, 4, 5),
        chain_steps=[Identify(2, 8), Identify(3, 7), Identify(4, 6),
                     Irr(), PermuteStep((4, 2, 3, 1, 5))], chain_s=3)
    add("IV2", 3, (x1, x2, x3, "c0", "c1"), [iv_iff, Lit("c0", False), Lit("c1")],
        "IE2", (1, 2, 3, 5, 4),
        chain_steps=[Identify(2, 8), Identify(3, 7), Identify(4, 6),
                     Irr(), PermuteStep((4, 2, 3, 1, 5))], chain_s=3)

    ie_iff = Iff((Lit(x1),), (Lit(x2), Lit(x3)))
    ie_imp = Implies((Lit(x4, False),), (Lit(x2, False), Lit(x3, False)))
    add("IE", 2, (x1, x2, x3, x4), [ie_iff, ie_imp], "IV", (1, 2, 3, 4))
    add("IE0", 3, (x1, x2, x3, x4, "c0"), [ie_iff, ie_imp, Lit("c0", False)],
        "IV1", (1, 2, 3, 4, 5),
        chain_steps=[Identify(1, 2), Identify(1, 2), Identify(1, 2),
                     Irr(), PermuteStep((5, 1, 2, 3, 4))], chain_s=3)
    add("IE1", 2, (x1, x2, x3, "c1"), [ie_iff, Lit("c1")], "IV0", (1, 2, 3, 4))
    add("IE2", 3, (x1, x2, x3, "c0", "c1"), [ie_iff, Lit("c0", False), Lit("c1")],
        "IV2", (1, 2, 3, 5, 4),
        chain_steps=[Identify(1, 2), Identify(1, 2), Identify(1, 2),
                     Irr(), PermuteStep((4, 1, 2, 3, 5))], chain_s=3)

    in_iff = Iff((Lit(x1), Lit(x4)), (Lit(x2), Lit(x3)))
    add("IN", 2, (x1, x2, x3, x4), [Parity((x1, x2, x3, x4)), in_iff], "IN", (1, 2, 3, 4))
    add("IN2", 3, (x1, x2, x3, x4, x5, x6, x7, x8),
        [Parity((x1, x2, x3, x4)), _neq(x1, x5), _neq(x2, x6), _neq(x3, x7), _neq(x4, x8),
         in_iff],
        "IN2", (5, 6, 7, 8, 1, 2, 3, 4))

    add("II", 2, (x1, x2, x3, x4),
        [Iff((Lit(x1),), (Lit(x2), Lit(x3))), Iff((Lit(x4, False),), (Lit(x2, False), Lit(x3, False)))],
        "II", (4, 2, 3, 1))
    add("II0", 2, (x1, x2, x3, "c0"),
        [Or(_lits((x1, x2), False)), Iff((Lit(x1, False), Lit(x2, False)), (Lit(x3, False),)),
         Lit("c0", False)],
        "II1", (1, 2, 3, 4))
    add("II1", 2, (x1, x2, x3, "c1"),
        [Or(_lits((x1, x2))), Iff((Lit(x1), Lit(x2)), (Lit(x3),)), Lit("c1")],
        "II0", (1, 2, 3, 4))

    # R^{1/3} on x1..x3: at least one, pairwise at most one.
    r13 = [Or(_lits((x1, x2, x3))), Or(_lits((x1, x2), False)),
           Or(_lits((x1, x3), False)), Or(_lits((x2, x3), False))]
    add("BR", 3, (x1, x2, x3, x4, x5, x6, "c0", "c1"),
        r13 + [_neq(x1, x4), _neq(x2, x5), _neq(x3, x6), Lit("c0", False), Lit("c1")],
        "BR", (4, 5, 6, 1, 2, 3, 8, 7))
    return ent


@lru_cache(maxsize=8)
def catalog(n_max: int = 4) -> tuple[CatalogEntry, ...]:
    """All catalog entries, IS chains instantiated for n = 2..n_max."""
    if n_max < 2:
        raise ArityOutOfRange(f"n_max must be >= 2, got {n_max}")
    plain = {e.id.family: e for e in _plain_entries()}
    ordered: list[CatalogEntry] = []
    for fam in ("IBF", "IR0", "IR1", "IR2", "IM", "IM0", "IM1", "IM2"):
        ordered.append(plain[fam])
    for is_fam in IS_FAMILIES:
        for n in range(2, n_max + 1):
            ordered.append(_is_entry(is_fam, n))
    for fam in ("ID", "ID1", "ID2", "IL", "IL0", "IL1", "IL2", "IL3",
                "IV", "IV0", "IV1", "IV2", "IE", "IE0", "IE1", "IE2",
                "IN", "IN2", "II", "II0", "II1", "BR"):
        ordered.append(plain[fam])
    return tuple(ordered)


def get_entry(cid: CoCloneId | str, n_max: int = 4) -> CatalogEntry:
    if isinstance(cid, str):
        cid = parse_coclone_id(cid)
    for e in catalog(n_max):
        if e.id == cid:
            return e
    raise ArityOutOfRange(f"{cid.text} not in catalog at n_max={n_max}")


def weak_base(cid: CoCloneId | str, n_max: int = 4) -> Relation:
    return get_entry(cid, n_max).weak_base


# -- conj-literal rendering -------------------------------------------------


def _conjunct_atom(c, variables: tuple[str, ...]) -> str:
    pos = {v: i + 1 for i, v in enumerate(variables)}

    def at(names) -> str:
        return "@[" + ",".join(str(pos[v]) for v in names) + "]"

    if isinstance(c, Lit):
        return ("T" if c.positive else "F") + at((c.var,))
    if isinstance(c, Or):
        names = tuple(l.var for l in c.lits)
        if all(l.positive for l in c.lits):
            return f"OR^{len(names)}" + at(names)
        if all(not l.positive for l in c.lits):
            return f"NAND^{len(names)}" + at(names)
    if isinstance(c, Parity):
        return ("ODD" if c.odd else "EVEN") + f"^{len(c.vars)}" + at(c.vars)
    # implications / biconditionals: spell the conjunct's own relation out
    seen: list[str] = []
    for v in _conjunct_vars(c):
        if v not in seen:
            seen.append(v)
    sub = FormulaAST(tuple(seen), (c,))
    return relation_from_formula(sub).literal() + at(seen)


def _conjunct_vars(c):
    if isinstance(c, Lit):
        return (c.var,)
    if isinstance(c, Or):
        return tuple(l.var for l in c.lits)
    if isinstance(c, Implies):
        return tuple(l.var for l in c.if_all + c.then_all)
    if isinstance(c, Iff):
        return tuple(l.var for l in c.left + c.right)
    return tuple(c.vars)


def conj_literal(entry: CatalogEntry) -> str:
    """The entry's weak base in the normative conj(...) literal grammar."""
    f = entry.formula
    atoms = ", ".join(_conjunct_atom(c, f.variables) for c in f.body)
    return f"conj({f.arity}; {atoms})"
