"""The normative relation literal grammar (CLI and fixture files).

    relation  := "{" bitstring ("," bitstring)* "}" | builtin
               | "conj(" INT ";" atom ("," atom)* ")"
    builtin   := ("OR"|"NAND"|"EVEN"|"ODD") "^" INT | "R13" | "EQ" | "F" | "T"
               | "COLS^" INT | "WB:" COCLONE_ID
    atom      := relation "@[" INT ("," INT)* "]"

An atom constrains the listed 1-based variable positions of the ambient
relation; repeated indices are allowed.  Example: ``conj(3; OR^2@[1,2],
T@[3])`` is the IS^2_0 weak base.

Derivation chains (the ``derive`` subcommand) use
``<COCLONE_ID>(COLS^<s>) [id(i,j) | irr | pi(i1,...,in)]*``.
"""

from __future__ import annotations

import re

from .catalog import Identify, Irr, PermuteStep, RuleChain, parse_coclone_id, weak_base
from .definability import Atom, conjunction_relation
from .errors import ParseError
from .relation import Relation, builtin

_WORD_RE = re.compile(r"[A-Za-z0-9_:^]+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def done(self) -> bool:
        self.ws()
        return self.i >= len(self.text)

    def peek(self) -> str:
        self.ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, s: str):
        self.ws()
        if not self.text.startswith(s, self.i):
            raise ParseError(f"expected {s!r}", self.text, self.i)
        self.i += len(s)

    def int_(self) -> int:
        self.ws()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            raise ParseError("expected an integer", self.text, self.i)
        v = int(self.text[self.i : j])
        self.i = j
        return v

    def word(self) -> str:
        self.ws()
        m = _WORD_RE.match(self.text, self.i)
        if not m:
            raise ParseError("expected a name", self.text, self.i)
        self.i = m.end()
        return m.group()


def _parse_relation(sc: _Scanner) -> Relation:
    ch = sc.peek()
    if ch == "{":
        sc.take("{")
        rows = []
        while True:
            bits = sc.word()
            if not re.fullmatch(r"[01]+", bits):
                raise ParseError(f"bad bitstring {bits!r}", sc.text, sc.i)
            rows.append(tuple(int(b) for b in bits))
            if sc.peek() == ",":
                sc.take(",")
                continue
            sc.take("}")
            break
        if len({len(r) for r in rows}) != 1:
            raise ParseError("bitstrings of unequal length", sc.text, sc.i)
        return Relation(len(rows[0]), rows)
    start = sc.i
    w = sc.word()
    if w == "conj":
        sc.take("(")
        n = sc.int_()
        sc.take(";")
        atoms = []
        while True:
            rel = _parse_relation(sc)
            sc.take("@[")
            positions = [sc.int_()]
            while sc.peek() == ",":
                sc.take(",")
                positions.append(sc.int_())
            sc.take("]")
            if any(not 1 <= p <= n for p in positions):
                raise ParseError(f"atom position out of 1..{n}", sc.text, sc.i)
            atoms.append(Atom(rel, tuple(positions)))
            if sc.peek() == ",":
                sc.take(",")
                continue
            sc.take(")")
            break
        return conjunction_relation(n, atoms)
    m = re.fullmatch(r"(OR|NAND|EVEN|ODD|COLS)\^(\d+)", w)
    if m:
        return builtin(m.group(1), int(m.group(2)))
    if w in ("R13", "EQ", "F", "T"):
        return builtin(w)
    if w.startswith("WB:"):
        try:
            return weak_base(parse_coclone_id(w[3:]))
        except Exception as exc:
            raise ParseError(f"bad weak-base reference {w!r}: {exc}", sc.text, start)
    raise ParseError(f"unknown relation literal {w!r}", sc.text, start)


def parse_relation(text: str) -> Relation:
    sc = _Scanner(text)
    rel = _parse_relation(sc)
    if not sc.done():
        raise ParseError("trailing input after relation literal", text, sc.i)
    return rel


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside any brackets (for comma-joined literals)."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "{[(":
            depth += 1
        elif ch in "}])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def parse_chain(text: str) -> RuleChain:
    sc = _Scanner(text)
    name = sc.word()
    m = re.fullmatch(r"([A-Za-z0-9_]+)\(COLS\^(\d+)\)", name)
    if m:
        cid, s = m.group(1), int(m.group(2))
    else:
        cid = name
        sc.take("(")
        inner = sc.word()
        mm = re.fullmatch(r"COLS\^(\d+)", inner)
        if not mm:
            raise ParseError("expected COLS^<s> after the start clone", text, sc.i)
        s = int(mm.group(1))
        sc.take(")")
    steps = []
    while not sc.done():
        w = sc.word()
        if w == "irr":
            steps.append(Irr())
        elif w == "id":
            sc.take("(")
            i = sc.int_()
            sc.take(",")
            j = sc.int_()
            sc.take(")")
            steps.append(Identify(i, j))
        elif w == "pi":
            sc.take("(")
            image = [sc.int_()]
            while sc.peek() == ",":
                sc.take(",")
                image.append(sc.int_())
            sc.take(")")
            steps.append(PermuteStep(tuple(image)))
        else:
            raise ParseError(f"unknown chain step {w!r}", text, sc.i)
    return RuleChain(parse_coclone_id(cid), s, tuple(steps))
