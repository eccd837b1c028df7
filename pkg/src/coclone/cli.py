"""Command-line frontend.

Exit codes: 0 = success / all checks pass / YES; 1 = verification failure,
NO, or an unclassified relation; 2 = usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog as cat
from .definability import qpp_definable
from .errors import CocloneError, ParseError
from .galois import c_cols, pol_k, ppol_k
from .lattice import (
    classify,
    classify_diagnostic,
    derivation_replay,
    inclusion_order,
    is_minimal_weak_base,
    verify_table,
)
from .literals import parse_chain, parse_relation, split_top_level


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coclone", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a relation against the catalog")
    c.add_argument("relation", nargs="?")
    c.add_argument("--n-max", type=int, default=4)
    c.add_argument("--fixtures", help="file of relation literals, one per line, # comments")

    w = sub.add_parser("weakbase", help="print a catalog weak base")
    w.add_argument("id", help="co-clone id (e.g. IE2, IS2_00) or IS family (e.g. IS00) with --n")
    w.add_argument("--n", type=int)
    w.add_argument("--n-max", type=int, default=4)

    v = sub.add_parser("verify-table", help="verify every catalog entry")
    v.add_argument("--n-max", type=int, default=4)
    v.add_argument("--k-partial", type=int, default=3)
    v.add_argument("--exhaustive-minimality", action="store_true")
    v.add_argument("--slow-k4", action="store_true")
    v.add_argument("--json", action="store_true")

    m = sub.add_parser("minimal", help="minimality verdict for a relation")
    m.add_argument("relation")
    m.add_argument("--n-max", type=int, default=4)
    m.add_argument("--exhaustive", action="store_true")

    d = sub.add_parser("define", help="decide quantifier-free p.p. definability")
    d.add_argument("relation")
    d.add_argument("--lang", required=True, help="comma-separated relation literals")
    d.add_argument("--eq", action="store_true")

    cc = sub.add_parser("cols", help="print C(COLS^s) for a co-clone's base")
    cc.add_argument("s", type=int)
    cc.add_argument("--coclone", required=True)
    cc.add_argument("--n-max", type=int, default=4)

    for name in ("pol", "ppol"):
        q = sub.add_parser(name, help=f"{name} fingerprint of a relation")
        q.add_argument("relation")
        q.add_argument("-k", type=int, required=True)
        q.add_argument("--members", action="store_true")
        q.add_argument("--hex", action="store_true")
        if name == "ppol":
            q.add_argument("--slow", action="store_true")

    dv = sub.add_parser("derive", help="replay a derivation chain")
    dv.add_argument("chain", help="catalog id with a stored chain, or a chain literal")
    dv.add_argument("--n-max", type=int, default=4)

    lt = sub.add_parser("lattice", help="the computed inclusion order")
    lt.add_argument("--dot", action="store_true")
    lt.add_argument("--n-max", type=int, default=4)
    return p


def _cmd_classify(args) -> int:
    if args.fixtures:
        failures = 0
        with open(args.fixtures, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                cid = classify(parse_relation(line), args.n_max)
                print(f"{line}\t{cid.text if cid else 'Unknown'}")
                failures += cid is None
        return 1 if failures else 0
    if not args.relation:
        print("classify: a relation literal or --fixtures is required", file=sys.stderr)
        return 2
    rel = parse_relation(args.relation)
    cid = classify(rel, args.n_max)
    if cid is None:
        below = ", ".join(i.text for i in classify_diagnostic(rel, args.n_max))
        print(f"Unknown (fingerprint sits below: {below})")
        return 1
    print(cid.text)
    return 0


def _cmd_weakbase(args) -> int:
    text = args.id
    if args.n is not None:
        text = f"IS{args.n}_{text[2:]}" if text.startswith("IS") else text
    entry = cat.get_entry(cat.parse_coclone_id(text), args.n_max)
    print(cat.conj_literal(entry))
    print(entry.weak_base.literal())
    return 0


def _cmd_verify(args) -> int:
    report = verify_table(
        n_max=args.n_max,
        k_partial=args.k_partial,
        exhaustive_minimality=args.exhaustive_minimality,
        slow_k4=args.slow_k4,
    )
    if args.json:
        print(report.to_json())
    else:
        for line in report.lines():
            print(line)
    return 0 if report.passed else 1


def _cmd_minimal(args) -> int:
    rel = parse_relation(args.relation)
    cid = classify(rel)
    if cid is None:
        print("Unknown: relation does not match any catalog co-clone")
        return 1
    verdict = is_minimal_weak_base(rel, cid, args.n_max, exhaustive=args.exhaustive or None)
    print(f"{cid.text}: {'minimal' if verdict.minimal else 'NOT minimal'} "
          f"({verdict.mode}, {verdict.checked_subsets} subsets checked)")
    for w in verdict.witnesses:
        tag = w.classified.text if w.classified else "Unknown"
        rel_flag = "= id" if w.generates_id else ("<= id" if w.below_id else "not <= id")
        removed = ",".join("".join(map(str, t)) for t in w.removed)
        print(f"  removed {{{removed}}}: {tag} ({rel_flag})")
    return 0 if verdict.minimal else 1


def _cmd_define(args) -> int:
    target = parse_relation(args.relation)
    names = {}
    gamma = []
    for text in split_top_level(args.lang):
        rel = parse_relation(text)
        gamma.append(rel)
        names.setdefault(rel, text)
    ok, witness = qpp_definable(target, gamma, allow_eq=args.eq)
    if ok:
        print("YES")
        for atom in witness:
            print(atom.render(names))
        return 0
    print("NO")
    return 1


def _cmd_cols(args) -> int:
    entry = cat.get_entry(cat.parse_coclone_id(args.coclone), args.n_max)
    print(c_cols(entry.base, args.s).literal())
    return 0


def _cmd_fingerprint(args, partial: bool) -> int:
    rel = parse_relation(args.relation)
    fp = ppol_k([rel], args.k, slow=args.slow) if partial else pol_k([rel], args.k)
    for m in range(1, args.k + 1):
        print(f"layer {m}: {fp.count(m)}")
        if args.members:
            from .funcs import PartialFn, TotalFn

            mk = PartialFn.from_table_int if partial else TotalFn.from_table_int
            print("  " + " ".join(mk(m, i).text() for i in fp.member_ints(m)))
    if args.hex:
        for m, dump in fp.hexdump().items():
            print(f"hex {m}: {dump}")
    return 0


def _cmd_derive(args) -> int:
    text = args.chain.strip()
    if "(" not in text:
        entry = cat.get_entry(cat.parse_coclone_id(text), args.n_max)
        if entry.chain is None:
            print(f"{entry.id.text} has no stored derivation chain", file=sys.stderr)
            return 2
        result = derivation_replay(entry.chain, args.n_max)
        print(result.literal())
        match = result == entry.weak_base
        print(f"matches weak base: {'yes' if match else 'NO'}")
        return 0 if match else 1
    result = derivation_replay(parse_chain(text), args.n_max)
    print(result.literal())
    return 0


def _cmd_lattice(args) -> int:
    order = inclusion_order(args.n_max)
    if args.dot:
        print(order.to_dot())
    else:
        for a, b in order.hasse_edges():
            print(f"{a.text} < {b.text}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "weakbase":
            return _cmd_weakbase(args)
        if args.command == "verify-table":
            return _cmd_verify(args)
        if args.command == "minimal":
            return _cmd_minimal(args)
        if args.command == "define":
            return _cmd_define(args)
        if args.command == "cols":
            return _cmd_cols(args)
        if args.command == "pol":
            return _cmd_fingerprint(args, partial=False)
        if args.command == "ppol":
            return _cmd_fingerprint(args, partial=True)
        if args.command == "derive":
            return _cmd_derive(args)
        if args.command == "lattice":
            return _cmd_lattice(args)
        parser.error(f"unknown command {args.command}")
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except CocloneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
