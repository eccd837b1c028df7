"""Classification against the catalog, the computed inclusion order,
derivation-chain replay, minimality verification and the full table check.

Classification matches the bounded-arity total fingerprint of a relation
against the catalog bases at rank K = max(3, n_max): each weak base is a
base of its co-clone, so equal fingerprints identify the co-clone, and the
pairwise-distinctness precondition is checked rather than assumed.  The
inclusion order realizes the Galois connection: id1 <= id2 (co-clone
inclusion) iff the polymorphism fingerprint of id2's base is contained in
that of id1's base.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .catalog import (
    CatalogEntry,
    CoCloneId,
    Identify,
    Irr,
    PermuteStep,
    RuleChain,
    catalog,
    get_entry,
)
from .errors import (
    ArityMismatch,
    ArityOutOfRange,
    ChainArityError,
    EmptyRelation,
    FingerprintCollision,
    SizeMismatch,
    Underflow,
)
from .galois import Fingerprint, c_cols, fingerprint_leq, pol_k, ppol_k
from .kernels import flatten_fingerprint_layers, pol_layers_match, worker_count
from .relation import Permutation, Relation, dual, identify_args, irredundant_core, permute_args


def _rank_for(n_max: int) -> int:
    K = max(3, n_max)
    if K > 4:
        raise ArityOutOfRange(f"classification rank {K} exceeds the total-function cap 4")
    return K


@lru_cache(maxsize=4)
def _catalog_fingerprints(n_max: int) -> tuple[tuple[CatalogEntry, Fingerprint], ...]:
    K = _rank_for(n_max)
    out = []
    for e in catalog(n_max):
        out.append((e, pol_k(e.base, K)))
    for (a, fa), (b, fb) in combinations(out, 2):
        if fa == fb:
            raise FingerprintCollision(
                f"{a.id.text} and {b.id.text} share a rank-{K} fingerprint; raise n_max/K"
            )
    return tuple(out)


@lru_cache(maxsize=4)
def _flat_targets(n_max: int) -> dict[str, tuple]:
    K = _rank_for(n_max)
    return {
        e.id.text: flatten_fingerprint_layers(fp.layers, K)
        for e, fp in _catalog_fingerprints(n_max)
    }


def classify(rel: Relation, n_max: int = 4) -> Optional[CoCloneId]:
    """The catalog co-clone whose base fingerprint equals pol_K({R}), or None."""
    if len(rel) == 0:
        raise EmptyRelation("cannot classify the empty relation")
    K = _rank_for(n_max)
    fp = pol_k([rel], K)
    for e, efp in _catalog_fingerprints(n_max):
        if fp == efp:
            return e.id
    return None


def classify_diagnostic(rel: Relation, n_max: int = 4) -> list[CoCloneId]:
    """For unclassified relations: minimal catalog co-clones whose base
    fingerprint contains pol_K({R}) - the chains the fingerprint sits below."""
    K = _rank_for(n_max)
    fp = pol_k([rel], K)
    above = [e.id for e, efp in _catalog_fingerprints(n_max) if fingerprint_leq(fp, efp)]
    order = inclusion_order(n_max)
    return [a for a in above if not any(b != a and order.leq(b, a) for b in above)]


def coclone_leq(rel: Relation, cid: CoCloneId | str, n_max: int = 4) -> bool:
    """Bounded order statement <R> <= cid: pol_K(cid's base) <= pol_K({R})."""
    K = _rank_for(n_max)
    e = get_entry(cid, n_max)
    target = dict(_catalog_fingerprints(n_max))[e]
    return fingerprint_leq(target, pol_k([rel], K))


@dataclass(frozen=True)
class InclusionOrder:
    """The computed co-clone inclusion order over the catalog ids."""

    ids: tuple[CoCloneId, ...]
    matrix: np.ndarray  # matrix[i, j] == True iff ids[i] <= ids[j]

    def leq(self, a: CoCloneId, b: CoCloneId) -> bool:
        return bool(self.matrix[self.ids.index(a), self.ids.index(b)])

    def pairs(self) -> list[tuple[CoCloneId, CoCloneId]]:
        return [(self.ids[i], self.ids[j]) for i, j in zip(*np.nonzero(self.matrix))]

    def bottoms(self) -> list[CoCloneId]:
        return [b for j, b in enumerate(self.ids) if self.matrix[:, j].all()]

    def tops(self) -> list[CoCloneId]:
        return [t for i, t in enumerate(self.ids) if self.matrix[i, :].all()]

    def hasse_edges(self) -> list[tuple[CoCloneId, CoCloneId]]:
        """Covering pairs of the strict order."""
        n = len(self.ids)
        strict = self.matrix & ~self.matrix.T
        edges = []
        for i in range(n):
            for j in range(n):
                if not strict[i, j]:
                    continue
                if any(strict[i, k] and strict[k, j] for k in range(n)):
                    continue
                edges.append((self.ids[i], self.ids[j]))
        return edges

    def to_dot(self) -> str:
        lines = ["digraph coclones {", "  rankdir=BT;"]
        for a, b in self.hasse_edges():
            lines.append(f'  "{a.text}" -> "{b.text}";')
        lines.append("}")
        return "\n".join(lines)


@lru_cache(maxsize=4)
def inclusion_order(n_max: int = 4) -> InclusionOrder:
    """id1 <= id2 iff pol(base of id2) is contained in pol(base of id1)."""
    entries = _catalog_fingerprints(n_max)
    ids = tuple(e.id for e, _ in entries)
    n = len(ids)
    matrix = np.zeros((n, n), dtype=bool)
    for i, (_, fi) in enumerate(entries):
        for j, (_, fj) in enumerate(entries):
            matrix[i, j] = fingerprint_leq(fj, fi)
    return InclusionOrder(ids, matrix)


def derivation_replay(chain: RuleChain, n_max: int = 4) -> Relation:
    """Execute C(COLS^s) for the chain's start clone, then every rule step."""
    entry = get_entry(chain.start, n_max)
    rel = c_cols(entry.base, chain.s)
    for step in chain.steps:
        try:
            if isinstance(step, Identify):
                rel = identify_args(rel, step.i, step.j)
            elif isinstance(step, PermuteStep):
                rel = permute_args(rel, Permutation(step.image))
            elif isinstance(step, Irr):
                rel = irredundant_core(rel)
            else:
                raise ChainArityError(f"unknown step {step!r}")
        except (ArityOutOfRange, ArityMismatch, SizeMismatch, Underflow) as exc:
            raise ChainArityError(f"step {step!r} inconsistent at arity {rel.arity}: {exc}") from exc
    return rel


# -- minimality --------------------------------------------------------------


@dataclass(frozen=True)
class SubsetWitness:
    removed: tuple[tuple[int, ...], ...]
    classified: Optional[CoCloneId]
    generates_id: bool
    below_id: bool


@dataclass(frozen=True)
class Verdict:
    id: CoCloneId
    minimal: bool
    mode: str  # "exhaustive" | "single-row"
    checked_subsets: int
    witnesses: tuple[SubsetWitness, ...]


def _subset_relation(rel: Relation, keep_mask: int) -> Relation:
    kept = [t for i, t in enumerate(rel.tuples) if keep_mask >> i & 1]
    return Relation(rel.arity, kept)


def is_minimal_weak_base(
    rel: Relation,
    cid: CoCloneId | str,
    n_max: int = 4,
    exhaustive: Optional[bool] = None,
) -> Verdict:
    """minimal iff no proper nonempty subset matches cid's fingerprint.

    Exhaustive mode (default for |R| <= 8) probes every proper subset with a
    layer-ascending fingerprint comparison; single-row mode removes one
    tuple at a time.  Witness detail: every probed subset in single-row
    mode and for |R| <= 8 exhaustive runs; larger exhaustive runs detail
    the single-row removals plus any matching subset found.
    """
    if isinstance(cid, str):
        cid = get_entry(cid, n_max).id
    got = classify(rel, n_max)
    if got != cid:
        raise ArityOutOfRange(
            f"precondition violated: relation classifies as {got.text if got else 'Unknown'}, not {cid.text}"
        )
    K = _rank_for(n_max)
    t = len(rel)
    if exhaustive is None:
        exhaustive = t <= 8
    flat, off, cnt = _flat_targets(n_max)[cid.text]
    target_fp = dict((e.id.text, fp) for e, fp in _catalog_fingerprints(n_max))[cid.text]

    def witness(keep_mask: int, detail: bool) -> SubsetWitness:
        sub = _subset_relation(rel, keep_mask)
        removed = tuple(tt for i, tt in enumerate(rel.tuples) if not keep_mask >> i & 1)
        cls = classify(sub, n_max) if detail else None
        below = fingerprint_leq(target_fp, pol_k([sub], K)) if detail else False
        return SubsetWitness(removed, cls, cls == cid, below)

    full_mask = (1 << t) - 1
    witnesses: list[SubsetWitness] = []
    matches: list[int] = []
    checked = 0
    if exhaustive:
        memb_buf = np.zeros(1 << rel.arity, dtype=bool)
        for keep_mask in range(1, full_mask):
            checked += 1
            kept_rows = [i for i in range(t) if keep_mask >> i & 1]
            sub_arr = rel.tuple_array[kept_rows]
            memb_buf[:] = False
            memb_buf[rel.codes[kept_rows]] = True
            if pol_layers_match(sub_arr, memb_buf, K, flat, off, cnt) == 0:
                matches.append(keep_mask)
        detail_masks = [full_mask & ~(1 << i) for i in range(t)] if t > 8 else range(1, full_mask)
        witnesses = [witness(m, True) for m in detail_masks]
        for m in matches:
            if t > 8 and m not in detail_masks:
                witnesses.append(witness(m, True))
    else:
        for i in range(t):
            keep_mask = full_mask & ~(1 << i)
            checked += 1
            w = witness(keep_mask, True)
            witnesses.append(w)
            if w.generates_id:
                matches.append(keep_mask)
    return Verdict(
        id=cid,
        minimal=not matches,
        mode="exhaustive" if exhaustive else "single-row",
        checked_subsets=checked,
        witnesses=tuple(witnesses),
    )


# -- table verification ------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    check: str
    subject: str
    expected: str
    observed: str
    passed: bool
    witness: Optional[str] = None

    def __post_init__(self):
        if not self.passed and self.witness is None:
            object.__setattr__(self, "witness", f"expected {self.expected}, observed {self.observed}")


@dataclass
class Report:
    n_max: int
    k_partial: int
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self) -> dict:
        ok = sum(1 for r in self.records if r.passed)
        return {"total": len(self.records), "passed": ok, "failed": len(self.records) - ok}

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_max": self.n_max,
                "k_partial": self.k_partial,
                "checks": [
                    {
                        "check": r.check,
                        "subject": r.subject,
                        "expected": r.expected,
                        "observed": r.observed,
                        "pass": r.passed,
                        "witness": r.witness,
                    }
                    for r in self.records
                ],
                "summary": self.summary(),
            },
            indent=2,
        )

    def lines(self) -> list[str]:
        out = []
        for r in self.records:
            mark = "PASS" if r.passed else "FAIL"
            out.append(f"[{mark}] {r.check:<14} {r.subject:<8} expected={r.expected} observed={r.observed}")
        s = self.summary()
        out.append(f"{s['passed']}/{s['total']} checks passed")
        return out


def _entry_checks(
    e: CatalogEntry,
    n_max: int,
    k_partial: int,
    exhaustive_minimality: bool,
    slow_k4: bool,
    base_override: Optional[Relation],
) -> list[CheckRecord]:
    recs: list[CheckRecord] = []
    wb = base_override if base_override is not None else e.weak_base
    subject = e.id.text

    def record(check, expected, observed, passed, witness=None):
        recs.append(CheckRecord(check, subject, expected, observed, passed, witness))

    try:
        got = classify(wb, n_max)
        record("classify", subject, got.text if got else "Unknown", got == e.id)
    except Exception as exc:  # aggregated, never aborts the table run
        record("classify", subject, f"error: {exc}", False)
        got = None

    if e.chain is not None:
        try:
            replayed = derivation_replay(e.chain, n_max)
            record(
                "replay", wb.literal(), replayed.literal(), replayed == wb,
                None if replayed == wb else f"chain {e.chain}",
            )
        except Exception as exc:
            record("replay", wb.literal(), f"error: {exc}", False)

    try:
        if got == e.id:
            verdict = is_minimal_weak_base(wb, e.id, n_max, exhaustive=exhaustive_minimality or None)
            bad = [w for w in verdict.witnesses if w.generates_id]
            record(
                "minimal", "minimal", "minimal" if verdict.minimal else "not minimal",
                verdict.minimal,
                None if verdict.minimal else f"subset witness: removed {bad[0].removed if bad else '?'}",
            )
        else:
            record("minimal", "minimal", "skipped: classification failed", False)
    except Exception as exc:
        record("minimal", "minimal", f"error: {exc}", False)

    if k_partial > 0 and e.core_size <= 3:
        try:
            cc = c_cols(e.base if base_override is None else [wb], e.core_size)
            k_hi = 4 if slow_k4 else min(3, k_partial)
            a = ppol_k([wb], k_hi, slow=slow_k4)
            b = ppol_k([cc], k_hi, slow=slow_k4)
            same = a == b
            record(
                "ppol-equal", f"layers 1..{k_hi} equal", "equal" if same else "differ", same,
                None if same else f"counts {a.counts()} vs {b.counts()}",
            )
        except Exception as exc:
            record("ppol-equal", "equal", f"error: {exc}", False)

    try:
        mate = get_entry(e.dual_id, n_max)
        expect = dual(wb)
        gotrel = permute_args(mate.weak_base, e.dual_perm)
        record("duality", expect.literal(), gotrel.literal(), expect == gotrel)
    except Exception as exc:
        record("duality", "dual pair", f"error: {exc}", False)
    return recs


def verify_table(
    n_max: int = 4,
    k_partial: int = 3,
    exhaustive_minimality: bool = False,
    slow_k4: bool = False,
    base_overrides: Optional[dict[str, Relation]] = None,
) -> Report:
    """Run every per-entry check; aggregate pass/fail records, never panic.

    Per entry: (a) classification, (b) derivation replay where a chain
    exists, (c) minimality, (d) layerwise pPol equality of the weak base
    with C(COLS^core_size) for core sizes <= 3 up to rank k_partial
    (k_partial = 0 skips), (e) the duality pairing.
    """
    _catalog_fingerprints(n_max)  # build the shared cache once, up front
    entries = catalog(n_max)
    overrides = base_overrides or {}
    report = Report(n_max=n_max, k_partial=k_partial)

    def run(e: CatalogEntry) -> list[CheckRecord]:
        return _entry_checks(
            e, n_max, k_partial, exhaustive_minimality, slow_k4, overrides.get(e.id.text)
        )

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for recs in pool.map(run, entries):
                report.records.extend(recs)
    else:
        for e in entries:
            report.records.extend(run(e))
    return report
