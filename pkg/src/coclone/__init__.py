"""Boolean co-clone machinery: relations, (partial) polymorphisms,
Post's-lattice classification and minimal weak-base verification."""

from .catalog import (
    CatalogEntry,
    CoCloneId,
    Identify,
    Irr,
    PermuteStep,
    RuleChain,
    catalog,
    conj_literal,
    get_entry,
    parse_coclone_id,
    weak_base,
)
from .definability import (
    Atom,
    Clause,
    canonical_conjunction,
    clauses_relation,
    conjunction_relation,
    entailed_atoms,
    ihsb_check,
    prime_implicates,
    qpp_definable,
)
from .errors import (
    ArityMismatch,
    ArityOutOfRange,
    ChainArityError,
    CocloneError,
    EmptyRelation,
    FingerprintCollision,
    KindMismatch,
    ParseError,
    SizeMismatch,
    UnboundVariable,
    Underflow,
)
from .formula import FormulaAST, Iff, Implies, Lit, Or, Parity, relation_from_formula
from .funcs import (
    PartialFn,
    TotalFn,
    apply_to_tuples,
    embed,
    enumerate_partial,
    enumerate_total,
    find_violation,
    preserves,
    preserves_partial,
    subfunctions,
)
from .galois import Fingerprint, c_cols, clone_closure, fingerprint_leq, pol_k, ppol_k
from .kernels import active_backend, worker_count
from .lattice import (
    InclusionOrder,
    Report,
    Verdict,
    classify,
    classify_diagnostic,
    coclone_leq,
    derivation_replay,
    inclusion_order,
    is_minimal_weak_base,
    verify_table,
)
from .literals import parse_chain, parse_relation
from .relation import (
    Permutation,
    Relation,
    builtin,
    dual,
    duplicate_column,
    full_relation,
    identify_args,
    irredundant_core,
    neq_pad,
    permute_args,
    product,
    relation_from_tuples,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
