"""Synchronization of complete NFAs through the Split transformation."""

from ._backend import BACKEND
from .core import (
    Automaton,
    AutomatonError,
    Symbol,
    add_identity,
    apply,
    apply_word,
    canonical_form,
    classify_basic,
    drop_identity,
    extension_leq,
    members,
    random_cnfa,
    stateset,
    symbol_leq,
    symbol_union,
)
from .directing import (
    DirectingReport,
    d3_implicit,
    d3_oracle,
    d3_via_split,
    dfa_shortest_sync,
    verify_d3,
)
from .split import (
    BudgetExceeded,
    SplitResult,
    det_subsymbols,
    full_split,
    gamma_contains,
    split_alphabet_size,
    split_at,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Automaton",
    "AutomatonError",
    "BudgetExceeded",
    "DirectingReport",
    "SplitResult",
    "Symbol",
    "add_identity",
    "apply",
    "apply_word",
    "canonical_form",
    "classify_basic",
    "d3_implicit",
    "d3_oracle",
    "d3_via_split",
    "det_subsymbols",
    "dfa_shortest_sync",
    "drop_identity",
    "extension_leq",
    "full_split",
    "gamma_contains",
    "members",
    "random_cnfa",
    "split_alphabet_size",
    "split_at",
    "stateset",
    "symbol_leq",
    "symbol_union",
    "verify_d3",
]
