"""Labelled transition systems and weak bisimilarity for combinatory
calculi (lambda calculus, combinatory logic, and the extended combinator
calculus with explicit partial applications)."""

from .bisim import (
    Report,
    Transition,
    TransitionGraph,
    Verdict,
    applicative_oracle,
    check_weak_bisim,
    congruence_harness,
    contextual_oracle,
    enumerate_contexts,
    lts_explore,
    weak_successor,
)
from .ipo import (
    Config,
    Label,
    LabelDomainError,
    NotEnabledError,
    TAU,
    UnsupportedConfig,
    apply_label,
    complete_labels,
    format_label,
    label_to_json,
    labels_generic,
    labels_table,
    plug_label,
)
from .kernel import BACKEND
from .reduction import NormalizeOutcome, StepResult, normalize_full, normalize_tau, step
from .sweeps import check_correspondence, check_tables, et_corpus, invariant_sweep
from .terms import (
    App,
    K,
    Kp,
    LAbs,
    LApp,
    LFree,
    LVar,
    Meta,
    ParseError,
    S,
    Sp,
    Spp,
    alpha_eq,
    apply_subst,
    enumerate_terms,
    format_term,
    free_metavars,
    parse_term,
    plug,
    size,
)
from .translate import ETOutcome, check_et_identity, to_cl, to_lambda
from .unify import mgu, rename_apart

__version__ = "0.1.0"

__all__ = [
    "App", "BACKEND", "Config", "ETOutcome", "K", "Kp", "LAbs", "LApp",
    "LFree", "LVar", "Label", "LabelDomainError", "Meta", "NormalizeOutcome",
    "NotEnabledError", "ParseError", "Report", "S", "Sp", "Spp", "StepResult",
    "TAU", "Transition", "TransitionGraph", "UnsupportedConfig", "Verdict",
    "alpha_eq", "applicative_oracle", "apply_label", "apply_subst",
    "check_correspondence", "check_et_identity", "check_tables",
    "check_weak_bisim", "complete_labels", "congruence_harness",
    "contextual_oracle", "enumerate_contexts", "enumerate_terms", "et_corpus",
    "format_label", "format_term", "free_metavars", "invariant_sweep",
    "label_to_json", "labels_generic", "labels_table", "lts_explore", "mgu", "rename_apart",
    "normalize_full", "normalize_tau", "parse_term", "plug", "plug_label",
    "size", "step", "to_cl", "to_lambda", "weak_successor",
]
