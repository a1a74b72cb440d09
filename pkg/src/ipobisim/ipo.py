"""Observation labels for the transition systems.

A label is the minimal context enabling one reduction step of a plugged
state: an optional substitution on the state's metavariables (written
inside the hole brackets), an optional left applicant, and appended
right arguments.  Plugging composes in that order:

    plug(state) = (left (state . subst)) arg1 ... argk

The silent label tau is the all-empty one (the state reduces by itself).

Two independent engines produce labels for extended combinator terms in
second order:

* `labels_table` — explicit case tables keyed by the state's
  classification (the finite lazy table, the bounded reactive lazy
  table, and the cbv table, which is finitely branching as given);
* `labels_generic` — derives the same lazy labels from first principles
  by unifying the state's spine bottom (root overlap), and the head
  metavariable (inner overlap), against the reduction rule left-hand
  sides, restricting each most general unifier to the state's variables.

The first-order tables instantiate argument positions from a size-bounded
pool of closed terms instead of using fresh metavariables.  First-order
cbv combinatory logic also probes with left applicants; the value-context
parameter of those families is instantiated with the identity slice plus
single K/S wrappers only — a documented bounded under-approximation (the
configuration never claims unqualified equivalences anyway).

Fresh names are drawn per label: probe-internal variables from ?z1, ?z2,
appended arguments from ?y1, ?y2, ..., in both cases skipping indices
already used by the state's own metavariables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from . import reduction
from .terms import (
    TAG_APP,
    TAG_META,
    App,
    K,
    Kp,
    LAbs,
    LApp,
    Meta,
    S,
    Sp,
    Spp,
    app_chain,
    apply_subst,
    classify_cbv,
    classify_lazy,
    enumerate_terms,
    format_term,
    free_metavars,
    fresh_metavar,
    spine,
)
from .unify import mgu, rename_apart

CALCULI = ("lambda", "cl", "clstar")
ORDERS = ("first", "second")
STRATEGIES = ("lazy", "cbv")
LABEL_SETS = ("reactive_only", "all_ipo", "finite")


class UnsupportedConfig(ValueError):
    pass


class NotEnabledError(ValueError):
    """apply_label was given a label the state does not afford."""


class LabelDomainError(ValueError):
    """The state is outside the label table's domain (cbv terms stuck
    under a constructor argument have no observation row)."""


@dataclass(frozen=True)
class Config:
    calculus: str = "clstar"
    order: str = "second"
    strategy: str = "lazy"
    label_set: str = "reactive_only"
    arg_pool: int = 3  # pool size bound (first order) / argument-vector bound

    def __post_init__(self):
        if self.calculus not in CALCULI:
            raise UnsupportedConfig(f"unknown calculus {self.calculus!r}")
        if self.order not in ORDERS:
            raise UnsupportedConfig(f"unknown order {self.order!r}")
        if self.strategy not in STRATEGIES:
            raise UnsupportedConfig(f"unknown strategy {self.strategy!r}")
        if self.label_set not in LABEL_SETS:
            raise UnsupportedConfig(f"unknown label set {self.label_set!r}")
        if self.arg_pool < 0:
            raise UnsupportedConfig("arg_pool must be non-negative")
        if self.order == "second" and self.calculus != "clstar":
            raise UnsupportedConfig(
                "second-order labels exist for the extended combinator "
                "calculus only"
            )
        if self.label_set == "finite" and not (
            self.calculus == "clstar"
            and self.order == "second"
            and self.strategy == "lazy"
        ):
            raise UnsupportedConfig(
                "the finite label set exists for second-order lazy "
                "extended combinator terms only"
            )


def complete_labels(cfg: Config) -> bool:
    """True when the configuration's label set is complete for weak
    bisimilarity (no pool or argument-vector truncation)."""
    if cfg.calculus != "clstar" or cfg.order != "second":
        return False
    if cfg.strategy == "lazy":
        return cfg.label_set == "finite"
    return cfg.label_set in ("reactive_only", "all_ipo")


@dataclass(frozen=True)
class Label:
    subst: tuple = ()  # sorted ((name, term), ...)
    left: object = None
    args: tuple = ()

    @property
    def is_tau(self) -> bool:
        return not self.subst and self.left is None and not self.args


TAU = Label()


def _format_arg(t) -> str:
    text = format_term(t)
    if isinstance(t, tuple):
        needs = t[0] == TAG_APP
    else:
        needs = not text.startswith("(") and (" " in text or text.startswith("\\"))
    return f"({text})" if needs else text


def format_label(label: Label) -> str:
    if label.is_tau:
        return "[_]"
    if label.subst:
        inner = ",".join(f"?{n}:={format_term(t)}" for n, t in label.subst)
        core = "[_{" + inner + "}]"
    else:
        core = "[_]"
    parts = []
    if label.left is not None:
        parts.append(format_term(label.left))
    parts.append(core)
    parts.extend(_format_arg(a) for a in label.args)
    return " ".join(parts)


def label_to_json(label: Label):
    if label.is_tau:
        return "tau"
    return {
        "subst": {n: format_term(t) for n, t in label.subst},
        "left": None if label.left is None else format_term(label.left),
        "args": [format_term(a) for a in label.args],
    }


def label_sort_key(label: Label) -> str:
    return format_label(label)


# --------------------------------------------------------------------------
# Fresh names and probe values
# --------------------------------------------------------------------------


def _fresh_names(avoid, prefix, count):
    names = []
    taken = set(avoid)
    for _ in range(count):
        n = fresh_metavar(taken, prefix)
        names.append(n)
        taken.add(n)
    return names


def probe_values(avoid):
    """The five shapes a head rule can require of a substituted variable,
    with probe-internal fresh variables drawn from the ?z series."""
    z1, z2 = _fresh_names(avoid, "z", 2)
    return [K, S, Kp(Meta(z1)), Sp(Meta(z1)), Spp(Meta(z1), Meta(z2))]


@lru_cache(maxsize=32)
def _pool(calculus: str, bound: int, values_only_for: str | None):
    terms = list(enumerate_terms(bound, (), calculus))
    if values_only_for is None:
        return tuple(terms)
    if calculus == "lambda":
        return tuple(t for t in terms if isinstance(t, LAbs))
    if calculus == "cl":
        return tuple(t for t in terms if reduction.is_cl_cbv_value(t))
    from . import kernel

    return tuple(t for t in terms if kernel.is_value_cbv(t))


def argument_pool(cfg: Config, values_only: bool = False):
    """Closed terms of size <= cfg.arg_pool in the state's calculus,
    optionally restricted to the strategy's values."""
    return list(
        _pool(cfg.calculus, cfg.arg_pool, cfg.strategy if values_only else None)
    )


# --------------------------------------------------------------------------
# First-order tables (pool-instantiated argument positions)
# --------------------------------------------------------------------------


def _labels_first_lambda(state, cfg):
    r = reduction.step(state, "lambda", cfg.strategy)
    if r.kind == reduction.STEPPED:
        return [TAU]
    if r.kind == reduction.STUCK_OPEN:
        return []
    # a value (abstraction)
    if cfg.strategy == "lazy":
        return [Label(args=(p,)) for p in argument_pool(cfg)]
    out = [Label(args=(v,)) for v in argument_pool(cfg, values_only=True)]
    out.extend(
        Label(left=LAbs(q, hint="x")) for q in argument_pool(cfg)
    )
    return out


def _labels_first_cl_lazy(state, cfg):
    head, args = spine(state)
    if head[0] == TAG_META:
        return []
    arity = 2 if head[0] == 0 else 3  # TAG_K == 0
    need = arity - len(args)
    if need <= 0:
        return [TAU]
    pool = argument_pool(cfg)
    return [Label(args=tuple(v)) for v in product(pool, repeat=need)]


def _labels_first_cl_cbv(state, cfg):
    pool = argument_pool(cfg)
    values = argument_pool(cfg, values_only=True)
    nonvalues = [p for p in pool if not reduction.is_cl_cbv_value(p)]
    out = []
    r = reduction.step(state, "cl", cfg.strategy)
    if r.kind == reduction.STEPPED:
        out.append(TAU)
    elif r.kind == reduction.HALTED:
        head, args = spine(state)
        arity = 2 if head[0] == 0 else 3
        need = arity - len(args)
        # saturate with values
        out.extend(Label(args=tuple(v)) for v in product(values, repeat=need))
        # shorter value prefixes closed off by a reducible argument
        for i in range(need):
            for vs in product(values, repeat=i):
                out.extend(Label(args=vs + (p,)) for p in nonvalues)
        # left-applicant probes over the identity context slice
        for v in values:
            out.append(Label(left=K, args=(v,)))  # K [_] V
            out.append(Label(left=App(K, v)))  # K V [_]
            out.append(Label(left=App(App(S, v), v)))  # S V V [_] (diagonal)
        for v1 in values:
            for v2 in values:
                out.append(Label(left=S, args=(v1, v2)))  # S [_] V1 V2
                out.append(Label(left=App(S, v1), args=(v2,)))  # S V1 [_] V2
                out.append(Label(left=App(App(S, v1), v2)))  # S V1 V2 [_]
        for p in nonvalues:
            out.append(Label(left=K, args=(p,)))  # K [_] P
            out.append(Label(left=S, args=(p,)))  # S [_] P
            for v in values:
                out.append(Label(left=S, args=(v, p)))  # S [_] V P
                out.append(Label(left=App(S, v), args=(p,)))  # S V [_] P
    else:
        return []
    # operator-evaluation probes apply to every state
    out.extend(Label(left=p) for p in nonvalues)
    return _dedup(out)


def _labels_first_clstar(state, cfg):
    r = reduction.step(state, "clstar", cfg.strategy)
    if r.kind == reduction.STEPPED:
        return [TAU]
    if r.kind == reduction.STUCK_OPEN:
        return []
    if cfg.strategy == "lazy":
        return [Label(args=(p,)) for p in argument_pool(cfg)]
    values = argument_pool(cfg, values_only=True)
    out = [Label(args=(v,)) for v in values]
    out.extend(Label(left=v) for v in values)
    return out


def _dedup(labels):
    seen = set()
    out = []
    for l in labels:
        if l not in seen:
            seen.add(l)
            out.append(l)
    return out


# --------------------------------------------------------------------------
# Second-order tables (extended combinator calculus)
# --------------------------------------------------------------------------


def _labels_second_lazy(state, cfg):
    avoid = free_metavars(state)
    probes = probe_values(avoid)
    c = classify_lazy(state)
    if c.kind == "reducible":
        return [TAU]
    if c.kind == "value":
        (y1,) = _fresh_names(avoid, "y", 1)
        return [Label(args=(Meta(y1),))]
    x = c.var
    out = []
    if c.kind == "bare_var":
        (y1,) = _fresh_names(avoid, "y", 1)
        # root overlap: substitute, then feed one fresh argument
        out.extend(
            Label(subst=((x, a),), args=(Meta(y1),)) for a in probes
        )
        if cfg.label_set != "finite":
            # inner overlap: the substituted head carries its own argument
            out.extend(
                Label(subst=((x, App(a, Meta(y1))),)) for a in probes
            )
    else:  # head_stuck: arguments are already present
        out.extend(Label(subst=((x, a),)) for a in probes)
        if cfg.label_set != "finite":
            for j in range(1, cfg.arg_pool + 1):
                ys = _fresh_names(avoid, "y", j)
                out.extend(
                    Label(
                        subst=(
                            (x, app_chain(a, [Meta(y) for y in ys])),
                        )
                    )
                    for a in probes
                )
    if cfg.label_set == "all_ipo":
        out.extend(_left_probe_slice(avoid, probes, cfg))
    return out


def _left_probe_slice(avoid, probes, cfg):
    """Bounded non-engaged observations for dump purposes only: a probe
    (possibly applied to fresh arguments) reduces to the left of the
    state.  Excluded from bisimulation games."""
    out = []
    for a in probes:
        for k in range(cfg.arg_pool + 1):
            ys = _fresh_names(avoid, "y", k)
            out.append(Label(left=app_chain(a, [Meta(y) for y in ys])))
    return out


def _labels_second_cbv(state, cfg):
    avoid = free_metavars(state)
    probes = probe_values(avoid)
    c = classify_cbv(state)
    if c.kind == "reducible":
        return [TAU]
    if c.kind == "no_class":
        raise LabelDomainError(
            "no observation row for a term stuck under a constructor "
            f"argument: {format_term(state)}"
        )
    out = []
    if c.kind == "bare_var":
        (y1,) = _fresh_names(avoid, "y", 1)
        out.extend(
            Label(subst=((c.var, a),), args=(Meta(y1),)) for a in probes
        )
        out.extend(Label(left=a) for a in probes)
    elif c.kind == "value":
        (y1,) = _fresh_names(avoid, "y", 1)
        out.append(Label(args=(Meta(y1),)))
        out.extend(Label(left=a) for a in probes)
    else:  # critical variable: substitution alone unblocks the redex
        out.extend(Label(subst=((c.var, a),)) for a in probes)
    return out


def labels_table(state, cfg: Config):
    """Observation labels of a state, by explicit case table."""
    if cfg.order == "first":
        if cfg.calculus == "lambda":
            return _labels_first_lambda(state, cfg)
        if cfg.calculus == "cl":
            if cfg.strategy == "lazy":
                r = reduction.step(state, "cl", "lazy")
                if r.kind == reduction.STEPPED:
                    return [TAU]
                if r.kind == reduction.STUCK_OPEN:
                    return []
                return _labels_first_cl_lazy(state, cfg)
            return _labels_first_cl_cbv(state, cfg)
        return _labels_first_clstar(state, cfg)
    # second order: clstar only (Config guarantees it)
    if cfg.strategy == "lazy":
        return _labels_second_lazy(state, cfg)
    return _labels_second_cbv(state, cfg)


# --------------------------------------------------------------------------
# Generic engine: labels from rule overlap by unification (lazy, second
# order).  The cbv table is finitely branching as given and has no generic
# twin here; asking for one raises.
# --------------------------------------------------------------------------

# rule left-hand sides, one per head shape
_RULE_LHSS = (
    App(K, Meta("X1")),
    App(Kp(Meta("X1")), Meta("X2")),
    App(S, Meta("X1")),
    App(Sp(Meta("X1")), Meta("X2")),
    App(Spp(Meta("X1"), Meta("X2")), Meta("X3")),
)


def _meta_names_in_order(t):
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        tag = x[0]
        if tag == TAG_META:
            if x[1] not in out:
                out.append(x[1])
        elif tag in (2, 3):  # K', S'
            stack.append(x[1])
        elif tag in (4, TAG_APP):
            stack.append(x[2])
            stack.append(x[1])
    return out


def _canonical_fresh(label: Label, state_vars):
    """Rename the label's fresh variables to the canonical series:
    probe-internal names to ?z1, ?z2 and argument names to ?y1, ...,
    skipping indices taken by the state."""
    mapping = {}
    z_taken = set(state_vars)
    y_taken = set(state_vars)

    def map_head_vars(t):
        for n in _meta_names_in_order(t):
            if n in state_vars or n in mapping:
                continue
            new = fresh_metavar(z_taken, "z")
            z_taken.add(new)
            mapping[n] = new

    def map_arg_var(t):
        if t[0] == TAG_META and t[1] not in state_vars and t[1] not in mapping:
            new = fresh_metavar(y_taken, "y")
            y_taken.add(new)
            mapping[t[1]] = new

    for _, val in label.subst:
        head, hargs = spine(val)
        map_head_vars(head)
        for a in hargs:
            map_arg_var(a)
    for a in label.args:
        map_arg_var(a)
    if not mapping:
        return label
    ren = {old: Meta(new) for old, new in mapping.items()}
    return Label(
        subst=tuple((n, apply_subst(t, ren)) for n, t in label.subst),
        left=label.left,
        args=tuple(apply_subst(a, ren) for a in label.args),
    )


def labels_generic(state, cfg: Config):
    """Derive second-order lazy labels by unification against the rule
    left-hand sides.

    Root overlap: the spine-bottom application of the (substituted,
    possibly one-argument-extended) state is unified with each rule; the
    mgu restricted to the state's variables is the label.  Inner overlap
    (reactive set only): a head metavariable is sent to a rule instance
    applied to fresh arguments, bounded by cfg.arg_pool.  With the finite
    label set the inner overlaps are pruned away entirely — that is the
    content of the finiteness property the table encodes.
    """
    if cfg.calculus != "clstar" or cfg.order != "second":
        raise UnsupportedConfig("generic labels: second-order clstar only")
    if cfg.strategy != "lazy":
        raise UnsupportedConfig(
            "generic labels are derived for the lazy strategy; the cbv "
            "table is finitely branching as given"
        )
    state_vars = free_metavars(state)
    head, args = spine(state)
    out = []

    # ---- root overlap
    if args:
        bottom_arg = args[0]
        appended = None
    else:
        appended = fresh_metavar(state_vars, "y")
        bottom_arg = Meta(appended)
    avoid = state_vars | ({appended} if appended else set())
    for lhs in _RULE_LHSS:
        lhs_fresh, _ = rename_apart(lhs, avoid)
        theta = mgu(lhs_fresh, App(head, bottom_arg))
        if theta is None:
            continue
        subst = tuple(
            sorted((v, t) for v, t in theta.items() if v in state_vars)
        )
        largs = ()
        if appended is not None:
            largs = (theta.get(appended, Meta(appended)),)
        out.append(
            _canonical_fresh(Label(subst=subst, args=largs), state_vars)
        )

    # ---- inner overlap (head metavariable only)
    if head[0] == TAG_META and cfg.label_set != "finite":
        x = head[1]
        js = (1,) if not args else tuple(range(1, cfg.arg_pool + 1))
        for j in js:
            for lhs in _RULE_LHSS:
                lhs_fresh, _ = rename_apart(lhs, state_vars)
                extra_avoid = state_vars | set(free_metavars(lhs_fresh))
                ys = _fresh_names(extra_avoid, "w", j - 1)
                image = app_chain(lhs_fresh, [Meta(y) for y in ys])
                out.append(
                    _canonical_fresh(
                        Label(subst=((x, image),)), state_vars
                    )
                )
    return _dedup(out)


# --------------------------------------------------------------------------
# Applying a label
# --------------------------------------------------------------------------


def plug_label(state, label: Label, cfg: Config):
    """The plugged term C[state], before reaction."""
    t = state
    if label.subst:
        if cfg.calculus == "lambda":
            raise UnsupportedConfig("substitution labels are combinator-only")
        t = apply_subst(t, dict(label.subst))
    if label.left is not None:
        t = LApp(label.left, t) if cfg.calculus == "lambda" else App(label.left, t)
    for a in label.args:
        t = LApp(t, a) if cfg.calculus == "lambda" else App(t, a)
    return t


def apply_label(state, label: Label, cfg: Config):
    """Plug the state into the label's context and fire exactly one
    reaction step.  Raises NotEnabledError when the plugged term cannot
    step."""
    plugged = plug_label(state, label, cfg)
    r = reduction.step(plugged, cfg.calculus, cfg.strategy)
    if r.kind != reduction.STEPPED:
        raise NotEnabledError(
            f"label {format_label(label)} is not enabled at "
            f"{format_term(state)}"
        )
    return r.next
