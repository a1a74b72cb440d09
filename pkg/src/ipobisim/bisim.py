"""Weak transition systems and the bounded bisimulation game.

States are terms; moves are the observation labels of `ipo`.  A weak
move tau-normalizes first, fires one label, then tau-normalizes the
residual, so silent work is never observable on its own.

`check_weak_bisim` plays the bounded game and returns a three-valued
verdict:

* ``equivalent`` — the pair survived the full depth.  The certificate is
  depth-bounded by construction; when the configuration's label set is
  itself truncated (argument pools, bounded argument vectors) the pass
  is demoted to ``unknown``/``pool_limited`` instead, except for pairs
  that are already equal up to renaming, which are equivalent under any
  label set.
* ``distinguished`` — a replayable trace of labels ending in the failed
  observation.  Fuel exhaustion is never reported as a distinction: a
  side that fails to stabilize within fuel flags the whole run as
  ``unknown``/``fuel_exhausted`` (pass ``divergence_blind=True`` to
  treat mutual silence as matching and one-sided silence as observable,
  which is the convention of the applicative comparison below).
* ``unknown`` — with the reason (fuel, depth bookkeeping, pool limits).

Two reference comparisons, deliberately much dumber than the game, are
provided for cross-checking: `applicative_oracle` (feed pool arguments,
compare halting; fuel-naive by contract) and `contextual_oracle`
(enumerate small closing contexts, compare halting).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import reduction
from .ipo import (
    TAU,
    Config,
    Label,
    apply_label,
    complete_labels,
    format_label,
    label_sort_key,
    label_to_json,
    labels_table,
)
from .terms import (
    App,
    HOLE,
    K,
    Kp,
    LAbs,
    LApp,
    LHole,
    LVar,
    Meta,
    S,
    Sp,
    Spp,
    alpha_eq,
    apply_subst,
    enumerate_terms,
    format_term,
    free_metavars,
    fresh_metavar,
    parse_term,
    plug,
)

FUEL_EXHAUSTED = "fuel_exhausted"
DEPTH_EXHAUSTED = "depth_exhausted"
POOL_LIMITED = "pool_limited"


@dataclass(frozen=True)
class Verdict:
    kind: str  # "equivalent" | "distinguished" | "unknown"
    depth: int | None = None
    trace: tuple = ()  # ((label_text, side, reason), ...)
    reason: str | None = None

    def to_json(self):
        out = {"verdict": self.kind}
        if self.depth is not None:
            out["depth"] = self.depth
        if self.trace:
            out["trace"] = [
                {"label": l, "side": s, "reason": r} for l, s, r in self.trace
            ]
        if self.reason is not None:
            out["reason"] = self.reason
        return out


# --------------------------------------------------------------------------
# Canonical renaming of a pair into the reserved ?v namespace
# --------------------------------------------------------------------------


def _forget_hints(t):
    """Rebuild a lambda term with default binder hints so that
    alpha-equal terms print identically."""
    if isinstance(t, LAbs):
        return LAbs(_forget_hints(t.body), hint="x")
    if isinstance(t, LApp):
        return LApp(_forget_hints(t.fun), _forget_hints(t.arg))
    return t


def canonical_pair(a, b):
    """Rename the pair's metavariables jointly into ?v1, ?v2, ... in
    first-occurrence order (left term first).  Shared names stay shared.
    The v series is reserved: fresh label names (?y, ?z) can never
    collide with canonicalized state variables.  Lambda terms have no
    metavariables; they are normalized to default binder hints instead."""
    if not isinstance(a, tuple):
        return _forget_hints(a), _forget_hints(b)
    mapping = {}

    def visit(t):
        stack = [t]
        while stack:
            x = stack.pop()
            tag = x[0]
            if tag == 6:  # metavariable
                if x[1] not in mapping:
                    mapping[x[1]] = f"v{len(mapping) + 1}"
            elif tag in (2, 3):
                stack.append(x[1])
            elif tag in (4, 5):
                stack.append(x[2])
                stack.append(x[1])

    visit(a)
    visit(b)
    if not mapping:
        return a, b
    ren = {old: Meta(new) for old, new in mapping.items()}
    return apply_subst(a, ren), apply_subst(b, ren)


# --------------------------------------------------------------------------
# Weak successors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakOutcome:
    state: object  # term, or None when the move failed
    status: str  # "ok" | "fuel_exhausted" | "not_enabled"
    tau_steps: int = 0


def weak_successor(state, label: Label, cfg: Config, fuel: int = 512):
    """tau-normalize, fire the label if the normal form affords it,
    tau-normalize the residual."""
    n = reduction.normalize_tau(state, cfg.calculus, cfg.strategy, fuel)
    if n.status == reduction.FUEL_EXHAUSTED:
        return WeakOutcome(None, FUEL_EXHAUSTED, n.steps)
    nf = n.result
    steps = n.steps
    if label.is_tau:
        return WeakOutcome(nf, "ok", steps)
    afforded = {format_label(l) for l in labels_table(nf, cfg)}
    if format_label(label) not in afforded:
        return WeakOutcome(None, "not_enabled", steps)
    t = apply_label(nf, label, cfg)
    n2 = reduction.normalize_tau(t, cfg.calculus, cfg.strategy, fuel)
    steps += n2.steps + 1
    if n2.status == reduction.FUEL_EXHAUSTED:
        return WeakOutcome(None, FUEL_EXHAUSTED, steps)
    return WeakOutcome(n2.result, "ok", steps)


# --------------------------------------------------------------------------
# Bounded LTS exploration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    source: object
    label: Label
    target: object
    tau_folded: int | None  # None: the target never stabilized within fuel

    def to_json(self):
        return {
            "state": format_term(self.source),
            "label": label_to_json(self.label),
            "target": format_term(self.target),
            "tau_folded": self.tau_folded,
        }


@dataclass
class TransitionGraph:
    states: list = field(default_factory=list)
    transitions: list = field(default_factory=list)
    frontier: list = field(default_factory=list)

    def to_json(self):
        return {
            "states": [format_term(s) for s in self.states],
            "transitions": [t.to_json() for t in self.transitions],
            "frontier": [format_term(s) for s in self.frontier],
        }


def lts_explore(root, cfg: Config, depth: int = 6, fuel: int = 512):
    """Breadth-first weak exploration to the given depth.  Each state
    contributes one folded silent transition to its normal form (when it
    is not already normal) and the labelled weak moves of that normal
    form.  States are deduplicated by printing."""
    graph = TransitionGraph()
    seen = set()

    def register(t):
        key = format_term(t)
        if key not in seen:
            seen.add(key)
            graph.states.append(t)
            return True
        return False

    register(root)
    layer = [root]
    for _ in range(depth):
        nxt = []
        for t in layer:
            n = reduction.normalize_tau(t, cfg.calculus, cfg.strategy, fuel)
            if n.status == reduction.FUEL_EXHAUSTED:
                continue  # divergent within fuel: leave unexpanded
            nf = n.result
            if n.steps > 0:
                register(nf)
                graph.transitions.append(Transition(t, TAU, nf, n.steps))
            for label in labels_table(nf, cfg):
                raw = apply_label(nf, label, cfg)
                n2 = reduction.normalize_tau(
                    raw, cfg.calculus, cfg.strategy, fuel
                )
                if n2.status == reduction.FUEL_EXHAUSTED:
                    register(raw)
                    graph.transitions.append(Transition(nf, label, raw, None))
                    continue
                tgt = n2.result
                fresh = register(tgt)
                graph.transitions.append(Transition(nf, label, tgt, n2.steps))
                if fresh:
                    nxt.append(tgt)
        layer = nxt
    graph.frontier = layer
    return graph


# --------------------------------------------------------------------------
# The bounded weak bisimulation game
# --------------------------------------------------------------------------


def check_weak_bisim(
    a,
    b,
    cfg: Config,
    depth: int = 6,
    fuel: int = 512,
    divergence_blind: bool = False,
    stats: dict | None = None,
):
    if stats is None:
        stats = {}
    stats.setdefault("pairs_visited", 0)
    stats.setdefault("tau_steps", 0)
    memo_pass = set()
    in_progress = set()
    flags = {"fuel": False}

    def normalize(t):
        n = reduction.normalize_tau(t, cfg.calculus, cfg.strategy, fuel)
        stats["tau_steps"] += n.steps
        return n

    def play(x, y, d):
        """None on survival; otherwise a distinguishing trace."""
        x, y = canonical_pair(x, y)
        key = (format_term(x), format_term(y))
        if key[0] == key[1] or key in memo_pass or key in in_progress:
            return None
        if d == 0:
            return None
        stats["pairs_visited"] += 1
        nx, ny = normalize(x), normalize(y)
        ex = nx.status == reduction.FUEL_EXHAUSTED
        ey = ny.status == reduction.FUEL_EXHAUSTED
        if ex or ey:
            if divergence_blind:
                if ex != ey:
                    side = "right" if ex else "left"
                    return ((format_label(TAU), side, "halting_mismatch"),)
                return None  # mutual silence matches
            flags["fuel"] = True
            return None
        x2, y2 = canonical_pair(nx.result, ny.result)
        key2 = (format_term(x2), format_term(y2))
        if key2[0] == key2[1]:
            memo_pass.add(key)
            return None
        la = {format_label(l): l for l in labels_table(x2, cfg)}
        lb = {format_label(l): l for l in labels_table(y2, cfg)}
        if set(la) != set(lb):
            witness = min(set(la) ^ set(lb))
            side = "left" if witness in la else "right"
            return ((witness, side, "unmatched_label"),)
        in_progress.add(key)
        in_progress.add(key2)
        try:
            for fmt in sorted(la):
                label = la[fmt]
                tx = apply_label(x2, label, cfg)
                ty = apply_label(y2, label, cfg)
                sub = play(tx, ty, d - 1)
                if sub is not None:
                    return ((fmt, "both", "step"),) + sub
        finally:
            in_progress.discard(key)
            in_progress.discard(key2)
        memo_pass.add(key)
        memo_pass.add(key2)
        return None

    ca, cb = canonical_pair(a, b)
    identical = format_term(ca) == format_term(cb)
    trace = play(a, b, depth)
    if trace is not None:
        return Verdict("distinguished", depth=len(trace), trace=trace)
    if flags["fuel"]:
        return Verdict("unknown", reason=FUEL_EXHAUSTED)
    if identical or complete_labels(cfg):
        return Verdict("equivalent", depth=depth)
    return Verdict("unknown", depth=depth, reason=POOL_LIMITED)


# --------------------------------------------------------------------------
# Applicative comparison (fuel-naive by contract)
# --------------------------------------------------------------------------


def default_argument_pool(calculus: str, strategy: str, bound: int = 3):
    """Closed argument terms up to the size bound.  Under the lazy
    strategy a canonical divergent term is appended so that halting
    behaviour is actually probed; under cbv the pool is restricted to
    values (application arguments must be evaluated first)."""
    terms = list(enumerate_terms(bound, (), calculus))
    if strategy == "cbv":
        if calculus == "lambda":
            return [t for t in terms if isinstance(t, LAbs)]
        if calculus == "cl":
            return [t for t in terms if reduction.is_cl_cbv_value(t)]
        from . import kernel

        return [t for t in terms if kernel.is_value_cbv(t)]
    terms.append(_diverger(calculus))
    return terms


def _diverger(calculus: str):
    if calculus == "lambda":
        w = LAbs(LApp(LVar(0), LVar(0)), hint="x")
        return LApp(w, w)
    ident = App(App(S, K), K)
    half = App(App(S, ident), ident)
    return App(half, half)


def applicative_oracle(
    a,
    b,
    calculus: str = "clstar",
    strategy: str = "lazy",
    arg_pool=None,
    depth: int = 6,
    fuel: int = 512,
):
    """Compare halting behaviour under iterated application of pool
    arguments.  One-sided fuel exhaustion counts as a distinction here —
    this comparison is fuel-naive by contract, unlike the game."""
    if arg_pool is None:
        arg_pool = default_argument_pool(calculus, strategy)
    mk_app = LApp if calculus == "lambda" else App
    memo = {}

    def go(x, y, d, path):
        if alpha_eq(x, y):
            return None, "eq"
        nx = reduction.normalize_tau(x, calculus, strategy, fuel)
        ny = reduction.normalize_tau(y, calculus, strategy, fuel)
        ex = nx.status == reduction.FUEL_EXHAUSTED
        ey = ny.status == reduction.FUEL_EXHAUSTED
        if ex and ey:
            return None, "fuel"
        if ex != ey:
            side = "right" if ex else "left"
            return path + ((format_label(TAU), side, "halting_mismatch"),), None
        x2, y2 = nx.result, ny.result
        if alpha_eq(x2, y2):
            return None, "eq"
        if d == 0:
            return None, "depth"
        ca, cb = canonical_pair(x2, y2)
        key = (format_term(ca), format_term(cb), d)
        if key in memo:
            return None, memo[key]
        outcomes = set()
        for p in arg_pool:
            entry = (format_term(p), "both", "applied")
            trace, why = go(mk_app(x2, p), mk_app(y2, p), d - 1, path + (entry,))
            if trace is not None:
                return trace, None
            outcomes.add(why)
        if "fuel" in outcomes:
            why = "fuel"
        elif "depth" in outcomes:
            why = "depth"
        else:
            why = "pool"
        memo[key] = why
        return None, why

    if alpha_eq(a, b):
        return Verdict("equivalent", depth=depth)
    trace, why = go(a, b, depth, ())
    if trace is not None:
        return Verdict("distinguished", depth=len(trace), trace=trace)
    if why == "eq":
        return Verdict("equivalent", depth=depth)
    reason = {
        "fuel": FUEL_EXHAUSTED,
        "depth": DEPTH_EXHAUSTED,
        "pool": POOL_LIMITED,
    }[why]
    return Verdict("unknown", depth=depth, reason=reason)


# --------------------------------------------------------------------------
# Contextual comparison over small closing contexts
# --------------------------------------------------------------------------

_LAMBDA_ATOMS = ("\\x.x", "\\x.x x", "\\x.\\y.x")
_CL_ATOMS = ("K", "S")


def context_atoms(calculus: str):
    if calculus == "lambda":
        return [parse_term(s, "lambda") for s in _LAMBDA_ATOMS]
    return [parse_term(s, calculus) for s in _CL_ATOMS]


def enumerate_contexts(calculus: str, size_bound: int):
    """One-hole contexts over a tiny closed-atom grammar, by skeleton
    size: the hole, application nodes, binders and atoms each cost one.
    C ::= [] | C A | A C | \\x.C   and   A ::= atom | A A."""
    atoms = context_atoms(calculus)
    mk_app = LApp if calculus == "lambda" else App
    hole = LHole() if calculus == "lambda" else HOLE

    closed = {1: list(atoms)}
    for n in range(2, size_bound):
        row = []
        for i in range(1, n - 1):
            for f in closed.get(i, ()):
                for x in closed.get(n - 1 - i, ()):
                    row.append(mk_app(f, x))
        closed[n] = row

    ctxs = {1: [hole]}
    for n in range(2, size_bound + 1):
        row = []
        for i in range(1, n - 1):
            for c in ctxs.get(i, ()):
                for x in closed.get(n - 1 - i, ()):
                    row.append(mk_app(c, x))
                    row.append(mk_app(x, c))
        if calculus == "lambda":
            for c in ctxs.get(n - 1, ()):
                row.append(LAbs(c, hint="x"))
        ctxs[n] = row

    out, seen = [], set()
    for n in range(1, size_bound + 1):
        for c in ctxs.get(n, ()):
            key = format_term(c)
            if key not in seen:
                seen.add(key)
                out.append(c)
    return out


def contextual_oracle(
    a,
    b,
    calculus: str = "lambda",
    strategy: str = "lazy",
    size_bound: int = 5,
    fuel: int = 512,
    context_pool=None,
):
    """Search for a context in which exactly one side halts within fuel."""
    if context_pool is None:
        context_pool = enumerate_contexts(calculus, size_bound)
    for c in context_pool:
        na = reduction.normalize_tau(plug(c, a), calculus, strategy, fuel)
        nb = reduction.normalize_tau(plug(c, b), calculus, strategy, fuel)
        ha = na.status == reduction.NORMAL
        hb = nb.status == reduction.NORMAL
        if ha != hb:
            side = "left" if ha else "right"
            trace = ((format_term(c), side, "halting_mismatch"),)
            return Verdict("distinguished", depth=1, trace=trace)
    return Verdict("unknown", reason=POOL_LIMITED)


# --------------------------------------------------------------------------
# Congruence sampling harness
# --------------------------------------------------------------------------


@dataclass
class Report:
    verdict: str  # "pass" | "fail"
    depth: int
    failures: list
    stats: dict

    def to_json(self):
        return {
            "verdict": self.verdict,
            "depth": self.depth,
            "failures": self.failures,
            "stats": self.stats,
        }


_HARNESS_ATOMS = None


def _harness_atoms():
    global _HARNESS_ATOMS
    if _HARNESS_ATOMS is None:
        _HARNESS_ATOMS = [
            K,
            S,
            Kp(K),
            Sp(S),
            Spp(K, S),
            Meta("c1"),
            Meta("c2"),
        ]
    return _HARNESS_ATOMS


def random_context(rng: random.Random, budget: int = 8):
    """A random unary context over combinator atoms and two context
    metavariables, hole placement uniform along the application spine
    walk."""
    size = rng.randint(1, budget)

    def build(n):
        if n <= 1:
            return HOLE
        other = _random_term(rng, rng.randint(1, max(1, n // 2)))
        inner = build(n - 1)
        return App(inner, other) if rng.random() < 0.5 else App(other, inner)

    return build(size)


def _random_term(rng: random.Random, n: int):
    if n <= 1:
        return rng.choice(_harness_atoms())
    left = _random_term(rng, rng.randint(1, n - 1))
    right = rng.choice(_harness_atoms())
    return App(left, right)


def congruence_harness(
    pairs,
    cfg: Config,
    samples: int = 200,
    seed: int = 42,
    depth: int = 6,
    fuel: int = 512,
):
    """Certify each pair equivalent at the full depth, then sample random
    contexts and substitutions and require that no plugged pair is
    distinguished at depth - 2.  Distinctions found here would witness a
    congruence failure; fuel or pool limits only lower confidence."""
    t0 = time.monotonic()
    stats = {"pairs_visited": 0, "tau_steps": 0, "samples": 0}
    failures = []
    certified = []
    for a, b in pairs:
        v = check_weak_bisim(a, b, cfg, depth=depth, fuel=fuel, stats=stats)
        if v.kind == "distinguished":
            failures.append(
                {
                    "pair": [format_term(a), format_term(b)],
                    "context": None,
                    "verdict": v.to_json(),
                }
            )
        else:
            certified.append((a, b))
    rng = random.Random(seed)
    probe_closed = [t for t in _harness_atoms() if not free_metavars(t)]
    for i in range(samples):
        if not certified:
            break
        a, b = certified[i % len(certified)]
        ctx = random_context(rng)
        theta = {
            x: rng.choice(probe_closed)
            for x in sorted(free_metavars(a) | free_metavars(b))
        }
        pa = plug(ctx, apply_subst(a, theta))
        pb = plug(ctx, apply_subst(b, theta))
        stats["samples"] += 1
        v = check_weak_bisim(
            pa, pb, cfg, depth=max(0, depth - 2), fuel=fuel, stats=stats
        )
        if v.kind == "distinguished":
            failures.append(
                {
                    "pair": [format_term(a), format_term(b)],
                    "context": format_term(ctx),
                    "subst": {x: format_term(t) for x, t in theta.items()},
                    "verdict": v.to_json(),
                }
            )
    stats["wall_ms"] = int((time.monotonic() - t0) * 1000)
    return Report(
        verdict="fail" if failures else "pass",
        depth=depth,
        failures=failures,
        stats=stats,
    )
