"""Small-step operational semantics for the three calculi.

`step` exposes one deterministic step under two weak strategies:

* lazy — leftmost reduction on the application spine, never under a
  binder or inside a constructor argument;
* cbv — operands are evaluated to values left to right before a head
  rule fires (constructor arguments of K'/S'/S'' included).

Extended combinator terms are delegated to the selected kernel twin; the
plain combinator fragment and lambda terms are handled here directly.
`normalize_full` additionally provides strong (under-binder) normal-order
normalization for lambda terms; the weak strategies never need it, it
exists as the beta-convertibility reference used by the translation
checks.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from . import kernel
from .terms import (
    TAG_APP,
    TAG_K,
    TAG_KP,
    TAG_META,
    TAG_S,
    TAG_SP,
    TAG_SPP,
    Classification,
    LAbs,
    LApp,
    LFree,
    LHole,
    LVar,
    app_chain,
    classify_cbv,
    classify_lazy,
    spine,
)

STEPPED = "stepped"
HALTED = "halted"
STUCK_OPEN = "stuck_open"

NORMAL = "normal"
FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass(frozen=True)
class StepResult:
    kind: str  # stepped | halted | stuck_open
    next: object = None
    spine_class: Classification | None = None
    var: str | None = None


@dataclass(frozen=True)
class NormalizeOutcome:
    result: object
    status: str  # normal | fuel_exhausted
    steps: int


class FuelError(RuntimeError):
    """Internal signal for budget exhaustion in recursive normalizers."""


# --------------------------------------------------------------------------
# Lambda machinery (de Bruijn)
# --------------------------------------------------------------------------


def lam_shift(t, d: int, cutoff: int = 0):
    if isinstance(t, LVar):
        return LVar(t.index + d) if t.index >= cutoff else t
    if isinstance(t, LAbs):
        return LAbs(lam_shift(t.body, d, cutoff + 1), hint=t.hint)
    if isinstance(t, LApp):
        return LApp(lam_shift(t.fun, d, cutoff), lam_shift(t.arg, d, cutoff))
    return t


def lam_subst(t, j: int, s):
    """Substitute s for index j in t, adjusting indices."""
    if isinstance(t, LVar):
        if t.index == j:
            return lam_shift(s, j)
        return LVar(t.index - 1) if t.index > j else t
    if isinstance(t, LAbs):
        return LAbs(lam_subst(t.body, j + 1, s), hint=t.hint)
    if isinstance(t, LApp):
        return LApp(lam_subst(t.fun, j, s), lam_subst(t.arg, j, s))
    return t


def beta_contract(abs_term: LAbs, arg):
    return lam_subst(abs_term.body, 0, arg)


def is_lambda_value(t) -> bool:
    """Cbv values: abstractions and free variables."""
    return isinstance(t, (LAbs, LFree))


def _step_lambda_lazy(t):
    # unique redex at the bottom of the left spine
    path = []
    while isinstance(t, LApp):
        path.append(t.arg)
        t = t.fun
    if isinstance(t, LAbs) and path:
        red = beta_contract(t, path.pop())
        while path:
            red = LApp(red, path.pop())
        return red
    return None


def _step_lambda_cbv(t):
    # operator to a value, then operand, then fire; unique search path
    stack = []
    cur = t
    red = None
    while isinstance(cur, LApp):
        f, a = cur.fun, cur.arg
        if isinstance(f, LApp):
            stack.append((cur, 0))
            cur = f
            continue
        if isinstance(a, LApp):
            stack.append((cur, 1))
            cur = a
            continue
        if isinstance(f, LAbs) and is_lambda_value(a):
            red = beta_contract(f, a)
        break
    if red is None:
        return None
    for node, slot in reversed(stack):
        red = LApp(red, node.arg) if slot == 0 else LApp(node.fun, red)
    return red


def _lambda_halt_info(t, strategy):
    """Classify a lambda term with no step: value or stuck-open."""
    head = t
    nargs = 0
    while isinstance(head, LApp):
        nargs += 1
        head = head.fun
    if isinstance(head, LFree):
        if nargs == 0:
            return Classification("bare_var", head.name, 0), head.name
        return Classification("head_stuck", head.name, nargs), head.name
    if isinstance(head, LVar):
        raise ValueError("cannot step a lambda term with an unbound index")
    if nargs == 0:
        return Classification("value"), None
    # An abstraction head with arguments only survives stepping under cbv,
    # when some inner application is blocked; find it by the same descent
    # the stepper uses.
    cur = t
    while True:
        f, a = cur.fun, cur.arg
        if isinstance(f, LApp):
            cur = f
            continue
        if isinstance(a, LApp):
            cur = a
            continue
        break
    f = cur.fun
    if isinstance(f, LFree):
        return Classification("head_stuck", f.name, 1), f.name
    if isinstance(f, LVar) or isinstance(cur.arg, LVar):
        raise ValueError("cannot step a lambda term with an unbound index")
    return Classification("no_class"), None


# --------------------------------------------------------------------------
# Plain combinator logic
# --------------------------------------------------------------------------

_PLAIN_TAGS = (TAG_K, TAG_S, TAG_META, TAG_APP)


def _require_plain(t):
    stack = [t]
    while stack:
        x = stack.pop()
        if x[0] not in _PLAIN_TAGS:
            raise ValueError(
                "plain combinator term expected (no K'/S'/S'' constructors)"
            )
        if x[0] == TAG_APP:
            stack.append(x[1])
            stack.append(x[2])
    return t


def _fire_cl_spine(head, args):
    """Contract the head rule if enough arguments are present."""
    if head[0] == TAG_K and len(args) >= 2:
        return app_chain(args[0], args[2:])
    if head[0] == TAG_S and len(args) >= 3:
        x, y, z = args[0], args[1], args[2]
        return app_chain(
            (TAG_APP, (TAG_APP, x, z), (TAG_APP, y, z)), args[3:]
        )
    return None


def _step_cl_lazy(t):
    head, args = spine(t)
    if head[0] == TAG_META:
        return None
    return _fire_cl_spine(head, args)


def is_cl_cbv_value(t) -> bool:
    head, args = spine(t)
    if head[0] == TAG_META:
        return not args
    if not all(is_cl_cbv_value(a) for a in args):
        return False
    return len(args) < (2 if head[0] == TAG_K else 3)


def _step_cl_cbv(t):
    spine_stack = []
    cur = t
    red = None
    while cur[0] == TAG_APP:
        f, a = cur[1], cur[2]
        if not is_cl_cbv_value(f):
            spine_stack.append((cur, 0))
            cur = f
            continue
        if not is_cl_cbv_value(a):
            spine_stack.append((cur, 1))
            cur = a
            continue
        head, args = spine(cur)
        if head[0] != TAG_META:
            red = _fire_cl_spine(head, args)
        break
    if red is None:
        return None
    for node, slot in reversed(spine_stack):
        red = (TAG_APP, red, node[2]) if slot == 0 else (TAG_APP, node[1], red)
    return red


# --------------------------------------------------------------------------
# Unified stepping interface
# --------------------------------------------------------------------------


def _halt_result(t, calculus, strategy) -> StepResult:
    if calculus == "clstar":
        c = classify_lazy(t) if strategy == "lazy" else classify_cbv(t)
        if c.kind in ("bare_var", "head_stuck", "critical"):
            return StepResult(STUCK_OPEN, None, c, c.var)
        if c.kind == "no_class":
            return StepResult(STUCK_OPEN, None, c, None)
        return StepResult(HALTED, None, c, None)
    if calculus == "cl":
        head, args = spine(t)
        if head[0] == TAG_META:
            kind = "bare_var" if not args else "head_stuck"
            c = Classification(kind, head[1], len(args))
            return StepResult(STUCK_OPEN, None, c, head[1])
        if strategy == "cbv" and not is_cl_cbv_value(t):
            # stuck under cbv: some argument is blocked by a metavariable
            blocker = _cl_cbv_blocker(t)
            if blocker is not None:
                return StepResult(
                    STUCK_OPEN, None, Classification("critical", blocker, 0), blocker
                )
            return StepResult(STUCK_OPEN, None, Classification("no_class"), None)
        c = Classification("value", None, len(args))
        return StepResult(HALTED, None, c, None)
    # lambda
    c, var = _lambda_halt_info(t, strategy)
    if c.kind in ("bare_var", "head_stuck"):
        return StepResult(STUCK_OPEN, None, c, var)
    if c.kind == "no_class":
        return StepResult(STUCK_OPEN, None, c, None)
    return StepResult(HALTED, None, c, None)


def _cl_cbv_blocker(t):
    """Name of the metavariable blocking a stuck plain-cl cbv term, found
    by the same descent the stepper uses (operator first, then operand)."""
    cur = t
    while cur[0] == TAG_APP:
        f, a = cur[1], cur[2]
        if not is_cl_cbv_value(f):
            cur = f
            continue
        if not is_cl_cbv_value(a):
            cur = a
            continue
        break
    head, args = spine(cur)
    return head[1] if head[0] == TAG_META and args else None


def step(t, calculus: str, strategy: str) -> StepResult:
    """One deterministic reduction step.

    Returns Stepped(next) when the strategy's unique redex exists,
    Halted(classification) on values, and StuckOpen(var) when a free
    (meta)variable blocks reduction.
    """
    if strategy not in ("lazy", "cbv"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if calculus == "clstar":
        nxt = kernel.step_lazy(t) if strategy == "lazy" else kernel.step_cbv(t)
    elif calculus == "cl":
        _require_plain(t)
        nxt = _step_cl_lazy(t) if strategy == "lazy" else _step_cl_cbv(t)
    elif calculus == "lambda":
        nxt = _step_lambda_lazy(t) if strategy == "lazy" else _step_lambda_cbv(t)
    else:
        raise ValueError(f"unknown calculus {calculus!r}")
    if nxt is not None:
        return StepResult(STEPPED, nxt)
    return _halt_result(t, calculus, strategy)


def normalize_tau(t, calculus: str, strategy: str, fuel: int = 512) -> NormalizeOutcome:
    """Iterate `step` until it halts or the fuel runs out."""
    if calculus == "clstar":
        # fast path through the kernel
        norm = kernel.normalize_lazy if strategy == "lazy" else kernel.normalize_cbv
        term, steps, exhausted = norm(t, fuel)
        return NormalizeOutcome(term, FUEL_EXHAUSTED if exhausted else NORMAL, steps)
    steps = 0
    while steps < fuel:
        r = step(t, calculus, strategy)
        if r.kind != STEPPED:
            return NormalizeOutcome(t, NORMAL, steps)
        t = r.next
        steps += 1
    r = step(t, calculus, strategy)
    status = FUEL_EXHAUSTED if r.kind == STEPPED else NORMAL
    return NormalizeOutcome(t, status, steps)


# --------------------------------------------------------------------------
# Strong normal-order normalization (lambda only)
# --------------------------------------------------------------------------


def normalize_full(t, fuel: int = 512) -> NormalizeOutcome:
    """Normal-order (leftmost-outermost, under binders) normalization of a
    lambda term, counting beta contractions against `fuel`."""
    budget = [fuel]

    def whnf(x):
        while True:
            if not isinstance(x, LApp):
                return x
            f = whnf(x.fun)
            if isinstance(f, LAbs):
                if budget[0] <= 0:
                    raise FuelError
                budget[0] -= 1
                x = beta_contract(f, x.arg)
            else:
                return LApp(f, x.arg) if f is not x.fun else x

    def nf(x):
        x = whnf(x)
        if isinstance(x, LAbs):
            return LAbs(nf(x.body), hint=x.hint)
        if isinstance(x, LApp):
            return LApp(nf(x.fun), nf(x.arg))
        return x

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 100_000))
    try:
        result = nf(t)
        return NormalizeOutcome(result, NORMAL, fuel - budget[0])
    except FuelError:
        return NormalizeOutcome(t, FUEL_EXHAUSTED, fuel)
    finally:
        sys.setrecursionlimit(old_limit)
