"""Translation between lambda terms and combinator terms.

`to_cl` compiles a lambda term to plain combinator logic (K, S,
applications, metavariables): free lambda variables become metavariables
of the same name, and each binder is eliminated innermost-first by
bracket abstraction over the translated body.  The translation is
deliberately blind — no eta-style shortcuts — so its output matches the
standard equation set clause for clause.

`to_lambda` embeds combinator terms back into the lambda calculus (K and
S become their defining abstractions).  The partial-application
constructors are read administratively: K'(M) as K applied to the
embedding of M, S'(M) and S''(M,N) likewise.  The embedding is a
diagnostic device; nothing in the bisimulation machinery depends on it.

`check_et_identity` confirms, per term, that embedding the translation
recovers the original up to beta conversion (both sides normalized by
`normalize_full` under a shared fuel budget).
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import NORMAL, normalize_full
from .terms import (
    TAG_APP,
    TAG_K,
    TAG_KP,
    TAG_META,
    TAG_S,
    TAG_SP,
    TAG_SPP,
    App,
    K,
    LAbs,
    LApp,
    LFree,
    LVar,
    Meta,
    S,
    alpha_eq,
    lambda_free_names,
)

_SKK = App(App(S, K), K)

CONFIRMED = "confirmed"
FUEL_EXHAUSTED = "fuel_exhausted"


def _abstract(name: str, t) -> tuple:
    """Bracket abstraction: the combinator term \\name.t."""
    tag = t[0]
    if tag == TAG_META and t[1] == name:
        return _SKK
    if tag == TAG_APP:
        return App(App(S, _abstract(name, t[1])), _abstract(name, t[2]))
    # K, S, or a different variable: constant function
    return App(K, t)


def _cl_clauses_fixpoint(t) -> tuple:
    """The lambda-free clauses of the translation (identity on plain
    combinator terms); exposed for the idempotence test."""
    if t[0] == TAG_APP:
        return App(_cl_clauses_fixpoint(t[1]), _cl_clauses_fixpoint(t[2]))
    return t


def to_cl(m) -> tuple:
    """Translate a lambda term to plain combinator logic."""
    taken = set(lambda_free_names(m))

    def fresh(hint, env):
        name = hint or "x"
        if name not in taken and name not in env:
            return name
        i = 1
        while f"{name}{i}" in taken or f"{name}{i}" in env:
            i += 1
        return f"{name}{i}"

    def go(x, env):
        if isinstance(x, LVar):
            return Meta(env[x.index])
        if isinstance(x, LFree):
            return Meta(x.name)
        if isinstance(x, LApp):
            return App(go(x.fun, env), go(x.arg, env))
        if isinstance(x, LAbs):
            name = fresh(x.hint, env)
            return _abstract(name, go(x.body, [name] + env))
        raise TypeError(f"not a lambda term: {x!r}")

    return go(m, [])


_E_K = LAbs(LAbs(LVar(1)), hint="x")
_E_S = LAbs(
    LAbs(
        LAbs(
            LApp(LApp(LVar(2), LVar(0)), LApp(LVar(1), LVar(0))),
            hint="z",
        ),
        hint="y",
    ),
    hint="x",
)


def to_lambda(t) -> object:
    """Embed a combinator term into the lambda calculus."""
    tag = t[0]
    if tag == TAG_K:
        return _E_K
    if tag == TAG_S:
        return _E_S
    if tag == TAG_META:
        return LFree(t[1])
    if tag == TAG_APP:
        return LApp(to_lambda(t[1]), to_lambda(t[2]))
    if tag == TAG_KP:
        return LApp(_E_K, to_lambda(t[1]))
    if tag == TAG_SP:
        return LApp(_E_S, to_lambda(t[1]))
    if tag == TAG_SPP:
        return LApp(LApp(_E_S, to_lambda(t[1])), to_lambda(t[2]))
    raise ValueError(f"cannot embed context holes: {t!r}")


@dataclass(frozen=True)
class ETOutcome:
    status: str  # confirmed | fuel_exhausted
    steps_original: int = 0
    steps_embedded: int = 0


def check_et_identity(m, fuel: int = 512) -> ETOutcome:
    """Normalize m and the embedding of its translation; Confirmed means
    both reached (alpha-equal) normal forms within the fuel.

    A completed comparison that disagrees would falsify the translation
    and raises instead of returning — it must never be mistaken for an
    out-of-fuel result.
    """
    orig = normalize_full(m, fuel)
    if orig.status != NORMAL:
        return ETOutcome(FUEL_EXHAUSTED)
    embedded = normalize_full(to_lambda(to_cl(m)), fuel)
    if embedded.status != NORMAL:
        return ETOutcome(FUEL_EXHAUSTED, orig.steps, fuel)
    if not alpha_eq(orig.result, embedded.result):
        raise RuntimeError(
            "translation identity failed: normal forms differ for "
            f"{m!r}"
        )
    return ETOutcome(CONFIRMED, orig.steps, embedded.steps)
