"""Independent oracles used by the test suite.

Everything here is deliberately written by a different route than the
package code it checks:

* term counters are closed-form dynamic-programming recurrences, checked
  against the package's enumerators;
* the `search_step_*` functions find redexes by enumerating *all*
  decompositions t = D[redex] allowed by each strategy's context grammar,
  instead of the directed single-pass walk the package uses, and return
  the full successor set (which the determinism tests require to have at
  most one element);
* value predicates are re-derived from the value grammars rather than
  imported from the kernel.

Only the term constructors/tags are shared with the package — the
representation is the interface under test.
"""

from __future__ import annotations

from ipobisim.terms import (
    TAG_APP,
    TAG_K,
    TAG_KP,
    TAG_META,
    TAG_S,
    TAG_SP,
    TAG_SPP,
    App,
    LAbs,
    LApp,
    LFree,
    LVar,
)

# --------------------------------------------------------------------------
# Counting oracles (size metric: applications are free, everything else 1)
# --------------------------------------------------------------------------


def count_clstar(size_bound: int, natoms: int) -> int:
    """Number of extended combinator terms of size <= size_bound over
    `natoms` atoms (K, S and the metavariable pool)."""
    u = [0] * (size_bound + 1)
    for n in range(1, size_bound + 1):
        if n == 1:
            u[n] = natoms
            continue
        total = 2 * u[n - 1]  # K'(t), S'(t)
        total += sum(u[i] * u[n - 1 - i] for i in range(1, n - 1))  # S''(a,b)
        total += sum(u[i] * u[n - i] for i in range(1, n))  # applications
        u[n] = total
    return sum(u)


def count_cl(size_bound: int, natoms: int) -> int:
    """Plain combinator terms (applications only)."""
    u = [0] * (size_bound + 1)
    for n in range(1, size_bound + 1):
        if n == 1:
            u[n] = natoms
        else:
            u[n] = sum(u[i] * u[n - i] for i in range(1, n))
    return sum(u)


def count_lambda(size_bound: int, nfree: int = 0) -> int:
    """Lambda terms of size <= size_bound with `nfree` free names
    available (0 = closed)."""
    memo = {}

    def c(n, d):
        if n < 1:
            return 0
        key = (n, d)
        if key not in memo:
            if n == 1:
                memo[key] = d + nfree
            else:
                total = c(n - 1, d + 1)
                total += sum(c(i, d) * c(n - i, d) for i in range(1, n))
                memo[key] = total
        return memo[key]

    return sum(c(n, 0) for n in range(1, size_bound + 1))


# --------------------------------------------------------------------------
# Independent value predicates
# --------------------------------------------------------------------------


def oracle_value_lazy(t) -> bool:
    return t[0] in (TAG_K, TAG_S, TAG_KP, TAG_SP, TAG_SPP)


def oracle_value_cbv(t) -> bool:
    tag = t[0]
    if tag in (TAG_K, TAG_S, TAG_META):
        return True
    if tag in (TAG_KP, TAG_SP):
        return oracle_value_cbv(t[1])
    if tag == TAG_SPP:
        return oracle_value_cbv(t[1]) and oracle_value_cbv(t[2])
    return False


def oracle_value_cl_cbv(t) -> bool:
    """Plain-CL cbv values: K, S, metavariables, and under-applied K/S
    whose present arguments are values."""
    if t[0] in (TAG_K, TAG_S, TAG_META):
        return True
    if t[0] != TAG_APP:
        return False
    head = t
    args = []
    while head[0] == TAG_APP:
        args.append(head[2])
        head = head[1]
    args.reverse()
    if not all(oracle_value_cl_cbv(a) for a in args):
        return False
    if head[0] == TAG_META:
        return False  # stuck, not a value
    arity = 2 if head[0] == TAG_K else 3
    return len(args) < arity


def oracle_value_lambda_cbv(t) -> bool:
    return isinstance(t, (LAbs, LFree))


# --------------------------------------------------------------------------
# Base rule tables (shared spec content, separate code path)
# --------------------------------------------------------------------------


def _fire_clstar(f, a):
    tag = f[0]
    if tag == TAG_K:
        return (TAG_KP, a)
    if tag == TAG_S:
        return (TAG_SP, a)
    if tag == TAG_KP:
        return f[1]
    if tag == TAG_SP:
        return (TAG_SPP, f[1], a)
    if tag == TAG_SPP:
        return (TAG_APP, (TAG_APP, f[1], a), (TAG_APP, f[2], a))
    return None


# --------------------------------------------------------------------------
# Decomposition-search steppers: extended combinator calculus
# --------------------------------------------------------------------------


def search_step_clstar_lazy(t) -> set:
    """All successors via D ::= [] | D M decompositions."""
    out = set()
    rebuild = lambda x: x  # noqa: E731
    cur = t
    while cur[0] == TAG_APP:
        f, a = cur[1], cur[2]
        if f[0] != TAG_APP and f[0] != TAG_META:
            red = _fire_clstar(f, a)
            if red is not None:
                out.add(rebuild(red))
        rebuild = (lambda rb, arg: (lambda x: rb((TAG_APP, x, arg))))(rebuild, a)
        cur = f
    return out


def search_step_clstar_cbv(t) -> set:
    """All successors via D ::= [] | D M | V D | K'(D) | S'(D) |
    S''(D,M) | S''(V,D), firing only value-saturated head rules."""
    out = set()

    def walk(sub, rebuild):
        tag = sub[0]
        if tag == TAG_APP:
            f, a = sub[1], sub[2]
            if (
                oracle_value_cbv(f)
                and oracle_value_cbv(a)
                and f[0] != TAG_META
            ):
                out.add(rebuild(_fire_clstar(f, a)))
            walk(f, lambda x: rebuild((TAG_APP, x, a)))
            if oracle_value_cbv(f):
                walk(a, lambda x: rebuild((TAG_APP, f, x)))
        elif tag in (TAG_KP, TAG_SP):
            walk(sub[1], lambda x: rebuild((tag, x)))
        elif tag == TAG_SPP:
            x1, x2 = sub[1], sub[2]
            walk(x1, lambda x: rebuild((tag, x, x2)))
            if oracle_value_cbv(x1):
                walk(x2, lambda x: rebuild((tag, x1, x)))

    walk(t, lambda x: x)
    return out


# --------------------------------------------------------------------------
# Decomposition-search steppers: plain combinator logic
# --------------------------------------------------------------------------


def _fire_cl(sub):
    """Contract sub if it is K a b or S a b c (no value restriction)."""
    if sub[0] != TAG_APP:
        return None
    f, b = sub[1], sub[2]
    if f[0] == TAG_APP:
        g, a = f[1], f[2]
        if g[0] == TAG_K:
            return a
        if g[0] == TAG_APP and g[1][0] == TAG_S:
            x = g[2]
            return (TAG_APP, (TAG_APP, x, b), (TAG_APP, a, b))
    return None


def search_step_cl_lazy(t) -> set:
    out = set()
    rebuild = lambda x: x  # noqa: E731
    cur = t
    while cur[0] == TAG_APP:
        red = _fire_cl(cur)
        if red is not None:
            out.add(rebuild(red))
        a = cur[2]
        rebuild = (lambda rb, arg: (lambda x: rb((TAG_APP, x, arg))))(rebuild, a)
        cur = cur[1]
    return out


def _fire_cl_cbv(sub):
    red = _fire_cl(sub)
    if red is None:
        return None
    # value restriction: every spine argument must be a value
    head = sub
    args = []
    while head[0] == TAG_APP:
        args.append(head[2])
        head = head[1]
    if all(oracle_value_cl_cbv(a) for a in args):
        return red
    return None


def search_step_cl_cbv(t) -> set:
    out = set()

    def walk(sub, rebuild):
        if sub[0] != TAG_APP:
            return
        red = _fire_cl_cbv(sub)
        if red is not None:
            out.add(rebuild(red))
        f, a = sub[1], sub[2]
        walk(f, lambda x: rebuild((TAG_APP, x, a)))
        if oracle_value_cl_cbv(f):
            walk(a, lambda x: rebuild((TAG_APP, f, x)))

    walk(t, lambda x: x)
    return out


# --------------------------------------------------------------------------
# Decomposition-search steppers: lambda calculus (weak strategies)
# --------------------------------------------------------------------------


def search_step_lambda_lazy(t) -> set:
    from ipobisim.reduction import beta_contract

    out = set()

    def walk(sub, rebuild):
        if not isinstance(sub, LApp):
            return
        if isinstance(sub.fun, LAbs):
            out.add(rebuild(beta_contract(sub.fun, sub.arg)))
        walk(sub.fun, lambda x: rebuild(LApp(x, sub.arg)))

    walk(t, lambda x: x)
    return out


def search_step_lambda_cbv(t) -> set:
    from ipobisim.reduction import beta_contract

    out = set()

    def walk(sub, rebuild):
        if not isinstance(sub, LApp):
            return
        if isinstance(sub.fun, LAbs) and oracle_value_lambda_cbv(sub.arg):
            out.add(rebuild(beta_contract(sub.fun, sub.arg)))
        walk(sub.fun, lambda x: rebuild(LApp(x, sub.arg)))
        if oracle_value_lambda_cbv(sub.fun):
            walk(sub.arg, lambda x: rebuild(LApp(sub.fun, x)))

    walk(t, lambda x: x)
    return out


# --------------------------------------------------------------------------
# Unification oracles
# --------------------------------------------------------------------------


def is_unifier(theta: dict, a, b) -> bool:
    from ipobisim.terms import apply_subst

    return apply_subst(a, theta) == apply_subst(b, theta)


def is_idempotent(theta: dict) -> bool:
    from ipobisim.terms import apply_subst

    return all(apply_subst(t, theta) == t for t in theta.values())
