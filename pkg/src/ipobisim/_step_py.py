"""Pure-Python kernel for the extended combinator calculus.

This module knows nothing about the rest of the package: it operates on
raw tagged tuples (see `terms` for the tag layout) and implements the two
evaluation strategies, value tests, classification, and bounded
normalization.  A compiled twin (`_step_core`, Cython) exports the same
names with the same semantics; `kernel` picks one at import time and
`tests/test_kernels.py` checks the two against each other on enumerated
terms.  Keep the twins in lockstep.

All routines are iterative (explicit work stacks) so that deeply nested
terms produced by long reduction sequences cannot hit the interpreter
recursion limit.
"""

from __future__ import annotations

# Tag layout, duplicated from `terms` on purpose: this module must stay
# import-free so both kernel twins sit below everything else.
TAG_K = 0
TAG_S = 1
TAG_KP = 2
TAG_SP = 3
TAG_SPP = 4
TAG_APP = 5
TAG_META = 6

# classification codes shared by both twins
CLS_VALUE = 0
CLS_REDUCIBLE = 1
CLS_BARE_VAR = 2
CLS_HEAD_STUCK = 3
CLS_CRITICAL = 4
CLS_NO_CLASS = 5


def is_value_lazy(t):
    """Lazy values: K, S, K'(M), S'(M), S''(M,N) for arbitrary M, N.

    Metavariables are deliberately *not* lazy values; a bare variable is
    its own observation class.
    """
    return t[0] < TAG_APP


def is_value_cbv(t):
    """Cbv values: metavariables, K, S, and partial applications whose
    stored arguments are themselves cbv values."""
    stack = [t]
    while stack:
        x = stack.pop()
        tag = x[0]
        if tag == TAG_APP:
            return False
        if tag == TAG_KP or tag == TAG_SP:
            stack.append(x[1])
        elif tag == TAG_SPP:
            stack.append(x[1])
            stack.append(x[2])
    return True


def _fire(f, a):
    """Contract the head redex `f a` where f is a combinator form.

    Returns None when f is a metavariable (no rule applies).
    """
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


def step_lazy(t):
    """One lazy step, or None.  The unique lazy redex sits at the bottom
    of the left application spine; everything under K'/S'/S'' is frozen."""
    path = []
    while t[0] == TAG_APP:
        path.append(t[2])
        t = t[1]
    if not path or t[0] == TAG_META:
        return None
    red = _fire(t, path.pop())
    while path:
        red = (TAG_APP, red, path.pop())
    return red


def step_cbv(t):
    """One cbv step, or None.

    Search order: in an application, the operator is reduced to a value,
    then the operand, then the head rule fires; stored arguments of
    K'/S'/S'' are reduced left to right before the constructor is
    considered a value.  Metavariables count as values.  The search path
    is unique, so no backtracking is needed: if the chosen position is
    stuck, the whole term is stuck.
    """
    spine = []  # (node, child slot)
    cur = t
    red = None
    while True:
        tag = cur[0]
        if tag == TAG_APP:
            f, a = cur[1], cur[2]
            if not is_value_cbv(f):
                spine.append((cur, 1))
                cur = f
                continue
            if not is_value_cbv(a):
                spine.append((cur, 2))
                cur = a
                continue
            red = _fire(f, a)
            break
        if tag == TAG_KP or tag == TAG_SP:
            c = cur[1]
            if not is_value_cbv(c):
                spine.append((cur, 1))
                cur = c
                continue
            break
        if tag == TAG_SPP:
            x, y = cur[1], cur[2]
            if not is_value_cbv(x):
                spine.append((cur, 1))
                cur = x
                continue
            if not is_value_cbv(y):
                spine.append((cur, 2))
                cur = y
                continue
            break
        break  # K, S or metavariable: nothing to do
    if red is None:
        return None
    for node, slot in reversed(spine):
        ntag = node[0]
        if ntag == TAG_KP or ntag == TAG_SP:
            red = (ntag, red)
        elif slot == 1:
            red = (ntag, red, node[2])
        else:
            red = (ntag, node[1], red)
    return red


def normalize_lazy(t, fuel):
    """Iterate step_lazy at most `fuel` times.

    Returns (term, steps, exhausted) where exhausted is True iff the
    budget ran out while the term was still reducible.
    """
    steps = 0
    while steps < fuel:
        nxt = step_lazy(t)
        if nxt is None:
            return t, steps, False
        t = nxt
        steps += 1
    return t, steps, step_lazy(t) is not None


def normalize_cbv(t, fuel):
    steps = 0
    while steps < fuel:
        nxt = step_cbv(t)
        if nxt is None:
            return t, steps, False
        t = nxt
        steps += 1
    return t, steps, step_cbv(t) is not None


def classify_lazy(t):
    """Total partition of terms under the lazy strategy.

    Returns (code, var, nargs):
      CLS_BARE_VAR    - a metavariable on its own
      CLS_HEAD_STUCK  - metavariable head applied to nargs >= 1 arguments
      CLS_VALUE       - combinator form with an empty spine
      CLS_REDUCIBLE   - combinator form with at least one spine argument
    """
    nargs = 0
    while t[0] == TAG_APP:
        nargs += 1
        t = t[1]
    if t[0] == TAG_META:
        if nargs == 0:
            return (CLS_BARE_VAR, t[1], 0)
        return (CLS_HEAD_STUCK, t[1], nargs)
    if nargs == 0:
        return (CLS_VALUE, None, 0)
    return (CLS_REDUCIBLE, None, nargs)


def classify_cbv(t):
    """Total partition under cbv.

    Returns (code, var, 0).  A stuck non-value has a critical variable
    when the unique stuck position is an application with a metavariable
    operator reachable through application nodes only; a stuck position
    buried under K'/S'/S'' has no class.
    """
    if t[0] == TAG_META:
        return (CLS_BARE_VAR, t[1], 0)
    # Single descent mirroring step_cbv, remembering whether we ever
    # entered a constructor argument.
    cur = t
    under_prime = False
    while True:
        tag = cur[0]
        if tag == TAG_APP:
            f, a = cur[1], cur[2]
            if not is_value_cbv(f):
                cur = f
                continue
            if not is_value_cbv(a):
                cur = a
                continue
            if f[0] == TAG_META:
                if under_prime:
                    return (CLS_NO_CLASS, None, 0)
                return (CLS_CRITICAL, f[1], 0)
            return (CLS_REDUCIBLE, None, 0)
        if tag == TAG_KP or tag == TAG_SP:
            c = cur[1]
            if not is_value_cbv(c):
                under_prime = True
                cur = c
                continue
            return (CLS_VALUE, None, 0)
        if tag == TAG_SPP:
            x, y = cur[1], cur[2]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            if not is_value_cbv(y):
                under_prime = True
                cur = y
                continue
            return (CLS_VALUE, None, 0)
        # K, S or metavariable leaf
        return (CLS_VALUE, None, 0)


def subst_metas(t, mapping):
    """Capture-free substitution of metavariables (combinator terms bind
    nothing, so this is a plain rebuild)."""
    if not mapping:
        return t
    vals = []
    ops = [(0, t)]
    while ops:
        op, x = ops.pop()
        if op == 0:  # visit
            tag = x[0]
            if tag == TAG_META:
                vals.append(mapping.get(x[1], x))
            elif tag == TAG_K or tag == TAG_S:
                vals.append(x)
            elif tag == TAG_KP or tag == TAG_SP:
                ops.append((1, tag))
                ops.append((0, x[1]))
            else:
                ops.append((2, tag))
                ops.append((0, x[2]))
                ops.append((0, x[1]))
        elif op == 1:  # rebuild unary
            vals.append((x, vals.pop()))
        else:  # rebuild binary
            b = vals.pop()
            a = vals.pop()
            vals.append((x, a, b))
    return vals[0]
