# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for the extended combinator calculus.

Twin of `_step_py`: same names, same tagged-tuple term representation,
same semantics — keep the two in lockstep (tests/test_kernels.py checks
them against each other on enumerated corpora).  On top of the shared
API this module provides `sweep_invariants`, a fused enumerate-and-check
loop used by the bulk invariant suite, with its own printer and parser
so the round-trip check does not pay Python call overhead per term.
"""

# tag layout, duplicated from `terms` on purpose
DEF TAG_K = 0
DEF TAG_S = 1
DEF TAG_KP = 2
DEF TAG_SP = 3
DEF TAG_SPP = 4
DEF TAG_APP = 5
DEF TAG_META = 6

CLS_VALUE = 0
CLS_REDUCIBLE = 1
CLS_BARE_VAR = 2
CLS_HEAD_STUCK = 3
CLS_CRITICAL = 4
CLS_NO_CLASS = 5

DEF C_VALUE = 0
DEF C_REDUCIBLE = 1
DEF C_BARE_VAR = 2
DEF C_HEAD_STUCK = 3
DEF C_CRITICAL = 4
DEF C_NO_CLASS = 5


cpdef bint is_value_lazy(tuple t):
    """Lazy values: K, S, K'(M), S'(M), S''(M,N) for arbitrary M, N."""
    return <int> t[0] < TAG_APP


cpdef bint is_value_cbv(tuple t):
    """Cbv values: metavariables, K, S, and partial applications whose
    stored arguments are themselves cbv values."""
    cdef list stack = [t]
    cdef tuple x
    cdef int tag
    while stack:
        x = <tuple> stack.pop()
        tag = <int> x[0]
        if tag == TAG_APP:
            return False
        if tag == TAG_KP or tag == TAG_SP:
            stack.append(x[1])
        elif tag == TAG_SPP:
            stack.append(x[1])
            stack.append(x[2])
    return True


cdef inline object _fire(tuple f, object a):
    """Contract the head redex `f a`; None when f is a metavariable."""
    cdef int tag = <int> f[0]
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


cpdef object step_lazy(tuple t):
    """One lazy step, or None; the unique redex sits at the bottom of
    the left application spine."""
    cdef list path = []
    while <int> t[0] == TAG_APP:
        path.append(t[2])
        t = <tuple> t[1]
    if not path or <int> t[0] == TAG_META:
        return None
    cdef object red = _fire(t, path.pop())
    while path:
        red = (TAG_APP, red, path.pop())
    return red


cpdef object step_cbv(tuple t):
    """One cbv step, or None: operator to value, then operand, then the
    head rule; constructor arguments reduce left to right first."""
    cdef list spine = []  # (node, child slot)
    cdef tuple cur = t, f, a, x, node
    cdef object red = None
    cdef int tag, slot, ntag
    while True:
        tag = <int> cur[0]
        if tag == TAG_APP:
            f = <tuple> cur[1]
            a = <tuple> cur[2]
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
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                spine.append((cur, 1))
                cur = x
                continue
            break
        if tag == TAG_SPP:
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                spine.append((cur, 1))
                cur = x
                continue
            x = <tuple> cur[2]
            if not is_value_cbv(x):
                spine.append((cur, 2))
                cur = x
                continue
            break
        break  # K, S or metavariable
    if red is None:
        return None
    cdef Py_ssize_t i
    for i in range(len(spine) - 1, -1, -1):
        node = <tuple> (<tuple> spine[i])[0]
        slot = <int> (<tuple> spine[i])[1]
        ntag = <int> node[0]
        if ntag == TAG_KP or ntag == TAG_SP:
            red = (ntag, red)
        elif slot == 1:
            red = (ntag, red, node[2])
        else:
            red = (ntag, node[1], red)
    return red


def normalize_lazy(t, fuel):
    """Iterate step_lazy at most `fuel` times; returns
    (term, steps, exhausted)."""
    cdef long steps = 0, budget = fuel
    cdef object cur = t, nxt
    while steps < budget:
        nxt = step_lazy(<tuple> cur)
        if nxt is None:
            return cur, steps, False
        cur = nxt
        steps += 1
    return cur, steps, step_lazy(<tuple> cur) is not None


def normalize_cbv(t, fuel):
    cdef long steps = 0, budget = fuel
    cdef object cur = t, nxt
    while steps < budget:
        nxt = step_cbv(<tuple> cur)
        if nxt is None:
            return cur, steps, False
        cur = nxt
        steps += 1
    return cur, steps, step_cbv(<tuple> cur) is not None


cdef inline int _classify_lazy_code(tuple t):
    cdef int nargs = 0
    while <int> t[0] == TAG_APP:
        nargs += 1
        t = <tuple> t[1]
    if <int> t[0] == TAG_META:
        return C_BARE_VAR if nargs == 0 else C_HEAD_STUCK
    return C_VALUE if nargs == 0 else C_REDUCIBLE


def classify_lazy(t):
    """(code, var, nargs) partition of a term under the lazy strategy."""
    cdef tuple cur = <tuple> t
    cdef int nargs = 0
    while <int> cur[0] == TAG_APP:
        nargs += 1
        cur = <tuple> cur[1]
    if <int> cur[0] == TAG_META:
        if nargs == 0:
            return (CLS_BARE_VAR, cur[1], 0)
        return (CLS_HEAD_STUCK, cur[1], nargs)
    if nargs == 0:
        return (CLS_VALUE, None, 0)
    return (CLS_REDUCIBLE, None, nargs)


cdef inline int _classify_cbv_code(tuple t):
    cdef tuple cur = t, f, a, x
    cdef bint under_prime = False
    cdef int tag
    if <int> t[0] == TAG_META:
        return C_BARE_VAR
    while True:
        tag = <int> cur[0]
        if tag == TAG_APP:
            f = <tuple> cur[1]
            a = <tuple> cur[2]
            if not is_value_cbv(f):
                cur = f
                continue
            if not is_value_cbv(a):
                cur = a
                continue
            if <int> f[0] == TAG_META:
                return C_NO_CLASS if under_prime else C_CRITICAL
            return C_REDUCIBLE
        if tag == TAG_KP or tag == TAG_SP:
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            return C_VALUE
        if tag == TAG_SPP:
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            x = <tuple> cur[2]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            return C_VALUE
        return C_VALUE


def classify_cbv(t):
    """(code, var, 0) partition under cbv; mirrors the pure twin."""
    cdef tuple cur = <tuple> t, f, a, x
    cdef bint under_prime = False
    cdef int tag
    if <int> cur[0] == TAG_META:
        return (CLS_BARE_VAR, cur[1], 0)
    while True:
        tag = <int> cur[0]
        if tag == TAG_APP:
            f = <tuple> cur[1]
            a = <tuple> cur[2]
            if not is_value_cbv(f):
                cur = f
                continue
            if not is_value_cbv(a):
                cur = a
                continue
            if <int> f[0] == TAG_META:
                if under_prime:
                    return (CLS_NO_CLASS, None, 0)
                return (CLS_CRITICAL, f[1], 0)
            return (CLS_REDUCIBLE, None, 0)
        if tag == TAG_KP or tag == TAG_SP:
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            return (CLS_VALUE, None, 0)
        if tag == TAG_SPP:
            x = <tuple> cur[1]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            x = <tuple> cur[2]
            if not is_value_cbv(x):
                under_prime = True
                cur = x
                continue
            return (CLS_VALUE, None, 0)
        return (CLS_VALUE, None, 0)


def subst_metas(t, mapping):
    """Substitution of metavariables by plain rebuild."""
    if not mapping:
        return t
    cdef list vals = []
    cdef list ops = [(0, t)]
    cdef tuple item, x
    cdef int op, tag
    cdef object b, a
    while ops:
        item = <tuple> ops.pop()
        op = <int> item[0]
        if op == 0:
            x = <tuple> item[1]
            tag = <int> x[0]
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
        elif op == 1:
            vals.append((<int> item[1], vals.pop()))
        else:
            b = vals.pop()
            a = vals.pop()
            vals.append((<int> item[1], a, b))
    return vals[0]


# --------------------------------------------------------------------------
# printer / parser used by the fused sweep round-trip check
# --------------------------------------------------------------------------


cdef str _format(tuple t):
    cdef list out = []
    cdef list stack = [t]
    cdef object item
    cdef tuple x, a
    cdef int tag
    while stack:
        item = stack.pop()
        if type(item) is str:
            out.append(<str> item)
            continue
        x = <tuple> item
        tag = <int> x[0]
        if tag == TAG_K:
            out.append("K")
        elif tag == TAG_S:
            out.append("S")
        elif tag == TAG_META:
            out.append("?" + <str> x[1])
        elif tag == TAG_KP:
            out.append("K'(")
            stack.append(")")
            stack.append(x[1])
        elif tag == TAG_SP:
            out.append("S'(")
            stack.append(")")
            stack.append(x[1])
        elif tag == TAG_SPP:
            out.append("S''(")
            stack.append(")")
            stack.append(x[2])
            stack.append(",")
            stack.append(x[1])
        else:
            a = <tuple> x[2]
            if <int> a[0] == TAG_APP:
                stack.append(")")
                stack.append(a)
                stack.append(" (")
            else:
                stack.append(a)
                stack.append(" ")
            stack.append(x[1])
    return "".join(out)


cdef tuple _parse_atom(str s, Py_ssize_t pos):
    """Parse one atom; returns (term, new position) or raises ValueError."""
    cdef Py_ssize_t n = len(s), start
    cdef str c
    cdef object inner, second
    if pos >= n:
        raise ValueError("unexpected end of input")
    c = s[pos]
    if c == "K":
        if pos + 2 < n and s[pos + 1] == "'" and s[pos + 2] == "(":
            inner, pos = _parse_seq(s, pos + 3)
            if pos >= n or s[pos] != ")":
                raise ValueError("expected )")
            return (TAG_KP, inner), pos + 1
        return (TAG_K,), pos + 1
    if c == "S":
        if pos + 3 < n and s[pos + 1] == "'" and s[pos + 2] == "'" and s[pos + 3] == "(":
            inner, pos = _parse_seq(s, pos + 4)
            if pos >= n or s[pos] != ",":
                raise ValueError("expected ,")
            second, pos = _parse_seq(s, pos + 1)
            if pos >= n or s[pos] != ")":
                raise ValueError("expected )")
            return (TAG_SPP, inner, second), pos + 1
        if pos + 2 < n and s[pos + 1] == "'" and s[pos + 2] == "(":
            inner, pos = _parse_seq(s, pos + 3)
            if pos >= n or s[pos] != ")":
                raise ValueError("expected )")
            return (TAG_SP, inner), pos + 1
        return (TAG_S,), pos + 1
    if c == "(":
        inner, pos = _parse_seq(s, pos + 1)
        if pos >= n or s[pos] != ")":
            raise ValueError("expected )")
        return inner, pos + 1
    if c == "?":
        start = pos + 1
        pos = start
        while pos < n and (s[pos].isalnum() or s[pos] == "_"):
            pos += 1
        if pos == start:
            raise ValueError("empty metavariable name")
        return (TAG_META, s[start:pos]), pos
    raise ValueError(f"unexpected character {c!r}")


cdef tuple _parse_seq(str s, Py_ssize_t pos):
    """Parse a juxtaposition sequence (left-associated applications)."""
    cdef Py_ssize_t n = len(s)
    cdef object term, nxt
    term, pos = _parse_atom(s, pos)
    while pos < n and s[pos] == " ":
        nxt, pos = _parse_atom(s, pos + 1)
        term = (TAG_APP, term, nxt)
    return term, pos


def format_term_c(t):
    """Printer matching terms.format_cl (exported for the twin tests)."""
    return _format(<tuple> t)


def parse_term_c(s):
    """Parser for the printer's output (exported for the twin tests)."""
    term, pos = _parse_seq(<str> s, 0)
    if pos != len(<str> s):
        raise ValueError("trailing input")
    return term


# --------------------------------------------------------------------------
# fused invariant sweep
# --------------------------------------------------------------------------


# counter slots for the fused sweep
DEF N_TERMS = 0
DEF N_LVAL = 1
DEF N_LRED = 2
DEF N_CVAL = 3
DEF N_CRED = 4
DEF N_VIOL = 5


cdef inline void _violate(str kind, tuple bad, long* c, list examples):
    c[N_VIOL] += 1
    if len(examples) < 10:
        examples.append({"check": kind, "term": _format(bad)})


cdef void _check_one(tuple u, long* c, list examples):
    cdef int code = _classify_lazy_code(u)
    cdef int ccode
    cdef object r1, s1
    cdef str text
    c[N_TERMS] += 1
    r1 = step_lazy(u)
    if code == C_VALUE:
        c[N_LVAL] += 1
        if r1 is not None:
            _violate("lazy_value_steps", u, c, examples)
    elif code == C_REDUCIBLE:
        c[N_LRED] += 1
        if r1 is None:
            _violate("lazy_reducible_stuck", u, c, examples)
        elif step_lazy(u) != r1:
            _violate("lazy_nondeterminism", u, c, examples)
    else:
        _violate("lazy_open_class_on_closed", u, c, examples)
    ccode = _classify_cbv_code(u)
    s1 = step_cbv(u)
    if ccode == C_VALUE:
        c[N_CVAL] += 1
        if s1 is not None:
            _violate("cbv_value_steps", u, c, examples)
    elif ccode == C_REDUCIBLE:
        c[N_CRED] += 1
        if s1 is None:
            _violate("cbv_reducible_stuck", u, c, examples)
        elif step_cbv(u) != s1:
            _violate("cbv_nondeterminism", u, c, examples)
    else:
        _violate("cbv_open_class_on_closed", u, c, examples)
    if code != C_VALUE and code != C_REDUCIBLE:
        _violate("label_bound", u, c, examples)
    text = _format(u)
    try:
        if parse_term_c(text) != u:
            _violate("round_trip", u, c, examples)
    except ValueError:
        _violate("round_trip", u, c, examples)


def sweep_invariants(int size_bound):
    """Enumerate every closed term up to `size_bound` and check, per
    term: lazy and cbv classification/stepper coherence, stepper
    determinism, the label-count bound for closed states, and the
    print/parse round trip.  Returns the same counter dictionary as the
    pure twin in `sweeps`."""
    cdef long counters[6]
    cdef list examples = []
    cdef list levels = [[] for _ in range(size_bound + 1)]
    cdef list level, prev, li, ri
    cdef tuple t
    cdef object f, a
    cdef int n, i, j
    cdef bint store
    for i in range(6):
        counters[i] = 0

    for n in range(1, size_bound + 1):
        store = n < size_bound
        level = <list> levels[n]
        if n == 1:
            for t in ((TAG_K,), (TAG_S,)):
                _check_one(t, counters, examples)
                if store:
                    level.append(t)
            continue
        prev = <list> levels[n - 1]
        for f in prev:
            t = (TAG_KP, f)
            _check_one(t, counters, examples)
            if store:
                level.append(t)
        for f in prev:
            t = (TAG_SP, f)
            _check_one(t, counters, examples)
            if store:
                level.append(t)
        for i in range(1, n - 1):
            li = <list> levels[i]
            ri = <list> levels[n - 1 - i]
            for f in li:
                for a in ri:
                    t = (TAG_SPP, f, a)
                    _check_one(t, counters, examples)
                    if store:
                        level.append(t)
        for i in range(1, n):
            li = <list> levels[i]
            ri = <list> levels[n - i]
            for f in li:
                for a in ri:
                    t = (TAG_APP, f, a)
                    _check_one(t, counters, examples)
                    if store:
                        level.append(t)

    return {
        "terms": counters[N_TERMS],
        "lazy_values": counters[N_LVAL],
        "lazy_reducibles": counters[N_LRED],
        "cbv_values": counters[N_CVAL],
        "cbv_reducibles": counters[N_CRED],
        "violations": counters[N_VIOL],
        "examples": examples,
    }
