"""Kernel selection.

The hot operations on extended combinator terms (value tests, stepping,
classification, bounded normalization, and the fused enumeration sweep
used by the invariant suite) exist twice: `_step_core` is the compiled
Cython extension, `_step_py` the pure-Python twin with identical
semantics.  The compiled one is used when importable; set IPOBISIM_PURE=1
to force the pure twin (the benchmark and the kernel-agreement tests do).
"""

from __future__ import annotations

import os

if os.environ.get("IPOBISIM_PURE") == "1":
    from . import _step_py as _impl

    BACKEND = "pure"
else:
    try:
        from . import _step_core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _step_py as _impl

        BACKEND = "pure"

is_value_lazy = _impl.is_value_lazy
is_value_cbv = _impl.is_value_cbv
step_lazy = _impl.step_lazy
step_cbv = _impl.step_cbv
normalize_lazy = _impl.normalize_lazy
normalize_cbv = _impl.normalize_cbv
classify_lazy = _impl.classify_lazy
classify_cbv = _impl.classify_cbv
subst_metas = _impl.subst_metas

# The compiled twin ships a fused enumerate-and-check loop; the pure twin
# does not (sweeps.py assembles one from the primitives above instead).
fused_sweep = getattr(_impl, "sweep_invariants", None)

CLS_VALUE = _impl.CLS_VALUE
CLS_REDUCIBLE = _impl.CLS_REDUCIBLE
CLS_BARE_VAR = _impl.CLS_BARE_VAR
CLS_HEAD_STUCK = _impl.CLS_HEAD_STUCK
CLS_CRITICAL = _impl.CLS_CRITICAL
CLS_NO_CLASS = _impl.CLS_NO_CLASS
