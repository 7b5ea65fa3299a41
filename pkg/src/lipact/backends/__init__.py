"""Kernel backend selection.

The compiled Cython extension is preferred when it is importable; the
NumPy reference implementation is the fallback.  Set ``LIPACT_BACKEND`` to
``compiled`` or ``python`` to force one (``compiled`` raises if the
extension is missing, instead of silently degrading).
"""

import os

from . import _ref

_choice = os.environ.get("LIPACT_BACKEND", "auto")

if _choice == "python":
    _impl = _ref
elif _choice in ("auto", "compiled"):
    try:
        from . import _fast as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _ref
else:
    raise ValueError(
        f"LIPACT_BACKEND={_choice!r}: expected 'auto', 'compiled', or 'python'"
    )

BACKEND_NAME = _impl.NAME

LEAKY = _ref.LEAKY
EXPLIN = _ref.EXPLIN
SWISH = _ref.SWISH
TANHMIX = _ref.TANHMIX

af_eval = _impl.af_eval
af_grad = _impl.af_grad
min_cross_class = _impl.min_cross_class
