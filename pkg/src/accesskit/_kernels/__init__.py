"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``ACCESSKIT_PURE=1`` to force the pure-Python kernels (used by the
benchmark and by tests that exercise both paths).
"""

import os

from . import pure

if os.environ.get("ACCESSKIT_PURE") == "1":
    active = pure
else:
    try:
        from . import fast as active  # type: ignore[no-redef]
    except ImportError:
        active = pure

IMPLEMENTATION = active.IMPLEMENTATION
mul_terms = active.mul_terms
add_terms = active.add_terms
addmul_terms = active.addmul_terms
scale_terms = active.scale_terms
eval_terms = active.eval_terms
