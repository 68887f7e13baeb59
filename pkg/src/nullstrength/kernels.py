"""Backend selection for the Monte Carlo kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy implementations in ``_pykernels``.  Set ``NULLSTRENGTH_PURE_PYTHON=1``
to force the numpy backend.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("NULLSTRENGTH_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        pass

standard_t = _impl.standard_t
abs_kth = _impl.abs_kth
diff_abs_kth = _impl.diff_abs_kth
count_abs_within = _impl.count_abs_within


def backends():
    """All importable kernel modules, keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return found
