"""Array kernels with a compiled core and a pure-Python fallback.

The compiled extension (``qdegree.kernels._fast``, Cython) is used when
available; otherwise the numpy fallback (``_ref``) is selected.  Set
``QDEGREE_FORCE_PYTHON=1`` to force the fallback, e.g. for benchmarking
or debugging.  ``BACKEND`` names the active implementation.
"""

import os

if os.environ.get("QDEGREE_FORCE_PYTHON", "") not in ("", "0"):
    from . import _ref as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _ref as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
fwht_inplace = _impl.fwht_inplace
zeta_inplace = _impl.zeta_inplace
mobius_inplace = _impl.mobius_inplace
influence_counts = _impl.influence_counts
sensitivity_profile = _impl.sensitivity_profile
batch_analyze = _impl.batch_analyze

__all__ = [
    "BACKEND",
    "fwht_inplace",
    "zeta_inplace",
    "mobius_inplace",
    "influence_counts",
    "sensitivity_profile",
    "batch_analyze",
]
