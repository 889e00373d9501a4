"""Backend selection for the roof-search kernel.

The compiled extension is used when importable; set ``QUDIT_MONOGAMY_PURE=1``
to force the numpy fallback.
"""
import os

from . import _kernel_py

MEASURE_G = _kernel_py.MEASURE_G
MEASURE_C2 = _kernel_py.MEASURE_C2

BACKENDS = {"python": _kernel_py}

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and os.environ.get("QUDIT_MONOGAMY_PURE", "") not in ("1", "true"):
    BACKEND = "compiled"
else:
    BACKEND = "python"


def get(name=None):
    """Kernel module by name; ``None`` means the import-time default."""
    return BACKENDS[name or BACKEND]
