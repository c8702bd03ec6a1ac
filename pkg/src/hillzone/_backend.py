"""Select the monodromy kernel: compiled extension if importable, else Python.

Set ``HILLZONE_PURE=1`` to force the Python twin.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_IMPLS = {"python": _kernels_py}
if _compiled is not None:
    _IMPLS["compiled"] = _compiled

if _compiled is not None and os.environ.get("HILLZONE_PURE", "") not in ("1", "true", "yes"):
    BACKEND = "compiled"
else:
    BACKEND = "python"


def available():
    return sorted(_IMPLS)


def kernel(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    name = BACKEND if name is None else name
    try:
        return _IMPLS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available; have {available()}") from None
