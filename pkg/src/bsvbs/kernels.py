"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when
``BSVBS_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
pure-Python twin is used. Both backends are bit-identical.
"""

import os

from . import _pykernels

_force_pure = os.environ.get("BSVBS_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

anytime_gamma = _impl.anytime_gamma
mix_distribution = _impl.mix_distribution
inverse_cdf = _impl.inverse_cdf
exp3_play = _impl.exp3_play
surrogate_table = _impl.surrogate_table


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
