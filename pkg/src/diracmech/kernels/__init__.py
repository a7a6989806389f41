"""Backend selection for the hot discrete-Lagrangian kernels.

The compiled extension is used when available; the pure-Python module is the
fallback. Set DIRACMECH_KERNELS=python to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

import numpy as np

from . import _pykern

POT_ZERO = _pykern.POT_ZERO
POT_HARMONIC = _pykern.POT_HARMONIC
POT_PENDULUM = _pykern.POT_PENDULUM

if os.environ.get("DIRACMECH_KERNELS", "") == "python":
    _impl = _pykern
    BACKEND = "python"
else:
    try:
        from . import _fastkern as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykern
        BACKEND = "python"


def get_backend(name=None):
    """Return (module, backend_name) for an explicit backend choice."""
    if name in (None, "auto"):
        return _impl, BACKEND
    if name == "python":
        return _pykern, "python"
    if name == "compiled":
        from . import _fastkern
        return _fastkern, "compiled"
    raise ValueError(f"unknown kernel backend {name!r}")


def make_kmp_kernels(potential_id, rule, h, backend=None):
    """Slot evaluators (value, d1, d2) for a kinetic-minus-potential system.

    Arrays are passed through np.ascontiguousarray so the compiled kernels
    can take typed memoryviews.
    """
    impl, _ = get_backend(backend)

    def value(q0, q1):
        return impl.ld_value(potential_id, rule, h,
                             np.ascontiguousarray(q0, float),
                             np.ascontiguousarray(q1, float))

    def d1(q0, q1):
        return impl.ld_d1(potential_id, rule, h,
                          np.ascontiguousarray(q0, float),
                          np.ascontiguousarray(q1, float))

    def d2(q0, q1):
        return impl.ld_d2(potential_id, rule, h,
                          np.ascontiguousarray(q0, float),
                          np.ascontiguousarray(q1, float))

    return value, d1, d2
