"""Select the compiled coordinate-descent core, falling back to pure Python.

Set OWLREC_BACKEND=python to force the fallback (used by the benchmark and
the backend-equivalence tests).
"""

import os

from . import _cd_py

if os.environ.get("OWLREC_BACKEND", "").lower() == "python":
    _impl = _cd_py
else:
    try:
        from . import _cd_fast as _impl
    except ImportError:
        _impl = _cd_py

BACKEND = _impl.BACKEND_NAME
dual_cd_run = _impl.dual_cd_run
prox_hinge_cd = _impl.prox_hinge_cd


def get_backend(name=None):
    """Return (backend_name, dual_cd_run, prox_hinge_cd) for an explicit choice."""
    if name is None or name == BACKEND:
        return BACKEND, dual_cd_run, prox_hinge_cd
    if name == "python":
        return "python", _cd_py.dual_cd_run, _cd_py.prox_hinge_cd
    if name == "cython":
        from . import _cd_fast

        return "cython", _cd_fast.dual_cd_run, _cd_fast.prox_hinge_cd
    raise ValueError(f"unknown backend {name!r}")
