"""Backend selection for the term kernels.

The compiled extension is used when it imports; set ``TIGHTWP_PURE_PYTHON=1``
to force the pure-Python fallback.  ``use_backend`` switches at runtime
(the benchmark uses it).
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

mul_terms = add_terms = addmul_into = None
backend = None


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name):
    global mul_terms, add_terms, addmul_into, backend
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    mod = _BACKENDS[name]
    mul_terms, add_terms, addmul_into = mod.mul_terms, mod.add_terms, mod.addmul_into
    backend = name


if os.environ.get("TIGHTWP_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
    use_backend("python")
else:
    use_backend("compiled")
