"""Backend selection for the hot kernels.

Backends: ``python`` (numpy), ``compiled`` (Cython, when built) and ``auto``
(the default when the extension is built), which calls the compiled kernel
only up to the size where it beats numpy's BLAS-backed version. The crossover
sizes come from ``benchmarks/bench_kernels.py``. ``GFVFA_BACKEND`` picks the
backend at import; ``GFVFA_BACKEND=compiled`` makes a missing extension an
import error instead of a silent fallback.
"""

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

__all__ = ["BACKEND", "available_backends", "get_backend", "use_backend",
           "bilinear_contract", "choi_williams_table", "gfed_hat_moments"]

_MODULES = {"python": _kernels_py}
if _ckernels is not None:
    _MODULES["compiled"] = _ckernels


# largest vertex count for which "auto" uses the compiled kernel
AUTO_MAX_N = {"bilinear_contract": 8, "choi_williams_table": 16, "gfed_hat_moments": 16}


def available_backends():
    return tuple(_MODULES) + (("auto",) if _ckernels is not None else ())


def _initial_backend():
    requested = os.environ.get("GFVFA_BACKEND", "auto").lower()
    if requested == "auto":
        return "auto" if _ckernels is not None else "python"
    if requested not in ("python", "compiled"):
        raise ImportError(f"GFVFA_BACKEND must be auto, python or compiled, not {requested!r}")
    if requested not in _MODULES:
        raise ImportError("GFVFA_BACKEND=compiled but gfvfa._ckernels is not built")
    return requested


BACKEND = _initial_backend()


def _module(kernel, n):
    if BACKEND == "auto":
        return _ckernels if n <= AUTO_MAX_N[kernel] else _kernels_py
    return _MODULES[BACKEND]


def get_backend():
    return BACKEND


@contextmanager
def use_backend(name):
    """Temporarily switch backends (not thread-safe; meant for tests and benchmarks)."""
    global BACKEND
    if name not in available_backends():
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    saved = BACKEND
    BACKEND = name
    try:
        yield
    finally:
        BACKEND = saved


def bilinear_contract(c, phi):
    return _module("bilinear_contract", len(phi)).bilinear_contract(c, phi)


def choi_williams_table(lam, gamma, tol):
    return _module("choi_williams_table", len(lam)).choi_williams_table(lam, float(gamma), float(tol))


def gfed_hat_moments(x, noise, fa, ua_conj, uh):
    return _module("gfed_hat_moments", len(x)).gfed_hat_moments(x, noise, fa, ua_conj, uh)
