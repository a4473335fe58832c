"""Hot numerical kernels with backend selection.

The compiled Cython module is used when it was built; otherwise the
pure-Python twin is imported. Both return bit-identical results (the test
suite runs every kernel against both). Sentinels:

* ``equilibrium_deflection`` / ``pull_in_search`` return ``NO_EQUILIBRIUM``
  (-1.0) when no stable state exists and ``NOT_CONVERGED`` (-2.0) when the
  iteration cap is hit;
* ``cutoff_search`` returns ``inf`` when the scan range never crosses the
  threshold.
"""
from __future__ import annotations

from types import ModuleType

from . import _pykernels
from .errors import InvalidInput

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

NO_EQUILIBRIUM = _pykernels.NO_EQUILIBRIUM
NOT_CONVERGED = _pykernels.NOT_CONVERGED

_impl: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available_backends() -> list[str]:
    return ["cython", "python"] if _ckernels is not None else ["python"]


def backend() -> str:
    return "cython" if _impl is _ckernels else "python"


def set_backend(name: str) -> str:
    """Select ``"cython"`` or ``"python"``; returns the previous backend name."""
    global _impl
    previous = backend()
    if name == "python":
        _impl = _pykernels
    elif name == "cython":
        if _ckernels is None:
            raise InvalidInput("the Cython kernels are not built in this installation")
        _impl = _ckernels
    else:
        raise InvalidInput(f"unknown kernel backend {name!r}")
    return previous


def relative_db(u: float, zeta: float) -> float:
    return _impl.relative_db(u, zeta)


def equilibrium_deflection(sm, gap, eps0, bias, pressure, rtol) -> float:
    return _impl.equilibrium_deflection(sm, gap, eps0, bias, pressure, rtol)


def equilibrium_exists(sm, gap, eps0, bias) -> bool:
    return bool(_impl.equilibrium_exists(sm, gap, eps0, bias))


def pull_in_search(sm, gap, eps0, rtol) -> float:
    return _impl.pull_in_search(sm, gap, eps0, rtol)


def cutoff_search(f0, zeta, fmin, fmax, ppd, threshold_db, two_sided, rtol) -> float:
    return _impl.cutoff_search(f0, zeta, fmin, fmax, ppd, threshold_db, two_sided, rtol)
