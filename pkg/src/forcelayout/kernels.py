"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it imports; otherwise the
numpy twins in ``_pykernels`` take over.  Attribute access on this module is
forwarded to whichever backend is active, so callers write
``kernels.bfs_rows(...)`` without caring which one runs.
"""

from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available():
    return sorted(_BACKENDS)


def backend():
    return _active.BACKEND


def use(name):
    """Switch the active backend; raises KeyError if it is not available."""
    global _active
    _active = _BACKENDS[name]


@contextmanager
def using(name):
    previous = backend()
    use(name)
    try:
        yield _active
    finally:
        use(previous)


def __getattr__(name):
    return getattr(_active, name)
