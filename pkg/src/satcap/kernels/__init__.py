"""Backend selection for the batched hot loops.

The compiled Cython core is used when its extension imported; otherwise
the numpy fallback takes over.  SATCAP_BACKEND=pure|compiled|auto forces
the choice at import time, and :func:`use_backend` switches it at runtime
(benchmarks and tests).  Both backends expose the same two functions with
identical semantics; results agree to floating-point rounding.
"""

import os

import numpy as np

from . import _pure

try:
    from . import _core
except ImportError:
    _core = None


def _resolve(name):
    if name in (None, "", "auto"):
        return _core if _core is not None else _pure
    if name == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernels requested but the extension is not built")
        return _core
    if name == "pure":
        return _pure
    raise ValueError(f"unknown backend {name!r}; expected 'auto', 'compiled' or 'pure'")


_active = _resolve(os.environ.get("SATCAP_BACKEND"))


def use_backend(name):
    """Switch the active backend; returns the backend module."""
    global _active
    _active = _resolve(name)
    return _active


def backend_name() -> str:
    return _active.NAME


def available_backends():
    names = ["pure"]
    if _core is not None:
        names.append("compiled")
    return tuple(names)


def _check_angles(theta, phi):
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    if theta.ndim != 2 or theta.shape != phi.shape:
        raise ValueError("theta and phi must be (n_samples, n_t) arrays of equal shape")
    return theta, phi


def gram_batch(theta, phi, n_r, kd):
    """Batched Gram matrices (B, s, s) for angle batches of shape (B, n_t)."""
    theta, phi = _check_angles(theta, phi)
    return _active.gram_batch(theta, phi, int(n_r), float(kd))


def trace_powers_batch(theta, phi, n_r, kd, kmax=3):
    """Batched Trace(W^k), k = 1..kmax (kmax in 1..6), shape (B, kmax)."""
    if not 1 <= int(kmax) <= 6:
        raise ValueError(f"kmax must be in 1..6, got {kmax}")
    theta, phi = _check_angles(theta, phi)
    return _active.trace_powers_batch(theta, phi, int(n_r), float(kd), int(kmax))
