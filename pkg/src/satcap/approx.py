"""Truncated alternating-series capacity approximation from trace moments.

Expanding log2(1 + rho*lambda) termwise and averaging turns the ergodic
capacity into (1/ln 2) * sum_k (-1)^(k+1) rho^k/k * E{Trace(W^k)}.  The
expansion converges only for rho*lambda_max <= 1; since the unit trace
bounds lambda_max by 1, rho <= 1 is the guaranteed region.  Strict mode
rejects rho > 1, otherwise a SeriesDivergenceWarning is emitted and the
partial sum returned as-is.

Because the eigenvalues lie in [0, 1], moment sequences are nonincreasing
in k, so the first omitted term bounds the truncation error; that is
``series_remainder_bound``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

_LN2 = math.log(2.0)


class SeriesDivergenceWarning(UserWarning):
    """Series evaluated at rho > 1, outside the guaranteed convergence region."""


@dataclass(frozen=True)
class ApproxSpec:
    """Truncation order, evaluation SNR and convergence policy."""

    rho: float
    n_terms: int = 3
    strict: bool = False

    def __post_init__(self):
        if not isinstance(self.n_terms, (int, np.integer)) or self.n_terms < 1:
            raise ValueError(f"n_terms must be an integer >= 1, got {self.n_terms!r}")
        if not (math.isfinite(self.rho) and self.rho >= 0.0):
            raise ValueError(f"rho must be finite and >= 0, got {self.rho}")


def _check_convergence(spec: ApproxSpec, what: str):
    if spec.rho > 1.0:
        if spec.strict:
            raise ConvergenceError(
                f"{what} requires rho <= 1 (got rho={spec.rho}); the expansion "
                "of log(1+x) is not guaranteed to converge beyond"
            )
        warnings.warn(
            f"{what} evaluated at rho={spec.rho} > 1; result may diverge",
            SeriesDivergenceWarning,
            stacklevel=3,
        )


def _moment_vector(moments, minimum: int) -> np.ndarray:
    m = np.asarray(moments, dtype=np.float64)
    if m.ndim != 1 or m.size < minimum:
        raise ValueError(f"need at least {minimum} moments, got shape {m.shape}")
    return m


def capacity_series(moments, spec: ApproxSpec) -> float:
    """Partial sum of the moment series, bits/s/Hz.

    ``moments[k-1]`` is E{Trace(W^k)}; the first spec.n_terms entries are
    used.
    """
    m = _moment_vector(moments, spec.n_terms)
    _check_convergence(spec, "capacity_series")
    k = np.arange(1, spec.n_terms + 1, dtype=np.float64)
    signs = np.where(np.arange(spec.n_terms) % 2 == 0, 1.0, -1.0)
    return float(np.sum(signs * spec.rho**k / k * m[: spec.n_terms]) / _LN2)


def series_remainder_bound(moments, spec: ApproxSpec) -> float:
    """Upper bound on the truncation error of the spec.n_terms partial sum.

    Uses the first omitted term: moments[K] when supplied, otherwise the
    bound E{Trace(W^(K+1))} <= moments[K-1].  Invalid for rho > 1.
    """
    m = _moment_vector(moments, spec.n_terms)
    if spec.rho > 1.0:
        raise ConvergenceError(
            f"remainder bound requires rho <= 1, got rho={spec.rho}"
        )
    K = spec.n_terms
    next_moment = float(m[K]) if m.size > K else float(m[K - 1])
    return float(spec.rho ** (K + 1) / (K + 1) * next_moment / _LN2)
