"""Per-realization channel capacity, two routes, plus trace-power utilities.

``capacity_logdet`` evaluates log2 det(I + rho*W) through a Cholesky
factorization (log-domain, no determinant overflow); ``capacity_eigen``
sums log2(1 + rho*lambda_i) over the spectrum.  The two must agree to
1e-9, which the tests enforce.  ``trace_power`` computes Trace(W^p) by
repeated multiplication; its agreement with the eigenvalue power sum is
the trace/eigenvalue identity the moment machinery relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import GramMatrix
from .errors import EigensolverError, NumericalError

_LN2 = math.log(2.0)

#: Eigenvalues of a PSD Gram matrix may round to [-EIGENVALUE_CLAMP_TOL, 0);
#: those are clamped to zero.  Anything more negative is a construction bug.
EIGENVALUE_CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class SnrConfig:
    """Linear signal-to-noise ratio rho = P/sigma^2 (dimensionless)."""

    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho >= 0.0):
            raise ValueError(f"rho must be finite and >= 0, got {self.rho}")

    @classmethod
    def from_db(cls, snr_db: float) -> "SnrConfig":
        return cls(rho=10.0 ** (snr_db / 10.0))


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending nonnegative eigenvalues of a unit-trace Gram matrix."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("spectrum must be a nonempty 1-D array")
        if np.any(np.diff(values) > 0.0):
            raise ValueError("spectrum must be sorted descending")
        if values[-1] < 0.0:
            raise ValueError("spectrum must be nonnegative (clamp before constructing)")
        if abs(float(values.sum()) - 1.0) > 1e-10:
            raise ValueError("spectrum must sum to 1 within 1e-10")
        if values[0] > 1.0 + 1e-10:
            raise ValueError("largest eigenvalue cannot exceed the unit trace")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def clamp_eigenvalues(values: np.ndarray, *, context: str = "") -> np.ndarray:
    """Zero out tiny negative eigenvalues; reject structurally negative ones."""
    values = np.asarray(values, dtype=np.float64)
    low = float(values.min()) if values.size else 0.0
    if low < -EIGENVALUE_CLAMP_TOL:
        where = f" ({context})" if context else ""
        raise NumericalError(
            f"eigenvalue {low} below -{EIGENVALUE_CLAMP_TOL}{where}: "
            "Gram matrix is not positive semidefinite"
        )
    return np.maximum(values, 0.0)


def eigen_spectrum(w: GramMatrix) -> EigenSpectrum:
    """Full real spectrum of W, descending, clamped at zero."""
    try:
        values = np.linalg.eigvalsh(w.entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc
    values = clamp_eigenvalues(values)
    return EigenSpectrum(values=values[::-1].copy())


def capacity_logdet(w: GramMatrix, snr: SnrConfig) -> float:
    """log2 det(I + rho*W) in bits/s/Hz via Cholesky of the shifted matrix."""
    shifted = np.eye(w.size) + snr.rho * w.entries
    try:
        chol = np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"I + rho*W is not positive definite: {exc}") from exc
    result = 2.0 * float(np.sum(np.log(np.diag(chol).real))) / _LN2
    if not math.isfinite(result):
        raise NumericalError("log-det capacity is not finite; malformed Gram matrix")
    return result


def capacity_eigen(spectrum: EigenSpectrum, snr: SnrConfig) -> float:
    """Sum of log2(1 + rho*lambda_i) in bits/s/Hz."""
    return float(np.sum(np.log1p(snr.rho * spectrum.values)) / _LN2)


def trace_power(w: GramMatrix, p: int) -> float:
    """Trace(W^p) by repeated multiplication, p in 1..6."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or not 1 <= p <= 6:
        raise ValueError(f"power p must be an integer in 1..6, got {p!r}")
    acc = w.entries
    for _ in range(p - 1):
        acc = acc @ w.entries
    return float(np.trace(acc).real)
