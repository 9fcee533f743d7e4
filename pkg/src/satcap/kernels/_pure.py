"""Pure numpy fallback for the batched hot loops.

Builds explicit channel matrices and uses batched matmul; the compiled
backend reaches the same quantities through closed-form phase sums.
"""

import math

import numpy as np

NAME = "pure"


def _channel_batch(theta, phi, n_r, kd):
    x = np.sin(theta) * np.sin(phi)
    n_t = x.shape[1]
    m = np.arange(n_r, dtype=np.float64)
    phases = kd * m[None, :, None] * x[:, None, :]
    h = np.exp(1j * phases)
    h *= 1.0 / math.sqrt(n_r * n_t)
    return h


def gram_batch(theta, phi, n_r, kd):
    """(B, s, s) Gram matrices, s = min(n_r, n_t), exactly Hermitian."""
    h = _channel_batch(theta, phi, n_r, kd)
    n_t = h.shape[2]
    if n_t <= n_r:
        product = np.conj(h.transpose(0, 2, 1)) @ h
    else:
        product = h @ np.conj(h.transpose(0, 2, 1))
    return 0.5 * (product + np.conj(product.transpose(0, 2, 1)))


def trace_powers_batch(theta, phi, n_r, kd, kmax):
    """(B, kmax) array of Trace(W^k) for k = 1..kmax."""
    w = gram_batch(theta, phi, n_r, kd)
    out = np.empty((w.shape[0], kmax), dtype=np.float64)
    out[:, 0] = np.einsum("bii->b", w).real
    acc = w
    for k in range(2, kmax + 1):
        acc = acc @ w
        out[:, k - 1] = np.einsum("bii->b", acc).real
    return out
