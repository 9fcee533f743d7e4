"""Line-of-sight channel matrix and its Gram matrix.

Each satellite contributes one column of H: the receive array's steering
vector at that satellite's angles, scaled by 1/sqrt(n_t*n_r).  Entry
(m, j) is exp(i*k*m*d*sin(theta_j)*sin(phi_j)) times the normalization,
so every entry has the same magnitude and each column has squared norm
1/n_t.  The Gram matrix W is taken on the smaller side (H^H or H H^H) and
always has unit trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import AngleSample, ArrayConfig

#: Gram matrix built as H^dagger H (n_t <= n_r).
SIDE_HDAG_H = "h_dag_h"
#: Gram matrix built as H H^dagger (n_r < n_t).
SIDE_H_HDAG = "h_h_dag"

_TRACE_TOL = 1e-12


@dataclass(frozen=True)
class ChannelMatrix:
    """n_r x n_t complex LoS channel with its providing config."""

    entries: np.ndarray
    cfg: ArrayConfig

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.shape != (self.cfg.n_r, self.cfg.n_t):
            raise ValueError(
                f"entries shape {entries.shape} does not match "
                f"(n_r, n_t)=({self.cfg.n_r}, {self.cfg.n_t})"
            )
        norm = self.normalization
        if np.max(np.abs(np.abs(entries) - norm)) > 1e-12:
            raise ValueError("channel entries must all have magnitude 1/sqrt(n_t*n_r)")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def normalization(self) -> float:
        return 1.0 / math.sqrt(self.cfg.n_t * self.cfg.n_r)


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian PSD Gram matrix of the channel, min(n_r, n_t) square, trace 1."""

    entries: np.ndarray
    side: str

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {entries.shape}")
        if self.side not in (SIDE_HDAG_H, SIDE_H_HDAG):
            raise ValueError(f"unknown Gram side tag {self.side!r}")
        if not np.array_equal(entries, entries.conj().T):
            raise ValueError("Gram matrix must be exactly Hermitian (symmetrize first)")
        trace = float(np.trace(entries).real)
        if abs(trace - 1.0) > _TRACE_TOL:
            raise ValueError(f"Gram trace must be 1 within {_TRACE_TOL}, got {trace!r}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def array_factor(cfg: ArrayConfig, gains, theta: float, phi: float) -> complex:
    """Phased sum of element responses for a look direction (theta, phi).

    ``gains`` holds the per-element complex excitations; with unit gains
    the magnitude is bounded by n_r.
    """
    g = np.asarray(gains, dtype=np.complex128)
    if g.shape != (cfg.n_r,):
        raise ValueError(f"expected {cfg.n_r} element gains, got shape {g.shape}")
    m = np.arange(cfg.n_r)
    phase = cfg.kd * math.sin(theta) * math.sin(phi)
    return complex(np.sum(g * np.exp(1j * phase * m)))


def build_channel(cfg: ArrayConfig, sample: AngleSample) -> ChannelMatrix:
    """Assemble H from one satellite placement."""
    if sample.n_t != cfg.n_t:
        raise ValueError(f"sample has {sample.n_t} transmitters, config expects {cfg.n_t}")
    x = np.sin(sample.theta) * np.sin(sample.phi)
    m = np.arange(cfg.n_r)
    phases = cfg.kd * np.outer(m, x)
    entries = np.exp(1j * phases) / math.sqrt(cfg.n_t * cfg.n_r)
    return ChannelMatrix(entries=entries, cfg=cfg)


def gram(h: ChannelMatrix) -> GramMatrix:
    """Gram matrix on the smaller side (ties go to H^dagger H).

    The product is explicitly symmetrized so downstream eigensolvers see
    exactly Hermitian input.
    """
    entries = h.entries
    n_r, n_t = entries.shape
    if n_t <= n_r:
        product = entries.conj().T @ entries
        side = SIDE_HDAG_H
    else:
        product = entries @ entries.conj().T
        side = SIDE_H_HDAG
    symmetrized = 0.5 * (product + product.conj().T)
    return GramMatrix(entries=symmetrized, side=side)
