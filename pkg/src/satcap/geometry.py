"""Array geometry and random satellite placement.

The receiver is a uniform linear array of ``n_r`` elements spaced ``d``
meters apart; the transmitters are ``n_t`` satellites drawn independently
from the spherical cap above the receiver (elevation uniform on
[0, pi/2], azimuth uniform on [-pi, pi]).  Spacing and wavelength enter
every downstream formula only through the product ``kd`` with
``k = 2*pi/wavelength``.

All angles are radians.  Sampling is reproducible: an :class:`RngSpec`
names a counter-based generator stream, and identical specs replay
identical sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Algorithm behind RngSpec streams, recorded in output metadata.
GENERATOR_NAME = "philox4x64-10"

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ArrayConfig:
    """Receive-array geometry and transmitter count.

    d = wavelength/2 by default (kd = pi), the conventional half-wavelength
    spacing.  d = 0 is accepted so the rank-one degenerate channel can be
    constructed directly.
    """

    n_r: int
    n_t: int
    d: float = 0.5
    wavelength: float = 1.0

    def __post_init__(self):
        for name in ("n_r", "n_t"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if not (math.isfinite(self.d) and self.d >= 0.0):
            raise ValueError(f"element spacing d must be finite and >= 0, got {self.d}")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0.0):
            raise ValueError(f"wavelength must be finite and > 0, got {self.wavelength}")

    @property
    def k(self) -> float:
        """Wavenumber 2*pi/wavelength in rad/m."""
        return _TWO_PI / self.wavelength

    @property
    def kd(self) -> float:
        """Spacing-wavenumber product; the only way d and wavelength enter."""
        return self.k * self.d

    @classmethod
    def from_spacing_ratio(cls, n_r, n_t, spacing_over_lambda=0.5, wavelength=1.0):
        """Config with d expressed as a fraction of the wavelength."""
        return cls(n_r, n_t, d=spacing_over_lambda * wavelength, wavelength=wavelength)

    @classmethod
    def from_kd(cls, n_r, n_t, kd, wavelength=1.0):
        """Config with the kd product given directly."""
        return cls(n_r, n_t, d=kd * wavelength / _TWO_PI, wavelength=wavelength)


@dataclass(frozen=True)
class AngleSample:
    """One draw of satellite positions: elevation and azimuth per transmitter."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        phi = np.asarray(self.phi, dtype=np.float64)
        if theta.ndim != 1 or phi.ndim != 1 or theta.shape != phi.shape:
            raise ValueError("theta and phi must be 1-D arrays of equal length")
        if theta.size < 1:
            raise ValueError("need at least one transmitter angle pair")
        if np.any(theta < 0.0) or np.any(theta > 0.5 * math.pi):
            raise ValueError("theta values must lie in [0, pi/2]")
        if np.any(phi < -math.pi) or np.any(phi > math.pi):
            raise ValueError("phi values must lie in [-pi, pi]")
        theta.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def n_t(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class RngSpec:
    """Seed plus stream id naming one reproducible Philox stream.

    Distinct stream_ids give statistically independent streams for
    parallel workers; identical (seed, stream_id) replay identical draws.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise ValueError("seed must be an integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if not isinstance(self.stream_id, (int, np.integer)) or self.stream_id < 0:
            raise ValueError("stream_id must be a nonnegative integer")

    def generator(self, *children: int) -> np.random.Generator:
        """Fresh generator for this stream, optionally a child substream."""
        seq = np.random.SeedSequence(
            int(self.seed), spawn_key=(int(self.stream_id), *map(int, children))
        )
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    raise TypeError(f"expected RngSpec or numpy Generator, got {type(rng).__name__}")


def sample_angles(cfg: ArrayConfig, rng) -> AngleSample:
    """Draw one i.i.d. placement of the cfg's n_t satellites.

    ``rng`` may be an :class:`RngSpec` (replayed from the start, so repeat
    calls return the identical sample) or a numpy Generator (advanced
    statefully).
    """
    gen = _as_generator(rng)
    theta = gen.uniform(0.0, 0.5 * math.pi, cfg.n_t)
    phi = gen.uniform(-math.pi, math.pi, cfg.n_t)
    return AngleSample(theta=theta, phi=phi)


def sample_angles_batch(cfg: ArrayConfig, gen: np.random.Generator, n_samples: int):
    """Draw ``n_samples`` placements at once; returns (theta, phi) of shape (n, n_t)."""
    theta = gen.uniform(0.0, 0.5 * math.pi, (n_samples, cfg.n_t))
    phi = gen.uniform(-math.pi, math.pi, (n_samples, cfg.n_t))
    return theta, phi


def gamma_ij(sample: AngleSample, i: int, j: int) -> float:
    """Projected-direction difference sin(theta_j)sin(phi_j) - sin(theta_i)sin(phi_i).

    Antisymmetric in (i, j); bounded by 2 in magnitude.
    """
    n = sample.n_t
    for idx in (i, j):
        if not 0 <= idx < n:
            raise IndexError(f"transmitter index {idx} out of range for n_t={n}")
    return float(
        math.sin(sample.theta[j]) * math.sin(sample.phi[j])
        - math.sin(sample.theta[i]) * math.sin(sample.phi[i])
    )
