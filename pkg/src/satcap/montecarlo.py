"""Monte Carlo ergodic and outage capacity over random satellite placements.

One eigendecomposition per realization serves every SNR point (common
random numbers across the rho grid) and every requested trace-moment
order.  Chunk boundaries and per-chunk RNG substreams depend only on the
plan, never on the worker count, so estimates are bit-identical for any
parallelism level.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._parallel import run_chunked
from .capacity import EIGENVALUE_CLAMP_TOL
from .errors import EigensolverError, NumericalError
from .geometry import ArrayConfig, RngSpec, sample_angles_batch

_LN2 = math.log(2.0)

# Chunk size caps the (chunk, n_r, n_t) working set; it is a function of
# the configuration only, so the sample streams do not depend on backend
# or worker count.
_CHUNK_ENTRY_BUDGET = 2**22


def default_chunk_size(cfg: ArrayConfig) -> int:
    return max(64, min(8192, _CHUNK_ENTRY_BUDGET // (cfg.n_r * cfg.n_t)))


@dataclass(frozen=True)
class SimulationPlan:
    """Everything one reproducible capacity run depends on."""

    cfg: ArrayConfig
    rho_grid: tuple
    n_samples: int
    rng: RngSpec
    outage_levels: tuple = ()

    def __post_init__(self):
        rho_grid = tuple(float(r) for r in np.atleast_1d(np.asarray(self.rho_grid, dtype=np.float64)))
        if len(rho_grid) == 0:
            raise ValueError("rho_grid must be nonempty")
        for rho in rho_grid:
            if not (math.isfinite(rho) and rho >= 0.0):
                raise ValueError(f"every rho must be finite and >= 0, got {rho}")
        if any(b <= a for a, b in zip(rho_grid, rho_grid[1:])):
            raise ValueError("rho_grid must be strictly ascending")
        levels = tuple(float(q) for q in self.outage_levels)
        for q in levels:
            if not 0.0 < q < 1.0:
                raise ValueError(f"outage levels must lie in (0, 1), got {q}")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("outage_levels must be strictly ascending")
        if not isinstance(self.n_samples, (int, np.integer)) or self.n_samples < 2:
            raise ValueError(f"n_samples must be an integer >= 2, got {self.n_samples!r}")
        object.__setattr__(self, "rho_grid", rho_grid)
        object.__setattr__(self, "outage_levels", levels)


@dataclass(frozen=True)
class CapacityEstimate:
    """Ergodic capacity at one SNR point, bits/s/Hz."""

    rho: float
    mean: float
    stderr: float
    n: int
    samples_digest: str | None = None

    def __post_init__(self):
        if self.mean < 0.0 or self.stderr < 0.0:
            raise ValueError("capacity mean and stderr must be >= 0")


@dataclass(frozen=True)
class OutageEstimate:
    """Empirical q-quantile of per-realization capacity at one SNR point."""

    rho: float
    level: float
    capacity_at_q: float


@dataclass(frozen=True)
class SimulationResult:
    """Ergodic estimates, outage quantiles and empirical moments of one run."""

    plan: SimulationPlan
    estimates: tuple
    outages: tuple
    moment_means: dict = field(default_factory=dict)
    moment_stderrs: dict = field(default_factory=dict)
    digest: str = ""


def _capacities_and_moments(plan, n_workers, chunk_size, moment_orders):
    cfg = plan.cfg
    rho = np.asarray(plan.rho_grid, dtype=np.float64)
    n = plan.n_samples
    orders = tuple(int(k) for k in moment_orders)
    caps = np.empty((n, rho.size), dtype=np.float64)
    moms = np.empty((n, len(orders)), dtype=np.float64)

    def work(chunk_index, lo, hi):
        gen = plan.rng.generator(chunk_index)
        theta, phi = sample_angles_batch(cfg, gen, hi - lo)
        w = kernels.gram_batch(theta, phi, cfg.n_r, cfg.kd)
        try:
            lam = np.linalg.eigvalsh(w)
        except np.linalg.LinAlgError as exc:
            index = _locate_eigen_failure(w, lo)
            raise EigensolverError(
                f"eigendecomposition failed at sample {index}: {exc}", sample_index=index
            ) from exc
        low = float(lam.min())
        if low < -EIGENVALUE_CLAMP_TOL:
            index = lo + int(np.argmin(lam.min(axis=1)))
            raise NumericalError(
                f"sample {index}: eigenvalue {low} below -{EIGENVALUE_CLAMP_TOL}; "
                "Gram matrix is not positive semidefinite"
            )
        lam = np.maximum(lam, 0.0)
        caps[lo:hi] = np.sum(np.log1p(lam[:, None, :] * rho[None, :, None]), axis=2) / _LN2
        for column, k in enumerate(orders):
            moms[lo:hi, column] = np.sum(lam**k, axis=1)

    run_chunked(n, chunk_size, n_workers, work)
    return caps, moms, orders


def _locate_eigen_failure(w, base_index):
    for offset in range(w.shape[0]):
        try:
            np.linalg.eigvalsh(w[offset])
        except np.linalg.LinAlgError:
            return base_index + offset
    return base_index


def run_simulation(
    plan: SimulationPlan,
    *,
    n_workers: int = 1,
    chunk_size: int | None = None,
    moment_orders=(),
) -> SimulationResult:
    """Execute the plan; deterministic given the plan, for any worker count."""
    if chunk_size is None:
        chunk_size = default_chunk_size(plan.cfg)
    caps, moms, orders = _capacities_and_moments(plan, n_workers, chunk_size, moment_orders)
    n = plan.n_samples
    digest = hashlib.sha256(caps.tobytes()).hexdigest()
    means = caps.mean(axis=0)
    stderrs = caps.std(axis=0, ddof=1) / math.sqrt(n)
    estimates = tuple(
        CapacityEstimate(
            rho=rho, mean=float(m), stderr=float(s), n=n, samples_digest=digest
        )
        for rho, m, s in zip(plan.rho_grid, means, stderrs)
    )
    outages = []
    if plan.outage_levels:
        sorted_caps = np.sort(caps, axis=0)
        for level in plan.outage_levels:
            # lower order statistic: the ceil(q*n)-th smallest value
            idx = max(0, math.ceil(level * n) - 1)
            for j, rho in enumerate(plan.rho_grid):
                outages.append(
                    OutageEstimate(rho=rho, level=level, capacity_at_q=float(sorted_caps[idx, j]))
                )
    moment_means = {}
    moment_stderrs = {}
    for column, k in enumerate(orders):
        moment_means[k] = float(moms[:, column].mean())
        moment_stderrs[k] = float(moms[:, column].std(ddof=1) / math.sqrt(n))
    return SimulationResult(
        plan=plan,
        estimates=estimates,
        outages=tuple(outages),
        moment_means=moment_means,
        moment_stderrs=moment_stderrs,
        digest=digest,
    )


def ergodic_capacity(plan: SimulationPlan, *, n_workers: int = 1) -> tuple:
    """Mean capacity with standard error for each rho in the plan's grid."""
    return run_simulation(plan, n_workers=n_workers).estimates


def outage_capacity(plan: SimulationPlan, *, n_workers: int = 1) -> tuple:
    """Empirical outage quantiles for each (rho, level) pair in the plan."""
    if not plan.outage_levels:
        raise ValueError("plan.outage_levels must be nonempty for outage_capacity")
    return run_simulation(plan, n_workers=n_workers).outages
