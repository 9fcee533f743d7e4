"""Built-in cross-validation suite behind the ``validate`` CLI command.

Each check pits one computation route against an independent one: the
quadrature oracle against the J0 product identity, log-det against the
eigenvalue sum, both Gram sides against each other, matrix trace powers
against eigenvalue power sums, and the closed-form moments against Monte
Carlo.  Hard failures indicate broken invariants; the third-moment closed
form is allowed to disagree and is then reported UNVERIFIED rather than
failed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import SnrConfig, capacity_eigen, capacity_logdet, eigen_spectrum, trace_power
from .channel import build_channel, gram
from .geometry import ArrayConfig, RngSpec, sample_angles
from .moments import MOMENT_BAND_SIGMAS, moment_empirical_multi
from .specialfn import QuadratureSpec, _j0_asymptotic, _j0_series, bessel_j0, weighted_j0_integral

PASS = "PASS"
FAIL = "FAIL"
UNVERIFIED = "UNVERIFIED"

_IDENTITY_ARGS = (0.1, 0.5, 1.0, math.pi, 5.0, 10.0, 20.0)
_IDENTITY_TOL = 1e-8
_EQUIVALENCE_DIMS = ((4, 8), (8, 4), (8, 8))
_EQUIVALENCE_TOL = 1e-9
_MOMENT_DIMS = ((2, 2), (4, 2), (2, 4), (4, 4))


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str

    @property
    def hard_failure(self) -> bool:
        return self.status == FAIL


def _check(name, ok, detail, *, soft=False):
    if ok:
        status = PASS
    else:
        status = UNVERIFIED if soft else FAIL
    return CheckResult(name=name, status=status, detail=detail)


def check_bessel_identity(j0=bessel_j0) -> list[CheckResult]:
    """Weighted J0 integral against (pi/2) * J0(a/2)^2, both sides from j0."""
    quad = QuadratureSpec(nodes=32, scheme="adaptive", abs_tol=1e-10)
    results = []
    for a in _IDENTITY_ARGS:
        integral = weighted_j0_integral(a, quad, j0=j0)
        closed = 0.5 * math.pi * j0(0.5 * a) ** 2
        residual = abs(integral - closed)
        results.append(
            _check(
                f"bessel_identity[a={a:g}]",
                residual <= _IDENTITY_TOL,
                f"residual={residual:.3e} tol={_IDENTITY_TOL:g}",
            )
        )
    return results


def check_j0_branch_overlap() -> list[CheckResult]:
    """Series and asymptotic evaluations agree across the branch window."""
    grid = np.linspace(6.0, 10.0, 401)
    gap = float(np.max(np.abs(_j0_series(grid) - _j0_asymptotic(grid))))
    return [_check("j0_branch_overlap[6,10]", gap <= 1e-10, f"max gap={gap:.3e} tol=1e-10")]


def check_capacity_equivalence(seed=0, n_samples=50) -> list[CheckResult]:
    """log-det vs eigenvalue capacity and H^H vs HH^ determinant symmetry."""
    results = []
    snr = SnrConfig(rho=10.0)
    for n_r, n_t in _EQUIVALENCE_DIMS:
        cfg = ArrayConfig(n_r, n_t)
        flipped = ArrayConfig(n_t, n_r)
        rng = RngSpec(seed, stream_id=17)
        gen = rng.generator(n_r, n_t)
        worst_route = 0.0
        worst_side = 0.0
        for _ in range(n_samples):
            sample = sample_angles(cfg, gen)
            w = gram(build_channel(cfg, sample))
            c_logdet = capacity_logdet(w, snr)
            c_eigen = capacity_eigen(eigen_spectrum(w), snr)
            worst_route = max(worst_route, abs(c_logdet - c_eigen))
            w_flip = gram(build_channel(flipped, sample))
            worst_side = max(worst_side, abs(c_logdet - capacity_logdet(w_flip, snr)))
        results.append(
            _check(
                f"capacity_routes[{n_r}x{n_t}]",
                worst_route <= _EQUIVALENCE_TOL,
                f"max |logdet-eigen|={worst_route:.3e} tol={_EQUIVALENCE_TOL:g}",
            )
        )
        results.append(
            _check(
                f"gram_side_symmetry[{n_r}x{n_t}]",
                worst_side <= _EQUIVALENCE_TOL,
                f"max side gap={worst_side:.3e} tol={_EQUIVALENCE_TOL:g}",
            )
        )
    return results


def check_trace_eigen_identity(seed=0, n_samples=50) -> list[CheckResult]:
    """Trace(W^p) equals the p-th eigenvalue power sum for p = 1..3."""
    worst = 0.0
    for n_r, n_t in _EQUIVALENCE_DIMS:
        cfg = ArrayConfig(n_r, n_t)
        gen = RngSpec(seed, stream_id=23).generator(n_r, n_t)
        for _ in range(n_samples):
            w = gram(build_channel(cfg, sample_angles(cfg, gen)))
            lam = eigen_spectrum(w).values
            for p in (1, 2, 3):
                worst = max(worst, abs(trace_power(w, p) - float(np.sum(lam**p))))
    return [
        _check(
            "trace_power_eigen_identity[p<=3]",
            worst <= _EQUIVALENCE_TOL,
            f"max gap={worst:.3e} tol={_EQUIVALENCE_TOL:g}",
        )
    ]


def check_moment_formulas(seed=0, mc_samples=200_000, n_workers=1) -> list[CheckResult]:
    """Closed-form moments against Monte Carlo at small dimensions, kd = pi."""
    results = []
    for n_r, n_t in _MOMENT_DIMS:
        cfg = ArrayConfig.from_kd(n_r, n_t, kd=math.pi)
        reports = moment_empirical_multi(
            cfg, 3, mc_samples, RngSpec(seed, stream_id=31), n_workers=n_workers
        )
        m1 = reports[0]
        results.append(
            _check(
                f"moment1_unit_trace[{n_r}x{n_t}]",
                abs(m1.empirical_mean - 1.0) <= 1e-12 and m1.empirical_stderr <= 1e-12,
                f"mean={m1.empirical_mean!r} stderr={m1.empirical_stderr:.3e}",
            )
        )
        for report, soft in ((reports[1], False), (reports[2], True)):
            gap = abs(report.analytic - report.empirical_mean)
            band = MOMENT_BAND_SIGMAS * report.empirical_stderr
            results.append(
                _check(
                    f"moment{report.k}_closed_form[{n_r}x{n_t},kd=pi]",
                    bool(report.verified),
                    f"|analytic-mc|={gap:.3e} band(3se)={band:.3e}",
                    soft=soft,
                )
            )
    return results


def run_all(
    *,
    seed: int = 0,
    mc_samples: int = 200_000,
    n_workers: int = 1,
    j0_impl=None,
) -> list[CheckResult]:
    """Full suite; ``j0_impl`` is a testing hook for corrupting the Bessel side."""
    j0 = bessel_j0 if j0_impl is None else j0_impl
    results = []
    results += check_bessel_identity(j0=j0)
    results += check_j0_branch_overlap()
    results += check_capacity_equivalence(seed=seed)
    results += check_trace_eigen_identity(seed=seed)
    results += check_moment_formulas(seed=seed, mc_samples=mc_samples, n_workers=n_workers)
    return results


def exit_code(results) -> int:
    """0 when nothing hard-failed (UNVERIFIED is acceptable), else 1."""
    return 1 if any(r.hard_failure for r in results) else 0
