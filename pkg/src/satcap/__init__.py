"""Capacity of pure line-of-sight MIMO satellite downlinks.

A uniform linear array receives from satellites placed uniformly at
random on the spherical cap overhead.  The package computes the ergodic
capacity of that channel three ways and cross-validates them:

* Monte Carlo over the exact per-realization log-det capacity,
* the same through the eigenvalues of the Gram matrix W,
* a truncated alternating series in the mean trace powers E{Trace(W^k)},
  with closed forms for the first moments built on Bessel J0 averages.

See the ``satcap`` CLI (simulate / moments / validate) for the file
outputs, and ``satcap.validation`` for the built-in oracle suite.
"""

__version__ = "0.1.0"

from .approx import ApproxSpec, SeriesDivergenceWarning, capacity_series, series_remainder_bound
from .capacity import (
    EigenSpectrum,
    SnrConfig,
    capacity_eigen,
    capacity_logdet,
    eigen_spectrum,
    trace_power,
)
from .channel import ChannelMatrix, GramMatrix, array_factor, build_channel, gram
from .errors import (
    ConfigError,
    ConvergenceError,
    EigensolverError,
    NumericalError,
    QuadratureError,
    SatcapError,
)
from .geometry import (
    GENERATOR_NAME,
    AngleSample,
    ArrayConfig,
    RngSpec,
    gamma_ij,
    sample_angles,
    sample_angles_batch,
)
from .moments import (
    MomentReport,
    moment1_analytic,
    moment2_analytic,
    moment3_analytic,
    moment_empirical,
    moment_empirical_multi,
)
from .montecarlo import (
    CapacityEstimate,
    OutageEstimate,
    SimulationPlan,
    SimulationResult,
    ergodic_capacity,
    outage_capacity,
    run_simulation,
)
from .specialfn import QuadratureSpec, bessel_j0, weighted_j0_integral

__all__ = [
    "__version__",
    "ApproxSpec",
    "AngleSample",
    "ArrayConfig",
    "CapacityEstimate",
    "ChannelMatrix",
    "ConfigError",
    "ConvergenceError",
    "EigenSpectrum",
    "EigensolverError",
    "GENERATOR_NAME",
    "GramMatrix",
    "MomentReport",
    "NumericalError",
    "OutageEstimate",
    "QuadratureError",
    "QuadratureSpec",
    "RngSpec",
    "SatcapError",
    "SeriesDivergenceWarning",
    "SimulationPlan",
    "SimulationResult",
    "SnrConfig",
    "array_factor",
    "bessel_j0",
    "build_channel",
    "capacity_eigen",
    "capacity_logdet",
    "capacity_series",
    "eigen_spectrum",
    "ergodic_capacity",
    "gamma_ij",
    "gram",
    "moment1_analytic",
    "moment2_analytic",
    "moment3_analytic",
    "moment_empirical",
    "moment_empirical_multi",
    "outage_capacity",
    "run_simulation",
    "sample_angles",
    "sample_angles_batch",
    "series_remainder_bound",
    "trace_power",
    "weighted_j0_integral",
]
