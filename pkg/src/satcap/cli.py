"""Command-line surface: simulate, moments, validate.

SNR is accepted in dB (or linear via --snr-linear) and converted to the
internal linear rho exactly once at parse time.  Output is CSV (metadata
as '# key = value' comment lines) or JSON, with floats serialized to 17
significant digits so files round-trip bit-exactly.  Output content is a
pure function of the run configuration: worker count and timing never
appear in it.

Exit codes: 0 ok, 1 validation failure, 2 config error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__, kernels
from .approx import ApproxSpec, SeriesDivergenceWarning, capacity_series, series_remainder_bound
from .errors import ConfigError, NumericalError
from .geometry import GENERATOR_NAME, ArrayConfig, RngSpec
from .moments import moment2_analytic, moment_empirical_multi
from .montecarlo import SimulationPlan, run_simulation
from .validation import exit_code as validation_exit_code
from .validation import run_all

_SIMULATE_DEFAULTS = {
    "nr": 4,
    "nt": 4,
    "spacing_over_lambda": 0.5,
    "snr_db": None,
    "snr_linear": None,
    "samples": 10_000,
    "seed": 0,
    "stream_id": 0,
    "terms": 3,
    "outage": "",
    "strict_convergence": False,
    "workers": 1,
    "out": "-",
    "format": "csv",
}

_MOMENTS_DEFAULTS = {
    "nr": 4,
    "nt": 4,
    "spacing_over_lambda": 0.5,
    "samples": 100_000,
    "seed": 0,
    "stream_id": 0,
    "workers": 1,
    "out": "-",
    "format": "csv",
}


def _fmt(value) -> str:
    """Serialize one cell; floats carry 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _jsonify(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    return value


def _parse_grid(value) -> list[float]:
    """Parse a list ('0,5,10'), a range ('0:20:2', inclusive end) or a scalar."""
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    if isinstance(value, (int, float)):
        return [float(value)]
    text = str(value).strip()
    if not text:
        raise ConfigError("empty SNR grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError(f"range step must be > 0, got {step}")
        return list(np.arange(start, stop + 1e-9 * step, step))
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_levels(value) -> tuple[float, ...]:
    if value in (None, ""):
        return ()
    if isinstance(value, (list, tuple)):
        levels = [float(v) for v in value]
    else:
        levels = [float(p) for p in str(value).split(",") if p.strip()]
    return tuple(sorted(set(levels)))


def _load_config_file(path, allowed) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return data


def _merge_options(args, defaults) -> dict:
    """defaults < config file < explicitly given flags."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        merged.update(_load_config_file(args.config, defaults))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _coerce_int(options, key, minimum):
    try:
        value = int(options[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be an integer, got {options[key]!r}") from exc
    if value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}")
    options[key] = value
    return value


def _rho_grid(options) -> tuple[float, ...]:
    snr_db = options.get("snr_db")
    snr_linear = options.get("snr_linear")
    if (snr_db is None) == (snr_linear is None):
        raise ConfigError("exactly one of snr_db / snr_linear must be given")
    if snr_db is not None:
        rhos = [10.0 ** (db / 10.0) for db in _parse_grid(snr_db)]
    else:
        rhos = _parse_grid(snr_linear)
    for rho in rhos:
        if not (math.isfinite(rho) and rho >= 0.0):
            raise ConfigError(f"SNR values must map to finite rho >= 0, got {rho}")
    return tuple(sorted(set(rhos)))


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_table(options, metadata, columns, rows):
    fh, close = _open_out(options["out"])
    try:
        if options["format"] == "json":
            payload = {
                "metadata": {k: _jsonify(v) for k, v in metadata},
                "columns": list(columns),
                "rows": [
                    {c: _jsonify(v) for c, v in zip(columns, row)} for row in rows
                ],
            }
            fh.write(json.dumps(payload, indent=2))
            fh.write("\n")
        else:
            for key, value in metadata:
                fh.write(f"# {key} = {_fmt(value)}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()


def _base_metadata(command, options, cfg):
    return [
        ("artifact", "satcap"),
        ("version", __version__),
        ("command", command),
        ("generator", GENERATOR_NAME),
        ("seed", options["seed"]),
        ("stream_id", options["stream_id"]),
        ("nr", cfg.n_r),
        ("nt", cfg.n_t),
        ("spacing_over_lambda", float(options["spacing_over_lambda"])),
        ("kd", cfg.kd),
        ("samples", options["samples"]),
        ("backend", kernels.backend_name()),
    ]


def _cmd_simulate(args) -> int:
    options = _merge_options(args, _SIMULATE_DEFAULTS)
    nr = _coerce_int(options, "nr", 1)
    nt = _coerce_int(options, "nt", 1)
    samples = _coerce_int(options, "samples", 2)
    seed = _coerce_int(options, "seed", 0)
    stream_id = _coerce_int(options, "stream_id", 0)
    terms = _coerce_int(options, "terms", 1)
    workers = _coerce_int(options, "workers", 1)
    if terms > 5:
        raise ConfigError(f"terms must be in 1..5, got {terms}")
    if options["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {options['format']!r}")
    strict = bool(options["strict_convergence"])

    cfg = ArrayConfig.from_spacing_ratio(nr, nt, float(options["spacing_over_lambda"]))
    rho_grid = _rho_grid(options)
    if strict and max(rho_grid) > 1.0:
        raise ConfigError(
            "strict convergence mode requires rho <= 1 everywhere "
            f"(max rho in grid is {max(rho_grid):g})"
        )
    levels = _parse_levels(options["outage"])
    for q in levels:
        if not 0.0 < q < 1.0:
            raise ConfigError(f"outage levels must lie in (0, 1), got {q}")

    plan = SimulationPlan(
        cfg=cfg,
        rho_grid=rho_grid,
        n_samples=samples,
        rng=RngSpec(seed, stream_id),
        outage_levels=levels,
    )
    result = run_simulation(
        plan, n_workers=workers, moment_orders=tuple(range(3, terms + 2))
    )

    # moments feeding the series: exact m1, closed-form m2, empirical above
    moment_vector = [1.0, moment2_analytic(cfg)]
    for k in range(3, terms + 2):
        moment_vector.append(result.moment_means[k])
    moment_vector = moment_vector[: terms + 1]

    outage_by_rho = {}
    for est in result.outages:
        outage_by_rho.setdefault(est.rho, {})[est.level] = est.capacity_at_q

    rows = []
    diverging = False
    for est in result.estimates:
        spec = ApproxSpec(rho=est.rho, n_terms=terms, strict=False)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SeriesDivergenceWarning)
            series = capacity_series(moment_vector, spec)
        if est.rho > 1.0:
            diverging = True
            bound = float("nan")
        else:
            bound = series_remainder_bound(moment_vector, spec)
        row = [
            est.rho,
            10.0 * math.log10(est.rho) if est.rho > 0 else float("-inf"),
            est.mean,
            est.stderr,
            series,
            bound,
        ]
        row.extend(outage_by_rho.get(est.rho, {}).get(q, float("nan")) for q in levels)
        rows.append(row)
    if diverging and not strict:
        print(
            "warning: SNR grid extends past rho = 1; the truncated series is "
            "outside its guaranteed convergence region there",
            file=sys.stderr,
        )

    columns = ["rho", "snr_db", "ergodic_mean", "ergodic_stderr",
               f"series_{terms}_terms", "remainder_bound"]
    columns += [f"outage_q{q:g}" for q in levels]
    metadata = _base_metadata("simulate", options, cfg)
    metadata += [
        ("terms", terms),
        ("strict_convergence", strict),
        ("outage_levels", ",".join(f"{q:g}" for q in levels)),
        ("samples_digest", result.digest),
    ]
    _write_table(options, metadata, columns, rows)
    return 0


def _cmd_moments(args) -> int:
    options = _merge_options(args, _MOMENTS_DEFAULTS)
    nr = _coerce_int(options, "nr", 1)
    nt = _coerce_int(options, "nt", 1)
    samples = _coerce_int(options, "samples", 2)
    seed = _coerce_int(options, "seed", 0)
    stream_id = _coerce_int(options, "stream_id", 0)
    workers = _coerce_int(options, "workers", 1)
    if options["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {options['format']!r}")

    cfg = ArrayConfig.from_spacing_ratio(nr, nt, float(options["spacing_over_lambda"]))
    reports = moment_empirical_multi(
        cfg, 3, samples, RngSpec(seed, stream_id), n_workers=workers
    )
    columns = ["k", "analytic", "empirical_mean", "empirical_stderr", "n_samples", "verified"]
    rows = [
        [r.k, r.analytic, r.empirical_mean, r.empirical_stderr, r.n_samples, r.verified]
        for r in reports
    ]
    _write_table(options, _base_metadata("moments", options, cfg), columns, rows)
    return 0


def _cmd_validate(args, j0_impl=None) -> int:
    samples = int(args.samples) if args.samples is not None else 200_000
    seed = int(args.seed) if args.seed is not None else 0
    workers = int(args.workers) if args.workers is not None else 1
    results = run_all(seed=seed, mc_samples=samples, n_workers=workers, j0_impl=j0_impl)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {r.status:<10}  {r.detail}")
    failures = sum(r.status == "FAIL" for r in results)
    unverified = sum(r.status == "UNVERIFIED" for r in results)
    print(f"{len(results)} checks: {len(results) - failures - unverified} passed, "
          f"{unverified} unverified, {failures} failed")
    return validation_exit_code(results)


def _add_common(parser):
    parser.add_argument("--nr", type=int, help="number of receive elements")
    parser.add_argument("--nt", type=int, help="number of satellites")
    parser.add_argument("--spacing-over-lambda", type=float, dest="spacing_over_lambda",
                        help="element spacing as a fraction of wavelength (default 0.5)")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--seed", type=int, help="RNG seed")
    parser.add_argument("--stream-id", type=int, dest="stream_id", help="RNG stream id")
    parser.add_argument("--workers", type=int, help="worker threads (results do not depend on this)")
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--out", help="output path, '-' for stdout (default)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satcap",
        description="Line-of-sight MIMO satellite downlink capacity: Monte Carlo, "
                    "eigenvalue and moment-series routes, cross-validated.",
    )
    parser.add_argument("--version", action="version", version=f"satcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="ergodic/outage capacity over an SNR grid")
    _add_common(p_sim)
    p_sim.add_argument("--snr-db", dest="snr_db",
                       help="SNR grid in dB: comma list '0,5,10' or range '0:20:2'")
    p_sim.add_argument("--snr-linear", dest="snr_linear",
                       help="SNR grid as linear rho values (alternative to --snr-db)")
    p_sim.add_argument("--terms", type=int, help="series truncation order (default 3, max 5)")
    p_sim.add_argument("--outage", help="outage levels in (0,1), comma list")
    p_sim.add_argument("--strict-convergence", dest="strict_convergence",
                       action="store_true", default=None,
                       help="reject SNR grids with rho > 1 instead of warning")
    p_sim.set_defaults(func=_cmd_simulate)

    p_mom = sub.add_parser("moments", help="analytic vs empirical trace moments k = 1..3")
    _add_common(p_mom)
    p_mom.set_defaults(func=_cmd_moments)

    p_val = sub.add_parser("validate", help="run the built-in cross-validation suite")
    p_val.add_argument("--samples", type=int, help="Monte Carlo samples per moment check")
    p_val.add_argument("--seed", type=int, help="RNG seed")
    p_val.add_argument("--workers", type=int, help="worker threads")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
