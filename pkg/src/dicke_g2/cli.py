"""Command-line entry point.

Exit codes are frozen for scripting: 0 success, 1 configuration/usage error,
2 computational failure.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .cache import SpectrumCache
from .config import ConfigError, SimulationConfig, parse_config, validate
from .correlators import g2_generalized
from .csvio import (BIAS_GRID_SCHEMA, SCALING_SCHEMA, SWEEP_LAMBDA_SCHEMA,
                    SWEEP_TEMPERATURE_SCHEMA, config_hash, emit_csv)
from .dissipation import build_rate_matrix, gibbs_populations, select_k_levels, solve_steady_state
from .experiments import (SweepEngine, critical_coupling, scaling_fit,
                          sweep_lambda, sweep_qubits, sweep_temperature,
                          bias_grid)
from .model import DickeParams
from .operators import xplus_matrix
from .oracle import OracleConfig, oracle_g2, oracle_quadrature_elements, oracle_spectrum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="configuration file (key = value lines)")
    parser.add_argument("--n", type=int, help="number of qubits")
    parser.add_argument("--lambda", dest="coupling", type=float,
                        help="qubit-photon coupling strength")
    parser.add_argument("--delta", type=float, help="qubit frequency")
    parser.add_argument("--omega", type=float, help="photon frequency")
    parser.add_argument("--alpha", type=float, help="Ohmic bath coupling")
    parser.add_argument("--omega-c", type=float, help="bath cutoff frequency")
    parser.add_argument("--t-q", type=float, help="qubit bath temperature")
    parser.add_argument("--t-c", type=float, help="photon bath temperature")
    parser.add_argument("--n-tr", type=int, help="boson truncation")
    parser.add_argument("--k-levels", type=int, help="kept eigenstates")
    parser.add_argument("--workers", type=int, help="sweep worker count")
    parser.add_argument("--cache-dir", help="spectrum cache directory")
    parser.add_argument("--out", help="output CSV path")


_FLAG_FIELDS = ["n", "coupling", "delta", "omega", "alpha", "omega_c",
                "t_q", "t_c", "n_tr", "k_levels", "workers", "cache_dir", "out"]


def _load_config(args) -> SimulationConfig:
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        config = parse_config(text)
    else:
        config = SimulationConfig()
    for name in _FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    problems = validate(config)
    if problems:
        raise ConfigError(problems)
    return config


def _metadata(config: SimulationConfig) -> dict:
    # hash only the physics configuration: identical sweeps must produce
    # byte-identical files regardless of where the output lands
    payload = dataclasses.asdict(config)
    payload.pop("out", None)
    payload.pop("cache_dir", None)
    text = repr(payload)
    return {"dicke-g2": f"version={__version__}",
            "config_sha256": config_hash(text)}


def _engine(config: SimulationConfig) -> SweepEngine:
    cache = SpectrumCache(config.cache_dir or None)
    return SweepEngine(n_tr=config.n_tr, cache=cache, workers=config.workers)


def _cmd_spectrum(config: SimulationConfig) -> int:
    engine = _engine(config)
    eig = engine.eigensystem(config.dicke_params())
    k = config.k_levels or select_k_levels(eig.energies, config.bath_params().t_max)
    print(f"# lowest {k} eigenvalues "
          f"(N={config.n}, lambda={config.coupling}, n_tr={config.n_tr})")
    for i, energy in enumerate(eig.energies[:k]):
        print(f"{i:4d}  {float(energy)!r}")
    return EXIT_OK


def _require_out(config: SimulationConfig, default: str) -> str:
    return config.out or default


def _cmd_sweep_lambda(config: SimulationConfig) -> int:
    engine = _engine(config)
    lambdas = np.linspace(config.lambda_min, config.lambda_max,
                          config.lambda_points)
    rows = sweep_lambda(lambdas, config.dicke_params(), config.bath_params(),
                        engine)
    path = emit_csv(rows, SWEEP_LAMBDA_SCHEMA,
                    _require_out(config, "sweep_lambda.csv"), _metadata(config))
    print(f"wrote {len(rows)} rows to {path} "
          f"(cache hit ratio {engine.cache.hit_ratio:.2f})")
    return EXIT_OK


def _cmd_sweep_temperature(config: SimulationConfig) -> int:
    engine = _engine(config)
    lambdas = np.linspace(config.lambda_min, config.lambda_max,
                          config.lambda_points)
    temps = np.linspace(config.t_min, config.t_max, config.t_points)
    rows = sweep_temperature(lambdas, temps, config.dicke_params(),
                             config.bath_params(), engine)
    path = emit_csv(rows, SWEEP_TEMPERATURE_SCHEMA,
                    _require_out(config, "sweep_temperature.csv"),
                    _metadata(config))
    print(f"wrote {len(rows)} rows to {path} "
          f"(cache hit ratio {engine.cache.hit_ratio:.2f})")
    return EXIT_OK


def _cmd_bias_grid(config: SimulationConfig) -> int:
    engine = _engine(config)
    temps = np.linspace(config.t_min, config.t_max, config.t_points)
    rows = bias_grid(temps, temps, config.dicke_params(), config.bath_params(),
                     engine)
    path = emit_csv(rows, BIAS_GRID_SCHEMA,
                    _require_out(config, "bias_grid.csv"), _metadata(config))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def _cmd_sweep_qubits(config: SimulationConfig) -> int:
    extrema = sweep_qubits(config.n_values, config.dicke_params(),
                           config.bath_params(), n_tr=min(config.n_tr, 30),
                           cache=SpectrumCache(config.cache_dir or None))
    rows = []
    for res in extrema:
        rows.append({"n": res.n_qubits, "lambda_min": res.lambda_min,
                     "g2_min": res.g2_min, "lambda_max": res.lambda_max,
                     "g2_max": res.g2_max, "offset_min": float("nan"),
                     "offset_max": float("nan"), "error": ""})
    path = emit_csv(rows, SCALING_SCHEMA,
                    _require_out(config, "sweep_qubits.csv"), _metadata(config))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def _cmd_scaling_fit(config: SimulationConfig) -> int:
    params = config.dicke_params()
    baths = config.bath_params()
    extrema = sweep_qubits(config.n_values, params, baths,
                           n_tr=min(config.n_tr, 30),
                           cache=SpectrumCache(config.cache_dir or None))
    fit = scaling_fit(extrema, params, baths.t_max,
                      variant=config.lambda_c_variant)
    rows = []
    for res, off_min, off_max in zip(extrema, fit.offsets_min, fit.offsets_max):
        rows.append({"n": res.n_qubits, "lambda_min": res.lambda_min,
                     "g2_min": res.g2_min, "lambda_max": res.lambda_max,
                     "g2_max": res.g2_max, "offset_min": float(off_min),
                     "offset_max": float(off_max), "error": ""})
    if config.out:
        emit_csv(rows, SCALING_SCHEMA, config.out, _metadata(config))
    print(f"lambda_c({config.lambda_c_variant}) = {fit.lambda_c:.6f}")
    print(f"slope(min branch) = {fit.slope_min:+.4f} +- {fit.stderr_min:.4f}")
    print(f"slope(max branch) = {fit.slope_max:+.4f} +- {fit.stderr_max:.4f}")
    if fit.excluded:
        print(f"excluded N values (extremum below lambda_c): {fit.excluded}")
    return EXIT_OK


def _cmd_validate(config: SimulationConfig, max_n: int) -> int:
    """Oracle-vs-main comparison table on small instances."""
    failures = 0
    print(f"{'check':<46} {'worst':>12}  result")
    oracle_config = OracleConfig(fock_cutoff=config.oracle_n_f)
    test_n = [n for n in (1, 2, 4, 8) if n <= max_n]

    for n in test_n:
        worst = 0.0
        for lam in (0.1, 0.5, 0.9):
            params = DickeParams(n_qubits=n, delta=config.delta,
                                 omega=config.omega, coupling=lam)
            engine = _engine(config)
            eig = engine.eigensystem(params)
            reference = oracle_spectrum(params, oracle_config)
            scale = np.maximum(np.abs(reference.energies[:10]), 1.0)
            diff = np.abs(eig.energies[:10] - reference.energies[:10]) / scale
            worst = max(worst, float(diff.max()))
        failures += _report(f"spectrum N={n} vs oracle (rel, 1e-8)", worst, 1e-8)

    for n in test_n:
        params = DickeParams(n_qubits=n, delta=config.delta,
                             omega=config.omega, coupling=0.45)
        engine = _engine(config)
        eig = engine.eigensystem(params)
        tables = engine.tables(eig)
        reference = oracle_spectrum(params, oracle_config)
        k = 8
        x_ref = oracle_quadrature_elements(reference, k)
        diff = float(np.abs(np.abs(tables.x_elements[:k, :k]) - np.abs(x_ref)).max())
        failures += _report(f"|X_jk| N={n} vs oracle (abs, 1e-7)", diff, 1e-7)

    for n in test_n:
        params = DickeParams(n_qubits=n, delta=config.delta,
                             omega=config.omega, coupling=0.45)
        baths = config.bath_params()
        engine = _engine(config)
        point = engine.point(params, baths)
        ref = oracle_g2(params, baths, oracle_config)
        rel = abs(point.correlation.g2 - ref) / abs(ref)
        failures += _report(f"g2 N={n} vs oracle (rel, 1e-6)", rel, 1e-6)

    print(f"\n{'PASS' if failures == 0 else 'FAIL'}: "
          f"{failures} failing check(s)")
    return EXIT_OK if failures == 0 else EXIT_COMPUTE


def _report(label: str, worst: float, tol: float) -> int:
    ok = worst < tol
    print(f"{label:<46} {worst:>12.3e}  {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicke-g2",
        description="Steady-state two-photon statistics of the dissipative "
                    "finite-size Dicke model")
    sub = parser.add_subparsers(dest="command")
    for name, help_text in [
        ("spectrum", "print the lowest eigenvalues"),
        ("sweep-lambda", "coupling sweep at fixed temperatures"),
        ("sweep-qubits", "per-N g2 extremum search"),
        ("sweep-temperature", "(lambda, T) equal-temperature surface"),
        ("bias-grid", "(T_q, T_c) grid at fixed coupling"),
        ("scaling-fit", "finite-size scaling of the extremum couplings"),
        ("validate", "oracle-vs-main comparison suite"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        _add_common(cmd)
        if name == "validate":
            cmd.add_argument("--max-n", type=int, default=8,
                             help="largest qubit number to validate")
    return parser


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "sweep-lambda": _cmd_sweep_lambda,
    "sweep-qubits": _cmd_sweep_qubits,
    "sweep-temperature": _cmd_sweep_temperature,
    "bias-grid": _cmd_bias_grid,
    "scaling-fit": _cmd_scaling_fit,
}


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        config = _load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "validate":
            return _cmd_validate(config, args.max_n)
        return _DISPATCH[args.command](config)
    except Exception as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_COMPUTE


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
