"""Parameter sweeps, extremum hunting, and the finite-size scaling fit."""

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .cache import SpectrumCache
from .correlators import CorrelationResult, g2_generalized
from .dissipation import BathParams, build_rate_matrix, select_k_levels, solve_steady_state
from .ecs import FULL_DECOMPOSITION_LIMIT, EcsEigensystem
from .model import DickeParams
from .operators import TransitionTables, transition_tables, xplus_matrix

N_ENERGY_COLUMNS = 5
COARSE_POINTS_MIN = 60
REFINE_XTOL = 1e-4
# a steady state whose one-photon signal falls this far below the thermal
# oscillator scale omega^2 * n_c signals a numerically collapsed solve (for
# example an unresolved strong-coupling parity doublet), not physics
EMISSION_FLOOR = 1e-6


def critical_coupling(params: DickeParams, temperature: float,
                      variant: str = "sqrt") -> float:
    """Finite-temperature superradiant critical coupling.

    variant 'sqrt' applies the square root to the coth factor (the figure
    convention); 'plain' leaves it outside the root (the running-text
    convention). Both reduce to sqrt(omega*delta)/2 as T -> 0.
    """
    base = np.sqrt(params.omega * params.delta) / 2.0
    if temperature <= 0:
        return base
    coth = 1.0 / np.tanh(params.delta / (4.0 * temperature))
    if variant == "sqrt":
        return base * np.sqrt(coth)
    if variant == "plain":
        return base * coth
    raise ValueError(f"unknown critical-coupling variant {variant!r}")


@dataclass
class PointResult:
    params: DickeParams
    baths: BathParams
    energies: np.ndarray
    parity: np.ndarray
    correlation: CorrelationResult
    k_levels: int


class SweepEngine:
    """Shared diagonalization/table cache for one family of sweeps."""

    def __init__(self, n_tr: int = 50, cache: SpectrumCache | None = None,
                 workers: int | None = None):
        self.n_tr = n_tr
        self.cache = cache if cache is not None else SpectrumCache()
        self.workers = workers or min(4, os.cpu_count() or 1)
        self._tables: dict[int, TransitionTables] = {}

    def eigensystem(self, params: DickeParams,
                    k_levels: int | None = None) -> EcsEigensystem:
        return self.cache.get(params, self.n_tr, k_levels)

    def tables(self, eig: EcsEigensystem) -> TransitionTables:
        key = id(eig)
        if key not in self._tables:
            self._tables[key] = transition_tables(eig)
        return self._tables[key]

    def point(self, params: DickeParams, baths: BathParams,
              k_levels: int | None = None,
              eig_levels: int | None = None) -> PointResult:
        dim = (params.n_qubits + 1) * (self.n_tr + 1)
        if eig_levels is None and dim > FULL_DECOMPOSITION_LIMIT:
            # partial decomposition: plenty of headroom over any k_levels
            # the Gibbs-tail rule selects at the temperatures used here
            eig_levels = min(dim, 120)
        eig = self.eigensystem(params, eig_levels)
        tables = self.tables(eig)
        if k_levels is None:
            k_levels = select_k_levels(tables.energies, baths.t_max)
        rates = build_rate_matrix(tables, baths, k_levels)
        state = solve_steady_state(rates)
        corr = g2_generalized(xplus_matrix(tables), state, t_c=baths.t_c,
                              omega=params.omega)
        return PointResult(params=params, baths=baths,
                           energies=tables.energies, parity=tables.parity,
                           correlation=corr, k_levels=k_levels)

    def g2(self, params: DickeParams, baths: BathParams) -> float:
        return self.point(params, baths).correlation.g2

    def map_ordered(self, fn, items):
        """Apply fn over items with the worker pool, results in input order."""
        if self.workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))


def _base_row(params: DickeParams, baths: BathParams) -> dict:
    return {"lambda": params.coupling, "n": params.n_qubits,
            "t_q": baths.t_q, "t_c": baths.t_c}


def _fill_point(row: dict, point: PointResult):
    for i in range(N_ENERGY_COLUMNS):
        row[f"E{i}"] = float(point.energies[i]) if i < point.energies.size else math.nan
    corr = point.correlation
    row["g2"] = corr.g2
    row["one_photon"] = corr.one_photon
    row["two_photon"] = corr.two_photon
    row["one_photon_norm"] = corr.one_photon / corr.n_c if corr.n_c else math.nan
    row["two_photon_norm"] = corr.two_photon / corr.n_c ** 2 if corr.n_c else math.nan
    for i in range(N_ENERGY_COLUMNS):
        row[f"parity{i}"] = int(point.parity[i]) if i < point.parity.size else 0
    row["error"] = ""


def _error_row(row: dict, exc: Exception):
    for i in range(N_ENERGY_COLUMNS):
        row.setdefault(f"E{i}", math.nan)
    for key in ("g2", "one_photon", "two_photon", "one_photon_norm",
                "two_photon_norm"):
        row.setdefault(key, math.nan)
    for i in range(N_ENERGY_COLUMNS):
        row.setdefault(f"parity{i}", 0)
    row["error"] = f"{type(exc).__name__}: {exc}"


def sweep_lambda(lambdas, params: DickeParams, baths: BathParams,
                 engine: SweepEngine) -> list[dict]:
    """Coupling sweep at fixed baths; one row per lambda, errors recorded."""

    def run(lam: float) -> dict:
        p = dataclasses.replace(params, coupling=float(lam))
        row = _base_row(p, baths)
        try:
            _fill_point(row, engine.point(p, baths))
        except Exception as exc:  # per-point failure must not kill the sweep
            _error_row(row, exc)
        return row

    return engine.map_ordered(run, list(lambdas))


def sweep_temperature(lambdas, temperatures, params: DickeParams,
                      baths: BathParams, engine: SweepEngine) -> list[dict]:
    """Equal-temperature (lambda, T) surface; lambda outer, T inner."""
    jobs = [(lam, t) for lam in lambdas for t in temperatures]

    def run(job):
        lam, t = job
        p = dataclasses.replace(params, coupling=float(lam))
        b = dataclasses.replace(baths, t_q=float(t), t_c=float(t))
        row = _base_row(p, b)
        row["t"] = float(t)
        try:
            _fill_point(row, engine.point(p, b))
        except Exception as exc:
            _error_row(row, exc)
        return row

    return engine.map_ordered(run, jobs)


def bias_grid(tq_values, tc_values, params: DickeParams, baths: BathParams,
              engine: SweepEngine) -> list[dict]:
    """Unequal bath temperatures at fixed coupling; t_q outer, t_c inner."""
    jobs = [(tq, tc) for tq in tq_values for tc in tc_values]

    def run(job):
        tq, tc = job
        b = dataclasses.replace(baths, t_q=float(tq), t_c=float(tc))
        row = _base_row(params, b)
        try:
            _fill_point(row, engine.point(params, b))
        except Exception as exc:
            _error_row(row, exc)
        return row

    return engine.map_ordered(run, jobs)


@dataclass(frozen=True)
class ExtremumResult:
    n_qubits: int
    lambda_min: float
    g2_min: float
    lambda_max: float
    g2_max: float
    local_minima: tuple
    local_maxima: tuple


def _refine(fn, grid, values, index, sign: float) -> tuple[float, float]:
    """Golden-section refinement of a local extremum (sign=-1 for maxima)."""
    if index == 0 or index == len(grid) - 1:
        return float(grid[index]), float(values[index])
    bracket = (float(grid[index - 1]), float(grid[index]), float(grid[index + 1]))

    def objective(x: float) -> float:
        value = sign * fn(x)
        return value if math.isfinite(value) else math.inf

    try:
        res = scipy.optimize.minimize_scalar(objective,
                                             bracket=bracket, method="golden",
                                             options={"xtol": REFINE_XTOL})
        return float(res.x), float(sign * res.fun)
    except ValueError:
        return float(grid[index]), float(values[index])


def find_g2_extrema(params: DickeParams, baths: BathParams, engine: SweepEngine,
                    window: tuple[float, float] = (0.3, 1.4),
                    coarse_points: int = COARSE_POINTS_MIN) -> ExtremumResult:
    """Locate the antibunching dip and bunching peak of g2 over the coupling.

    Coarse grid first, then golden-section refinement of every interior local
    extremum; the global dip and peak are reported along with all candidates.
    Points whose one-photon signal collapses below EMISSION_FLOOR times the
    thermal scale are treated as invalid and never become candidates.
    """
    coarse_points = max(coarse_points, COARSE_POINTS_MIN)
    grid = np.linspace(window[0], window[1], coarse_points)

    def g2_at(lam: float) -> float:
        point = engine.point(dataclasses.replace(params, coupling=float(lam)),
                             baths)
        corr = point.correlation
        floor = EMISSION_FLOOR * params.omega ** 2 * corr.n_c
        if not math.isfinite(corr.g2) or corr.one_photon < floor:
            return math.nan
        return corr.g2

    values = np.array(engine.map_ordered(g2_at, list(grid)))

    minima, maxima = [], []
    for i in range(1, coarse_points - 1):
        triple = values[i - 1:i + 2]
        if np.isnan(triple).any():
            continue
        if values[i] < values[i - 1] and values[i] <= values[i + 1]:
            minima.append(_refine(g2_at, grid, values, i, +1.0))
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            maxima.append(_refine(g2_at, grid, values, i, -1.0))
    if np.isnan(values).all():
        raise ValueError("no valid g2 values in the search window")
    if not minima:
        i = int(np.nanargmin(values))
        minima.append((float(grid[i]), float(values[i])))
    if not maxima:
        i = int(np.nanargmax(values))
        maxima.append((float(grid[i]), float(values[i])))

    best_min = min(minima, key=lambda pair: pair[1])
    best_max = max(maxima, key=lambda pair: pair[1])
    return ExtremumResult(n_qubits=params.n_qubits,
                          lambda_min=best_min[0], g2_min=best_min[1],
                          lambda_max=best_max[0], g2_max=best_max[1],
                          local_minima=tuple(minima), local_maxima=tuple(maxima))


def sweep_qubits(n_values, params: DickeParams, baths: BathParams,
                 n_tr: int = 30, window=(0.3, 1.4),
                 coarse_points: int = COARSE_POINTS_MIN,
                 cache: SpectrumCache | None = None) -> list[ExtremumResult]:
    """Per-N extremum search; each N gets its own engine (spectra don't mix)."""
    results = []
    for n in n_values:
        p = dataclasses.replace(params, n_qubits=int(n))
        engine = SweepEngine(n_tr=n_tr, cache=cache or SpectrumCache())
        results.append(find_g2_extrema(p, baths, engine, window=window,
                                       coarse_points=coarse_points))
    return results


@dataclass(frozen=True)
class ScalingFit:
    n_values: np.ndarray
    offsets_min: np.ndarray
    offsets_max: np.ndarray
    slope_min: float
    slope_max: float
    stderr_min: float
    stderr_max: float
    residuals_min: np.ndarray
    residuals_max: np.ndarray
    lambda_c: float
    excluded: tuple


def _loglog_fit(n_values, offsets):
    x = np.log(np.asarray(n_values, dtype=float))
    y = np.log(np.asarray(offsets, dtype=float))
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    residuals = y - np.polyval(coeffs, x)
    return float(coeffs[0]), float(np.sqrt(cov[0, 0])), residuals


def scaling_fit(extrema: list[ExtremumResult], params: DickeParams,
                temperature: float, variant: str = "sqrt") -> ScalingFit:
    """Fit log(lambda_extreme - lambda_c) against log N for both branches.

    Points with lambda_extreme <= lambda_c are excluded and reported.
    """
    lam_c = critical_coupling(params, temperature, variant)
    kept, excluded = [], []
    for res in extrema:
        if res.lambda_min > lam_c and res.lambda_max > lam_c:
            kept.append(res)
        else:
            excluded.append(res.n_qubits)
    if len(kept) < 4:
        raise ValueError(f"scaling fit needs >= 4 usable N values, have {len(kept)}")
    n_values = np.array([res.n_qubits for res in kept], dtype=float)
    off_min = np.array([res.lambda_min - lam_c for res in kept])
    off_max = np.array([res.lambda_max - lam_c for res in kept])
    slope_min, err_min, resid_min = _loglog_fit(n_values, off_min)
    slope_max, err_max, resid_max = _loglog_fit(n_values, off_max)
    return ScalingFit(n_values=n_values, offsets_min=off_min,
                      offsets_max=off_max, slope_min=slope_min,
                      slope_max=slope_max, stderr_min=err_min,
                      stderr_max=err_max, residuals_min=resid_min,
                      residuals_max=resid_max, lambda_c=lam_c,
                      excluded=tuple(excluded))
