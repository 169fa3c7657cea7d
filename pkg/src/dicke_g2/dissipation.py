"""Ohmic baths and the population rate equation in the dressed eigenbasis.

Two independent baths: one coupled to the collective qubit quadrature
(temperature t_q) and one to the photon quadrature (t_c). Only populations
evolve; coherences between non-degenerate eigenstates decouple and decay.
Rates are built from positive gaps only, with explicit absorption (gamma*n)
and emission (gamma*(1+n)) pieces.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .operators import TransitionTables

GIBBS_WEIGHT_FLOOR = 1e-12
K_LEVELS_MIN = 12
# Below this gap the gamma*n product is evaluated by its finite limit.
DEGENERATE_GAP = 1e-14


class SteadyStateError(RuntimeError):
    """Rate graph is disconnected: the stationary population is not unique."""

    def __init__(self, components):
        self.components = components
        super().__init__(
            f"rate matrix kernel is {len(components)}-dimensional; "
            f"disconnected components: {components}"
        )


@dataclass(frozen=True)
class BathParams:
    """Ohmic bath parameters, in units of the photon frequency."""

    alpha: float = 0.001
    omega_c: float = 10.0
    t_q: float = 0.05
    t_c: float = 0.05

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        if self.t_q < 0 or self.t_c < 0:
            raise ValueError("temperatures must be >= 0")

    @property
    def t_max(self) -> float:
        return max(self.t_q, self.t_c)


def ohmic_gamma(omega: float, bath: BathParams) -> float:
    """Ohmic spectral function pi * alpha * omega * exp(-|omega|/omega_c)."""
    if omega < 0:
        raise ValueError("rates are built from positive gaps only")
    return np.pi * bath.alpha * omega * np.exp(-omega / bath.omega_c)


def bose_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(omega/T) - 1), overflow-safe."""
    if omega <= 0:
        raise ValueError("bose_occupation needs omega > 0")
    if temperature <= 0:
        return 0.0
    x = omega / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / np.expm1(x)


def select_k_levels(energies: np.ndarray, t_max: float,
                    weight_floor: float = GIBBS_WEIGHT_FLOOR,
                    minimum: int = K_LEVELS_MIN) -> int:
    """Smallest level count whose Gibbs tail at t_max is below the floor."""
    if t_max <= 0:
        count = 1
    else:
        weights = np.exp(-(energies - energies[0]) / t_max)
        above = np.flatnonzero(weights >= weight_floor)
        count = int(above[-1]) + 1 if above.size else 1
    return min(max(count, minimum), energies.size)


@dataclass(frozen=True)
class RateMatrix:
    """Population-transfer generator W: dP/dt = W P, columns summing to zero."""

    w: np.ndarray
    energies: np.ndarray
    escape_out_of_subspace: float = 0.0


def _pair_rates(gap: float, coupling_sq: float, bath: BathParams,
                temperature: float):
    """(absorption j->k, emission k->j) rates for one bath and one pair."""
    if gap < DEGENERATE_GAP:
        # gamma(gap) * n(gap) -> pi alpha T as gap -> 0
        limit = np.pi * bath.alpha * temperature * coupling_sq
        return limit, limit
    gamma = ohmic_gamma(gap, bath) * coupling_sq
    n = bose_occupation(gap, temperature)
    return gamma * n, gamma * (1.0 + n)


def build_rate_matrix(tables: TransitionTables, bath: BathParams,
                      k_levels: int | None = None) -> RateMatrix:
    """Assemble the generator over the lowest k_levels eigenstates."""
    if k_levels is None:
        k_levels = select_k_levels(tables.energies, bath.t_max)
    n = k_levels
    e = tables.energies[:n]
    w = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            gap = e[k] - e[j]
            up = down = 0.0
            for coupling_sq, temp in (
                (tables.s_q_elements[j, k] ** 2, bath.t_q),
                (tables.x_elements[j, k] ** 2, bath.t_c),
            ):
                u, d = _pair_rates(gap, coupling_sq, bath, temp)
                up += u
                down += d
            w[k, j] += up
            w[j, k] += down
    np.fill_diagonal(w, w.diagonal() - w.sum(axis=0))

    leak = _subspace_leak(tables, bath, n)
    kept = np.abs(w[:, n - 1]).sum() - np.abs(w[n - 1, n - 1])
    if leak > max(kept, 1e-300):
        warnings.warn(
            f"escape from the highest kept level is dominated by transitions "
            f"out of the {n}-level subspace (leak {leak:.3e} vs kept {kept:.3e})"
        )
    return RateMatrix(w=w, energies=e.copy(), escape_out_of_subspace=leak)


def _subspace_leak(tables: TransitionTables, bath: BathParams, n: int) -> float:
    """Total absorption rate from the highest kept level into dropped levels."""
    total = tables.n_states
    if n >= total:
        return 0.0
    j = n - 1
    leak = 0.0
    for k in range(n, total):
        gap = tables.energies[k] - tables.energies[j]
        for coupling_sq, temp in (
            (tables.s_q_elements[j, k] ** 2, bath.t_q),
            (tables.x_elements[j, k] ** 2, bath.t_c),
        ):
            leak += _pair_rates(gap, coupling_sq, bath, temp)[0]
    return leak


@dataclass(frozen=True)
class SteadyState:
    populations: np.ndarray
    provenance: str
    residual: float = 0.0


def _connected_components(w: np.ndarray) -> list[list[int]]:
    n = w.shape[0]
    adjacency = (np.abs(w) + np.abs(w.T)) > 0
    np.fill_diagonal(adjacency, False)
    seen = np.zeros(n, dtype=bool)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for nxt in np.flatnonzero(adjacency[i]):
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append(nxt)
        components.append(sorted(comp))
    return components


def _scaled_kernel_solve(w: np.ndarray, d: np.ndarray) -> np.ndarray:
    """One pass of the column-scaled kernel solve: P = d * q, q of order one.

    Any positive diagonal scaling preserves the kernel; choosing d close to
    the solution makes q well conditioned, so components many orders of
    magnitude below the largest population stay relatively accurate.
    """
    n = w.shape[0]
    a = w * d[None, :]
    row_scale = np.abs(a).max(axis=1)
    row_scale[row_scale == 0.0] = 1.0
    a = a / row_scale[:, None]
    norm_row = d / d.max()
    a = np.vstack([a, norm_row[None, :]])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    q, *_ = np.linalg.lstsq(a, b, rcond=None)
    return d * q


def solve_steady_state(rates: RateMatrix, max_iterations: int = 60) -> SteadyState:
    """Normalized kernel vector of W, with a one-dimensional-kernel check.

    A plain double-precision solve floors populations near 1e-16 of the
    largest one, which is far too coarse for the two-photon numerator at low
    temperature; iterating the solve with the previous estimate as a column
    scaling recovers the full dynamic range.
    """
    w = rates.w
    n = w.shape[0]
    if n == 1:
        return SteadyState(populations=np.ones(1), provenance="rate-solve")

    # Disconnected rate graph <=> multi-dimensional kernel (an SVD rank test
    # cannot tell genuine disconnection from slow low-temperature modes).
    components = _connected_components(w)
    if len(components) > 1 or np.abs(w).max() == 0.0:
        raise SteadyStateError(components)

    d = np.ones(n)
    p = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        p_new = np.clip(_scaled_kernel_solve(w, d), 0.0, None)
        total = p_new.sum()
        if total <= 0:
            # the scaling overshot and the solve collapsed; the previous
            # pass is the best available estimate
            break
        p_new /= total
        positive = p_new > 0
        stable = (np.array_equal(positive, p > 0)
                  and float(np.abs(p_new[positive] / p[positive] - 1.0).max()) < 1e-12)
        p = p_new
        if stable:
            break
        # unresolved entries get a shrinking floor so later passes reach them
        floor = p[positive].min() * 1e-3
        d = np.where(positive, p, max(floor, 1e-300))
    residual = float(np.abs(w @ p).max())
    return SteadyState(populations=p, provenance="rate-solve", residual=residual)


def gibbs_populations(energies: np.ndarray, temperature: float) -> SteadyState:
    """Equilibrium populations over the kept levels; shift-invariant in E."""
    e = np.asarray(energies, dtype=float)
    if temperature <= 0:
        ground = np.abs(e - e.min()) < 1e-9
        p = ground / ground.sum()
        return SteadyState(populations=p.astype(float), provenance="gibbs")
    weights = np.exp(-(e - e.min()) / temperature)
    return SteadyState(populations=weights / weights.sum(), provenance="gibbs")
