"""Two-photon correlation functions at zero time delay.

The generalized correlator uses the gap-weighted emission operator; with a
diagonal steady state its traces reduce to weighted column norms, which also
yields the per-level decompositions shown alongside the full result.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dissipation import SteadyState, bose_occupation
from .ecs import EcsEigensystem
from .model import DickeParams
from .operators import (TransitionTables, XPlusMatrix, photon_number_per_state,
                        photon_pair_per_state)

# Below this the one-photon signal is treated as dark rather than divided by.
DARK_FLOOR = 1e-280


@dataclass(frozen=True)
class CorrelationResult:
    g2: float
    one_photon: float
    two_photon: float
    a_components: np.ndarray
    b_components: np.ndarray
    n_c: float
    dark: bool = False


def g2_generalized(xplus: XPlusMatrix, state: SteadyState,
                   t_c: float | None = None,
                   omega: float = 1.0) -> CorrelationResult:
    """G2_N(0) from the emission operator and diagonal steady state.

    A_k and B_k are the per-level contributions to <X- X+> and
    <(X-)^2 (X+)^2>; n_c (photon-bath occupation at omega) is carried along
    purely for normalized reporting.
    """
    r = xplus.weights
    p = state.populations
    n = p.size
    r = r[:n, :n]
    a_components = np.sum(r ** 2, axis=0)
    r2 = r @ r  # (X+)^2 = -(r @ r), sign is irrelevant in the norms
    b_components = np.sum(r2 ** 2, axis=0)
    one_photon = float(p @ a_components)
    two_photon = float(p @ b_components)
    n_c = bose_occupation(omega, t_c) if t_c is not None and t_c > 0 else math.nan
    if one_photon < DARK_FLOOR:
        return CorrelationResult(g2=math.nan, one_photon=one_photon,
                                 two_photon=two_photon,
                                 a_components=a_components,
                                 b_components=b_components, n_c=n_c, dark=True)
    return CorrelationResult(g2=two_photon / one_photon ** 2,
                             one_photon=one_photon, two_photon=two_photon,
                             a_components=a_components,
                             b_components=b_components, n_c=n_c)


def g2_standard(eigensystem: EcsEigensystem, state: SteadyState) -> float:
    """Glauber g2 with bare photon operators, exact in the displaced basis."""
    p = state.populations
    n = p.size
    n_avg = float(p @ photon_number_per_state(eigensystem)[:n])
    pair_avg = float(p @ photon_pair_per_state(eigensystem)[:n])
    if n_avg < DARK_FLOOR:
        return math.nan
    return pair_avg / n_avg ** 2


def g2_dominant_approx(regime: str, tables: TransitionTables,
                       state: SteadyState) -> float:
    """Closed-form dominant-transition estimates of G2_N(0).

    regime 'low': single cascade through level 3; 'mid': through level 2 after
    the avoided crossing; 'degenerate': the two-path form where levels 2 and 3
    are nearly degenerate. The regime labels are advisory, not enforced.
    """
    p = state.populations
    gaps = tables.gaps()
    x = tables.x_elements

    def dx(k, j):
        return gaps[k, j] * x[j, k]

    denom_1 = (p[1] * dx(1, 0)) ** 2
    if denom_1 < DARK_FLOOR:
        raise ZeroDivisionError("X_10 transition is dark; approximation undefined")
    if regime == "low":
        return float(p[3] * dx(3, 1) ** 2 / (p[1] ** 2 * dx(1, 0) ** 2))
    if regime == "mid":
        return float(p[2] * dx(2, 1) ** 2 / (p[1] ** 2 * dx(1, 0) ** 2))
    if regime == "degenerate":
        num = (p[2] * (dx(2, 1) * dx(1, 0)) ** 2
               + p[3] * (dx(3, 2) * dx(2, 1)) ** 2)
        return float(num / (p[1] ** 2 * dx(1, 0) ** 4))
    raise ValueError(f"unknown regime {regime!r}")


def g2_strong_coupling_analytic(params: DickeParams, temperature: float):
    """Deep-strong-coupling thermal-state correlators.

    Returns (one_photon, two_photon, g2) with the omega-squared convention
    <X- X+> = omega^2 n and <(X-)^2 (X+)^2> = 2 omega^4 n^2; the ratio is
    exactly 2 regardless of the power convention.
    """
    if temperature <= 0:
        return 0.0, 0.0, 2.0
    n = bose_occupation(params.omega, temperature)
    one = params.omega ** 2 * n
    two = 2.0 * params.omega ** 4 * n ** 2
    return one, two, 2.0
