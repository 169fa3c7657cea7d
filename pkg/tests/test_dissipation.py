import numpy as np
import pytest
import scipy.linalg

from dicke_g2.dissipation import (BathParams, RateMatrix, SteadyStateError,
                                  bose_occupation, build_rate_matrix,
                                  gibbs_populations, ohmic_gamma,
                                  select_k_levels, solve_steady_state)
from dicke_g2.model import DickeParams
from dicke_g2.operators import TransitionTables


def two_level_tables(gap=1.0, x=0.8):
    energies = np.array([0.0, gap])
    x_el = np.array([[0.0, x], [x, 0.0]])
    return TransitionTables(energies=energies, x_elements=x_el,
                            s_q_elements=np.zeros((2, 2)),
                            parity=np.array([1.0, -1.0]))


def test_bath_params_validation():
    with pytest.raises(ValueError):
        BathParams(alpha=0.0)
    with pytest.raises(ValueError):
        BathParams(omega_c=-1.0)
    with pytest.raises(ValueError):
        BathParams(t_q=-0.1)


def test_ohmic_gamma_values():
    bath = BathParams(alpha=0.001, omega_c=10.0)
    assert ohmic_gamma(0.0, bath) == 0.0
    assert ohmic_gamma(1.0, bath) == pytest.approx(np.pi * 0.001 * np.exp(-0.1))
    assert ohmic_gamma(1.0, bath) == pytest.approx(2.8425e-3, rel=1e-4)
    assert ohmic_gamma(10.0, bath) == pytest.approx(np.pi * 0.001 * 10.0 / np.e)
    with pytest.raises(ValueError):
        ohmic_gamma(-0.5, bath)


def test_bose_occupation_values():
    assert bose_occupation(1.0, 0.0) == 0.0
    assert bose_occupation(1.0, 0.05) == pytest.approx(1.0 / np.expm1(20.0))
    assert bose_occupation(1.0, 0.05) == pytest.approx(2.0612e-9, rel=1e-4)
    # small-gap limit n -> T/omega
    assert bose_occupation(1e-8, 0.3) == pytest.approx(0.3 / 1e-8, rel=1e-7)
    # overflow-safe far tail
    assert bose_occupation(1.0, 1e-4) == 0.0
    with pytest.raises(ValueError):
        bose_occupation(0.0, 0.1)


def test_select_k_levels():
    energies = np.arange(40, dtype=float)
    assert select_k_levels(energies, 0.0) == 12  # floor
    assert select_k_levels(energies, 0.05) == 12
    k = select_k_levels(energies, 0.5)
    assert 12 <= k <= 40
    # the first dropped level really is below the weight floor
    assert np.exp(-energies[k - 1] / 0.5) >= 1e-12 or k == 40


def test_detailed_balance_two_levels():
    tables = two_level_tables(gap=1.0)
    bath = BathParams(t_c=0.25, t_q=0.25)
    rates = build_rate_matrix(tables, bath, 2)
    up = rates.w[1, 0]
    down = rates.w[0, 1]
    assert up / down == pytest.approx(np.exp(-1.0 / 0.25), rel=1e-12)


def test_column_sums_zero(engine, baths):
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=0.7)))
    rates = build_rate_matrix(tables, baths, 16)
    assert np.abs(rates.w.sum(axis=0)).max() < 1e-14


def test_upward_rates_vanish_at_zero_temperature():
    tables = two_level_tables()
    rates = build_rate_matrix(tables, BathParams(t_q=0.0, t_c=0.0), 2)
    assert rates.w[1, 0] == 0.0
    assert rates.w[0, 1] > 0.0
    state = solve_steady_state(rates)
    assert state.populations[0] == pytest.approx(1.0)


def test_degenerate_pair_rate_limit():
    # gap -> 0: bidirectional rate -> pi alpha T |S|^2
    tables = two_level_tables(gap=0.0, x=0.8)
    bath = BathParams(alpha=0.001, t_q=0.3, t_c=0.3)
    rates = build_rate_matrix(tables, bath, 2)
    expected = np.pi * 0.001 * 0.3 * 0.64
    assert rates.w[1, 0] == pytest.approx(expected, rel=1e-12)
    assert rates.w[0, 1] == pytest.approx(expected, rel=1e-12)


def test_equal_temperature_matches_gibbs(engine):
    for lam in (0.1, 0.45, 0.8, 1.2):
        tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=lam)))
        for t in (0.05, 0.2, 0.5):
            bath = BathParams(t_q=t, t_c=t)
            k = select_k_levels(tables.energies, t)
            rates = build_rate_matrix(tables, bath, k)
            state = solve_steady_state(rates)
            gibbs = gibbs_populations(tables.energies[:k], t)
            assert np.abs(state.populations - gibbs.populations).max() < 1e-10


def test_steady_state_resolves_deep_populations(engine, baths):
    # the two-photon numerator depends on populations ~ e^{-40}; a naive
    # double-precision kernel solve floors them near 1e-16 of the maximum
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=0.45)))
    k = 25  # deliberately beyond the Gibbs-tail selection to reach e^{-100}
    state = solve_steady_state(build_rate_matrix(tables, baths, k))
    gibbs = gibbs_populations(tables.energies[:k], baths.t_max)
    small = gibbs.populations < 1e-30
    assert small.any()
    ratio = state.populations[small] / gibbs.populations[small]
    assert np.abs(ratio - 1.0).max() < 1e-6


def test_disconnected_graph_reported():
    tables = TransitionTables(energies=np.array([0.0, 1.0]),
                              x_elements=np.zeros((2, 2)),
                              s_q_elements=np.zeros((2, 2)),
                              parity=np.array([1.0, 1.0]))
    rates = build_rate_matrix(tables, BathParams(), 2)
    with pytest.raises(SteadyStateError) as info:
        solve_steady_state(rates)
    assert len(info.value.components) == 2


def test_nonequilibrium_bias_state(engine):
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=1.0)))
    bath = BathParams(t_q=0.5, t_c=0.05)
    k = select_k_levels(tables.energies, bath.t_max)
    state = solve_steady_state(build_rate_matrix(tables, bath, k))
    assert state.provenance == "rate-solve"
    assert np.all(state.populations >= 0.0)
    assert state.populations.sum() == pytest.approx(1.0)
    # genuinely different from either equilibrium state
    for t in (0.05, 0.5):
        gibbs = gibbs_populations(tables.energies[:k], t)
        assert np.abs(state.populations - gibbs.populations).max() > 1e-4


def test_relaxation_from_random_initial_conditions(engine, baths):
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=0.45)))
    rates = build_rate_matrix(tables, baths, 12)
    target = solve_steady_state(rates).populations
    rng = np.random.default_rng(7)
    slowest = np.sort(np.abs(np.linalg.eigvals(rates.w)))[1]
    propagator = scipy.linalg.expm(rates.w * (40.0 / slowest))
    for _ in range(5):
        p0 = rng.random(12)
        p0 /= p0.sum()
        relaxed = propagator @ p0
        assert np.abs(relaxed - target).max() < 1e-8


def test_truncation_robustness(engine, baths):
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=0.45)))
    p12 = solve_steady_state(build_rate_matrix(tables, baths, 12)).populations
    p15 = solve_steady_state(build_rate_matrix(tables, baths, 15)).populations
    assert np.abs(p12 - p15[:12]).max() < 1e-8


def test_gibbs_properties():
    energies = np.array([0.0, 1.0])
    state = gibbs_populations(energies, 0.05)
    assert state.populations[1] == pytest.approx(np.exp(-20.0) / (1 + np.exp(-20.0)))
    shifted = gibbs_populations(energies + 3.7, 0.05)
    assert np.allclose(state.populations, shifted.populations, rtol=1e-12)
    equal = gibbs_populations(np.zeros(2), 0.3)
    assert np.allclose(equal.populations, [0.5, 0.5])
    # T = 0 splits ties among degenerate ground states
    frozen = gibbs_populations(np.array([0.0, 1e-12, 2.0]), 0.0)
    assert np.allclose(frozen.populations, [0.5, 0.5, 0.0])


def test_gibbs_population_ordering(engine):
    # steep hierarchy P1 >> P2 >> P3 >> P4 at the antibunching coupling
    tables = engine.tables(engine.eigensystem(DickeParams(n_qubits=8, coupling=0.45)))
    p = gibbs_populations(tables.energies[:12], 0.05).populations
    assert p[1] > 100 * p[2] > 100 * p[3] > 100 * p[4] > 0
