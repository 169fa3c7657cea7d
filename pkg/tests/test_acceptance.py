"""Acceptance gate: one test per top-level criterion, each printing a single
pass/fail line with the measured figure of merit before asserting."""

import dataclasses
from pathlib import Path

import numpy as np

from dicke_g2 import (BathParams, DickeParams, SweepEngine, bias_grid,
                      find_g2_extrema, scaling_fit, sweep_lambda)
from dicke_g2.dissipation import (build_rate_matrix, gibbs_populations,
                                  select_k_levels, solve_steady_state)
from dicke_g2.correlators import g2_generalized
from dicke_g2.ecs import solve_ecs
from dicke_g2.experiments import sweep_qubits
from dicke_g2.operators import transition_tables, xplus_matrix
from dicke_g2.oracle import OracleConfig, oracle_spectrum


def test_criterion_1_oracle_spectral_equivalence(engine, report):
    worst = 0.0
    for n in (1, 2, 4, 8):
        for lam in (0.1, 0.3, 0.5, 0.7, 0.9, 1.1):
            params = DickeParams(n_qubits=n, coupling=lam)
            reference = oracle_spectrum(params, OracleConfig(fock_cutoff=150))
            eig = engine.eigensystem(params)
            scale = np.maximum(np.abs(reference.energies[:10]), 1.0)
            rel = np.abs(eig.energies[:10] - reference.energies[:10]) / scale
            worst = max(worst, float(rel.max()))
    report("1 (oracle spectra)", worst < 1e-8,
           f"worst relative deviation {worst:.3e} (tolerance 1e-8)")


def test_criterion_2_truncation_claim(report):
    worst = 0.0
    for lam in np.linspace(0.0, 1.0, 11):
        params = DickeParams(n_qubits=32, coupling=float(lam))
        e_low = solve_ecs(params, n_tr=6).energies[0]
        e_high = solve_ecs(params, n_tr=50, k_levels=5).energies[0]
        worst = max(worst, abs(e_low - e_high) / abs(e_high))
    report("2 (n_tr=6 at N=32)", worst < 1e-6,
           f"worst relative ground-energy shift {worst:.3e} (tolerance 1e-6)")


def test_criterion_3_thermal_equilibrium(engine, report):
    worst = 0.0
    for n in (2, 4, 8):
        for lam in (0.1, 0.45, 0.8, 1.2):
            tables = engine.tables(
                engine.eigensystem(DickeParams(n_qubits=n, coupling=lam)))
            for t in (0.05, 0.2, 0.5):
                baths = BathParams(t_q=t, t_c=t)
                k = select_k_levels(tables.energies, t)
                state = solve_steady_state(build_rate_matrix(tables, baths, k))
                gibbs = gibbs_populations(tables.energies[:k], t)
                diff = float(np.abs(state.populations - gibbs.populations).max())
                worst = max(worst, diff)
    report("3 (rate solve = Gibbs)", worst < 1e-10,
           f"worst per-level deviation {worst:.3e} (tolerance 1e-10)")


def test_criterion_4_thermal_endpoints(engine, baths, report):
    g2_weak = engine.g2(DickeParams(n_qubits=8, coupling=1e-3), baths)
    g2_strong = engine.g2(DickeParams(n_qubits=8, coupling=1.2), baths)
    ok_weak = abs(g2_weak - 2.0) < 1e-3
    ok_strong = abs(g2_strong - 2.0) / 2.0 < 0.05
    report("4 (thermal endpoints)", ok_weak and ok_strong,
           f"g2(1e-3)={g2_weak:.6f} (2 within 1e-3: {ok_weak}), "
           f"g2(1.2)={g2_strong:.6f} (2 within 5%: {ok_strong})")


def test_criterion_5_coupling_sweep_shape(engine, baths, report):
    params = DickeParams(n_qubits=8)
    lambdas = list(np.linspace(0.32, 0.58, 9)) + list(np.linspace(0.62, 0.84, 9))
    rows = sweep_lambda(lambdas, params, baths, engine)
    dip = min(row["g2"] for row in rows if 0.3 < row["lambda"] < 0.6)
    peak_window = max(row["g2"] for row in rows if 0.6 < row["lambda"] < 0.85)
    g2_11 = engine.g2(DickeParams(n_qubits=8, coupling=1.1), baths)
    extrema = find_g2_extrema(params, baths, engine)
    ok_i = dip < 1.0
    ok_ii = peak_window > 2.0
    ok_iii = abs(g2_11 - 2.0) / 2.0 < 0.10
    golden_ok = (abs(extrema.lambda_max - 0.8577832022397556) < 1e-3
                 and abs(extrema.g2_max / 370.5068589131421 - 1.0) < 1e-3)
    report("5 (coupling sweep shape)",
           ok_i and ok_ii and ok_iii and golden_ok,
           f"dip={dip:.4f} (<1: {ok_i}), peak={peak_window:.1f} (>2: {ok_ii}), "
           f"g2(1.1)={g2_11:.4f} (2 within 10%: {ok_iii}), "
           f"golden peak ({extrema.lambda_max:.5f}, {extrema.g2_max:.2f}): "
           f"{golden_ok}")


def test_criterion_6_parity_selection(engine, baths, report):
    worst_x = 0.0
    worst_rate = 0.0
    worst_x21 = 0.0
    for lam in (0.1, 0.2, 0.28):
        tables = engine.tables(
            engine.eigensystem(DickeParams(n_qubits=8, coupling=lam)))
        k = 12
        parity = tables.parity[:k]
        same = parity[:, None] == parity[None, :]
        np.fill_diagonal(same, False)
        worst_x = max(worst_x, float(np.abs(tables.x_elements[:k, :k][same]).max()))
        rates = build_rate_matrix(tables, baths, k).w.copy()
        np.fill_diagonal(rates, 0.0)
        worst_rate = max(worst_rate, float(np.abs(rates[same]).max()))
        worst_x21 = max(worst_x21, abs(tables.x_elements[2, 1]))
    ok = worst_x < 1e-10 and worst_rate < 1e-20 and worst_x21 < 1e-10
    report("6 (parity selection)", ok,
           f"max same-parity |X|={worst_x:.2e}, rate={worst_rate:.2e}, "
           f"|X_21|={worst_x21:.2e} (tolerance 1e-10)")


def test_criterion_7_finite_size_scaling(baths, report):
    params = DickeParams(n_qubits=8)
    extrema = sweep_qubits((4, 8, 16, 32, 64), params, baths)
    fit = scaling_fit(extrema, params, baths.t_max)
    ok_min = abs(fit.slope_min + 1.0) < 0.15
    ok_max = abs(fit.slope_max + 1.0) < 0.15
    report("7 (scaling exponents)", ok_min and ok_max,
           f"slope_min={fit.slope_min:+.4f}, slope_max={fit.slope_max:+.4f} "
           f"(both -1 within 0.15), lambda_c={fit.lambda_c:.6f}, "
           f"excluded N={fit.excluded}")


def test_criterion_8_temperature_bias_regions(engine, baths, report):
    temps = np.linspace(0.05, 0.5, 8)

    rows_weak = bias_grid(temps, temps, DickeParams(n_qubits=8, coupling=0.1),
                          baths, engine)
    grid_weak = np.array([row["g2"] for row in rows_weak]).reshape(8, 8)
    # high-T_q / low-T_c corner block (top quarter of T_q, bottom of T_c)
    corner = grid_weak[6:, :2]
    ok_weak = bool(np.any(corner > 2.0))

    rows_strong = bias_grid(temps, temps, DickeParams(n_qubits=8, coupling=1.0),
                            baths, engine)
    grid_strong = np.array([row["g2"] for row in rows_strong]).reshape(8, 8)
    tq_idx, tc_idx = np.unravel_index(np.argmax(grid_strong), grid_strong.shape)
    # grid maximum in the high-T_c / low-T_q region
    ok_strong = bool(tc_idx >= 4 and tq_idx <= 3)

    report("8 (temperature-bias regions)", ok_weak and ok_strong,
           f"lambda=0.1 corner max={corner.max():.4f} (>2: {ok_weak}); "
           f"lambda=1.0 argmax at (T_q={temps[tq_idx]:.2f}, "
           f"T_c={temps[tc_idx]:.2f}) (high T_c/low T_q: {ok_strong})")


def test_criterion_9_property_suites(engine, baths, tmp_path, report):
    from dicke_g2.csvio import SWEEP_LAMBDA_SCHEMA, emit_csv

    # decomposition closure
    params = DickeParams(n_qubits=8, coupling=0.45)
    tables = engine.tables(engine.eigensystem(params))
    k = select_k_levels(tables.energies, baths.t_max)
    state = solve_steady_state(build_rate_matrix(tables, baths, k))
    corr = g2_generalized(xplus_matrix(tables), state)
    closure = max(
        abs(float(state.populations @ corr.a_components) / corr.one_photon - 1.0),
        abs(float(state.populations @ corr.b_components) / corr.two_photon - 1.0))

    # phase-gauge invariance
    eig = engine.eigensystem(params)
    rng = np.random.default_rng(3)
    signs = rng.choice([-1.0, 1.0], size=eig.n_states)
    flipped = dataclasses.replace(eig, coeffs=eig.coeffs * signs[:, None, None])
    tables_f = transition_tables(flipped)
    state_f = solve_steady_state(build_rate_matrix(tables_f, baths, k))
    corr_f = g2_generalized(xplus_matrix(tables_f), state_f)
    gauge = abs(corr_f.g2 / corr.g2 - 1.0)

    # rate-matrix column sums
    column_sum = float(np.abs(build_rate_matrix(tables, baths, k).w.sum(axis=0)).max())

    # CSV determinism
    rows = sweep_lambda([0.2, 0.6], DickeParams(n_qubits=8), baths, engine)
    path_a = emit_csv(rows, SWEEP_LAMBDA_SCHEMA, tmp_path / "a.csv")
    rows_again = sweep_lambda([0.2, 0.6], DickeParams(n_qubits=8), baths,
                              SweepEngine(n_tr=50))
    path_b = emit_csv(rows_again, SWEEP_LAMBDA_SCHEMA, tmp_path / "b.csv")
    deterministic = path_a.read_bytes() == path_b.read_bytes()

    # the primary package never touches the plotting component
    package_dir = Path(__import__("dicke_g2").__file__).parent
    standalone = all("matplotlib" not in source.read_text()
                     for source in package_dir.glob("*.py"))

    ok = (closure < 1e-10 and gauge < 1e-12 and column_sum < 1e-14
          and deterministic and standalone)
    report("9 (property suites)", ok,
           f"closure={closure:.2e}, gauge={gauge:.2e}, "
           f"column_sum={column_sum:.2e}, csv_deterministic={deterministic}, "
           f"standalone={standalone}")
