"""Steady-state two-photon statistics of the dissipative finite-size Dicke model."""

__version__ = "0.1.0"

from .correlators import (CorrelationResult, g2_dominant_approx, g2_generalized,
                          g2_standard, g2_strong_coupling_analytic)
from .dissipation import (BathParams, RateMatrix, SteadyState, bose_occupation,
                          build_rate_matrix, gibbs_populations, ohmic_gamma,
                          select_k_levels, solve_steady_state)
from .ecs import (DisplacementTable, EcsEigensystem, build_ecs_matrix,
                  convergence_check, displaced_overlap, displacement_table,
                  solve_ecs)
from .experiments import (ExtremumResult, ScalingFit, SweepEngine, bias_grid,
                          critical_coupling, find_g2_extrema, scaling_fit,
                          sweep_lambda, sweep_qubits, sweep_temperature)
from .model import (DickeParams, ProductBasisIndex, SpinBasis,
                    build_hamiltonian_original, build_hamiltonian_rotated,
                    parity_matrix)
from .operators import (TransitionTables, XPlusMatrix, excitation_number,
                        parity_expectations, photon_quadrature_elements,
                        qubit_coupling_elements, transition_tables,
                        xplus_matrix)
from .oracle import OracleConfig, oracle_g2, oracle_spectrum
