"""Brute-force reference in the plain Fock x spin basis.

Everything here is recomputed from the original-frame Hamiltonian with bare
operators, sharing no displaced-state code with the main solver, so that it
can catch sign and convention mistakes there. Intended for tests and the
`validate` subcommand only; the plain basis is hopeless beyond N ~ 12.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dissipation import BathParams, bose_occupation, ohmic_gamma, select_k_levels
from .model import (DickeParams, ProductBasisIndex, SpinBasis,
                    boson_annihilator, build_hamiltonian_original)


@dataclass(frozen=True)
class OracleConfig:
    fock_cutoff: int = 150
    tail_tol: float = 1e-12

    def check_support(self, params: DickeParams):
        """The cutoff must clear the displaced-state support with margin."""
        g_max = 2.0 * params.coupling * params.j / (params.omega * np.sqrt(params.n_qubits))
        needed = 5.0 * g_max ** 2 + 20.0
        if self.fock_cutoff < needed:
            raise ValueError(
                f"oracle cutoff {self.fock_cutoff} below displaced support "
                f"estimate {needed:.0f} for coupling {params.coupling}"
            )


@dataclass(frozen=True)
class OracleEigensystem:
    params: DickeParams
    fock_cutoff: int
    energies: np.ndarray
    vectors: np.ndarray  # columns, plain product basis


def oracle_spectrum(params: DickeParams, config: OracleConfig = OracleConfig()) -> OracleEigensystem:
    config.check_support(params)
    h = build_hamiltonian_original(params, config.fock_cutoff)
    w, v = scipy.linalg.eigh(h)

    basis = ProductBasisIndex(params.n_qubits, config.fock_cutoff)
    ground = v[:, 0].reshape(params.n_qubits + 1, basis.n_boson)
    tail = float(np.sum(ground[:, -10:] ** 2))
    if tail > config.tail_tol:
        warnings.warn(f"oracle ground state carries {tail:.3e} weight in the "
                      "top 10 Fock levels; cutoff too small")
    return OracleEigensystem(params=params, fock_cutoff=config.fock_cutoff,
                             energies=w, vectors=v)


def oracle_quadrature_elements(eig: OracleEigensystem, k_levels: int) -> np.ndarray:
    """<phi_j|(a^dag + a)|phi_k> with bare boson operators."""
    nb = eig.fock_cutoff + 1
    a = boson_annihilator(nb)
    op = np.kron(np.eye(eig.params.n_qubits + 1), a + a.T)
    v = eig.vectors[:, :k_levels]
    return v.T @ op @ v


def oracle_qubit_elements(eig: OracleEigensystem, k_levels: int) -> np.ndarray:
    """<phi_j|(J_+ + J_-)/sqrt(N)|phi_k> = <phi_j| 2 J_x/sqrt(N) |phi_k>."""
    spin = SpinBasis(eig.params.n_qubits)
    nb = eig.fock_cutoff + 1
    op = np.kron(2.0 * spin.jx() / np.sqrt(eig.params.n_qubits), np.eye(nb))
    v = eig.vectors[:, :k_levels]
    return v.T @ op @ v


def oracle_steady_state(eig: OracleEigensystem, baths: BathParams,
                        k_levels: int) -> np.ndarray:
    """Stationary populations from an independently assembled rate balance."""
    e = eig.energies[:k_levels]
    x = oracle_quadrature_elements(eig, k_levels)
    s = oracle_qubit_elements(eig, k_levels)
    w = np.zeros((k_levels, k_levels))
    for j in range(k_levels):
        for k in range(j + 1, k_levels):
            gap = e[k] - e[j]
            for elem, temp in ((s[j, k], baths.t_q), (x[j, k], baths.t_c)):
                if gap < 1e-14:
                    up = down = np.pi * baths.alpha * temp * elem ** 2
                else:
                    gamma = ohmic_gamma(gap, baths) * elem ** 2
                    n = bose_occupation(gap, temp)
                    up, down = gamma * n, gamma * (1.0 + n)
                w[k, j] += up
                w[j, k] += down
    np.fill_diagonal(w, w.diagonal() - w.sum(axis=0))
    # matrix elements above are independent of the main path; the stiff
    # kernel solve itself is generic numerics and is safely shared
    from .dissipation import RateMatrix, solve_steady_state
    return solve_steady_state(RateMatrix(w=w, energies=e)).populations


def oracle_g2(params: DickeParams, baths: BathParams,
              config: OracleConfig = OracleConfig()) -> float:
    """End-to-end G2_N(0) computed entirely in the plain basis."""
    eig = oracle_spectrum(params, config)
    k_levels = select_k_levels(eig.energies, baths.t_max)
    p = oracle_steady_state(eig, baths, k_levels)
    x = oracle_quadrature_elements(eig, k_levels)
    e = eig.energies[:k_levels]
    gaps = e[None, :] - e[:, None]  # gaps[j, k] = E_k - E_j
    r = np.triu(gaps * x, k=1)
    one = float(p @ np.sum(r ** 2, axis=0))
    r2 = r @ r
    two = float(p @ np.sum(r2 ** 2, axis=0))
    if one <= 0:
        return float("nan")
    return two / one ** 2
