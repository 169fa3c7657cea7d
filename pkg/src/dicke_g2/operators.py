"""Matrix elements between eigenstates: photon quadrature, qubit coupling,
parity labels, and the gap-weighted emission operator.

Everything is evaluated directly on displaced-basis coefficients. Operators
that stay within one spin projection (a, a^dag, J_z) act exactly there; only
the excitation-number diagnostic needs cross-projection overlaps.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .ecs import EcsEigensystem, displaced_overlap_table
from .model import SpinBasis, spin_parity_signs

# Eigenstates with more boson weight than this at l = n_tr get flagged as
# untrustworthy for matrix-element work.
EDGE_WEIGHT_TOL = 1e-8


@dataclass(frozen=True)
class TransitionTables:
    """Eigenbasis data consumed by the rate equation and the correlators."""

    energies: np.ndarray
    x_elements: np.ndarray   # <phi_j| (a^dag + a) |phi_k>
    s_q_elements: np.ndarray  # <phi_j| (J_+ + J_-)/sqrt(N) |phi_k>, rotated: 2 J_z/sqrt(N)
    parity: np.ndarray       # +-1 per eigenstate

    @property
    def n_states(self) -> int:
        return self.energies.size

    def gaps(self) -> np.ndarray:
        """gaps[k, j] = E_k - E_j."""
        return self.energies[:, None] - self.energies[None, :]


def _lower_all(coeffs: np.ndarray) -> np.ndarray:
    """Apply the displaced-mode annihilator A_m to every eigenstate."""
    out = np.zeros_like(coeffs)
    roots = np.sqrt(np.arange(1.0, coeffs.shape[2]))
    out[:, :, :-1] = coeffs[:, :, 1:] * roots
    return out


def edge_weight(eigensystem: EcsEigensystem) -> np.ndarray:
    """Boson weight at the truncation edge l = n_tr, per eigenstate."""
    return np.sum(eigensystem.coeffs[:, :, -1] ** 2, axis=1)


def _warn_edge(eigensystem: EcsEigensystem):
    bad = np.flatnonzero(edge_weight(eigensystem) > EDGE_WEIGHT_TOL)
    if bad.size:
        warnings.warn(
            f"{bad.size} eigenstates (lowest index {bad[0]}) carry boson "
            f"weight above {EDGE_WEIGHT_TOL} at the truncation edge; matrix "
            "elements may be unconverged (increase n_tr)",
            stacklevel=3,
        )


def photon_quadrature_elements(eigensystem: EcsEigensystem) -> np.ndarray:
    """X[j, k] = <phi_j| (a^dag + a) |phi_k>.

    Within projection m the bare quadrature is A_m^dag + A_m - 2 g_m, so no
    cross-frame overlaps appear.
    """
    _warn_edge(eigensystem)
    c = eigensystem.coeffs
    # (A + A^dag) c: A shifts down, A^dag shifts up
    applied = np.zeros_like(c)
    roots = np.sqrt(np.arange(1.0, c.shape[2]))
    applied[:, :, :-1] += c[:, :, 1:] * roots          # A
    applied[:, :, 1:] += c[:, :, :-1] * roots          # A^dag
    applied -= 2.0 * eigensystem.displacements.g[None, :, None] * c
    x = np.tensordot(c, applied, axes=([1, 2], [1, 2]))
    return 0.5 * (x + x.T)


def annihilator_elements(eigensystem: EcsEigensystem) -> np.ndarray:
    """a[j, k] = <phi_j| a |phi_k> with a = A_m - g_m."""
    c = eigensystem.coeffs
    applied = _lower_all(c) - eigensystem.displacements.g[None, :, None] * c
    return np.tensordot(c, applied, axes=([1, 2], [1, 2]))


def qubit_coupling_elements(eigensystem: EcsEigensystem) -> np.ndarray:
    """S_q[j, k] = <phi_j| (J_+ + J_-)/sqrt(N) |phi_k>.

    In the rotated frame the operator is 2 J_z / sqrt(N), diagonal in m.
    """
    c = eigensystem.coeffs
    spin = SpinBasis(eigensystem.params.n_qubits)
    weight = 2.0 * spin.m_values / np.sqrt(eigensystem.params.n_qubits)
    s = np.tensordot(c, weight[None, :, None] * c, axes=([1, 2], [1, 2]))
    return 0.5 * (s + s.T)


def parity_expectations(eigensystem: EcsEigensystem) -> np.ndarray:
    """Parity eigenvalue per eigenstate (exactly +-1 up to truncation noise).

    In the displaced basis the parity operator sends |l>_{A_m} x |j,m> to
    s(m) (-1)^l |l>_{A_{-m}} x |j,-m>, so the expectation is a coefficient
    contraction with the spin projections reversed.
    """
    c = eigensystem.coeffs
    signs = spin_parity_signs(eigensystem.params.n_qubits)
    boson_signs = (-1.0) ** np.arange(c.shape[2])
    flipped = c[:, ::-1, :] * signs[None, ::-1, None] * boson_signs[None, None, :]
    vals = np.sum(c * flipped, axis=(1, 2))
    if not np.allclose(np.abs(vals), 1.0, atol=1e-6):
        warnings.warn("parity expectations deviate from +-1; "
                      "possible unresolved degeneracy or truncation issue")
    return np.where(vals >= 0, 1.0, -1.0)


def transition_tables(eigensystem: EcsEigensystem) -> TransitionTables:
    return TransitionTables(
        energies=eigensystem.energies.copy(),
        x_elements=photon_quadrature_elements(eigensystem),
        s_q_elements=qubit_coupling_elements(eigensystem),
        parity=parity_expectations(eigensystem),
    )


@dataclass(frozen=True)
class XPlusMatrix:
    """Gap-weighted emission operator in the energy-ordered eigenbasis.

    The physical operator is -i * weights with weights[j, k] = (E_k - E_j) X_jk
    for k > j, zero elsewhere; all correlators only need the real factor.
    """

    weights: np.ndarray

    def to_complex(self) -> np.ndarray:
        return -1j * self.weights


def xplus_matrix(tables: TransitionTables) -> XPlusMatrix:
    gaps = tables.gaps()  # gaps[k, j] = E_k - E_j
    weights = np.triu(gaps.T * tables.x_elements, k=1)
    return XPlusMatrix(weights=weights)


def photon_number_per_state(eigensystem: EcsEigensystem) -> np.ndarray:
    """<phi_k| a^dag a |phi_k> per eigenstate, exact in the displaced basis."""
    c = eigensystem.coeffs
    applied = _lower_all(c) - eigensystem.displacements.g[None, :, None] * c
    return np.sum(applied ** 2, axis=(1, 2))


def photon_pair_per_state(eigensystem: EcsEigensystem) -> np.ndarray:
    """<phi_k| a^dag a^dag a a |phi_k> per eigenstate."""
    c = eigensystem.coeffs
    g = eigensystem.displacements.g[None, :, None]
    once = _lower_all(c) - g * c
    twice = _lower_all(once) - g * once
    return np.sum(twice ** 2, axis=(1, 2))


def excitation_number(populations: np.ndarray,
                      eigensystem: EcsEigensystem) -> float:
    """Diagnostic N_tot = <a^dag a> + <J_z> + N/2 (original frame).

    The original-frame J_z is -J_x in the rotated frame, whose expectation
    needs one cross-projection overlap table.
    """
    c = eigensystem.coeffs
    spin = SpinBasis(eigensystem.params.n_qubits)
    overlap = displaced_overlap_table(eigensystem.n_tr, eigensystem.displacements.step)
    jp = spin.ladder_plus_coeffs()
    # <J_+> per state: bra projection m+1, ket projection m
    jx = np.zeros(eigensystem.n_states)
    for i in range(spin.dim - 1):
        jx += jp[i] * np.einsum("kl,lm,km->k", c[:, i + 1, :], overlap, c[:, i, :])
    n_photon = photon_number_per_state(eigensystem)
    jz_original = -jx
    n_tot = float(np.dot(populations, n_photon + jz_original)
                  + eigensystem.params.n_qubits / 2.0)
    return n_tot
