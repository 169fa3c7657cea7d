"""Displaced-Fock (extended coherent state) diagonalization of the rotated frame.

Each spin projection m carries its own displaced boson mode A_m = a + g_m with
g_m = 2 lambda m / (omega sqrt(N)). The displaced number states
|l>_{A_m} = D(-g_m)|l> together with |j,m> form an orthonormal product basis,
so the eigenproblem is an ordinary dense symmetric one; the displacement only
enters through same-step overlaps <l|D(+-G)|k> in the qubit tunneling term.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import DickeParams, SpinBasis, _check_dimension

# Above this dimension only the lowest k_levels eigenpairs are computed.
FULL_DECOMPOSITION_LIMIT = 2000


@dataclass(frozen=True)
class DisplacementTable:
    """Per-projection displacements g_m (m ascending) and the step G."""

    g: np.ndarray
    step: float


def displacement_table(params: DickeParams) -> DisplacementTable:
    spin = SpinBasis(params.n_qubits)
    scale = 2.0 * params.coupling / (params.omega * np.sqrt(params.n_qubits))
    return DisplacementTable(g=scale * spin.m_values, step=scale)


def displaced_overlap_table(n_max: int, delta: float) -> np.ndarray:
    """Matrix M[l, k] = <l| D(delta) |k| for l, k = 0..n_max, real delta.

    Evaluated by a two-term recurrence seeded from the exact first row and
    column; stable for n_max <= 200 and |delta| <= 20, where the literal
    factorial sum overflows or cancels.
    """
    n = n_max + 1
    m = np.zeros((n, n))
    m[0, 0] = np.exp(-0.5 * delta * delta)
    roots = np.sqrt(np.arange(1.0, n))
    for k in range(1, n):
        m[0, k] = -delta / roots[k - 1] * m[0, k - 1]
    for l in range(1, n):
        m[l, 0] = delta / roots[l - 1] * m[l - 1, 0]
        for k in range(1, n):
            m[l, k] = (roots[k - 1] * m[l - 1, k - 1] + delta * m[l - 1, k]) / roots[l - 1]
    return m


def displaced_overlap(l: int, k: int, delta: float) -> float:
    """Single overlap <l| D(delta) |k>; see displaced_overlap_table."""
    if l < 0 or k < 0:
        raise ValueError("Fock labels must be non-negative")
    return displaced_overlap_table(max(l, k), delta)[l, k]


def build_ecs_matrix(params: DickeParams, n_tr: int) -> np.ndarray:
    """Rotated-frame Hamiltonian in the displaced product basis.

    Diagonal blocks omega (l - g_m^2); the qubit tunneling -delta/2 (J_+ + J_-)
    couples adjacent projections through the overlap matrix of bosonic frames
    one displacement step apart.
    """
    if n_tr < 1:
        raise ValueError("n_tr must be >= 1")
    spin = SpinBasis(params.n_qubits)
    nb = n_tr + 1
    dim = spin.dim * nb
    _check_dimension(dim)

    disp = displacement_table(params)
    levels = np.arange(nb, dtype=float)
    h = np.zeros((dim, dim))
    for i in range(spin.dim):
        sl = slice(i * nb, (i + 1) * nb)
        h[sl, sl] = np.diag(params.omega * (levels - disp.g[i] ** 2))

    # <l|_{A_m} |k>_{A_{m+1}} = <l| D(g_m - g_{m+1}) |k> = <l| D(-G) |k>
    overlap = displaced_overlap_table(n_tr, -disp.step)
    jp = spin.ladder_plus_coeffs()
    for i in range(spin.dim - 1):
        block = -0.5 * params.delta * jp[i] * overlap
        h[i * nb:(i + 1) * nb, (i + 1) * nb:(i + 2) * nb] = block
        h[(i + 1) * nb:(i + 2) * nb, i * nb:(i + 1) * nb] = block.T
    return h


@dataclass(frozen=True)
class EcsEigensystem:
    """Eigensolution of the rotated Dicke Hamiltonian in the displaced basis.

    coeffs[k, i, l] is the amplitude of |l>_{A_m(i)} x |j, m(i)> in the k-th
    eigenstate (energies ascending, eigenvectors sign-fixed so the largest
    coefficient is positive).
    """

    params: DickeParams
    n_tr: int
    energies: np.ndarray
    coeffs: np.ndarray
    displacements: DisplacementTable

    @property
    def n_states(self) -> int:
        return self.energies.size


def eigh_ascending(matrix: np.ndarray, k_levels: int | None = None):
    """Symmetric eigendecomposition, ascending; optionally only the lowest levels."""
    dim = matrix.shape[0]
    if k_levels is not None and k_levels < dim and dim > FULL_DECOMPOSITION_LIMIT:
        w, v = scipy.linalg.eigh(matrix, subset_by_index=(0, k_levels - 1))
    else:
        w, v = scipy.linalg.eigh(matrix)
        if k_levels is not None and k_levels < dim:
            w, v = w[:k_levels], v[:, :k_levels]
    return w, v


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def solve_ecs(params: DickeParams, n_tr: int,
              k_levels: int | None = None) -> EcsEigensystem:
    """Build and diagonalize the displaced-basis Hamiltonian."""
    h = build_ecs_matrix(params, n_tr)
    w, v = eigh_ascending(h, k_levels)
    v = _fix_signs(v)
    coeffs = np.ascontiguousarray(v.T.reshape(w.size, params.n_qubits + 1, n_tr + 1))
    return EcsEigensystem(params=params, n_tr=n_tr, energies=w, coeffs=coeffs,
                          displacements=displacement_table(params))


@dataclass(frozen=True)
class ConvergenceReport:
    n_tr_low: int
    n_tr_high: int
    shifts: np.ndarray
    tolerance: float

    @property
    def converged(self) -> bool:
        return bool(np.all(self.shifts < self.tolerance))

    @property
    def flagged_levels(self) -> np.ndarray:
        return np.flatnonzero(self.shifts >= self.tolerance)


def convergence_check(params: DickeParams, n_tr_low: int, n_tr_high: int,
                      k_levels: int, tolerance: float = 1e-8) -> ConvergenceReport:
    """Per-level energy shifts between two boson truncations."""
    if n_tr_low >= n_tr_high:
        raise ValueError("n_tr_low must be < n_tr_high")
    lo = solve_ecs(params, n_tr_low, k_levels)
    hi = solve_ecs(params, n_tr_high, k_levels)
    n = min(k_levels, lo.n_states, hi.n_states)
    shifts = np.abs(lo.energies[:n] - hi.energies[:n])
    return ConvergenceReport(n_tr_low, n_tr_high, shifts, tolerance)
