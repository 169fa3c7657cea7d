"""Dicke Hamiltonians in the plain (Fock x collective-spin) product basis.

All energies are in units of the photon frequency (hbar = k_B = 1). The
collective spin sector uses the symmetric j = N/2 representation; the boson
sector is a hard-truncated Fock ladder. Two frames are provided:

* original:  H = omega a^dag a + delta J_z + (2 lambda / sqrt(N)) (a^dag + a) J_x
* rotated:   H = omega a^dag a - (delta/2)(J_+ + J_-) + (2 lambda / sqrt(N)) (a^dag + a) J_z

The rotated frame (pi/2 rotation about J_y) is the one the displaced-basis
solver works in; the two are isospectral and the tests assert it.
"""

from dataclasses import dataclass

import numpy as np

# Dense storage guard: the largest production case (N=160, n_tr=50) is 8211.
DIMENSION_LIMIT = 20_000


class DimensionError(ValueError):
    """Requested basis exceeds the dense-matrix dimension guard."""


@dataclass(frozen=True)
class DickeParams:
    """Physical parameters of the closed Dicke model."""

    n_qubits: int
    delta: float = 1.0
    omega: float = 1.0
    coupling: float = 0.0  # qubit-photon coupling strength (lambda)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be >= 0, got {self.coupling}")

    @property
    def j(self) -> float:
        return self.n_qubits / 2.0


class SpinBasis:
    """Collective spin-j algebra on the (N+1)-dimensional symmetric sector.

    Basis states |j, m> ordered by ascending m = -j ... j, with the ladder
    convention J_+- |j,m> = sqrt(j(j+1) - m(m+-1)) |j, m+-1>.
    """

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.j = n_qubits / 2.0
        self.dim = n_qubits + 1
        self.m_values = -self.j + np.arange(self.dim)

    def ladder_plus_coeffs(self) -> np.ndarray:
        """j_m^+ for each m; the top entry is exactly zero."""
        j, m = self.j, self.m_values
        return np.sqrt(np.maximum(j * (j + 1) - m * (m + 1), 0.0))

    def ladder_minus_coeffs(self) -> np.ndarray:
        j, m = self.j, self.m_values
        return np.sqrt(np.maximum(j * (j + 1) - m * (m - 1), 0.0))

    def jz(self) -> np.ndarray:
        return np.diag(self.m_values)

    def jplus(self) -> np.ndarray:
        op = np.zeros((self.dim, self.dim))
        coeffs = self.ladder_plus_coeffs()[:-1]
        op[np.arange(1, self.dim), np.arange(self.dim - 1)] = coeffs
        return op

    def jminus(self) -> np.ndarray:
        return self.jplus().T

    def jx(self) -> np.ndarray:
        return 0.5 * (self.jplus() + self.jminus())


@dataclass(frozen=True)
class ProductBasisIndex:
    """Flat indexing of |j,m> x |l>: index = m_index * (cutoff+1) + l."""

    n_qubits: int
    fock_cutoff: int

    @property
    def n_boson(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dim(self) -> int:
        return (self.n_qubits + 1) * self.n_boson

    def flat(self, m_index: int, l: int) -> int:
        return m_index * self.n_boson + l

    def unflat(self, index: int) -> tuple[int, int]:
        return divmod(index, self.n_boson)


def _check_dimension(dim: int):
    if dim > DIMENSION_LIMIT:
        raise DimensionError(
            f"basis dimension {dim} exceeds guard {DIMENSION_LIMIT}; "
            "reduce the Fock cutoff or qubit number"
        )


def boson_annihilator(n_boson: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n_boson)), 1)


def build_hamiltonian_original(params: DickeParams, fock_cutoff: int) -> np.ndarray:
    """Dense symmetric Dicke Hamiltonian in the original frame."""
    if fock_cutoff < 1:
        raise ValueError("fock_cutoff must be >= 1")
    basis = ProductBasisIndex(params.n_qubits, fock_cutoff)
    _check_dimension(basis.dim)
    spin = SpinBasis(params.n_qubits)
    nb = basis.n_boson
    a = boson_annihilator(nb)
    number = np.diag(np.arange(nb, dtype=float))
    quad = a + a.T

    h = params.omega * np.kron(np.eye(spin.dim), number)
    h += params.delta * np.kron(spin.jz(), np.eye(nb))
    h += (2.0 * params.coupling / np.sqrt(params.n_qubits)) * np.kron(spin.jx(), quad)
    return h


def build_hamiltonian_rotated(params: DickeParams, fock_cutoff: int) -> np.ndarray:
    """Dense symmetric Dicke Hamiltonian after the pi/2 rotation about J_y.

    Isospectral with the original frame; the coupling operator is J_z here,
    which is what makes the displaced-basis treatment block-friendly.
    """
    if fock_cutoff < 1:
        raise ValueError("fock_cutoff must be >= 1")
    basis = ProductBasisIndex(params.n_qubits, fock_cutoff)
    _check_dimension(basis.dim)
    spin = SpinBasis(params.n_qubits)
    nb = basis.n_boson
    a = boson_annihilator(nb)
    number = np.diag(np.arange(nb, dtype=float))
    quad = a + a.T

    h = params.omega * np.kron(np.eye(spin.dim), number)
    h -= 0.5 * params.delta * np.kron(spin.jplus() + spin.jminus(), np.eye(nb))
    h += (2.0 * params.coupling / np.sqrt(params.n_qubits)) * np.kron(spin.jz(), quad)
    return h


def spin_parity_rotated(n_qubits: int) -> np.ndarray:
    """Spin factor of the parity operator in the rotated frame.

    exp(i pi (j - J_x)) expressed in the J_z eigenbasis. Real symmetric,
    anti-diagonal: it maps |j,m> to +-|j,-m>.
    """
    spin = SpinBasis(n_qubits)
    mu, v = np.linalg.eigh(spin.jx())
    mu = np.round(mu * 2.0) / 2.0  # J_x eigenvalues are exact half-integers
    signs = np.cos(np.pi * (spin.j - mu))
    mat = (v * signs) @ v.T
    # numerical noise only; the exact operator is +-1 on an anti-diagonal
    mat[np.abs(mat) < 1e-12] = 0.0
    return mat


def spin_parity_signs(n_qubits: int) -> np.ndarray:
    """Anti-diagonal entries s(m) of spin_parity_rotated, indexed by m ascending."""
    mat = spin_parity_rotated(n_qubits)
    signs = np.array([mat[n_qubits - i, i] for i in range(n_qubits + 1)])
    if not np.allclose(np.abs(signs), 1.0, atol=1e-10):
        raise RuntimeError("rotated spin parity is not anti-diagonal")
    return np.round(signs)


def parity_matrix(frame: str, basis: ProductBasisIndex) -> np.ndarray:
    """Parity operator exp(i pi (a^dag a + J_z + N/2)) in the given frame.

    Diagonal in the original frame; dense (but still real symmetric and
    involutory) in the rotated frame, where J_z maps to -J_x.
    """
    boson_parity = np.diag((-1.0) ** np.arange(basis.n_boson))
    if frame == "original":
        m_plus_j = np.arange(basis.n_qubits + 1)  # m + j = 0..N
        spin_part = np.diag((-1.0) ** m_plus_j)
    elif frame == "rotated":
        spin_part = spin_parity_rotated(basis.n_qubits)
    else:
        raise ValueError(f"unknown frame {frame!r}")
    return np.kron(spin_part, boson_parity)
