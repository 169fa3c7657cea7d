"""Spectrum cache so temperature sweeps reuse one diagonalization per coupling.

In-memory dict first, optional on-disk layer (DICKE_G2_CACHE_DIR or explicit
path). Disk format: magic + version header, three little-endian uint32 counts,
then float64 arrays (energies, then coefficients), all little-endian.
"""

import hashlib
import os
import struct
import threading
from pathlib import Path

import numpy as np

from .ecs import DisplacementTable, EcsEigensystem, solve_ecs
from .model import DickeParams

MAGIC = b"DG2SPEC"
VERSION = 1
ENV_CACHE_DIR = "DICKE_G2_CACHE_DIR"


def _key(params: DickeParams, n_tr: int, k_levels) -> tuple:
    return (params.n_qubits, params.delta, params.omega, params.coupling,
            n_tr, k_levels)


def _filename(key: tuple) -> str:
    digest = hashlib.sha256(repr(key).encode()).hexdigest()[:24]
    return f"spectrum_{digest}.bin"


def write_spectrum(path: Path, eig: EcsEigensystem):
    n_states, n_spin, n_boson = eig.coeffs.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HIII", VERSION, n_states, n_spin, n_boson))
        fh.write(eig.energies.astype("<f8").tobytes())
        fh.write(eig.coeffs.astype("<f8").tobytes())


def read_spectrum(path: Path, params: DickeParams, n_tr: int) -> EcsEigensystem:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValueError(f"{path}: not a spectrum cache file")
        version, n_states, n_spin, n_boson = struct.unpack("<HIII", fh.read(14))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        energies = np.frombuffer(fh.read(8 * n_states), dtype="<f8").copy()
        coeffs = np.frombuffer(fh.read(8 * n_states * n_spin * n_boson),
                               dtype="<f8").reshape(n_states, n_spin, n_boson).copy()
    from .ecs import displacement_table
    return EcsEigensystem(params=params, n_tr=n_tr, energies=energies,
                          coeffs=coeffs, displacements=displacement_table(params))


class SpectrumCache:
    """Read-mostly cache with single-writer insertion; thread-safe."""

    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get(ENV_CACHE_DIR)
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._memory: dict[tuple, EcsEigensystem] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, params: DickeParams, n_tr: int,
            k_levels: int | None = None) -> EcsEigensystem:
        key = _key(params, n_tr, k_levels)
        with self._lock:
            cached = self._memory.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        if self.directory:
            path = self.directory / _filename(key)
            if path.exists():
                eig = read_spectrum(path, params, n_tr)
                with self._lock:
                    self._memory[key] = eig
                self.hits += 1
                return eig
        self.misses += 1
        eig = solve_ecs(params, n_tr, k_levels)
        with self._lock:
            self._memory[key] = eig
        if self.directory:
            write_spectrum(self.directory / _filename(key), eig)
        return eig

    @property
    def hit_ratio(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0
