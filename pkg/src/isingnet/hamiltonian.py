"""Spin configurations, the quantum Ising Hamiltonian and its diagonalization.

Basis convention: configuration index ``k`` in ``[0, 2**n)``; bit ``i`` of
``k`` is 0 when spin ``i`` points up (``s_i = +1``) and 1 when it points down.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphs import MAX_VERTICES, InteractionNetwork

DEGENERACY_GAP = 1e-9

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_I2 = np.eye(2)


@lru_cache(maxsize=None)
def spin_table(n: int) -> np.ndarray:
    """``(2**n, n)`` int8 array of spin values ``±1`` for every configuration."""
    k = np.arange(1 << n)[:, None]
    bits = (k >> np.arange(n)[None, :]) & 1
    table = (1 - 2 * bits).astype(np.int8)
    table.flags.writeable = False
    return table


def spins(index: int, n: int) -> np.ndarray:
    if not 0 <= index < (1 << n):
        raise ValueError(f"configuration {index} out of range for {n} spins")
    return spin_table(n)[index].astype(np.int64)


def config_index(s) -> int:
    """Inverse of :func:`spins`."""
    index = 0
    for i, v in enumerate(s):
        if v not in (1, -1):
            raise ValueError("spin values must be +1 or -1")
        if v == -1:
            index |= 1 << i
    return index


def flip(index: int, i: int) -> int:
    return index ^ (1 << i)


@dataclass(frozen=True)
class FieldParams:
    """Transverse field ``h_x`` (scalar or per spin) and optional longitudinal field ``h_z``."""

    h_x: float | tuple[float, ...] = 0.2
    h_z: tuple[float, ...] | None = None

    def transverse(self, n: int) -> np.ndarray:
        hx = np.broadcast_to(np.asarray(self.h_x, dtype=float), (n,))
        if not np.all(np.isfinite(hx)):
            raise ValueError("transverse field must be finite")
        return hx

    def longitudinal(self, n: int) -> np.ndarray | None:
        if self.h_z is None:
            return None
        hz = np.asarray(self.h_z, dtype=float)
        if hz.shape != (n,):
            raise ValueError(f"longitudinal field must have {n} entries")
        if not np.all(np.isfinite(hz)):
            raise ValueError("longitudinal field must be finite")
        return None if not np.any(hz) else hz


def _spin_vector(s, n: int) -> np.ndarray:
    if isinstance(s, (int, np.integer)):
        return spins(int(s), n)
    v = np.asarray(s, dtype=np.int64)
    if v.shape != (n,):
        raise ValueError(f"configuration has {v.shape[0] if v.ndim else 0} spins, network has {n}")
    return v


def classical_energy(net: InteractionNetwork, s, h_z=None):
    """Energy of configuration ``s`` at zero transverse field.

    ``s`` is a configuration index or a ``±1`` vector.  Returns a Python
    ``int`` when there is no longitudinal field.
    """
    v = _spin_vector(s, net.n)
    j = net.couplings.astype(np.int64)
    u2 = int(v @ j @ v)
    energy = -(u2 // 2)
    if h_z is not None and np.any(h_z):
        hz = np.asarray(h_z, dtype=float)
        if hz.shape != (net.n,):
            raise ValueError("longitudinal field dimension mismatch")
        return float(energy) - float(v @ hz)
    return energy


def classical_energies(net: InteractionNetwork) -> np.ndarray:
    """Integer energies of all ``2**n`` configurations (zero longitudinal field)."""
    s = spin_table(net.n).astype(np.int64)
    j = net.couplings.astype(np.int64)
    return -(np.einsum("ki,ij,kj->k", s, j, s) // 2)


def local_field(net: InteractionNetwork, s, i: int) -> int:
    """``sum_j J_ij s_j``; flipping spin ``i`` preserves the energy iff this is zero."""
    if not 0 <= i < net.n:
        raise IndexError(f"spin index {i} out of range")
    v = _spin_vector(s, net.n)
    return int(net.couplings[i].astype(np.int64) @ v)


def local_fields(net: InteractionNetwork) -> np.ndarray:
    """``(2**n, n)`` array of local fields for every configuration and spin."""
    return spin_table(net.n).astype(np.int64) @ net.couplings.astype(np.int64)


def _check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise ValueError(f"{n} spins exceeds the dense limit of {MAX_VERTICES}")


def _site_operator(op: np.ndarray, i: int, n: int) -> np.ndarray:
    # spin i is bit i, so the kron order runs from spin n-1 down to spin 0
    out = np.ones((1, 1))
    for k in range(n - 1, -1, -1):
        out = np.kron(out, op if k == i else _I2)
    return out


def build_hamiltonian_pauli(net: InteractionNetwork, fields: FieldParams) -> np.ndarray:
    """Dense Hamiltonian assembled from tensor products of Pauli matrices."""
    n = net.n
    _check_size(n)
    hx = fields.transverse(n)
    hz = fields.longitudinal(n)
    dim = 1 << n
    h = np.zeros((dim, dim))
    zs = [_site_operator(_Z, i, n) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if net.couplings[i, j]:
                h -= 0.5 * float(net.couplings[i, j]) * (zs[i] @ zs[j])
    if hz is not None:
        for i in range(n):
            h -= hz[i] * zs[i]
    for i in range(n):
        h -= hx[i] * _site_operator(_X, i, n)
    return h


def build_hamiltonian_fock(net: InteractionNetwork, fields: FieldParams) -> np.ndarray:
    """Dense Hamiltonian as on-site energies plus hopping along hypercube edges."""
    n = net.n
    _check_size(n)
    hx = fields.transverse(n)
    hz = fields.longitudinal(n)
    dim = 1 << n
    diag = classical_energies(net).astype(float)
    if hz is not None:
        diag = diag - spin_table(n) @ hz
    h = np.diag(diag)
    k = np.arange(dim)
    for i in range(n):
        h[k, k ^ (1 << i)] = -hx[i]
    return h


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    energies: np.ndarray
    states: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def n_spins(self) -> int:
        return self.dim.bit_length() - 1

    @property
    def degenerate(self) -> bool:
        """True if any two consecutive eigenvalues are closer than ``DEGENERACY_GAP``."""
        return bool(np.any(np.diff(self.energies) < DEGENERACY_GAP))


def diagonalize(h: np.ndarray) -> SpectralDecomposition:
    """Full eigendecomposition of a real symmetric matrix, eigenvalues ascending.

    Uses LAPACK's symmetric driver, which is deterministic for a given input
    and BLAS configuration.  Convergence failures surface as
    ``numpy.linalg.LinAlgError``.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("Hamiltonian must be square")
    if np.iscomplexobj(h) or not np.array_equal(h, h.T):
        raise ValueError("Hamiltonian must be real symmetric")
    energies, states = np.linalg.eigh(h)
    return SpectralDecomposition(energies, states)
