"""Meyer-Wallach global entanglement of pure states."""

from __future__ import annotations

import numpy as np

from .hamiltonian import SpectralDecomposition

NORM_TOLERANCE = 1e-10
TIE_TOLERANCE = 1e-12


def _n_spins(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    return n


def _split(states: np.ndarray, i: int, n: int) -> np.ndarray:
    # index = high * 2**(i+1) + bit_i * 2**i + low
    return states.reshape(1 << (n - 1 - i), 2, 1 << i, -1)


def reduced_density(psi, i: int) -> np.ndarray:
    """2x2 reduced density matrix of spin ``i``; row/column 0 is spin up."""
    psi = np.asarray(psi, dtype=complex)
    n = _n_spins(psi.shape[0])
    if not 0 <= i < n:
        raise IndexError(f"spin index {i} out of range")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"state is not normalized (norm {norm})")
    t = _split(psi[:, None], i, n)[..., 0]
    return np.einsum("hal,hbl->ab", t, t.conj())


def purity(rho: np.ndarray) -> float:
    return float(np.sum(np.abs(rho) ** 2))


def global_entanglement(psi) -> float:
    psi = np.asarray(psi, dtype=complex)
    n = _n_spins(psi.shape[0])
    total = sum(1.0 - purity(reduced_density(psi, i)) for i in range(n))
    return 2.0 * total / n


def eigenstate_entanglement(spec: SpectralDecomposition) -> np.ndarray:
    """Global entanglement of every eigenstate, computed in one vectorized pass."""
    v = spec.states
    n = _n_spins(v.shape[0])
    total = np.zeros(v.shape[1])
    for i in range(n):
        t = _split(v, i, n)
        # rho[a, b, state] = sum_{h, l} t[h, a, l] * conj(t[h, b, l])
        rho = np.einsum("halm,hblm->abm", t, t.conj())
        total += 1.0 - np.sum(np.abs(rho) ** 2, axis=(0, 1))
    return 2.0 * total / n


def first_min(values: np.ndarray, tol: float = TIE_TOLERANCE) -> int:
    """Index of the minimum, preferring the lowest index among values within ``tol`` of it."""
    values = np.asarray(values)
    return int(np.flatnonzero(values <= values.min() + tol)[0])


def min_eigenstate_entanglement(spec: SpectralDecomposition) -> tuple[float, int]:
    """``(Q_min, nu)``: the smallest eigenstate entanglement and its eigenstate index."""
    q = eigenstate_entanglement(spec)
    nu = first_min(q)
    return float(q[nu]), nu
