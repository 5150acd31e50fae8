"""Quench dynamics from Fock states: generalized imbalance and its Fourier peak."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import TIE_TOLERANCE, first_min, min_eigenstate_entanglement
from .graphs import InteractionNetwork
from .hamiltonian import FieldParams, SpectralDecomposition, build_hamiltonian_fock, diagonalize, spin_table


@dataclass(frozen=True)
class DynamicsParams:
    tau: float = 1000.0
    dt: float = 0.25
    h_x: float = 0.2

    def __post_init__(self):
        if not (self.tau > 0 and self.dt > 0):
            raise ValueError("tau and dt must be positive")
        m = self.tau / self.dt
        if abs(m - round(m)) > 1e-9 * m:
            raise ValueError("tau must be an integer multiple of dt")
        if 1.0 / (2.0 * self.dt) < 1.0:
            raise ValueError("dt too coarse: Nyquist frequency below 1")

    @property
    def samples(self) -> int:
        return int(round(self.tau / self.dt))

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples) * self.dt


@dataclass(frozen=True, eq=False)
class ImbalanceTrace:
    times: np.ndarray
    samples: np.ndarray
    initial_magnetizations: np.ndarray


@dataclass(frozen=True, eq=False)
class ImbalanceSpectrum:
    frequencies: np.ndarray
    amplitudes: np.ndarray
    peak_amplitude: float
    peak_frequency: float


@dataclass(frozen=True)
class DynamicsRecord:
    closest_state: int
    furthest_state: int
    closest: tuple[float, float]
    furthest: tuple[float, float]


def fock_state(index: int, dim: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def select_initial_states(spec: SpectralDecomposition, nu: int) -> tuple[int, int]:
    """Configurations with the largest and smallest overlap with eigenstate ``nu``.

    Overlaps within ``TIE_TOLERANCE`` of the extreme count as ties and go to
    the lowest configuration index.
    """
    weights = np.abs(spec.states[:, nu]) ** 2
    closest = first_min(-weights, TIE_TOLERANCE)
    furthest = first_min(weights, TIE_TOLERANCE)
    return closest, furthest


def evolve_many(spec: SpectralDecomposition, psi0, times) -> np.ndarray:
    """States at each time as columns of a ``(dim, len(times))`` array."""
    psi0 = np.asarray(psi0, dtype=complex)
    v = spec.states
    coeff = v.T @ psi0
    phases = np.exp(-1j * np.outer(spec.energies, np.asarray(times, dtype=float)))
    return v @ (coeff[:, None] * phases)


def evolve(spec: SpectralDecomposition, psi0, t: float) -> np.ndarray:
    """``exp(-i H t) psi0`` by spectral propagation."""
    if t == 0:
        return np.asarray(psi0, dtype=complex).copy()
    return evolve_many(spec, psi0, [t])[:, 0]


def magnetization(psi, i: int) -> float:
    psi = np.asarray(psi)
    n = psi.shape[0].bit_length() - 1
    return float(spin_table(n)[:, i] @ (np.abs(psi) ** 2))


def imbalance_trace(spec: SpectralDecomposition, initial: int, p: DynamicsParams) -> ImbalanceTrace:
    """Generalized imbalance sampled at ``t_k = k dt`` starting from Fock state ``initial``."""
    n = spec.n_spins
    table = spin_table(n).astype(float)
    s0 = table[initial]
    v = spec.states
    times = p.times
    phases = np.exp(-1j * np.outer(spec.energies, times))
    amps = v @ (v[initial][:, None] * phases)
    probs = amps.real**2 + amps.imag**2
    weights = table @ s0 / n
    return ImbalanceTrace(times, weights @ probs, s0)


def fourier_spectrum(trace: ImbalanceTrace, p: DynamicsParams) -> ImbalanceSpectrum:
    """Amplitude spectrum of the mean-removed imbalance on the grid ``f_k = k / tau``.

    Normalized by ``2 / tau`` so a unit on-grid cosine has amplitude 1; the
    peak is taken over strictly positive frequencies, lowest frequency on ties.
    """
    x = np.asarray(trace.samples, dtype=float)
    m = len(x)
    if m < 2:
        raise ValueError("need at least two samples")
    amplitudes = (2.0 / p.tau) * p.dt * np.abs(np.fft.rfft(x - x.mean()))
    frequencies = np.arange(len(amplitudes)) / p.tau
    k = 1 + int(np.argmax(amplitudes[1:]))
    return ImbalanceSpectrum(frequencies, amplitudes, float(amplitudes[k]), float(frequencies[k]))


def peak(spec: SpectralDecomposition, initial: int, p: DynamicsParams) -> tuple[float, float]:
    s = fourier_spectrum(imbalance_trace(spec, initial, p), p)
    return s.peak_amplitude, s.peak_frequency


def dynamics_record(
    net: InteractionNetwork,
    fields: FieldParams,
    p: DynamicsParams,
    spec: SpectralDecomposition | None = None,
    nu: int | None = None,
) -> DynamicsRecord:
    """Fourier peaks of the imbalance for the closest and furthest initial Fock states."""
    if spec is None:
        spec = diagonalize(build_hamiltonian_fock(net, fields))
    if nu is None:
        _, nu = min_eigenstate_entanglement(spec)
    closest, furthest = select_initial_states(spec, nu)
    return DynamicsRecord(closest, furthest, peak(spec, closest, p), peak(spec, furthest, p))
