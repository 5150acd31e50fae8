"""Transverse-field Ising model survey over all small signed interaction networks."""

from .graphs import (
    InteractionNetwork,
    UnsignedGraph,
    assign_couplings,
    canonical_signed_form,
    count_networks,
    enumerate_connected_graphs,
    enumerate_networks,
)
from .hamiltonian import FieldParams, SpectralDecomposition, build_hamiltonian_fock, build_hamiltonian_pauli, diagonalize

__version__ = "0.1.0"
