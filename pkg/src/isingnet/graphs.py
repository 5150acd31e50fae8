"""Enumeration of connected signed interaction networks up to seven spins.

Unsigned graphs and signed networks are both enumerated by orbit
computation: every labelled object is encoded as an integer whose bits (or
ternary digits) follow the upper triangle of the adjacency matrix in
row-major order, a small generating set of the relevant permutation group is
applied to all codes at once, and the orbits are recovered as connected
components.  The smallest code in each orbit is the canonical form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

MAX_VERTICES = 7

# Serialization digit per coupling value: 0 -> 0, +1 -> 1, -1 -> 2.
_DIGIT = {0: 0, 1: 1, -1: 2}
_VALUE = np.array([0, 1, -1], dtype=np.int8)


class UnsupportedSize(ValueError):
    """Raised for vertex counts outside the supported range."""


@dataclass(frozen=True, eq=False)
class UnsignedGraph:
    n: int
    adjacency: np.ndarray = field(repr=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in pairs(self.n) if self.adjacency[i, j]]

    @property
    def code(self) -> int:
        """Binary code of the upper triangle, first pair most significant."""
        return _binary_code(self.adjacency.astype(np.int64), self.n)


@dataclass(frozen=True, eq=False)
class InteractionNetwork:
    n: int
    couplings: np.ndarray = field(repr=False)
    canonical_id: bytes = b""
    id: str | None = None

    @classmethod
    def from_edges(cls, n: int, edges, id: str | None = None) -> "InteractionNetwork":
        """Build a network from ``(i, j, sign)`` triples, computing its canonical id."""
        j = np.zeros((n, n), dtype=np.int8)
        for a, b, s in edges:
            if a == b or s not in (1, -1):
                raise ValueError(f"invalid edge {(a, b, s)}")
            j[a, b] = j[b, a] = s
        return cls(n, j, canonical_signed_form(j), id)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, int(self.couplings[i, j])) for i, j in pairs(self.n) if self.couplings[i, j]]

    @property
    def adjacency(self) -> np.ndarray:
        return self.couplings != 0

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)


def pairs(n: int) -> list[tuple[int, int]]:
    """Upper-triangle index pairs ``(i, j)``, ``i < j``, in row-major order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@lru_cache(maxsize=None)
def _upper(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


@lru_cache(maxsize=None)
def all_permutations(n: int) -> np.ndarray:
    """Every permutation of ``range(n)`` as rows of an ``(n!, n)`` array."""
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def _binary_code(a: np.ndarray, n: int) -> int:
    iu = _upper(n)
    code = 0
    for bit in a[iu]:
        code = (code << 1) | int(bit != 0)
    return code


def _check_n(n: int, lo: int = 1) -> None:
    if not lo <= n <= MAX_VERTICES:
        raise UnsupportedSize(f"vertex count {n} outside [{lo}, {MAX_VERTICES}]")


def is_connected(adjacency: np.ndarray) -> bool:
    n = adjacency.shape[0]
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adjacency[v]):
            w = int(w)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _validate_couplings(j: np.ndarray) -> np.ndarray:
    j = np.asarray(j)
    if j.ndim != 2 or j.shape[0] != j.shape[1]:
        raise ValueError("coupling matrix must be square")
    if not np.array_equal(j, j.T):
        raise ValueError("coupling matrix must be symmetric")
    if np.any(np.diag(j) != 0):
        raise ValueError("coupling matrix must have zero diagonal")
    if not np.all(np.isin(j, (-1, 0, 1))):
        raise ValueError("couplings must lie in {-1, 0, +1}")
    return j.astype(np.int8)


def serialize(j: np.ndarray) -> bytes:
    """One byte per upper-triangle entry, row-major, mapped ``{-1: 2, 0: 0, +1: 1}``."""
    iu = _upper(j.shape[0])
    return bytes(_DIGIT[int(v)] for v in j[iu])


def deserialize(n: int, form: bytes) -> np.ndarray:
    j = np.zeros((n, n), dtype=np.int8)
    iu = _upper(n)
    if len(form) != len(iu[0]):
        raise ValueError("serialization length does not match vertex count")
    j[iu] = _VALUE[np.frombuffer(form, dtype=np.uint8)]
    return j + j.T


def canonical_signed_form(j: np.ndarray) -> bytes:
    """Canonical serialization of a signed network.

    The vertex permutations are first restricted to those carrying the
    unsigned graph onto its lexicographically smallest relabelling (the
    canonical unsigned graph); among those, the one giving the smallest sign
    pattern (``+1`` before ``-1``, row-major) is selected.  Two signed
    networks share the result exactly when they are isomorphic.
    """
    j = _validate_couplings(j)
    n = j.shape[0]
    if n <= 1:
        return b""
    perms = all_permutations(n)
    iu = _upper(n)
    permuted = j[perms[:, :, None], perms[:, None, :]][:, iu[0], iu[1]]
    nonzero = (permuted != 0).astype(np.int64)
    weights = 1 << np.arange(len(iu[0]) - 1, -1, -1, dtype=np.int64)
    codes = nonzero @ weights
    best = permuted[codes == codes.min()]
    negative = (best < 0).astype(np.int64)
    choice = best[int(np.argmin(negative @ weights))]
    return bytes(_DIGIT[int(v)] for v in choice)


def _pair_index(n: int) -> np.ndarray:
    idx = np.full((n, n), -1, dtype=np.intp)
    for k, (a, b) in enumerate(pairs(n)):
        idx[a, b] = idx[b, a] = k
    return idx


def _orbit_minima(width: int, sources: list[np.ndarray]) -> np.ndarray:
    """Smallest code of every orbit of ``width``-bit codes.

    Each entry of ``sources`` describes one group generator: output bit
    position ``k`` (counted from the most significant) takes its value from
    input position ``sources[k]``.
    """
    size = 1 << width
    codes = np.arange(size, dtype=np.int64)
    if not sources or width == 0:
        return codes
    rows, cols = [], []
    for src in sources:
        image = np.zeros(size, dtype=np.int64)
        for k, s in enumerate(src):
            image |= ((codes >> (width - 1 - s)) & 1) << (width - 1 - k)
        rows.append(codes)
        cols.append(image)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size)).tocsr()
    _, labels = connected_components(graph, directed=False)
    # codes are ascending, so the first code carrying each label is the orbit minimum
    _, first = np.unique(labels, return_index=True)
    return np.sort(first).astype(np.int64)


def _edge_sources(edge_list: list[tuple[int, int]], perm, index: np.ndarray) -> list[int]:
    return [int(index[perm[a], perm[b]]) for a, b in edge_list]


def _symmetric_generators(n: int) -> list[np.ndarray]:
    if n < 2:
        return []
    gens = [np.array([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(np.array(list(range(1, n)) + [0]))
    return gens


@lru_cache(maxsize=None)
def _connected_codes(n: int) -> tuple[int, ...]:
    width = n * (n - 1) // 2
    full = pairs(n)
    index = _pair_index(n)
    sources = [_edge_sources(full, g, index) for g in _symmetric_generators(n)]
    reps = _orbit_minima(width, sources)
    out = []
    for code in reps:
        a = _adjacency_from_code(n, int(code))
        if is_connected(a):
            out.append(int(code))
    return tuple(out)


def _adjacency_from_code(n: int, code: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    width = n * (n - 1) // 2
    for k, (i, j) in enumerate(pairs(n)):
        if (code >> (width - 1 - k)) & 1:
            a[i, j] = a[j, i] = True
    return a


def enumerate_connected_graphs(n: int) -> list[UnsignedGraph]:
    """One canonical representative per isomorphism class of connected graphs on ``n`` vertices.

    Representatives are in their canonical labelling and sorted by ascending
    canonical form.
    """
    _check_n(n)
    return [UnsignedGraph(n, _adjacency_from_code(n, c)) for c in _connected_codes(n)]


def automorphisms(adjacency: np.ndarray) -> np.ndarray:
    """All vertex permutations ``p`` with ``A[p][:, p] == A``."""
    n = adjacency.shape[0]
    perms = all_permutations(n)
    permuted = adjacency[perms[:, :, None], perms[:, None, :]]
    keep = np.all(permuted == adjacency[None], axis=(1, 2))
    return perms[keep]


def generating_set(perms: np.ndarray) -> list[tuple[int, ...]]:
    """A small subset of ``perms`` (a permutation group) that generates it."""
    if len(perms) == 0:
        return []
    n = perms.shape[1]
    identity = tuple(range(n))
    group = {identity}
    gens: list[tuple[int, ...]] = []
    for p in map(tuple, perms.tolist()):
        if p in group:
            continue
        gens.append(p)
        group = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for q in frontier:
                for g in gens:
                    r = tuple(q[i] for i in g)
                    if r not in group:
                        group.add(r)
                        nxt.append(r)
            frontier = nxt
    return gens


def sign_masks(g: UnsignedGraph) -> np.ndarray:
    """Canonical sign masks of ``g`` (bit set = antiferromagnetic edge, first edge most significant).

    ``g`` must be in canonical labelling; each returned mask is the minimum
    of its orbit under the automorphism group of ``g``.
    """
    edge_list = g.edges
    index = np.full((g.n, g.n), -1, dtype=np.intp)
    for k, (a, b) in enumerate(edge_list):
        index[a, b] = index[b, a] = k
    gens = generating_set(automorphisms(g.adjacency))
    sources = [_edge_sources(edge_list, p, index) for p in gens]
    return _orbit_minima(len(edge_list), sources)


def assign_couplings(g: UnsignedGraph) -> list[InteractionNetwork]:
    """Every inequivalent ±1 coupling assignment on the edges of ``g``, sorted by canonical form."""
    if not is_connected(g.adjacency):
        raise ValueError("graph must be connected")
    canon = _adjacency_from_code(g.n, min_unsigned_code(g.adjacency))
    cg = UnsignedGraph(g.n, canon)
    edge_list = cg.edges
    e = len(edge_list)
    nets = []
    for mask in sign_masks(cg):
        j = np.zeros((g.n, g.n), dtype=np.int8)
        for k, (a, b) in enumerate(edge_list):
            s = -1 if (int(mask) >> (e - 1 - k)) & 1 else 1
            j[a, b] = j[b, a] = s
        nets.append(InteractionNetwork(g.n, j, serialize(j)))
    nets.sort(key=lambda net: net.canonical_id)
    return nets


def min_unsigned_code(adjacency: np.ndarray) -> int:
    n = adjacency.shape[0]
    if n <= 1:
        return 0
    perms = all_permutations(n)
    iu = _upper(n)
    permuted = adjacency[perms[:, :, None], perms[:, None, :]][:, iu[0], iu[1]].astype(np.int64)
    weights = 1 << np.arange(len(iu[0]) - 1, -1, -1, dtype=np.int64)
    return int((permuted @ weights).min())


def _ternary_codes(n: int, g: UnsignedGraph, masks: np.ndarray) -> np.ndarray:
    """Base-3 integer of the serialization for each sign mask; ordering matches byte order."""
    width = n * (n - 1) // 2
    edge_pos = [k for k, (a, b) in enumerate(pairs(n)) if g.adjacency[a, b]]
    e = len(edge_pos)
    codes = np.zeros(len(masks), dtype=np.int64)
    for k, pos in enumerate(edge_pos):
        digit = 1 + ((masks >> (e - 1 - k)) & 1)
        codes += digit * 3 ** (width - 1 - pos)
    return codes


@lru_cache(maxsize=None)
def network_codes(n: int) -> np.ndarray:
    """Sorted base-3 canonical codes of every interaction network on ``n`` spins.

    Position ``k`` of the result holds the network with ordinal ``k + 1``.
    """
    _check_n(n)
    chunks = [_ternary_codes(n, g, sign_masks(g)) for g in enumerate_connected_graphs(n)]
    codes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    codes.sort()
    return codes


def network_from_code(n: int, code: int, ordinal: int | None = None) -> InteractionNetwork:
    width = n * (n - 1) // 2
    digits = []
    for _ in range(width):
        code, d = divmod(int(code), 3)
        digits.append(d)
    form = bytes(reversed(digits))
    j = deserialize(n, form)
    return InteractionNetwork(n, j, form, None if ordinal is None else network_id(n, ordinal))


def network_id(n: int, ordinal: int) -> str:
    return f"N{n}-{ordinal}"


def parse_network_id(net_id: str) -> tuple[int, int]:
    head, _, tail = net_id.partition("-")
    if not head.startswith("N") or not tail:
        raise ValueError(f"malformed network id {net_id!r}")
    return int(head[1:]), int(tail)


def enumerate_networks(n: int, ordinals=None) -> list[InteractionNetwork]:
    """Interaction networks on ``n`` spins in canonical order, with ids ``N<n>-<ordinal>``.

    ``ordinals`` (1-based) restricts the output to a subset.
    """
    codes = network_codes(n)
    if ordinals is None:
        ordinals = range(1, len(codes) + 1)
    return [network_from_code(n, codes[k - 1], k) for k in ordinals]


def network_by_id(net_id: str) -> InteractionNetwork:
    n, ordinal = parse_network_id(net_id)
    codes = network_codes(n)
    if not 1 <= ordinal <= len(codes):
        raise KeyError(net_id)
    return network_from_code(n, codes[ordinal - 1], ordinal)


def count_networks(n: int) -> tuple[int, int]:
    """``(connected graph count, interaction network count)`` for ``n`` vertices."""
    _check_n(n, lo=3)
    return len(_connected_codes(n)), len(network_codes(n))


def network_to_json(net: InteractionNetwork) -> dict:
    return {"id": net.id, "n": net.n, "edges": [list(e) for e in net.edges]}
