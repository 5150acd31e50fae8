"""Equienergy subgraph of the Fock-space hypercube and network degree statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import InteractionNetwork
from .hamiltonian import local_fields


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb] or (self.size[ra] == self.size[rb] and rb < ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def components(self) -> dict:
        """Map each element to the smallest element of its set."""
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        label = {}
        for members in groups.values():
            m = min(members)
            for x in members:
                label[x] = m
        return label

    def count(self) -> int:
        return sum(1 for x in self.parent if self.find(x) == x)


@dataclass(frozen=True)
class EquienergySubgraph:
    n_spins: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    components: int
    rank: int

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "c": self.components,
            "r": self.rank,
        }


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    flip_freedoms: tuple[int, ...]
    unconstrained_pairs: int


def count_components(vertices, edges) -> int:
    uf = UnionFind(vertices)
    for a, b in edges:
        if a not in uf.parent or b not in uf.parent:
            raise ValueError(f"edge {(a, b)} references a vertex outside the vertex set")
        uf.union(a, b)
    return uf.count()


def circuit_rank(g: EquienergySubgraph) -> int:
    """``e - v + c`` with the component count recomputed from the edge list."""
    c = count_components(g.vertices, g.edges)
    return len(g.edges) - len(g.vertices) + c


def build_equienergy_subgraph(net: InteractionNetwork, include_isolated: bool = False) -> EquienergySubgraph:
    """Hypercube edges whose endpoints share the same classical energy.

    An edge ``(s, F_i s)`` is kept when the local field on spin ``i`` vanishes.
    Each edge is listed once as ``(a, b)`` with ``a`` the endpoint where spin
    ``i`` is up, so ``a < b``.
    """
    n = net.n
    m = local_fields(net)
    dim = 1 << n
    k = np.arange(dim)
    found = []
    for i in range(n):
        up = ((k >> i) & 1) == 0
        a = k[up & (m[:, i] == 0)]
        found.append(np.stack([a, a | (1 << i)], axis=1))
    pairs = np.concatenate(found) if found else np.zeros((0, 2), dtype=int)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    edges = tuple((int(a), int(b)) for a, b in pairs[order])
    if include_isolated:
        vertices = tuple(range(dim))
    else:
        vertices = tuple(int(v) for v in np.unique(pairs))
    c = count_components(vertices, edges)
    return EquienergySubgraph(n, vertices, edges, c, len(edges) - len(vertices) + c)


def degree_profile(net: InteractionNetwork) -> DegreeProfile:
    adjacency = net.adjacency
    degrees = adjacency.sum(axis=1).astype(int)
    freedom = (1 + degrees) % 2
    n = net.n
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if freedom[i] and freedom[j] and not adjacency[i, j]:
                count += 1
    return DegreeProfile(tuple(int(d) for d in degrees), tuple(int(x) for x in freedom), count)
