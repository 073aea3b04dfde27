"""Interaction topologies: random geometric graphs and connected k-regular graphs."""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np
from numpy.random import Generator, PCG64


def _as_generator(seed) -> Generator:
    if isinstance(seed, Generator):
        return seed
    return Generator(PCG64(seed))


@dataclass(frozen=True)
class Topology:
    """Immutable undirected interaction graph as per-agent neighbor lists.

    provenance is ("geometric", r) or ("regular", k); positions are kept
    only for geometric graphs.
    """

    n_agents: int
    neighbor_lists: tuple  # tuple of tuples of sorted agent indices
    provenance: tuple  # ("geometric", r) | ("regular", k)
    positions: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def kind(self) -> str:
        return self.provenance[0]

    @property
    def degrees(self) -> list:
        return [len(nbrs) for nbrs in self.neighbor_lists]

    def edges(self) -> list:
        """Sorted list of (i, j) pairs with i < j."""
        out = []
        for i, nbrs in enumerate(self.neighbor_lists):
            for j in nbrs:
                if i < j:
                    out.append((i, j))
        out.sort()
        return out

    def to_csr(self):
        """Flatten neighbor lists into (offsets, neighbors) int64 arrays."""
        offsets = np.zeros(self.n_agents + 1, dtype=np.int64)
        for i, nbrs in enumerate(self.neighbor_lists):
            offsets[i + 1] = offsets[i] + len(nbrs)
        flat = np.empty(offsets[-1], dtype=np.int64)
        for i, nbrs in enumerate(self.neighbor_lists):
            flat[offsets[i]:offsets[i + 1]] = nbrs
        return offsets, flat

    def to_json(self) -> str:
        doc = {
            "n": self.n_agents,
            "provenance": {"kind": self.kind, "param": self.provenance[1]},
            "edges": [list(e) for e in self.edges()],
        }
        if self.positions is not None:
            doc["positions"] = [[float(x), float(y)] for x, y in self.positions]
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Topology":
        doc = json.loads(text)
        n = doc["n"]
        prov = (doc["provenance"]["kind"], doc["provenance"]["param"])
        positions = None
        if "positions" in doc:
            positions = np.array(doc["positions"], dtype=float)
        return from_edges(n, [tuple(e) for e in doc["edges"]], prov, positions)


def from_edges(n: int, edges, provenance, positions=None) -> Topology:
    """Build a Topology from an undirected edge list."""
    nbrs = [set() for _ in range(n)]
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop at node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i},{j}) outside [0,{n})")
        nbrs[i].add(j)
        nbrs[j].add(i)
    return Topology(
        n_agents=n,
        neighbor_lists=tuple(tuple(sorted(s)) for s in nbrs),
        provenance=provenance,
        positions=positions,
    )


def complete_topology(n: int) -> Topology:
    """Fully connected graph, recorded as regular provenance with k = n-1."""
    lists = tuple(tuple(j for j in range(n) if j != i) for i in range(n))
    return Topology(n_agents=n, neighbor_lists=lists, provenance=("regular", n - 1))


def generate_geometric(n: int, range_r: float, rng_seed) -> Topology:
    """Random geometric graph: uniform positions in the unit square, edge iff
    Euclidean distance strictly below range_r. May be disconnected or edgeless."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if range_r < 0:
        raise ValueError(f"range_r must be >= 0, got {range_r}")
    rng = _as_generator(rng_seed)
    positions = rng.random((n, 2))
    return geometric_from_positions(positions, range_r)


def geometric_from_positions(positions, range_r: float) -> Topology:
    """Geometric topology over given positions: edge iff distance < range_r."""
    positions = np.asarray(positions, dtype=float)
    n = positions.shape[0]
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    adj = dist < range_r
    np.fill_diagonal(adj, False)
    lists = tuple(tuple(int(j) for j in np.flatnonzero(adj[i])) for i in range(n))
    return Topology(
        n_agents=n, neighbor_lists=lists, provenance=("geometric", float(range_r)),
        positions=positions,
    )


def generate_k_regular(n: int, k: int, rng_seed, max_retries: int = 1000) -> Topology:
    """Connected simple k-regular random graph.

    Sampling is pairing-model based (networkx's random_regular_graph);
    disconnected samples are rejected and resampled up to max_retries times.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    if (n * k) % 2 != 0:
        raise ValueError(f"n*k must be even (handshake lemma), got n={n}, k={k}")
    if k == n - 1:
        top = complete_topology(n)
        return top
    rng = _as_generator(rng_seed)
    for _ in range(max_retries):
        sub_seed = int(rng.integers(0, 2 ** 31 - 1))
        g = nx.random_regular_graph(k, n, seed=sub_seed)
        top = from_edges(n, list(g.edges()), ("regular", k))
        if check_topology(top).component_count == 1:
            return top
    raise RuntimeError(
        f"no connected simple {k}-regular graph on {n} nodes found in {max_retries} tries"
    )


def degree_from_removal(n: int, removal_sigma: float) -> int:
    """Degree after link removal at level sigma: n - 1 - floor(sigma * n)."""
    if not 0.0 <= removal_sigma <= 1.0:
        raise ValueError(f"removal_sigma must be in [0,1], got {removal_sigma}")
    # Epsilon guards floor against float artifacts like 0.29 * 100 = 28.999...96.
    k = n - 1 - math.floor(removal_sigma * n + 1e-9)
    if k < 1:
        raise ValueError(
            f"removal_sigma={removal_sigma} at n={n} leaves degree {k} < 1"
        )
    return k


@dataclass(frozen=True)
class TopologyReport:
    """Validation findings for a Topology; generation never depends on this."""

    symmetric: bool
    symmetry_violations: tuple
    self_loops: tuple
    duplicate_entries: tuple
    degree_histogram: dict
    component_count: int
    component_sizes: tuple

    @property
    def ok(self) -> bool:
        return self.symmetric and not self.self_loops and not self.duplicate_entries


def check_topology(t: Topology) -> TopologyReport:
    """Independent structural audit: symmetry, simplicity, degrees, components.

    Components are found by hand-rolled breadth-first traversal so this stays
    an oracle independent of the generators.
    """
    sym_violations = []
    self_loops = []
    duplicates = []
    neighbor_sets = [set(nbrs) for nbrs in t.neighbor_lists]
    for i, nbrs in enumerate(t.neighbor_lists):
        if i in neighbor_sets[i]:
            self_loops.append(i)
        if len(nbrs) != len(neighbor_sets[i]):
            duplicates.append(i)
        for j in nbrs:
            if i not in neighbor_sets[j]:
                sym_violations.append((i, j))
    hist = {}
    for nbrs in t.neighbor_lists:
        hist[len(nbrs)] = hist.get(len(nbrs), 0) + 1

    seen = [False] * t.n_agents
    sizes = []
    for start in range(t.n_agents):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        size = 0
        while queue:
            node = queue.pop()
            size += 1
            for j in t.neighbor_lists[node]:
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        sizes.append(size)
    sizes.sort(reverse=True)
    return TopologyReport(
        symmetric=not sym_violations,
        symmetry_violations=tuple(sym_violations),
        self_loops=tuple(self_loops),
        duplicate_entries=tuple(duplicates),
        degree_histogram=hist,
        component_count=len(sizes),
        component_sizes=tuple(sizes),
    )
