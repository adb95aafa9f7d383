"""Bernoulli edge configurations on box windows, and cluster labelings.

A configuration only knows the window's edges.  Whether anything is open
*outside* the window is a modelling choice that belongs to the consumer
(`cluster_tree` distinguishes open-world from fixed-boundary readings),
so ``edge_state`` reports UNKNOWN for any pair that is not a window edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import BoxWindow, Coord, Edge, sorted_edge

OPEN = 1
CLOSED = 0
UNKNOWN = -1


@dataclass
class PercolationConfig:
    window: BoxWindow
    open_edges: np.ndarray  # bool, indexed by window edge id

    def __post_init__(self):
        self.open_edges = np.asarray(self.open_edges, dtype=bool)
        if self.open_edges.shape != (self.window.n_edges,):
            raise ValueError("open_edges must have one entry per window edge")

    def is_open(self, edge_id: int) -> bool:
        return bool(self.open_edges[edge_id])

    def edge_state(self, a: Coord, b: Coord) -> int:
        """OPEN/CLOSED for window edges, UNKNOWN for anything else."""
        eid = self.window.edge_index.get(sorted_edge(a, b))
        if eid is None:
            return UNKNOWN
        return OPEN if self.open_edges[eid] else CLOSED

    def copy(self) -> "PercolationConfig":
        return PercolationConfig(self.window, self.open_edges.copy())

    def to_text(self) -> str:
        header = f"box {self.window.d} " + " ".join(map(str, self.window.dims))
        bits = "".join("1" if b else "0" for b in self.open_edges)
        return header + "\n" + bits + "\n"

    @staticmethod
    def from_text(text: str) -> "PercolationConfig":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 2 or not lines[0].startswith("box "):
            raise ValueError("expected 'box d L1 .. Ld' header and a bit line")
        parts = lines[0].split()
        d = int(parts[1])
        dims = tuple(int(x) for x in parts[2:])
        if len(dims) != d:
            raise ValueError("dimension count does not match header")
        window = BoxWindow(dims)
        bits = lines[1].strip()
        if len(bits) != window.n_edges or set(bits) - {"0", "1"}:
            raise ValueError("bit line does not match the window's edge count")
        return PercolationConfig(
            window, np.array([c == "1" for c in bits], dtype=bool)
        )


def bernoulli(window: BoxWindow, p: float, seed: int) -> PercolationConfig:
    """Independent Bernoulli(p) states in canonical edge order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    return PercolationConfig(window, rng.random(window.n_edges) < p)


@dataclass(frozen=True)
class ClusterInfo:
    id: int
    members: frozenset[Coord]
    diameter: int
    frontier: bool  # touches the window boundary (ambient edges unknown)


@dataclass
class ClusterLabeling:
    """Connected components of the open subgraph, every vertex labeled.

    Cluster ids are the minimal vertex id of their members, so labels are
    reproducible across runs and serializations.
    """

    config: PercolationConfig
    labels: dict[Coord, int] = field(repr=False)
    clusters: dict[int, ClusterInfo] = field(repr=False)

    def cluster_of(self, v: Coord) -> ClusterInfo:
        return self.clusters[self.labels[v]]

    def frontier_clusters(self) -> list[ClusterInfo]:
        return [c for c in self.clusters.values() if c.frontier]

    def largest(self) -> ClusterInfo:
        return max(self.clusters.values(), key=lambda c: (c.diameter, -c.id))


def components(config: PercolationConfig) -> ClusterLabeling:
    """Union-find over open edges; singletons included."""
    w = config.window
    parent = list(range(w.n_vertices))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for eid, (a, b) in enumerate(w.edges):
        if config.open_edges[eid]:
            ra, rb = find(w.index[a]), find(w.index[b])
            if ra != rb:
                if ra > rb:
                    ra, rb = rb, ra
                parent[rb] = ra

    groups: dict[int, list[int]] = {}
    for i in range(w.n_vertices):
        groups.setdefault(find(i), []).append(i)

    labels: dict[Coord, int] = {}
    clusters: dict[int, ClusterInfo] = {}
    for root, idxs in groups.items():
        cid = min(idxs)  # == root, but independent of union order
        members = frozenset(w.vertices[i] for i in idxs)
        info = ClusterInfo(
            id=cid,
            members=members,
            diameter=w.diameter(members),
            frontier=any(v in w.boundary for v in members),
        )
        clusters[cid] = info
        for i in idxs:
            labels[w.vertices[i]] = cid
    return ClusterLabeling(config=config, labels=labels, clusters=clusters)


def cluster_distance(
    window: BoxWindow, a: frozenset[Coord], b: frozenset[Coord]
) -> int:
    """min over member pairs of the window metric (sets are small here)."""
    return min(window.dist(u, v) for u in a for v in b)
