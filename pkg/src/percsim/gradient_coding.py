"""Gradient coding over cluster trees: finitary spin differences.

Every lattice vertex carries an i.i.d. pair ``(U, Y)``: a 64-bit priority
``U`` and a uniform increment ``Y`` in Z_q, both derived on demand from a
seed and the coordinate (so an infinite world costs nothing).  A cluster's
increment is the ``Y`` of its (U, coordinate)-minimal member, which makes
the assignment a deterministic function of the cluster's *complete* member
set — exactly what the exploration engine certifies before using it.

Spins are path sums of increments along the cluster tree, root pinned to 0.
Since ``Y -> sigma`` is a triangular bijection on Z_q^clusters, a uniform
increment family induces exactly the uniform-per-cluster spin law of the
Edwards-Sokal conditional.  The point of the construction is that the spin
*difference* across an edge only needs the two ancestor chains up to their
first common cluster — a bounded-radius question — while the spins
themselves need the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cluster_tree import (
    DETERMINED,
    Determination,
    OpenWorld,
    _lca_in_view,
    _UNK,
    ClusterTree,
    explore,
)
from .lattice import Edge, sorted_edge
from .percolation import OPEN, ClusterLabeling, PercolationConfig
from .seeding import MASK64, mix64, pick_index, stream_u64

_Y_SALT = 0xA5A5F00DDEADBEEF


def _coord_key(coord) -> int:
    """Collision-resistant 64-bit key for a small integer tuple."""
    k = 0x243F6A8885A308D3  # pi, as good a start as any
    for c in coord:
        k = mix64((k ^ (c & MASK64)) * 0x100000001B3 & MASK64)
    return k


@dataclass(frozen=True)
class SpinSource:
    """The (U, Y) field: per-coordinate randomness for increments."""

    seed: int
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")

    def priority(self, v) -> int:
        return stream_u64(self.seed, _coord_key(v))

    def y(self, v) -> int:
        return pick_index(stream_u64(self.seed ^ _Y_SALT, _coord_key(v)), self.q)

    def representative(self, members) -> tuple:
        """(U, coordinate)-minimal member; lexicographic coordinate order
        breaks the (astronomically unlikely) 64-bit priority ties."""
        return min(members, key=lambda v: (self.priority(v), v))

    def cluster_y(self, members) -> int:
        return self.y(self.representative(members))


# ---------------------------------------------------------------------------
# offline: spins from a built tree


def sigma_offline(tree: ClusterTree, source: SpinSource) -> dict[int, int]:
    """Spin per cluster id: increment plus the parent's spin, root = 0."""
    sigma = {tree.root_id: 0}
    stack = [tree.root_id]
    while stack:
        cid = stack.pop()
        for ch in tree.children[cid]:
            sigma[ch] = (source.cluster_y(tree.view.members[ch]) + sigma[cid]) % source.q
            stack.append(ch)
    return sigma


def vertex_sigma(tree: ClusterTree, source: SpinSource) -> dict:
    by_cluster = sigma_offline(tree, source)
    return {v: by_cluster[cid] for v, cid in tree.view.label.items()}


def grad_offline(tree: ClusterTree, source: SpinSource, u, v) -> int:
    sig = sigma_offline(tree, source)
    return (sig[tree.view.label[v]] - sig[tree.view.label[u]]) % source.q


def direct_es_spins(
    labeling: ClusterLabeling, root_id: int, q: int, seed: int
) -> dict[int, int]:
    """Independent uniform spin per cluster, root pinned to 0.

    The reference sampler for distributional comparisons against the
    path-sum construction; same interface, no tree involved.
    """
    return {
        cid: 0 if cid == root_id else pick_index(stream_u64(seed, cid), q)
        for cid in labeling.clusters
    }


# ---------------------------------------------------------------------------
# online gradient queries


def _grad_from_lca(lca, source: SpinSource) -> int:
    """Spin difference from the two chains; the meet cancels out."""
    up = sum(source.cluster_y(m) for m in lca.path_u[:-1])
    vp = sum(source.cluster_y(m) for m in lca.path_v[:-1])
    return (vp - up) % source.q


def grad_query(
    world,
    u,
    v,
    source: SpinSource,
    r0: int = 1,
    hint: Optional[ClusterLabeling] = None,
) -> Determination:
    """sigma(v) - sigma(u) in Z_q, certified from a bounded view.

    ``hint`` may pass the window's own labeling for open-world queries;
    it only enables shortcuts whose outcome provably equals the plain
    engine's (same value, same witness radius), never changes an answer.
    """
    query = ("grad", u, v, source.seed, source.q)
    if u == v:
        return Determination(DETERMINED, 0, 1, (u, v), query)
    if world.edge_state(u, v) == OPEN:
        # at radius 1 the view already joins u and v, so the engine would
        # meet immediately with gradient 0
        return Determination(DETERMINED, 0, 1, (u, v), query)
    if hint is not None and isinstance(world, OpenWorld):
        if hint.labels.get(u) == hint.labels.get(v) and u in hint.labels:
            r = _same_cluster_radius(world, hint, u, v)
            return Determination(DETERMINED, 0, r, (u, v), query)

    def fn(view):
        res = _lca_in_view(view, u, v)
        if res is _UNK:
            return _UNK
        return _grad_from_lca(res, source)

    return explore(world, (u, v), fn, r0=r0, query=query)


def _same_cluster_radius(world: OpenWorld, labeling: ClusterLabeling, u, v) -> int:
    """First scheduled radius at which u and v connect inside their cluster.

    The engine meets (gradient 0) exactly when some open path between them
    stays within the visibility ball, and it cannot determine earlier:
    both ball-cut pieces keep an open edge toward the cut, so they stay
    uncertain and block any climb.  Minimax-BFS over the cluster gives the
    minimal radius; the answer is the first schedule entry at or above it.
    """
    import heapq

    members = labeling.cluster_of(u).members
    anchor_d = {m: min(world.dist(m, u), world.dist(m, v)) for m in members}
    best = {u: anchor_d[u]}
    heap = [(anchor_d[u], u)]
    while heap:
        cost, x = heapq.heappop(heap)
        if x == v:
            break
        if cost > best.get(x, 1 << 30):
            continue
        for w in world.neighbors(x):
            if w in anchor_d and world.edge_state(x, w) == OPEN:
                c = max(cost, anchor_d[w])
                if c < best.get(w, 1 << 30):
                    best[w] = c
                    heapq.heappush(heap, (c, w))
    rstar = best[v]
    for r in world.schedule((u, v)):
        if r >= rstar:
            return r
    raise AssertionError("connection radius beyond the schedule")


def rerun_grad(config: PercolationConfig, query: tuple) -> Determination:
    """Replay runner for witness perturbation tests of gradient queries."""
    _, u, v, seed, q = query
    return grad_query(OpenWorld(config), u, v, SpinSource(seed, q))


# ---------------------------------------------------------------------------
# whole-window gradient fields


@dataclass
class GradientField:
    """Offline gradients for every window edge, canonical orientation.

    ``values[edge]`` is sigma(high端) - sigma(low) mod q for the
    lexicographically sorted edge; ``oriented`` flips the sign for the
    reverse traversal, which makes cycle sums well-defined.
    """

    q: int
    values: dict[Edge, int]

    @staticmethod
    def from_tree(tree: ClusterTree, source: SpinSource, window) -> "GradientField":
        sig = vertex_sigma(tree, source)
        vals = {
            (a, b): (sig[b] - sig[a]) % source.q for (a, b) in window.edges
        }
        return GradientField(q=source.q, values=vals)

    def oriented(self, a, b) -> int:
        e = sorted_edge(a, b)
        val = self.values[e]
        return val if e == (a, b) else (-val) % self.q

    def cycle_sum(self, cycle) -> int:
        total = 0
        n = len(cycle)
        for i in range(n):
            total += self.oriented(cycle[i], cycle[(i + 1) % n])
        return total % self.q


@dataclass
class GradSurvey:
    """Per-edge online gradients for one configuration."""

    determinations: dict[Edge, Determination]

    @property
    def n_determined(self) -> int:
        return sum(d.determined for d in self.determinations.values())

    @property
    def n_undetermined(self) -> int:
        return len(self.determinations) - self.n_determined

    def radii(self) -> list[int]:
        return sorted(
            d.witness_radius for d in self.determinations.values() if d.determined
        )


def survey_config(
    config: PercolationConfig,
    source: SpinSource,
    labeling: Optional[ClusterLabeling] = None,
    edges=None,
    use_hint: bool = True,
) -> GradSurvey:
    """Run the online gradient query across a window's edges."""
    world = OpenWorld(config)
    hint = labeling if use_hint else None
    dets = {}
    for a, b in (edges if edges is not None else config.window.edges):
        dets[(a, b)] = grad_query(world, a, b, source, hint=hint)
    return GradSurvey(determinations=dets)
