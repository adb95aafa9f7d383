"""Cluster-tree queries answered from bounded neighborhoods, with certificates.

Every online query (``candidate``, ``parent``, ``lca`` — and gradients built
on top of them) is evaluated by looking only at the states of edges incident
to a ball ``B_r(anchors)``, for ``r`` growing through a doubling schedule.
A query returns DETERMINED only when its answer provably cannot change under
*any* assignment of the remaining edges — including edges beyond the window,
which a finite configuration knows nothing about.  The radius at which the
certificate first fires is reported as the witness radius; because radii
double, it is within a factor two of minimal for the schedule.

The certificate logic rests on a trichotomy per view cluster:

* **certain** clusters have every incident edge known and closed outward,
  so their member set is final in every completion;
* **uncertain** clusters have an open or unknown edge leaving the explored
  region, so they can only grow;
* coordinates outside the configuration's universe (beyond the window in
  open-world mode) may hide clusters of arbitrary size.

A level-``k`` evaluation — "which cluster of largest diameter meets
``B_k``?" — is then decidable in exactly two situations: all touched
clusters are certain and the ball meets no foreign coordinates (the answer
is exact, ties included); or a single uncertain cluster touches the ball
with explored diameter at least ``k`` and strictly above every certain
competitor (it dominates in every completion).  Everything else is Unknown
at this radius.

Two world models supply edge knowledge.  ``OpenWorld`` wraps a box-window
configuration and treats the outside as genuinely unknown, so queries near
the frontier come back UNDETERMINED — that is the honest answer.
``BcWorld`` fixes a deterministic boundary condition on a sublattice (the
regime the height-gradient pipeline runs in): the outside is known, and
uncertainty stems only from the visibility horizon.

Offline counterparts (``offline_parent``, ``build_tree``, ...) treat the
window as the whole world, with a designated root cluster of infinite
diameter standing in for the unique unbounded cluster.  Online DETERMINED
answers agree with the offline tree wherever both are defined; tests
exercise that equality heavily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .lattice import (
    chebyshev_diameter,
    diag_neighbors,
    parity,
    edge_site,
    sorted_edge,
    sublattice_dist,
)
from .percolation import CLOSED, OPEN, UNKNOWN, ClusterLabeling, PercolationConfig

DETERMINED = "determined"
UNDETERMINED = "undetermined"


class _Tie:
    """Value of a level with no unique largest cluster."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TIE"


TIE = _Tie()


class _Unknown:
    def __repr__(self):
        return "<unknown at this radius>"


_UNK = _Unknown()


@dataclass(frozen=True)
class ParentValue:
    """Certified parent: first succeeding level and the parent's members.

    ``members`` are the parent's explored vertices at determination time;
    for a certain parent that is its complete member set.
    """

    k: int
    members: frozenset


@dataclass(frozen=True)
class LcaResult:
    """Ancestor paths of two query vertices up to their first common cluster.

    Both paths include the meet cluster as last element (identical
    frozensets).  All earlier elements are certain, hence complete; the
    meet itself may be uncertain, flagged by ``meet_certain``.
    """

    path_u: tuple[frozenset, ...]
    path_v: tuple[frozenset, ...]
    meet_certain: bool

    @property
    def meet(self) -> frozenset:
        return self.path_u[-1]


@dataclass(frozen=True)
class Determination:
    """Outcome of an online query, with its replay descriptor."""

    status: str
    value: object
    witness_radius: Optional[int]
    anchors: tuple
    query: tuple = ()

    @property
    def determined(self) -> bool:
        return self.status == DETERMINED

    def same_answer(self, other: "Determination") -> bool:
        return (
            self.status == other.status
            and self.value == other.value
            and self.witness_radius == other.witness_radius
        )


# ---------------------------------------------------------------------------
# worlds


class OpenWorld:
    """A box-window configuration with genuinely unknown exterior."""

    def __init__(self, config: PercolationConfig):
        self.config = config
        self.window = config.window

    def universe(self, v) -> bool:
        return self.window.contains(v)

    def edge_state(self, a, b) -> int:
        return self.config.edge_state(a, b)

    def neighbors(self, v):
        return self.window.neighbors(v)

    def dist(self, a, b) -> int:
        return self.window.dist(a, b)

    def diameter(self, coords) -> int:
        return self.window.diameter(coords)

    def schedule(self, anchors) -> list[int]:
        # beyond sum(dims) the view cannot change: every window vertex is
        # visible and the exterior stays unknown at any radius
        bound = sum(self.window.dims)
        rs = []
        r = 1
        while r < bound:
            rs.append(r)
            r *= 2
        rs.append(r)
        return rs


class BcWorld:
    """One sublattice under a fixed boundary condition.

    ``site_open`` pins the crosses inside the window (and any explicit
    shell): True means this sublattice's edge at that site is open.  Every
    other site takes the ``beyond_open`` default — a wired (True) or free
    (False) boundary condition.  All edge states are therefore *known*;
    queries are still answered from bounded views so that their witness
    radii are meaningful.
    """

    def __init__(
        self,
        sublattice: int,
        site_open: dict,
        beyond_open: bool,
        cap: int = 512,
    ):
        if sublattice not in (0, 1):
            raise ValueError("sublattice must be 0 (even) or 1 (odd)")
        self.sublattice = sublattice
        self.site_open = site_open
        self.beyond_open = beyond_open
        self.cap = cap

    def universe(self, v) -> bool:
        return parity(v) == self.sublattice

    def edge_state(self, a, b) -> int:
        if parity(a) != self.sublattice or b not in diag_neighbors(a):
            return UNKNOWN
        site = edge_site(sorted_edge(a, b))
        return OPEN if self.site_open.get(site, self.beyond_open) else CLOSED

    def neighbors(self, v):
        return diag_neighbors(v)

    def dist(self, a, b) -> int:
        return sublattice_dist(a, b)

    def diameter(self, coords) -> int:
        return chebyshev_diameter(coords)

    def schedule(self, anchors) -> list[int]:
        rs = []
        r = 1
        while r <= self.cap:
            rs.append(r)
            r *= 2
        return rs

    def materialize(self, center, R: int) -> tuple["OfflineView", Optional[int]]:
        """Truncate this world to the Chebyshev ball of radius R.

        Returns an offline view plus the id of the shell-spanning cluster
        (diameter set to infinity) when the boundary condition is wired,
        or None when it is free.  Valid as a ground truth for any query
        whose scans stay well inside R; pick R generously.
        """
        cx, cy = center
        coords = [
            (cx + dx, cy + dy)
            for dx in range(-R, R + 1)
            for dy in range(-R, R + 1)
            if (cx + dx + cy + dy) % 2 == self.sublattice
        ]
        pos = {v: i for i, v in enumerate(coords)}
        parent = list(range(len(coords)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for v in coords:
            for w in self.neighbors(v):
                j = pos.get(w)
                if j is not None and self.edge_state(v, w) == OPEN:
                    ri, rj = find(pos[v]), find(j)
                    if ri != rj:
                        parent[rj] = ri

        groups: dict[int, list] = {}
        for v in coords:
            groups.setdefault(find(pos[v]), []).append(v)
        members = {}
        diam = {}
        label = {}
        for root, vs in groups.items():
            cid = min(pos[v] for v in vs)
            members[cid] = frozenset(vs)
            diam[cid] = float(self.diameter(vs))
            for v in vs:
                label[v] = cid

        root_id = None
        if self.beyond_open:
            shell = [v for v in coords if self.dist(v, center) == R]
            shell_ids = {label[v] for v in shell}
            if len(shell_ids) != 1:
                raise AssertionError(
                    "wired shell did not merge into one cluster; increase R"
                )
            root_id = shell_ids.pop()
            diam[root_id] = float("inf")
        return (
            OfflineView(members=members, diam=diam, label=label, metric=self),
            root_id,
        )


# ---------------------------------------------------------------------------
# views


@dataclass
class ViewCluster:
    members: frozenset
    diameter: int
    certain: bool


@dataclass
class View:
    world: object
    anchors: tuple
    r: int
    dist: dict  # coord -> distance from anchor set (ambient, <= r)
    clusters: list[ViewCluster]
    label: dict  # universe coord -> cluster index

    def cluster_of(self, v) -> ViewCluster:
        return self.clusters[self.label[v]]


def build_view(world, anchors, r: int) -> View:
    """Explore ``B_r(anchors)`` and label its open components.

    The BFS runs in the ambient lattice, so out-of-universe coordinates
    participate as geometry (they carry distance) but never join clusters.
    Knowledge is every edge incident to the ball: a cluster is certain iff
    none of its members has an unknown-state edge or an open edge to an
    unexplored vertex.
    """
    dist: dict = {}
    frontier = []
    for a in anchors:
        if a not in dist:
            dist[a] = 0
            frontier.append(a)
    for d in range(1, r + 1):
        nxt = []
        for v in frontier:
            for w in world.neighbors(v):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break

    verts = [v for v in dist if world.universe(v)]
    pos = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    uncertain_roots = set()
    for v in verts:
        i = pos[v]
        for w in world.neighbors(v):
            st = world.edge_state(v, w)
            if st == OPEN:
                j = pos.get(w)
                if j is None:  # open edge into unexplored or foreign territory
                    uncertain_roots.add(i)
                else:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[rj] = ri
            elif st == UNKNOWN:
                uncertain_roots.add(i)

    groups: dict[int, list] = {}
    for v in verts:
        groups.setdefault(find(pos[v]), []).append(v)
    uncertain = {find(i) for i in uncertain_roots}

    clusters = []
    label = {}
    for root, members in groups.items():
        idx = len(clusters)
        clusters.append(
            ViewCluster(
                members=frozenset(members),
                diameter=world.diameter(members),
                certain=root not in uncertain,
            )
        )
        for v in members:
            label[v] = idx
    return View(world=world, anchors=tuple(anchors), r=r, dist=dist,
                clusters=clusters, label=label)


# ---------------------------------------------------------------------------
# level evaluations on a view


def _ring_scan(view: View, sources: Iterable):
    """Yield (k, ring_coords) for balls around ``sources`` inside the view.

    Stops yielding (returns) as soon as a ring coordinate escapes
    visibility or the universe — the caller must treat that as Unknown.
    """
    world = view.world
    seen = set()
    ring = []
    for s in sources:
        if s not in seen:
            seen.add(s)
            ring.append(s)
    k = 0
    while ring:
        for v in ring:
            if v not in view.dist or not world.universe(v):
                return
        yield k, ring
        nxt = []
        for v in ring:
            for w in world.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        ring = nxt
        k += 1


def _decide_level(view: View, touched: set[int], k: int):
    """Level-k verdict given the touched cluster ids.

    Returns (kind, payload): ("exact", idx | TIE), ("certified", idx),
    or ("unknown", None).  "exact" carries the true V_k including ties;
    success/failure against the ``diam >= k`` bar is the caller's call.
    """
    certain = [view.clusters[i] for i in touched if view.clusters[i].certain]
    uncertain_ids = [i for i in touched if not view.clusters[i].certain]
    if not uncertain_ids:
        if not certain:
            return "exact", TIE  # vacuous level: nothing to choose from
        best = max(c.diameter for c in certain)
        winners = [i for i in touched if view.clusters[i].diameter == best]
        if len(winners) > 1:
            return "exact", TIE
        return "exact", winners[0]
    if len(uncertain_ids) == 1:
        u = view.clusters[uncertain_ids[0]]
        cmax = max((c.diameter for c in certain), default=-1)
        if u.diameter >= k and u.diameter > cmax:
            return "certified", uncertain_ids[0]
    return "unknown", None


def _candidate_in_view(view: View, anchors, i: int):
    """V_i(anchors) from this view: cluster idx, TIE, or _UNK."""
    touched: set[int] = set()
    for k, ring in _ring_scan(view, anchors):
        for v in ring:
            touched.add(view.label[v])
        if k == i:
            kind, payload = _decide_level(view, touched, i)
            if kind == "exact":
                return payload
            if kind == "certified":
                return payload
            return _UNK
    return _UNK  # ball escaped visibility before reaching radius i


def _parent_in_view(view: View, tip_idx: int):
    """First-success parent scan for a certain tip cluster.

    Returns (k, parent_idx) or _UNK.  Scans k from max(5 * diam, 1); a
    level may fail only when decided exactly, so a DETERMINED answer pins
    the failing levels too.
    """
    tip = view.clusters[tip_idx]
    k0 = max(5 * tip.diameter, 1)
    touched: set[int] = set()
    for k, ring in _ring_scan(view, tip.members):
        for v in ring:
            touched.add(view.label[v])
        if k < k0:
            continue
        kind, payload = _decide_level(view, touched, k)
        if kind == "unknown":
            return _UNK
        if kind == "exact":
            if payload is TIE:
                continue  # failed level, decided exactly
            winner = view.clusters[payload]
            if winner.diameter >= k:
                return k, payload
            continue
        # certified dominance already implies diameter >= k
        return k, payload
    return _UNK


def _lca_in_view(view: View, u, v):
    """Climb both ancestor chains until they meet; _UNK if blocked."""
    iu = view.label.get(u)
    iv = view.label.get(v)
    if iu is None or iv is None:
        raise ValueError("lca endpoints must lie in the world's universe")
    path_u, path_v = [iu], [iv]
    for _ in range(2 * len(view.clusters) + 2):
        tu, tv = path_u[-1], path_v[-1]
        if tu == tv:
            cl = view.clusters[tu]
            return LcaResult(
                path_u=tuple(view.clusters[i].members for i in path_u),
                path_v=tuple(view.clusters[i].members for i in path_v),
                meet_certain=cl.certain,
            )
        du = view.clusters[tu].diameter
        dv = view.clusters[tv].diameter
        grow = []
        if du <= dv:
            grow.append(path_u)
        if dv <= du:
            grow.append(path_v)
        for path in grow:
            tip = view.clusters[path[-1]]
            if not tip.certain:
                return _UNK
            res = _parent_in_view(view, path[-1])
            if res is _UNK:
                return _UNK
            path.append(res[1])
    raise AssertionError("lca climb failed to terminate")


# ---------------------------------------------------------------------------
# online drivers


def explore(world, anchors, fn: Callable[[View], object],
            r0: int = 1, query: tuple = ()) -> Determination:
    """Run ``fn`` on views of doubling radius until it determines.

    ``fn`` returns ``_UNK`` to request a larger view; any other value is
    final.  The schedule is the world's; when it is exhausted the query is
    UNDETERMINED, which for an open world is a statement about the
    configuration, not a failure.
    """
    anchors = tuple(anchors)
    for a in anchors:
        if not world.universe(a):
            raise ValueError(f"anchor {a} is outside the world's universe")
    for r in world.schedule(anchors):
        if r < r0:
            continue
        view = build_view(world, anchors, r)
        res = fn(view)
        if res is not _UNK:
            return Determination(DETERMINED, res, r, anchors, query)
    return Determination(UNDETERMINED, None, None, anchors, query)


def online_candidate(world, anchors, i: int, r0: int = 1) -> Determination:
    """Largest-diameter cluster meeting B_i(anchors); TIE is a valid answer."""
    anchors = tuple(anchors)

    def fn(view):
        res = _candidate_in_view(view, anchors, i)
        if res is _UNK:
            return _UNK
        if res is TIE:
            return TIE
        return view.clusters[res].members

    # rings reach distance i only when the view radius allows it
    return explore(world, anchors, fn, r0=max(r0, i, 1),
                   query=("candidate", anchors, i))


def online_parent(world, anchors, r0: int = 1) -> Determination:
    """Parent of the cluster containing ``anchors``.

    ``anchors`` should be the (known) members of one cluster; the scan
    waits until the view confirms they are co-clustered and the cluster is
    certain, then runs the level scan.
    """
    anchors = tuple(anchors)

    def fn(view):
        tip_idx = view.label[anchors[0]]
        tip = view.clusters[tip_idx]
        if any(a not in tip.members for a in anchors):
            return _UNK
        if not tip.certain:
            return _UNK
        res = _parent_in_view(view, tip_idx)
        if res is _UNK:
            return _UNK
        k, idx = res
        return ParentValue(k=k, members=view.clusters[idx].members)

    return explore(world, anchors, fn, r0=r0, query=("parent", anchors))


def online_lca(world, u, v, r0: int = 1) -> Determination:
    def fn(view):
        return _lca_in_view(view, u, v)

    return explore(world, (u, v), fn, r0=r0, query=("lca", u, v))


# ---------------------------------------------------------------------------
# offline world-as-window counterparts


@dataclass
class OfflineView:
    """A finite world taken at face value: clusters, diameters, geometry.

    ``diam`` may send the designated root to ``float('inf')`` — the stand-in
    for the unbounded cluster, which guarantees every parent scan halts.
    """

    members: dict[int, frozenset]
    diam: dict[int, float]
    label: dict
    metric: object  # .neighbors / .dist / .diameter
    domain: frozenset = field(init=False)

    def __post_init__(self):
        self.domain = frozenset(self.label)


def offline_view(labeling: ClusterLabeling, root_id: Optional[int] = None) -> OfflineView:
    members = {cid: c.members for cid, c in labeling.clusters.items()}
    diam = {cid: float(c.diameter) for cid, c in labeling.clusters.items()}
    if root_id is not None:
        if root_id not in members:
            raise KeyError(f"no cluster {root_id}")
        diam[root_id] = float("inf")
    return OfflineView(
        members=members, diam=diam, label=dict(labeling.labels),
        metric=labeling.config.window,
    )


def default_root(labeling: ClusterLabeling) -> int:
    """Largest-diameter frontier cluster (smallest id on ties)."""
    frontier = labeling.frontier_clusters()
    if not frontier:
        raise ValueError("no frontier cluster to root the tree at")
    return max(frontier, key=lambda c: (c.diameter, -c.id)).id


def _offline_rings(view: OfflineView, sources):
    """Ball rings inside the (geodesically convex) finite domain."""
    seen = set()
    ring = []
    for s in sources:
        if s not in seen:
            seen.add(s)
            ring.append(s)
    k = 0
    while ring:
        yield k, ring
        nxt = []
        for v in ring:
            for w in view.metric.neighbors(v):
                if w in view.domain and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        ring = nxt
        k += 1


def offline_candidate(view: OfflineView, anchors, i: int):
    """Exact V_i(anchors): cluster id or TIE."""
    touched: set[int] = set()
    for k, ring in _offline_rings(view, anchors):
        touched.update(view.label[v] for v in ring)
        if k == i:
            break
    if not touched:
        return TIE
    best = max(view.diam[c] for c in touched)
    winners = [c for c in touched if view.diam[c] == best]
    return winners[0] if len(winners) == 1 else TIE


def offline_parent(view: OfflineView, cid: int) -> tuple[int, int]:
    """(k, parent_id) under the first-success scan; needs a reachable root.

    Raises LookupError when the scan exhausts the domain without any level
    succeeding — that can only happen if no infinite-diameter root was
    designated.
    """
    if view.diam[cid] == float("inf"):
        raise ValueError("the root cluster has no parent")
    members = view.members[cid]
    k0 = max(5 * int(view.diam[cid]), 1)
    touched: set[int] = set()
    last_k = -1
    for k, ring in _offline_rings(view, members):
        touched.update(view.label[v] for v in ring)
        last_k = k
        if k < k0:
            continue
        got = _offline_level(view, touched, k)
        if got is not None:
            return k, got
    # domain exhausted: every touchable cluster is in, only k keeps growing
    k = max(last_k + 1, k0)
    bound = k0 + int(view.metric.diameter(list(view.domain))) + 2
    while k <= bound:
        got = _offline_level(view, touched, k)
        if got is not None:
            return k, got
        k += 1
    raise LookupError(
        f"parent scan for cluster {cid} found no succeeding level; "
        "designate a root cluster with infinite diameter"
    )


def _offline_level(view: OfflineView, touched: set[int], k: int):
    best = max(view.diam[c] for c in touched)
    if best < k:
        return None
    winners = [c for c in touched if view.diam[c] == best]
    return winners[0] if len(winners) == 1 else None


class ClusterTree:
    """Offline parent map with the usual tree utilities."""

    def __init__(self, view: OfflineView, root_id: int,
                 parents: dict[int, tuple[int, int]]):
        self.view = view
        self.root_id = root_id
        self.parents = parents  # cid -> (k, parent cid)
        self.children: dict[int, list[int]] = {cid: [] for cid in view.members}
        for cid, (_, pid) in parents.items():
            self.children[pid].append(cid)
        self.depth: dict[int, int] = {root_id: 0}
        stack = [root_id]
        while stack:
            c = stack.pop()
            for ch in self.children[c]:
                self.depth[ch] = self.depth[c] + 1
                stack.append(ch)
        if len(self.depth) != len(view.members):
            raise AssertionError("parent map does not form a tree on all clusters")

    def chain(self, cid: int) -> list[int]:
        """Path of cluster ids from cid up to and including the root."""
        out = [cid]
        while out[-1] != self.root_id:
            out.append(self.parents[out[-1]][1])
        return out

    def lca(self, a: int, b: int) -> int:
        da, db = self.depth[a], self.depth[b]
        while da > db:
            a = self.parents[a][1]
            da -= 1
        while db > da:
            b = self.parents[b][1]
            db -= 1
        while a != b:
            a = self.parents[a][1]
            b = self.parents[b][1]
        return a

    def lca_paths(self, u, v) -> LcaResult:
        cu = self.view.label[u]
        cv = self.view.label[v]
        meet = self.lca(cu, cv)
        pu, pv = [cu], [cv]
        while pu[-1] != meet:
            pu.append(self.parents[pu[-1]][1])
        while pv[-1] != meet:
            pv.append(self.parents[pv[-1]][1])
        return LcaResult(
            path_u=tuple(self.view.members[c] for c in pu),
            path_v=tuple(self.view.members[c] for c in pv),
            meet_certain=True,
        )


def build_tree(labeling: ClusterLabeling, root_id: Optional[int] = None) -> ClusterTree:
    """Offline tree over a window labeling.

    Without an explicit root the labeling must have exactly one frontier
    cluster; otherwise the choice would silently change the tree, so it is
    the caller's to make (``default_root`` implements the usual policy).
    """
    if root_id is None:
        frontier = labeling.frontier_clusters()
        if len(frontier) != 1:
            raise ValueError(
                f"{len(frontier)} frontier clusters; pass root_id explicitly"
            )
        root_id = frontier[0].id
    view = offline_view(labeling, root_id=root_id)
    parents = {
        cid: offline_parent(view, cid) for cid in view.members if cid != root_id
    }
    tree = ClusterTree(view, root_id, parents)
    # parent diameters strictly increase, so chains cannot cycle
    for cid, (_, pid) in parents.items():
        assert view.diam[pid] > view.diam[cid]
    return tree


# ---------------------------------------------------------------------------
# witness perturbation testing


def perturbable_edges(window, anchors, radius: int, inside: bool = False):
    """Edge ids a certificate with this witness ball never looked at.

    Outside mode (default): both endpoints strictly beyond ``radius`` from
    the anchor set.  Inside mode is the negative control: both endpoints
    within the ball.
    """
    vdist = {
        v: min(window.dist(v, a) for a in anchors) for v in window.vertices
    }
    ids = [
        eid
        for eid, (a, b) in enumerate(window.edges)
        if (
            (vdist[a] <= radius and vdist[b] <= radius)
            if inside
            else (vdist[a] > radius and vdist[b] > radius)
        )
    ]
    return np.array(ids, dtype=int)


def perturbed_config(
    config: PercolationConfig,
    anchors,
    radius: int,
    seed: int,
    trial: int,
    inside: bool = False,
    edge_ids=None,
) -> PercolationConfig:
    """Fair-coin re-randomization of the certificate-irrelevant edges."""
    from .seeding import derive_seed

    if edge_ids is None:
        edge_ids = perturbable_edges(config.window, anchors, radius, inside)
    new = config.open_edges.copy()
    if len(edge_ids):
        rng = np.random.default_rng(derive_seed(seed, trial))
        new[edge_ids] = rng.integers(0, 2, len(edge_ids), dtype=np.uint8).astype(bool)
    return PercolationConfig(config.window, new)


def rerun_query(config: PercolationConfig, query: tuple) -> Determination:
    """Replay a recorded online query against a (possibly perturbed) config."""
    world = OpenWorld(config)
    kind = query[0]
    if kind == "candidate":
        return online_candidate(world, query[1], query[2])
    if kind == "parent":
        return online_parent(world, query[1])
    if kind == "lca":
        return online_lca(world, query[1], query[2])
    raise ValueError(f"unknown query kind {kind!r}")


def witness_perturb_test(
    config: PercolationConfig,
    det: Determination,
    trials: int,
    seed: int,
    inside: bool = False,
    runner: Optional[Callable[[PercolationConfig], Determination]] = None,
) -> int:
    """Count trials whose replayed answer differs from ``det``.

    For a sound implementation the count is 0 with ``inside=False`` for any
    DETERMINED query; a nonzero count is an implementation leak (the answer
    depended on something outside its declared witness ball).
    """
    if not det.determined:
        raise ValueError("perturbation test needs a determined query")
    run = runner if runner is not None else (
        lambda cfg: rerun_query(cfg, det.query)
    )
    ids = perturbable_edges(
        config.window, det.anchors, det.witness_radius, inside=inside
    )
    changed = 0
    for t in range(trials):
        cfg = perturbed_config(
            config, det.anchors, det.witness_radius, seed, t,
            inside=inside, edge_ids=ids,
        )
        if not run(cfg).same_answer(det):
            changed += 1
    return changed
