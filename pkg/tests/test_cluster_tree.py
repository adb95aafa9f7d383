import numpy as np
import pytest

from percsim.cluster_tree import (
    TIE,
    BcWorld,
    OpenWorld,
    build_tree,
    build_view,
    default_root,
    offline_candidate,
    offline_parent,
    offline_view,
    online_candidate,
    online_lca,
    online_parent,
    witness_perturb_test,
)
from percsim.lattice import BoxWindow
from percsim.percolation import PercolationConfig, bernoulli, components


# --- independent brute-force oracles (direct definitions, no rings) --------


def brute_touched(labeling, anchors, k):
    w = labeling.config.window
    out = set()
    for cid, info in labeling.clusters.items():
        if min(w.dist(m, a) for m in info.members for a in anchors) <= k:
            out.add(cid)
    return out


def brute_candidate(labeling, anchors, i, inf_root=None):
    diam = {
        cid: (float("inf") if cid == inf_root else c.diameter)
        for cid, c in labeling.clusters.items()
    }
    touched = brute_touched(labeling, anchors, i)
    best = max(diam[c] for c in touched)
    winners = [c for c in touched if diam[c] == best]
    return winners[0] if len(winners) == 1 else TIE


def brute_parent(labeling, cid, root_id):
    diam = {
        c: (float("inf") if c == root_id else info.diameter)
        for c, info in labeling.clusters.items()
    }
    members = labeling.clusters[cid].members
    k = max(5 * labeling.clusters[cid].diameter, 1)
    while True:
        touched = brute_touched(labeling, members, k)
        best = max(diam[c] for c in touched)
        winners = [c for c in touched if diam[c] == best]
        if len(winners) == 1 and best >= k:
            return k, winners[0]
        k += 1
        assert k < 500, "runaway brute-force scan"


def window_cluster_of(labeling, members):
    return labeling.labels[next(iter(members))]


# --- offline ---------------------------------------------------------------


def test_offline_candidate_matches_brute_force():
    for seed in range(15):
        lab = components(bernoulli(BoxWindow((8, 8)), 0.45, seed))
        view = offline_view(lab)
        anchors = (min(lab.labels),)
        for i in range(0, 8):
            assert offline_candidate(view, anchors, i) == brute_candidate(
                lab, anchors, i
            )


def test_offline_parent_matches_brute_force():
    for seed in range(10):
        lab = components(bernoulli(BoxWindow((9, 7)), 0.5, seed + 100))
        root = default_root(lab)
        view = offline_view(lab, root_id=root)
        for cid in lab.clusters:
            if cid == root:
                continue
            assert offline_parent(view, cid) == brute_parent(lab, cid, root)


def test_tree_structure_invariants():
    for seed in (3, 11, 27):
        lab = components(bernoulli(BoxWindow((10, 10)), 0.45, seed))
        root = default_root(lab)
        tree = build_tree(lab, root_id=root)
        for cid, (k, pid) in tree.parents.items():
            # the scan starts at max(5 diam, 1) and parents strictly out-diameter children
            assert k >= max(5 * lab.clusters[cid].diameter, 1)
            assert tree.view.diam[pid] > tree.view.diam[cid]
        # every chain terminates at the root
        for cid in lab.clusters:
            assert tree.chain(cid)[-1] == root


def test_build_tree_requires_unique_frontier():
    lab = components(bernoulli(BoxWindow((8, 8)), 0.45, 0))
    assert len(lab.frontier_clusters()) > 1
    with pytest.raises(ValueError):
        build_tree(lab)
    build_tree(lab, root_id=default_root(lab))  # explicit root is fine


def test_offline_parent_requires_root():
    w = BoxWindow((5, 5))
    cfg = PercolationConfig(w, np.zeros(w.n_edges, dtype=bool))
    lab = components(cfg)
    view = offline_view(lab)  # no infinite-diameter root designated
    with pytest.raises(LookupError):
        offline_parent(view, min(lab.clusters))


def test_lca_of_same_cluster_is_trivial():
    lab = components(bernoulli(BoxWindow((8, 8)), 0.6, 5))
    tree = build_tree(lab, root_id=default_root(lab))
    big = max(lab.clusters.values(), key=lambda c: len(c.members))
    u, v = sorted(big.members)[:2]
    res = tree.lca_paths(u, v)
    assert res.path_u == res.path_v == (big.members,)


# --- views and certificates -------------------------------------------------


def test_view_certainty_flags():
    w = BoxWindow((9, 9))
    cfg = PercolationConfig(w, np.zeros(w.n_edges, dtype=bool))
    # an interior dimer far from the boundary
    cfg.open_edges[w.edge_index[((4, 4), (5, 4))]] = True
    world = OpenWorld(cfg)
    view = build_view(world, ((4, 4),), 2)
    c = view.cluster_of((4, 4))
    assert c.members == frozenset({(4, 4), (5, 4)})
    assert c.certain  # all incident edges known closed
    # the same dimer near the window edge is uncertain at any radius
    cfg2 = PercolationConfig(w, np.zeros(w.n_edges, dtype=bool))
    cfg2.open_edges[w.edge_index[((0, 4), (1, 4))]] = True
    view2 = build_view(OpenWorld(cfg2), ((0, 4),), 3)
    assert not view2.cluster_of((0, 4)).certain


def test_open_edge_beyond_view_marks_uncertain():
    w = BoxWindow((15, 15))
    cfg = PercolationConfig(w, np.zeros(w.n_edges, dtype=bool))
    # a long open path heading away from the anchor
    for x in range(7, 12):
        cfg.open_edges[w.edge_index[((x, 7), (x + 1, 7))]] = True
    view = build_view(OpenWorld(cfg), ((7, 7),), 2)
    assert not view.cluster_of((7, 7)).certain  # continues past the horizon
    view_big = build_view(OpenWorld(cfg), ((7, 7),), 6)
    assert view_big.cluster_of((7, 7)).certain


# --- online vs offline agreement --------------------------------------------


def test_online_candidate_agrees_when_determined():
    checked = 0
    for seed in range(25):
        lab = components(bernoulli(BoxWindow((11, 11)), 0.45, seed))
        world = OpenWorld(lab.config)
        for cid in sorted(lab.clusters)[:6]:
            anchors = tuple(sorted(lab.clusters[cid].members))[:2]
            for i in (1, 2, 3):
                det = online_candidate(world, anchors, i)
                if not det.determined:
                    continue
                checked += 1
                offline = brute_candidate(lab, anchors, i)
                if det.value is TIE:
                    assert offline is TIE
                else:
                    assert offline == window_cluster_of(lab, det.value)
    assert checked > 50


def test_online_parent_agrees_with_offline_tree():
    checked = 0
    for seed in range(30):
        lab = components(bernoulli(BoxWindow((13, 13)), 0.42, seed))
        root = default_root(lab)
        view = offline_view(lab, root_id=root)
        world = OpenWorld(lab.config)
        for cid, info in lab.clusters.items():
            if cid == root:
                continue
            det = online_parent(world, tuple(sorted(info.members)))
            if not det.determined:
                continue
            checked += 1
            k_off, pid = offline_parent(view, cid)
            assert det.value.k == k_off
            assert det.value.members <= lab.clusters[pid].members
    assert checked > 60


def test_online_lca_agrees_with_offline_paths():
    checked = 0
    for seed in range(25):
        lab = components(bernoulli(BoxWindow((12, 12)), 0.45, seed + 7))
        root = default_root(lab)
        tree = build_tree(lab, root_id=root)
        world = OpenWorld(lab.config)
        rng = np.random.default_rng(seed)
        verts = lab.config.window.vertices
        for _ in range(6):
            u, v = (verts[rng.integers(len(verts))] for _ in range(2))
            det = online_lca(world, u, v)
            if not det.determined:
                continue
            checked += 1
            off = tree.lca_paths(u, v)
            # certain online path elements are complete clusters
            assert det.value.path_u[:-1] == off.path_u[: len(det.value.path_u) - 1]
            assert det.value.path_v[:-1] == off.path_v[: len(det.value.path_v) - 1]
            # the meets name the same window cluster
            assert window_cluster_of(lab, det.value.meet) == window_cluster_of(
                lab, off.meet
            )
    assert checked > 25


def test_online_witness_radius_is_scheduled():
    lab = components(bernoulli(BoxWindow((16, 16)), 0.4, 1))
    world = OpenWorld(lab.config)
    sched = set(world.schedule(((8, 8),)))
    for cid in sorted(lab.clusters)[:20]:
        det = online_parent(world, tuple(sorted(lab.clusters[cid].members)))
        if det.determined:
            assert det.witness_radius in sched


def test_online_queries_are_reproducible():
    lab = components(bernoulli(BoxWindow((12, 12)), 0.45, 9))
    world = OpenWorld(lab.config)
    anchors = ((5, 5),)
    d1 = online_candidate(world, anchors, 2)
    d2 = online_candidate(world, anchors, 2)
    assert d1 == d2


def test_frontier_cluster_parent_is_undetermined():
    lab = components(bernoulli(BoxWindow((10, 10)), 0.45, 4))
    big_frontier = max(lab.frontier_clusters(), key=lambda c: c.diameter)
    det = online_parent(OpenWorld(lab.config), tuple(sorted(big_frontier.members)))
    assert not det.determined


def test_online_candidate_certifies_tie():
    w = BoxWindow((13, 13))
    cfg = PercolationConfig(w, np.zeros(w.n_edges, dtype=bool))
    # two dimers symmetric about the anchor, all else closed
    cfg.open_edges[w.edge_index[((4, 6), (4, 7))]] = True
    cfg.open_edges[w.edge_index[((8, 6), (8, 7))]] = True
    det = online_candidate(OpenWorld(cfg), ((6, 6),), 2)
    assert det.determined
    assert det.value is TIE


# --- witness perturbation ----------------------------------------------------


def test_outside_perturbations_never_change_determined_answers():
    tested = 0
    for seed in range(12):
        lab = components(bernoulli(BoxWindow((13, 13)), 0.45, seed + 50))
        world = OpenWorld(lab.config)
        for cid in sorted(lab.clusters)[:4]:
            members = tuple(sorted(lab.clusters[cid].members))
            for det in (
                online_parent(world, members),
                online_candidate(world, members[:1], 2),
            ):
                if det.determined:
                    assert (
                        witness_perturb_test(lab.config, det, trials=20, seed=seed)
                        == 0
                    )
                    tested += 1
    assert tested > 10


def test_inside_perturbations_are_detected():
    # a certain interior cluster whose parent is decided by nearby structure;
    # rerolling the inside must change some replayed answer
    lab = components(bernoulli(BoxWindow((13, 13)), 0.45, 55))
    world = OpenWorld(lab.config)
    hits = 0
    for cid in sorted(lab.clusters):
        det = online_parent(world, tuple(sorted(lab.clusters[cid].members)))
        if det.determined:
            hits += witness_perturb_test(
                lab.config, det, trials=10, seed=3, inside=True
            )
    assert hits > 0


# --- boundary-condition worlds ----------------------------------------------


def _wired_world_fixture():
    # a handful of closed sites carving finite clusters out of a wired plane
    closed_sites = {
        (x, y): False for x in range(-3, 4) for y in range(-3, 4)
    }
    open_inside = {(0, 0): True, (1, 1): True}
    sites = {**closed_sites, **open_inside}
    return BcWorld(0, sites, beyond_open=True)


def test_bcworld_edge_states():
    world = _wired_world_fixture()
    assert world.edge_state((-1, -1), (0, 0)) == 1  # site (0,0) open
    assert world.edge_state((1, 1), (2, 2)) == 0  # site (2,2) closed
    assert world.edge_state((9, 9), (10, 10)) == 1  # beyond: wired
    assert world.edge_state((0, 0), (2, 2)) == -1  # not an edge


def test_bcworld_online_parent_matches_materialized_truth():
    world = _wired_world_fixture()
    view, root = world.materialize((0, 0), 24)
    assert root is not None
    for v in [(0, 0), (-1, -1), (2, 0)]:
        cid = view.label[v]
        if view.diam[cid] == float("inf"):
            continue
        det = online_parent(world, tuple(sorted(view.members[cid])))
        assert det.determined
        k_off, pid = offline_parent(view, cid)
        assert det.value.k == k_off
        assert det.value.members <= view.members[pid]


def test_bcworld_free_boundary_leaves_isolated_vertices():
    world = BcWorld(0, {(0, 0): True}, beyond_open=False)
    view = build_view(world, ((-1, -1),), 3)
    c = view.cluster_of((-1, -1))
    assert c.members == frozenset({(-1, -1), (0, 0)})
    assert c.certain
    far = view.cluster_of((3, 3))
    assert far.members == frozenset({(3, 3)})
