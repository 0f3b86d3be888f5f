"""Clustered planarity with pipes, the pipe order around clusters free.

The decision enumerates, per cluster, every rooted tree over its multi-edge
components (all labeled trees, each rooting tried, equivalent rootings
deduplicated), pairs each combination with the unique per-neighbor
consecutiveness tree, and hands the result to the inclusion-constrained
decision.  Bridges of the clusters-adjacency graph are split off first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .core import (
    CapExceeded,
    FlatClusteredGraph,
    Graph,
    IdAllocator,
    InvalidInstance,
    block_cut_tree,
    canonical_cycle,
    classify_components,
    clusters_adjacency,
    connected_components,
    faces_of,
    is_cyclic_arc,
    validate_assumptions,
)
from .inclusion import (
    ClusterOrderWitness,
    IcpInstance,
    IcpVerdict,
    RootedTree,
    decide_icp,
    default_anchor,
    star_tree,
)
from .sefe import Budget


@dataclass(frozen=True)
class FptParameters:
    max_multi_edge_components: int   # over clusters
    clusters_with_two_or_more: int


def compute_parameters(cg: FlatClusteredGraph) -> FptParameters:
    infos = classify_components(cg)
    per_cluster: dict[int, int] = {mu: 0 for mu in cg.clusters}
    for i in infos:
        if i.multi_edge:
            per_cluster[i.cluster] += 1
    counts = list(per_cluster.values())
    return FptParameters(
        max_multi_edge_components=max(counts) if counts else 0,
        clusters_with_two_or_more=sum(1 for c in counts if c >= 2),
    )


# ---------------------------------------------------------------------------
# Bridge splitting
# ---------------------------------------------------------------------------


def remove_trivial_blocks(cg: FlatClusteredGraph) -> tuple[FlatClusteredGraph, dict]:
    """Equivalent instance whose clusters-adjacency graph has no bridge.

    Every bridge gets a fresh one-vertex cluster tied to fresh single-edge
    vertices on both sides, turning the bridge into a triangle; the multi-edge
    component counts of existing clusters are unchanged and the new cluster
    carries exactly one.
    """
    current = cg
    added: dict = {"clusters": [], "vertices": []}
    while True:
        ga = clusters_adjacency(current)
        if ga.num_vertices() < 2:
            return current, added
        bridges = [b for b in block_cut_tree(ga).blocks if b.trivial]
        if not bridges:
            return current, added
        mu, nu = sorted(bridges[0].vertices)
        alloc = IdAllocator(current.max_id() + 1)
        v, u_mu, u_nu, eta = alloc.take(), alloc.take(), alloc.take(), alloc.take()
        eids = IdAllocator(max([e for e, _, _ in current.graph.edges], default=-1) + 1)
        edges = list(current.graph.edges)
        edges.append((eids.take(), v, u_mu))
        edges.append((eids.take(), v, u_nu))
        assign = {w: current.cluster_of(w) for w in current.graph.vertices}
        assign.update({v: eta, u_mu: mu, u_nu: nu})
        verts = list(current.graph.vertices) + [v, u_mu, u_nu]
        added["clusters"].append(eta)
        added["vertices"].extend([v, u_mu, u_nu])
        current = FlatClusteredGraph.build(Graph.build(verts, edges), assign)


# ---------------------------------------------------------------------------
# Neighbor trees for pipes and component-tree enumeration
# ---------------------------------------------------------------------------


def pipe_neighbor_tree(cg: FlatClusteredGraph, mu: int) -> RootedTree:
    """Depth-two tree: one child per adjacent cluster holding that pipe's
    edge leaves; consistency with it is per-neighbor consecutiveness."""
    inter: dict[int, int] = {}
    for v in cg.cluster_vertices(mu):
        for e in cg.incident_inter_edges(v):
            a, b = cg.graph.ends(e)
            inter[e] = cg.cluster_of(b) if cg.cluster_of(a) == mu else cg.cluster_of(a)
    root = ("pipe-root", mu)
    parent: dict = {}
    leaf_edge: dict = {}
    for tgt in sorted(set(inter.values())):
        parent[("cluster", tgt)] = root
    for e, tgt in sorted(inter.items()):
        parent[("leaf", e)] = ("cluster", tgt)
        leaf_edge[("leaf", e)] = e
    return RootedTree.build(root, parent, leaf_edge)


def labeled_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """Edge lists of every labeled tree on 0..n-1, by sequence order."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    import heapq

    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        heap = [i for i in range(n) if degree[i] == 1]
        heapq.heapify(heap)
        for x in seq:
            leaf = heapq.heappop(heap)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(heap, x)
        u = heapq.heappop(heap)
        v = heapq.heappop(heap)
        edges.append((min(u, v), max(u, v)))
        yield edges


DEFAULT_COMPONENT_CAP = 8


def enumerate_component_trees(cg: FlatClusteredGraph, mu: int,
                              cap: int = DEFAULT_COMPONENT_CAP) -> list[RootedTree]:
    """Rooted component trees of a cluster: all labeled trees over its
    multi-edge components, each component tried as root, rootings with
    identical constraint families deduplicated."""
    infos = [i for i in classify_components(cg)
             if i.cluster == mu and i.multi_edge]
    k = len(infos)
    if k == 0:
        return [RootedTree.empty()]
    keys = sorted((mu, min(i.vertices)) for i in infos)
    edges_of = {}
    for i in infos:
        edges_of[(mu, min(i.vertices))] = sorted(i.inter_edges)
    if k == 1:
        return [star_tree(keys[0], edges_of[keys[0]])]
    if k > cap:
        raise CapExceeded(f"cluster {mu} has {k} multi-edge components, cap {cap}")

    out: list[RootedTree] = []
    seen_signatures = set()
    for tree_edges in labeled_trees(k):
        adjacency: dict[int, list[int]] = {i: [] for i in range(k)}
        for a, b in tree_edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        for root_idx in range(k):
            parent: dict = {}
            order = [root_idx]
            seen = {root_idx}
            while order:
                cur = order.pop()
                for nxt in adjacency[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        parent[keys[nxt]] = keys[cur]
                        order.append(nxt)
            leaf_edge: dict = {}
            for key in keys:
                for e in edges_of[key]:
                    leaf = ("leaf", e)
                    parent[leaf] = key
                    leaf_edge[leaf] = e
            tree = RootedTree.build(keys[root_idx], parent, leaf_edge)
            anchor_edges = edges_of[keys[root_idx]]
            signature = (
                frozenset(tree.subtree_leaf_edges(n) for n in tree.internal_nodes()),
                min(anchor_edges),
            )
            if signature in seen_signatures:
                continue
            seen_signatures.add(signature)
            out.append(tree)
    return out


# ---------------------------------------------------------------------------
# Embedded-pipes instances reduce to free-pipes instances
# ---------------------------------------------------------------------------


def reduce_embedded_to_pipes(inst) -> tuple[FlatClusteredGraph, dict]:
    """Pin the pipe embedding by triangulating the clusters-adjacency graph:
    each added adjacency receives a fresh single-edge component on both
    sides, leaving multi-edge component counts unchanged."""
    from .embedded_pipes import EmbeddedPipesInstance

    assert isinstance(inst, EmbeddedPipesInstance)
    cg = inst.clustered
    ga = inst.adjacency_graph()
    if ga.num_vertices() <= 2:
        return cg, {"added_adjacencies": []}

    rot = inst.adjacency_rotation
    editor_edges = list(ga.edges)
    eids = IdAllocator(ga.max_id() + 1)
    rot_map = {v: list(rot.at(v)) for v in ga.vertices}
    existing = {(u, v) for _, u, v in ga.edges}

    def current_graph():
        return Graph.build(ga.vertices, editor_edges)

    def refresh_faces():
        from .core import RotationSystem

        return faces_of(current_graph(),
                        RotationSystem.build({v: tuple(r) for v, r in rot_map.items()}))

    added = []
    while True:
        fs = refresh_faces()
        target = None
        for walk in sorted(fs.walks, key=lambda w: min(w)):
            if len(walk) > 3:
                target = walk
                break
        if target is None:
            break
        g_now = current_graph()
        verts_on = []
        for e_w, tail in target:
            verts_on.append(g_now.other_end(e_w, tail))
        L = len(verts_on)
        chord = None
        for i in range(L):
            x, z = verts_on[i], verts_on[(i + 2) % L]
            if x != z and (min(x, z), max(x, z)) not in existing:
                chord = (i, x, z)
                break
        if chord is None:
            raise InvalidInstance("clusters-adjacency face cannot be triangulated")
        i, x, z = chord
        eid = eids.take()
        editor_edges.append((eid, min(x, z), max(x, z)))
        existing.add((min(x, z), max(x, z)))
        added.append((x, z))
        # rotation insertion at the face corners
        for vv, arriving in ((x, target[i][0]), (z, target[(i + 2) % L][0])):
            r = rot_map[vv]
            r.insert(r.index(arriving), eid)

    # add a single-edge component per new adjacency
    alloc = IdAllocator(cg.max_id() + 1)
    new_eids = IdAllocator(max([e for e, _, _ in cg.graph.edges], default=-1) + 1)
    verts = list(cg.graph.vertices)
    edges = list(cg.graph.edges)
    assign = {v: cg.cluster_of(v) for v in cg.graph.vertices}
    for mu, nu in added:
        a, b = alloc.take(), alloc.take()
        verts.extend((a, b))
        assign[a] = mu
        assign[b] = nu
        edges.append((new_eids.take(), a, b))
    out = FlatClusteredGraph.build(Graph.build(verts, edges), assign)
    return out, {"added_adjacencies": added}


# ---------------------------------------------------------------------------
# Decision driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipesVerdict:
    status: str
    witness: Optional[ClusterOrderWitness]
    parameters: FptParameters
    icp_calls: int
    tree_counts: tuple[tuple[int, int], ...]       # cluster -> labeled tree count
    rooting_counts: tuple[tuple[int, int], ...]    # cluster -> rooted trees kept
    nodes: int
    elapsed_ms: int
    normalized: Optional[FlatClusteredGraph] = None


def decide_pipes(cg: FlatClusteredGraph, budget: Optional[Budget] = None,
                 component_cap: int = DEFAULT_COMPONENT_CAP) -> PipesVerdict:
    """Decide clustered planarity with pipes by enumerating component trees.

    yes iff some combination of rooted component trees, together with the
    per-neighbor consecutiveness trees, passes the inclusion-constrained
    decision; witness orders are per-neighbor consecutive.
    """
    violations = validate_assumptions(cg)
    if violations:
        raise InvalidInstance("; ".join(v.detail for v in violations))
    params = compute_parameters(cg)
    normalized, _ = remove_trivial_blocks(cg)

    clusters = normalized.clusters
    y_trees = {mu: pipe_neighbor_tree(normalized, mu) for mu in clusters}
    per_cluster_trees: dict[int, list[RootedTree]] = {}
    tree_counts: dict[int, int] = {}
    rooting_counts: dict[int, int] = {}
    infos = classify_components(normalized)
    for mu in clusters:
        k = sum(1 for i in infos if i.cluster == mu and i.multi_edge)
        options = enumerate_component_trees(normalized, mu, cap=component_cap)
        per_cluster_trees[mu] = options
        tree_counts[mu] = max(1, k ** (k - 2)) if k >= 2 else 1
        rooting_counts[mu] = len(options)

    pending: list[IcpInstance] = []
    for combo in itertools.product(*(per_cluster_trees[mu] for mu in clusters)):
        x_trees = dict(zip(clusters, combo))
        anchors = {mu: default_anchor(normalized, mu, x_trees[mu]) for mu in clusters}
        pending.append(IcpInstance(
            normalized,
            tuple(sorted(x_trees.items())),
            tuple(sorted(y_trees.items())),
            tuple(sorted(anchors.items())),
        ))

    # escalate budgets across the combinations: an easy witness in any of
    # them settles the instance, and a completed search pass is an exact no
    full = budget or Budget()
    icp_calls = 0
    total_nodes = 0
    total_ms = 0
    for level in (max(2000, full.max_nodes // 64), max(2000, full.max_nodes // 8),
                  full.max_nodes):
        still: list[IcpInstance] = []
        for icp in pending:
            icp_calls += 1
            verdict = decide_icp(icp, Budget(level, full.max_ms))
            total_nodes += verdict.nodes
            total_ms += verdict.elapsed_ms
            if verdict.status == "yes":
                return PipesVerdict("yes", verdict.witness, params, icp_calls,
                                    tuple(sorted(tree_counts.items())),
                                    tuple(sorted(rooting_counts.items())),
                                    total_nodes, total_ms, normalized)
            if verdict.status == "budget_exceeded":
                still.append(icp)
        pending = still
        if not pending:
            return PipesVerdict("no", None, params, icp_calls,
                                tuple(sorted(tree_counts.items())),
                                tuple(sorted(rooting_counts.items())),
                                total_nodes, total_ms, normalized)
    return PipesVerdict("budget_exceeded", None, params, icp_calls,
                        tuple(sorted(tree_counts.items())),
                        tuple(sorted(rooting_counts.items())),
                        total_nodes, total_ms, normalized)


def witness_is_pipe_consistent(cg: FlatClusteredGraph,
                               witness: ClusterOrderWitness) -> bool:
    """Every neighbor's edges consecutive in each cluster's order."""
    for mu, order in witness.orders:
        n = len(order)
        if n <= 2:
            continue
        pos = {e: i for i, e in enumerate(order)}
        by_target: dict[int, list[int]] = {}
        for e in order:
            a, b = cg.graph.ends(e)
            tgt = cg.cluster_of(b) if cg.cluster_of(a) == mu else cg.cluster_of(a)
            by_target.setdefault(tgt, []).append(pos[e])
        for positions in by_target.values():
            # linear orders come from cutting the boundary at the anchor
            if not is_cyclic_arc(positions, n):
                return False
    return True
