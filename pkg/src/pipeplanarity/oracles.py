"""Brute-force oracles used for cross-validation.

These deliberately share only the primitives in `core` with the main
pipeline: every answer here comes from exhaustive enumeration over rotation
systems (plus saturation of disconnected clusters), never from the gadget
reductions they are meant to check.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Optional

from .core import (
    CapExceeded,
    FlatClusteredGraph,
    Graph,
    IdAllocator,
    InvalidInstance,
    RotationSystem,
    block_cut_tree,
    classify_components,
    clusters_adjacency,
    connected_components,
    faces_of,
    is_planar_rotation,
)

DEFAULT_ROTATION_CAP = 2_000_000


def rotation_space_size(g: Graph) -> int:
    total = 1
    for v in g.vertices:
        d = g.degree(v)
        if d > 2:
            total *= math.factorial(d - 1)
    return total


def all_rotation_systems(g: Graph) -> Iterator[RotationSystem]:
    """Every rotation system of g, one representative per cyclic class."""
    verts = list(g.vertices)
    choices = []
    for v in verts:
        inc = list(g.incident(v))
        if len(inc) <= 2:
            choices.append([tuple(inc)])
        else:
            first, rest = inc[0], inc[1:]
            choices.append([(first,) + perm for perm in itertools.permutations(rest)])
    for combo in itertools.product(*choices):
        yield RotationSystem.build(dict(zip(verts, combo)))


def planar_rotation_systems(g: Graph, cap: int = DEFAULT_ROTATION_CAP) -> Iterator[RotationSystem]:
    if rotation_space_size(g) > cap:
        raise CapExceeded("rotation space above cap")
    for rot in all_rotation_systems(g):
        if is_planar_rotation(g, rot):
            yield rot


def planar_rotation_systems_pruned(g: Graph, node_cap: int = 50_000_000) -> Iterator[RotationSystem]:
    """Every planar rotation system, enumerated vertex by vertex and pruned
    whenever the induced sub-rotation on the assigned part is already
    nonplanar.  Complete: restrictions of planar embeddings stay planar."""
    if not g.vertices:
        yield RotationSystem.build({})
        return
    order = []
    seen = set()
    for start in sorted(g.vertices, key=lambda v: (-g.degree(v), v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    n = len(order)
    rank = {v: i for i, v in enumerate(order)}
    ends = {eid: (u, v) for eid, u, v in g.edges}
    other = {}
    for eid, (u, v) in ends.items():
        other[(eid, u)] = v
        other[(eid, v)] = u

    # static per level: edges newly closed, cumulative dart list, the expected
    # total face count (2 per edge-bearing component, Euler-corrected)
    closed_at: list[list[int]] = [[] for _ in range(n)]
    for eid, u, v in g.edges:
        closed_at[max(rank[u], rank[v])].append(eid)
    darts_cum: list[list[tuple[int, int]]] = []
    expected_faces: list[int] = []
    uf_parent: dict[int, int] = {}

    def find(x):
        while uf_parent[x] != x:
            uf_parent[x] = uf_parent[uf_parent[x]]
            x = uf_parent[x]
        return x

    comp_edges: dict[int, int] = {}
    comp_verts: dict[int, int] = {}
    acc_darts: list[tuple[int, int]] = []
    for i, v in enumerate(order):
        uf_parent[v] = v
        comp_edges[v] = 0
        comp_verts[v] = 1
        for eid in closed_at[i]:
            a, b = ends[eid]
            acc_darts.append((eid, a))
            acc_darts.append((eid, b))
            ra, rb = find(a), find(b)
            if ra != rb:
                uf_parent[rb] = ra
                comp_edges[ra] += comp_edges[rb] + 1
                comp_verts[ra] += comp_verts[rb]
            else:
                comp_edges[ra] += 1
        darts_cum.append(list(acc_darts))
        roots = {find(u) for u in order[:i + 1]}
        expected_faces.append(sum(2 - comp_verts[r] + comp_edges[r]
                                  for r in roots if comp_edges[r]))

    vis: dict[int, list[int]] = {}
    pos: dict[int, dict[int, int]] = {}
    assigned: dict[int, tuple[int, ...]] = {}
    nodes = 0

    def refresh(u: int, keep: set[int]) -> None:
        r = [e for e in assigned[u] if e in keep]
        vis[u] = r
        pos[u] = {e: k for k, e in enumerate(r)}

    def trace_count(darts: list[tuple[int, int]]) -> int:
        unused = set(darts)
        faces = 0
        while unused:
            d0 = next(iter(unused))
            d = d0
            while True:
                unused.discard(d)
                head = other[d]
                r = vis[head]
                k = pos[head][d[0]]
                d = (r[k - 1], head)
                if d == d0:
                    break
            faces += 1
        return faces

    keep_sets: list[set[int]] = []
    acc_keep: set[int] = set()
    for i in range(n):
        acc_keep |= set(closed_at[i])
        keep_sets.append(set(acc_keep))

    def rec(i: int) -> Iterator[RotationSystem]:
        nonlocal nodes
        if i == n:
            yield RotationSystem.build(assigned)
            return
        v = order[i]
        inc = list(g.incident(v))
        if len(inc) <= 2:
            candidates = [tuple(inc)]
        else:
            first, rest = inc[0], inc[1:]
            candidates = [(first,) + p for p in itertools.permutations(rest)]
        new_edges = closed_at[i]
        keep = keep_sets[i]
        # endpoints other than v whose visible rotation grows at this level
        touched = sorted({w for eid in new_edges for w in ends[eid]} - {v})
        saved = [(u, vis.get(u), pos.get(u)) for u in touched]
        for u in touched:
            refresh(u, keep)
        darts = darts_cum[i]
        want = expected_faces[i]
        for cand in candidates:
            nodes += 1
            if nodes > node_cap:
                raise CapExceeded("rotation enumeration above node cap")
            assigned[v] = cand
            if not new_edges:
                vis[v] = []
                pos[v] = {}
                yield from rec(i + 1)
            else:
                refresh(v, keep)
                if trace_count(darts) == want:
                    yield from rec(i + 1)
            del assigned[v]
        vis.pop(v, None)
        pos.pop(v, None)
        for u, old_vis, old_pos in saved:
            if old_vis is None:
                vis.pop(u, None)
                pos.pop(u, None)
            else:
                vis[u] = old_vis
                pos[u] = old_pos

    yield from rec(0)


def orders_around_vertex_oracle(g: Graph, v: int,
                                cap: int = DEFAULT_ROTATION_CAP) -> set[tuple[int, ...]]:
    """Cyclic orders of edges around v over all planar rotation systems."""
    from .core import canonical_cycle

    return {canonical_cycle(rot.at(v)) for rot in planar_rotation_systems(g, cap)}


# ---------------------------------------------------------------------------
# SEFE oracle
# ---------------------------------------------------------------------------


def oracle_sefe(instance, cap: int = DEFAULT_ROTATION_CAP) -> bool:
    """Exhaustive rotation-pair search for a simultaneous embedding.

    Exact for instances whose common graph is a forest and whose graphs are
    connected; used as ground truth for the search backend on tiny inputs.
    """
    g1 = instance.graph1()
    g2 = instance.graph2()
    common = instance.common_edge_ids()
    if rotation_space_size(g1) * rotation_space_size(g2) > cap:
        raise CapExceeded("rotation pair space above cap")

    def common_profile(rot: RotationSystem, g: Graph) -> tuple:
        prof = []
        for v in g.vertices:
            sub = tuple(e for e in rot.at(v) if e in common)
            prof.append(_canon_cycle_or_line(sub))
        return tuple(prof)

    planar2 = {}
    for rot2 in all_rotation_systems(g2):
        if is_planar_rotation(g2, rot2):
            planar2.setdefault(common_profile(rot2, g2), True)
    for rot1 in all_rotation_systems(g1):
        if not is_planar_rotation(g1, rot1):
            continue
        if common_profile(rot1, g1) in planar2:
            return True
    return False


def _canon_cycle_or_line(seq: tuple[int, ...]) -> tuple[int, ...]:
    if len(seq) <= 2:
        return tuple(sorted(seq))
    from .core import canonical_cycle

    return canonical_cycle(seq)


# ---------------------------------------------------------------------------
# Clustered-planarity oracles
# ---------------------------------------------------------------------------


def _split_trivial_adjacency_blocks(cg: FlatClusteredGraph) -> FlatClusteredGraph:
    """Add a one-vertex cluster across every bridge of the clusters-adjacency
    graph, so that consecutive pipe orders characterize drawings with pipes."""
    current = cg
    while True:
        ga = clusters_adjacency(current)
        if ga.num_vertices() < 2:
            return current
        bridges = [b for b in block_cut_tree(ga).blocks if b.trivial]
        if not bridges:
            return current
        mu, nu = sorted(bridges[0].vertices)
        alloc = IdAllocator(current.max_id() + 1)
        v, u_mu, u_nu = alloc.take(), alloc.take(), alloc.take()
        eta = alloc.take()
        verts = list(current.graph.vertices) + [v, u_mu, u_nu]
        eids = IdAllocator(max([e for e, _, _ in current.graph.edges], default=-1) + 1)
        edges = list(current.graph.edges)
        edges.append((eids.take(), v, u_mu))
        edges.append((eids.take(), v, u_nu))
        assign = {w: current.cluster_of(w) for w in current.graph.vertices}
        assign[v] = eta
        assign[u_mu] = mu
        assign[u_nu] = nu
        current = FlatClusteredGraph.build(Graph.build(verts, edges), assign)


def _saturations(cg: FlatClusteredGraph) -> Iterator[Graph]:
    """Graphs obtained by connecting each cluster's components with added
    intra-cluster edges (every tree over the components, every attachment)."""
    per_cluster: list[list[list[tuple[int, int]]]] = []
    for c in cg.clusters:
        sub = cg.graph.induced(cg.cluster_vertices(c))
        comps = connected_components(sub)
        if len(comps) == 1:
            per_cluster.append([[]])
            continue
        comp_list = [sorted(comp) for comp in comps]
        options: list[list[tuple[int, int]]] = []
        for tree_edges in _labeled_trees(len(comp_list)):
            endpoint_choices = []
            for i, j in tree_edges:
                endpoint_choices.append(
                    [(u, v) for u in comp_list[i] for v in comp_list[j]])
            for combo in itertools.product(*endpoint_choices):
                options.append(list(combo))
        per_cluster.append(options)
    alloc_base = max([e for e, _, _ in cg.graph.edges], default=-1) + 1
    for combo in itertools.product(*per_cluster):
        new_edges = list(cg.graph.edges)
        eid = alloc_base
        ok = True
        seen = {(u, v) for _, u, v in cg.graph.edges}
        for group in combo:
            for u, v in group:
                pair = (min(u, v), max(u, v))
                if pair in seen:
                    ok = False
                    break
                seen.add(pair)
                new_edges.append((eid, pair[0], pair[1]))
                eid += 1
            if not ok:
                break
        if ok:
            yield Graph.build(cg.graph.vertices, new_edges)


def _labeled_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """Edge lists of all labeled trees on vertices 0..n-1."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield _tree_from_sequence(list(seq), n)


def _tree_from_sequence(seq: list[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = sorted(i for i in range(n) if degree[i] == 1)
    import heapq

    heap = list(leaves)
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
    return edges


def cluster_boundary_orders(cg: FlatClusteredGraph, g_sat: Graph,
                            rot: RotationSystem) -> Optional[dict[int, tuple[int, ...]]]:
    """Per-cluster circular order in which the inter-cluster edges leave the
    cluster, or None when some cluster cannot be enclosed by a disk.

    Requires g_sat connected with every cluster inducing a connected
    subgraph.  A cluster is enclosable when all foreign vertices lie in one
    face of its induced sub-embedding and every inter-cluster edge crosses
    into that face.
    """
    from .core import UnionFind, canonical_cycle

    out: dict[int, tuple[int, ...]] = {}
    fs = faces_of(g_sat, rot)
    global_face_of_dart: dict[tuple[int, int], int] = {}
    for fi, walk in enumerate(fs.walks):
        for d in walk:
            global_face_of_dart[d] = fi

    for c in cg.clusters:
        members = set(cg.cluster_vertices(c))
        cluster_edges = {eid for eid, u, v in g_sat.edges if u in members and v in members}

        if len(members) == 1 and not cluster_edges:
            v = next(iter(members))
            out[c] = canonical_cycle(rot.at(v))
            continue
        if not cluster_edges:
            return None  # disconnected cluster; caller saturates first

        # trace the cluster sub-embedding's faces with the global rotation,
        # sweeping over foreign edges and recording boundary crossings
        darts = [(eid, t) for eid in cluster_edges
                 for t in g_sat.ends(eid)]
        face_of_dart: dict[tuple[int, int], int] = {}
        walk_record: dict[int, list[int]] = {}
        unused = set(darts)
        face_idx = 0
        while unused:
            d0 = min(unused)
            crossings: list[int] = []
            d = d0
            while True:
                unused.discard(d)
                face_of_dart[d] = face_idx
                eid, tail = d
                head = g_sat.other_end(eid, tail)
                r = rot.at(head)
                i = r.index(eid)
                while True:
                    i = (i - 1) % len(r)
                    nxt = r[i]
                    if nxt in cluster_edges:
                        break
                    crossings.append(nxt)
                d = (nxt, head)
                if d == d0:
                    break
            walk_record[face_idx] = crossings
            face_idx += 1

        # a global face lies in the sub-face of any cluster dart it carries;
        # faces merged across non-cluster edges share a sub-face
        uf = UnionFind(range(len(fs.walks)))
        for eid, u, v in g_sat.edges:
            if eid not in cluster_edges:
                uf.union(global_face_of_dart[(eid, u)], global_face_of_dart[(eid, v)])
        sub_face_of_class: dict[int, int] = {}
        for d, sf in face_of_dart.items():
            cls = uf.find(global_face_of_dart[d])
            prev = sub_face_of_class.get(cls)
            if prev is not None and prev != sf:
                return None  # inconsistent enclosure
            sub_face_of_class[cls] = sf

        foreign_faces = set()
        for v in g_sat.vertices:
            if v in members:
                continue
            inc = g_sat.incident(v)
            if not inc:
                continue
            cls = uf.find(global_face_of_dart[(inc[0], v)])
            sf = sub_face_of_class.get(cls)
            if sf is None:
                return None
            foreign_faces.add(sf)
            if len(foreign_faces) > 1:
                return None

        inter = [eid for eid, u, v in g_sat.edges if (u in members) != (v in members)]
        crossing_faces = {fidx for fidx, cr in walk_record.items() if cr}
        if inter:
            if len(foreign_faces) != 1:
                return None
            f_out = next(iter(foreign_faces))
            if crossing_faces - {f_out}:
                return None
            order = tuple(walk_record[f_out])
            if sorted(order) != sorted(inter):
                return None
            out[c] = canonical_cycle(order)
        else:
            if len(foreign_faces) > 1:
                return None
            out[c] = ()
    return out


def _pipe_consecutive(cg: FlatClusteredGraph, orders: dict[int, tuple[int, ...]]) -> bool:
    for c, order in orders.items():
        n = len(order)
        if n <= 2:
            continue
        pos = {e: i for i, e in enumerate(order)}
        by_target: dict[int, list[int]] = {}
        for eid in order:
            u, v = cg.graph.ends(eid)
            target = cg.cluster_of(v) if cg.cluster_of(u) == c else cg.cluster_of(u)
            by_target.setdefault(target, []).append(pos[eid])
        from .core import is_cyclic_arc as _is_cyclic_arc

        for positions in by_target.values():
            if not _is_cyclic_arc(positions, n):
                return False
    return True


def realizable_order_profiles(cg: FlatClusteredGraph, cap: int = 10 ** 15,
                              require_pipes: bool = False) -> Iterator[dict[int, tuple[int, ...]]]:
    """All per-cluster boundary orders realizable by some clustered-planar
    drawing, found by exhaustive saturation and rotation enumeration."""
    seen = set()
    for g_sat in _saturations(cg):
        if rotation_space_size(g_sat) > cap:
            raise CapExceeded("rotation space above cap")
        for rot in planar_rotation_systems_pruned(g_sat):
            orders = cluster_boundary_orders(cg, g_sat, rot)
            if orders is None:
                continue
            if require_pipes and not _pipe_consecutive(cg, orders):
                continue
            key = tuple(sorted(orders.items()))
            if key not in seen:
                seen.add(key)
                yield orders


def oracle_cplanarity(cg: FlatClusteredGraph, cap: int = 10 ** 15) -> bool:
    """Flat clustered planarity by exhaustive search."""
    for _ in realizable_order_profiles(cg, cap):
        return True
    return False


def oracle_cplanarity_pipes(cg: FlatClusteredGraph, cap: int = 10 ** 15) -> bool:
    """Clustered planarity with pipes by exhaustive search.

    Bridges of the clusters-adjacency graph are split first so that the
    per-neighbor consecutiveness condition characterizes pipe drawings.
    """
    normalized = _split_trivial_adjacency_blocks(cg)
    for _ in realizable_order_profiles(normalized, cap, require_pipes=True):
        return True
    return False
