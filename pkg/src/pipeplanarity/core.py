"""Graph, rotation-system, and flat-clustered-graph primitives.

Everything here is immutable after construction and safe to share across
threads; all operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class InvalidInstance(ValueError):
    """An input object violates a structural invariant."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured cap."""


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected graph with stable integer vertex and edge ids.

    Self-loops are always rejected.  Parallel edges are rejected unless the
    graph is flagged as a multigraph (only gadget constructions use that).
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (eid, u, v) with u < v
    multigraph: bool = False
    _adj: dict = field(init=False, compare=False, repr=False, default=None)
    _ends: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise InvalidInstance("duplicate vertex ids")
        ends: dict[int, tuple[int, int]] = {}
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        seen_pairs = set()
        for eid, u, v in self.edges:
            if eid in ends:
                raise InvalidInstance(f"duplicate edge id {eid}")
            if u == v:
                raise InvalidInstance(f"self-loop at vertex {u}")
            if u not in vset or v not in vset:
                raise InvalidInstance(f"edge {eid} has undeclared endpoint")
            pair = (u, v) if u < v else (v, u)
            if pair in seen_pairs and not self.multigraph:
                raise InvalidInstance(f"parallel edge {eid} on {pair}")
            seen_pairs.add(pair)
            ends[eid] = pair
            adj[pair[0]].append((eid, pair[1]))
            adj[pair[1]].append((eid, pair[0]))
        for v in adj:
            adj[v].sort()
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_ends", ends)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def build(vertices: Iterable[int], edges: Iterable[tuple[int, int, int]],
              multigraph: bool = False) -> "Graph":
        vs = tuple(sorted(set(vertices)))
        es = tuple(sorted((eid, min(u, v), max(u, v)) for eid, u, v in edges))
        return Graph(vs, es, multigraph)

    @staticmethod
    def from_pairs(vertices: Iterable[int], pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Edge ids assigned densely in the order the pairs are given."""
        return Graph.build(vertices, [(i, u, v) for i, (u, v) in enumerate(pairs)])

    # -- accessors -----------------------------------------------------------

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(eid for eid, _, _ in self.edges)

    def ends(self, eid: int) -> tuple[int, int]:
        return self._ends[eid]

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def other_end(self, eid: int, v: int) -> int:
        u, w = self._ends[eid]
        if v == u:
            return w
        if v == w:
            return u
        raise InvalidInstance(f"vertex {v} not an endpoint of edge {eid}")

    def incident(self, v: int) -> tuple[int, ...]:
        """Edge ids at v, sorted."""
        return tuple(eid for eid, _ in self._adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted({w for _, w in self._adj[v]}))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def num_vertices(self) -> int:
        return len(self.vertices)

    def num_edges(self) -> int:
        return len(self.edges)

    def max_id(self) -> int:
        ids = [-1]
        ids.extend(self.vertices)
        ids.extend(eid for eid, _, _ in self.edges)
        return max(ids)

    def induced(self, keep: Iterable[int]) -> "Graph":
        ks = set(keep)
        return Graph.build(
            [v for v in self.vertices if v in ks],
            [(eid, u, v) for eid, u, v in self.edges if u in ks and v in ks],
            self.multigraph,
        )

    def without_vertex(self, v: int) -> "Graph":
        return self.induced([u for u in self.vertices if u != v])


# ---------------------------------------------------------------------------
# Rotation systems and faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic order of incident edge ids at every vertex of a graph."""

    rotations: tuple[tuple[int, tuple[int, ...]], ...]  # (vertex, cyclic edge ids)
    _map: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_map", {v: rot for v, rot in self.rotations})

    @staticmethod
    def build(rot: Mapping[int, Sequence[int]]) -> "RotationSystem":
        return RotationSystem(tuple(sorted((v, tuple(r)) for v, r in rot.items())))

    def at(self, v: int) -> tuple[int, ...]:
        return self._map[v]

    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.rotations)

    def successor(self, v: int, eid: int) -> int:
        rot = self._map[v]
        i = rot.index(eid)
        return rot[(i + 1) % len(rot)]

    def validate(self, g: Graph) -> None:
        if set(self.vertices()) != set(g.vertices):
            raise InvalidInstance("rotation vertex set differs from graph")
        for v, rot in self.rotations:
            if sorted(rot) != sorted(g.incident(v)):
                raise InvalidInstance(f"rotation at {v} does not list its incident edges once each")


@dataclass(frozen=True)
class FaceStructure:
    """Face walks of an embedded graph.

    Each walk is a cyclic sequence of darts (eid, tail_vertex); every dart of
    the graph occurs in exactly one walk.
    """

    walks: tuple[tuple[tuple[int, int], ...], ...]
    faces_per_component: tuple[tuple[int, int], ...]  # (component index, face count)

    def face_count(self) -> int:
        return len(self.walks)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Partition of the vertex set into connected components (sorted by min id)."""
    seen: set[int] = set()
    out = []
    for start in g.vertices:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    out.sort(key=min)
    return out


def component_index(g: Graph) -> dict[int, int]:
    idx = {}
    for i, comp in enumerate(connected_components(g)):
        for v in comp:
            idx[v] = i
    return idx


def faces_of(g: Graph, rot: RotationSystem) -> FaceStructure:
    """Trace all face walks of the embedding described by ``rot``.

    Convention: after traversing edge e into v, the walk continues along the
    rotation predecessor of e at v.
    """
    rot.validate(g)
    darts = [(eid, v) for eid, u, v in g.edges for v in (u, v)]
    unused = set(darts)
    comp_of = component_index(g)
    walks = []
    for d0 in sorted(darts):
        if d0 not in unused:
            continue
        walk = []
        d = d0
        while True:
            unused.discard(d)
            walk.append(d)
            eid, tail = d
            head = g.other_end(eid, tail)
            r = rot.at(head)
            i = r.index(eid)
            nxt = r[(i - 1) % len(r)]
            d = (nxt, head)
            if d == d0:
                break
        walks.append(tuple(walk))
    counts: dict[int, int] = {}
    for walk in walks:
        counts[comp_of[walk[0][1]]] = counts.get(comp_of[walk[0][1]], 0) + 1
    # components with no edges have a single (empty) face each
    for comp in set(comp_of.values()):
        counts.setdefault(comp, 1)
    return FaceStructure(tuple(walks), tuple(sorted(counts.items())))


def is_planar_rotation(g: Graph, rot: RotationSystem) -> bool:
    """Genus-zero test: every component satisfies V - E + F = 2."""
    fs = faces_of(g, rot)
    comps = connected_components(g)
    comp_of = component_index(g)
    e_count = {i: 0 for i in range(len(comps))}
    for eid, u, v in g.edges:
        e_count[comp_of[u]] += 1
    f_count = dict(fs.faces_per_component)
    for i, comp in enumerate(comps):
        if len(comp) - e_count[i] + f_count.get(i, 1) != 2:
            return False
    return True


# ---------------------------------------------------------------------------
# Blocks and cut vertices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    vertices: frozenset[int]
    edge_ids: frozenset[int]
    trivial: bool  # single edge


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Blocks (maximal biconnected subgraphs) and cut vertices of a connected graph."""
    if len(connected_components(g)) != 1:
        raise InvalidInstance("block decomposition requires a connected graph")
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent_edge: dict[int, Optional[int]] = {}
    cut: set[int] = set()
    blocks: list[Block] = []
    stack: list[tuple[int, int, int]] = []  # edge triples (eid, u, v) as pushed
    counter = itertools.count()

    def emit(marker: tuple[int, int, int]) -> None:
        eids = set()
        verts = set()
        while True:
            entry = stack.pop()
            eids.add(entry[0])
            verts.update(entry[1:])
            if entry == marker:
                break
        blocks.append(Block(frozenset(verts), frozenset(eids), len(eids) == 1))

    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = next(counter)
        parent_edge[root] = None
        work: list[tuple[int, Iterable]] = [(root, iter(g._adj[root]))]
        root_children = 0
        while work:
            v, it = work[-1]
            advanced = False
            for eid, w in it:
                if eid == parent_edge[v]:
                    continue
                if w not in disc:
                    disc[w] = low[w] = next(counter)
                    parent_edge[w] = eid
                    stack.append((eid, v, w))
                    work.append((w, iter(g._adj[w])))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                elif disc[w] < disc[v]:
                    stack.append((eid, v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    emit((parent_edge[v], u, v))
                    if u != root:
                        cut.add(u)
        if root_children >= 2:
            cut.add(root)
    return BlockCutTree(tuple(blocks), frozenset(cut))


def blocks_per_component(g: Graph) -> BlockCutTree:
    """Block decomposition of a possibly disconnected graph."""
    all_blocks: list[Block] = []
    cuts: set[int] = set()
    for comp in connected_components(g):
        sub = g.induced(comp)
        bct = block_cut_tree(sub)
        all_blocks.extend(bct.blocks)
        cuts |= set(bct.cut_vertices)
    return BlockCutTree(tuple(all_blocks), frozenset(cuts))


def is_biconnected(g: Graph) -> bool:
    if g.num_vertices() <= 1:
        return True
    if len(connected_components(g)) != 1:
        return False
    bct = block_cut_tree(g)
    return len(bct.blocks) == 1 and not bct.cut_vertices


def is_forest(g: Graph) -> bool:
    return g.num_edges() == g.num_vertices() - len(connected_components(g))


# ---------------------------------------------------------------------------
# Flat clustered graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatClusteredGraph:
    """A graph plus a flat (height-two) cluster assignment."""

    graph: Graph
    assignment: tuple[tuple[int, int], ...]  # (vertex, cluster id)
    _cluster_of: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        cmap = dict(self.assignment)
        if set(cmap) != set(self.graph.vertices):
            raise InvalidInstance("every vertex must be assigned to exactly one cluster")
        if len(self.assignment) != len(cmap):
            raise InvalidInstance("duplicate cluster assignment")
        if not cmap and self.graph.vertices:
            raise InvalidInstance("empty assignment")
        object.__setattr__(self, "_cluster_of", cmap)

    @staticmethod
    def build(graph: Graph, assignment: Mapping[int, int]) -> "FlatClusteredGraph":
        return FlatClusteredGraph(graph, tuple(sorted(assignment.items())))

    def cluster_of(self, v: int) -> int:
        return self._cluster_of[v]

    @property
    def clusters(self) -> tuple[int, ...]:
        return tuple(sorted({c for _, c in self.assignment}))

    def cluster_vertices(self, c: int) -> tuple[int, ...]:
        return tuple(sorted(v for v, cc in self.assignment if cc == c))

    def inter_cluster_edges(self) -> tuple[int, ...]:
        out = []
        for eid, u, v in self.graph.edges:
            if self._cluster_of[u] != self._cluster_of[v]:
                out.append(eid)
        return tuple(out)

    def incident_inter_edges(self, v: int) -> tuple[int, ...]:
        cv = self._cluster_of[v]
        return tuple(eid for eid in self.graph.incident(v)
                     if self._cluster_of[self.graph.other_end(eid, v)] != cv)

    def max_id(self) -> int:
        return max([self.graph.max_id()] + [c for _, c in self.assignment])


@dataclass(frozen=True)
class ComponentInfo:
    """One connected component of a cluster together with its role flags."""

    cluster: int
    vertices: frozenset[int]
    inter_edges: frozenset[int]
    multi_edge: bool              # at least two incident inter-cluster edges
    passing: bool                 # adjacent to two or more other clusters
    originating_to: Optional[int]  # the unique adjacent cluster, when not passing

    def key(self) -> tuple[int, int]:
        return (self.cluster, min(self.vertices))


def classify_components(cg: FlatClusteredGraph) -> list[ComponentInfo]:
    """Components of every cluster, flagged multi-edge/single-edge and passing/originating."""
    out: list[ComponentInfo] = []
    for c in cg.clusters:
        sub = cg.graph.induced(cg.cluster_vertices(c))
        for comp in connected_components(sub):
            inter = set()
            targets = set()
            for v in comp:
                for eid in cg.incident_inter_edges(v):
                    inter.add(eid)
                    targets.add(cg.cluster_of(cg.graph.other_end(eid, v)))
            out.append(ComponentInfo(
                cluster=c,
                vertices=comp,
                inter_edges=frozenset(inter),
                multi_edge=len(inter) >= 2,
                passing=len(targets) >= 2,
                originating_to=next(iter(targets)) if len(targets) == 1 else None,
            ))
    out.sort(key=lambda ci: ci.key())
    return out


def clusters_adjacency(cg: FlatClusteredGraph) -> Graph:
    """Simple graph on cluster ids with one edge per adjacent cluster pair."""
    pairs = set()
    for eid, u, v in cg.graph.edges:
        cu, cv = cg.cluster_of(u), cg.cluster_of(v)
        if cu != cv:
            pairs.add((min(cu, cv), max(cu, cv)))
    return Graph.from_pairs(cg.clusters, sorted(pairs))


@dataclass(frozen=True)
class AssumptionViolation:
    code: str       # "adjacency-connected" | "no-inter-edge" | "leaf-block" | "single-attachment"
    cluster: Optional[int]
    detail: str


def validate_assumptions(cg: FlatClusteredGraph) -> list[AssumptionViolation]:
    """Check the connectivity and attachment assumptions required by the reductions.

    Returns the (possibly empty) list of violations instead of raising:
    generators only ever emit compliant instances, everything else is reported.
    """
    out: list[AssumptionViolation] = []
    ga = clusters_adjacency(cg)
    if ga.num_vertices() > 1 and len(connected_components(ga)) != 1:
        out.append(AssumptionViolation("adjacency-connected", None,
                                       "clusters-adjacency graph is disconnected"))
    for info in classify_components(cg):
        if not info.inter_edges:
            out.append(AssumptionViolation(
                "no-inter-edge", info.cluster,
                f"component {sorted(info.vertices)} has no inter-cluster edge"))
            continue
        attach = {v for v in info.vertices if cg.incident_inter_edges(v)}
        if len(attach) == 1 and len(info.vertices) > 1:
            out.append(AssumptionViolation(
                "single-attachment", info.cluster,
                f"component {sorted(info.vertices)} attaches through a single vertex"))
        if len(info.vertices) > 1:
            sub = cg.graph.induced(info.vertices)
            bct = block_cut_tree(sub)
            # leaf blocks: blocks containing at most one cut vertex
            for b in bct.blocks:
                if len(b.vertices & bct.cut_vertices) <= 1:
                    ok = any(v not in bct.cut_vertices and cg.incident_inter_edges(v)
                             for v in b.vertices)
                    if not ok:
                        out.append(AssumptionViolation(
                            "leaf-block", info.cluster,
                            f"leaf block {sorted(b.vertices)} has no non-cut vertex "
                            f"with an inter-cluster edge"))
    return out


def canonical_cycle(seq: Sequence) -> tuple:
    """Rotate a directed circular order so its minimum element comes first."""
    seq = tuple(seq)
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def is_cyclic_arc(positions: Iterable[int], n: int) -> bool:
    """Whether the given positions are contiguous on a cycle of length n."""
    ps = sorted(positions)
    if len(ps) in (0, n):
        return True
    gaps = 0
    for i, p in enumerate(ps):
        nxt = ps[(i + 1) % len(ps)]
        if (nxt - p) % n != 1:
            gaps += 1
    return gaps == 1


class UnionFind:
    """Union-find without path compression, supporting O(1) undo."""

    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}
        self.trail: list = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.trail.append(None)
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.trail.append((ra, rb))
        return True

    def undo(self) -> None:
        op = self.trail.pop()
        if op is not None:
            ra, rb = op
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]

    def mark(self) -> int:
        return len(self.trail)

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.undo()


class IdAllocator:
    """Dense fresh-id source starting above an existing id range."""

    def __init__(self, start: int) -> None:
        self._next = start

    def take(self) -> int:
        v = self._next
        self._next += 1
        return v

    def peek(self) -> int:
        return self._next
