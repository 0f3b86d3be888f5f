"""Strip planarity for single-source instances.

An instance maps each vertex to one of k horizontal strips with edges
spanning at most one strip boundary.  Deciding works by repeatedly collapsing
the first strip: the unique source component is replaced by a wheel gadget
realizing exactly the admissible orders of its upward edges, the strip count
drops by one, and a one-strip instance is plain planarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .core import (
    FlatClusteredGraph,
    Graph,
    IdAllocator,
    InvalidInstance,
    block_cut_tree,
    connected_components,
)
from .planarity import is_planar
from .pqtree import planar_orders_around, representative_graph


@dataclass(frozen=True)
class StripInstance:
    graph: Graph
    strip_of: tuple[tuple[int, int], ...]  # vertex -> strip index, 1-based
    _map: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        m = dict(self.strip_of)
        if set(m) != set(self.graph.vertices):
            raise InvalidInstance("every vertex needs a strip")
        if m:
            k = max(m.values())
            used = set(m.values())
            if min(m.values()) < 1 or used != set(range(1, k + 1)):
                raise InvalidInstance("strip indices must be 1..k with every strip used")
        for eid, u, v in self.graph.edges:
            if abs(m[u] - m[v]) > 1:
                raise InvalidInstance(f"edge {eid} spans more than one strip boundary")
        object.__setattr__(self, "_map", m)

    @staticmethod
    def build(graph: Graph, strip_of: Mapping[int, int]) -> "StripInstance":
        return StripInstance(graph, tuple(sorted(strip_of.items())))

    def strip(self, v: int) -> int:
        return self._map[v]

    @property
    def strip_count(self) -> int:
        return max(self._map.values()) if self._map else 0

    def vertices_in_strip(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(v for v, s in self.strip_of if s == i))

    def max_id(self) -> int:
        return self.graph.max_id()


@dataclass(frozen=True)
class StripComponent:
    strip: int
    vertices: frozenset[int]
    up_edges: frozenset[int]
    down_edges: frozenset[int]

    @property
    def is_source(self) -> bool:
        return bool(self.up_edges) and not self.down_edges


def strip_components(s: StripInstance) -> list[StripComponent]:
    out = []
    for i in range(1, s.strip_count + 1):
        sub = s.graph.induced(s.vertices_in_strip(i))
        for comp in connected_components(sub):
            up, down = set(), set()
            for v in comp:
                for eid in s.graph.incident(v):
                    w = s.graph.other_end(eid, v)
                    if s.strip(w) == i + 1:
                        up.add(eid)
                    elif s.strip(w) == i - 1:
                        down.add(eid)
            out.append(StripComponent(i, comp, frozenset(up), frozenset(down)))
    out.sort(key=lambda c: (c.strip, min(c.vertices)))
    return out


def source_components(s: StripInstance) -> list[StripComponent]:
    """Components whose inter-strip edges all lead to the strip above."""
    return [c for c in strip_components(s) if c.is_source]


@dataclass(frozen=True)
class SpinedStripInstance:
    """Strip instance with a spine path: one vertex per strip above the
    first, the topmost being alone in its strip."""

    instance: StripInstance
    spine: tuple[int, ...]

    def __post_init__(self) -> None:
        s = self.instance
        k = s.strip_count
        if len(self.spine) != k:
            raise InvalidInstance("spine must have one vertex per strip")
        for i, v in enumerate(self.spine, start=1):
            if s.strip(v) != i:
                raise InvalidInstance("spine vertex in wrong strip")
        for a, b in zip(self.spine, self.spine[1:]):
            if b not in s.graph.neighbors(a):
                raise InvalidInstance("spine is not a path")
        if k > 1:
            if len(s.vertices_in_strip(k)) != 1:
                raise InvalidInstance("top strip must contain only the spine end")
            comps = strip_components(s)
            for i, v in enumerate(self.spine, start=1):
                if i >= 2:
                    comp = next(c for c in comps if v in c.vertices)
                    if comp.vertices != frozenset({v}):
                        raise InvalidInstance("upper spine vertices must be their own component")


def make_spined(s: StripInstance, v: int) -> SpinedStripInstance:
    """Attach a fresh spine path at a first-strip vertex with an edge upward."""
    if s.strip(v) != 1:
        raise InvalidInstance("spine anchor must lie in the first strip")
    if not any(s.strip(s.graph.other_end(eid, v)) == 2 for eid in s.graph.incident(v)):
        raise InvalidInstance("spine anchor needs a neighbor in the second strip")
    k = s.strip_count
    alloc = IdAllocator(s.max_id() + 1)
    spine_vertices = [alloc.take() for _ in range(k)]  # strips 2..k+1
    verts = list(s.graph.vertices) + spine_vertices
    edges = list(s.graph.edges)
    eids = IdAllocator(max([e for e, _, _ in s.graph.edges], default=-1) + 1)
    chain = [v] + spine_vertices
    for a, b in zip(chain, chain[1:]):
        edges.append((eids.take(), a, b))
    strips = {u: s.strip(u) for u in s.graph.vertices}
    for i, u in enumerate(spine_vertices, start=2):
        strips[u] = i
    return SpinedStripInstance(StripInstance.build(Graph.build(verts, edges), strips),
                               tuple(chain))


class NonplanarCore(Exception):
    """The block carrying the collapse gadget is nonplanar: negative instance."""


def collapse_first_strip(s: SpinedStripInstance) -> SpinedStripInstance:
    """Equivalent instance with one strip fewer and a unique source component.

    The unique first-strip source component is replaced by the wheel gadget
    realizing the admissible cyclic orders of its upward edges; everything
    hanging off that component at cut vertices is carried along unchanged.
    """
    inst = s.instance
    k = inst.strip_count
    if k <= 1:
        raise InvalidInstance("nothing to collapse on one strip")
    sources = source_components(inst)
    if len(sources) != 1:
        raise InvalidInstance("collapse requires a unique source component")
    c = sources[0]
    if c.strip != 1:
        raise InvalidInstance("the unique source component must lie in the first strip")

    alloc = IdAllocator(inst.max_id() + 1)
    hub = alloc.take()
    up_edges = sorted(c.up_edges)
    pend = {eid: alloc.take() for eid in up_edges}

    aux_vertices = list(c.vertices) + [hub] + list(pend.values())
    aux_edges = [(eid, u, v) for eid, u, v in inst.graph.edges
                 if u in c.vertices and v in c.vertices]
    aux_eids = IdAllocator(max([e for e, _, _ in inst.graph.edges], default=-1) + 1)
    for eid in up_edges:
        u, v = inst.graph.ends(eid)
        low = u if inst.strip(u) == 1 else v
        ve = pend[eid]
        aux_edges.append((aux_eids.take(), hub, ve))
        aux_edges.append((aux_eids.take(), ve, low))
    aux = Graph.build(aux_vertices, aux_edges)

    bct = block_cut_tree(aux)
    block = next(b for b in bct.blocks if hub in b.vertices)
    block_graph = Graph.build(block.vertices,
                              [(eid, *aux.ends(eid)) for eid in block.edge_ids])

    tree = planar_orders_around(block_graph, hub)
    if tree is None:
        raise NonplanarCore

    # ground elements of the tree are the hub-pendant edge ids; map them back
    hub_edge_to_up: dict[int, int] = {}
    for eid in up_edges:
        hub_eid = next(e for e, u, v in aux.edges
                       if {u, v} == {hub, pend[eid]})
        hub_edge_to_up[hub_eid] = eid
    rg = representative_graph(tree, first_id=alloc.peek())
    pendant_of_up = {hub_edge_to_up[g_elem]: pv
                     for g_elem, pv in rg.pendant_map().items()}

    # assemble the collapsed instance
    verts: list[int] = []
    strips: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    for u in inst.graph.vertices:
        if inst.strip(u) >= 2:
            verts.append(u)
            strips[u] = inst.strip(u) - 1
    keep = set(verts)
    for eid, u, v in inst.graph.edges:
        if u in keep and v in keep:
            edges.append((eid, u, v))
    for u in rg.graph.vertices:
        verts.append(u)
        strips[u] = 1
    eids = IdAllocator(max(e for e, _, _ in inst.graph.edges) + 1)
    for _, u, v in rg.graph.edges:
        edges.append((eids.take(), u, v))

    for eid in up_edges:
        u, v = inst.graph.ends(eid)
        high = u if inst.strip(u) == 2 else v
        edges.append((eids.take(), high, pendant_of_up[eid]))

    # parts of the source component separated from the gadget block are
    # carried along, duplicated at their cut vertex
    carried = sorted(set(c.vertices) - set(block.vertices))
    if carried:
        sub = aux.induced(set(c.vertices))
        for part in connected_components(sub.induced(carried)):
            attach = sorted({w for p in part for w in sub.neighbors(p)
                             if w not in part})
            piece_vertices = set(part)
            rename = {p: p for p in part}
            for z in attach:
                nz = alloc.take()
                rename[z] = nz
                piece_vertices.add(z)
            for p in sorted(piece_vertices):
                verts.append(rename[p])
                strips[rename[p]] = 1
            for eid, u, v in sub.edges:
                if u in piece_vertices and v in piece_vertices and (u in part or v in part):
                    edges.append((eids.take(), rename[u], rename[v]))

    out = StripInstance.build(Graph.build(verts, edges), strips)
    return SpinedStripInstance(out, s.spine[1:])


def decide_spined(s: SpinedStripInstance) -> bool:
    current = s
    while current.instance.strip_count > 1:
        try:
            current = collapse_first_strip(current)
        except NonplanarCore:
            return False
    return is_planar(current.instance.graph)[0]


def decide_single_source(s: StripInstance) -> bool:
    """Strip planarity for instances with exactly one source component."""
    if s.strip_count <= 1:
        return is_planar(s.graph)[0]
    sources = source_components(s)
    if len(sources) != 1:
        raise InvalidInstance(f"expected exactly one source component, found {len(sources)}")
    c = sources[0]
    if c.strip != 1:
        # some first-strip component then has no inter-strip edge at all,
        # which the attachment assumptions rule out
        raise InvalidInstance("the unique source component must lie in the first strip")
    anchors = sorted({v for eid in c.up_edges for v in s.graph.ends(eid)
                      if s.strip(v) == 1})
    for v in anchors:
        if decide_spined(make_spined(s, v)):
            return True
    return False


def to_flat_clustered(s: StripInstance) -> FlatClusteredGraph:
    """Strips as clusters; the clusters-adjacency graph becomes a path."""
    base = s.max_id() + 1
    return FlatClusteredGraph.build(s.graph,
                                    {v: base + s.strip(v) for v in s.graph.vertices})
