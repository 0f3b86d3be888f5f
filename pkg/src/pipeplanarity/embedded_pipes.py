"""Clustered planarity with a prescribed pipe order around each cluster.

The instance carries a planar rotation system of the clusters-adjacency
graph.  Deciding goes through a rigid frame gadget: disks and pipes become
cycles of a triangulated scaffold whose unique embedding pins the pipe
order, clusters and their inter-cluster edges are wired into it through
stars, and the result is handed to the simultaneous-embedding backend.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    FlatClusteredGraph,
    Graph,
    IdAllocator,
    InvalidInstance,
    RotationSystem,
    classify_components,
    clusters_adjacency,
    connected_components,
    faces_of,
    is_planar_rotation,
)
from .sefe import Budget, SefeInstance, SefeResult, decide_sefe, remove_common_cycles


@dataclass(frozen=True)
class EmbeddedPipesInstance:
    clustered: FlatClusteredGraph
    adjacency_rotation: RotationSystem  # rotation of the clusters-adjacency graph

    def __post_init__(self) -> None:
        ga = self.adjacency_graph()
        self.adjacency_rotation.validate(ga)
        if ga.num_vertices() > 1 and len(connected_components(ga)) != 1:
            raise InvalidInstance("clusters-adjacency graph must be connected")
        if not is_planar_rotation(ga, self.adjacency_rotation):
            raise InvalidInstance("pipe rotation must be planar")

    def adjacency_graph(self) -> Graph:
        return clusters_adjacency(self.clustered)

    @staticmethod
    def with_default_rotation(cg: FlatClusteredGraph) -> "EmbeddedPipesInstance":
        from .planarity import is_planar

        ga = clusters_adjacency(cg)
        ok, rot = is_planar(ga)
        if not ok:
            raise InvalidInstance("clusters-adjacency graph is not planar")
        return EmbeddedPipesInstance(cg, rot)


@dataclass(frozen=True)
class FrameGadget:
    graph: Graph
    rotation: RotationSystem
    disk_cycles: tuple[tuple[int, tuple[int, ...]], ...]   # cluster -> vertex cycle
    pipe_cycles: tuple[tuple[int, tuple[int, ...]], ...]   # adjacency eid -> cycle
    mouth_edges: tuple[tuple[tuple[int, int], int], ...]   # (cluster, adjacency eid) -> eid
    arc_edges: tuple[tuple[int, tuple[int, ...]], ...]     # cluster -> disk arc eids
    crossing_points: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    # (cluster, adjacency eid) -> (first point, second point) clockwise
    v_out: int
    triangulation_edges: tuple[int, ...]

    def mouth(self, cluster: int, ga_eid: int) -> int:
        return dict(self.mouth_edges)[(cluster, ga_eid)]

    def points(self, cluster: int, ga_eid: int) -> tuple[int, int]:
        return dict(self.crossing_points)[(cluster, ga_eid)]


def _arriving_positions(g_ends, walk, x: int):
    out = []
    for i, (e_w, tail) in enumerate(walk):
        a, b = g_ends[e_w]
        head = b if tail == a else a
        if head == x:
            out.append((i, e_w))
    return out


class _RotationEditor:
    """Grow an embedded graph edge by edge, keeping rotations planar."""

    def __init__(self, vertices, edges, rot: dict[int, list[int]]):
        self.vertices = list(vertices)
        self.edges: list[tuple[int, int, int]] = list(edges)
        self.rot = {v: list(r) for v, r in rot.items()}
        self.ends = {eid: (u, v) for eid, u, v in self.edges}

    def graph(self) -> Graph:
        return Graph.build(self.vertices, self.edges)

    def rotation(self) -> RotationSystem:
        return RotationSystem.build({v: tuple(r) for v, r in self.rot.items()})

    def faces(self):
        return faces_of(self.graph(), self.rotation()).walks

    def add_vertex(self, v: int) -> None:
        self.vertices.append(v)
        self.rot[v] = []

    def add_edge_in_face(self, walk, u: int, v: int, eid: int) -> None:
        """Both endpoints on the face (or fresh); rotations updated in place."""
        self.edges.append((eid, min(u, v), max(u, v)))
        self.ends[eid] = (min(u, v), max(u, v))
        for x in (u, v):
            if not self.rot[x]:
                self.rot[x].append(eid)
                continue
            arr = _arriving_positions(self.ends, walk, x)
            if not arr:
                raise InvalidInstance(f"vertex {x} not on the face")
            _, e_arr = arr[0]
            self.rot[x].insert(self.rot[x].index(e_arr), eid)

    def face_with(self, *want_vertices) -> Optional[tuple]:
        for walk in self.faces():
            on = set()
            for e_w, tail in walk:
                a, b = self.ends[e_w]
                on.add(a)
                on.add(b)
            if all(w in on for w in want_vertices):
                return walk
        return None


def build_frame(inst: EmbeddedPipesInstance) -> FrameGadget:
    """Scaffold whose disk and pipe cycles reproduce the pipe embedding."""
    ga = inst.adjacency_graph()
    rot_a = inst.adjacency_rotation
    if ga.num_edges() == 0:
        raise InvalidInstance("frame needs at least one pipe")
    alloc = IdAllocator(max(inst.clustered.max_id(), ga.max_id()) + 1)

    a_pt: dict[tuple[int, int], int] = {}
    b_pt: dict[tuple[int, int], int] = {}
    for mu in ga.vertices:
        for p in rot_a.at(mu):
            a_pt[(mu, p)] = alloc.take()
            b_pt[(mu, p)] = alloc.take()

    vertices: list[int] = sorted(a_pt.values()) + sorted(b_pt.values())
    edges: list[tuple[int, int, int]] = []

    def new_edge(u, v):
        eid = alloc.take()
        edges.append((eid, min(u, v), max(u, v)))
        return eid

    rot: dict[int, list[int]] = {v: [] for v in vertices}
    mouth: dict[tuple[int, int], int] = {}
    arc_at_b: dict[tuple[int, int], int] = {}   # arc edge leaving b(p_i) clockwise
    arc_at_a: dict[tuple[int, int], int] = {}   # arc edge entering a(p_i)
    disk_cycles: dict[int, list[int]] = {}
    arc_eids: dict[int, list[int]] = {}
    subdividers: dict[tuple[int, int], int] = {}

    for mu in ga.vertices:
        pipes = list(rot_a.at(mu))
        cyc: list[int] = []
        for p in pipes:
            cyc.extend((a_pt[(mu, p)], b_pt[(mu, p)]))
        disk_cycles[mu] = cyc
        arc_eids[mu] = []
        for p in pipes:
            mouth[(mu, p)] = new_edge(a_pt[(mu, p)], b_pt[(mu, p)])
        d = len(pipes)
        for i, p in enumerate(pipes):
            q = pipes[(i + 1) % d]
            if d == 1:
                # the arc doubles the mouth; subdivide it to stay simple
                s = alloc.take()
                vertices.append(s)
                subdividers[(mu, p)] = s
                e1 = new_edge(b_pt[(mu, p)], s)
                e2 = new_edge(s, a_pt[(mu, q)])
                rot[s] = [e1, e2]
                arc_at_b[(mu, p)] = e1
                arc_at_a[(mu, q)] = e2
                arc_eids[mu].extend((e1, e2))
            else:
                arc = new_edge(b_pt[(mu, p)], a_pt[(mu, q)])
                arc_at_b[(mu, p)] = arc
                arc_at_a[(mu, q)] = arc
                arc_eids[mu].append(arc)

    side1: dict[int, int] = {}
    side2: dict[int, int] = {}
    for p, mu, nu in ga.edges:
        side1[p] = new_edge(a_pt[(mu, p)], b_pt[(nu, p)])
        side2[p] = new_edge(b_pt[(mu, p)], a_pt[(nu, p)])

    for mu in ga.vertices:
        pipes = list(rot_a.at(mu))
        for p in pipes:
            ga_u, ga_v = ga.ends(p)
            s_at_a = side1[p] if mu == ga_u else side2[p]
            s_at_b = side2[p] if mu == ga_u else side1[p]
            rot[a_pt[(mu, p)]] = [s_at_a, mouth[(mu, p)], arc_at_a[(mu, p)]]
            rot[b_pt[(mu, p)]] = [s_at_b, arc_at_b[(mu, p)], mouth[(mu, p)]]

    g = Graph.build(vertices, edges)
    rotation = RotationSystem.build({v: tuple(r) for v, r in rot.items()})
    if not is_planar_rotation(g, rotation):
        raise AssertionError("frame skeleton rotation is not planar")

    # classify faces
    def edge_set_of_walk(walk):
        return frozenset(e for e, _ in walk)

    disk_edge_sets = {}
    for mu in ga.vertices:
        pipes = list(rot_a.at(mu))
        es = set(arc_eids[mu])
        for p in pipes:
            es.add(mouth[(mu, p)])
        disk_edge_sets[mu] = frozenset(es)
    pipe_edge_sets = {}
    for p, mu, nu in ga.edges:
        pipe_edge_sets[p] = frozenset({mouth[(mu, p)], mouth[(nu, p)],
                                       side1[p], side2[p]})

    editor = _RotationEditor(vertices, edges, rot)
    walks = editor.faces()
    reserved = set(disk_edge_sets.values()) | set(pipe_edge_sets.values())
    free = [w for w in walks if edge_set_of_walk(w) not in reserved]
    if len(free) != len(walks) - len(disk_edge_sets) - len(pipe_edge_sets):
        raise AssertionError("frame faces do not match disks and pipes")

    # outer face: the longest free face, deterministically
    free.sort(key=lambda w: (-len(w), min(w)))
    outer = free[0]

    v_out = alloc.take()
    editor.add_vertex(v_out)
    boundary = []
    for e_w, tail in outer:
        a, b = editor.ends[e_w]
        head = b if tail == a else a
        boundary.append(head)
    first = boundary[0]
    editor.add_edge_in_face(outer, v_out, first, alloc.take())
    for w in boundary[1:]:
        walk = editor.face_with(v_out, w)
        assert walk is not None
        editor.add_edge_in_face(walk, v_out, w, alloc.take())

    # triangulate every remaining non-disk, non-pipe face
    triangulation: list[int] = [eid for eid, u, v in editor.edges if v_out in (u, v)]

    def non_triangle_free_face():
        for walk in sorted(editor.faces(), key=lambda w: min(w)):
            es = frozenset(e for e, _ in walk)
            if es in reserved:
                continue
            if len(walk) > 3:
                return walk
        return None

    existing_pairs = {tuple(sorted(editor.ends[eid])) for eid in editor.ends}
    while True:
        walk = non_triangle_free_face()
        if walk is None:
            break
        verts_on = []
        for e_w, tail in walk:
            a, b = editor.ends[e_w]
            verts_on.append(b if tail == a else a)
        cut = None
        L = len(verts_on)
        for i in range(L):
            x, z = verts_on[i], verts_on[(i + 2) % L]
            if x != z and tuple(sorted((x, z))) not in existing_pairs:
                cut = (x, z)
                break
        if cut is None:
            center = alloc.take()
            editor.add_vertex(center)
            editor.add_edge_in_face(walk, center, verts_on[0], alloc.take())
            for w in verts_on[1:]:
                sub = editor.face_with(center, w)
                editor.add_edge_in_face(sub, center, w, alloc.take())
            triangulation.extend(eid for eid, u, v in editor.edges
                                 if center in (u, v))
            existing_pairs |= {tuple(sorted((center, w))) for w in verts_on}
            continue
        eid = alloc.take()
        editor.add_edge_in_face(walk, cut[0], cut[1], eid)
        existing_pairs.add(tuple(sorted(cut)))
        triangulation.append(eid)

    g_full = editor.graph()
    rot_full = editor.rotation()
    if not is_planar_rotation(g_full, rot_full):
        raise AssertionError("triangulated frame is not planar")

    pipe_cycles = []
    for p, mu, nu in ga.edges:
        pipe_cycles.append((p, (a_pt[(mu, p)], b_pt[(mu, p)],
                                a_pt[(nu, p)], b_pt[(nu, p)])))
    return FrameGadget(
        graph=g_full,
        rotation=rot_full,
        disk_cycles=tuple(sorted((mu, tuple(cyc)) for mu, cyc in disk_cycles.items())),
        pipe_cycles=tuple(sorted(pipe_cycles)),
        mouth_edges=tuple(sorted(mouth.items())),
        arc_edges=tuple(sorted((mu, tuple(es)) for mu, es in arc_eids.items())),
        crossing_points=tuple(sorted(
            ((mu, p), (a_pt[(mu, p)], b_pt[(mu, p)])) for (mu, p) in a_pt)),
        v_out=v_out,
        triangulation_edges=tuple(sorted(set(triangulation))),
    )


@dataclass(frozen=True)
class EmbeddedReduction:
    """Reduction output plus the provenance needed to read witnesses back."""

    instance: SefeInstance
    a_center: tuple[tuple[tuple[int, int], int], ...]      # (mu, nu) -> star center
    a_leaf: tuple[tuple[tuple[int, int, int], int], ...]   # (mu, nu, edge) -> leaf
    alpha: tuple[tuple[tuple[int, int], int], ...]
    z_leaf: tuple[tuple[tuple[int, int], int], ...]        # (cluster, comp key) -> leaf
    gamma: tuple[tuple[int, int], ...]
    vertex_provenance: tuple[tuple[int, tuple], ...]

    def a_center_of(self, mu, nu):
        return dict(self.a_center)[(mu, nu)]

    def a_leaf_of(self, mu, nu, e):
        return dict(self.a_leaf)[(mu, nu, e)]


def reduce_embedded_to_sefe(inst: EmbeddedPipesInstance) -> EmbeddedReduction:
    """Wire the clusters into the frame and emit the two edge sets.

    Mouth edges stay only in the second graph; pipe sides carry the
    subdivision points whose stars transport the per-pipe crossing orders;
    every inter-cluster edge contributes its exclusive connector edges.
    Ends with common-cycle removal, so the common graph is a spanning forest.
    """
    from .core import validate_assumptions

    violations = validate_assumptions(inst.clustered)
    if violations:
        raise InvalidInstance("; ".join(v.detail for v in violations))

    cg = inst.clustered
    ga = inst.adjacency_graph()
    frame = build_frame(inst)

    alloc = IdAllocator(frame.graph.max_id() + 1)
    common: list[tuple[int, int, int]] = []
    red: list[tuple[int, int, int]] = []
    blue: list[tuple[int, int, int]] = []
    vertices: list[int] = list(frame.graph.vertices)
    prov: dict[int, tuple] = {v: ("frame", v) for v in frame.graph.vertices}

    mouths = {eid for _, eid in frame.mouth_edges}
    for eid, u, v in frame.graph.edges:
        if eid in mouths:
            blue.append((eid, u, v))
        else:
            common.append((eid, u, v))

    def subdivide_common(eid: int, count: int, start: int) -> list[int]:
        """Replace a common edge by a path of ``count`` fresh vertices,
        returned in order walking away from ``start``."""
        nonlocal common
        entry = next(t for t in common if t[0] == eid)
        common = [t for t in common if t[0] != eid]
        u, v = entry[1], entry[2]
        if start not in (u, v):
            raise InvalidInstance("subdivision start must be an endpoint")
        far = v if start == u else u
        mids = [alloc.take() for _ in range(count)]
        chain = [start] + mids + [far]
        for a, b in zip(chain, chain[1:]):
            common.append((alloc.take(), min(a, b), max(a, b)))
        vertices.extend(mids)
        return mids

    # pipe side subdivisions and cross edges
    alpha: dict[tuple[int, int], int] = {}
    a_dash: dict[tuple[int, int], int] = {}
    b_dash: dict[tuple[int, int], int] = {}
    a_ddash: dict[tuple[int, int], int] = {}
    b_ddash: dict[tuple[int, int], int] = {}
    beta: dict[tuple[int, int], int] = {}
    for p, mu, nu in ga.edges:
        # side one runs from the first point of mu to the second point of nu
        s1 = next(eid for eid, u, v in frame.graph.edges
                  if {u, v} == {frame.points(mu, p)[0], frame.points(nu, p)[1]})
        s2 = next(eid for eid, u, v in frame.graph.edges
                  if {u, v} == {frame.points(mu, p)[1], frame.points(nu, p)[0]})
        m1 = subdivide_common(s1, 6, frame.points(mu, p)[0])
        alpha[(mu, nu)], a_dash[(mu, nu)], b_dash[(mu, nu)], \
            b_dash[(nu, mu)], a_dash[(nu, mu)], alpha[(nu, mu)] = m1
        m2 = subdivide_common(s2, 6, frame.points(mu, p)[1])
        a_ddash[(mu, nu)], beta_mu, b_ddash[(mu, nu)], \
            b_ddash[(nu, mu)], beta_nu, a_ddash[(nu, mu)] = m2
        beta[(mu, nu)] = beta_mu
        beta[(nu, mu)] = beta_nu
        for key in ((mu, nu), (nu, mu)):
            red.append((alloc.take(),) + tuple(sorted((a_dash[key], a_ddash[key]))))
            blue.append((alloc.take(),) + tuple(sorted((b_dash[key], b_ddash[key]))))
            prov[alpha[key]] = ("alpha",) + key
            prov[beta[key]] = ("beta",) + key

    infos = classify_components(cg)
    comp_key = {}
    comp_of_vertex = {}
    for info in infos:
        key = (info.cluster, min(info.vertices))
        comp_key[key] = info
        for v in info.vertices:
            comp_of_vertex[v] = key

    gamma: dict[int, int] = {}
    z_leaf: dict[tuple[int, int], int] = {}
    for mu in cg.clusters:
        # gamma subdivides a disk-boundary arc of mu (arcs are common edges)
        arc_eid = min(dict(frame.arc_edges)[mu])
        start = next(u for eid, u, v in frame.graph.edges if eid == arc_eid)
        gamma[mu] = subdivide_common(arc_eid, 1, start)[0]
        prov[gamma[mu]] = ("gamma", mu)
        center = alloc.take()
        vertices.append(center)
        prov[center] = ("c_star_center", mu)
        common.append((alloc.take(), *sorted((center, gamma[mu]))))
        for info in infos:
            if info.cluster != mu:
                continue
            key = (info.cluster, min(info.vertices))
            z = alloc.take()
            vertices.append(z)
            z_leaf[key] = z
            prov[z] = ("z",) + key
            common.append((alloc.take(), *sorted((center, z))))

    # component copies (identity ids)
    for info in infos:
        for v in info.vertices:
            vertices.append(v)
            prov[v] = ("cluster_vertex", v)
        sub = cg.graph.induced(info.vertices)
        for eid, u, v in sub.edges:
            common.append((eid, u, v))

    # per ordered pair stars and per-edge connectors
    a_center: dict[tuple[int, int], int] = {}
    a_leaf: dict[tuple[int, int, int], int] = {}
    b_leaf: dict[tuple[int, int, int], int] = {}
    pair_edges: dict[tuple[int, int], list[int]] = {}
    for eid in cg.inter_cluster_edges():
        x, y = cg.graph.ends(eid)
        mu, nu = cg.cluster_of(x), cg.cluster_of(y)
        pair_edges.setdefault((mu, nu), []).append(eid)
        pair_edges.setdefault((nu, mu), []).append(eid)
    for (mu, nu), eids_here in sorted(pair_edges.items()):
        center = alloc.take()
        vertices.append(center)
        a_center[(mu, nu)] = center
        prov[center] = ("a_center", mu, nu)
        common.append((alloc.take(), *sorted((center, alpha[(mu, nu)]))))
        for e in sorted(eids_here):
            la = alloc.take()
            vertices.append(la)
            a_leaf[(mu, nu, e)] = la
            prov[la] = ("a_leaf", mu, nu, e)
            common.append((alloc.take(), *sorted((center, la))))
            lb = alloc.take()
            vertices.append(lb)
            b_leaf[(mu, nu, e)] = lb
            prov[lb] = ("b_leaf", mu, nu, e)
            common.append((alloc.take(), *sorted((beta[(mu, nu)], lb))))

    for eid in cg.inter_cluster_edges():
        x, y = cg.graph.ends(eid)
        mu, nu = cg.cluster_of(x), cg.cluster_of(y)
        red.append((alloc.take(), *sorted((x, a_leaf[(mu, nu, eid)]))))
        red.append((alloc.take(), *sorted((y, a_leaf[(nu, mu, eid)]))))
        red.append((alloc.take(), *sorted((b_leaf[(mu, nu, eid)], b_leaf[(nu, mu, eid)]))))
        blue.append((alloc.take(), *sorted((a_leaf[(mu, nu, eid)], b_leaf[(mu, nu, eid)]))))
        blue.append((alloc.take(), *sorted((a_leaf[(nu, mu, eid)], b_leaf[(nu, mu, eid)]))))

    for v in cg.graph.vertices:
        if cg.incident_inter_edges(v):
            blue.append((alloc.take(), *sorted((v, z_leaf[comp_of_vertex[v]]))))

    edges1 = common + red
    edges2 = common + blue
    inst_sefe = SefeInstance.build(vertices, edges1, edges2)
    inst_sefe = remove_common_cycles(inst_sefe)
    return EmbeddedReduction(
        instance=inst_sefe,
        a_center=tuple(sorted(a_center.items())),
        a_leaf=tuple(sorted(a_leaf.items())),
        alpha=tuple(sorted(alpha.items())),
        z_leaf=tuple(sorted(z_leaf.items())),
        gamma=tuple(sorted(gamma.items())),
        vertex_provenance=tuple(sorted(prov.items())),
    )


@dataclass(frozen=True)
class CaseReport:
    per_pair: tuple[tuple[tuple[int, int], str], ...]  # (mu, nu) -> case1|case2|neither

    @property
    def verdict(self) -> str:
        if all(c in ("case1", "case2") for _, c in self.per_pair):
            return "tractable"
        return "neither"


def check_case_conditions(inst: EmbeddedPipesInstance) -> CaseReport:
    """Per directed cluster pair: at most one originating multi-edge
    component, or at most two without any passing component touching it."""
    cg = inst.clustered
    ga = inst.adjacency_graph()
    infos = classify_components(cg)
    out = []
    for p, mu, nu in ga.edges:
        for src, dst in ((mu, nu), (nu, mu)):
            orig_me = sum(1 for i in infos
                          if i.cluster == src and i.multi_edge
                          and i.originating_to == dst)
            passing_touch = 0
            for i in infos:
                if i.cluster != src or not i.passing:
                    continue
                targets = {cg.cluster_of(cg.graph.other_end(e, v))
                           for e in i.inter_edges
                           for v in cg.graph.ends(e) if v in i.vertices}
                if dst in targets:
                    passing_touch += 1
            if orig_me <= 1:
                out.append(((src, dst), "case1"))
            elif orig_me <= 2 and passing_touch == 0:
                out.append(((src, dst), "case2"))
            else:
                out.append(((src, dst), "neither"))
    return CaseReport(tuple(sorted(out)))


@dataclass(frozen=True)
class EmbeddedPipesVerdict:
    status: str  # yes | no | budget_exceeded
    crossing_orders: Optional[tuple[tuple[tuple[int, int], tuple[int, ...]], ...]]
    case_report: CaseReport
    nodes: int
    elapsed_ms: int


def decide_embedded_pipes(inst: EmbeddedPipesInstance,
                          budget: Optional[Budget] = None) -> EmbeddedPipesVerdict:
    """Decide via the frame reduction; a yes carries, per directed cluster
    pair, the order in which its inter-cluster edges cross the disk boundary."""
    report = check_case_conditions(inst)
    reduction = reduce_embedded_to_sefe(inst)
    res = decide_sefe(reduction.instance, budget)
    orders = None
    if res.status == "yes":
        orders = extract_crossing_orders(reduction, res.witness.rotation1)
    return EmbeddedPipesVerdict(res.status, orders, report, res.nodes, res.elapsed_ms)


def extract_crossing_orders(reduction: EmbeddedReduction,
                            rotation: RotationSystem):
    """Per directed pair, the cyclic order of the star leaves around the
    star center, read from the witness and mapped back to edge ids."""
    leaf_lookup = {}
    for (mu, nu, e), leaf in reduction.a_leaf:
        leaf_lookup.setdefault((mu, nu), {})[leaf] = e
    ends = {eid: (u, v) for eid, u, v in reduction.instance.edges1}
    out = []
    for (mu, nu), center in reduction.a_center:
        rot = rotation.at(center)
        leaves = leaf_lookup[(mu, nu)]
        order = []
        for eid in rot:
            u, v = ends[eid]
            other = v if u == center else u
            if other in leaves:
                order.append(leaves[other])
        out.append(((mu, nu), tuple(order)))
    return tuple(sorted(out))
