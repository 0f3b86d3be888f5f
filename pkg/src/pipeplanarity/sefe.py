"""Simultaneous embedding with fixed edges: instances, witnesses, the
common-cycle removal gadget, and an exact budgeted decision backend.

The backend searches over synchronized incremental embeddings: edges are
inserted one at a time into tracked face structures of both graphs, common
edges simultaneously in both, and a branch dies as soon as an edge's
endpoints share no face or the common cyclic orders diverge at a vertex.
Sound and complete, exponential in the worst case, tri-state under a budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (
    Graph,
    InvalidInstance,
    RotationSystem,
    UnionFind,
    blocks_per_component,
    canonical_cycle,
    connected_components,
    is_forest,
    is_planar_rotation,
)


@dataclass(frozen=True)
class SefeInstance:
    """Two edge sets over a shared vertex set; common edges share one id."""

    vertices: tuple[int, ...]
    edges1: tuple[tuple[int, int, int], ...]
    edges2: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        e1 = {eid: (u, v) for eid, u, v in self.edges1}
        e2 = {eid: (u, v) for eid, u, v in self.edges2}
        for eid in set(e1) & set(e2):
            if e1[eid] != e2[eid]:
                raise InvalidInstance(f"common edge {eid} has different endpoints")
        self.graph1()
        self.graph2()

    @staticmethod
    def build(vertices: Iterable[int], edges1, edges2) -> "SefeInstance":
        norm = lambda es: tuple(sorted((eid, min(u, v), max(u, v)) for eid, u, v in es))
        return SefeInstance(tuple(sorted(set(vertices))), norm(edges1), norm(edges2))

    def graph1(self) -> Graph:
        return Graph.build(self.vertices, self.edges1)

    def graph2(self) -> Graph:
        return Graph.build(self.vertices, self.edges2)

    def common_edge_ids(self) -> frozenset[int]:
        return frozenset(e for e, _, _ in self.edges1) & frozenset(e for e, _, _ in self.edges2)

    def common_graph(self) -> Graph:
        common = self.common_edge_ids()
        return Graph.build(self.vertices,
                           [(eid, u, v) for eid, u, v in self.edges1 if eid in common])

    def union_edges(self) -> list[tuple[int, int, int]]:
        seen = {}
        for eid, u, v in self.edges1 + self.edges2:
            seen[eid] = (eid, u, v)
        return [seen[k] for k in sorted(seen)]

    def max_id(self) -> int:
        ids = [-1]
        ids.extend(self.vertices)
        ids.extend(e for e, _, _ in self.union_edges())
        return max(ids)


@dataclass(frozen=True)
class SefeWitness:
    rotation1: RotationSystem
    rotation2: RotationSystem


@dataclass(frozen=True)
class SefeStructureReport:
    common_is_forest: bool
    g1_cut_ok: bool
    g2_cut_ok: bool

    def all_ok(self) -> bool:
        return self.common_is_forest and self.g1_cut_ok and self.g2_cut_ok


def structure_report(inst: SefeInstance) -> SefeStructureReport:
    """Structural flags under which the backend's certificate reasoning and
    the intended polynomial algorithms apply: common graph a forest, every
    cut vertex of each graph incident to at most two non-trivial blocks."""

    def cut_ok(g: Graph) -> bool:
        bct = blocks_per_component(g)
        for v in bct.cut_vertices:
            nontrivial = sum(1 for b in bct.blocks if v in b.vertices and not b.trivial)
            if nontrivial > 2:
                return False
        return True

    return SefeStructureReport(
        common_is_forest=is_forest(inst.common_graph()),
        g1_cut_ok=cut_ok(inst.graph1()),
        g2_cut_ok=cut_ok(inst.graph2()),
    )


def verify_witness(inst: SefeInstance, w: SefeWitness) -> bool:
    """Planarity of both rotations plus identical common cyclic orders."""
    g1, g2 = inst.graph1(), inst.graph2()
    w.rotation1.validate(g1)
    w.rotation2.validate(g2)
    if not is_planar_rotation(g1, w.rotation1):
        return False
    if not is_planar_rotation(g2, w.rotation2):
        return False
    common = inst.common_edge_ids()
    for v in inst.vertices:
        c1 = tuple(e for e in w.rotation1.at(v) if e in common)
        c2 = tuple(e for e in w.rotation2.at(v) if e in common)
        if len(c1) <= 2:
            if sorted(c1) != sorted(c2):
                return False
        elif canonical_cycle(c1) != canonical_cycle(c2):
            return False
    return True


# ---------------------------------------------------------------------------
# Common-cycle removal
# ---------------------------------------------------------------------------


def remove_common_cycles(inst: SefeInstance) -> SefeInstance:
    """Break every cycle of the common graph by replacing one of its edges
    with a pair of exclusive length-two paths.

    Preserves the answer, keeps both graphs connected, adds no new cut
    vertex, and turns no trivial block non-trivial.
    """
    for g, name in ((inst.graph1(), "first"), (inst.graph2(), "second")):
        if len(connected_components(g)) > 1:
            raise InvalidInstance(f"{name} graph must be connected")

    from .planarity import _find_cycle

    current = inst
    while True:
        cg = current.common_graph()
        if is_forest(cg):
            return current
        cyc = None
        for comp in connected_components(cg):
            sub = cg.induced(comp)
            if not is_forest(sub):
                cyc = _find_cycle(sub)
                break
        assert cyc is not None
        # break the cycle at its lowest-degree corner: high-degree vertices
        # keep their common edges, so agreement keeps pinning their rotations
        deg = {v: cg.degree(v) for v in cg.vertices}
        eid, tail = min(cyc, key=lambda d: (deg[cg.ends(d[0])[0]] + deg[cg.ends(d[0])[1]],
                                            d[0]))
        u, v = cg.ends(eid)
        nid = current.max_id() + 1
        x, y = nid, nid + 1
        e_ux, e_xv, e_uy, e_yv = nid + 2, nid + 3, nid + 4, nid + 5
        edges1 = [t for t in current.edges1 if t[0] != eid]
        edges2 = [t for t in current.edges2 if t[0] != eid]
        edges1 += [(e_ux, u, x), (e_xv, x, v)]
        edges2 += [(e_uy, u, y), (e_yv, y, v)]
        current = SefeInstance.build(tuple(current.vertices) + (x, y), edges1, edges2)


# ---------------------------------------------------------------------------
# Decision backend
# ---------------------------------------------------------------------------


@dataclass
class Budget:
    max_nodes: int = 2_000_000
    max_ms: Optional[int] = None


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SefeResult:
    status: str  # "yes" | "no" | "budget_exceeded"
    witness: Optional[SefeWitness]
    nodes: int
    elapsed_ms: int


class _EmbedState:
    """Partial embedding of one graph: rotations + face walks with undo.

    Face splits and merges relabel only the smaller side, so long boundary
    walks are not retraversed on every insertion.
    """

    __slots__ = ("rot", "nxt", "face", "face_size", "comp", "members",
                 "face_counter", "ends", "merge_hook")

    def __init__(self, vertices, ends: dict[int, tuple[int, int]]):
        self.rot: dict[int, list[int]] = {v: [] for v in vertices}
        self.nxt: dict[tuple[int, int], tuple[int, int]] = {}
        self.face: dict[tuple[int, int], int] = {}
        self.face_size: dict[int, int] = {}
        self.comp: dict[int, int] = {v: v for v in vertices}
        self.members: dict[int, list[int]] = {v: [v] for v in vertices}
        self.face_counter = 0
        self.ends = ends
        self.merge_hook = None  # called with the vertices that changed label

    def other(self, eid: int, v: int) -> int:
        a, b = self.ends[eid]
        return b if v == a else a

    def corner_face(self, v: int, k: int) -> int:
        arriving = self.rot[v][k]
        return self.face[(arriving, self.other(arriving, v))]

    def corner_options(self, v: int) -> list[int]:
        d = len(self.rot[v])
        return [0] if d == 0 else list(range(d))

    def _walk(self, start) -> list:
        out = [start]
        d = self.nxt[start]
        while d != start:
            out.append(d)
            d = self.nxt[d]
        return out

    def insert(self, eid: int, u: int, ku: int, v: int, kv: int):
        """Insert edge eid at corner ku of u and kv of v; returns a trail."""
        trail: list = []
        rot_u, rot_v = self.rot[u], self.rot[v]
        dn1 = (eid, u)
        dn2 = (eid, v)

        f_u = self.corner_face(u, ku) if rot_u else None
        f_v = self.corner_face(v, kv) if rot_v else None
        merged = self.comp[u] != self.comp[v]

        # collect the smaller merged side before pointers change
        pre_collected = None
        if merged and f_u is not None and f_v is not None and f_u != f_v:
            if self.face_size[f_u] <= self.face_size[f_v]:
                in_u0 = rot_u[ku % len(rot_u)]
                pre_collected = (self._walk((in_u0, self.other(in_u0, u))), f_v)
            else:
                in_v0 = rot_v[kv % len(rot_v)]
                pre_collected = (self._walk((in_v0, self.other(in_v0, v))), f_u)

        rot_u.insert(ku, eid)
        if u == v:
            raise InvalidInstance("self-loop")
        rot_v.insert(kv, eid)
        trail.append(("rot", u, ku))
        trail.append(("rot", v, kv))

        def set_next(d, val):
            trail.append(("nxt", d, self.nxt.get(d)))
            self.nxt[d] = val

        def arriving_next(d):
            e1, tail = d
            head = self.other(e1, tail)
            r = self.rot[head]
            i = r.index(e1)
            return (r[(i - 1) % len(r)], head)

        affected = [dn1, dn2]
        if len(rot_u) > 1:
            in_u = rot_u[(ku + 1) % len(rot_u)]
            affected.append((in_u, self.other(in_u, u)))
        if len(rot_v) > 1:
            in_v = rot_v[(kv + 1) % len(rot_v)]
            affected.append((in_v, self.other(in_v, v)))
        for d in affected:
            set_next(d, arriving_next(d))

        if merged:
            cu, cv = self.comp[u], self.comp[v]
            if len(self.members[cu]) < len(self.members[cv]):
                cu, cv = cv, cu
            moved = self.members.pop(cv)
            for w in moved:
                self.comp[w] = cu
            self.members[cu].extend(moved)
            trail.append(("comp", cu, cv, len(moved)))
            if self.merge_hook is not None:
                self.merge_hook(self, moved)

        def set_face(d, fid):
            trail.append(("face", d, self.face.get(d)))
            self.face[d] = fid

        def set_size(fid, value):
            trail.append(("fsize", fid, self.face_size.get(fid)))
            self.face_size[fid] = value

        if merged:
            if f_u is None and f_v is None:
                fid = self.face_counter
                self.face_counter += 1
                trail.append(("fc",))
                set_face(dn1, fid)
                set_face(dn2, fid)
                set_size(fid, 2)
            elif pre_collected is None:
                # one endpoint fresh: extend the existing face
                fid = f_u if f_u is not None else f_v
                set_face(dn1, fid)
                set_face(dn2, fid)
                set_size(fid, self.face_size[fid] + 2)
            else:
                smaller, keep = pre_collected
                for d in smaller:
                    set_face(d, keep)
                set_face(dn1, keep)
                set_face(dn2, keep)
                dead = f_u if keep == f_v else f_v
                set_size(keep, self.face_size[keep] + len(smaller) + 2)
                set_size(dead, 0)
        else:
            # same face splits: walk both sides alternately, relabel the
            # side that closes first
            fid_new = self.face_counter
            self.face_counter += 1
            trail.append(("fc",))
            old = f_u
            w1, w2 = [dn1], [dn2]
            d1, d2 = self.nxt[dn1], self.nxt[dn2]
            while True:
                if d1 == dn1:
                    closed, other_dart = w1, dn2
                    break
                if d2 == dn2:
                    closed, other_dart = w2, dn1
                    break
                w1.append(d1)
                w2.append(d2)
                d1 = self.nxt[d1]
                d2 = self.nxt[d2]
            for d in closed:
                set_face(d, fid_new)
            set_face(other_dart, old)
            set_size(fid_new, len(closed))
            set_size(old, self.face_size[old] + 2 - len(closed))
        return trail

    def undo(self, trail) -> None:
        for op in reversed(trail):
            tag = op[0]
            if tag == "rot":
                _, v, k = op
                self.rot[v].pop(k)
            elif tag == "nxt":
                _, d, old = op
                if old is None:
                    del self.nxt[d]
                else:
                    self.nxt[d] = old
            elif tag == "face":
                _, d, old = op
                if old is None:
                    del self.face[d]
                else:
                    self.face[d] = old
            elif tag == "fsize":
                _, fid, old = op
                if old is None:
                    del self.face_size[fid]
                else:
                    self.face_size[fid] = old
            elif tag == "comp":
                _, cu, cv, n = op
                moved = self.members[cu][-n:]
                del self.members[cu][-n:]
                self.members[cv] = moved
                for w in moved:
                    self.comp[w] = cv
            elif tag == "fc":
                self.face_counter -= 1

    def placements(self, eid: int) -> list[tuple[int, int]]:
        u, v = self.ends[eid]
        if self.comp[u] == self.comp[v]:
            out = []
            for ku in self.corner_options(u):
                if self.rot[u]:
                    fu = self.corner_face(u, ku)
                else:
                    fu = None
                for kv in self.corner_options(v):
                    if self.rot[v]:
                        if fu is not None and self.corner_face(v, kv) != fu:
                            continue
                    out.append((ku, kv))
            return out
        return [(ku, kv) for ku in self.corner_options(u)
                for kv in self.corner_options(v)]


def _event_order(inst: SefeInstance, seed_rank: int = 0,
                 prefer_anchored: bool = True,
                 seed_vertex: Optional[int] = None) -> list[tuple[int, str, bool]]:
    """Static insertion order: cycle-closing edges as early as possible,
    exclusive tree fringes placed last without branching."""
    common = inst.common_edge_ids()
    union = inst.union_edges()
    kind = {}
    for eid, u, v in inst.edges1:
        kind[eid] = "common" if eid in common else "g1"
    for eid, u, v in inst.edges2:
        if eid not in kind:
            kind[eid] = "g2"

    # strip, per graph, exclusive edges pendant in that graph: a spur inside a
    # face never blocks later insertions and carries no agreement constraint,
    # so these are placed greedily at the very end
    fringe: list[int] = []
    removed: set[int] = set()
    for graph_edges, graph_kind in ((inst.edges1, "g1"), (inst.edges2, "g2")):
        deg: dict[int, int] = {v: 0 for v in inst.vertices}
        for eid, u, v in graph_edges:
            deg[u] += 1
            deg[v] += 1
        changed = True
        while changed:
            changed = False
            for eid, u, v in graph_edges:
                if eid in removed or kind[eid] != graph_kind:
                    continue
                if deg[u] == 1 or deg[v] == 1:
                    removed.add(eid)
                    fringe.append(eid)
                    deg[u] -= 1
                    deg[v] -= 1
                    changed = True

    # depth-first locality: close cycles as soon as possible, otherwise grow
    # from the most recently placed vertex, so related decisions sit next to
    # each other and backtracking stays local
    rest = [t for t in union if t[0] not in removed]
    incident: dict[int, list[tuple[int, int, int]]] = {}
    for t in rest:
        incident.setdefault(t[1], []).append(t)
        incident.setdefault(t[2], []).append(t)
    uf = UnionFind(inst.vertices)
    placed: list[int] = []
    placed_set: set[int] = set()
    ordered: list[int] = []
    remaining = {t[0]: t for t in rest}
    cdeg = {v: 0 for v in inst.vertices}
    for eid, u, v in rest:
        if kind[eid] == "common":
            cdeg[u] += 1
            cdeg[v] += 1

    def anchoring(t) -> int:
        """How tied the fresh endpoint already is to placed structure."""
        _, u, v = t
        fresh = v if u in placed_set else u
        if fresh in placed_set:
            return 99
        return sum(1 for e2, w in ((e2, w) for e2, a, b in incident.get(fresh, [])
                                   for w in (a, b) if w != fresh)
                   if w in placed_set)

    while remaining:
        chosen = None
        for eid, t in sorted(remaining.items()):
            _, u, v = t
            if u in placed_set and v in placed_set and uf.find(u) == uf.find(v):
                chosen = t
                break
        if chosen is None and prefer_anchored:
            # prefer extensions whose fresh endpoint is already tied to the
            # placed part: rigid regions complete before loose ones begin
            best = None
            for w in reversed(placed):
                cands = [t for t in incident.get(w, []) if t[0] in remaining]
                for t in cands:
                    key = (-anchoring(t), kind[t[0]] != "common", t[0])
                    if best is None or key < best[0]:
                        best = (key, t)
                if best is not None and best[0][0] <= -2:
                    break
            if best is not None:
                chosen = best[1]
        elif chosen is None:
            for w in reversed(placed):
                cands = [t for t in incident.get(w, []) if t[0] in remaining]
                if cands:
                    cands.sort(key=lambda t: (kind[t[0]] != "common", t[0]))
                    chosen = cands[0]
                    break
        if chosen is None:
            ranked = sorted((v for v in inst.vertices if v not in placed_set),
                            key=lambda v: (-cdeg[v], v))
            if seed_vertex is not None and seed_vertex not in placed_set:
                ranked = [seed_vertex] + [v for v in ranked if v != seed_vertex]
            seed = ranked[min(seed_rank, len(ranked) - 1)] if ranked else None
            cands = sorted((t for t in remaining.values() if seed in (t[1], t[2])),
                           key=lambda t: t[0])
            chosen = cands[0] if cands else sorted(remaining.values())[0]
        eid, u, v = chosen
        del remaining[eid]
        ordered.append(eid)
        uf.union(u, v)
        for w in (u, v):
            if w not in placed_set:
                placed_set.add(w)
                placed.append(w)

    events = [(eid, kind[eid], False) for eid in ordered]
    events += [(eid, kind[eid], True) for eid in reversed(fringe)]
    return events


class _WorkInstance:
    """Duck-typed stand-in for the search: may carry parallel edges."""

    def __init__(self, vertices, edges1, edges2):
        self.vertices = vertices
        self.edges1 = edges1
        self.edges2 = edges2

    def common_edge_ids(self):
        return frozenset(e for e, _, _ in self.edges1) & \
            frozenset(e for e, _, _ in self.edges2)

    def union_edges(self):
        seen = {}
        for eid, u, v in self.edges1 + self.edges2:
            seen[eid] = (eid, u, v)
        return [seen[k] for k in sorted(seen)]


def _contract_chains(inst: SefeInstance):
    """Suppress union-degree-2 vertices whose two edges share one edge class.

    Returns (vertices, edges1, edges2, expansions) where each expansion maps
    a surviving edge id to the path of original edges and interior vertices
    it stands for.  Chains forming full cycles keep one interior vertex.
    """
    union = inst.union_edges()
    common = inst.common_edge_ids()
    kind = {}
    for eid, u, v in inst.edges1:
        kind[eid] = "common" if eid in common else "g1"
    for eid, u, v in inst.edges2:
        kind.setdefault(eid, "g2")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in inst.vertices}
    for eid, u, v in union:
        adj[u].append((eid, v))
        adj[v].append((eid, u))

    def suppressible(v: int) -> bool:
        if len(adj[v]) != 2:
            return False
        (e1, _), (e2, _) = adj[v]
        return kind[e1] == kind[e2] and e1 != e2

    ends = {eid: (u, v) for eid, u, v in union}
    removed_edges: set[int] = set()
    removed_vertices: set[int] = set()
    new_edges: list[tuple[int, int, int, str]] = []
    expansions: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    visited: set[int] = set()
    for eid, u, v in union:
        if eid in visited:
            continue
        if not (suppressible(u) or suppressible(v)):
            continue
        # walk both ways to the chain ends
        path_edges = [eid]
        path_verts = [u, v]
        for direction in (0, 1):
            cur = path_verts[-1] if direction else path_verts[0]
            prev_e = path_edges[-1] if direction else path_edges[0]
            while suppressible(cur):
                nxt = next((e, w) for e, w in adj[cur] if e != prev_e)
                e, w = nxt
                if e in path_edges:
                    break  # closed cycle of degree-2 vertices
                if direction:
                    path_edges.append(e)
                    path_verts.append(w)
                else:
                    path_edges.insert(0, e)
                    path_verts.insert(0, w)
                prev_e = e
                cur = w
        a, b = path_verts[0], path_verts[-1]
        if len(path_edges) == 1 or a == b:
            visited.update(path_edges)
            continue
        visited.update(path_edges)
        removed_edges.update(path_edges)
        removed_vertices.update(path_verts[1:-1])
        rep = min(path_edges)
        new_edges.append((rep, min(a, b), max(a, b), kind[path_edges[0]]))
        if path_verts[0] > path_verts[-1]:
            path_edges = list(reversed(path_edges))
            path_verts = list(reversed(path_verts))
        expansions[rep] = (tuple(path_edges), tuple(path_verts))

    verts = [v for v in inst.vertices if v not in removed_vertices]
    e1 = [(eid, u, v) for eid, u, v in inst.edges1 if eid not in removed_edges]
    e2 = [(eid, u, v) for eid, u, v in inst.edges2 if eid not in removed_edges]
    for rep, u, v, k in new_edges:
        if k in ("common", "g1"):
            e1.append((rep, u, v))
        if k in ("common", "g2"):
            e2.append((rep, u, v))
    return verts, e1, e2, expansions


def _expand_rotations(rot: dict[int, list[int]], expansions, graph_edges: set[int],
                      ends: dict[int, tuple[int, int]]) -> dict[int, list[int]]:
    """Reinstate the contracted paths inside a rotation map."""
    out = {v: list(r) for v, r in rot.items()}
    for rep, (path_edges, path_verts) in expansions.items():
        if path_edges[0] not in graph_edges:
            continue
        a, b = path_verts[0], path_verts[-1]
        if rep in out.get(a, []):
            out[a][out[a].index(rep)] = path_edges[0]
        if rep in out.get(b, []):
            out[b][out[b].index(rep)] = path_edges[-1]
        for i, w in enumerate(path_verts[1:-1], start=1):
            out[w] = [path_edges[i - 1], path_edges[i]]
    return out


def decide_sefe(inst: SefeInstance, budget: Optional[Budget] = None) -> SefeResult:
    """Search for a pair of planar rotation systems of the two graphs that
    agree on the common edges.

    Tri-state: yes with a verified witness, no, or budget_exceeded.  When the
    common graph is a forest and both graphs are connected, a yes witness is
    a full simultaneous-embedding certificate.

    Several deterministic search variants run under escalating budgets before
    the final exhaustive pass: structured instances often yield to one of the
    orderings long before an exhaustive proof would be needed.
    """
    budget = budget or Budget()
    start = time.monotonic()
    total_nodes = 0

    from .planarity import is_planar

    if not is_planar(inst.graph1())[0] or not is_planar(inst.graph2())[0]:
        return SefeResult("no", None, 0, int((time.monotonic() - start) * 1000))

    original = inst
    verts_c, e1_c, e2_c, expansions = _contract_chains(inst)
    work = _WorkInstance(tuple(sorted(verts_c)), tuple(sorted(e1_c)),
                         tuple(sorted(e2_c)))

    variants = [(0, True), (0, False), (1, True), (1, False), (2, True), (3, True)]
    schedule: list[tuple[int, bool, Optional[int]]] = []
    for frac in (64, 16):
        for sr, anchored in variants:
            schedule.append((sr, anchored, max(1000, budget.max_nodes // frac)))

    deadline = None
    if budget.max_ms is not None:
        deadline = start + budget.max_ms / 1000.0

    deaths: dict[int, int] = {}
    outcome = "budget"
    rots = None
    for seed_rank, anchored, node_cap in schedule:
        remaining_nodes = budget.max_nodes - total_nodes
        if remaining_nodes <= 0:
            return SefeResult("budget_exceeded", None, total_nodes,
                              int((time.monotonic() - start) * 1000))
        cap = min(node_cap, remaining_nodes)
        outcome, rots, used = _search_once(work, seed_rank, anchored, cap, deadline,
                                           deaths=deaths)
        total_nodes += used
        if outcome in ("yes", "no"):
            break
        if deadline is not None and time.monotonic() > deadline:
            return SefeResult("budget_exceeded", None, total_nodes,
                              int((time.monotonic() - start) * 1000))
    if outcome == "budget":
        # final exhaustive pass, seeded at the hottest conflict locus the
        # probes found so that a refutation explores it before loose parts
        remaining_nodes = budget.max_nodes - total_nodes
        if remaining_nodes <= 0:
            return SefeResult("budget_exceeded", None, total_nodes,
                              int((time.monotonic() - start) * 1000))
        hot = max(deaths, key=lambda v: (deaths[v], -v)) if deaths else None
        outcome, rots, used = _search_once(work, 0, True, remaining_nodes, deadline,
                                           seed_vertex=hot)
        total_nodes += used
    if outcome == "no":
        return SefeResult("no", None, total_nodes,
                          int((time.monotonic() - start) * 1000))
    if outcome != "yes":
        return SefeResult("budget_exceeded", None, total_nodes,
                          int((time.monotonic() - start) * 1000))

    elapsed = int((time.monotonic() - start) * 1000)
    g1_ids = {e for e, _, _ in original.edges1}
    g2_ids = {e for e, _, _ in original.edges2}
    rot1 = _expand_rotations(rots[0], expansions, g1_ids,
                             {e: (u, v) for e, u, v in original.edges1})
    rot2 = _expand_rotations(rots[1], expansions, g2_ids,
                             {e: (u, v) for e, u, v in original.edges2})
    witness = SefeWitness(
        RotationSystem.build({v: tuple(rot1.get(v, ())) for v in original.vertices}),
        RotationSystem.build({v: tuple(rot2.get(v, ())) for v in original.vertices}),
    )
    assert verify_witness(original, witness)
    return SefeResult("yes", witness, total_nodes, elapsed)


def _search_once(inst: "_WorkInstance", seed_rank: int, anchored: bool,
                 max_nodes: int, deadline: Optional[float],
                 seed_vertex: Optional[int] = None,
                 deaths: Optional[dict] = None):
    """One deterministic search pass; returns (outcome, rotations, nodes)."""
    nodes = 0

    common = inst.common_edge_ids()
    ends = {eid: (u, v) for eid, u, v in inst.union_edges()}
    s1 = _EmbedState(inst.vertices, {e: ends[e] for e, _, _ in inst.edges1})
    s2 = _EmbedState(inst.vertices, {e: ends[e] for e, _, _ in inst.edges2})
    events = _event_order(inst, seed_rank, anchored, seed_vertex)

    # scheduler: events are pending extensions until a component merge makes
    # them cycle-closing; closers are branched on fail-first
    n_events = len(events)
    ev_eid = [e for e, _, _ in events]
    ev_kind = [k for _, k, _ in events]
    ev_free = [f for _, _, f in events]
    ev_ends = [ends[e] for e in ev_eid]
    placed_flag = [False] * n_events
    closer_count = [0] * n_events
    closers: list[int] = []
    events_at: dict[int, list[int]] = {v: [] for v in inst.vertices}
    for j in range(n_events):
        u, v = ev_ends[j]
        events_at[u].append(j)
        events_at[v].append(j)
    promo_log: list[int] = []

    def states_of(kind: str):
        if kind == "common":
            return (s1, s2)
        return (s1,) if kind == "g1" else (s2,)

    def hook(state, moved):
        for w in moved:
            for j in events_at[w]:
                if placed_flag[j] or ev_free[j]:
                    continue
                kind = ev_kind[j]
                if kind == "common" or (kind == "g1") == (state is s1):
                    a, b = ev_ends[j]
                    if state.comp[a] == state.comp[b]:
                        closer_count[j] += 1
                        if closer_count[j] == 1:
                            closers.append(j)
                        promo_log.append(j)

    s1.merge_hook = lambda state, moved: hook(state, moved)
    s2.merge_hook = lambda state, moved: hook(state, moved)

    def agree_at(v: int) -> bool:
        c1 = tuple(e for e in s1.rot[v] if e in common)
        c2 = tuple(e for e in s2.rot[v] if e in common)
        if len(c1) <= 2:
            return True
        return canonical_cycle(c1) == canonical_cycle(c2)

    def bump():
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded
        if deadline is not None and nodes % 256 == 0:
            if time.monotonic() > deadline:
                raise BudgetExceeded

    def matching_indices(state_b, vtx: int, eid: int, state_a) -> Optional[list[int]]:
        """Insert indices at ``vtx`` in state_b that keep the common suborder
        equal to state_a's, where state_a already contains ``eid``."""
        rot_a = state_a.rot[vtx]
        commons_a = [e for e in rot_a if e in common]
        if len(commons_a) <= 2:
            return None  # unconstrained
        i = commons_a.index(eid)
        pred = commons_a[i - 1]
        rot_b = state_b.rot[vtx]
        n = len(rot_b)
        valid = []
        for k in range(n):
            before = [e for e in rot_b[:k] if e in common]
            after = [e for e in rot_b[k:] if e in common]
            last_common = before[-1] if before else (after[-1] if after else None)
            if last_common == pred:
                valid.append(k)
        return valid

    def choose() -> Optional[tuple[int, int]]:
        """(event index, option count); fail-first among pending closers."""
        best = None
        for j in closers:
            if placed_flag[j] or closer_count[j] == 0:
                continue
            count = 1
            for st in states_of(ev_kind[j]):
                count *= len(st.placements(ev_eid[j]))
                if count == 0:
                    return (j, 0)
            if count == 1:
                return (j, 1)
            score = (count, 0 if ev_kind[j] == "common" else 1, j)
            if best is None or score < best[0]:
                best = (score, j, count)
        if best is not None:
            return (best[1], best[2])
        for j in range(n_events):
            if not placed_flag[j] and closer_count[j] == 0 and not ev_free[j]:
                return (j, -1)
        for j in range(n_events):
            if not placed_flag[j] and closer_count[j] == 0:
                return (j, -2)  # fringe
        return None

    def rollback_promos(mark: int) -> None:
        while len(promo_log) > mark:
            j = promo_log.pop()
            closer_count[j] -= 1
            if closer_count[j] == 0:
                assert closers and closers[-1] == j
                closers.pop()

    def place(done: int) -> bool:
        if done == n_events:
            return True
        chosen = choose()
        assert chosen is not None
        j, count = chosen
        if count == 0:
            if deaths is not None:
                u0, v0 = ev_ends[j]
                deaths[u0] = deaths.get(u0, 0) + 1
                deaths[v0] = deaths.get(v0, 0) + 1
            return False
        eid, kind = ev_eid[j], ev_kind[j]
        u, v = ev_ends[j]
        placed_flag[j] = True
        promo_mark = len(promo_log)

        if kind != "common":
            state = states_of(kind)[0]
            options = state.placements(eid)
            if count == -2 and options:
                options = options[:1]
            for ku, kv in options:
                bump()
                trail = state.insert(eid, u, ku, v, kv)
                if place(done + 1):
                    return True
                state.undo(trail)
                rollback_promos(promo_mark)
            placed_flag[j] = False
            return False
        for ku1, kv1 in s1.placements(eid):
            bump()
            t1 = s1.insert(eid, u, ku1, v, kv1)
            ok_u = matching_indices(s2, u, eid, s1)
            ok_v = matching_indices(s2, v, eid, s1)
            for ku2, kv2 in s2.placements(eid):
                if ok_u is not None and ku2 not in ok_u:
                    continue
                if ok_v is not None and kv2 not in ok_v:
                    continue
                bump()
                t2 = s2.insert(eid, u, ku2, v, kv2)
                if agree_at(u) and agree_at(v):
                    if place(done + 1):
                        return True
                s2.undo(t2)
                rollback_promos(promo_mark)
            s1.undo(t1)
            rollback_promos(promo_mark)
        placed_flag[j] = False
        return False

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(events) + 1000))
    try:
        found = place(0)
    except BudgetExceeded:
        return ("budget", None, nodes)
    finally:
        sys.setrecursionlimit(old_limit)

    if not found:
        return ("no", None, nodes)
    return ("yes", (s1.rot, s2.rot), nodes)
