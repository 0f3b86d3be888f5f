"""Planarity testing with embedding witnesses.

The yes/no decision runs the PQ-tree vertex-addition construction per block;
a witness rotation system is built independently by incremental face
insertion, so the two routes cross-check each other.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    Graph,
    InvalidInstance,
    RotationSystem,
    block_cut_tree,
    connected_components,
    is_planar_rotation,
)
from .pqtree import planar_orders_around


def is_planar(g: Graph) -> tuple[bool, Optional[RotationSystem]]:
    """Decide planarity; on yes, also return a planar rotation system."""
    for comp in connected_components(g):
        sub = g.induced(comp)
        if sub.num_edges() == 0:
            continue
        for block in block_cut_tree(sub).blocks:
            if block.trivial:
                continue
            bg = Graph.build(block.vertices,
                             [(eid, *g.ends(eid)) for eid in block.edge_ids])
            if planar_orders_around(bg, min(block.vertices)) is None:
                return False, None
    rot = embed_planar(g)
    if rot is None:
        raise AssertionError("embedding failed although the decision said planar")
    return True, rot


def embed_planar(g: Graph) -> Optional[RotationSystem]:
    """Planar rotation system by per-block face insertion, or None."""
    rotations: dict[int, list[int]] = {v: [] for v in g.vertices}
    for comp in connected_components(g):
        sub = Graph.build(comp, [(eid, u, v) for eid, u, v in g.edges
                                 if u in comp and v in comp])
        if sub.num_edges() == 0:
            continue
        for block in block_cut_tree(sub).blocks:
            bg = Graph.build(block.vertices,
                             [(eid, *g.ends(eid)) for eid in block.edge_ids])
            block_rot = _embed_biconnected(bg)
            if block_rot is None:
                return None
            for v in block.vertices:
                rotations[v].extend(block_rot[v])
    rot = RotationSystem.build({v: tuple(r) for v, r in rotations.items()})
    if not is_planar_rotation(g, rot):
        return None
    return rot


def _embed_biconnected(g: Graph) -> Optional[dict[int, list[int]]]:
    """Face-insertion embedding of a biconnected graph (single edges allowed)."""
    if g.num_edges() == 1:
        eid, u, v = g.edges[0]
        return {u: [eid], v: [eid]}

    cycle = _find_cycle(g)
    assert cycle is not None

    # faces as dart cycles; dart = (eid, tail)
    def face_of_cycle(cyc: list[tuple[int, int]]) -> list[tuple[int, int]]:
        return list(cyc)

    darts_fwd = []
    for eid, u in cycle:
        darts_fwd.append((eid, u))
    darts_bwd = []
    for eid, u in reversed(cycle):
        darts_bwd.append((eid, g.other_end(eid, u)))
    faces: list[list[tuple[int, int]]] = [darts_fwd, darts_bwd]

    embedded_edges = {eid for eid, _ in cycle}
    embedded_vertices = {u for _, u in cycle}

    while len(embedded_edges) < g.num_edges():
        fragments = _fragments(g, embedded_edges, embedded_vertices)
        best = None
        for frag in fragments:
            admissible = [i for i, f in enumerate(faces)
                          if frag.attachments <= {g.other_end(e, t) for e, t in f} | {t for e, t in f}]
            if not admissible:
                return None
            if best is None or len(admissible) < len(best[1]):
                best = (frag, admissible)
            if len(admissible) == 1:
                break
        frag, admissible = best
        face_idx = admissible[0]
        path = _fragment_path(g, frag)
        _insert_path(g, faces, face_idx, path)
        for eid, u, v in path_edges(path):
            embedded_edges.add(eid)
        for x in path.vertices:
            embedded_vertices.add(x)

    rotations: dict[int, list[int]] = {v: [] for v in g.vertices}
    succ: dict[int, dict[int, int]] = {v: {} for v in g.vertices}
    for f in faces:
        for i, (eid, tail) in enumerate(f):
            nxt_eid, nxt_tail = f[(i + 1) % len(f)]
            head = g.other_end(eid, tail)
            assert nxt_tail == head
            succ[head][nxt_eid] = eid  # rotation successor of the next out-edge
    for v in g.vertices:
        if not succ[v]:
            continue
        start = next(iter(succ[v]))
        rot = [start]
        while True:
            nxt = succ[v][rot[-1]]
            if nxt == start:
                break
            rot.append(nxt)
        if len(rot) != g.degree(v):
            return None
        rotations[v] = rot
    return rotations


class _Fragment:
    def __init__(self, edges: set[int], attachments: set[int], interior: set[int]):
        self.edges = edges
        self.attachments = attachments
        self.interior = interior


def _fragments(g: Graph, embedded_edges: set[int], embedded_vertices: set[int]):
    frags = []
    # chords between embedded vertices
    for eid, u, v in g.edges:
        if eid in embedded_edges:
            continue
        if u in embedded_vertices and v in embedded_vertices:
            frags.append(_Fragment({eid}, {u, v}, set()))
    # components of the unembedded part
    seen: set[int] = set()
    for v0 in g.vertices:
        if v0 in embedded_vertices or v0 in seen:
            continue
        interior = {v0}
        stack = [v0]
        edges: set[int] = set()
        attach: set[int] = set()
        while stack:
            x = stack.pop()
            for eid in g.incident(x):
                if eid in embedded_edges:
                    continue
                y = g.other_end(eid, x)
                edges.add(eid)
                if y in embedded_vertices:
                    attach.add(y)
                elif y not in interior:
                    interior.add(y)
                    stack.append(y)
        seen |= interior
        frags.append(_Fragment(edges, attach, interior))
    return frags


class _Path:
    def __init__(self, vertices: list[int], eids: list[int]):
        self.vertices = vertices
        self.eids = eids


def path_edges(path: _Path):
    for i, eid in enumerate(path.eids):
        yield eid, path.vertices[i], path.vertices[i + 1]


def _fragment_path(g: Graph, frag: _Fragment) -> _Path:
    """A path through the fragment between two distinct attachment vertices."""
    targets = sorted(frag.attachments)
    a = targets[0]
    prev: dict[int, tuple[int, int]] = {}
    queue = [a]
    seen = {a}
    goal = None
    while queue:
        x = queue.pop(0)
        for eid in sorted(g.incident(x)):
            if eid not in frag.edges:
                continue
            y = g.other_end(eid, x)
            if y in seen:
                continue
            prev[y] = (x, eid)
            if y in frag.attachments and y != a:
                goal = y
                queue = []
                break
            if y not in frag.attachments:
                seen.add(y)
                queue.append(y)
    assert goal is not None, "fragment with a single attachment in a biconnected graph"
    verts = [goal]
    eids = []
    while verts[-1] != a:
        x, eid = prev[verts[-1]]
        eids.append(eid)
        verts.append(x)
    verts.reverse()
    eids.reverse()
    return _Path(verts, eids)


def _insert_path(g: Graph, faces: list[list[tuple[int, int]]], face_idx: int,
                 path: _Path) -> None:
    face = faces[face_idx]
    a, b = path.vertices[0], path.vertices[-1]
    heads = [g.other_end(eid, tail) for eid, tail in face]
    ia = heads.index(a)
    ib = heads.index(b)
    # darts of the path in both directions
    fwd = [(eid, path.vertices[i]) for i, eid in enumerate(path.eids)]
    bwd = [(eid, path.vertices[i + 1]) for i, eid in reversed(list(enumerate(path.eids)))]
    arc_a_to_b = face[ia + 1:ib + 1] if ia < ib else face[ia + 1:] + face[:ib + 1]
    arc_b_to_a = face[ib + 1:ia + 1] if ib < ia else face[ib + 1:] + face[:ia + 1]
    faces[face_idx] = fwd + arc_b_to_a
    faces.append(bwd + arc_a_to_b)


def _find_cycle(g: Graph) -> Optional[list[tuple[int, int]]]:
    """A cycle as a dart list [(eid, tail), ...] tracing it once around."""
    parent: dict[int, tuple[int, int]] = {}
    start = g.vertices[0]
    parent[start] = (-1, -1)
    stack = [start]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        for eid in sorted(g.incident(x)):
            y = g.other_end(eid, x)
            if y not in parent:
                parent[y] = (x, eid)
                stack.append(y)
            elif parent[x] != (y, eid) and parent[y] != (x, eid):
                # non-tree edge: close the cycle through the two tree paths
                anc_x = _ancestors(parent, x)
                anc_y = _ancestors(parent, y)
                common = None
                ys = {v for v, _ in anc_y}
                for v, _ in anc_x:
                    if v in ys:
                        common = v
                        break
                up_y = []
                cur = y
                while cur != common:
                    p, pe = parent[cur]
                    up_y.append((pe, cur))
                    cur = p
                down_x = []
                cur = x
                while cur != common:
                    p, pe = parent[cur]
                    down_x.append((pe, p))
                    cur = p
                down_x.reverse()
                return down_x + [(eid, x)] + up_y
    return None


def _ancestors(parent, v):
    out = []
    while v in parent:
        out.append((v, parent[v][1]))
        nxt = parent[v][0]
        if nxt == -1:
            break
        v = nxt
    return out
