"""Line-oriented instance files.

One format tag per instance kind; the canonical form sorts every section so
that serialize(parse(text)) is byte-stable.  All ids are non-negative
integers assigned by the writer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import FlatClusteredGraph, Graph, InvalidInstance, RotationSystem
from .inclusion import IcpInstance, RootedTree, default_anchor
from .sefe import SefeInstance
from .strip import StripInstance

SCHEMA_VERSION = "1"
FORMATS = ("flat-cgraph", "embedded-pipes", "strip", "sefe", "icp")


class ParseError(InvalidInstance):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class InstanceFile:
    kind: str
    payload: object  # one of the module input types

    def serialize(self) -> str:
        return serialize(self)


def _tokens(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield i, line.split()


def parse(text: str) -> InstanceFile:
    """Parse any supported instance file; strict about the schema."""
    rows = list(_tokens(text))
    if not rows:
        raise ParseError(0, "empty file")
    ln, head = rows[0]
    if len(head) != 3 or head[0] != "format":
        raise ParseError(ln, "expected 'format <kind> <version>' header")
    kind, version = head[1], head[2]
    if kind not in FORMATS:
        raise ParseError(ln, f"unknown format tag {kind!r}")
    if version != SCHEMA_VERSION:
        raise ParseError(ln, f"unsupported schema version {version!r}")
    body = rows[1:]
    if kind == "strip":
        return InstanceFile(kind, _parse_strip(body))
    if kind == "sefe":
        return InstanceFile(kind, _parse_sefe(body))
    if kind == "flat-cgraph":
        return InstanceFile(kind, _parse_flat(body))
    if kind == "embedded-pipes":
        return InstanceFile(kind, _parse_embedded(body))
    return InstanceFile(kind, _parse_icp(body))


def _ints(ln, parts, n, what):
    if len(parts) != n:
        raise ParseError(ln, f"expected {n} fields for {what}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ParseError(ln, f"non-integer field in {what}")


def _parse_graph_rows(body, vertex_extra: Optional[str]):
    vertices: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    rest = []
    for ln, parts in body:
        if parts[0] == "vertex":
            if vertex_extra is None:
                (v,) = _ints(ln, parts[1:], 1, "vertex")
                vertices[v] = 0
            else:
                if len(parts) != 4 or parts[2] != vertex_extra:
                    raise ParseError(ln, f"expected 'vertex <id> {vertex_extra} <value>'")
                v, value = _ints(ln, [parts[1], parts[3]], 2, "vertex")
                vertices[v] = value
        elif parts[0] == "edge":
            eid, u, v = _ints(ln, parts[1:], 3, "edge")
            edges.append((eid, u, v))
        else:
            rest.append((ln, parts))
    return vertices, edges, rest


def _parse_strip(body) -> StripInstance:
    vertices, edges, rest = _parse_graph_rows(body, "strip")
    if rest:
        raise ParseError(rest[0][0], f"unexpected row {rest[0][1][0]!r}")
    try:
        return StripInstance.build(Graph.build(vertices, edges), vertices)
    except InvalidInstance as exc:
        raise ParseError(0, str(exc))


def _parse_flat(body) -> FlatClusteredGraph:
    vertices, edges, rest = _parse_graph_rows(body, "cluster")
    if rest:
        raise ParseError(rest[0][0], f"unexpected row {rest[0][1][0]!r}")
    try:
        return FlatClusteredGraph.build(Graph.build(vertices, edges), vertices)
    except InvalidInstance as exc:
        raise ParseError(0, str(exc))


def _parse_embedded(body):
    from .embedded_pipes import EmbeddedPipesInstance

    vertices, edges, rest = _parse_graph_rows(body, "cluster")
    rotations: dict[int, tuple[int, ...]] = {}
    for ln, parts in rest:
        if parts[0] != "rotation":
            raise ParseError(ln, f"unexpected row {parts[0]!r}")
        vals = _ints(ln, parts[1:], len(parts) - 1, "rotation")
        rotations[vals[0]] = tuple(vals[1:])
    try:
        cg = FlatClusteredGraph.build(Graph.build(vertices, edges), vertices)
        from .core import clusters_adjacency

        ga = clusters_adjacency(cg)
        rot_edges: dict[int, list[int]] = {}
        # rotations name adjacent clusters; translate to adjacency edge ids
        for mu, neighbors in rotations.items():
            ids = []
            for nu in neighbors:
                eid = next((e for e, a, b in ga.edges if {a, b} == {mu, nu}), None)
                if eid is None:
                    raise InvalidInstance(f"clusters {mu} and {nu} are not adjacent")
                ids.append(eid)
            rot_edges[mu] = ids
        for mu in ga.vertices:
            rot_edges.setdefault(mu, list(ga.incident(mu)))
        rot = RotationSystem.build({mu: tuple(r) for mu, r in rot_edges.items()})
        return EmbeddedPipesInstance(cg, rot)
    except InvalidInstance as exc:
        raise ParseError(0, str(exc))


def _parse_sefe(body) -> SefeInstance:
    vertices: list[int] = []
    e1, e2 = [], []
    for ln, parts in body:
        if parts[0] == "vertex":
            (v,) = _ints(ln, parts[1:], 1, "vertex")
            vertices.append(v)
        elif parts[0] == "edge":
            if len(parts) != 5:
                raise ParseError(ln, "expected 'edge <id> <u> <v> <sets>'")
            eid, u, v = _ints(ln, parts[1:4], 3, "edge")
            sets = parts[4]
            if sets not in ("1", "2", "12"):
                raise ParseError(ln, "edge sets must be 1, 2 or 12")
            if "1" in sets:
                e1.append((eid, u, v))
            if "2" in sets:
                e2.append((eid, u, v))
        else:
            raise ParseError(ln, f"unexpected row {parts[0]!r}")
    try:
        return SefeInstance.build(vertices, e1, e2)
    except InvalidInstance as exc:
        raise ParseError(0, str(exc))


def _parse_icp(body) -> IcpInstance:
    vertices, edges, rest = _parse_graph_rows(body, "cluster")
    tree_rows = {"x": {}, "y": {}}
    anchors: dict[int, int] = {}
    for ln, parts in rest:
        if parts[0] == "tree":
            if len(parts) < 5:
                raise ParseError(ln, "expected 'tree x|y <cluster> <node> <parent|root> [edge <eid>]'")
            which, cluster, node, parent = parts[1], parts[2], parts[3], parts[4]
            if which not in ("x", "y"):
                raise ParseError(ln, "tree kind must be x or y")
            cluster = int(cluster)
            edge = None
            if len(parts) == 7 and parts[5] == "edge":
                edge = int(parts[6])
            elif len(parts) != 5:
                raise ParseError(ln, "trailing fields must be 'edge <eid>'")
            tree_rows[which].setdefault(cluster, []).append((node, parent, edge))
        elif parts[0] == "anchor":
            mu, e = _ints(ln, parts[1:], 2, "anchor")
            anchors[mu] = e
        else:
            raise ParseError(ln, f"unexpected row {parts[0]!r}")
    try:
        cg = FlatClusteredGraph.build(Graph.build(vertices, edges), vertices)
        xts, yts = {}, {}
        for which, store in (("x", xts), ("y", yts)):
            for mu, rows in tree_rows[which].items():
                parent_map, leaf_map = {}, {}
                root = None
                for node, parent, edge in rows:
                    if parent == "root":
                        root = node
                    else:
                        parent_map[node] = parent
                    if edge is not None:
                        leaf_map[node] = edge
                if root is None:
                    raise InvalidInstance(f"{which}-tree of {mu} has no root row")
                store[mu] = RootedTree.build(root, parent_map, leaf_map)
        for mu in cg.clusters:
            xts.setdefault(mu, RootedTree.empty())
            if mu not in yts:
                raise InvalidInstance(f"missing y-tree for cluster {mu}")
            anchors.setdefault(mu, default_anchor(cg, mu, xts[mu]))
        inst = IcpInstance(cg, tuple(sorted(xts.items())),
                           tuple(sorted(yts.items())), tuple(sorted(anchors.items())))
        inst.validate()
        return inst
    except InvalidInstance as exc:
        raise ParseError(0, str(exc))


# ---------------------------------------------------------------------------
# Serialization (canonical)
# ---------------------------------------------------------------------------


def serialize(f: InstanceFile) -> str:
    lines = [f"format {f.kind} {SCHEMA_VERSION}"]
    if f.kind == "strip":
        s: StripInstance = f.payload
        for v in s.graph.vertices:
            lines.append(f"vertex {v} strip {s.strip(v)}")
        for eid, u, v in s.graph.edges:
            lines.append(f"edge {eid} {u} {v}")
    elif f.kind == "flat-cgraph":
        cg: FlatClusteredGraph = f.payload
        for v in cg.graph.vertices:
            lines.append(f"vertex {v} cluster {cg.cluster_of(v)}")
        for eid, u, v in cg.graph.edges:
            lines.append(f"edge {eid} {u} {v}")
    elif f.kind == "embedded-pipes":
        inst = f.payload
        cg = inst.clustered
        ga = inst.adjacency_graph()
        for v in cg.graph.vertices:
            lines.append(f"vertex {v} cluster {cg.cluster_of(v)}")
        for eid, u, v in cg.graph.edges:
            lines.append(f"edge {eid} {u} {v}")
        for mu in ga.vertices:
            neighbors = [str(ga.other_end(e, mu)) for e in inst.adjacency_rotation.at(mu)]
            if neighbors:
                lines.append(f"rotation {mu} " + " ".join(neighbors))
    elif f.kind == "sefe":
        inst: SefeInstance = f.payload
        common = inst.common_edge_ids()
        for v in inst.vertices:
            lines.append(f"vertex {v}")
        rows = {}
        for eid, u, v in inst.edges1:
            rows[eid] = (u, v, "12" if eid in common else "1")
        for eid, u, v in inst.edges2:
            if eid not in rows:
                rows[eid] = (u, v, "2")
        for eid in sorted(rows):
            u, v, sets = rows[eid]
            lines.append(f"edge {eid} {u} {v} {sets}")
    elif f.kind == "icp":
        inst: IcpInstance = f.payload
        cg = inst.clustered
        for v in cg.graph.vertices:
            lines.append(f"vertex {v} cluster {cg.cluster_of(v)}")
        for eid, u, v in cg.graph.edges:
            lines.append(f"edge {eid} {u} {v}")
        for which, trees in (("x", inst.component_trees), ("y", inst.neighbor_trees)):
            for mu, tree in trees:
                if tree.is_empty():
                    continue
                leaves = tree.leaves()
                rows = [(tree.root, "root")]
                rows += [(node, parent) for node, parent in tree.parent]
                for node, parent in sorted(rows, key=lambda r: _node_token(r[0])):
                    token = _node_token(node)
                    ptoken = parent if parent == "root" else _node_token(parent)
                    if node in leaves:
                        lines.append(f"tree {which} {mu} {token} {ptoken} edge {leaves[node]}")
                    else:
                        lines.append(f"tree {which} {mu} {token} {ptoken}")
        for mu, e in inst.anchors:
            lines.append(f"anchor {mu} {e}")
    else:
        raise InvalidInstance(f"unknown kind {f.kind!r}")
    return "\n".join(lines) + "\n"


def _node_token(node) -> str:
    if isinstance(node, tuple):
        return "~".join(str(x) for x in node)
    return str(node)


def canonicalize(text: str) -> str:
    return serialize(parse(text))
