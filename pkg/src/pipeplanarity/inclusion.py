"""Inclusion-constrained clustered planarity.

A flat clustered graph is decided against two families of rooted trees: per
cluster, a component tree nests its multi-edge components and a neighbor
tree nests the adjacent clusters; a drawing is consistent when every
subtree's leaves are consecutive around the cluster boundary.  Deciding goes
through a cluster-gadget reduction to simultaneous embedding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .core import (
    FlatClusteredGraph,
    Graph,
    IdAllocator,
    InvalidInstance,
    RotationSystem,
    canonical_cycle,
    classify_components,
    clusters_adjacency,
    connected_components,
    is_cyclic_arc,
    validate_assumptions,
)
from .sefe import Budget, SefeInstance, decide_sefe, remove_common_cycles


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree over hashable node labels; leaves carry edge ids."""

    root: object
    parent: tuple[tuple[object, object], ...]  # node -> parent
    leaf_edge: tuple[tuple[object, int], ...]  # leaf node -> inter-cluster edge
    _children: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        parent = dict(self.parent)
        children: dict = {self.root: []}
        for node, par in parent.items():
            children.setdefault(par, [])
            children.setdefault(node, [])
            children[par].append(node)
        for node in children:
            children[node].sort(key=repr)
        object.__setattr__(self, "_children", children)
        leaf_nodes = set(dict(self.leaf_edge))
        for leaf in leaf_nodes:
            if self._children.get(leaf):
                raise InvalidInstance("leaf with children")

    @staticmethod
    def build(root, parent: Mapping, leaf_edge: Mapping) -> "RootedTree":
        return RootedTree(root, tuple(sorted(parent.items(), key=repr)),
                          tuple(sorted(leaf_edge.items(), key=repr)))

    def nodes(self):
        return [self.root] + [n for n, _ in self.parent]

    def children(self, node):
        return self._children.get(node, [])

    def internal_nodes(self):
        leaf = set(dict(self.leaf_edge))
        return [n for n in self.nodes() if n not in leaf]

    def leaves(self) -> dict:
        return dict(self.leaf_edge)

    def subtree_leaf_edges(self, node) -> frozenset[int]:
        leaves = self.leaves()
        out = set()
        stack = [node]
        while stack:
            n = stack.pop()
            if n in leaves:
                out.add(leaves[n])
            stack.extend(self.children(n))
        return frozenset(out)

    def is_empty(self) -> bool:
        return self.root is None

    @staticmethod
    def empty() -> "RootedTree":
        return RootedTree(None, (), ())


def star_tree(root, leaf_edges: Iterable[int]) -> RootedTree:
    parent = {}
    leaf_edge = {}
    for e in sorted(set(leaf_edges)):
        leaf = ("leaf", e)
        parent[leaf] = root
        leaf_edge[leaf] = e
    return RootedTree.build(root, parent, leaf_edge)


@dataclass(frozen=True)
class IcpInstance:
    clustered: FlatClusteredGraph
    component_trees: tuple[tuple[int, RootedTree], ...]   # cluster -> tree
    neighbor_trees: tuple[tuple[int, RootedTree], ...]
    anchors: tuple[tuple[int, int], ...]                   # cluster -> edge id

    def component_tree(self, mu: int) -> RootedTree:
        return dict(self.component_trees)[mu]

    def neighbor_tree(self, mu: int) -> RootedTree:
        return dict(self.neighbor_trees)[mu]

    def anchor(self, mu: int) -> int:
        return dict(self.anchors)[mu]

    def validate(self) -> None:
        cg = self.clustered
        infos = classify_components(cg)
        for mu in cg.clusters:
            inter = set()
            for v in cg.cluster_vertices(mu):
                inter.update(cg.incident_inter_edges(v))
            multi_inter = set()
            for i in infos:
                if i.cluster == mu and i.multi_edge:
                    multi_inter.update(i.inter_edges)
            x = self.component_tree(mu)
            if not x.is_empty():
                got = frozenset(x.leaves().values())
                if got != frozenset(multi_inter):
                    raise InvalidInstance(
                        f"component tree of {mu} must have one leaf per edge of a "
                        f"multi-edge component")
            elif multi_inter:
                raise InvalidInstance(f"cluster {mu} needs a nonempty component tree")
            y = self.neighbor_tree(mu)
            if frozenset(y.leaves().values()) != frozenset(inter):
                raise InvalidInstance(
                    f"neighbor tree of {mu} must have one leaf per inter-cluster edge")
            e_mu = self.anchor(mu)
            if e_mu not in inter:
                raise InvalidInstance(f"anchor of {mu} must be incident to it")
            if not x.is_empty():
                root_edges = {x.leaves()[leaf] for leaf in x.children(x.root)
                              if leaf in x.leaves()}
                if e_mu not in root_edges:
                    raise InvalidInstance(
                        f"anchor of {mu} must touch the root component")


def default_anchor(cg: FlatClusteredGraph, mu: int,
                   x_tree: Optional[RootedTree]) -> int:
    """Smallest inter-cluster edge at the component-tree root, or at the
    cluster when there is no multi-edge component."""
    if x_tree is not None and not x_tree.is_empty():
        root_edges = sorted(x_tree.leaves()[leaf] for leaf in x_tree.children(x_tree.root)
                            if leaf in x_tree.leaves())
        if root_edges:
            return root_edges[0]
    inter = set()
    for v in cg.cluster_vertices(mu):
        inter.update(cg.incident_inter_edges(v))
    return min(inter)


@dataclass(frozen=True)
class ClusterOrderWitness:
    """Per cluster, the linear boundary-crossing order of its inter-cluster
    edges, starting at the anchor edge."""

    orders: tuple[tuple[int, tuple[int, ...]], ...]

    def order_of(self, mu: int) -> tuple[int, ...]:
        return dict(self.orders)[mu]


def is_consistent(order: tuple[int, ...], x_tree: RootedTree, y_tree: RootedTree,
                  multi_edge_set: frozenset[int]) -> bool:
    """Every subtree's leaf set must be consecutive: in the restriction of
    the order to multi-edge-component edges for the component tree, in the
    whole order for the neighbor tree."""
    if sorted(order) != sorted(set(order)):
        raise InvalidInstance("order lists an edge twice")
    universe = set(order)
    if not x_tree.is_empty():
        if not set(x_tree.leaves().values()) <= universe:
            raise InvalidInstance("component tree over a different edge universe")
    if not set(y_tree.leaves().values()) <= universe:
        raise InvalidInstance("neighbor tree over a different edge universe")

    restricted = [e for e in order if e in multi_edge_set]
    pos_r = {e: i for i, e in enumerate(restricted)}
    if not x_tree.is_empty():
        for node in x_tree.internal_nodes():
            leaves = x_tree.subtree_leaf_edges(node)
            positions = sorted(pos_r[e] for e in leaves)
            if positions and positions[-1] - positions[0] != len(positions) - 1:
                return False
    pos = {e: i for i, e in enumerate(order)}
    for node in y_tree.internal_nodes():
        leaves = y_tree.subtree_leaf_edges(node)
        positions = sorted(pos[e] for e in leaves)
        if positions and positions[-1] - positions[0] != len(positions) - 1:
            return False
    return True


class OrderInterleavingError(InvalidInstance):
    """The order cannot come from a clustered-planar drawing."""


def extract_trees_from_order(cg: FlatClusteredGraph,
                             orders: Mapping[int, tuple[int, ...]]):
    """Build, per cluster, the nesting trees a drawing with these boundary
    orders is consistent with.

    Raises OrderInterleavingError when two components' edges interleave.
    """
    infos = classify_components(cg)
    x_trees: dict[int, RootedTree] = {}
    y_trees: dict[int, RootedTree] = {}
    anchors: dict[int, int] = {}
    for mu in cg.clusters:
        order = tuple(orders[mu])
        comp_of_edge: dict[int, tuple] = {}
        multi_comps = []
        for i in infos:
            if i.cluster != mu:
                continue
            key = (mu, min(i.vertices))
            if i.multi_edge:
                multi_comps.append(key)
            for e in i.inter_edges:
                comp_of_edge[e] = (key, i.multi_edge)
        target_of_edge = {}
        for e in order:
            u, v = cg.graph.ends(e)
            target_of_edge[e] = cg.cluster_of(v) if cg.cluster_of(u) == mu \
                else cg.cluster_of(u)

        anchors[mu] = order[0]

        def build(labels: dict[int, object], root_label) -> RootedTree:
            seq = [labels[e] for e in order if e in labels]
            parent: dict = {}
            leaf_edge: dict = {}
            distinct = []
            for lab in seq:
                if lab not in distinct:
                    distinct.append(lab)
            # interleaving check and nesting construction from the sequence
            for la, lb in itertools.combinations(distinct, 2):
                pattern = [lab for lab in seq if lab in (la, lb)]
                switches = sum(1 for a, b in zip(pattern, pattern[1:]) if a != b)
                if switches > 2:
                    raise OrderInterleavingError(
                        f"edges of {la} and {lb} interleave around cluster {mu}")
            spans = {lab: (min(i for i, x in enumerate(seq) if x == lab),
                           max(i for i, x in enumerate(seq) if x == lab))
                     for lab in distinct}
            for lab in distinct:
                if lab == root_label:
                    continue
                lo, hi = spans[lab]
                best = root_label
                best_span = None
                for other in distinct:
                    if other in (lab, root_label):
                        continue
                    olo, ohi = spans[other]
                    if olo <= lo and hi <= ohi:
                        span = ohi - olo
                        if best_span is None or span < best_span:
                            best, best_span = other, span
                parent[lab] = best
            for e, lab in labels.items():
                leaf = ("leaf", e)
                parent[leaf] = lab
                leaf_edge[leaf] = e
            return RootedTree.build(root_label, parent, leaf_edge)

        if multi_comps:
            multi_labels = {e: key for e, (key, is_multi) in comp_of_edge.items()
                            if is_multi}
            root_comp = comp_of_edge[order[0]][0]
            if not comp_of_edge[order[0]][1]:
                # anchor must touch a multi-edge component: pick the first
                first_multi = next(e for e in order if e in multi_labels)
                root_comp = multi_labels[first_multi]
                anchors[mu] = first_multi
                # rotate the full order to start at the anchor
                i = order.index(first_multi)
                order = order[i:] + order[:i]
            x_trees[mu] = build(multi_labels, root_comp)
        else:
            x_trees[mu] = RootedTree.empty()

        y_labels = {e: ("cluster", target_of_edge[e]) for e in order}
        root_cluster = ("cluster", target_of_edge[order[0]])
        y_trees[mu] = build(y_labels, root_cluster)
    return x_trees, y_trees, anchors


# ---------------------------------------------------------------------------
# Cluster-gadget reduction
# ---------------------------------------------------------------------------

RIM_NAMES = ("rho1", "rho2", "delta", "rho3", "alpha", "beta", "rho4",
             "gamma", "rho5", "delta2", "rho6", "alpha2", "beta2", "rho7")


@dataclass(frozen=True)
class IcpReduction:
    instance: SefeInstance
    rim: tuple[tuple[int, tuple[int, ...]], ...]          # cluster -> 14 rim ids
    y_leaf: tuple[tuple[tuple[int, int], int], ...]       # (cluster, edge) -> y leaf
    y_node: tuple[tuple[tuple[int, object], int], ...]    # (cluster, tree node) -> id
    anchors: tuple[tuple[int, int], ...]
    vertex_provenance: tuple[tuple[int, tuple], ...]

    def rim_of(self, mu: int) -> tuple[int, ...]:
        return dict(self.rim)[mu]


def reduce_icp_to_sefe(inst: IcpInstance) -> IcpReduction:
    """Cluster gadgets on a shared frame cycle.

    Each cluster contributes a rigid wheel, transport stars for the boundary
    order of its inter-cluster edges, copies of its multi-edge components,
    and its two nesting trees in the common graph; exclusive matchings
    propagate the order between them, and inter-gadget edges tie the leaf
    orders of adjacent clusters together.
    """
    violations = validate_assumptions(inst.clustered)
    if violations:
        raise InvalidInstance("; ".join(v.detail for v in violations))
    inst.validate()
    cg = inst.clustered
    infos = classify_components(cg)
    clusters = cg.clusters

    alloc = IdAllocator(cg.max_id() + 1)
    vertices: list[int] = []
    common: list[tuple[int, int, int]] = []
    red: list[tuple[int, int, int]] = []
    blue: list[tuple[int, int, int]] = []
    prov: dict[int, tuple] = {}

    def add_vertex(tag) -> int:
        v = alloc.take()
        vertices.append(v)
        prov[v] = tag
        return v

    def wire(bucket, u, v):
        bucket.append((alloc.take(), min(u, v), max(u, v)))

    rim_ids: dict[int, dict[str, int]] = {}
    y_leaf: dict[tuple[int, int], int] = {}
    x_leaf: dict[tuple[int, int], int] = {}
    y_node_ids: dict[tuple[int, object], int] = {}
    a_leaf: dict[tuple[int, int], int] = {}
    a2_leaf: dict[tuple[int, int], int] = {}
    b_leaf: dict[tuple[int, int], int] = {}
    b2_leaf: dict[tuple[int, int], int] = {}
    b2_center: dict[int, int] = {}

    for mu in clusters:
        rim = {name: add_vertex(("rim", mu, name)) for name in RIM_NAMES}
        rim_ids[mu] = rim
        center = add_vertex(("wheel_center", mu))
        names = list(RIM_NAMES)
        for i, name in enumerate(names):
            wire(common, rim[name], rim[names[(i + 1) % len(names)]])
            wire(common, center, rim[name])

        comp_infos = [i for i in infos if i.cluster == mu]
        multi = [i for i in comp_infos if i.multi_edge]
        multi_edges = sorted({e for i in multi for e in i.inter_edges})
        all_inter = sorted({e for i in comp_infos for e in i.inter_edges})

        # transport stars: two on each side of the wheel
        for store, attach, tag in ((a_leaf, rim["alpha"], "a"),
                                   (a2_leaf, rim["alpha2"], "a2")):
            for e in multi_edges:
                leaf = add_vertex((tag + "_leaf", mu, e))
                store[(mu, e)] = leaf
                wire(common, attach, leaf)
        for store, attach, tag in ((b_leaf, rim["beta"], "b"),
                                   (b2_leaf, rim["beta2"], "b2")):
            bc = add_vertex((tag + "_center", mu))
            wire(common, attach, bc)
            if tag == "b2":
                b2_center[mu] = bc
            for e in multi_edges:
                leaf = add_vertex((tag + "_leaf", mu, e))
                store[(mu, e)] = leaf
                wire(common, bc, leaf)

        # component stars and copies
        cc = add_vertex(("c_center", mu))
        wire(common, rim["gamma"], cc)
        z_of: dict[tuple, int] = {}
        for i in multi:
            key = (mu, min(i.vertices))
            z = add_vertex(("z", mu, min(i.vertices)))
            z_of[key] = z
            wire(common, cc, z)
            for v in i.vertices:
                vertices.append(v)
                prov[v] = ("cluster_vertex", v)
            sub = cg.graph.induced(i.vertices)
            for eid, a, b in sub.edges:
                common.append((eid, a, b))
            for v in sorted(i.vertices):
                if cg.incident_inter_edges(v):
                    wire(blue, z, v)

        # nesting trees as common subtrees
        x_tree = inst.component_tree(mu)
        if not x_tree.is_empty():
            node_id: dict = {}
            for node in x_tree.nodes():
                if node in x_tree.leaves():
                    e = x_tree.leaves()[node]
                    nid = add_vertex(("x_leaf", mu, e))
                    x_leaf[(mu, e)] = nid
                else:
                    nid = add_vertex(("x_node", mu, node))
                node_id[node] = nid
            for node, par in x_tree.parent:
                wire(common, node_id[node], node_id[par])
        y_tree = inst.neighbor_tree(mu)
        for node in y_tree.nodes():
            if node in y_tree.leaves():
                e = y_tree.leaves()[node]
                nid = add_vertex(("y_leaf", mu, e))
                y_leaf[(mu, e)] = nid
            else:
                nid = add_vertex(("y_node", mu, node))
            y_node_ids[(mu, node)] = nid
        for node, par in y_tree.parent:
            wire(common, y_node_ids[(mu, node)], y_node_ids[(mu, par)])

        # anchors into the wheel
        e_mu = inst.anchor(mu)
        wire(common, y_leaf[(mu, e_mu)], rim["delta"])
        if not x_tree.is_empty():
            wire(common, x_leaf[(mu, e_mu)], rim["delta2"])

        # exclusive chords of the wheel
        wire(red, rim["rho3"], rim["rho6"])
        wire(blue, rim["rho2"], rim["rho7"])
        wire(blue, rim["rho4"], rim["rho5"])

        # exclusive transport matchings
        for i in multi:
            for v in sorted(i.vertices):
                for e in cg.incident_inter_edges(v):
                    wire(red, v, x_leaf[(mu, e)])
        for e in multi_edges:
            wire(red, b_leaf[(mu, e)], a_leaf[(mu, e)])
            wire(red, a2_leaf[(mu, e)], b2_leaf[(mu, e)])
            wire(blue, x_leaf[(mu, e)], b_leaf[(mu, e)])
            wire(blue, a_leaf[(mu, e)], a2_leaf[(mu, e)])
            wire(blue, b2_leaf[(mu, e)], y_leaf[(mu, e)])
        for e in all_inter:
            if e not in multi_edges:
                wire(blue, y_leaf[(mu, e)], b2_center[mu])

    # frame cycle and gadget attachments
    sigma = {mu: add_vertex(("sigma", mu)) for mu in clusters}
    sigma_star = add_vertex(("sigma_star",))
    cyc = [sigma[mu] for mu in clusters] + [sigma_star]
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        wire(common, a, b)
    wire(red, sigma_star, rim_ids[clusters[0]]["rho1"])
    for mu in clusters:
        wire(blue, rim_ids[mu]["rho1"], sigma[mu])

    # inter-gadget edges per inter-cluster edge
    for e in cg.inter_cluster_edges():
        u, v = cg.graph.ends(e)
        mu, nu = cg.cluster_of(u), cg.cluster_of(v)
        wire(red, y_leaf[(mu, e)], y_leaf[(nu, e)])

    edges1 = common + red
    edges2 = common + blue
    sefe_inst = SefeInstance.build(vertices, edges1, edges2)
    sefe_inst = remove_common_cycles(sefe_inst)
    return IcpReduction(
        instance=sefe_inst,
        rim=tuple(sorted((mu, tuple(rim_ids[mu][n] for n in RIM_NAMES))
                         for mu in clusters)),
        y_leaf=tuple(sorted(y_leaf.items())),
        y_node=tuple(sorted(y_node_ids.items(), key=repr)),
        anchors=tuple(sorted(dict(inst.anchors).items())),
        vertex_provenance=tuple(sorted(prov.items())),
    )


@dataclass(frozen=True)
class IcpVerdict:
    status: str
    witness: Optional[ClusterOrderWitness]
    nodes: int
    elapsed_ms: int


def decide_icp(inst: IcpInstance, budget: Optional[Budget] = None) -> IcpVerdict:
    """Decide via the cluster-gadget reduction; a yes carries per-cluster
    boundary orders recovered from the embedded neighbor trees."""
    reduction = reduce_icp_to_sefe(inst)
    res = decide_sefe(reduction.instance, budget)
    if res.status != "yes":
        return IcpVerdict(res.status, None, res.nodes, res.elapsed_ms)
    orders = recover_orders(inst, reduction, res.witness.rotation1)
    return IcpVerdict("yes", orders, res.nodes, res.elapsed_ms)


def recover_orders(inst: IcpInstance, reduction: IcpReduction,
                   rotation: RotationSystem) -> ClusterOrderWitness:
    """Boundary orders read back from the witness: the reverse of the leaf
    order of each embedded neighbor tree, cut at the anchor edge."""
    ends = {eid: (u, v) for eid, u, v in reduction.instance.edges1}
    leaf_to_edge: dict[int, dict[int, int]] = {}
    for (mu, e), leaf in reduction.y_leaf:
        leaf_to_edge.setdefault(mu, {})[leaf] = e
    out = []
    for mu in inst.clustered.clusters:
        y_tree = inst.neighbor_tree(mu)
        root_id = dict(reduction.y_node)[(mu, y_tree.root)]
        leaves_here = leaf_to_edge[mu]
        seq: list[int] = []

        def tour(node_vertex: int, parent_vertex: Optional[int]) -> None:
            rot = list(rotation.at(node_vertex))
            nbrs = []
            for eid in rot:
                a, b = ends[eid]
                w = b if a == node_vertex else a
                nbrs.append(w)
            if parent_vertex is not None and parent_vertex in nbrs:
                i = nbrs.index(parent_vertex)
                nbrs = nbrs[i + 1:] + nbrs[:i]
            for w in nbrs:
                if w in leaves_here:
                    seq.append(leaves_here[w])
                elif (w, node_vertex) in tree_edges:
                    tour(w, node_vertex)

        tree_edges = set()
        id_of = {node: nid for (m, node), nid in reduction.y_node if m == mu}
        for node, par in y_tree.parent:
            a, b = id_of[node], id_of[par]
            tree_edges.add((a, b))
            tree_edges.add((b, a))
        tour(root_id, None)
        order = tuple(reversed(seq))
        anchor = inst.anchor(mu)
        i = order.index(anchor)
        out.append((mu, order[i:] + order[:i]))
    return ClusterOrderWitness(tuple(sorted(out)))
