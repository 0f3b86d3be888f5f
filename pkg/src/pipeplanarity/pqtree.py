"""Unrooted PQ-trees over circular orders.

A tree represents the family O(T) of directed circular orders of its ground
set: P-nodes order their neighbors freely, Q-nodes fix the cyclic order of
their neighbors up to reversal.  `reduce` intersects O(T) with the orders in
which a given subset is consecutive; `planar_orders_around` builds the tree
of admissible edge orders around a designated vertex of a biconnected planar
graph by st-numbering vertex addition.

Normal form: no degree-2 nodes, P-nodes have degree >= 3, Q-nodes degree >= 4.
Trees are immutable; every operation returns a fresh tree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import CapExceeded, Graph, InvalidInstance, canonical_cycle, is_cyclic_arc

LEAF = "leaf"
P = "P"
Q = "Q"

_FULL = 2
_EMPTY = 0
_MIXED = 1


@dataclass(frozen=True)
class PQTree:
    kinds: tuple[tuple[int, str], ...]
    adj: tuple[tuple[int, tuple[int, ...]], ...]   # Q rows are reference cyclic orders
    leaf_elems: tuple[tuple[int, int], ...]        # leaf node id -> ground element
    _kind: dict = field(init=False, compare=False, repr=False, default=None)
    _adj: dict = field(init=False, compare=False, repr=False, default=None)
    _elem: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_kind", dict(self.kinds))
        object.__setattr__(self, "_adj", {n: list(nb) for n, nb in self.adj})
        object.__setattr__(self, "_elem", dict(self.leaf_elems))

    def ground_set(self) -> frozenset[int]:
        return frozenset(e for _, e in self.leaf_elems)

    def leaf_count(self) -> int:
        return len(self.leaf_elems)

    def node_ids(self) -> list[int]:
        return [n for n, _ in self.kinds]

    def kind(self, n: int) -> str:
        return self._kind[n]

    def neighbors(self, n: int) -> tuple[int, ...]:
        return tuple(self._adj[n])

    def internal_nodes(self) -> list[int]:
        return [n for n, k in self.kinds if k != LEAF]


class _MTree:
    """Mutable working representation used inside the tree operations."""

    def __init__(self) -> None:
        self.kind: dict[int, str] = {}
        self.adj: dict[int, list[int]] = {}
        self.elem: dict[int, int] = {}
        self._ids = itertools.count()

    @staticmethod
    def from_tree(t: PQTree) -> "_MTree":
        mt = _MTree()
        mt.kind = dict(t._kind)
        mt.adj = {n: list(nb) for n, nb in t._adj.items()}
        mt.elem = dict(t._elem)
        mt._ids = itertools.count(max(mt.kind) + 1 if mt.kind else 0)
        return mt

    def freeze(self) -> PQTree:
        return PQTree(
            tuple(sorted(self.kind.items())),
            tuple(sorted((n, tuple(nb)) for n, nb in self.adj.items())),
            tuple(sorted(self.elem.items())),
        )

    def new_node(self, kind: str, neighbors: Iterable[int] = ()) -> int:
        n = next(self._ids)
        self.kind[n] = kind
        self.adj[n] = list(neighbors)
        return n

    def delete(self, n: int) -> None:
        del self.kind[n]
        del self.adj[n]
        self.elem.pop(n, None)

    def replace_ref(self, node: int, old: int, new: int) -> None:
        i = self.adj[node].index(old)
        self.adj[node][i] = new

    def leaves_beyond(self, u: int, v: int) -> frozenset[int]:
        """Ground elements in the component of v after removing edge (u, v)."""
        out = set()
        stack = [(u, v)]
        while stack:
            par, n = stack.pop()
            if self.kind[n] == LEAF:
                out.add(self.elem[n])
            for w in self.adj[n]:
                if w != par:
                    stack.append((n, w))
        return frozenset(out)

    def normalize_node(self, n: int) -> None:
        """Contract degree-2 nodes, demote degree-3 Q-nodes to P."""
        if self.kind[n] == LEAF:
            return
        deg = len(self.adj[n])
        if deg == 2:
            a, b = self.adj[n]
            self.replace_ref(a, n, b)
            self.replace_ref(b, n, a)
            self.delete(n)
        elif deg == 3 and self.kind[n] == Q:
            self.kind[n] = P


# ---------------------------------------------------------------------------
# Construction and basic queries
# ---------------------------------------------------------------------------


def universal(ground: Iterable[int]) -> PQTree:
    """Tree admitting every directed circular order of the ground set."""
    elems = sorted(set(ground))
    if not elems:
        raise InvalidInstance("ground set must be nonempty")
    mt = _MTree()
    leaves = [mt.new_node(LEAF) for _ in elems]
    for n, e in zip(leaves, elems):
        mt.elem[n] = e
    if len(elems) == 1:
        pass
    elif len(elems) == 2:
        mt.adj[leaves[0]] = [leaves[1]]
        mt.adj[leaves[1]] = [leaves[0]]
    else:
        center = mt.new_node(P, leaves)
        for n in leaves:
            mt.adj[n] = [center]
    return mt.freeze()


def count_orders(t: PQTree) -> int:
    if t.leaf_count() <= 2:
        return 1
    total = 1
    for n, k in t.kinds:
        if k == P:
            total *= math.factorial(len(t._adj[n]) - 1)
        elif k == Q:
            total *= 2
    return total


def enumerate_orders(t: PQTree, cap: int = 100_000) -> list[tuple[int, ...]]:
    """All directed circular orders in O(t), canonically rotated.

    Raises CapExceeded when |O(t)| is larger than ``cap``; never truncates.
    """
    n = count_orders(t)
    if n > cap:
        raise CapExceeded(f"{n} orders exceed cap {cap}")
    elems = sorted(t.ground_set())
    if len(elems) == 1:
        return [(elems[0],)]
    if len(elems) == 2:
        return [tuple(elems)]
    anchor = next(node for node, e in t.leaf_elems if e == min(elems))

    def seqs(node: int, parent: int) -> list[list[int]]:
        k = t._kind[node]
        if k == LEAF:
            return [[t._elem[node]]]
        nb = list(t._adj[node])
        i = nb.index(parent)
        rest = nb[i + 1:] + nb[:i]
        out: list[list[int]] = []
        if k == P:
            for perm in itertools.permutations(rest):
                parts = [seqs(w, node) for w in perm]
                for combo in itertools.product(*parts):
                    out.append([x for part in combo for x in part])
        else:
            for arrangement in (rest, [x for x in reversed(rest)]):
                parts = [seqs(w, node) for w in arrangement]
                for combo in itertools.product(*parts):
                    out.append([x for part in combo for x in part])
        return out

    root = t._adj[anchor][0]
    result = [canonical_cycle([t._elem[anchor]] + s) for s in seqs(root, anchor)]
    return sorted(set(result))


_is_cyclic_arc = is_cyclic_arc


def contains(t: PQTree, order: Sequence[int]) -> bool:
    """Membership of a directed circular order in O(t)."""
    order = tuple(order)
    if sorted(order) != sorted(t.ground_set()):
        raise InvalidInstance("order is not a circular order of the ground set")
    n = len(order)
    if n <= 2:
        return True
    pos = {e: i for i, e in enumerate(order)}

    sides: dict[tuple[int, int], frozenset[int]] = {}
    mt = _MTree.from_tree(t)
    for node in mt.kind:
        for w in mt.adj[node]:
            if (node, w) not in sides:
                sides[(node, w)] = mt.leaves_beyond(node, w)

    for node, k in t.kinds:
        if k == LEAF:
            continue
        for w in t._adj[node]:
            leafset = sides[(node, w)]
            positions = [pos[e] for e in leafset]
            if not _is_cyclic_arc(positions, n):
                return False
        if k == Q:
            # neighbors sorted by arc start must match the stored cyclic order
            starts = []
            for w in t._adj[node]:
                leafset = sides[(node, w)]
                ps = sorted(pos[e] for e in leafset)
                # arc start: the position whose predecessor is not in the arc
                pset = set(ps)
                start = next(p for p in ps if (p - 1) % n not in pset)
                starts.append(start)
            observed = [w for _, w in sorted(zip(starts, t._adj[node]))]
            ref = list(t._adj[node])
            ok = False
            for cand in (ref, list(reversed(ref))):
                for shift in range(len(cand)):
                    if cand[shift:] + cand[:shift] == observed:
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return False
    return True


# ---------------------------------------------------------------------------
# Reduction (consecutivity constraint)
# ---------------------------------------------------------------------------


def _state(leaves: frozenset[int], s: frozenset[int]) -> int:
    inter = len(leaves & s)
    if inter == 0:
        return _EMPTY
    if inter == len(leaves):
        return _FULL
    return _MIXED


def reduce(t: PQTree, s: Iterable[int]) -> Optional[PQTree]:
    """Restrict O(t) to the orders in which ``s`` is consecutive.

    Returns None when no order of O(t) keeps ``s`` consecutive.
    """
    ground = t.ground_set()
    s = frozenset(s)
    if not s <= ground:
        raise InvalidInstance("constraint set is not a subset of the ground set")
    if len(s) <= 1 or len(ground - s) <= 1:
        return t

    mt = _MTree.from_tree(t)
    side: dict[tuple[int, int], int] = {}
    for node in mt.kind:
        for w in mt.adj[node]:
            side[(node, w)] = _state(mt.leaves_beyond(node, w), s)

    doubly = set()
    for (u, v), st in side.items():
        if st == _MIXED and side[(v, u)] == _MIXED and u < v:
            doubly.add((u, v))

    if doubly:
        path = _terminal_path(doubly)
        if path is None:
            return None
    else:
        path = [_terminal_single(mt, side)]

    if len(path) == 1:
        ok = _reduce_single(mt, side, path[0], s)
        return mt.freeze() if ok else None
    ok = _reduce_path(mt, side, path)
    return mt.freeze() if ok else None


def _terminal_path(doubly: set[tuple[int, int]]) -> Optional[list[int]]:
    deg: dict[int, list[int]] = {}
    for u, v in doubly:
        deg.setdefault(u, []).append(v)
        deg.setdefault(v, []).append(u)
    ends = [n for n, nb in deg.items() if len(nb) == 1]
    if len(ends) != 2 or any(len(nb) > 2 for nb in deg.values()):
        return None
    path = [min(ends)]
    prev = None
    while True:
        nxt = [w for w in deg[path[-1]] if w != prev]
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
    if len(path) != len(deg):
        return None
    return path


def _terminal_single(mt: _MTree, side: dict) -> int:
    best = None
    for n in sorted(mt.kind):
        if mt.kind[n] == LEAF:
            continue
        states = [side[(n, w)] for w in mt.adj[n]]
        if _MIXED in states:
            continue
        fulls = states.count(_FULL)
        if fulls >= 2 and (len(states) - fulls) >= 2:
            return n
        if best is None:
            best = n
    assert best is not None, "no uniform node found"
    return best


def _reduce_single(mt: _MTree, side: dict, n: int, s: frozenset[int]) -> bool:
    nb = mt.adj[n]
    fulls = [w for w in nb if side[(n, w)] == _FULL]
    empties = [w for w in nb if side[(n, w)] == _EMPTY]
    if len(fulls) + len(empties) != len(nb):
        return False
    if mt.kind[n] == Q:
        # the full neighbors must already form a cyclic arc
        flags = [side[(n, w)] == _FULL for w in nb]
        positions = [i for i, f in enumerate(flags) if f]
        return _is_cyclic_arc(positions, len(nb))
    if len(fulls) >= 2 and len(empties) >= 2:
        f = mt.new_node(P, fulls + [n])
        for w in fulls:
            mt.replace_ref(w, n, f)
        mt.adj[n] = empties + [f]
    return True


def _end_contrib(mt: _MTree, side: dict, n: int, path_nb: int):
    """Full and empty contributions of a terminal-path end node."""
    nb = mt.adj[n]
    rest = [w for w in nb if w != path_nb]
    if mt.kind[n] == P:
        fulls = [w for w in rest if side[(n, w)] == _FULL]
        empties = [w for w in rest if side[(n, w)] == _EMPTY]
        if len(fulls) + len(empties) != len(rest) or not fulls or not empties:
            return None
        return _group(mt, n, fulls), _group(mt, n, empties)
    # Q node: cut the cyclic order at the path edge
    i = nb.index(path_nb)
    cut = nb[i + 1:] + nb[:i]
    states = [side[(n, w)] for w in cut]
    if _MIXED in states:
        return None
    if states[0] == _EMPTY:
        cut.reverse()
        states.reverse()
    k = states.count(_FULL)
    if not (0 < k < len(cut)) or any(st != _FULL for st in states[:k]) \
            or any(st != _EMPTY for st in states[k:]):
        return None
    return cut[:k], cut[k:]


def _interior_contrib(mt: _MTree, side: dict, n: int, prev_nb: int, next_nb: int):
    nb = mt.adj[n]
    rest = [w for w in nb if w not in (prev_nb, next_nb)]
    if mt.kind[n] == P:
        fulls = [w for w in rest if side[(n, w)] == _FULL]
        empties = [w for w in rest if side[(n, w)] == _EMPTY]
        if len(fulls) + len(empties) != len(rest):
            return None
        return _group(mt, n, fulls), _group(mt, n, empties)
    i = nb.index(prev_nb)
    cut = nb[i + 1:] + nb[:i]  # starts after prev_nb
    j = cut.index(next_nb)
    arc1, arc2 = cut[:j], cut[j + 1:]  # prev->next and next->prev
    st1 = [side[(n, w)] for w in arc1]
    st2 = [side[(n, w)] for w in arc2]
    if _MIXED in st1 or _MIXED in st2:
        return None
    if all(x == _FULL for x in st1) and all(x == _EMPTY for x in st2):
        return arc1, arc2
    if all(x == _FULL for x in st2) and all(x == _EMPTY for x in st1):
        return list(reversed(arc2)), list(reversed(arc1))
    return None


def _group(mt: _MTree, n: int, members: list[int]) -> list[int]:
    """Wrap >= 2 sibling subtrees into a fresh P-node; placeholder parent."""
    if len(members) <= 1:
        return list(members)
    f = mt.new_node(P, members + [n])  # parent slot fixed by caller
    for w in members:
        mt.replace_ref(w, n, f)
    return [f]


def _reduce_path(mt: _MTree, side: dict, path: list[int]) -> bool:
    m = len(path)
    contribs = []
    for i, n in enumerate(path):
        if mt.kind[n] == LEAF:
            return False
        if i == 0:
            c = _end_contrib(mt, side, n, path[1])
        elif i == m - 1:
            c = _end_contrib(mt, side, n, path[m - 2])
        else:
            c = _interior_contrib(mt, side, n, path[i - 1], path[i + 1])
        if c is None:
            return False
        contribs.append(c)

    order: list[int] = []
    order.extend(reversed(contribs[0][0]))
    for i in range(1, m):
        order.extend(contribs[i][0])
    for i in range(m - 1, 0, -1):
        order.extend(contribs[i][1])
    order.extend(reversed(contribs[0][1]))

    z = mt.new_node(Q, order)
    path_set = set(path)
    for w in order:
        for i, x in enumerate(mt.adj[w]):
            if x in path_set:
                mt.adj[w][i] = z
    for n in path:
        mt.delete(n)
    mt.normalize_node(z)
    return True


# ---------------------------------------------------------------------------
# Consecutive-block replacement (vertex addition support)
# ---------------------------------------------------------------------------


def replace_consecutive(t: PQTree, s: Iterable[int], new_elems: Iterable[int]) -> PQTree:
    """Replace a block known to be consecutive in every order of O(t).

    The block of ``s`` elements is substituted by the fresh elements in every
    order, with the fresh elements free to appear in any arrangement.  The
    caller must have applied `reduce(t, s)` first.
    """
    s = frozenset(s)
    new_elems = sorted(set(new_elems))
    ground = t.ground_set()
    if not s <= ground:
        raise InvalidInstance("replaced set is not a subset of the ground set")
    if not new_elems:
        raise InvalidInstance("replacement needs at least one fresh element")
    if s == ground:
        return universal(new_elems)

    mt = _MTree.from_tree(t)

    def make_part() -> int:
        leaves = []
        for e in new_elems:
            ln = mt.new_node(LEAF)
            mt.elem[ln] = e
            leaves.append(ln)
        if len(leaves) == 1:
            return leaves[0]
        part = mt.new_node(P, leaves)
        for ln in leaves:
            mt.adj[ln] = [part]
        return part

    def delete_subtree(par: int, root: int) -> None:
        stack = [(par, root)]
        while stack:
            p, n = stack.pop()
            for w in list(mt.adj[n]):
                if w != p:
                    stack.append((n, w))
            mt.delete(n)

    # Case A: a single tree edge separates exactly the replaced leaves.
    for u in sorted(mt.kind):
        for v in mt.adj[u]:
            if mt.leaves_beyond(u, v) == s:
                part = make_part()
                delete_subtree(u, v)
                mt.replace_ref(u, v, part)
                mt.adj[part].append(u)
                return mt.freeze()

    # Case B: the replaced leaves form an arc of subtrees around one Q-node.
    for c in sorted(mt.kind):
        if mt.kind[c] == LEAF:
            continue
        nb = mt.adj[c]
        flags = []
        for w in nb:
            leafset = mt.leaves_beyond(c, w)
            if leafset <= s:
                flags.append(True)
            elif leafset & s:
                flags.append(None)
            else:
                flags.append(False)
        if None in flags or sum(flags) < 2:
            continue
        covered = frozenset().union(*[mt.leaves_beyond(c, w)
                                      for w, f in zip(nb, flags) if f])
        if covered != s:
            continue
        positions = [i for i, f in enumerate(flags) if f]
        if not _is_cyclic_arc(positions, len(nb)):
            raise InvalidInstance("replaced set is not consecutive in the tree")
        part = make_part()
        keep: list[int] = []
        inserted = False
        start = next(i for i in positions if (i - 1) % len(nb) not in positions) \
            if len(positions) < len(nb) else 0
        cyc = nb[start:] + nb[:start]
        for w in cyc:
            if w in {nb[i] for i in positions}:
                if not inserted:
                    keep.append(part)
                    inserted = True
                delete_subtree(c, w)
            else:
                keep.append(w)
        mt.adj[c] = keep
        mt.adj[part].append(c)
        mt.normalize_node(c)
        return mt.freeze()

    raise InvalidInstance("replaced set is not consecutive in the tree")


# ---------------------------------------------------------------------------
# st-numbering and planar edge orders around a vertex
# ---------------------------------------------------------------------------


def st_number(g: Graph, s: int, t: int) -> dict[int, int]:
    """Number the vertices of a biconnected graph so that s gets 1, t gets n,
    and every other vertex has a lower- and a higher-numbered neighbor.

    (s, t) must be an edge of the graph.
    """
    st_eid = None
    for eid in g.incident(s):
        if g.other_end(eid, s) == t:
            st_eid = eid
            break
    if st_eid is None:
        raise InvalidInstance("s and t must be adjacent")

    pre: dict[int, int] = {s: 0}
    parent: dict[int, Optional[int]] = {s: None}
    parent_eid: dict[int, Optional[int]] = {s: None}
    tree_eids: set[int] = set()
    order = [s]

    def adj_iter(v: int):
        items = list(g._adj[v])
        if v == s:
            items.sort(key=lambda ew: (ew[0] != st_eid, ew[0]))
        else:
            items.sort()
        return items

    stack = [(s, iter(adj_iter(s)))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for eid, w in it:
            if w not in pre:
                pre[w] = len(pre)
                parent[w] = v
                parent_eid[w] = eid
                tree_eids.add(eid)
                order.append(w)
                stack.append((w, iter(adj_iter(w))))
                advanced = True
                break
        if not advanced:
            stack.pop()

    if len(pre) != g.num_vertices():
        raise InvalidInstance("graph is not connected")

    lowpt: dict[int, int] = {}
    lowsrc: dict[int, tuple] = {}
    for v in reversed(order):
        lowpt[v] = pre[v]
        lowsrc[v] = ("self",)
        for eid, w in g._adj[v]:
            if eid in tree_eids or eid == parent_eid[v]:
                continue
            if pre[w] < lowpt[v]:
                lowpt[v] = pre[w]
                lowsrc[v] = ("back", w, eid)
        for eid, w in g._adj[v]:
            if eid in tree_eids and parent.get(w) == v:
                if lowpt[w] < lowpt[v]:
                    lowpt[v] = lowpt[w]
                    lowsrc[v] = ("tree", w, eid)

    old_v = {s, t}
    old_e = {st_eid}

    def pathfinder(v: int) -> Optional[list[int]]:
        # back edge to an ancestor
        for eid, w in g._adj[v]:
            if eid in old_e or eid in tree_eids:
                continue
            if pre[w] < pre[v]:
                old_e.add(eid)
                return [v, w]
        # unexplored tree edge down; follow the low path
        for eid, w in g._adj[v]:
            if eid in old_e or eid not in tree_eids or parent.get(w) != v:
                continue
            old_e.add(eid)
            path = [v]
            u = w
            while True:
                path.append(u)
                if u in old_v:
                    break
                old_v.add(u)
                src = lowsrc[u]
                assert src[0] != "self"
                old_e.add(src[2])
                u = src[1]
            return path
        # back edge from a descendant; climb the tree
        for eid, w in g._adj[v]:
            if eid in old_e or eid in tree_eids:
                continue
            old_e.add(eid)
            path = [v]
            u = w
            while True:
                path.append(u)
                if u in old_v:
                    break
                old_v.add(u)
                old_e.add(parent_eid[u])
                u = parent[u]
            return path
        return None

    work = [t, s]
    num: dict[int, int] = {}
    counter = 1
    while work:
        v = work.pop()
        path = pathfinder(v)
        if path is None:
            num[v] = counter
            counter += 1
        else:
            work.extend(reversed(path[:-1]))

    n = g.num_vertices()
    if num.get(s) != 1 or num.get(t) != n:
        raise InvalidInstance("st-numbering failed (graph not biconnected?)")
    for v in g.vertices:
        if v in (s, t):
            continue
        nbs = [num[w] for w in g.neighbors(v)]
        if not (min(nbs) < num[v] < max(nbs)):
            raise InvalidInstance("st-numbering failed (graph not biconnected?)")
    return num


def planar_orders_around(g: Graph, v: int) -> Optional[PQTree]:
    """PQ-tree of all cyclic edge orders around ``v`` over the planar
    embeddings of a biconnected graph; None when the graph is nonplanar."""
    from .core import is_biconnected

    if not g.has_vertex(v):
        raise InvalidInstance(f"vertex {v} not in graph")
    if not is_biconnected(g) or g.num_vertices() < 2:
        raise InvalidInstance("planar_orders_around requires a biconnected graph")
    if g.num_vertices() == 2:
        return universal(g.incident(v))

    s = min(g.neighbors(v))
    num = st_number(g, s, v)
    by_num = sorted(g.vertices, key=lambda u: num[u])

    tree = universal(g.incident(s))
    for u in by_num[1:-1]:
        incoming = [eid for eid in g.incident(u)
                    if num[g.other_end(eid, u)] < num[u]]
        outgoing = [eid for eid in g.incident(u)
                    if num[g.other_end(eid, u)] > num[u]]
        tree = reduce(tree, incoming)
        if tree is None:
            return None
        tree = replace_consecutive(tree, incoming, outgoing)
    return tree


# ---------------------------------------------------------------------------
# Representative graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Wheel:
    center: int
    rim: tuple[int, ...]


@dataclass(frozen=True)
class RepresentativeGraph:
    """Wheel-based planar gadget realizing a PQ-tree's order family.

    In any planar embedding with every degree-1 vertex on one face, the
    circular order of the degree-1 vertices along that face lies in O(t),
    and every order of O(t) is achievable.
    """

    graph: Graph
    pendant_of: tuple[tuple[int, int], ...]  # ground element -> degree-1 vertex
    wheels: tuple[Wheel, ...]

    def pendant_map(self) -> dict[int, int]:
        return dict(self.pendant_of)


def representative_graph(t: PQTree, first_id: int = 0) -> RepresentativeGraph:
    """Build the wheel gadget for ``t``; fresh vertex ids start at first_id."""
    ids = itertools.count(first_id)
    verts: list[int] = []
    pairs: list[tuple[int, int]] = []
    wheels: list[Wheel] = []
    pendant: dict[int, int] = {}

    def build_wheel(size: int) -> Wheel:
        rim = [next(ids) for _ in range(size)]
        center = next(ids)
        verts.extend(rim)
        verts.append(center)
        for i, r in enumerate(rim):
            pairs.append((r, rim[(i + 1) % size]))
            pairs.append((center, r))
        w = Wheel(center, tuple(rim))
        wheels.append(w)
        return w

    internals = t.internal_nodes()
    attach: dict[tuple[int, int], int] = {}  # (internal node, neighbor) -> rim vertex
    if not internals:
        # one or two leaves: a single wheel carries every pendant
        w = build_wheel(3)
        for _, e in t.leaf_elems:
            p = next(ids)
            verts.append(p)
            pairs.append((w.rim[0], p))
            pendant[e] = p
    else:
        node_wheel: dict[int, Wheel] = {}
        for n in internals:
            deg = len(t._adj[n])
            w = build_wheel(max(3, deg))
            node_wheel[n] = w
            for j, nb in enumerate(t._adj[n]):
                attach[(n, nb)] = w.rim[0] if t._kind[n] == P else w.rim[j]
        done = set()
        for n in internals:
            for nb in t._adj[n]:
                if t._kind[nb] == LEAF:
                    p = next(ids)
                    verts.append(p)
                    pairs.append((attach[(n, nb)], p))
                    pendant[t._elem[nb]] = p
                else:
                    key = frozenset((n, nb))
                    if key not in done:
                        done.add(key)
                        pairs.append((attach[(n, nb)], attach[(nb, n)]))
    g = Graph.from_pairs(verts, pairs)
    return RepresentativeGraph(g, tuple(sorted(pendant.items())), tuple(wheels))
