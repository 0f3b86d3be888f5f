"""Seeded random instance generators.

Every generator is deterministic per seed and only emits instances that
satisfy the attachment assumptions and the requested structural bounds;
unsatisfiable parameter combinations raise after a bounded retry budget.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .core import (
    FlatClusteredGraph,
    Graph,
    InvalidInstance,
    classify_components,
    clusters_adjacency,
    connected_components,
    validate_assumptions,
)
from .pipes import compute_parameters
from .sefe import SefeInstance
from .strip import StripInstance, source_components, strip_components

_MAX_TRIES = 4000


class GenerationError(InvalidInstance):
    pass


def generate_flat_cgraph(seed: int, n: int = 6, clusters: int = 2,
                         max_multi: Optional[int] = None,
                         require_planar: bool = True) -> FlatClusteredGraph:
    """Connected-adjacency flat clustered graph meeting the assumptions."""
    rng = random.Random(("flat", seed).__repr__())
    for _ in range(_MAX_TRIES):
        assign = {v: 100 + rng.randrange(clusters) for v in range(n)}
        if len(set(assign.values())) != clusters:
            continue
        pairs = [p for p in itertools.combinations(range(n), 2)
                 if rng.random() < rng.uniform(0.3, 0.6)]
        try:
            cg = FlatClusteredGraph.build(Graph.from_pairs(range(n), pairs), assign)
        except InvalidInstance:
            continue
        if validate_assumptions(cg):
            continue
        ga = clusters_adjacency(cg)
        if ga.num_edges() == 0 or len(connected_components(ga)) != 1:
            continue
        if require_planar:
            from .planarity import is_planar

            if not is_planar(cg.graph)[0]:
                continue
        if max_multi is not None:
            if compute_parameters(cg).max_multi_edge_components > max_multi:
                continue
        return cg
    raise GenerationError("no compliant flat clustered graph for these parameters")


def generate_embedded_pipes(seed: int, n: int = 6, clusters: int = 2,
                            max_multi: Optional[int] = None):
    from .embedded_pipes import EmbeddedPipesInstance
    from .planarity import is_planar

    rng = random.Random(("embedded", seed).__repr__())
    for _ in range(_MAX_TRIES):
        cg = generate_flat_cgraph(rng.randrange(1 << 30), n=n, clusters=clusters,
                                  max_multi=max_multi)
        ga = clusters_adjacency(cg)
        ok, _rot = is_planar(ga)
        if not ok:
            continue
        return EmbeddedPipesInstance.with_default_rotation(cg)
    raise GenerationError("no embeddable clusters-adjacency graph found")


def generate_strip(seed: int, n: int = 8, strips: int = 3,
                   single_source: bool = True) -> StripInstance:
    rng = random.Random(("strip", seed).__repr__())
    for _ in range(_MAX_TRIES):
        levels = {0: 1}
        for v in range(1, n):
            levels[v] = rng.randint(1, strips)
        used = sorted(set(levels.values()))
        if used != list(range(1, max(used) + 1)):
            continue
        if max(used) != strips:
            continue
        pairs = [(u, v) for u, v in itertools.combinations(range(n), 2)
                 if abs(levels[u] - levels[v]) <= 1 and rng.random() < 0.45]
        try:
            s = StripInstance.build(Graph.from_pairs(range(n), pairs), levels)
        except InvalidInstance:
            continue
        if len(connected_components(s.graph)) != 1:
            continue
        comps = strip_components(s)
        if any(not c.up_edges and not c.down_edges for c in comps):
            continue
        if single_source and len(source_components(s)) != 1:
            continue
        return s
    raise GenerationError("no compliant strip instance for these parameters")


def generate_sefe(seed: int, n: int = 6, common_forest: bool = True,
                  connected: bool = True, exclusive_each: int = 4) -> SefeInstance:
    from .core import is_forest

    rng = random.Random(("sefe", seed).__repr__())
    for _ in range(_MAX_TRIES):
        pairs = list(itertools.combinations(range(n), 2))
        rng.shuffle(pairs)
        common: list[tuple[int, int]] = []
        want = rng.randint(1, n - 1)
        for p in pairs:
            if len(common) >= want:
                break
            trial = common + [p]
            if not common_forest or is_forest(Graph.from_pairs(range(n), trial)):
                common = trial
        rest = [p for p in pairs if p not in common]
        e1x = rng.sample(rest, min(len(rest), rng.randint(0, exclusive_each)))
        rest2 = [p for p in rest if p not in e1x]
        e2x = rng.sample(rest2, min(len(rest2), rng.randint(0, exclusive_each)))
        eid = itertools.count()
        e1 = [(next(eid), u, v) for u, v in common]
        e2 = list(e1)
        e1 = e1 + [(next(eid), u, v) for u, v in e1x]
        e2 = e2 + [(next(eid), u, v) for u, v in e2x]
        inst = SefeInstance.build(range(n), e1, e2)
        if connected:
            if len(connected_components(inst.graph1())) > 1:
                continue
            if len(connected_components(inst.graph2())) > 1:
                continue
        return inst
    raise GenerationError("no compliant simultaneous-embedding instance")


def generate_icp(seed: int, n: int = 5, clusters: int = 2):
    """Instance with trees extracted from a realizable drawing when one
    exists, otherwise the per-neighbor trees with enumerated component trees."""
    from .inclusion import IcpInstance, default_anchor, extract_trees_from_order
    from .oracles import realizable_order_profiles
    from .pipes import enumerate_component_trees, pipe_neighbor_tree

    rng = random.Random(("icp", seed).__repr__())
    cg = generate_flat_cgraph(rng.randrange(1 << 30), n=n, clusters=clusters,
                              max_multi=3)
    profile = next(iter(realizable_order_profiles(cg)), None)
    if profile is not None and all(profile[mu] for mu in cg.clusters):
        orders = {mu: profile[mu] for mu in cg.clusters}
        xts, yts, anchors = extract_trees_from_order(cg, orders)
        return IcpInstance(cg, tuple(sorted(xts.items())), tuple(sorted(yts.items())),
                           tuple(sorted(anchors.items())))
    xts = {mu: enumerate_component_trees(cg, mu)[0] for mu in cg.clusters}
    yts = {mu: pipe_neighbor_tree(cg, mu) for mu in cg.clusters}
    anchors = {mu: default_anchor(cg, mu, xts[mu]) for mu in cg.clusters}
    return IcpInstance(cg, tuple(sorted(xts.items())), tuple(sorted(yts.items())),
                       tuple(sorted(anchors.items())))
