import itertools
import random

import pytest

from pipeplanarity.core import Graph, InvalidInstance, connected_components
from pipeplanarity.oracles import oracle_cplanarity_pipes
from pipeplanarity.strip import (
    SpinedStripInstance,
    StripInstance,
    collapse_first_strip,
    decide_single_source,
    decide_spined,
    make_spined,
    source_components,
    strip_components,
    to_flat_clustered,
)


def strip(pairs, strips):
    vertices = sorted(strips)
    return StripInstance.build(Graph.from_pairs(vertices, pairs), strips)


def test_invariant_rejects_wide_edges():
    with pytest.raises(InvalidInstance):
        strip([(0, 1)], {0: 1, 1: 3})


def test_invariant_rejects_unused_strip():
    with pytest.raises(InvalidInstance):
        strip([], {0: 1, 1: 3})


def test_source_components_basic():
    s = strip([(0, 1)], {0: 1, 1: 2})
    srcs = source_components(s)
    assert len(srcs) == 1 and srcs[0].vertices == frozenset({0})

    s2 = strip([(0, 2), (1, 2)], {0: 1, 1: 1, 2: 2})
    assert len(source_components(s2)) == 2

    # passing-style component in the middle strip is not a source
    s3 = strip([(0, 1), (1, 2)], {0: 1, 1: 2, 2: 3})
    srcs3 = source_components(s3)
    assert all(c.strip == 1 for c in srcs3)


def test_make_spined_single_edge():
    s = strip([(0, 1)], {0: 1, 1: 2})
    sp = make_spined(s, 0)
    inst = sp.instance
    assert inst.strip_count == 3
    assert inst.graph.num_vertices() == 4
    assert inst.graph.num_edges() == 3
    assert len(sp.spine) == 3
    assert sp.spine[0] == 0


def test_make_spined_requires_upward_anchor():
    s = strip([(0, 1)], {0: 1, 1: 1})
    with pytest.raises(InvalidInstance):
        make_spined(s, 0)


def test_collapse_single_vertex_two_up_edges():
    # first strip: one vertex with two edges up; spine attached alongside
    s = strip([(0, 1), (0, 2), (1, 2)], {0: 1, 1: 2, 2: 2})
    sp = make_spined(s, 0)
    out = collapse_first_strip(sp)
    inst = out.instance
    assert inst.strip_count == sp.instance.strip_count - 1
    assert len(source_components(inst)) == 1
    # the new first strip holds a wheel gadget: strictly more vertices there
    assert len(inst.vertices_in_strip(1)) >= 4
    assert decide_spined(out) == decide_spined(sp)


def test_collapse_preserves_spine_invariants():
    s = strip([(0, 1), (1, 2), (0, 3), (3, 2)], {0: 1, 1: 1, 2: 2, 3: 1})
    sp = make_spined(s, 1)
    out = collapse_first_strip(sp)
    SpinedStripInstance(out.instance, out.spine)  # re-validates
    assert len(out.spine) == len(sp.spine) - 1


def test_decide_spined_path():
    s = strip([(0, 1), (1, 2)], {0: 1, 1: 2, 2: 3})
    sp = SpinedStripInstance(s, (0, 1, 2))
    assert decide_spined(sp)


def test_single_strip_is_planarity():
    k5 = list(itertools.combinations(range(5), 2))
    s = strip(k5, {i: 1 for i in range(5)})
    assert not decide_single_source(s)
    k4 = list(itertools.combinations(range(4), 2))
    assert decide_single_source(strip(k4, {i: 1 for i in range(4)}))


def test_single_edge_yes():
    assert decide_single_source(strip([(0, 1)], {0: 1, 1: 2}))


def test_k4_in_first_strip_with_spine():
    pairs = list(itertools.combinations(range(4), 2)) + [(0, 4)]
    s = strip(pairs, {0: 1, 1: 1, 2: 1, 3: 1, 4: 2})
    assert decide_single_source(s)


def random_single_source_instance(rng, n, k):
    """Connected instance with exactly one source component, or None."""
    strips = {}
    strips[0] = 1
    for v in range(1, n):
        strips[v] = rng.randint(1, k)
    used = set(strips.values())
    if used != set(range(1, max(used) + 1)):
        return None
    pairs = []
    for u, v in itertools.combinations(range(n), 2):
        if abs(strips[u] - strips[v]) <= 1 and rng.random() < 0.45:
            pairs.append((u, v))
    try:
        s = strip(pairs, strips)
    except InvalidInstance:
        return None
    if len(connected_components(s.graph)) != 1:
        return None
    if s.strip_count < 2:
        return None
    comps = strip_components(s)
    if any(not c.up_edges and not c.down_edges for c in comps):
        return None
    if len(source_components(s)) != 1:
        return None
    return s


def test_matches_pipes_oracle_on_random_single_source_instances():
    rng = random.Random(1234)
    checked = 0
    while checked < 40:
        n = rng.randint(3, 7)
        k = rng.randint(2, 3)
        s = random_single_source_instance(rng, n, k)
        if s is None:
            continue
        checked += 1
        got = decide_single_source(s)
        expected = oracle_cplanarity_pipes(to_flat_clustered(s))
        assert got == expected, (s.graph.edges, dict(s.strip_of))


def test_answer_invariant_under_relabeling():
    rng = random.Random(77)
    s = random_single_source_instance(rng, 6, 2)
    while s is None:
        s = random_single_source_instance(rng, 6, 2)
    base = decide_single_source(s)
    perm = {v: v + 100 for v in s.graph.vertices}
    g2 = Graph.from_pairs([perm[v] for v in s.graph.vertices],
                          [(perm[u], perm[v]) for _, u, v in s.graph.edges])
    s2 = StripInstance.build(g2, {perm[v]: s.strip(v) for v in s.graph.vertices})
    assert decide_single_source(s2) == base
