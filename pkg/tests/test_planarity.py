import itertools
import random

from pipeplanarity.core import Graph, is_planar_rotation
from pipeplanarity.planarity import embed_planar, is_planar


def complete(n):
    return Graph.from_pairs(range(n), list(itertools.combinations(range(n), 2)))


def complete_bipartite(a, b):
    return Graph.from_pairs(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


def test_k4_planar_with_witness():
    ok, rot = is_planar(complete(4))
    assert ok
    assert is_planar_rotation(complete(4), rot)


def test_k5_not_planar():
    assert is_planar(complete(5)) == (False, None)


def test_k33_not_planar():
    assert is_planar(complete_bipartite(3, 3)) == (False, None)


def test_k5_minus_edge_planar():
    g = Graph.from_pairs(range(5), [p for p in itertools.combinations(range(5), 2)
                                    if p != (0, 1)])
    ok, rot = is_planar(g)
    assert ok and is_planar_rotation(g, rot)


def test_disconnected_and_cut_vertices():
    g = Graph.from_pairs(range(8),
                         [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (5, 6)])
    ok, rot = is_planar(g)
    assert ok
    assert is_planar_rotation(g, rot)


def test_tree_and_empty():
    ok, rot = is_planar(Graph.from_pairs(range(4), [(0, 1), (1, 2), (1, 3)]))
    assert ok and is_planar_rotation(Graph.from_pairs(range(4), [(0, 1), (1, 2), (1, 3)]), rot)
    ok, rot = is_planar(Graph.from_pairs([0, 1, 2], []))
    assert ok


def _has_planar_rotation_bruteforce(g):
    from pipeplanarity.oracles import planar_rotation_systems_pruned

    for _ in planar_rotation_systems_pruned(g):
        return True
    return False


def test_matches_bruteforce_on_random_small_graphs():
    rng = random.Random(23)
    for _ in range(120):
        n = rng.randint(2, 6)
        pairs = list(itertools.combinations(range(n), 2))
        chosen = rng.sample(pairs, rng.randint(0, len(pairs)))
        g = Graph.from_pairs(range(n), chosen)
        expected = _has_planar_rotation_bruteforce(g)
        ok, rot = is_planar(g)
        assert ok == expected, (n, chosen)
        if ok:
            assert is_planar_rotation(g, rot)


def test_embed_agrees_with_decision_on_dense_graphs():
    rng = random.Random(31)
    for _ in range(60):
        n = rng.randint(5, 7)
        pairs = list(itertools.combinations(range(n), 2))
        chosen = rng.sample(pairs, rng.randint(n, min(3 * n - 6 + 2, len(pairs))))
        g = Graph.from_pairs(range(n), chosen)
        ok, rot = is_planar(g)
        emb = embed_planar(g)
        assert (emb is not None) == ok
        if ok:
            assert is_planar_rotation(g, rot)
