import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pipeplanarity.core import (
    FlatClusteredGraph,
    Graph,
    InvalidInstance,
    RotationSystem,
    block_cut_tree,
    classify_components,
    clusters_adjacency,
    connected_components,
    faces_of,
    is_biconnected,
    is_forest,
    is_planar_rotation,
    validate_assumptions,
)


def triangle():
    return Graph.from_pairs([0, 1, 2], [(0, 1), (1, 2), (0, 2)])


def k4():
    return Graph.from_pairs([0, 1, 2, 3], list(itertools.combinations(range(4), 2)))


def k5():
    return Graph.from_pairs(range(5), list(itertools.combinations(range(5), 2)))


def test_graph_rejects_self_loop_and_parallel():
    with pytest.raises(InvalidInstance):
        Graph.from_pairs([0, 1], [(0, 0)])
    with pytest.raises(InvalidInstance):
        Graph.build([0, 1], [(0, 0, 1), (1, 0, 1)])
    g = Graph.build([0, 1], [(0, 0, 1), (1, 0, 1)], multigraph=True)
    assert g.num_edges() == 2


def test_connected_components():
    assert connected_components(Graph.from_pairs([], [])) == []
    assert connected_components(triangle()) == [frozenset({0, 1, 2})]
    two = Graph.from_pairs([0, 1, 2, 3], [(0, 1), (2, 3)])
    assert connected_components(two) == [frozenset({0, 1}), frozenset({2, 3})]


def test_block_cut_tree_single_edge():
    g = Graph.from_pairs([0, 1], [(0, 1)])
    bct = block_cut_tree(g)
    assert len(bct.blocks) == 1 and bct.blocks[0].trivial
    assert not bct.cut_vertices


def test_block_cut_tree_two_triangles_sharing_vertex():
    g = Graph.from_pairs([0, 1, 2, 3, 4],
                         [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    bct = block_cut_tree(g)
    assert len(bct.blocks) == 2
    assert all(not b.trivial for b in bct.blocks)
    assert bct.cut_vertices == frozenset({2})


def test_block_cut_tree_path():
    g = Graph.from_pairs([0, 1, 2], [(0, 1), (1, 2)])
    bct = block_cut_tree(g)
    assert len(bct.blocks) == 2
    assert all(b.trivial for b in bct.blocks)
    assert bct.cut_vertices == frozenset({1})


def test_block_cut_tree_rejects_disconnected():
    with pytest.raises(InvalidInstance):
        block_cut_tree(Graph.from_pairs([0, 1, 2, 3], [(0, 1), (2, 3)]))


def test_biconnected():
    assert is_biconnected(triangle())
    assert is_biconnected(k4())
    assert not is_biconnected(Graph.from_pairs([0, 1, 2], [(0, 1), (1, 2)]))


def rotation_of(g, mapping):
    return RotationSystem.build(mapping)


def test_faces_triangle():
    g = triangle()
    rot = RotationSystem.build({v: g.incident(v) for v in g.vertices})
    fs = faces_of(g, rot)
    assert fs.face_count() == 2
    assert is_planar_rotation(g, rot)


def test_faces_single_edge():
    g = Graph.from_pairs([0, 1], [(0, 1)])
    rot = RotationSystem.build({0: (0,), 1: (0,)})
    fs = faces_of(g, rot)
    assert fs.face_count() == 1
    assert len(fs.walks[0]) == 2


def test_face_walk_lengths_sum_to_twice_edges():
    g = k4()
    for rot in _some_rotations(g, 50):
        fs = faces_of(g, rot)
        assert sum(len(w) for w in fs.walks) == 2 * g.num_edges()


def _some_rotations(g, limit):
    from pipeplanarity.oracles import all_rotation_systems

    return itertools.islice(all_rotation_systems(g), limit)


def test_k4_has_planar_rotation_with_four_faces():
    g = k4()
    from pipeplanarity.oracles import all_rotation_systems

    found = False
    for rot in all_rotation_systems(g):
        if is_planar_rotation(g, rot):
            assert faces_of(g, rot).face_count() == 4
            found = True
    assert found


def test_tree_rotations_always_planar():
    g = Graph.from_pairs([0, 1, 2, 3], [(0, 1), (0, 2), (0, 3)])
    from pipeplanarity.oracles import all_rotation_systems

    for rot in all_rotation_systems(g):
        assert is_planar_rotation(g, rot)


def test_k5_no_planar_rotation():
    g = k5()
    from pipeplanarity.oracles import all_rotation_systems

    assert not any(is_planar_rotation(g, rot) for rot in all_rotation_systems(g))


def flat(graph, assign):
    return FlatClusteredGraph.build(graph, assign)


def test_classify_components_single_edge_between_singletons():
    cg = flat(Graph.from_pairs([0, 1], [(0, 1)]), {0: 10, 1: 11})
    infos = classify_components(cg)
    assert len(infos) == 2
    for info in infos:
        assert not info.multi_edge
        assert not info.passing
        assert info.originating_to is not None


def test_classify_components_passing_and_originating():
    # cluster 10: path 0-1 with edges up to two different clusters
    g = Graph.from_pairs([0, 1, 2, 3], [(0, 1), (0, 2), (1, 3)])
    cg = flat(g, {0: 10, 1: 10, 2: 11, 3: 12})
    infos = [i for i in classify_components(cg) if i.cluster == 10]
    assert len(infos) == 1
    assert infos[0].multi_edge and infos[0].passing

    g2 = Graph.from_pairs([0, 1, 2], [(0, 1), (0, 2)])
    cg2 = flat(g2, {0: 10, 1: 11, 2: 11})
    infos2 = [i for i in classify_components(cg2) if i.cluster == 10]
    assert infos2[0].multi_edge and infos2[0].originating_to == 11


def test_components_match_connected_components_per_cluster():
    g = Graph.from_pairs([0, 1, 2, 3, 4], [(0, 1), (2, 3), (0, 4), (2, 4)])
    cg = flat(g, {0: 1, 1: 1, 2: 1, 3: 1, 4: 2})
    per_cluster = [i for i in classify_components(cg) if i.cluster == 1]
    sub = g.induced([0, 1, 2, 3])
    assert len(per_cluster) == len(connected_components(sub))


def test_clusters_adjacency():
    g = Graph.from_pairs([0], [])
    cg = flat(g, {0: 5})
    ga = clusters_adjacency(cg)
    assert ga.vertices == (5,) and ga.num_edges() == 0

    g2 = Graph.from_pairs([0, 1, 2, 3, 4, 5],
                          [(0, 3), (1, 4), (2, 5)])
    cg2 = flat(g2, {0: 8, 1: 8, 2: 8, 3: 9, 4: 9, 5: 9})
    ga2 = clusters_adjacency(cg2)
    assert ga2.num_edges() == 1

    g3 = Graph.from_pairs([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    cg3 = flat(g3, {0: 1, 1: 2, 2: 3})
    assert clusters_adjacency(cg3).num_edges() == 3


def test_validate_assumptions_ok():
    cg = flat(Graph.from_pairs([0, 1], [(0, 1)]), {0: 1, 1: 2})
    assert validate_assumptions(cg) == []


def test_validate_assumptions_isolated_vertex():
    g = Graph.from_pairs([0, 1, 2], [(0, 1)])
    cg = flat(g, {0: 1, 1: 2, 2: 1})
    codes = {v.code for v in validate_assumptions(cg)}
    assert "no-inter-edge" in codes


def test_validate_assumptions_single_attachment():
    # triangle cluster attached through exactly one vertex
    g = Graph.from_pairs([0, 1, 2, 3], [(0, 1), (1, 2), (0, 2), (0, 3)])
    cg = flat(g, {0: 1, 1: 1, 2: 1, 3: 2})
    codes = {v.code for v in validate_assumptions(cg)}
    assert "single-attachment" in codes


def test_is_forest():
    assert is_forest(Graph.from_pairs([0, 1, 2], [(0, 1), (1, 2)]))
    assert not is_forest(triangle())


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.data())
def test_random_rotation_face_identity(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    g = Graph.from_pairs(range(n), chosen)
    rot = RotationSystem.build({v: g.incident(v) for v in g.vertices})
    fs = faces_of(g, rot)
    assert sum(len(w) for w in fs.walks) == 2 * g.num_edges()
