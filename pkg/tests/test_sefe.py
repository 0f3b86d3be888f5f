import itertools
import random

import pytest

from pipeplanarity.core import InvalidInstance, blocks_per_component, canonical_cycle, is_forest
from pipeplanarity.oracles import oracle_sefe
from pipeplanarity.sefe import (
    Budget,
    SefeInstance,
    SefeWitness,
    decide_sefe,
    remove_common_cycles,
    structure_report,
    verify_witness,
)


def make(vertices, pairs1, pairs2):
    """Common pairs share ids; exclusives get fresh ids."""
    common = [p for p in pairs1 if p in pairs2]
    e1, e2 = [], []
    eid = 0
    for p in common:
        e1.append((eid, *p))
        e2.append((eid, *p))
        eid += 1
    for p in pairs1:
        if p not in common:
            e1.append((eid, *p))
            eid += 1
    for p in pairs2:
        if p not in common:
            e2.append((eid, *p))
            eid += 1
    return SefeInstance.build(vertices, e1, e2)


def test_identical_triangles_yes():
    inst = make(range(3), [(0, 1), (1, 2), (0, 2)], [(0, 1), (1, 2), (0, 2)])
    res = decide_sefe(inst)
    assert res.status == "yes"
    assert verify_witness(inst, res.witness)


def test_k5_in_one_graph_no():
    inst = make(range(5), list(itertools.combinations(range(5), 2)), [])
    assert decide_sefe(inst).status == "no"


def test_structure_report_flags():
    inst = make(range(3), [(0, 1)], [(0, 1)])
    rep = structure_report(inst)
    assert rep.common_is_forest and rep.g1_cut_ok and rep.g2_cut_ok

    tri = [(0, 1), (1, 2), (0, 2)]
    inst2 = make(range(3), tri, tri)
    assert not structure_report(inst2).common_is_forest

    # three triangles sharing a vertex: cut vertex on three non-trivial blocks
    pairs = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (0, 5), (5, 6), (0, 6)]
    inst3 = make(range(7), pairs, [])
    assert not structure_report(inst3).g1_cut_ok


def test_verify_witness_rejects_tampering():
    inst = make(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 1), (1, 2), (1, 3)])
    res = decide_sefe(inst)
    assert res.status == "yes"
    w = res.witness
    assert verify_witness(inst, w)
    # swap two entries in the rotation of a degree-3 vertex of graph 2
    rots = {v: list(w.rotation2.at(v)) for v in inst.vertices}
    v3 = next(v for v in inst.vertices if len(rots[v]) == 3)
    perturbed = dict(rots)
    a, b, c = perturbed[v3]
    perturbed[v3] = [b, a, c]
    from pipeplanarity.core import RotationSystem

    w2 = SefeWitness(w.rotation1, RotationSystem.build(perturbed))
    common = inst.common_edge_ids()
    c_old = [e for e in rots[v3] if e in common]
    if len(c_old) >= 3:
        assert not verify_witness(inst, w2)


def random_instance(rng, n, want_common_forest=True, connected=True):
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    k_common = rng.randint(1, max(1, n - 1))
    common = []
    if want_common_forest:
        from pipeplanarity.core import Graph

        for p in pairs:
            trial = common + [p]
            g = Graph.from_pairs(range(n), trial)
            if is_forest(g):
                common = trial
            if len(common) >= k_common:
                break
    else:
        common = pairs[:k_common]
    rest = [p for p in pairs if p not in common]
    e1x = rng.sample(rest, rng.randint(0, min(4, len(rest))))
    rest2 = [p for p in rest if p not in e1x]
    e2x = rng.sample(rest2, rng.randint(0, min(4, len(rest2))))
    inst = make(range(n), common + e1x, common + e2x)
    if connected:
        from pipeplanarity.core import connected_components

        if len(connected_components(inst.graph1())) > 1:
            return None
        if len(connected_components(inst.graph2())) > 1:
            return None
    return inst


def test_backend_matches_oracle_on_random_instances():
    rng = random.Random(99)
    checked = 0
    while checked < 120:
        n = rng.randint(3, 6)
        inst = random_instance(rng, n)
        if inst is None:
            continue
        checked += 1
        res = decide_sefe(inst)
        assert res.status in ("yes", "no")
        expected = oracle_sefe(inst)
        assert (res.status == "yes") == expected, inst
        if res.status == "yes":
            assert verify_witness(inst, res.witness)


def test_budget_exceeded_reported():
    inst = make(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 2), (1, 3), (0, 1)])
    res = decide_sefe(inst, Budget(max_nodes=2))
    assert res.status == "budget_exceeded"
    assert res.witness is None
    assert decide_sefe(inst).status in ("yes", "no")


def test_remove_common_cycles_identity_on_forest():
    inst = make(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 1), (1, 2), (1, 3)])
    assert is_forest(inst.common_graph())
    assert remove_common_cycles(inst) is inst


def test_remove_common_cycles_triangle():
    tri = [(0, 1), (1, 2), (0, 2)]
    inst = make(range(3), tri, tri)
    out = remove_common_cycles(inst)
    assert is_forest(out.common_graph())
    # equivalence on this tiny case
    assert decide_sefe(inst).status == decide_sefe(out).status == "yes"
    # no new common edges beyond the survivors
    assert out.common_edge_ids() <= inst.common_edge_ids()


def test_remove_common_cycles_contract():
    rng = random.Random(5)
    from pipeplanarity.core import connected_components

    tested = 0
    while tested < 25:
        n = rng.randint(3, 6)
        inst = random_instance(rng, n, want_common_forest=False)
        if inst is None:
            continue
        if is_forest(inst.common_graph()):
            continue
        tested += 1
        out = remove_common_cycles(inst)
        assert is_forest(out.common_graph())
        # no common edge is ever added
        assert out.common_edge_ids() <= inst.common_edge_ids()
        for g_in, g_out in ((inst.graph1(), out.graph1()), (inst.graph2(), out.graph2())):
            # original vertices are never separated (fresh path vertices may be
            # isolated in the opposite graph)
            comp_out = {frozenset(c & set(g_in.vertices))
                        for c in connected_components(g_out)}
            comp_out.discard(frozenset())
            assert comp_out == set(connected_components(g_in))
            # no original vertex becomes a cut vertex, and none of the fresh
            # degree-2 path vertices is one
            cuts_in = blocks_per_component(g_in).cut_vertices
            cuts_out = blocks_per_component(g_out).cut_vertices
            assert cuts_out <= cuts_in
        before = decide_sefe(inst)
        after = decide_sefe(out)
        if "budget" not in (before.status, after.status):
            assert before.status == after.status


def test_remove_common_cycles_requires_connected():
    inst = make([0, 1, 2, 3], [(0, 1), (1, 2), (0, 2)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(InvalidInstance):
        remove_common_cycles(inst)
