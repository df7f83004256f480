"""Signed circuits, barbells, admissibility, star cuts, cubic operations."""

import pytest

from signedflow.core import Edge, SignedGraph, find_bridges, switch
from signedflow.errors import PreconditionError
from signedflow.corpus import g_family, signed_petersen
from signedflow.structure import (
    classify_signed_circuit,
    enumerate_circuits,
    find_antibalanced_2_factor,
    find_long_barbell,
    find_signed_circuit,
    has_star_cut,
    is_antibalanced,
    is_flow_admissible,
    three_edge_coloring,
)


def cycle(n, signs=None):
    signs = signs or [1] * n
    return SignedGraph(n, tuple(Edge(i, (i + 1) % n, signs[i]) for i in range(n)))


# ---------------------------------------------------------------------------
# classify_signed_circuit


def test_classify_even_positive_circuit():
    g = cycle(4)
    w = classify_signed_circuit(g, range(4))
    assert w.kind == "balanced-circuit"


def test_classify_short_barbell():
    g = SignedGraph(1, (Edge(0, 0, -1), Edge(0, 0, -1)))
    w = classify_signed_circuit(g, [0, 1])
    assert w.kind == "short-barbell"


def test_classify_long_barbell_loops_and_path():
    # two negative loops joined by a two-edge path
    g = SignedGraph(
        3,
        (Edge(0, 0, -1), Edge(2, 2, -1), Edge(0, 1, 1), Edge(1, 2, 1)),
    )
    w = classify_signed_circuit(g, range(4))
    assert w.kind == "long-barbell"
    assert sorted(w.path) == [2, 3]


def test_classify_odd_positive_circuit_is_balanced():
    # balance is about negative-edge parity, not length
    w = classify_signed_circuit(cycle(3), range(3))
    assert w is not None and w.kind == "balanced-circuit"


def test_classify_rejects_lone_unbalanced_circuit():
    # a single unbalanced circuit is not a signed circuit by itself
    assert classify_signed_circuit(cycle(3, [-1, 1, 1]), range(3)) is None


def test_classify_rejects_unknown_edge():
    with pytest.raises(PreconditionError):
        classify_signed_circuit(cycle(3), [0, 9])


# ---------------------------------------------------------------------------
# long barbell search


def test_petersen_has_no_long_barbell():
    assert find_long_barbell(signed_petersen()) is None


def test_g1_has_long_barbell():
    w = find_long_barbell(g_family(1))
    assert w is not None and w.kind == "long-barbell"


def test_all_positive_never_barbell():
    assert find_long_barbell(cycle(6)) is None


def test_two_disjoint_unbalanced_digons():
    g = SignedGraph(
        4,
        (
            Edge(0, 1, 1), Edge(0, 1, -1),   # unbalanced digon
            Edge(2, 3, 1), Edge(2, 3, -1),   # another, disjoint
            Edge(1, 2, 1),                   # connecting path
        ),
    )
    w = find_long_barbell(g)
    assert w is not None
    assert w.path == (4,)


def test_circuit_enumeration_deterministic():
    g = signed_petersen()
    assert enumerate_circuits(g) == enumerate_circuits(g)


# ---------------------------------------------------------------------------
# admissibility


def test_single_negative_loop_not_admissible():
    v = is_flow_admissible(SignedGraph(1, (Edge(0, 0, -1),)))
    assert not v.admissible
    assert v.defects[0].kind == "one-negative-edge"


def test_petersen_admissible():
    assert is_flow_admissible(signed_petersen()).admissible


def test_all_positive_bridgeless_admissible():
    assert is_flow_admissible(cycle(5)).admissible


def test_one_negative_edge_defect_beats_bridge():
    # triangle - bridge - unbalanced digon IS switching-equivalent to a
    # single negative edge, so that defect is the one reported
    g = SignedGraph(
        5,
        (
            Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1),
            Edge(2, 3, 1),
            Edge(3, 4, 1), Edge(3, 4, -1),
        ),
    )
    v = is_flow_admissible(g)
    assert not v.admissible
    assert v.defects[0].kind == "one-negative-edge"


def test_balanced_side_bridge():
    # two unbalanced digons in series keep the negative count at 2 under
    # every switching; the bridge to the balanced triangle is the defect
    g = SignedGraph(
        6,
        (
            Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1),
            Edge(2, 3, 1),
            Edge(3, 4, 1), Edge(3, 4, -1),
            Edge(4, 5, 1), Edge(4, 5, -1),
        ),
    )
    v = is_flow_admissible(g)
    assert not v.admissible
    assert v.defects[0].kind == "balanced-side-bridge"
    assert v.defects[0].edge == 3


def test_two_unbalanced_sides_make_bridge_fine():
    g = SignedGraph(
        4,
        (
            Edge(0, 1, 1), Edge(0, 1, -1),
            Edge(1, 2, 1),
            Edge(2, 3, 1), Edge(2, 3, -1),
        ),
    )
    assert is_flow_admissible(g).admissible


def test_switching_set_verifies():
    # defect carries the switching set that exhibits the single negative edge
    g = cycle(4, [1, 1, 1, -1])
    v = is_flow_admissible(g)
    assert not v.admissible
    d = v.defects[0]
    flipped = switch(g, d.switch_set)
    assert len(flipped.negative_edges) == 1


def test_admissible_barbell_free_is_bridgeless(corpus_4_6):
    for g in corpus_4_6:
        if is_flow_admissible(g).admissible and find_long_barbell(g) is None:
            assert find_bridges(g) == ()


# ---------------------------------------------------------------------------
# star cuts


def test_path_star_cut_middle():
    # widest star wins: the middle vertex with both bridges
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1)))
    star = has_star_cut(g)
    assert star is not None and star.center == 1
    assert sorted(star.edges) == [0, 1]
    assert sorted(star.leaves) == [0, 2]


def test_bridgeless_no_star_cut():
    assert has_star_cut(cycle(4)) is None


def test_joined_triangles_star_cut():
    g = SignedGraph(
        6,
        (
            Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1),
            Edge(2, 3, 1),
            Edge(3, 4, 1), Edge(4, 5, 1), Edge(5, 3, 1),
        ),
    )
    star = has_star_cut(g)
    assert star is not None
    assert star.edges == (3,)


# ---------------------------------------------------------------------------
# antibalance


@pytest.mark.parametrize(
    "n,signs,expect",
    [
        (4, [-1] * 4, True),    # all-negative circuit
        (3, [1] * 3, False),    # odd positive: negation stays unbalanced
        (4, [1] * 4, True),     # even positive
        (5, [-1] * 5, True),
    ],
)
def test_antibalance_circuits(n, signs, expect):
    assert bool(is_antibalanced(cycle(n, signs))) == expect


def test_antibalance_matches_negated_balance(corpus_3_4):
    from signedflow.core import is_balanced

    for g in corpus_3_4[::3]:
        neg = SignedGraph(
            g.num_vertices, tuple(Edge(e.u, e.v, -e.sign) for e in g.edges)
        )
        assert bool(is_antibalanced(g)) == bool(is_balanced(neg))


# ---------------------------------------------------------------------------
# cubic operations


def k4():
    return SignedGraph(4, tuple(Edge(u, v, 1) for u in range(4) for v in range(u + 1, 4)))


def test_k4_three_edge_colorable():
    col = three_edge_coloring(k4())
    assert col is not None
    # proper: distinct colors at every vertex
    for v in range(4):
        seen = [col[i] for i, e in enumerate(k4().edges) if v in (e.u, e.v)]
        assert len(set(seen)) == 3


def test_petersen_not_three_edge_colorable():
    assert three_edge_coloring(signed_petersen()) is None


def test_non_cubic_rejected():
    with pytest.raises(PreconditionError):
        three_edge_coloring(cycle(3))
    with pytest.raises(PreconditionError):
        find_antibalanced_2_factor(SignedGraph(1, (Edge(0, 0, 1), Edge(0, 0, -1))))


def test_k4_all_negative_antibalanced_2_factor():
    g = SignedGraph(4, tuple(Edge(e.u, e.v, -1) for e in k4().edges))
    circuits = find_antibalanced_2_factor(g)
    assert circuits is not None
    deg = [0] * 4
    for circuit in circuits:
        assert is_antibalanced(SignedGraph(4, tuple(g.edges[i] for i in circuit)))
        for i in circuit:
            deg[g.edges[i].u] += 1
            deg[g.edges[i].v] += 1
    assert deg == [2, 2, 2, 2]


def test_signed_circuit_search_agrees_with_classify(corpus_3_4):
    for g in corpus_3_4[::4]:
        w = find_signed_circuit(g)
        if w is not None:
            edges = [e for c in w.circuits for e in c] + list(w.path or ())
            again = classify_signed_circuit(g, edges)
            assert again is not None and again.kind == w.kind
