"""Conversion machinery, decompositions, grid normalization."""

import copy
from fractions import Fraction

import pytest

from signedflow.core import (
    Edge,
    FlowAssignment,
    FlowKind,
    Orientation,
    SignedGraph,
    boundary,
    check_flow,
)
from signedflow.corpus import signed_petersen, g_family, g_family_circular_witness, w5_all_signatures
from signedflow.errors import (
    InvariantViolation,
    PreconditionError,
    ResourceCapExceeded,
)
from signedflow.solve import find_nz_k_flow, find_nz_zk_flow
from signedflow.transform import (
    ConversionState,
    EulerianDecomposition,
    Tadpole,
    decompose_into_2_flows,
    eulerian_decompose,
    find_negative_ditrail,
    find_tadpole,
    minusing,
    modflow_to_intflow,
    normalize_circular_flow,
    run_modflow_conversion,
)

REF = Orientation.reference()


def k33():
    return SignedGraph(6, tuple(Edge(u, v, 1) for u in range(3) for v in range(3, 6)))


def long_barbell_graph():
    return SignedGraph(3, (Edge(0, 0, -1), Edge(2, 2, -1), Edge(0, 1, 1), Edge(1, 2, 1)))


def signed_values(fa):
    return [
        -v if i in fa.orientation.reversed_edges else v
        for i, v in enumerate(fa.values)
    ]


# ---------------------------------------------------------------------------
# conversion state: lift, switching, minusing


def test_lift_requires_reduced_values():
    g = SignedGraph(1, (Edge(0, 0, 1),))
    with pytest.raises(PreconditionError):
        ConversionState.lift(g, FlowAssignment(REF, (5,)), 5)
    with pytest.raises(PreconditionError):
        ConversionState.lift(g, FlowAssignment(REF, (0,)), 5)


def test_minusing_definition():
    g = SignedGraph(2, (Edge(0, 1, 1),))
    st = ConversionState.lift(g, FlowAssignment(REF, (1,)), 5)
    before = [list(d) for d in st.dirs]
    minusing(st, [0])
    assert st.values == [4]
    assert st.dirs[0] == [-before[0][0], -before[0][1]]


def test_minusing_empty_is_noop():
    g = SignedGraph(2, (Edge(0, 1, 1),))
    st = ConversionState.lift(g, FlowAssignment(REF, (2,)), 5)
    j = len(st.journal)
    minusing(st, [])
    assert st.values == [2] and len(st.journal) == j


def test_minusing_involution():
    g = k33()
    fa = find_nz_zk_flow(g, 3)
    st = ConversionState.lift(g, fa, 3)
    vals0 = list(st.values)
    dirs0 = [list(d) for d in st.dirs]
    minusing(st, [0, 4, 7])
    minusing(st, [0, 4, 7])
    assert st.values == vals0
    assert st.dirs == dirs0


def test_operations_preserve_state_invariants():
    # (S1): values stay strictly inside (0, k); (S2): every boundary
    # stays a multiple of k
    g = k33()
    st = ConversionState.lift(g, find_nz_zk_flow(g, 3), 3)
    for op in (
        lambda: st.switch_at([1, 4]),
        lambda: minusing(st, [2, 3]),
        lambda: st.switch_at([0]),
        lambda: minusing(st, [2]),
    ):
        op()
        assert all(0 < v < st.k for v in st.values)
        assert all(b % st.k == 0 for b in st.bnd)
        st.assert_invariants()


# ---------------------------------------------------------------------------
# walk searches


def test_negative_edge_is_negative_ditrail():
    g = SignedGraph(2, (Edge(0, 1, -1),))
    st = ConversionState.lift(g, FlowAssignment(REF, (1,)), 3)
    assert find_negative_ditrail(st, 0, 1) == (0,)


def test_positive_path_is_not_negative():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1)))
    st = ConversionState.lift(g, FlowAssignment(REF, (1, 1)), 3)
    assert find_negative_ditrail(st, 0, 2) is None


def test_tadpole_tail_into_negative_loop():
    g = SignedGraph(2, (Edge(0, 1, 1), Edge(1, 1, -1)))
    st = ConversionState.lift(g, FlowAssignment(REF, (1, 1)), 3)
    tp = find_tadpole(st, 0)
    assert tp is not None
    assert tp.tail == (0,) and tp.head == (1,)
    assert tp.tail_end == 0 and tp.meet == 1


def test_no_tadpole_in_balanced_positive_graph():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1)))
    st = ConversionState.lift(g, FlowAssignment(REF, (1, 1, 1)), 3)
    for x in range(3):
        assert find_tadpole(st, x) is None


# ---------------------------------------------------------------------------
# modulo -> integer conversion


def check_conversion(g, fa, k, out):
    res = check_flow(g, out, FlowKind.integer(k))
    assert res.ok, res.violation
    assert out.orientation == fa.orientation
    for a, b in zip(signed_values(out), fa.values):
        assert (int(a) - int(b)) % k == 0


def test_k33_z3_conversion():
    g = k33()
    fa = find_nz_zk_flow(g, 3)
    out = modflow_to_intflow(g, fa, 3)
    check_conversion(g, fa, 3, out)


def test_petersen_z7_conversion(petersen):
    fa = find_nz_zk_flow(petersen, 7)
    out = modflow_to_intflow(petersen, fa, 7)
    check_conversion(petersen, fa, 7, out)


def test_already_integer_flow_is_fixed_point():
    # a positive integer flow re-read as residues conserves exactly, so
    # the scheduler has no sources and must not touch anything
    g = k33()
    base = find_nz_k_flow(g, 3)
    assert all(v > 0 for v in base.values)  # solver outputs positive values
    out, state = run_modflow_conversion(g, base, 3)
    assert out == base
    assert state.journal == []


def test_even_k_needs_flag():
    g = k33()
    fa = find_nz_zk_flow(g, 4)
    with pytest.raises(PreconditionError, match="odd"):
        modflow_to_intflow(g, fa, 4)


def test_barbell_guard():
    g = long_barbell_graph()
    fa = find_nz_zk_flow(g, 5)
    assert fa is not None
    with pytest.raises(PreconditionError, match="barbell"):
        modflow_to_intflow(g, fa, 5)


def test_w5_counterexample_defeats_even_k():
    # the wheel signature with a Z_4-flow but no 4-flow cannot convert:
    # the run must end in an abort, never a bogus success
    bad = None
    for g in w5_all_signatures():
        if find_nz_zk_flow(g, 4) is not None and find_nz_k_flow(g, 4) is None:
            bad = g
            break
    assert bad is not None
    fa = find_nz_zk_flow(bad, 4)
    with pytest.raises((InvariantViolation, ResourceCapExceeded)):
        modflow_to_intflow(bad, fa, 4, allow_even_k=True, cap=50_000)


def test_journal_replay_reproduces_final_state(petersen):
    fa = find_nz_zk_flow(petersen, 5)
    if fa is None:
        fa = find_nz_zk_flow(petersen, 7)
        k = 7
    else:
        k = 5
    out, state = run_modflow_conversion(petersen, fa, k)
    replay = ConversionState.lift(petersen, fa, k)
    for op, arg in state.journal:
        if op == "switch":
            replay.switch_at(arg)
        else:
            replay.minus(arg)
    assert replay.values == state.values
    assert replay.dirs == state.dirs


def test_conversion_is_deterministic(petersen):
    fa = find_nz_zk_flow(petersen, 7)
    a = modflow_to_intflow(petersen, fa, 7)
    b = modflow_to_intflow(petersen, fa, 7)
    assert a == b


# ---------------------------------------------------------------------------
# sum of 2-flows


def positive_form(fa):
    rev = frozenset(i for i, v in enumerate(fa.values) if v < 0)
    return FlowAssignment(
        Orientation(fa.orientation.reversed_edges ^ rev),
        tuple(abs(v) for v in fa.values),
    )


def test_petersen_six_flow_decomposes(petersen):
    fa = positive_form(find_nz_k_flow(petersen, 6))
    parts = decompose_into_2_flows(petersen, fa, 6)
    assert len(parts) == 5
    for part in parts:
        assert set(part.values) <= {0, 1}
        assert all(b == 0 for b in boundary(petersen, part))
    for eid in range(petersen.num_edges):
        assert sum(p.values[eid] for p in parts) == fa.values[eid]


def test_k_defaults_to_max_plus_one():
    g = k33()
    fa = positive_form(find_nz_k_flow(g, 3))
    parts = decompose_into_2_flows(g, fa)
    assert len(parts) == 2


def test_decompose_rejects_signed_values(petersen):
    fa = find_nz_k_flow(petersen, 6)
    if all(v > 0 for v in fa.values):
        fa = FlowAssignment(fa.orientation, (-fa.values[0],) + fa.values[1:])
    with pytest.raises(PreconditionError):
        decompose_into_2_flows(petersen, fa, 6)


def test_decompose_rejects_non_flow():
    g = k33()
    with pytest.raises(PreconditionError):
        decompose_into_2_flows(g, FlowAssignment(REF, (1,) * 9), 3)


def test_decompose_barbell_guard_and_failure():
    # the sum-of-2-flows theorem genuinely fails on a long barbell: the
    # doubled path value cannot split into two conserving {0,1} layers
    g = long_barbell_graph()
    fa = FlowAssignment(Orientation(frozenset({0})), (1, 1, 2, 2))
    assert check_flow(g, fa, FlowKind.integer(3)).ok
    with pytest.raises(PreconditionError):
        decompose_into_2_flows(g, fa, 3)
    with pytest.raises(InvariantViolation):
        decompose_into_2_flows(g, fa, 3, require_barbell_free=False)


# ---------------------------------------------------------------------------
# eulerian decomposition


def test_parallel_unbalanced_pairs_rebalance():
    # two unbalanced circuits through the same vertex pair recombine
    # into balanced circuits
    g = SignedGraph(
        2, (Edge(0, 1, 1), Edge(0, 1, -1), Edge(0, 1, 1), Edge(0, 1, -1))
    )
    dec = eulerian_decompose(g)
    kinds = sorted(w.kind for w in dec.members)
    assert kinds == ["balanced-circuit", "balanced-circuit"]
    covered = sorted(e for w in dec.members for e in w.edge_ids)
    assert covered == [0, 1, 2, 3]


def test_short_barbell_member():
    g = SignedGraph(1, (Edge(0, 0, -1), Edge(0, 0, -1)))
    dec = eulerian_decompose(g)
    assert len(dec.members) == 1
    assert dec.members[0].kind == "short-barbell"


def test_balanced_cycle_single_member():
    g = SignedGraph(4, tuple(Edge(i, (i + 1) % 4, 1) for i in range(4)))
    dec = eulerian_decompose(g)
    assert [w.kind for w in dec.members] == ["balanced-circuit"]


def test_eulerian_preconditions():
    with pytest.raises(PreconditionError):
        eulerian_decompose(SignedGraph(2, (Edge(0, 1, 1),)))  # odd degrees
    g = SignedGraph(2, (Edge(0, 0, -1), Edge(0, 1, 1), Edge(0, 1, 1)))
    with pytest.raises(PreconditionError):
        eulerian_decompose(g)  # lone negative edge in a component


def test_members_reclassify(corpus_3_4):
    from signedflow.structure import classify_signed_circuit
    from signedflow.core import is_eulerian
    from signedflow.structure import find_long_barbell, is_flow_admissible

    for g in corpus_3_4:
        if not (
            is_flow_admissible(g).admissible
            and is_eulerian(g)
            and len(g.negative_edges) % 2 == 0
            and find_long_barbell(g) is None
        ):
            continue
        dec = eulerian_decompose(g)
        for w in dec.members:
            again = classify_signed_circuit(g, w.edge_ids)
            assert again is not None and again.kind == w.kind


# ---------------------------------------------------------------------------
# normalization


def test_g1_witness_normalizes_to_loop_residue():
    g = g_family(1)
    fa = g_family_circular_witness(1)
    state = normalize_circular_flow(g, fa, 2, 1)
    assert state.off_grid == frozenset({5, 6})
    for eid in state.off_grid:
        doubled = state.values[eid] * 2 * state.q
        assert doubled.denominator == 1 and doubled.numerator % 2 == 1


def test_perturbed_triangle_lands_on_grid():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1)))
    fa = FlowAssignment(REF, (Fraction(4, 3),) * 3)
    state = normalize_circular_flow(g, fa, 2, 1)
    assert state.off_grid == frozenset()
    assert state.values == (1, 1, 1)
    assert state.pushes == (((0, 1, 2), -1, Fraction(1, 3)),)


def test_tie_pushes_up():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1)))
    fa = FlowAssignment(REF, (Fraction(3, 2),) * 3)
    state = normalize_circular_flow(g, fa, 2, 1)
    assert state.values == (2, 2, 2)
    assert state.pushes[0][1] == 1


def test_on_grid_input_untouched():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1)))
    fa = FlowAssignment(REF, (1, 1, 1))
    state = normalize_circular_flow(g, fa, 2, 1)
    assert state.pushes == ()
    assert state.values == (1, 1, 1)


def test_normalize_validates_input_range():
    g = SignedGraph(3, (Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 0, 1)))
    with pytest.raises(PreconditionError):
        normalize_circular_flow(g, FlowAssignment(REF, (Fraction(5, 2),) * 3), 2, 1)


def test_values_stay_inside_band():
    g = g_family(2)
    fa = g_family_circular_witness(2)
    state = normalize_circular_flow(g, fa, 2, 1)
    top = Fraction(2, 1)
    assert all(1 <= v <= top for v in state.values)
    # off-grid recomputed from scratch matches the stored set
    assert state.off_grid == frozenset(
        i for i, v in enumerate(state.values) if (v * state.q).denominator != 1
    )
