"""Randomized laws that must hold on every signed graph, not just the corpus."""

from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from signedflow.core import (
    Edge,
    FlowAssignment,
    FlowKind,
    Orientation,
    SignedGraph,
    boundary,
    check_flow,
    edge_boundary,
    is_balanced,
    serialize_graph,
    switch,
    switch_orientation,
)
from signedflow.errors import NotFlowAdmissibleError
from signedflow.solve import find_nz_k_flow, find_nz_zk_flow, flow_numbers
from signedflow.transform import ConversionState, minusing, normalize_circular_flow

REF = Orientation.reference()


@st.composite
def signed_graphs(draw, max_v=4, max_e=6):
    n = draw(st.integers(1, max_v))
    m = draw(st.integers(1, max_e))
    vert = st.integers(0, n - 1)
    sign = st.sampled_from((1, -1))
    edges = tuple(Edge(draw(vert), draw(vert), draw(sign)) for _ in range(m))
    return SignedGraph(n, edges)


@st.composite
def vertex_subsets(draw, g):
    return draw(st.sets(st.integers(0, g.num_vertices - 1)))


@given(signed_graphs(), st.data())
def test_switch_is_an_involution(g, data):
    s = data.draw(vertex_subsets(g))
    assert serialize_graph(switch(switch(g, s), s)) == serialize_graph(g)


@given(signed_graphs(), st.data())
def test_balance_is_switching_invariant(g, data):
    s = data.draw(vertex_subsets(g))
    assert is_balanced(switch(g, s)).balanced == is_balanced(g).balanced


@given(signed_graphs(), st.data())
@settings(deadline=None)
def test_switching_transports_flows(g, data):
    fa = find_nz_k_flow(g, 3)
    assume(fa is not None)
    s = data.draw(vertex_subsets(g))
    g2 = switch(g, s)
    o2 = switch_orientation(g, fa.orientation, s)
    assert check_flow(g2, FlowAssignment(o2, fa.values), FlowKind.integer(3)).ok


@given(signed_graphs(), st.integers(2, 5))
@settings(deadline=None)
def test_modular_solutions_are_valid_and_deterministic(g, k):
    # no parity claim here: residue classes only pin the boundary mod k, and
    # a lone negative loop really does carry a single odd value under Z2
    fa = find_nz_zk_flow(g, k)
    assume(fa is not None)
    assert check_flow(g, fa, FlowKind.modulo(k)).ok
    assert find_nz_zk_flow(g, k) == fa


@given(signed_graphs(), st.integers(2, 4))
@settings(deadline=None)
def test_integer_solutions_obey_negative_parity(g, k):
    fa = find_nz_k_flow(g, k)
    assume(fa is not None)
    assert check_flow(g, fa, FlowKind.integer(k)).ok
    odd_neg = sum(
        1 for e, v in zip(g.edges, fa.values) if e.sign < 0 and v % 2 == 1
    )
    assert odd_neg % 2 == 0


@given(signed_graphs(), st.data())
def test_vertex_plus_edge_boundaries_cancel(g, data):
    # conservation bookkeeping: whatever leaks out of the vertex boundaries
    # sits on the negative edges, for any values and any orientation
    values = tuple(
        data.draw(st.integers(-5, 5)) for _ in range(g.num_edges)
    )
    flips = data.draw(st.sets(st.integers(0, g.num_edges - 1)))
    fa = FlowAssignment(Orientation(frozenset(flips)), values)
    total = sum(boundary(g, fa))
    total += sum(
        edge_boundary(g, fa, i) for i, e in enumerate(g.edges) if e.sign < 0
    )
    assert total == 0


@given(signed_graphs(), st.data())
@settings(deadline=None)
def test_minusing_is_an_involution(g, data):
    fa = find_nz_zk_flow(g, 3)
    assume(fa is not None)
    state = ConversionState.lift(g, fa, 3)
    vals0 = list(state.values)
    dirs0 = [list(d) for d in state.dirs]
    ids = data.draw(st.sets(st.integers(0, g.num_edges - 1)))
    minusing(state, ids)
    minusing(state, ids)
    assert state.values == vals0
    assert state.dirs == dirs0


@given(signed_graphs(max_v=4, max_e=5))
@settings(deadline=None, max_examples=30)
def test_normalization_lands_on_grid_within_band(g):
    try:
        numbers = flow_numbers(g, k_max=6)
    except NotFlowAdmissibleError:
        assume(False)
    assume(numbers.phi_c is not None and "phi_c" in numbers.witnesses)
    r = Fraction(numbers.phi_c)
    fa = numbers.witnesses["phi_c"]
    band = r - 1
    p, q = band.numerator, band.denominator
    state = normalize_circular_flow(g, fa, p, q)
    final = state.flow
    assert final.orientation == fa.orientation
    assert all(b == 0 for b in boundary(g, final))
    for i, v in enumerate(final.values):
        value = Fraction(v)
        assert 1 <= value <= band
        if i in state.off_grid:
            # stuck values sit strictly between grid points: 2q*f is odd
            assert (2 * q * value).denominator == 1
            assert (2 * q * value).numerator % 2 == 1
        else:
            assert (q * value).denominator == 1
