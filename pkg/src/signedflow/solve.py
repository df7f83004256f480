"""Exact existence solvers: k-flows, Z_k-flows, flow numbers.

Search kernels live in _kernel (compiled) with _solver_py as the always
available fallback; both consume identical argument arrays, so results
(including node counts) are byte-for-byte the same across backends.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    Edge,
    FlowAssignment,
    FlowKind,
    Orientation,
    SignedGraph,
    boundary,
    check_flow,
)
from .errors import InvariantViolation, NotFlowAdmissibleError, PreconditionError, ResourceCapExceeded
from .structure import SignedCircuitWitness, classify_signed_circuit, is_flow_admissible
from . import _solver_py
from .simplex import INFEASIBLE, OPTIMAL, solve_lp

try:  # compiled twin; optional
    from . import _kernel  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _kernel = None

DEFAULT_NODE_CAP = 50_000_000
DEFAULT_EDGE_CAP_CIRCULAR = 20

__all__ = [
    "FlowNumbers",
    "find_nz_k_flow",
    "find_nz_zk_flow",
    "find_2_flow_on_even_graph",
    "signed_circuit_flow",
    "integer_flow_number",
    "circular_flow_number",
    "flow_numbers",
    "solver_backend_name",
]


def _resolve_cap(cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("SG_RESOURCE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise PreconditionError(f"SG_RESOURCE_CAP is not an integer: {env!r}") from None
    return DEFAULT_NODE_CAP


def _pick_backend(backend: Optional[str]):
    if backend in (None, "auto"):
        mod = _kernel if _kernel is not None else _solver_py
    elif backend == "compiled":
        if _kernel is None:
            raise PreconditionError("compiled kernel not available")
        mod = _kernel
    elif backend == "python":
        mod = _solver_py
    else:
        raise PreconditionError(f"unknown backend {backend!r}")
    return mod


def solver_backend_name(backend: Optional[str] = None) -> str:
    mod = _pick_backend(backend)
    return "compiled" if mod is _kernel and _kernel is not None else "python"


def _assignment_order(g: SignedGraph) -> list[int]:
    """Edge positions in DFS discovery order.

    Vertices are explored depth-first from the lowest id, smallest
    neighbour first; when a vertex is first visited, its not yet
    discovered incident edges are appended in ascending id order.
    Clustering edges around vertices this way lets the kernel's slack
    prune close boundaries early.
    """
    order: list[int] = []
    seen = [False] * g.num_edges
    visited = [False] * g.num_vertices
    for root in range(g.num_vertices):
        if visited[root]:
            continue
        stack = [root]
        while stack:
            v = stack.pop()
            if visited[v]:
                continue
            visited[v] = True
            nbrs = set()
            for eid, _end in g.incidence[v]:
                if not seen[eid]:
                    seen[eid] = True
                    order.append(eid)
                e = g.edges[eid]
                nbrs.add(e.v if e.u == v else e.u)
            for w in sorted(nbrs, reverse=True):
                if not visited[w]:
                    stack.append(w)
    return order


def _kernel_arrays(g: SignedGraph, order: list[int]):
    """typ/va/ca/vb/cb arrays (see _solver_py) under the reference orientation."""
    m = len(order)
    typ = [0] * m
    va = [0] * m
    ca = [0] * m
    vb = [0] * m
    cb = [0] * m
    for pos, eid in enumerate(order):
        e = g.edges[eid]
        if e.u == e.v:
            if e.sign < 0:
                typ[pos] = 1
                va[pos] = e.u
                ca[pos] = 2  # both half-edges point out
            else:
                typ[pos] = 2
                va[pos] = e.u
        else:
            typ[pos] = 0
            va[pos] = e.u
            vb[pos] = e.v
            ca[pos] = 1
            cb[pos] = -1 if e.sign > 0 else 1
    return typ, va, ca, vb, cb


def _positive_form(g: SignedGraph, per_edge: list[int]) -> FlowAssignment:
    """Signed reference-orientation values -> positive values + flip set."""
    rev = frozenset(i for i, v in enumerate(per_edge) if v < 0)
    return FlowAssignment(Orientation(rev), tuple(abs(v) for v in per_edge))


def find_nz_k_flow(
    g: SignedGraph,
    k: int,
    cap: Optional[int] = None,
    stats: Optional[dict] = None,
    backend: Optional[str] = None,
) -> Optional[FlowAssignment]:
    """Nowhere-zero integer k-flow, or None when provably none exists.

    None is an exactness claim (the pruned search exhausted the whole
    value space); hitting the node cap raises ResourceCapExceeded.
    """
    if not (isinstance(k, int) and k >= 2):
        raise PreconditionError("k must be an integer >= 2")
    cap = _resolve_cap(cap)
    mod = _pick_backend(backend)
    order = _assignment_order(g)
    typ, va, ca, vb, cb = _kernel_arrays(g, order)
    status, vals, nodes = mod.search_integer(
        len(order), g.num_vertices, typ, va, ca, vb, cb, k, cap
    )
    if stats is not None:
        stats["nodes"] = nodes
        stats["backend"] = solver_backend_name(backend)
    if status == _solver_py.CAPPED:
        raise ResourceCapExceeded("k-flow search", cap=cap, spent=nodes)
    if status == _solver_py.EXHAUSTED:
        return None
    per_edge = [0] * g.num_edges
    for pos, eid in enumerate(order):
        per_edge[eid] = vals[pos]
    return _positive_form(g, per_edge)


def find_nz_zk_flow(
    g: SignedGraph,
    k: int,
    cap: Optional[int] = None,
    stats: Optional[dict] = None,
    backend: Optional[str] = None,
) -> Optional[FlowAssignment]:
    """Nowhere-zero modulo-k flow with values in 1..k-1, or None (exact)."""
    if not (isinstance(k, int) and k >= 2):
        raise PreconditionError("k must be an integer >= 2")
    cap = _resolve_cap(cap)
    mod = _pick_backend(backend)
    order = _assignment_order(g)
    typ, va, ca, vb, cb = _kernel_arrays(g, order)
    status, vals, nodes = mod.search_modulo(
        len(order), g.num_vertices, typ, va, ca, vb, cb, k, cap
    )
    if stats is not None:
        stats["nodes"] = nodes
        stats["backend"] = solver_backend_name(backend)
    if status == _solver_py.CAPPED:
        raise ResourceCapExceeded("Z_k-flow search", cap=cap, spent=nodes)
    if status == _solver_py.EXHAUSTED:
        return None
    per_edge = [0] * g.num_edges
    for pos, eid in enumerate(order):
        per_edge[eid] = vals[pos]
    return FlowAssignment(Orientation.reference(), tuple(per_edge))


# ---------------------------------------------------------------------------
# eulerian 2-flows


def _eulerian_circuit(g: SignedGraph, used: list[bool], start: int):
    """Closed trail through every unused edge of start's component.

    Returns a list of (edge_id, depart_end, arrive_end) in walk order.
    Assumes every vertex of the component has even degree.
    """
    ptr = {}
    stack: list[tuple[int, Optional[tuple[int, int, int]]]] = [(start, None)]
    out: list[tuple[int, int, int]] = []
    while stack:
        v, via = stack[-1]
        inc = g.incidence[v]
        i = ptr.get(v, 0)
        while i < len(inc) and used[inc[i][0]]:
            i += 1
        ptr[v] = i
        if i == len(inc):
            stack.pop()
            if via is not None:
                out.append(via)
            continue
        eid, end = inc[i]
        used[eid] = True
        e = g.edges[eid]
        if e.u == e.v:
            stack.append((v, (eid, end, 1 - end)))
        else:
            w = e.v if end == 0 else e.u
            stack.append((w, (eid, end, 1 - end)))
    out.reverse()
    return out


def _ref_tau(e: Edge, end: int) -> int:
    if e.sign < 0:
        return 1
    return 1 if end == 0 else -1


def _chain_values(
    g: SignedGraph, walk, first_sign: int
) -> tuple[dict[int, int], int, int]:
    """Chain ±first_sign flow values along a walk of (eid, dep, arr) steps.

    Consecutive steps cancel at their shared vertex.  Returns the signed
    values (reference orientation), the contribution of the first step
    at the walk's start, and of the last step at the walk's end.
    """
    vals: dict[int, int] = {}
    dep_contrib = 0
    p = 0
    for i, (eid, dep, arr) in enumerate(walk):
        e = g.edges[eid]
        td = _ref_tau(e, dep)
        ta = _ref_tau(e, arr)
        if i == 0:
            f = first_sign * td  # depart contribution = first_sign
            dep_contrib = td * f
        else:
            f = -p * td
        vals[eid] = f
        p = ta * f
    return vals, dep_contrib, p


def find_2_flow_on_even_graph(g: SignedGraph) -> Optional[FlowAssignment]:
    """Nowhere-zero ±1 flow, existing iff every component is eulerian
    with an even number of negative edges.

    Constructive: each component is traversed along an eulerian circuit
    and values are chained so consecutive steps cancel; every negative
    edge flips the running polarity, so the circuit closes consistently
    exactly when the negative count is even.  None is definitive.
    """
    deg = [0] * g.num_vertices
    for e in g.edges:
        deg[e.u] += 1
        deg[e.v] += 1
    if any(d % 2 for d in deg):
        return None
    used = [False] * g.num_edges
    per_edge = [0] * g.num_edges
    for eid0 in range(g.num_edges):
        if used[eid0]:
            continue
        start = g.edges[eid0].u
        walk = _eulerian_circuit(g, used, start)
        if not walk:
            raise InvariantViolation("empty eulerian circuit on unused edge")
        vals, dep_contrib, p_last = _chain_values(g, walk, 1)
        if dep_contrib + p_last != 0:
            # circuit cannot close: the component has odd negatives
            neg = sum(1 for (eid, _, _) in walk if g.edges[eid].sign < 0)
            if neg % 2 == 0:
                raise InvariantViolation("closure failed on even-negative component")
            return None
        for eid, f in vals.items():
            per_edge[eid] = f
    fa = _positive_form(g, per_edge)
    res = check_flow(g, fa, FlowKind.integer(2))
    if not res.ok:
        raise InvariantViolation(f"constructed 2-flow invalid: {res.violation}")
    return fa


# ---------------------------------------------------------------------------
# signed circuit flows


def _walk_with_ends(g: SignedGraph, seq: tuple[int, ...], start: int):
    """Turn an edge-id trail into (eid, dep_end, arr_end) steps from start."""
    out = []
    v = start
    for eid in seq:
        e = g.edges[eid]
        if e.u == e.v:
            if v != e.u:
                raise PreconditionError("walk leaves its vertices")
            out.append((eid, 0, 1))
            continue
        if v == e.u:
            out.append((eid, 0, 1))
            v = e.v
        elif v == e.v:
            out.append((eid, 1, 0))
            v = e.u
        else:
            raise PreconditionError("walk edges not consecutive")
    return out, v


def _zero_boundary_or_raise(g: SignedGraph, per_edge: list) -> None:
    fa = FlowAssignment(Orientation.reference(), tuple(per_edge))
    bad = [v for v, b in enumerate(boundary(g, fa)) if b != 0]
    if bad:
        raise InvariantViolation(f"signed circuit flow has boundary at {bad}")


def signed_circuit_flow(w: SignedCircuitWitness) -> FlowAssignment:
    """Flow supported exactly on a signed circuit.

    Balanced circuit and short barbell get values ±1 (a 2-flow);
    a long barbell gets ±1 on the circuits and ±2 on the path.
    """
    g = w.graph
    if g is None:
        raise PreconditionError("witness does not reference its host graph")
    check = classify_signed_circuit(g, w.edge_ids)
    if check is None or check.kind != w.kind:
        raise PreconditionError("witness does not describe a signed circuit")
    per_edge: list[int] = [0] * g.num_edges

    def place(vals: dict[int, int]) -> None:
        for eid, f in vals.items():
            per_edge[eid] = f

    if w.kind == "balanced-circuit":
        seq = w.circuits[0]
        walk, _ = _walk_with_ends(g, seq, _circuit_start(g, seq))
        vals, dep, p_last = _chain_values(g, walk, 1)
        if dep + p_last != 0:
            raise InvariantViolation("balanced circuit failed to close")
        place(vals)
    elif w.kind == "short-barbell":
        c1, c2 = w.circuits
        meet = set(_circuit_vertex_set(g, c1)) & set(_circuit_vertex_set(g, c2))
        if len(meet) != 1:
            raise PreconditionError("short barbell circuits must meet in one vertex")
        a = meet.pop()
        w1, _ = _walk_with_ends(g, _rotate_to(g, c1, a), a)
        w2, _ = _walk_with_ends(g, _rotate_to(g, c2, a), a)
        v1, d1, p1 = _chain_values(g, w1, 1)
        b1 = d1 + p1  # ±2 at the meet
        v2, d2, p2 = _chain_values(g, w2, 1)
        if d2 + p2 == b1:
            v2 = {eid: -f for eid, f in v2.items()}
        place(v1)
        place(v2)
    else:  # long barbell
        c1, c2 = w.circuits
        path = w.path or ()
        pverts_first = g.edges[path[0]]
        ends1 = set(_circuit_vertex_set(g, c1))
        ends2 = set(_circuit_vertex_set(g, c2))
        a = pverts_first.u if pverts_first.u in ends1 or pverts_first.u in ends2 else pverts_first.v
        # orient the path from the circuit containing a toward the other
        if a in ends1:
            ca_, cb_ = c1, c2
        else:
            ca_, cb_ = c2, c1
        wp, b = _walk_with_ends(g, path, a)
        wa, _ = _walk_with_ends(g, _rotate_to(g, ca_, a), a)
        wb, _ = _walk_with_ends(g, _rotate_to(g, cb_, b), b)
        va_, da, pa = _chain_values(g, wa, 1)
        ba = da + pa  # circuit boundary at a, ±2
        vp, dp, pp = _chain_values(g, wp, 1)
        vp = {eid: 2 * f for eid, f in vp.items()}
        dp, pp = 2 * dp, 2 * pp
        if dp == ba:  # path must cancel the circuit at a
            vp = {eid: -f for eid, f in vp.items()}
            dp, pp = -dp, -pp
        vb_, db, pb = _chain_values(g, wb, 1)
        if db + pb == pp:
            vb_ = {eid: -f for eid, f in vb_.items()}
        place(va_)
        place(vp)
        place(vb_)
    _zero_boundary_or_raise(g, per_edge)
    return _positive_form(g, per_edge)


def _circuit_vertex_set(g: SignedGraph, seq: tuple[int, ...]) -> set[int]:
    out: set[int] = set()
    for eid in seq:
        e = g.edges[eid]
        out.add(e.u)
        out.add(e.v)
    return out


def _circuit_start(g: SignedGraph, seq: tuple[int, ...]) -> int:
    """A vertex from which the circuit's edge sequence walks consecutively.

    The start of edge 0 is its endpoint not shared with edge 1; for
    digons and loops both choices work.
    """
    e0 = g.edges[seq[0]]
    if len(seq) == 1:
        return e0.u
    nxt = g.edges[seq[1]]
    shared = {e0.u, e0.v} & {nxt.u, nxt.v}
    if not shared:
        raise PreconditionError("circuit edges not consecutive")
    return e0.u if e0.v in shared else e0.v


def _rotate_to(g: SignedGraph, seq: tuple[int, ...], v: int) -> tuple[int, ...]:
    """Rotate a circuit's edge sequence so it starts and ends at v."""
    n = len(seq)
    s0 = _circuit_start(g, seq)
    if n == 1:
        if s0 != v:
            raise PreconditionError("loop circuit does not touch rotation vertex")
        return seq
    verts = [s0]
    cur = s0
    for eid in seq:
        e = g.edges[eid]
        cur = e.v if cur == e.u else e.u
        verts.append(cur)
    if verts[-1] != s0:
        raise PreconditionError("edge sequence is not a closed circuit")
    for i in range(n):
        if verts[i] == v:
            return seq[i:] + seq[:i]
    raise PreconditionError("rotation vertex not on circuit")


# ---------------------------------------------------------------------------
# flow numbers


@dataclass
class FlowNumbers:
    """Integer and circular flow numbers with their witnesses.

    phi_i is None when no k ≤ k_max admits a flow; phi_c is None when
    not computed.  Witnesses are keyed "phi_i" / "phi_c" and re-verify
    under check_flow.
    """

    phi_i: Optional[int] = None
    phi_c: Optional[Fraction] = None
    witnesses: dict = field(default_factory=dict)


def integer_flow_number(
    g: SignedGraph,
    k_max: int = 8,
    cap: Optional[int] = None,
    backend: Optional[str] = None,
) -> FlowNumbers:
    """Smallest k ≤ k_max admitting a nowhere-zero k-flow, with witness.

    Raises NotFlowAdmissibleError up front when no k can ever work.
    phi_i None means every k ≤ k_max was exhausted without a flow.
    """
    if not (isinstance(k_max, int) and k_max >= 2):
        raise PreconditionError("k_max must be an integer >= 2")
    verdict = is_flow_admissible(g)
    if not verdict:
        raise NotFlowAdmissibleError(
            f"graph is not flow-admissible: {verdict.defects[0].kind}"
        )
    for k in range(2, k_max + 1):
        fa = find_nz_k_flow(g, k, cap=cap, backend=backend)
        if fa is not None:
            return FlowNumbers(phi_i=k, witnesses={"phi_i": fa})
    return FlowNumbers(phi_i=None)


def _orientation_coeffs(g: SignedGraph, lp_edges: list[int]):
    """Per lp-edge vertex contributions under reference and reversed lags."""
    ref = []
    for eid in lp_edges:
        e = g.edges[eid]
        if e.u == e.v:
            ref.append(((e.u, 2),))
        elif e.sign > 0:
            ref.append(((e.u, 1), (e.v, -1)))
        else:
            ref.append(((e.u, 1), (e.v, 1)))
    return ref


def circular_flow_number(
    g: SignedGraph,
    edge_cap: int = DEFAULT_EDGE_CAP_CIRCULAR,
    shortcut: bool = True,
) -> FlowNumbers:
    """Exact circular flow number by orientation sweep + rational LP.

    Per orientation, minimize t s.t. boundary zero and 1 ≤ f ≤ t; the
    flow number is 1 + min over orientations.  Negating every edge
    leaves the optimum unchanged, so the first edge's direction is
    pinned.  Vertices with all half-edges pointing the same way are
    rejected without an LP call.
    """
    verdict = is_flow_admissible(g)
    if not verdict:
        raise NotFlowAdmissibleError(
            f"graph is not flow-admissible: {verdict.defects[0].kind}"
        )
    if g.num_edges > edge_cap:
        raise ResourceCapExceeded(
            "circular flow number edge cap", cap=edge_cap, spent=g.num_edges
        )
    lp_edges = [i for i, e in enumerate(g.edges) if not (e.u == e.v and e.sign > 0)]
    in_lp = set(lp_edges)
    pos_loops = [i for i in range(g.num_edges) if i not in in_lp]
    if not lp_edges:
        # only positive loops (or no edges at all): every value may be 1
        fa = FlowAssignment(Orientation.reference(), (1,) * g.num_edges)
        return FlowNumbers(phi_c=Fraction(2), witnesses={"phi_c": fa})
    if shortcut:
        fa2 = find_nz_k_flow(g, 2)
        if fa2 is not None:
            return FlowNumbers(phi_c=Fraction(2), witnesses={"phi_c": fa2})
    ref = _orientation_coeffs(g, lp_edges)
    mlp = len(lp_edges)
    best: Optional[tuple[Fraction, tuple[int, ...], FlowAssignment]] = None
    for mask in range(1 << (mlp - 1)):
        flipped = [False] * mlp
        for b in range(mlp - 1):
            if mask >> b & 1:
                flipped[b + 1] = True
        # vertex coefficient rows for this orientation
        coef: dict[int, dict[int, int]] = {}
        for pos in range(mlp):
            s = -1 if flipped[pos] else 1
            for v, c0 in ref[pos]:
                coef.setdefault(v, {})[pos] = coef.get(v, {}).get(pos, 0) + s * c0
        feasible = True
        for v, row in coef.items():
            vals = [c for c in row.values() if c != 0]
            if vals and (all(c > 0 for c in vals) or all(c < 0 for c in vals)):
                feasible = False
                break
        if not feasible:
            continue
        a_eq = []
        b_eq = []
        for v in sorted(coef):
            row = coef[v]
            arow = [row.get(pos, 0) for pos in range(mlp)] + [0]
            if all(c == 0 for c in arow):
                continue
            a_eq.append(arow)
            b_eq.append(-sum(arow[:mlp]))
        a_ub = []
        b_ub = []
        for pos in range(mlp):
            row = [0] * (mlp + 1)
            row[pos] = 1
            row[mlp] = -1
            a_ub.append(row)
            b_ub.append(0)
        cvec = [0] * mlp + [1]
        status, x, obj = solve_lp(cvec, a_eq, b_eq, a_ub, b_ub)
        if status == INFEASIBLE:
            continue
        if status != OPTIMAL or x is None or obj is None:
            raise InvariantViolation(f"orientation LP returned {status}")
        t = 1 + obj
        key = tuple(lp_edges[pos] for pos in range(mlp) if flipped[pos])
        if best is None or (t, key) < (best[0], best[1]):
            per_edge = [Fraction(0)] * g.num_edges
            rev = set(key)
            for pos, eid in enumerate(lp_edges):
                per_edge[eid] = 1 + x[pos]
            for eid in pos_loops:
                per_edge[eid] = Fraction(1)
            fa = FlowAssignment(
                Orientation(frozenset(rev)),
                tuple(per_edge),
            )
            best = (t, key, fa)
            if t == 1:
                break
    if best is None:
        raise InvariantViolation("no orientation admits a flow on an admissible graph")
    t, _, fa = best
    return FlowNumbers(phi_c=1 + t, witnesses={"phi_c": fa})


def flow_numbers(
    g: SignedGraph,
    k_max: int = 8,
    edge_cap: int = DEFAULT_EDGE_CAP_CIRCULAR,
    cap: Optional[int] = None,
) -> FlowNumbers:
    """Both flow numbers of an admissible graph, cross-checked."""
    fi = integer_flow_number(g, k_max=k_max, cap=cap)
    fc = circular_flow_number(g, edge_cap=edge_cap)
    out = FlowNumbers(phi_i=fi.phi_i, phi_c=fc.phi_c)
    out.witnesses.update(fi.witnesses)
    out.witnesses.update(fc.witnesses)
    if out.phi_i is not None and out.phi_c is not None and out.phi_c > out.phi_i:
        raise InvariantViolation(
            f"circular flow number {out.phi_c} exceeds integer flow number {out.phi_i}"
        )
    return out
