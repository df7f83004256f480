"""Structural predicates: signed circuits, barbells, admissibility, cubic tools.

A circuit is a connected 2-regular subgraph, represented as the tuple of
its edge ids in traversal order (a loop is a circuit of length one, a
pair of parallel edges one of length two).  A circuit is unbalanced when
it carries an odd number of negative edges.

The three kinds of signed circuit:
  * balanced circuit,
  * short barbell: two unbalanced circuits meeting in exactly one vertex,
  * long barbell: two vertex-disjoint unbalanced circuits joined by a
    path that meets them only at its ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    BalanceCertificate,
    SignedGraph,
    connected_components,
    delete_vertices,
    edge_subgraph,
    find_bridges,
    is_balanced,
)
from .errors import InvariantViolation, PreconditionError, ResourceCapExceeded

DEFAULT_CIRCUIT_CAP = 10**6
DEFAULT_SEARCH_CAP = 10**7

__all__ = [
    "SignedCircuitWitness",
    "StarCut",
    "AdmissibilityVerdict",
    "ComponentDefect",
    "enumerate_circuits",
    "circuit_vertices",
    "is_unbalanced_circuit",
    "classify_signed_circuit",
    "find_long_barbell",
    "find_signed_circuit",
    "is_flow_admissible",
    "has_star_cut",
    "is_antibalanced",
    "three_edge_coloring",
    "find_antibalanced_2_factor",
]


@dataclass(frozen=True)
class SignedCircuitWitness:
    """A verified signed circuit.  ``circuits`` holds one entry for a
    balanced circuit, two for barbells; ``path`` only for long barbells."""

    kind: str  # "balanced-circuit" | "short-barbell" | "long-barbell"
    circuits: tuple[tuple[int, ...], ...]
    path: tuple[int, ...] | None = None
    # host graph the edge ids refer to; lets a witness travel alone
    graph: "SignedGraph | None" = None

    @property
    def edge_ids(self) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.circuits:
            out.extend(c)
        if self.path:
            out.extend(self.path)
        return tuple(out)


@dataclass(frozen=True)
class StarCut:
    center: int
    leaves: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class ComponentDefect:
    component: tuple[int, ...]
    kind: str  # "one-negative-edge" | "balanced-side-bridge"
    edge: int | None = None
    switch_set: tuple[int, ...] | None = None


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    defects: tuple[ComponentDefect, ...]

    def __bool__(self) -> bool:
        return self.admissible


def circuit_vertices(g: SignedGraph, circuit: Sequence[int]) -> frozenset[int]:
    verts: set[int] = set()
    for eid in circuit:
        verts.add(g.edges[eid].u)
        verts.add(g.edges[eid].v)
    return frozenset(verts)


def is_unbalanced_circuit(g: SignedGraph, circuit: Sequence[int]) -> bool:
    return sum(1 for eid in circuit if g.edges[eid].sign < 0) % 2 == 1


def enumerate_circuits(g: SignedGraph, cap: int = DEFAULT_CIRCUIT_CAP) -> list[tuple[int, ...]]:
    """All circuits, sorted shortest first then lexicographically.

    Each circuit is discovered exactly once: its smallest edge id comes
    first, traversed from stored u to stored v.  ``cap`` bounds the DFS
    step count.
    """
    out: list[tuple[int, ...]] = []
    steps = 0
    for eid, e in enumerate(g.edges):
        if e.is_loop:
            out.append((eid,))
    for e0, e in enumerate(g.edges):
        if e.is_loop:
            continue
        start, first = e.u, e.v
        path = [e0]
        visited = {start, first}
        # stack of (vertex, iterator over incident half-edges)
        stack = [(first, iter(g.incidence[first]))]
        while stack:
            steps += 1
            if steps > cap:
                raise ResourceCapExceeded("circuit enumeration cap", cap=cap, spent=steps)
            x, it = stack[-1]
            advanced = False
            for eid, _ in it:
                e2 = g.edges[eid]
                if eid <= e0 or e2.is_loop or eid in path:
                    continue
                y = e2.other(x)
                if y == start:
                    out.append(tuple(path) + (eid,))
                elif y not in visited:
                    path.append(eid)
                    visited.add(y)
                    stack.append((y, iter(g.incidence[y])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    visited.discard(x)
                    path.pop()
    out.sort(key=lambda c: (len(c), c))
    return out


def _edge_set_connected(g: SignedGraph, edge_ids: Sequence[int]) -> bool:
    sub, _, _ = edge_subgraph(g, edge_ids)
    return len(connected_components(sub)) <= 1


def _forced_walks_from(
    g: SignedGraph, edge_ids: frozenset[int], start: int, stops: frozenset[int]
) -> list[tuple[tuple[int, ...], int]] | None:
    """Walk from ``start`` along each unused incident subgraph edge,
    forced through degree-2 vertices, halting at a vertex in ``stops``.

    Returns (edge sequence, terminus) per walk, or None when some walk is
    not forced (the degree structure is broken).  Every subgraph edge at
    ``start`` begins at most one walk: a returning walk consumes both of
    its end half-edges."""
    used: set[int] = set()
    walks = []
    for eid, _end in g.incidence[start]:
        if eid not in edge_ids or eid in used:
            continue
        seq = [eid]
        used.add(eid)
        x = g.edges[eid].other(start) if not g.edges[eid].is_loop else start
        while x not in stops:
            cand = {
                e2 for e2, _ in g.incidence[x] if e2 in edge_ids and e2 not in used
            }
            if len(cand) != 1:
                return None
            e2 = cand.pop()
            if g.edges[e2].is_loop:
                return None
            seq.append(e2)
            used.add(e2)
            x = g.edges[e2].other(x)
        walks.append((tuple(seq), x))
    return walks


def _trace_single_circuit(g: SignedGraph, edge_ids: Sequence[int]) -> tuple[int, ...] | None:
    """Trace a connected 2-regular edge set as one circuit; None if the
    trace does not cover every edge."""
    ids = frozenset(edge_ids)
    if len(ids) == 1:
        (eid,) = ids
        return (eid,) if g.edges[eid].is_loop else None
    start = min(min(g.edges[i].u, g.edges[i].v) for i in ids)
    walks = _forced_walks_from(g, ids, start, frozenset({start}))
    if walks is None or len(walks) != 1:
        return None
    seq, terminus = walks[0]
    if terminus != start or len(seq) != len(ids):
        return None
    return seq


def classify_signed_circuit(
    g: SignedGraph, edge_ids: Sequence[int]
) -> SignedCircuitWitness | None:
    """Decide whether an edge set is a signed circuit and of which kind.

    Returns None for anything else (never raises for mathematically
    negative answers)."""
    ids = list(edge_ids)
    if len(ids) != len(set(ids)) or not ids:
        return None
    if any(not (0 <= i < g.num_edges) for i in ids):
        raise PreconditionError("edge id out of range")
    idset = frozenset(ids)
    deg: dict[int, int] = {}
    for i in ids:
        e = g.edges[i]
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    if not _edge_set_connected(g, ids):
        return None
    degs = sorted(deg.values(), reverse=True)
    if all(d == 2 for d in degs):
        seq = _trace_single_circuit(g, ids)
        if seq is None or is_unbalanced_circuit(g, seq):
            return None
        return SignedCircuitWitness("balanced-circuit", (seq,), graph=g)
    if degs[0] == 4 and all(d == 2 for d in degs[1:]):
        meet = next(v for v, d in deg.items() if d == 4)
        walks = _forced_walks_from(g, idset, meet, frozenset({meet}))
        if walks is None or len(walks) != 2:
            return None
        (c1, t1), (c2, t2) = walks
        if t1 != meet or t2 != meet or len(c1) + len(c2) != len(ids):
            return None
        if not (is_unbalanced_circuit(g, c1) and is_unbalanced_circuit(g, c2)):
            return None
        return SignedCircuitWitness("short-barbell", (c1, c2), graph=g)
    if degs[0] == 3 and degs[1] == 3 and all(d == 2 for d in degs[2:]):
        a, b = sorted(v for v, d in deg.items() if d == 3)
        walks_a = _forced_walks_from(g, idset, a, frozenset({a, b}))
        if walks_a is None:
            return None
        circ_a = [w for w, t in walks_a if t == a]
        paths = [w for w, t in walks_a if t == b]
        if len(circ_a) != 1 or len(paths) != 1:
            return None
        used = set(circ_a[0]) | set(paths[0])
        rest = idset - used
        if not rest:
            return None
        walks_b = _forced_walks_from(g, rest, b, frozenset({a, b}))
        if walks_b is None:
            return None
        circ_b = [w for w, t in walks_b if t == b]
        if len(walks_b) != 1 or len(circ_b) != 1 or set(circ_b[0]) != rest:
            return None
        c1, c2, path = circ_a[0], circ_b[0], paths[0]
        if not (is_unbalanced_circuit(g, c1) and is_unbalanced_circuit(g, c2)):
            return None
        return SignedCircuitWitness("long-barbell", (c1, c2), path, graph=g)
    return None


def _connecting_path(
    g: SignedGraph, from_verts: frozenset[int], to_verts: frozenset[int]
) -> tuple[int, ...] | None:
    """Shortest path whose internal vertices avoid both endpoint sets."""
    from collections import deque

    prev: dict[int, tuple[int, int]] = {}
    seen = set(from_verts)
    queue = deque(from_verts)
    while queue:
        x = queue.popleft()
        for eid, _ in sorted(g.incidence[x]):
            e = g.edges[eid]
            if e.is_loop:
                continue
            y = e.other(x)
            if y in to_verts:
                path = [eid]
                while x not in from_verts:
                    peid, px = prev[x]
                    path.append(peid)
                    x = px
                return tuple(reversed(path))
            if y not in seen:
                seen.add(y)
                prev[y] = (eid, x)
                queue.append(y)
    return None


def find_long_barbell(
    g: SignedGraph, cap: int = DEFAULT_CIRCUIT_CAP
) -> SignedCircuitWitness | None:
    """Search for a long barbell; None is an exactness claim.

    Unbalanced circuits are tried shortest first; for each, the balance
    scan of the remaining graph supplies a disjoint unbalanced circuit
    and a breadth-first search the connecting path.
    """
    circuits = enumerate_circuits(g, cap=cap)
    for c in circuits:
        if not is_unbalanced_circuit(g, c):
            continue
        cverts = circuit_vertices(g, c)
        rest, vback, eback = delete_vertices(g, cverts)
        for comp in connected_components(rest):
            comp_sub, cvb, ceb = delete_vertices(
                rest, [v for v in range(rest.num_vertices) if v not in comp]
            )
            cert = is_balanced(comp_sub)
            if cert.witness is None:
                continue
            c2 = tuple(eback[ceb[i]] for i in cert.witness)
            path = _connecting_path(g, cverts, circuit_vertices(g, c2))
            if path is not None:
                return SignedCircuitWitness("long-barbell", (c, c2), path, graph=g)
    return None


def find_signed_circuit(
    g: SignedGraph, cap: int = DEFAULT_CIRCUIT_CAP
) -> SignedCircuitWitness | None:
    """First signed circuit contained in g: balanced circuits first, then
    short barbells, then long barbells.  None means g has no signed
    circuit (its components are unbalanced-circuit trees at most)."""
    circuits = enumerate_circuits(g, cap=cap)
    unbalanced = []
    for c in circuits:
        if is_unbalanced_circuit(g, c):
            unbalanced.append(c)
        else:
            return SignedCircuitWitness("balanced-circuit", (c,), graph=g)
    for i, c1 in enumerate(unbalanced):
        v1 = circuit_vertices(g, c1)
        for c2 in unbalanced[i + 1 :]:
            common = v1 & circuit_vertices(g, c2)
            if len(common) == 1:
                return SignedCircuitWitness("short-barbell", (c1, c2), graph=g)
            if len(common) >= 2:
                # two unbalanced circuits through two common vertices always
                # enclose a balanced circuit, which would have been returned
                raise InvariantViolation(
                    "unbalanced circuits share >= 2 vertices yet no balanced "
                    "circuit exists"
                )
    for i, c1 in enumerate(unbalanced):
        v1 = circuit_vertices(g, c1)
        for c2 in unbalanced[i + 1 :]:
            v2 = circuit_vertices(g, c2)
            if v1 & v2:
                continue
            path = _connecting_path(g, v1, v2)
            if path is not None:
                return SignedCircuitWitness("long-barbell", (c1, c2), path, graph=g)
    return None


def _component_subgraphs(g: SignedGraph):
    for comp in connected_components(g):
        sub, vback, eback = delete_vertices(
            g, [v for v in range(g.num_vertices) if v not in comp]
        )
        yield comp, sub, vback, eback


def _one_negative_form(
    sub: SignedGraph,
) -> tuple[int, tuple[int, ...]] | None:
    """If the connected graph is switching-equivalent to a signature with
    exactly one negative edge, return (that edge, the switch set).

    Test: flipping the sign of edge e yields a balanced graph iff some
    member of the switching class is negative exactly on e.
    """
    from .core import Edge

    for i, e in enumerate(sub.edges):
        flipped = SignedGraph(
            sub.num_vertices,
            sub.edges[:i] + (Edge(e.u, e.v, -e.sign),) + sub.edges[i + 1 :],
        )
        cert = is_balanced(flipped)
        if cert.balanced:
            sw = tuple(v for v, p in enumerate(cert.potential) if p < 0)
            return i, sw
    return None


def is_flow_admissible(g: SignedGraph) -> AdmissibilityVerdict:
    """Flow admissibility check, per connected component.

    A connected signed graph admits a nowhere-zero flow iff it is not
    switching-equivalent to a graph with exactly one negative edge and
    no cut edge leaves a balanced component behind.
    """
    defects: list[ComponentDefect] = []
    for comp, sub, vback, eback in _component_subgraphs(g):
        form = _one_negative_form(sub)
        if form is not None:
            eid, sw = form
            defects.append(
                ComponentDefect(
                    comp,
                    "one-negative-edge",
                    edge=eback[eid],
                    switch_set=tuple(sorted(vback[v] for v in sw)),
                )
            )
            continue
        for b in find_bridges(sub):
            without = SignedGraph(
                sub.num_vertices,
                tuple(e for i, e in enumerate(sub.edges) if i != b),
            )
            bad = False
            for side in connected_components(without):
                side_sub, _, _ = delete_vertices(
                    without, [v for v in range(without.num_vertices) if v not in side]
                )
                if is_balanced(side_sub).balanced:
                    bad = True
                    break
            if bad:
                defects.append(
                    ComponentDefect(comp, "balanced-side-bridge", edge=eback[b])
                )
                break
    return AdmissibilityVerdict(not defects, tuple(defects))


def has_star_cut(g: SignedGraph) -> StarCut | None:
    """Find an induced star K_{1,t} (t >= 1) all of whose edges are cut
    edges.  Loops at the center or a leaf disqualify it (not induced)."""
    bridges = set(find_bridges(g))
    has_loop = [False] * g.num_vertices
    for e in g.edges:
        if e.is_loop:
            has_loop[e.u] = True
    adj: dict[tuple[int, int], bool] = {}
    for e in g.edges:
        if not e.is_loop:
            adj[(min(e.u, e.v), max(e.u, e.v))] = True
    best: StarCut | None = None
    for c in range(g.num_vertices):
        if has_loop[c]:
            continue
        cand = sorted(
            (g.edges[b].other(c), b)
            for b, _ in g.incidence[c]
            if b in bridges and not has_loop[g.edges[b].other(c)]
        )
        leaves: list[int] = []
        edges: list[int] = []
        for leaf, b in cand:
            if any((min(leaf, l2), max(leaf, l2)) in adj for l2 in leaves):
                continue
            leaves.append(leaf)
            edges.append(b)
        # keep the widest star; first (= smallest center) wins ties
        if leaves and (best is None or len(leaves) > len(best.leaves)):
            best = StarCut(c, tuple(leaves), tuple(edges))
    return best


def is_antibalanced(g: SignedGraph) -> BalanceCertificate:
    """Balance of the sign-negated graph.  The potential satisfies
    sign(uv) == -p(u)*p(v) on non-loop edges; loops must be negative."""
    from .core import Edge

    negated = SignedGraph(
        g.num_vertices, tuple(Edge(e.u, e.v, -e.sign) for e in g.edges)
    )
    return is_balanced(negated)


def _require_cubic(g: SignedGraph) -> None:
    if any(e.is_loop for e in g.edges):
        raise PreconditionError("not cubic: graph has a loop")
    bad = [v for v in range(g.num_vertices) if g.degree(v) != 3]
    if bad:
        raise PreconditionError(f"not cubic: vertex {bad[0]} has degree {g.degree(bad[0])}")


def three_edge_coloring(
    g: SignedGraph, cap: int = DEFAULT_SEARCH_CAP
) -> tuple[int, ...] | None:
    """Proper 3-edge-coloring by exhaustive backtracking; signs ignored.

    None is exact: the graph is not 3-edge-colorable."""
    _require_cubic(g)
    m = g.num_edges
    if m == 0:
        return ()
    colors = [-1] * m
    # assign in breadth-first discovery order for early contradictions
    order: list[int] = []
    seen_e = [False] * m
    seen_v = [False] * g.num_vertices
    for root in range(g.num_vertices):
        if seen_v[root]:
            continue
        queue = [root]
        seen_v[root] = True
        while queue:
            x = queue.pop(0)
            for eid, _ in g.incidence[x]:
                if not seen_e[eid]:
                    seen_e[eid] = True
                    order.append(eid)
                y = g.edges[eid].other(x)
                if not seen_v[y]:
                    seen_v[y] = True
                    queue.append(y)
    used_at = [0] * g.num_vertices  # bitmask of colors present at a vertex
    steps = 0

    def rec(pos: int) -> bool:
        nonlocal steps
        if pos == m:
            return True
        eid = order[pos]
        e = g.edges[eid]
        for col in range(3):
            bit = 1 << col
            if used_at[e.u] & bit or used_at[e.v] & bit:
                continue
            steps += 1
            if steps > cap:
                raise ResourceCapExceeded("coloring search cap", cap=cap, spent=steps)
            colors[eid] = col
            used_at[e.u] |= bit
            used_at[e.v] |= bit
            if rec(pos + 1):
                return True
            colors[eid] = -1
            used_at[e.u] &= ~bit
            used_at[e.v] &= ~bit
        return False

    return tuple(colors) if rec(0) else None


def _perfect_matchings(g: SignedGraph, cap: int):
    """Yield perfect matchings (tuples of edge ids), lexicographic by the
    choice at the lowest unmatched vertex."""
    matched = [False] * g.num_vertices
    chosen: list[int] = []
    steps = 0

    def rec():
        nonlocal steps
        v = next((x for x in range(g.num_vertices) if not matched[x]), None)
        if v is None:
            yield tuple(chosen)
            return
        for eid, _end in g.incidence[v]:
            e = g.edges[eid]
            if e.is_loop:
                continue
            y = e.other(v)
            if matched[y]:
                continue
            steps += 1
            if steps > cap:
                raise ResourceCapExceeded("matching search cap", cap=cap, spent=steps)
            matched[v] = matched[y] = True
            chosen.append(eid)
            yield from rec()
            chosen.pop()
            matched[v] = matched[y] = False

    yield from rec()


def find_antibalanced_2_factor(
    g: SignedGraph, cap: int = DEFAULT_SEARCH_CAP
) -> tuple[tuple[int, ...], ...] | None:
    """A 2-factor all of whose circuits are antibalanced (equivalently:
    every circuit has an even number of positive edges), or None.

    The graph must be cubic; candidate 2-factors are complements of
    perfect matchings, tried in deterministic order."""
    _require_cubic(g)
    for matching in _perfect_matchings(g, cap):
        rest = [i for i in range(g.num_edges) if i not in set(matching)]
        circuits = _decompose_two_regular(g, rest)
        if circuits is None:
            raise InvariantViolation("2-factor complement not 2-regular")
        if all(
            sum(1 for eid in c if g.edges[eid].sign > 0) % 2 == 0 for c in circuits
        ):
            return tuple(circuits)
    return None


def _decompose_two_regular(
    g: SignedGraph, edge_ids: Sequence[int]
) -> list[tuple[int, ...]] | None:
    """Split a 2-regular edge set into its circuits; None if not 2-regular."""
    remaining = set(edge_ids)
    out: list[tuple[int, ...]] = []
    while remaining:
        e0 = min(remaining)
        remaining.discard(e0)
        if g.edges[e0].is_loop:
            out.append((e0,))
            continue
        start, x = g.edges[e0].u, g.edges[e0].v
        seq = [e0]
        while x != start:
            cand = {eid for eid, _ in g.incidence[x] if eid in remaining}
            if len(cand) != 1:
                return None
            eid = cand.pop()
            if g.edges[eid].is_loop:
                return None
            seq.append(eid)
            remaining.discard(eid)
            x = g.edges[eid].other(x)
        out.append(tuple(seq))
    out.sort(key=lambda c: (len(c), c))
    return out
