"""Core data model for signed multigraphs and their flows.

A signed graph is a multigraph (loops and parallel edges allowed) whose
edges carry a sign in {+1, -1}.  Every edge is split into two half-edges,
one per endpoint; an orientation assigns each half-edge a direction
(+1 away from its endpoint, -1 towards it) subject to the compatibility
rule ``tau(h1) * tau(h2) == -sign(e)``.  For a positive edge the two
half-edges therefore point the same way (one out, one in: an ordinary
directed edge); for a negative edge they point both out or both in.

Vertices are dense 0-based integers internally.  The text file format is
1-based (see :func:`parse_graph`).  Edge identity is positional: the
index into ``SignedGraph.edges``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Value = Union[int, Fraction]

__all__ = [
    "Edge",
    "SignedGraph",
    "Orientation",
    "FlowAssignment",
    "FlowKind",
    "CheckResult",
    "BalanceCertificate",
    "GraphFormatError",
    "parse_graph",
    "serialize_graph",
    "switch",
    "switch_orientation",
    "boundary",
    "edge_boundary",
    "check_flow",
    "is_balanced",
    "find_unbalanced_circuit",
    "connected_components",
    "is_eulerian",
    "find_bridges",
    "edge_subgraph",
    "delete_vertices",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph or flow files (includes line number)."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"edge sign must be +1 or -1, got {self.sign}")

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def endpoint(self, end: int) -> int:
        return self.u if end == 0 else self.v

    def other(self, vertex: int) -> int:
        return self.v if vertex == self.u else self.u


@dataclass(frozen=True)
class SignedGraph:
    """Immutable signed multigraph.

    ``num_vertices`` fixes the vertex set {0, ..., num_vertices-1}; edges
    may not reference vertices outside it.  Isolated vertices are legal.
    """

    num_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.num_vertices and 0 <= e.v < self.num_vertices):
                raise ValueError(f"edge {i} endpoints {e.u},{e.v} out of range")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the incident half-edges as (edge_id, end) pairs.

        A loop at v contributes both of its half-edges to v.
        """
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for i, e in enumerate(self.edges):
            inc[e.u].append((i, 0))
            inc[e.v].append((i, 1))
        return tuple(tuple(h) for h in inc)

    @cached_property
    def negative_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e.sign < 0)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def is_loop(self, edge_id: int) -> bool:
        return self.edges[edge_id].is_loop


def parse_graph(text: str) -> SignedGraph:
    """Parse the plain-text graph format.

    Format: optional ``#`` comment lines, one ``p <num_vertices> <num_edges>``
    header, then exactly num_edges lines ``e <u> <v> <+|->`` with 1-based
    vertex identifiers.  Edge order in the file is the edge identity.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise GraphFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: header needs 2 fields")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad header numbers") from None
            if n < 0 or m < 0:
                raise GraphFormatError(f"line {lineno}: negative header numbers")
            header = (n, m)
        elif parts[0] == "e":
            if header is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise GraphFormatError(f"line {lineno}: edge needs 3 fields")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad vertex id") from None
            if parts[3] not in ("+", "-"):
                raise GraphFormatError(f"line {lineno}: sign must be + or -")
            n = header[0]
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n}")
            edges.append(Edge(u - 1, v - 1, 1 if parts[3] == "+" else -1))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise GraphFormatError("missing 'p' header")
    if len(edges) != header[1]:
        raise GraphFormatError(
            f"header announces {header[1]} edges, file has {len(edges)}"
        )
    return SignedGraph(header[0], tuple(edges))


def serialize_graph(g: SignedGraph) -> str:
    """Canonical text form: header, then edges in stored order."""
    lines = [f"p {g.num_vertices} {g.num_edges}"]
    for e in g.edges:
        lines.append(f"e {e.u + 1} {e.v + 1} {'+' if e.sign > 0 else '-'}")
    return "\n".join(lines) + "\n"


def switch(g: SignedGraph, vertices: Iterable[int]) -> SignedGraph:
    """Switch at a vertex set: negate signs of non-loop edges with exactly
    one endpoint in the set.  Loop signs never change."""
    s = frozenset(vertices)
    for v in s:
        if not (0 <= v < g.num_vertices):
            raise ValueError(f"switch vertex {v} out of range")
    new_edges = []
    for e in g.edges:
        flip = (e.u in s) != (e.v in s)
        new_edges.append(Edge(e.u, e.v, -e.sign if flip else e.sign))
    return SignedGraph(g.num_vertices, tuple(new_edges))


@dataclass(frozen=True)
class Orientation:
    """Orientation stored as the set of edges reversed from the reference.

    Reference orientation: a positive edge is directed from its first to
    its second endpoint (tau = +1 at end 0, -1 at end 1); a negative edge
    has both half-edges pointing out (+1, +1).  Reversing an edge flips
    both of its half-edges, which is the only other valid choice for that
    edge, so every orientation of a fixed signature is representable.
    """

    reversed_edges: frozenset[int]

    @classmethod
    def reference(cls) -> "Orientation":
        return cls(frozenset())

    @classmethod
    def from_directions(cls, g: SignedGraph, dirs: Sequence[tuple[int, int]]) -> "Orientation":
        """Encode explicit half-edge directions; validates compatibility."""
        if len(dirs) != g.num_edges:
            raise ValueError("direction list length mismatch")
        rev = set()
        for i, (t0, t1) in enumerate(dirs):
            if t0 * t1 != -g.edges[i].sign:
                raise ValueError(f"edge {i}: directions incompatible with sign")
            # end 0 of the reference orientation always points out
            if t0 != 1:
                rev.add(i)
        return cls(frozenset(rev))

    def direction(self, g: SignedGraph, edge_id: int, end: int) -> int:
        e = g.edges[edge_id]
        if e.sign > 0:
            t = 1 if end == 0 else -1
        else:
            t = 1
        return -t if edge_id in self.reversed_edges else t

    def directions(self, g: SignedGraph) -> tuple[tuple[int, int], ...]:
        """Materialized (tau at end 0, tau at end 1) per edge."""
        out = []
        for i, e in enumerate(g.edges):
            t0, t1 = (1, -1) if e.sign > 0 else (1, 1)
            if i in self.reversed_edges:
                t0, t1 = -t0, -t1
            out.append((t0, t1))
        return tuple(out)


def switch_orientation(g: SignedGraph, o: Orientation, vertices: Iterable[int]) -> Orientation:
    """Flip every half-edge at the switched vertices.

    Unlike sign switching, a loop at a switched vertex has both half-edges
    flipped (its sign is unchanged and it ends up reversed).  The result
    is a valid orientation of ``switch(g, vertices)``.
    """
    s = frozenset(vertices)
    dirs = o.directions(g)
    new_dirs = []
    for e, (t0, t1) in zip(g.edges, dirs):
        if e.u in s:
            t0 = -t0
        if e.v in s:
            t1 = -t1
        new_dirs.append((t0, t1))
    return Orientation.from_directions(switch(g, s), new_dirs)


@dataclass(frozen=True)
class FlowAssignment:
    """Edge values under an orientation.  Values are int or Fraction."""

    orientation: Orientation
    values: tuple[Value, ...]

    def value(self, edge_id: int) -> Value:
        return self.values[edge_id]


def boundary(g: SignedGraph, fa: FlowAssignment) -> tuple[Value, ...]:
    """Per-vertex boundary: sum over incident half-edges of tau(h)*f(e).

    A negative loop contributes +-2 f(e); a positive loop contributes 0.
    """
    if len(fa.values) != g.num_edges:
        raise ValueError("value list length mismatch")
    bnd: list[Value] = [0] * g.num_vertices
    dirs = fa.orientation.directions(g)
    for i, e in enumerate(g.edges):
        t0, t1 = dirs[i]
        f = fa.values[i]
        bnd[e.u] += t0 * f
        bnd[e.v] += t1 * f
    return tuple(bnd)


def edge_boundary(g: SignedGraph, fa: FlowAssignment, edge_id: int) -> Value:
    """Boundary charge sitting on the edge itself: -(tau(h1)+tau(h2))*f.

    Nonzero exactly on negative edges; the grand total of vertex and edge
    boundaries is always zero.
    """
    t0, t1 = fa.orientation.directions(g)[edge_id]
    return -(t0 + t1) * fa.values[edge_id]


@dataclass(frozen=True)
class FlowKind:
    """Flow species selector: integer k, modulo k, or circular r."""

    kind: str
    param: Value

    @classmethod
    def integer(cls, k: int) -> "FlowKind":
        return cls("integer", k)

    @classmethod
    def modulo(cls, k: int) -> "FlowKind":
        return cls("modulo", k)

    @classmethod
    def circular(cls, r: Value) -> "FlowKind":
        return cls("circular", Fraction(r))

    @classmethod
    def parse(cls, text: str) -> "FlowKind":
        m = re.fullmatch(r"(integer|modulo|circular):(.+)", text)
        if not m:
            raise ValueError(f"bad flow kind {text!r}")
        kind, param = m.group(1), m.group(2)
        if kind == "circular":
            return cls.circular(Fraction(param))
        return cls(kind, int(param))

    def __str__(self) -> str:
        return f"{self.kind}:{self.param}"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _fail(msg: str) -> CheckResult:
    return CheckResult(False, msg)


def check_flow(g: SignedGraph, fa: FlowAssignment, kind: FlowKind) -> CheckResult:
    """Validate a flow assignment against a flow kind.

    Reports the first violated condition, checking support, then value
    bounds, then boundary.  Mathematical negatives are reported, never
    raised.
    """
    if len(fa.values) != g.num_edges:
        return _fail("value list length mismatch")
    if kind.kind == "integer":
        k = kind.param
        if not (isinstance(k, int) and k >= 2):
            return _fail("k must be an integer >= 2")
        for i, f in enumerate(fa.values):
            if f != int(f):
                return _fail(f"non-integer value (edge {i})")
            if f == 0:
                return _fail(f"support != E (edge {i})")
            if not (1 <= abs(f) <= k - 1):
                return _fail(f"value out of range (edge {i})")
        for v, b in enumerate(boundary(g, fa)):
            if b != 0:
                return _fail(f"boundary != 0 (vertex {v})")
        return CheckResult(True)
    if kind.kind == "modulo":
        k = kind.param
        if not (isinstance(k, int) and k >= 2):
            return _fail("k must be an integer >= 2")
        for i, f in enumerate(fa.values):
            if f != int(f):
                return _fail(f"non-integer value (edge {i})")
            if int(f) % k == 0:
                return _fail(f"support != E (edge {i})")
            if not (1 <= f <= k - 1):
                return _fail(f"value not reduced to 1..k-1 (edge {i})")
        for v, b in enumerate(boundary(g, fa)):
            if int(b) % k != 0:
                return _fail(f"boundary != 0 mod {k} (vertex {v})")
        return CheckResult(True)
    if kind.kind == "circular":
        r = Fraction(kind.param)
        if r < 2:
            return _fail("r must be >= 2")
        for i, f in enumerate(fa.values):
            if f == 0:
                return _fail(f"support != E (edge {i})")
            if not (1 <= abs(Fraction(f)) <= r - 1):
                return _fail(f"value out of range (edge {i})")
        for v, b in enumerate(boundary(g, fa)):
            if b != 0:
                return _fail(f"boundary != 0 (vertex {v})")
        return CheckResult(True)
    return _fail(f"unknown flow kind {kind.kind!r}")


@dataclass(frozen=True)
class BalanceCertificate:
    """Either a switching potential (balanced) or an unbalanced circuit.

    ``potential`` maps each vertex to +-1 with sign(uv) == p(u)*p(v) for
    every non-loop edge and every loop positive; ``witness`` is an edge-id
    sequence tracing a circuit with an odd number of negative edges.
    Exactly one of the two is present.
    """

    potential: tuple[int, ...] | None
    witness: tuple[int, ...] | None

    @property
    def balanced(self) -> bool:
        return self.potential is not None

    def __bool__(self) -> bool:
        return self.balanced


def _tree_path(parent_edge: dict[int, tuple[int, int]], u: int, v: int) -> list[int]:
    """Edge ids along the spanning-tree path from u to v."""

    def chain_to_root(x: int) -> list[int]:
        out = []
        while x in parent_edge:
            eid, p = parent_edge[x]
            out.append(eid)
            x = p
        return out

    cu, cv = chain_to_root(u), chain_to_root(v)
    while cu and cv and cu[-1] == cv[-1]:
        cu.pop()
        cv.pop()
    return cu + list(reversed(cv))


def is_balanced(g: SignedGraph) -> BalanceCertificate:
    """Spanning-tree potential propagation, per connected component.

    Scans non-tree edges (loops included) in ascending id order within
    each component; the first inconsistent one closes the witness circuit
    through the tree.
    """
    potential: list[int] = [0] * g.num_vertices
    parent_edge: dict[int, tuple[int, int]] = {}
    comp_order: list[list[int]] = []
    seen = [False] * g.num_vertices
    for root in range(g.num_vertices):
        if seen[root]:
            continue
        seen[root] = True
        potential[root] = 1
        comp = [root]
        stack = [root]
        while stack:
            x = stack.pop()
            for eid, end in g.incidence[x]:
                e = g.edges[eid]
                if e.is_loop:
                    continue
                y = e.other(x)
                if not seen[y]:
                    seen[y] = True
                    potential[y] = potential[x] * e.sign
                    parent_edge[y] = (eid, x)
                    comp.append(y)
                    stack.append(y)
        comp_order.append(comp)
    tree_ids = {eid for eid, _ in parent_edge.values()}
    for eid, e in enumerate(g.edges):
        if eid in tree_ids:
            continue
        if e.is_loop:
            if e.sign < 0:
                return BalanceCertificate(None, (eid,))
            continue
        if e.sign != potential[e.u] * potential[e.v]:
            path = _tree_path(parent_edge, e.u, e.v)
            return BalanceCertificate(None, tuple(path) + (eid,))
    return BalanceCertificate(tuple(potential), None)


def find_unbalanced_circuit(g: SignedGraph) -> tuple[int, ...] | None:
    """First unbalanced circuit of the balance scan; None when balanced."""
    return is_balanced(g).witness


def connected_components(g: SignedGraph) -> tuple[tuple[int, ...], ...]:
    seen = [False] * g.num_vertices
    comps = []
    for root in range(g.num_vertices):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        stack = [root]
        while stack:
            x = stack.pop()
            for eid, _ in g.incidence[x]:
                y = g.edges[eid].other(x)
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def is_eulerian(g: SignedGraph) -> bool:
    """Every vertex has even degree (loops count twice)."""
    return all(g.degree(v) % 2 == 0 for v in range(g.num_vertices))


def find_bridges(g: SignedGraph) -> tuple[int, ...]:
    """Cut edges, ascending.  Loops and parallel edges are never bridges."""
    disc = [-1] * g.num_vertices
    low = [0] * g.num_vertices
    bridges: list[int] = []
    timer = 0
    for root in range(g.num_vertices):
        if disc[root] != -1:
            continue
        # iterative DFS; entry edge excluded by id so parallels survive
        stack = []
        disc[root] = low[root] = timer
        timer += 1
        stack.append((root, -1, iter(g.incidence[root])))
        while stack:
            x, in_edge, it = stack[-1]
            advanced = False
            for eid, _ in it:
                e = g.edges[eid]
                if e.is_loop or eid == in_edge:
                    continue
                y = e.other(x)
                if disc[y] == -1:
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, eid, iter(g.incidence[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    px = stack[-1][0]
                    low[px] = min(low[px], low[x])
                    if low[x] > disc[px]:
                        bridges.append(in_edge)
    return tuple(sorted(bridges))


def edge_subgraph(
    g: SignedGraph, edge_ids: Sequence[int]
) -> tuple[SignedGraph, tuple[int, ...], tuple[int, ...]]:
    """Subgraph on the given edges and the vertices they touch.

    Returns (subgraph, vertex_back, edge_back): position i of the back
    arrays is the original id of subgraph vertex/edge i.
    """
    verts = sorted({g.edges[i].u for i in edge_ids} | {g.edges[i].v for i in edge_ids})
    vmap = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        Edge(vmap[g.edges[i].u], vmap[g.edges[i].v], g.edges[i].sign) for i in edge_ids
    )
    return SignedGraph(len(verts), edges), tuple(verts), tuple(edge_ids)


def delete_vertices(
    g: SignedGraph, vertices: Iterable[int]
) -> tuple[SignedGraph, tuple[int, ...], tuple[int, ...]]:
    """Induced subgraph after removing the given vertices (and their edges)."""
    drop = frozenset(vertices)
    keep = [v for v in range(g.num_vertices) if v not in drop]
    vmap = {v: i for i, v in enumerate(keep)}
    kept_ids = [
        i for i, e in enumerate(g.edges) if e.u not in drop and e.v not in drop
    ]
    edges = tuple(
        Edge(vmap[g.edges[i].u], vmap[g.edges[i].v], g.edges[i].sign) for i in kept_ids
    )
    return SignedGraph(len(keep), edges), tuple(keep), tuple(kept_ids)
