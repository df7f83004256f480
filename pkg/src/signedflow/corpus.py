"""Instance generators: named graphs, signature sweeps, bounded enumeration.

The exhaustive enumerator emits one representative per equivalence class
under relabeling x switching.  Everything the suites measure is invariant
under both, so collapsing classes loses no coverage and keeps desk-scale
runs fast; class soundness is tested pairwise on small runs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .core import Edge, FlowAssignment, FlowKind, Orientation, SignedGraph, check_flow
from .errors import InvariantViolation, PreconditionError

MAX_ENUM_VERTICES = 5
MAX_ENUM_EDGES = 8

__all__ = [
    "CorpusSpec",
    "MAX_ENUM_EDGES",
    "MAX_ENUM_VERTICES",
    "enumerate_signed_graphs",
    "g_family",
    "g_family_circular_witness",
    "random_signed_graph",
    "signed_petersen",
    "w5_all_signatures",
    "wheel_w5",
]


def signed_petersen() -> SignedGraph:
    """Petersen graph, positive outer cycle and spokes, negative inner chords.

    Edge ids: 0-4 outer cycle, 5-9 spokes, 10-14 the pentagram.
    """
    edges = []
    for i in range(5):
        edges.append(Edge(i, (i + 1) % 5, 1))
    for i in range(5):
        edges.append(Edge(i, 5 + i, 1))
    for i in range(5):
        edges.append(Edge(5 + i, 5 + (i + 2) % 5, -1))
    return SignedGraph(10, tuple(edges))


def g_family(t: int) -> SignedGraph:
    """Glue t copies of K4 along one edge, delete it, add two negative loops.

    Vertices 0 and 1 are the shared pair; copy i adds vertices 2+2i and
    3+2i with the five remaining K4 edges (all positive).  The last two
    edges are the negative loops at 0 and at 1.
    """
    if not (isinstance(t, int) and t >= 1):
        raise PreconditionError("t must be an integer >= 1")
    edges = []
    for i in range(t):
        a, b = 2 + 2 * i, 3 + 2 * i
        edges.extend(
            [Edge(0, a, 1), Edge(0, b, 1), Edge(1, a, 1), Edge(1, b, 1), Edge(a, b, 1)]
        )
    edges.append(Edge(0, 0, -1))
    edges.append(Edge(1, 1, -1))
    return SignedGraph(2 + 2 * t, tuple(edges))


def g_family_circular_witness(t: int) -> FlowAssignment:
    """The explicit circular 3-flow on g_family(t) with 3/2 on both loops.

    Construction: the glued all-positive graph carries a positive 4-flow
    whose deleted edge has value 3 (one copy routes 3 units between the
    shared vertices, the others circulate internally); rerouting those 3
    units through the loops costs 3/2 per loop because a loop meets its
    vertex twice.
    """
    from .core import boundary

    g = g_family(t)
    per_edge: list[Fraction] = [Fraction(0)] * g.num_edges
    rev: set[int] = set()

    def put(eid: int, u: int, val: int) -> None:
        # val flows out of u; reference direction of a positive edge is
        # first listed endpoint -> second
        e = g.edges[eid]
        per_edge[eid] = Fraction(val)
        if e.u != u:
            rev.add(eid)

    # copy 0 moves 3 units from vertex 0 to vertex 1
    a, b = 2, 3
    put(0, 0, 2)  # 0 -> a: 2
    put(1, 0, 1)  # 0 -> b: 1
    put(2, a, 1)  # a -> 1: 1
    put(3, b, 2)  # b -> 1: 2
    put(4, a, 1)  # a -> b: 1
    # remaining copies circulate, no net transfer between 0 and 1
    for i in range(1, t):
        base = 5 * i
        a, b = 2 + 2 * i, 3 + 2 * i
        put(base + 0, 0, 1)  # 0 -> a: 1
        put(base + 1, b, 1)  # b -> 0: 1
        put(base + 2, a, 2)  # a -> 1: 2
        put(base + 3, 1, 2)  # 1 -> b: 2
        put(base + 4, b, 1)  # b -> a: 1
    # each loop replaces the deleted edge's 3 units at its vertex; a loop
    # meets the vertex twice, so its value is 3/2, flipped inward where
    # the residual boundary is positive (net outflow)
    l1, l2 = g.num_edges - 2, g.num_edges - 1
    residual = boundary(g, FlowAssignment(Orientation(frozenset(rev)), tuple(per_edge)))
    per_edge[l1] = Fraction(3, 2)
    per_edge[l2] = Fraction(3, 2)
    for eid, v in ((l1, 0), (l2, 1)):
        if residual[v] > 0:
            rev.add(eid)
    fa = FlowAssignment(Orientation(frozenset(rev)), tuple(per_edge))
    res = check_flow(g, fa, FlowKind.circular(Fraction(3)))
    if not res.ok:
        raise InvariantViolation(f"loop witness construction broke: {res.violation}")
    return fa


def wheel_w5() -> SignedGraph:
    """All-positive wheel: hub 0, rim 1-5; edge ids 0-4 rim, 5-9 spokes."""
    edges = [Edge(1 + i, 1 + (i + 1) % 5, 1) for i in range(5)]
    edges += [Edge(0, 1 + i, 1) for i in range(5)]
    return SignedGraph(6, tuple(edges))


def _switch_flip_vector(g: SignedGraph, subset: frozenset[int]) -> tuple[int, ...]:
    out = []
    for e in g.edges:
        if e.u != e.v and ((e.u in subset) != (e.v in subset)):
            out.append(-1)
        else:
            out.append(1)
    return tuple(out)


def w5_all_signatures() -> list[SignedGraph]:
    """Every switching-inequivalent signature of the 5-wheel.

    Representatives are the lexicographically smallest sign vector of
    each class (positive < negative), in sorted order; 32 in all.
    """
    g = wheel_w5()
    m = g.num_edges
    flips = [
        _switch_flip_vector(g, frozenset(s))
        for r in range(g.num_vertices)
        for s in itertools.combinations(range(1, g.num_vertices), r)
    ]
    seen: set[tuple[int, ...]] = set()
    reps: list[tuple[int, ...]] = []
    # lex order with +1 before -1: generate via 0/1 masks
    for mask in range(1 << m):
        signs = tuple(-1 if mask >> (m - 1 - i) & 1 else 1 for i in range(m))
        if signs in seen:
            continue
        reps.append(signs)
        for fl in flips:
            seen.add(tuple(s * f for s, f in zip(signs, fl)))
    return [
        SignedGraph(g.num_vertices, tuple(Edge(e.u, e.v, s) for e, s in zip(g.edges, signs)))
        for signs in reps
    ]


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _connected_spanning(n: int, pairs: tuple[tuple[int, int], ...]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = [False] * n
    for u, v in pairs:
        touched[u] = touched[v] = True
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    if not all(touched):
        return False
    root = find(0)
    return all(find(v) == root for v in range(n))


def _degree_sorting_orders(n: int, deg: list[int]) -> Iterator[tuple[int, ...]]:
    """Vertex orders listing degrees nondecreasingly (all tie rearrangements)."""
    by_deg = sorted(range(n), key=lambda v: (deg[v], v))
    blocks: list[list[int]] = []
    for v in by_deg:
        if blocks and deg[blocks[-1][0]] == deg[v]:
            blocks[-1].append(v)
        else:
            blocks.append([v])
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        yield tuple(v for blk in choice for v in blk)


def _relabel_pairs(
    pairs: tuple[tuple[int, int], ...], pos: dict[int, int]
) -> tuple[tuple[int, int], ...]:
    out = []
    for u, v in pairs:
        a, b = pos[u], pos[v]
        out.append((a, b) if a <= b else (b, a))
    out.sort()
    return tuple(out)


def _canonical_pairs(n: int, pairs: tuple[tuple[int, int], ...]):
    """Lex-least relabeling among degree-sorted orders, plus its automorphisms.

    Returns (canonical pair tuple, list of vertex->position maps fixing it).
    """
    deg = [0] * n
    for u, v in pairs:
        deg[u] += 1
        deg[v] += 1
    best: Optional[tuple[tuple[int, int], ...]] = None
    maps: list[dict[int, int]] = []
    for order in _degree_sorting_orders(n, deg):
        pos = {v: i for i, v in enumerate(order)}
        cand = _relabel_pairs(pairs, pos)
        if best is None or cand < best:
            best = cand
            maps = [pos]
        elif cand == best:
            maps.append(pos)
    assert best is not None
    return best, maps


def _pair_automorphisms(n: int, pairs: tuple[tuple[int, int], ...]) -> list[tuple[int, ...]]:
    """Vertex permutations (as position tuples) preserving the pair multiset."""
    deg = [0] * n
    for u, v in pairs:
        deg[u] += 1
        deg[v] += 1
    auts = []
    for order in _degree_sorting_orders(n, deg):
        pos = {v: i for i, v in enumerate(order)}
        if _relabel_pairs(pairs, pos) == pairs:
            auts.append(tuple(pos[v] for v in range(n)))
    return auts


def _signature_normal_form(
    pairs: tuple[tuple[int, int], ...], signs: tuple[int, ...]
) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted((u, v, s) for (u, v), s in zip(pairs, signs)))


def _signature_orbit(
    n: int,
    pairs: tuple[tuple[int, int], ...],
    nf: tuple[tuple[int, int, int], ...],
    auts: list[tuple[int, ...]],
) -> Iterator[tuple[tuple[int, int, int], ...]]:
    subsets = [
        frozenset(s)
        for r in range(n)
        for s in itertools.combinations(range(1, n), r)
    ]
    for aut in auts:
        for sub in subsets:
            out = []
            for u, v, s in nf:
                if u != v and ((u in sub) != (v in sub)):
                    s = -s
                a, b = aut[u], aut[v]
                if a > b:
                    a, b = b, a
                out.append((a, b, s))
            out.sort()
            yield tuple(out)


def _signature_classes(
    n: int, pairs: tuple[tuple[int, int], ...], auts: list[tuple[int, ...]]
) -> Iterator[tuple[int, ...]]:
    """One sign vector per switching x automorphism class, lex-first."""
    per_class: list[list[tuple[int, ...]]] = []
    start = 0
    while start < len(pairs):
        stop = start
        while stop < len(pairs) and pairs[stop] == pairs[start]:
            stop += 1
        size = stop - start
        opts = [(-1,) * j + (1,) * (size - j) for j in range(size, -1, -1)]
        opts.sort()
        per_class.append(opts)
        start = stop
    seen: set[tuple[tuple[int, int, int], ...]] = set()
    for combo in itertools.product(*per_class):
        signs = tuple(s for part in combo for s in part)
        nf = _signature_normal_form(pairs, signs)
        if nf in seen:
            continue
        for img in _signature_orbit(n, pairs, nf, auts):
            seen.add(img)
        yield signs


def enumerate_signed_graphs(
    max_v: int = MAX_ENUM_VERTICES, max_e: int = MAX_ENUM_EDGES
) -> Iterator[SignedGraph]:
    """All connected signed multigraphs within bounds, one per class.

    Classes are taken under vertex relabeling and switching together.
    Underlying multigraphs stream in (vertex count, edge count, edge
    list) order; signatures per graph stream lex-first.  Loops and
    parallel edges are included; the edgeless one-vertex graph is not.
    """
    if not (1 <= max_v <= MAX_ENUM_VERTICES):
        raise PreconditionError(f"max_v must be in 1..{MAX_ENUM_VERTICES}")
    if not (1 <= max_e <= MAX_ENUM_EDGES):
        raise PreconditionError(f"max_e must be in 1..{MAX_ENUM_EDGES}")
    for n in range(1, max_v + 1):
        all_pairs = [(u, v) for u in range(n) for v in range(u, n)]
        for m in range(max(1, n - 1), max_e + 1):
            for combo in itertools.combinations_with_replacement(all_pairs, m):
                pairs = tuple(combo)
                if not _connected_spanning(n, pairs):
                    continue
                canon, _maps = _canonical_pairs(n, pairs)
                if canon != pairs:
                    continue
                auts = _pair_automorphisms(n, pairs)
                for signs in _signature_classes(n, pairs, auts):
                    yield SignedGraph(
                        n, tuple(Edge(u, v, s) for (u, v), s in zip(pairs, signs))
                    )


def random_signed_graph(
    seed: int,
    num_vertices: int,
    num_edges: int,
    neg_prob: float = 0.5,
) -> SignedGraph:
    """Seed-deterministic connected signed multigraph.

    A random spanning tree guarantees connectivity; remaining edges are
    uniform over all vertex pairs (loops included) with independent
    negative signs at probability neg_prob.
    """
    if num_vertices < 1:
        raise PreconditionError("num_vertices must be >= 1")
    if num_edges < num_vertices - 1:
        raise PreconditionError("num_edges must be >= num_vertices - 1")
    if not (0.0 <= neg_prob <= 1.0):
        raise PreconditionError("neg_prob must be in [0, 1]")
    rng = random.Random(seed)
    edges: list[Edge] = []
    verts = list(range(num_vertices))
    rng.shuffle(verts)
    for i in range(1, num_vertices):
        u = verts[rng.randrange(i)]
        v = verts[i]
        sign = -1 if rng.random() < neg_prob else 1
        edges.append(Edge(min(u, v), max(u, v), sign))
    while len(edges) < num_edges:
        u = rng.randrange(num_vertices)
        v = rng.randrange(num_vertices)
        sign = -1 if rng.random() < neg_prob else 1
        edges.append(Edge(min(u, v), max(u, v), sign))
    return SignedGraph(num_vertices, tuple(edges))


@dataclass(frozen=True)
class CorpusSpec:
    """Deterministic description of a generated corpus.

    family: petersen-fig1 | g-family | w5-all-signatures | enumerate | random
    params: family-specific integers/floats, sorted by key.
    """

    family: str
    params: tuple[tuple[str, float], ...] = field(default=())

    _FAMILIES = (
        "petersen-fig1",
        "g-family",
        "w5-all-signatures",
        "enumerate",
        "random",
    )

    def __post_init__(self) -> None:
        if self.family not in self._FAMILIES:
            raise PreconditionError(f"unknown corpus family {self.family!r}")
        object.__setattr__(self, "params", tuple(sorted(self.params)))

    @classmethod
    def parse(cls, text: str) -> "CorpusSpec":
        """Parse "family" or "family:key=value,key=value"."""
        family, _, rest = text.partition(":")
        params = []
        if rest:
            for item in rest.split(","):
                key, eq, val = item.partition("=")
                if not eq:
                    raise PreconditionError(f"bad corpus parameter {item!r}")
                num = float(val) if "." in val else int(val)
                params.append((key.strip(), num))
        return cls(family.strip(), tuple(params))

    def __str__(self) -> str:
        if not self.params:
            return self.family
        inner = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in self.params)
        return f"{self.family}:{inner}"

    def _get(self, *keys: str, default=None):
        # several spellings may name the same parameter (v / num_vertices)
        for k, v in self.params:
            if k in keys:
                return v
        if default is None:
            raise PreconditionError(
                f"corpus spec {self} missing parameter {keys[0]!r}")
        return default

    def build(self) -> list[SignedGraph]:
        if self.family == "petersen-fig1":
            return [signed_petersen()]
        if self.family == "g-family":
            return [g_family(int(self._get("t")))]
        if self.family == "w5-all-signatures":
            return w5_all_signatures()
        if self.family == "enumerate":
            max_v = int(self._get("max_v", default=MAX_ENUM_VERTICES))
            max_e = int(self._get("max_e", default=MAX_ENUM_EDGES))
            return list(enumerate_signed_graphs(max_v, max_e))
        if self.family == "random":
            seed = int(self._get("seed"))
            nv = int(self._get("v", "num_vertices"))
            ne = int(self._get("e", "num_edges"))
            prob = float(self._get("neg_prob", default=0.5))
            count = int(self._get("count", default=1))
            if count < 1:
                raise PreconditionError("count must be >= 1")
            return [
                random_signed_graph(seed + i, nv, ne, prob)
                for i in range(count)
            ]
        raise PreconditionError(f"unknown corpus family {self.family!r}")
