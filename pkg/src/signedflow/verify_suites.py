"""Theorem-verification suites over graph corpora.

Each suite sweeps a filtered corpus, asserts the corresponding statement
with zero tolerance, and reports failures with enough material to
reproduce them.  Suites share one report shape and can distribute items
over a process pool; aggregation is keyed by item index, so summaries
are byte-identical regardless of worker count or completion order.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from math import ceil
from typing import Callable, Iterable, Optional, Sequence

from .core import (
    FlowAssignment,
    FlowKind,
    SignedGraph,
    check_flow,
    is_eulerian,
    serialize_graph,
)
from .errors import InvariantViolation, PreconditionError, ResourceCapExceeded
from .structure import (
    find_long_barbell,
    is_flow_admissible,
    three_edge_coloring,
)
from . import solve, transform

__all__ = [
    "SUITES",
    "SuiteReport",
    "flow_parity_ok",
    "run_suite",
    "suite_conversion",
    "suite_cubic_z4",
    "suite_eulerian_decomp",
    "suite_even_k_experimental",
    "suite_mod_int_equiv",
    "suite_phi_equality",
    "suite_six_flow",
    "suite_two_flow_sum",
]


def flow_parity_ok(g: SignedGraph, fa: FlowAssignment) -> bool:
    """The number of negative edges with odd flow value is always even."""
    odd_neg = sum(
        1 for e, v in zip(g.edges, fa.values) if e.sign < 0 and int(v) % 2 != 0
    )
    return odd_neg % 2 == 0


@dataclass
class SuiteReport:
    suite: str
    items: int = 0
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "suite": self.suite,
                "items": self.items,
                "checked": self.checked,
                "skipped": self.skipped,
                "failures": self.failures,
                "notes": {k: self.notes[k] for k in sorted(self.notes)},
                "ok": self.ok,
            },
            indent=2,
            sort_keys=True,
        )


def _fail(g: SignedGraph, detail: str) -> dict:
    return {"graph": serialize_graph(g), "detail": detail}


def _bump(notes: dict, key: str, amount: int = 1) -> None:
    notes[key] = notes.get(key, 0) + amount


def _merge_notes(into: dict, extra: dict) -> None:
    for key, val in extra.items():
        into[key] = into.get(key, 0) + val


def _pool_entry(args):
    fn, idx, g = args
    return idx, fn(g)


def _map_items(fn: Callable, graphs: Sequence[SignedGraph], workers: int):
    """Apply fn to every graph; order of results always follows input order."""
    if workers <= 1:
        return [fn(g) for g in graphs]
    jobs = [(fn, i, g) for i, g in enumerate(graphs)]
    with multiprocessing.Pool(workers) as pool:
        indexed = list(pool.imap_unordered(_pool_entry, jobs, chunksize=4))
    indexed.sort(key=lambda t: t[0])
    return [r for _, r in indexed]


def _collect(
    suite: str, graphs: Sequence[SignedGraph], item_fn: Callable, workers: int
) -> SuiteReport:
    report = SuiteReport(suite=suite, items=len(graphs))
    for result in _map_items(item_fn, graphs, workers):
        if result is None:
            report.skipped += 1
            continue
        report.checked += result.get("checked", 1)
        report.failures.extend(result.get("failures", ()))
        _merge_notes(report.notes, result.get("notes", {}))
    return report


def _admissible_barbell_free(g: SignedGraph) -> bool:
    return bool(is_flow_admissible(g)) and find_long_barbell(g) is None


# ---------------------------------------------------------------------------
# individual suites


def _six_flow_item(g: SignedGraph, cap: Optional[int]):
    if not _admissible_barbell_free(g):
        return None
    failures = []
    notes: dict = {}
    fa = solve.find_nz_k_flow(g, 6, cap=cap)
    if fa is None:
        failures.append(_fail(g, "no nowhere-zero 6-flow found (exhaustive)"))
    else:
        res = check_flow(g, fa, FlowKind.integer(6))
        if not res.ok:
            failures.append(_fail(g, f"witness fails validation: {res.violation}"))
        if not flow_parity_ok(g, fa):
            failures.append(_fail(g, "odd-value parity violated"))
            _bump(notes, "parity-violations")
    return {"failures": failures, "notes": notes}


def suite_six_flow(
    graphs: Sequence[SignedGraph], cap: Optional[int] = None, workers: int = 1
) -> SuiteReport:
    """Every admissible barbell-free graph admits a nowhere-zero 6-flow."""
    return _collect("six-flow", graphs, partial(_six_flow_item, cap=cap), workers)


def _mod_int_item(g: SignedGraph, ks: tuple[int, ...], cap: Optional[int]):
    if not _admissible_barbell_free(g):
        return None
    failures = []
    notes: dict = {}
    checked = 0
    for k in ks:
        zk = solve.find_nz_zk_flow(g, k, cap=cap)
        kk = solve.find_nz_k_flow(g, k, cap=cap)
        checked += 1
        if (zk is None) != (kk is None):
            failures.append(
                _fail(g, f"k={k}: Z_k {'yes' if zk else 'no'} but integer "
                         f"{'yes' if kk else 'no'}")
            )
        if kk is not None:
            _bump(notes, f"k={k}-flows")
            if not flow_parity_ok(g, kk):
                failures.append(_fail(g, f"k={k}: odd-value parity violated"))
    return {"failures": failures, "notes": notes, "checked": checked}


def suite_mod_int_equiv(
    graphs: Sequence[SignedGraph],
    ks: tuple[int, ...] = (3, 5, 6, 7),
    cap: Optional[int] = None,
    workers: int = 1,
) -> SuiteReport:
    """Modulo-k and integer-k solvability agree (k = 3 or k >= 5)."""
    for k in ks:
        if k == 4 or k < 3:
            raise PreconditionError(f"equivalence does not cover k={k}")
    return _collect(
        "mod-int-equiv", graphs, partial(_mod_int_item, ks=ks, cap=cap), workers
    )


def _conversion_item(g: SignedGraph, ks: tuple[int, ...], cap: Optional[int]):
    if find_long_barbell(g) is not None:
        return None
    failures = []
    notes: dict = {}
    checked = 0
    for k in ks:
        zk = solve.find_nz_zk_flow(g, k, cap=cap)
        if zk is None:
            continue
        checked += 1
        try:
            out = transform.modflow_to_intflow(g, zk, k, cap=cap)
        except InvariantViolation as exc:
            failures.append(_fail(g, f"k={k}: invariant violation: {exc}"))
            _bump(notes, "invariant-aborts")
            continue
        res = check_flow(g, out, FlowKind.integer(k))
        if not res.ok:
            failures.append(_fail(g, f"k={k}: output fails: {res.violation}"))
            continue
        if out.orientation != zk.orientation:
            failures.append(_fail(g, f"k={k}: orientation changed"))
            continue
        if any((int(a) - int(b)) % k for a, b in zip(out.values, zk.values)):
            failures.append(_fail(g, f"k={k}: congruence mod {k} broken"))
        if not flow_parity_ok(g, out):
            failures.append(_fail(g, f"k={k}: odd-value parity violated"))
        _bump(notes, f"k={k}-converted")
    return {"failures": failures, "notes": notes, "checked": checked}


def suite_conversion(
    graphs: Sequence[SignedGraph],
    ks: tuple[int, ...] = (3, 5, 7),
    cap: Optional[int] = None,
    workers: int = 1,
) -> SuiteReport:
    """Every modulo-k flow on a barbell-free graph converts to integer k (odd k)."""
    for k in ks:
        if k % 2 == 0:
            raise PreconditionError("conversion suite covers odd k only")
    return _collect(
        "conversion", graphs, partial(_conversion_item, ks=ks, cap=cap), workers
    )


def _two_flow_item(g: SignedGraph, k_max: int, cap: Optional[int]):
    if not _admissible_barbell_free(g):
        return None
    failures = []
    notes: dict = {}
    checked = 0
    for k in range(2, k_max + 1):
        fa = solve.find_nz_k_flow(g, k, cap=cap)
        if fa is None:
            continue
        checked += 1
        if not flow_parity_ok(g, fa):
            failures.append(_fail(g, f"k={k}: odd-value parity violated"))
        try:
            parts = transform.decompose_into_2_flows(g, fa, k)
        except (InvariantViolation, AssertionError) as exc:
            failures.append(_fail(g, f"k={k}: decomposition failed: {exc}"))
            continue
        if len(parts) != k - 1:
            failures.append(_fail(g, f"k={k}: {len(parts)} parts"))
        _bump(notes, f"k={k}-decomposed")
    return {"failures": failures, "notes": notes, "checked": checked}


def suite_two_flow_sum(
    graphs: Sequence[SignedGraph],
    k_max: int = 6,
    cap: Optional[int] = None,
    workers: int = 1,
) -> SuiteReport:
    """Positive k-flows split into k-1 nonnegative 2-flows summing exactly."""
    return _collect(
        "two-flow-sum", graphs, partial(_two_flow_item, k_max=k_max, cap=cap), workers
    )


def _eulerian_item(g: SignedGraph):
    if not bool(is_flow_admissible(g)):
        return None
    if not is_eulerian(g) or len(g.negative_edges) % 2 != 0:
        return None
    if find_long_barbell(g) is not None:
        return None
    failures = []
    notes: dict = {}
    try:
        dec = transform.eulerian_decompose(g)
    except (PreconditionError, InvariantViolation) as exc:
        return {"failures": [_fail(g, f"decomposition failed: {exc}")]}
    used = sorted(i for w in dec.members for i in w.edge_ids)
    if used != list(range(g.num_edges)):
        failures.append(_fail(g, "members do not partition the edges"))
    for w in dec.members:
        if w.kind == "balanced-circuit":
            _bump(notes, "balanced-circuits")
        elif w.kind == "short-barbell":
            _bump(notes, "short-barbells")
        else:
            failures.append(_fail(g, f"member of kind {w.kind}"))
    return {"failures": failures, "notes": notes}


def suite_eulerian_decomp(
    graphs: Sequence[SignedGraph], workers: int = 1
) -> SuiteReport:
    """Admissible eulerian barbell-free graphs with an even number of
    negative edges split into balanced circuits and short barbells."""
    return _collect("eulerian-decomp", graphs, _eulerian_item, workers)


def _phi_item(g: SignedGraph, edge_cap: int, cap: Optional[int]):
    if not bool(is_flow_admissible(g)):
        return None
    failures = []
    notes: dict = {}
    barbell_free = find_long_barbell(g) is None
    try:
        numbers = solve.flow_numbers(g, k_max=8, edge_cap=edge_cap, cap=cap)
    except ResourceCapExceeded:
        return {"failures": [], "notes": {"capped": 1}, "checked": 0}
    phi_c = numbers.phi_c
    phi_i = numbers.phi_i
    if phi_i is None:
        failures.append(_fail(g, "no integer flow number within k_max=8"))
        return {"failures": failures}
    gap = phi_i - ceil(phi_c)
    if barbell_free:
        if gap != 0:
            failures.append(
                _fail(g, f"ceil(phi_c)={ceil(phi_c)} but phi_i={phi_i}")
            )
    else:
        _bump(notes, f"barbell-gap={gap}")
    # normalization structure check on the exact circular witness
    witness = numbers.witnesses["phi_c"]
    ratio = phi_c - 1
    p, q = ratio.numerator, ratio.denominator
    try:
        state = transform.normalize_circular_flow(g, witness, p, q)
    except InvariantViolation as exc:
        failures.append(_fail(g, f"normalization invariant violation: {exc}"))
        return {"failures": failures, "notes": notes, "checked": 2}
    if barbell_free and state.off_grid:
        failures.append(
            _fail(g, f"barbell-free graph left off-grid edges {sorted(state.off_grid)}")
        )
    _bump(notes, "residual-empty" if not state.off_grid else "residual-nonempty")
    return {"failures": failures, "notes": notes, "checked": 2}


def suite_phi_equality(
    graphs: Sequence[SignedGraph],
    edge_cap: int = 12,
    cap: Optional[int] = None,
    workers: int = 1,
) -> SuiteReport:
    """ceil(circular flow number) equals the integer flow number on
    barbell-free graphs; gap distribution is recorded elsewhere.  Each
    circular witness is also pushed through grid normalization and the
    terminal structure checked (empty residue when barbell-free)."""
    return _collect(
        "phi-equality", graphs, partial(_phi_item, edge_cap=edge_cap, cap=cap), workers
    )


def _cubic_item(g: SignedGraph, cap: Optional[int]):
    if any(g.degree(v) != 3 for v in range(g.num_vertices)):
        return None
    if any(e.u == e.v for e in g.edges):
        return None
    if not _admissible_barbell_free(g):
        return None
    failures = []
    notes: dict = {}
    z4 = solve.find_nz_zk_flow(g, 4, cap=cap)
    coloring = three_edge_coloring(g)
    if (z4 is None) != (coloring is None):
        failures.append(
            _fail(g, f"Z_4 {'yes' if z4 else 'no'} but 3-edge-coloring "
                     f"{'yes' if coloring else 'no'}")
        )
    _bump(notes, "colorable" if coloring is not None else "uncolorable")
    return {"failures": failures, "notes": notes}


def suite_cubic_z4(
    graphs: Sequence[SignedGraph], cap: Optional[int] = None, workers: int = 1
) -> SuiteReport:
    """On admissible barbell-free cubic graphs: Z_4-flow iff 3-edge-colorable."""
    return _collect("cubic-z4", graphs, partial(_cubic_item, cap=cap), workers)


def _even_k_item(g: SignedGraph, ks: tuple[int, ...], cap: Optional[int]):
    if find_long_barbell(g) is not None:
        return None
    notes: dict = {}
    checked = 0
    for k in ks:
        zk = solve.find_nz_zk_flow(g, k, cap=cap)
        if zk is None:
            continue
        checked += 1
        try:
            out = transform.modflow_to_intflow(
                g, zk, k, allow_even_k=True, cap=cap or 100_000
            )
        except (InvariantViolation, ResourceCapExceeded) as exc:
            _bump(notes, f"k={k}-failed-{type(exc).__name__}")
            continue
        res = check_flow(g, out, FlowKind.integer(k))
        _bump(notes, f"k={k}-converted" if res.ok else f"k={k}-invalid")
    return {"failures": [], "notes": notes, "checked": checked}


def suite_even_k_experimental(
    graphs: Sequence[SignedGraph],
    ks: tuple[int, ...] = (4, 6),
    cap: Optional[int] = None,
    workers: int = 1,
) -> SuiteReport:
    """Attempt the odd-k conversion on even k and tally the outcomes.

    Purely exploratory: the theorem does not cover even k, so nothing
    here is asserted; the report only counts conversions, aborts, and
    cap hits.
    """
    return _collect(
        "even-k-experimental", graphs, partial(_even_k_item, ks=ks, cap=cap), workers
    )


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "six-flow": suite_six_flow,
    "mod-int-equiv": suite_mod_int_equiv,
    "conversion": suite_conversion,
    "two-flow-sum": suite_two_flow_sum,
    "eulerian-decomp": suite_eulerian_decomp,
    "phi-equality": suite_phi_equality,
    "cubic-z4": suite_cubic_z4,
    "even-k-experimental": suite_even_k_experimental,
}


def run_suite(
    name: str,
    graphs: Sequence[SignedGraph],
    workers: int = 1,
    cap: Optional[int] = None,
) -> SuiteReport:
    if name not in SUITES:
        raise PreconditionError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}"
        )
    fn = SUITES[name]
    kwargs: dict = {"workers": workers}
    if name != "eulerian-decomp":
        kwargs["cap"] = cap
    return fn(list(graphs), **kwargs)
