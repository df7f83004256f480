"""Self-verifying JSON certificates and exact flow serialization.

A certificate pins the input graph (canonical text + SHA-256), a claim,
and enough witness material to recompute the verdict from scratch;
`verify_certificate` trusts nothing else.  All numbers serialize as
exact fraction strings, never floats.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    FlowAssignment,
    FlowKind,
    Orientation,
    SignedGraph,
    check_flow,
    parse_graph,
    serialize_graph,
)
from .errors import PreconditionError

SCHEMA_VERSION = 1

__all__ = [
    "Certificate",
    "SCHEMA_VERSION",
    "VerifyOutcome",
    "flow_from_text",
    "flow_to_text",
    "fraction_to_str",
    "graph_sha256",
    "make_conversion_certificate",
    "make_decomposition_certificate",
    "make_eulerian_certificate",
    "make_flow_certificate",
    "make_flow_number_certificate",
    "make_normalization_certificate",
    "str_to_fraction",
    "verify_certificate",
]


def fraction_to_str(v) -> str:
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def str_to_fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"bad fraction {s!r}") from exc


def _value_for_kind(s: str, kind: FlowKind):
    f = str_to_fraction(s)
    if kind.kind in ("integer", "modulo"):
        if f.denominator != 1:
            return f  # let check_flow report the type violation
        return int(f)
    return f


def graph_sha256(g: SignedGraph) -> str:
    return hashlib.sha256(serialize_graph(g).encode()).hexdigest()


# ---------------------------------------------------------------------------
# flow files


def flow_to_text(fa: FlowAssignment) -> str:
    """Flip-set line, then one `<edge-index> <fraction>` line per edge."""
    lines = ["flip " + " ".join(str(i) for i in sorted(fa.orientation.reversed_edges))]
    for i, v in enumerate(fa.values):
        lines.append(f"{i} {fraction_to_str(v)}")
    return "\n".join(lines).rstrip() + "\n"


def flow_from_text(text: str, num_edges: int, kind: Optional[FlowKind] = None) -> FlowAssignment:
    flips: Optional[frozenset[int]] = None
    values: dict[int, object] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "flip":
            if flips is not None:
                raise PreconditionError(f"line {ln}: duplicate flip line")
            try:
                flips = frozenset(int(x) for x in parts[1:])
            except ValueError:
                raise PreconditionError(f"line {ln}: bad flip line") from None
            continue
        if len(parts) != 2:
            raise PreconditionError(f"line {ln}: expected `<edge-index> <fraction>`")
        try:
            eid = int(parts[0])
        except ValueError:
            raise PreconditionError(f"line {ln}: bad edge index {parts[0]!r}") from None
        if not (0 <= eid < num_edges):
            raise PreconditionError(f"line {ln}: edge index {eid} out of range")
        if eid in values:
            raise PreconditionError(f"line {ln}: duplicate edge {eid}")
        if kind is None:
            values[eid] = str_to_fraction(parts[1])
        else:
            values[eid] = _value_for_kind(parts[1], kind)
    if flips is None:
        flips = frozenset()
    if len(values) != num_edges:
        missing = sorted(set(range(num_edges)) - set(values))
        raise PreconditionError(f"flow file missing edges {missing[:5]}")
    if bad := [i for i in flips if not 0 <= i < num_edges]:
        raise PreconditionError(f"flip set references unknown edges {sorted(bad)[:5]}")
    return FlowAssignment(
        Orientation(flips), tuple(values[i] for i in range(num_edges))
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    """A claim about one graph plus the material to re-derive it."""

    claim: str
    graph_text: str
    graph_hash: str
    verdict: str
    payload: dict = field(default_factory=dict)
    resources: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": self.schema_version,
                "claim": self.claim,
                "graph": self.graph_text,
                "graph_sha256": self.graph_hash,
                "verdict": self.verdict,
                "payload": self.payload,
                "resources": self.resources,
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"certificate is not JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise PreconditionError("certificate must be a JSON object")
        try:
            return cls(
                claim=raw["claim"],
                graph_text=raw["graph"],
                graph_hash=raw["graph_sha256"],
                verdict=raw["verdict"],
                payload=raw["payload"],
                resources=raw.get("resources", {}),
                schema_version=raw["schema_version"],
            )
        except KeyError as exc:
            raise PreconditionError(f"certificate missing field {exc}") from exc


@dataclass
class VerifyOutcome:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _flow_payload(fa: FlowAssignment) -> dict:
    return {
        "orientation": sorted(fa.orientation.reversed_edges),
        "values": [fraction_to_str(v) for v in fa.values],
    }


def _payload_flow(payload: dict, kind: Optional[FlowKind] = None) -> FlowAssignment:
    try:
        rev = frozenset(int(i) for i in payload["orientation"])
        raw = payload["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed flow payload: {exc}") from exc
    if kind is None:
        vals = tuple(str_to_fraction(s) for s in raw)
    else:
        vals = tuple(_value_for_kind(s, kind) for s in raw)
    return FlowAssignment(Orientation(rev), vals)


def make_flow_certificate(
    g: SignedGraph,
    kind: FlowKind,
    fa: Optional[FlowAssignment],
    nodes: Optional[int] = None,
) -> Certificate:
    """Existence witness or exhaustive-search nonexistence attestation."""
    payload: dict = {"flow_kind": str(kind)}
    if fa is None:
        verdict = "none"
        payload["search"] = "exhaustive"
    else:
        verdict = "exists"
        payload.update(_flow_payload(fa))
    resources = {} if nodes is None else {"nodes": nodes}
    return Certificate(
        claim="flow",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict=verdict,
        payload=payload,
        resources=resources,
    )


def make_flow_number_certificate(g: SignedGraph, numbers) -> Certificate:
    payload: dict = {}
    if numbers.phi_i is not None:
        payload["phi_i"] = numbers.phi_i
    if numbers.phi_c is not None:
        payload["phi_c"] = fraction_to_str(numbers.phi_c)
    for key, fa in numbers.witnesses.items():
        payload[f"witness_{key}"] = _flow_payload(fa)
    verdict = ";".join(
        f"{k}={payload[k]}" for k in ("phi_i", "phi_c") if k in payload
    )
    return Certificate(
        claim="flow-number",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict=verdict or "none",
        payload=payload,
    )


def make_conversion_certificate(
    g: SignedGraph, k: int, modular: FlowAssignment, integer: FlowAssignment, journal
) -> Certificate:
    return Certificate(
        claim="conversion",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict="converted",
        payload={
            "k": k,
            "input": _flow_payload(modular),
            "output": _flow_payload(integer),
            "journal": [[op, sorted(items)] for op, items in journal],
        },
    )


def make_decomposition_certificate(
    g: SignedGraph, k: int, fa: FlowAssignment, parts
) -> Certificate:
    return Certificate(
        claim="two-flow-decomposition",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict=f"parts={len(parts)}",
        payload={
            "k": k,
            "input": _flow_payload(fa),
            "parts": [_flow_payload(p) for p in parts],
        },
    )


def make_eulerian_certificate(g: SignedGraph, decomposition) -> Certificate:
    members = [
        {"kind": w.kind, "circuits": [list(c) for c in w.circuits],
         "path": list(w.path) if w.path else []}
        for w in decomposition.members
    ]
    return Certificate(
        claim="eulerian-decomposition",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict=f"members={len(members)}",
        payload={"members": members},
    )


def make_normalization_certificate(
    g: SignedGraph, fa_in: FlowAssignment, state
) -> Certificate:
    return Certificate(
        claim="normalization",
        graph_text=serialize_graph(g),
        graph_hash=graph_sha256(g),
        verdict="empty" if not state.off_grid else "residual",
        payload={
            "p": state.p,
            "q": state.q,
            "input": _flow_payload(fa_in),
            "final": _flow_payload(state.flow),
            "off_grid": sorted(state.off_grid),
            "pushes": [
                [list(sup), d, fraction_to_str(eps)] for sup, d, eps in state.pushes
            ],
        },
    )


# ---------------------------------------------------------------------------
# verification


def _verify_graph(cert: Certificate) -> SignedGraph:
    g = parse_graph(cert.graph_text)
    h = graph_sha256(g)
    if h != cert.graph_hash:
        raise PreconditionError("graph hash mismatch (tampered certificate)")
    return g


def _verify_flow(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from . import solve

    kind = FlowKind.parse(cert.payload["flow_kind"])
    if cert.verdict == "exists":
        fa = _payload_flow(cert.payload, kind)
        res = check_flow(g, fa, kind)
        if not res.ok:
            return VerifyOutcome(False, f"witness fails: {res.violation}")
        return VerifyOutcome(True)
    if cert.verdict == "none":
        if cert.payload.get("search") != "exhaustive":
            return VerifyOutcome(False, "nonexistence without exhaustive attestation")
        if kind.kind == "integer":
            redo = solve.find_nz_k_flow(g, int(kind.param))
        elif kind.kind == "modulo":
            redo = solve.find_nz_zk_flow(g, int(kind.param))
        else:
            return VerifyOutcome(False, "nonexistence certificate for circular kind")
        if redo is not None:
            return VerifyOutcome(False, "re-search found a flow the certificate denies")
        return VerifyOutcome(True)
    return VerifyOutcome(False, f"unknown verdict {cert.verdict!r}")


def _verify_flow_number(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from . import solve

    payload = cert.payload
    if "phi_i" in payload:
        k = int(payload["phi_i"])
        fa = _payload_flow(payload["witness_phi_i"], FlowKind.integer(k))
        res = check_flow(g, fa, FlowKind.integer(k))
        if not res.ok:
            return VerifyOutcome(False, f"phi_i witness fails: {res.violation}")
        for smaller in range(2, k):
            if solve.find_nz_k_flow(g, smaller) is not None:
                return VerifyOutcome(False, f"a {smaller}-flow exists below phi_i={k}")
    if "phi_c" in payload:
        r = str_to_fraction(payload["phi_c"])
        fa = _payload_flow(payload["witness_phi_c"], FlowKind.circular(r))
        res = check_flow(g, fa, FlowKind.circular(r))
        if not res.ok:
            return VerifyOutcome(False, f"phi_c witness fails: {res.violation}")
        redo = solve.circular_flow_number(g)
        if redo.phi_c != r:
            return VerifyOutcome(False, f"recomputed phi_c={redo.phi_c}, certified {r}")
    return VerifyOutcome(True)


def _verify_conversion(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from .transform import ConversionState, _unwind

    k = int(cert.payload["k"])
    fa_in = _payload_flow(cert.payload["input"], FlowKind.modulo(k))
    fa_out = _payload_flow(cert.payload["output"], FlowKind.integer(k))
    res = check_flow(g, fa_in, FlowKind.modulo(k))
    if not res.ok:
        return VerifyOutcome(False, f"input fails modulo check: {res.violation}")
    res = check_flow(g, fa_out, FlowKind.integer(k))
    if not res.ok:
        return VerifyOutcome(False, f"output fails integer check: {res.violation}")
    if fa_out.orientation != fa_in.orientation:
        return VerifyOutcome(False, "output orientation differs from input")
    state = ConversionState.lift(g, fa_in, k)
    for op, items in cert.payload["journal"]:
        if op == "switch":
            state.switch_at(int(i) for i in items)
        elif op == "minus":
            state.minus(int(i) for i in items)
        else:
            return VerifyOutcome(False, f"unknown journal op {op!r}")
    replayed = _unwind(state, fa_in)
    if replayed != fa_out:
        return VerifyOutcome(False, "journal replay does not reach certified output")
    for i in range(g.num_edges):
        # both flows share one orientation, so values compare directly
        if (int(fa_out.values[i]) - int(fa_in.values[i])) % k != 0:
            return VerifyOutcome(False, f"edge {i} not congruent mod {k}")
    return VerifyOutcome(True)


def _verify_decomposition(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from .core import boundary

    k = int(cert.payload["k"])
    fa = _payload_flow(cert.payload["input"], FlowKind.integer(k))
    parts = [_payload_flow(p, FlowKind.integer(2)) for p in cert.payload["parts"]]
    if len(parts) != k - 1:
        return VerifyOutcome(False, f"{len(parts)} parts for k={k}")
    res = check_flow(g, fa, FlowKind.integer(k))
    if not res.ok:
        return VerifyOutcome(False, f"input fails integer check: {res.violation}")
    for idx, part in enumerate(parts):
        if part.orientation != parts[0].orientation:
            return VerifyOutcome(False, "parts disagree on orientation")
        if any(v not in (0, 1) for v in part.values):
            return VerifyOutcome(False, f"part {idx} has a value outside {{0,1}}")
        if any(b != 0 for b in boundary(g, part)):
            return VerifyOutcome(False, f"part {idx} has nonzero boundary")
    ref = parts[0].orientation

    def signed(fa_: FlowAssignment, i: int):
        v = fa_.values[i]
        return -v if i in fa_.orientation.reversed_edges else v

    for i in range(g.num_edges):
        total = sum(
            (-p.values[i] if i in ref.reversed_edges else p.values[i]) for p in parts
        )
        if total != signed(fa, i):
            return VerifyOutcome(False, f"edge {i} sums to {total}, input {signed(fa, i)}")
    return VerifyOutcome(True)


def _verify_eulerian(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from .structure import classify_signed_circuit

    members = cert.payload["members"]
    used: list[int] = []
    for idx, mem in enumerate(members):
        ids = [int(i) for c in mem["circuits"] for i in c] + [int(i) for i in mem["path"]]
        w = classify_signed_circuit(g, ids)
        if w is None or w.kind != mem["kind"]:
            return VerifyOutcome(False, f"member {idx} is not a {mem['kind']}")
        if mem["kind"] == "long-barbell":
            return VerifyOutcome(False, f"member {idx} is a long barbell")
        used.extend(ids)
    if sorted(used) != list(range(g.num_edges)):
        return VerifyOutcome(False, "members do not partition the edge set")
    return VerifyOutcome(True)


def _verify_normalization(cert: Certificate, g: SignedGraph) -> VerifyOutcome:
    from .transform import normalize_circular_flow

    p = int(cert.payload["p"])
    q = int(cert.payload["q"])
    fa_in = _payload_flow(cert.payload["input"])
    state = normalize_circular_flow(g, fa_in, p, q)
    if state.flow != _payload_flow(cert.payload["final"]):
        return VerifyOutcome(False, "re-normalization reaches a different flow")
    if sorted(state.off_grid) != [int(i) for i in cert.payload["off_grid"]]:
        return VerifyOutcome(False, "off-grid set mismatch")
    recorded = [
        (tuple(int(i) for i in sup), int(d), str_to_fraction(eps))
        for sup, d, eps in cert.payload["pushes"]
    ]
    if list(state.pushes) != recorded:
        return VerifyOutcome(False, "push journal mismatch")
    return VerifyOutcome(True)


_VERIFIERS = {
    "flow": _verify_flow,
    "flow-number": _verify_flow_number,
    "conversion": _verify_conversion,
    "two-flow-decomposition": _verify_decomposition,
    "eulerian-decomposition": _verify_eulerian,
    "normalization": _verify_normalization,
}


def verify_certificate(cert: Certificate) -> VerifyOutcome:
    """Recompute the certificate's verdict from graph + witness alone."""
    if cert.schema_version != SCHEMA_VERSION:
        return VerifyOutcome(False, f"unsupported schema {cert.schema_version}")
    handler = _VERIFIERS.get(cert.claim)
    if handler is None:
        return VerifyOutcome(False, f"unknown claim {cert.claim!r}")
    try:
        g = _verify_graph(cert)
        return handler(cert, g)
    except PreconditionError as exc:
        return VerifyOutcome(False, str(exc))
