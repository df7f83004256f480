"""signedflow: exact nowhere-zero flow computations on signed multigraphs."""

from .core import (
    Edge,
    SignedGraph,
    Orientation,
    FlowAssignment,
    FlowKind,
    BalanceCertificate,
    GraphFormatError,
    parse_graph,
    serialize_graph,
    switch,
    switch_orientation,
    boundary,
    check_flow,
    is_balanced,
)
from .errors import (
    PreconditionError,
    NotFlowAdmissibleError,
    ResourceCapExceeded,
    InvariantViolation,
)
from .structure import (
    classify_signed_circuit,
    enumerate_circuits,
    find_long_barbell,
    find_signed_circuit,
    has_star_cut,
    is_antibalanced,
    is_flow_admissible,
    three_edge_coloring,
    find_antibalanced_2_factor,
)
from .solve import (
    find_nz_k_flow,
    find_nz_zk_flow,
    find_2_flow_on_even_graph,
    signed_circuit_flow,
    integer_flow_number,
    circular_flow_number,
    flow_numbers,
    FlowNumbers,
    solver_backend_name,
)
from .transform import (
    ConversionState,
    run_modflow_conversion,
    modflow_to_intflow,
    decompose_into_2_flows,
    eulerian_decompose,
    EulerianDecomposition,
    normalize_circular_flow,
    NormalizationState,
)
from .corpus import (
    CorpusSpec,
    signed_petersen,
    g_family,
    wheel_w5,
    w5_all_signatures,
    enumerate_signed_graphs,
    random_signed_graph,
)
from .certificates import (
    Certificate,
    VerifyOutcome,
    flow_to_text,
    flow_from_text,
    graph_sha256,
    verify_certificate,
)
from .verify_suites import SUITES, SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "SignedGraph",
    "Orientation",
    "FlowAssignment",
    "FlowKind",
    "BalanceCertificate",
    "GraphFormatError",
    "parse_graph",
    "serialize_graph",
    "switch",
    "switch_orientation",
    "boundary",
    "check_flow",
    "is_balanced",
    "PreconditionError",
    "NotFlowAdmissibleError",
    "ResourceCapExceeded",
    "InvariantViolation",
    "classify_signed_circuit",
    "enumerate_circuits",
    "find_long_barbell",
    "find_signed_circuit",
    "has_star_cut",
    "is_antibalanced",
    "is_flow_admissible",
    "three_edge_coloring",
    "find_antibalanced_2_factor",
    "find_nz_k_flow",
    "find_nz_zk_flow",
    "find_2_flow_on_even_graph",
    "signed_circuit_flow",
    "integer_flow_number",
    "circular_flow_number",
    "flow_numbers",
    "FlowNumbers",
    "solver_backend_name",
    "ConversionState",
    "run_modflow_conversion",
    "modflow_to_intflow",
    "decompose_into_2_flows",
    "eulerian_decompose",
    "EulerianDecomposition",
    "normalize_circular_flow",
    "NormalizationState",
    "CorpusSpec",
    "signed_petersen",
    "g_family",
    "wheel_w5",
    "w5_all_signatures",
    "enumerate_signed_graphs",
    "random_signed_graph",
    "Certificate",
    "VerifyOutcome",
    "flow_to_text",
    "flow_from_text",
    "graph_sha256",
    "verify_certificate",
    "SUITES",
    "SuiteReport",
    "run_suite",
    "__version__",
]
