"""Bigraphs as typed graphs.

A pure bigraph model, a type-graph metamodel engine, the canonical
bidirectional mapping between them with machine-checked soundness
criteria, a product-line variability layer over the representation, and
a navigation-constraint checker.
"""

from .bigraph import (
    BASE_NODE_TYPE_NAMES,
    Bigraph,
    Control,
    DuplicateControl,
    Interface,
    Port,
    ReservedControlName,
    Signature,
    make_signature,
    ports_of,
    validate_bigraph,
)
from .constraints import (
    CheckResult,
    ConstraintDoc,
    ConstraintSyntaxError,
    EvaluationError,
    Invariant,
    TypeCheckError,
    evaluate,
    format_constraints,
    parse_constraints,
    typecheck,
)
from .mapping import (
    ElementMap,
    InvalidBigraph,
    NotCanonical,
    UntypedControl,
    base_type_graph,
    check_arity_rule,
    check_soundness,
    decode,
    encode,
    extend_for_signature,
)
from .report import Finding, ValidationReport
from .typedgraph import (
    Graph,
    InstanceGraph,
    Multiplicity,
    TypeGraph,
    UnknownType,
    all_sub,
    check_multiplicities,
    check_type_graph,
    check_typing,
    check_validity,
    conforms,
)
from .variability import (
    AnnotatedTypeGraph,
    Delta,
    FeatureConfig,
    InvalidConfig,
    annotate_150,
    apply_deltas,
    derive_type_graph,
    enumerate_configs,
    validate_config,
)

__all__ = [
    "AnnotatedTypeGraph",
    "BASE_NODE_TYPE_NAMES",
    "Bigraph",
    "CheckResult",
    "ConstraintDoc",
    "ConstraintSyntaxError",
    "Control",
    "Delta",
    "DuplicateControl",
    "ElementMap",
    "EvaluationError",
    "FeatureConfig",
    "Finding",
    "Graph",
    "InstanceGraph",
    "Interface",
    "InvalidBigraph",
    "InvalidConfig",
    "Invariant",
    "Multiplicity",
    "NotCanonical",
    "Port",
    "ReservedControlName",
    "Signature",
    "TypeCheckError",
    "TypeGraph",
    "UnknownType",
    "UntypedControl",
    "ValidationReport",
    "all_sub",
    "annotate_150",
    "apply_deltas",
    "base_type_graph",
    "check_arity_rule",
    "check_multiplicities",
    "check_soundness",
    "check_type_graph",
    "check_typing",
    "check_validity",
    "conforms",
    "decode",
    "derive_type_graph",
    "encode",
    "enumerate_configs",
    "evaluate",
    "extend_for_signature",
    "format_constraints",
    "make_signature",
    "parse_constraints",
    "ports_of",
    "typecheck",
    "validate_bigraph",
    "validate_config",
]
