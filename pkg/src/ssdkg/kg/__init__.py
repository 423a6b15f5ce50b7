"""Knowledge-graph core: typed graph model, ontology checking, Turtle
serialization, and basic-graph-pattern queries."""

from .model import (
    ANN_NS,
    DATA_NS,
    SSD_NS,
    TYPE_RELATION,
    Annotation,
    EdgeKey,
    GraphError,
    KnowledgeGraph,
    MergeError,
    Node,
    Provenance,
    canonical_props,
    merge,
)
from .query import BindingSet, GraphPattern, PatternError, TriplePattern, Var, evaluate_pattern, pattern
from .schema import (
    REASON_DOMAIN,
    REASON_RANGE,
    REASON_UNKNOWN_RELATION,
    REASON_UNRESOLVED,
    OntologySchema,
    Relation,
    SchemaError,
    TypeCheckResult,
    check_triple,
)
from .taxonomy import (
    ROOT_NAME,
    STATUS_ESTABLISHED,
    STATUS_PENDING,
    Concept,
    Taxonomy,
    TaxonomyError,
)
from .turtle import SerializationError, TurtleParseError, parse_turtle, serialize_turtle

__all__ = [
    "ANN_NS",
    "DATA_NS",
    "SSD_NS",
    "TYPE_RELATION",
    "Annotation",
    "BindingSet",
    "Concept",
    "EdgeKey",
    "GraphError",
    "GraphPattern",
    "KnowledgeGraph",
    "MergeError",
    "Node",
    "OntologySchema",
    "PatternError",
    "Provenance",
    "REASON_DOMAIN",
    "REASON_RANGE",
    "REASON_UNKNOWN_RELATION",
    "REASON_UNRESOLVED",
    "ROOT_NAME",
    "Relation",
    "STATUS_ESTABLISHED",
    "STATUS_PENDING",
    "SchemaError",
    "SerializationError",
    "Taxonomy",
    "TaxonomyError",
    "TriplePattern",
    "TurtleParseError",
    "TypeCheckResult",
    "Var",
    "canonical_props",
    "check_triple",
    "evaluate_pattern",
    "merge",
    "parse_turtle",
    "pattern",
    "serialize_turtle",
]
