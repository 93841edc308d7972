"""flowsem: semantic enrichment of dataflow graphs.

Converts language-specific dataflow records of data-science scripts (raw
flow graphs) into library-independent semantic flow graphs by expanding
annotated calls against an ontology and contracting the unannotated rest.
"""

from .diagram import (
    OUTER,
    AbstractType,
    Box,
    Concept,
    Concrete,
    ConcreteType,
    UNKNOWN,
    UNTYPED,
    Unknown,
    UnknownType,
    WiringDiagram,
    Wire,
    canonicalize,
    compose_diagrams,
    equivalent,
    normalize,
    product_diagrams,
    substitute,
    topological_order,
    validate_diagram,
)
from .dot import to_dot
from .elaborate import elaborate
from .enrich import (
    EnrichmentConfig,
    EnrichmentReport,
    check_annotation_functoriality,
    contract,
    enrich,
    expand,
)
from .errors import (
    DiagramError,
    ElaborationError,
    EnrichmentError,
    FlowsemError,
    OntologyError,
    ParseError,
    SchemaError,
)
from .flowgraph import FlowGraphDocument, read_flowgraph, write_flowgraph
from .ontology import (
    FunctionAnnotation,
    FunctionGenerator,
    OntologyPresentation,
    SubfunctionGenerator,
    SubtypeGenerator,
    TypeAnnotation,
    TypeGenerator,
    is_subfunction,
    is_subtype,
    parse_ontology_document,
    resolve_function_annotation,
    resolve_type_annotation,
    serialize_ontology,
    validate_presentation,
)
from .refs import ConcreteRef, Literal, Ref
from .terms import MonoclType, parse_term, print_term

__version__ = "0.1.0"
