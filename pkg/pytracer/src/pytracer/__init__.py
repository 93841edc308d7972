"""pytracer: dynamic dataflow tracing for Python scripts.

Emits raw flow-graph documents (shared schema, version 1) describing the
calls a script makes into include-listed packages and how data flows
between them.
"""

from .document import RawDocument, SCHEMA_VERSION
from .provenance import ProvenanceTable
from .tracer import (
    TraceConfig,
    TraceError,
    Tracer,
    detect_mutation,
    observe,
    snapshot,
    trace_script,
)

__version__ = "0.1.0"
