import json

import pytest

from flowsem import (
    FlowGraphDocument,
    ParseError,
    SchemaError,
    WiringDiagram,
    read_flowgraph,
    write_flowgraph,
)

FIXTURE_NAMES = [
    "kmeans_scipy_raw.json",
    "kmeans_sklearn_raw.json",
    "kmeans_r_raw.json",
    "kmeans_semantic.json",
]


def test_read_scipy_trace(scipy_raw):
    # transcribed with one box per library call: genfromtxt, delete, kmeans2
    assert scipy_raw.kind == "raw"
    assert len(scipy_raw.diagram.boxes) == 3
    names = sorted(
        bx.label.ref.qualified_name for bx in scipy_raw.diagram.boxes.values()
    )
    assert names == ["delete", "genfromtxt", "kmeans2"]


def test_minimal_empty_document():
    doc = read_flowgraph(
        json.dumps({"version": 1, "kind": "raw", "metadata": {}, "boxes": [], "wires": [],
                    "outer_in": [], "outer_out": []})
    )
    assert doc.diagram == WiringDiagram()
    assert doc.kind == "raw"


def test_semantic_kind_rejects_concrete_labels(fixtures_dir):
    data = json.loads((fixtures_dir / "kmeans_scipy_raw.json").read_text())
    data["kind"] = "semantic"
    with pytest.raises(SchemaError, match="concrete label"):
        read_flowgraph(json.dumps(data))


def test_raw_kind_rejects_concept_labels(fixtures_dir):
    data = json.loads((fixtures_dir / "kmeans_semantic.json").read_text())
    data["kind"] = "raw"
    with pytest.raises(SchemaError, match="non-concrete label"):
        read_flowgraph(json.dumps(data))


def test_unsupported_version_rejected(fixtures_dir):
    data = json.loads((fixtures_dir / "kmeans_scipy_raw.json").read_text())
    data["version"] = 2
    with pytest.raises(SchemaError, match="unsupported version"):
        read_flowgraph(json.dumps(data))


def test_missing_version_rejected():
    with pytest.raises(SchemaError, match="version"):
        read_flowgraph(json.dumps({"kind": "raw"}))


def test_malformed_wire_rejected():
    doc = {
        "version": 1,
        "kind": "raw",
        "boxes": [],
        "wires": [{"src": ["@outer"], "dst": ["@outer", 0]}],
        "outer_in": [],
        "outer_out": [],
    }
    with pytest.raises(SchemaError, match="endpoint"):
        read_flowgraph(json.dumps(doc))


def test_invalid_diagram_rejected():
    doc = {
        "version": 1,
        "kind": "raw",
        "boxes": [
            {
                "id": "b1",
                "label": {"tag": "concrete", "language": "python", "package": "p",
                           "qualified_name": "f", "kind": "function"},
                "in_ports": [{"tag": "unknown"}],
                "out_ports": [],
            }
        ],
        "wires": [],
        "outer_in": [],
        "outer_out": [],
    }
    with pytest.raises(SchemaError, match="not well-formed"):
        read_flowgraph(json.dumps(doc))


def test_json_syntax_error_positioned():
    with pytest.raises(ParseError):
        read_flowgraph("{")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trips_byte_identical(fixtures_dir, name):
    text = (fixtures_dir / name).read_text(encoding="utf-8")
    doc = read_flowgraph(text)
    assert write_flowgraph(doc) == text
    assert read_flowgraph(write_flowgraph(doc)) == doc


def test_write_is_deterministic(scipy_raw):
    assert write_flowgraph(scipy_raw) == write_flowgraph(scipy_raw)


def test_write_rejects_kind_mismatch(scipy_raw):
    bad = FlowGraphDocument("semantic", scipy_raw.diagram, {})
    with pytest.raises(SchemaError):
        write_flowgraph(bad)


def test_empty_document_write_is_stable_and_minimal():
    doc = FlowGraphDocument("raw", WiringDiagram(), {})
    first, second = write_flowgraph(doc), write_flowgraph(doc)
    assert first == second
    assert read_flowgraph(first) == doc


@pytest.mark.parametrize(
    "mutation",
    [
        {"boxes": [5]},
        {"boxes": "nope"},
        {"wires": [["b1", 0]]},
        {"outer_in": [["not", "an", "object"]]},
        {"wires": [{"src": ["@outer", 0], "dst": ["@outer", 0], "value": 3}]},
    ],
)
def test_malformed_entries_raise_schema_errors(mutation):
    doc = {
        "version": 1,
        "kind": "raw",
        "metadata": {},
        "boxes": [],
        "wires": [],
        "outer_in": [],
        "outer_out": [],
    }
    doc.update(mutation)
    with pytest.raises(SchemaError):
        read_flowgraph(json.dumps(doc))
