import re

from flowsem import WiringDiagram, to_dot


def test_empty_diagram_renders_boundary_only():
    text = to_dot(WiringDiagram())
    assert "digraph flowgraph" in text
    assert "outer_inputs" in text and "outer_outputs" in text
    assert "->" not in text


def test_semantic_node_labels_match_box_labels(semantic_doc):
    text = to_dot(semantic_doc.diagram)
    rendered = re.findall(r'^  b\d+ \[label="([^"]*)"\];$', text, flags=re.M)
    expected = sorted(
        bx.label.id if hasattr(bx.label, "id") else "?"
        for bx in semantic_doc.diagram.boxes.values()
    )
    assert sorted(rendered) == expected
    assert rendered.count("?") == 1


def test_edges_carry_type_names(scipy_raw):
    text = to_dot(scipy_raw.diagram)
    assert 'label="ndarray"' in text
    assert 'label="str"' in text


def test_values_appended_on_request(scipy_raw):
    plain = to_dot(scipy_raw.diagram)
    valued = to_dot(scipy_raw.diagram, include_values=True)
    assert "iris.csv" not in plain
    assert "'iris.csv'" in valued
    assert "obj-1" in valued


def test_output_is_byte_stable(semantic_doc):
    assert to_dot(semantic_doc.diagram) == to_dot(semantic_doc.diagram)
