from pathlib import Path

import pytest

STUBS = Path(__file__).resolve().parent / "stubs"


@pytest.fixture()
def stubs_dir() -> Path:
    return STUBS


def assert_well_formed(doc: dict) -> None:
    """Local schema sanity check: single fan-in per input port, endpoint
    validity, acyclicity (kept independent of the enrichment toolchain)."""
    assert doc["version"] == 1 and doc["kind"] == "raw"
    boxes = {b["id"]: b for b in doc["boxes"]}
    incoming: dict[tuple[str, int], int] = {}
    edges: dict[str, set[str]] = {b: set() for b in boxes}
    for wire in doc["wires"]:
        src, dst = tuple(wire["src"]), tuple(wire["dst"])
        if src[0] == "@outer":
            assert src[1] < len(doc["outer_in"])
        else:
            assert src[1] < len(boxes[src[0]]["out_ports"])
        if dst[0] == "@outer":
            assert dst[1] < len(doc["outer_out"])
        else:
            assert dst[1] < len(boxes[dst[0]]["in_ports"])
        incoming[dst] = incoming.get(dst, 0) + 1
        if src[0] != "@outer" and dst[0] != "@outer":
            edges[src[0]].add(dst[0])
    for box_id, box in boxes.items():
        assert len(box["in_slots"]) == len(box["in_ports"])
        assert len(box["out_slots"]) == len(box["out_ports"])
        for port in range(len(box["in_ports"])):
            assert incoming.get((box_id, port), 0) == 1, (box_id, port)
    for port in range(len(doc["outer_out"])):
        assert incoming.get(("@outer", port), 0) == 1
    # Kahn
    indegree = {b: 0 for b in boxes}
    for src, dsts in edges.items():
        for dst in dsts:
            indegree[dst] += 1
    ready = [b for b, n in indegree.items() if n == 0]
    seen = 0
    while ready:
        seen += 1
        current = ready.pop()
        for dst in edges[current]:
            indegree[dst] -= 1
            if indegree[dst] == 0:
                ready.append(dst)
    assert seen == len(boxes), "cycle in emitted document"
