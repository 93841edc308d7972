from pathlib import Path

import pytest

from flowsem import parse_ontology_document, read_flowgraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def mini_ontology():
    return parse_ontology_document((FIXTURES / "mini_dso.json").read_text(encoding="utf-8"))


def load_doc(name: str):
    return read_flowgraph((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def scipy_raw():
    return load_doc("kmeans_scipy_raw.json")


@pytest.fixture(scope="session")
def sklearn_raw():
    return load_doc("kmeans_sklearn_raw.json")


@pytest.fixture(scope="session")
def r_raw():
    return load_doc("kmeans_r_raw.json")


@pytest.fixture(scope="session")
def semantic_doc():
    return load_doc("kmeans_semantic.json")
