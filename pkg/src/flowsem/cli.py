"""Batch command-line surface.

Exit codes: 0 success, 1 domain failure (validation errors, enrichment
failure, non-equivalence), 2 usage/IO/parse failure. Reports go to
standard output, diagnostics to standard error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .dot import to_dot
from .elaborate import elaborate
from .enrich import EnrichmentConfig, enrich
from .errors import FlowsemError, ParseError, SchemaError
from .flowgraph import FlowGraphDocument, read_flowgraph, write_flowgraph
from .ontology import parse_ontology_document, serialize_ontology, validate_presentation
from .terms import parse_term

ONTOLOGY_ENV = "FLOWSEM_ONTOLOGY"


class UsageError(Exception):
    pass


def _load_ontology(path: str | None):
    if path is None:
        raise UsageError(
            f"no ontology given: pass --ontology or set {ONTOLOGY_ENV}"
        )
    return parse_ontology_document(Path(path).read_text(encoding="utf-8"))


def _load_validated_ontology(path: str | None):
    ontology = _load_ontology(path)
    report = validate_presentation(ontology)
    if not report.ok:
        raise FlowsemError(
            f"ontology {path} has {len(report.errors)} validation errors; "
            "run the validate subcommand for details"
        )
    return ontology


def _load_document(path: str) -> FlowGraphDocument:
    return read_flowgraph(Path(path).read_text(encoding="utf-8"))


def _cmd_validate(args) -> int:
    ontology = _load_ontology(args.ontology)
    report = validate_presentation(ontology)
    print(report.format())
    return 0 if report.ok else 1


def _cmd_enrich(args) -> int:
    ontology = _load_validated_ontology(args.ontology)
    doc = _load_document(args.raw)
    if doc.kind != "raw":
        raise UsageError(f"{args.raw} is a {doc.kind} document; enrich expects raw")
    cfg = EnrichmentConfig(mode="strict" if args.strict else "lenient")
    semantic, report = enrich(doc.diagram, ontology, cfg)
    if args.no_meta:
        metadata = {}
    else:
        metadata = dict(doc.metadata)
        metadata["ontology_id"] = Path(args.ontology).stem
        metadata["ontology_hash"] = (
            "sha256:" + hashlib.sha256(serialize_ontology(ontology).encode()).hexdigest()
        )
    out = FlowGraphDocument("semantic", semantic, metadata)
    Path(args.output).write_text(write_flowgraph(out), encoding="utf-8")
    if args.report:
        Path(args.report).write_text(
            json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return 0


def _cmd_elaborate(args) -> int:
    ontology = _load_validated_ontology(args.ontology)
    diagram = elaborate(parse_term(args.term), ontology)
    rendered = to_dot(diagram)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return 0


def _cmd_equiv(args) -> int:
    from .diagram import equivalent

    left, right = _load_document(args.left), _load_document(args.right)
    if left.kind != right.kind:
        raise UsageError(
            f"cannot compare a {left.kind} document with a {right.kind} document"
        )
    if equivalent(left.diagram, right.diagram):
        print("equivalent")
        return 0
    print("not equivalent")
    return 1


def _cmd_export_dot(args) -> int:
    doc = _load_document(args.document)
    rendered = to_dot(doc.diagram, include_values=args.values)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowsem",
        description="Enrich raw dataflow graphs into semantic flow graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    env_default = os.environ.get(ONTOLOGY_ENV)

    p = sub.add_parser("validate", help="validate an ontology document")
    p.add_argument("ontology", nargs="?", default=env_default)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("enrich", help="enrich a raw flow graph")
    p.add_argument("--ontology", default=env_default)
    p.add_argument("--raw", required=True)
    p.add_argument("-o", "--output", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true")
    mode.add_argument("--lenient", action="store_true")
    p.add_argument("--report")
    p.add_argument("--no-meta", action="store_true")
    p.set_defaults(func=_cmd_enrich)

    p = sub.add_parser("elaborate", help="elaborate a term and render it")
    p.add_argument("--ontology", default=env_default)
    p.add_argument("--term", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_elaborate)

    p = sub.add_parser("equiv", help="decide equivalence of two documents")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("export-dot", help="render a flow-graph document as DOT")
    p.add_argument("document")
    p.add_argument("-o", "--output")
    p.add_argument("--values", action="store_true")
    p.set_defaults(func=_cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FlowsemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
