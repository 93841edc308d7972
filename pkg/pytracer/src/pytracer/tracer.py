"""Dynamic dataflow tracing for Python scripts.

Runs a script under sys.settrace and records one box per outermost call
into an include-listed package. Arguments produced by earlier traced
calls are wired from the provenance table; everything else enters from a
fresh outer input. Return values (and tuple elements) register new
provenance; shallow attribute mutation of the receiver or an argument
re-registers the object as an extra output of the call.

Port convention: receiver first, then required positional parameters in
signature order (slots "0", "1", ...), then *args elements ("*0", ...),
then explicitly passed defaulted/keyword parameters sorted by name.
Whether a defaulted parameter was passed is decided by comparing its
bound value against the default by identity, so passing a default value
explicitly is invisible. Deep mutations below one attribute level are
not detected.

Two conventions keep real libraries tractable: single-underscore-private
functions never become boxes (they are implementation details that can
surface at the top level through C trampolines such as numpy's array
function dispatch), and a box is named after the bound function object
rather than the code object, so functools.wraps decorators report the
wrapped function's name.
"""
from __future__ import annotations

import datetime
import gc
import sys
import threading
import types
from dataclasses import dataclass, field
from pathlib import Path

from .document import (
    BoxSpec,
    PortSpec,
    RawDocument,
    WireSpec,
    literal_value,
    port_for_value,
    ref_value,
)
from .provenance import ProvenanceTable

LITERAL_TYPES = (int, float, bool, str)
STRING_CAP = 120
VALUE_MODES = ("literals-only", "none")


class TraceError(Exception):
    pass


@dataclass
class TraceConfig:
    script: Path
    include_packages: list[str]
    output: Path | None = None
    value_capture: str = "literals-only"
    record_nested: bool = False

    def __post_init__(self):
        self.script = Path(self.script)
        if not self.include_packages:
            raise TraceError("include list must not be empty; tracing everything is refused")
        if self.value_capture not in VALUE_MODES:
            raise TraceError(f"unknown value_capture mode {self.value_capture!r}")


def snapshot(obj) -> dict[str, int] | None:
    """Depth-1 attribute snapshot: attribute name -> value identity."""
    try:
        attrs = vars(obj)
    except TypeError:
        return None
    return {name: id(value) for name, value in attrs.items()}


def detect_mutation(before: dict | None, after: dict | None) -> bool:
    """True when an attribute was added, removed, or rebound in place."""
    if before is None or after is None:
        return False
    return before != after


def _function_for_frame(frame) -> types.FunctionType | None:
    """Find the function object a frame is executing.

    Code objects are shared by every closure a decorator factory makes, so
    candidates are disambiguated by matching the frame's free variables
    against each candidate's closure cells."""
    code = frame.f_code
    candidates = [
        r
        for r in gc.get_referrers(code)
        if isinstance(r, types.FunctionType) and r.__code__ is code
    ]
    if len(candidates) <= 1:
        return candidates[0] if candidates else None
    free = code.co_freevars
    for fn in candidates:
        cells = fn.__closure__ or ()
        try:
            if len(cells) == len(free) and all(
                cell.cell_contents is frame.f_locals.get(name)
                for name, cell in zip(free, cells)
            ):
                return fn
        except ValueError:  # unfilled cell
            continue
    return candidates[0]


def _is_private(name: str) -> bool:
    return name.startswith("_") and not (name.startswith("__") and name.endswith("__"))


def observe(value, table: ProvenanceTable, mode: str = "literals-only") -> dict | None:
    """Literals under the size cap become literal values; everything else
    gets a stable reference id from the provenance table (None when the
    object cannot be weakly referenced)."""
    if mode == "none":
        return None
    if value is None or isinstance(value, (bool, int, float)):
        return literal_value(value)
    if isinstance(value, str) and len(value) <= STRING_CAP:
        return literal_value(value)
    ref_id = table.observe(value)
    return ref_value(ref_id) if ref_id else None


@dataclass
class _Call:
    box_id: str
    package: str
    qualified_name: str
    kind: str
    resolution_list: list[tuple[str, str]]
    args: list[tuple[str, object]]  # (slot, value) in port order
    receiver: object | None = None
    watched: list[tuple[str, object, dict | None]] = field(default_factory=list)


class Tracer:
    def __init__(self, cfg: TraceConfig):
        self.cfg = cfg
        self.provenance = ProvenanceTable()
        self.boxes: list[BoxSpec] = []
        self.wires: list[WireSpec] = []
        self.outer_in: list[PortSpec] = []
        self.outer_in_wires: list[WireSpec] = []
        self.out_values: dict[tuple[str, int], dict | None] = {}
        self.out_ports: list[tuple[str, int, PortSpec]] = []
        self.consumed: set[tuple[str, int]] = set()
        self._frames: dict[int, _Call | None] = {}
        self._included_depth = 0
        self._saw_thread = False
        self._counter = 0

    # -- include matching ------------------------------------------------

    def _included(self, module: str) -> bool:
        return any(
            module == p or module.startswith(p + ".") for p in self.cfg.include_packages
        )

    # -- call capture ----------------------------------------------------

    def _global_trace(self, frame, event, arg):
        if event != "call":
            return None
        module = frame.f_globals.get("__name__") or ""
        if not self._included(module):
            return None
        record = None
        if not frame.f_code.co_name.startswith("<") and (
            self._included_depth == 0 or self.cfg.record_nested
        ):
            record = self._begin_call(frame, module)
        self._frames[id(frame)] = record
        self._included_depth += 1
        return self._local_trace

    def _local_trace(self, frame, event, arg):
        if event == "return":
            key = id(frame)
            if key in self._frames:
                record = self._frames.pop(key)
                self._included_depth -= 1
                if record is not None:
                    self._finish_call(record, arg)
        return self._local_trace

    def _begin_call(self, frame, module: str) -> _Call | None:
        code = frame.f_code
        fn = _function_for_frame(frame)
        func_name = fn.__name__ if fn is not None else code.co_name
        if _is_private(func_name):
            return None
        bound = dict(frame.f_locals)
        names = list(code.co_varnames[: code.co_argcount])
        kwonly = list(
            code.co_varnames[code.co_argcount : code.co_argcount + code.co_kwonlyargcount]
        )
        defaults = fn.__defaults__ or () if fn else ()
        kwdefaults = fn.__kwdefaults__ or {} if fn else {}

        receiver = None
        if names and names[0] == "self" and names[0] in bound:
            receiver = bound["self"]
        positional = names[1:] if receiver is not None else names

        kind, qualified_name, package, resolution = self._classify(
            code, fn, func_name, module, receiver
        )

        first_defaulted = len(positional) - len(defaults)
        args: list[tuple[str, object]] = []
        if receiver is not None and kind != "constructor":
            args.append(("self", receiver))
        named: list[tuple[str, object]] = []
        for index, name in enumerate(positional):
            if name not in bound:
                continue
            if index < first_defaulted:
                args.append((str(index), bound[name]))
            elif bound[name] is not defaults[index - first_defaulted]:
                named.append((name, bound[name]))
        if code.co_flags & 0x04:  # CO_VARARGS
            star = code.co_varnames[code.co_argcount + code.co_kwonlyargcount]
            for index, value in enumerate(bound.get(star, ())):
                args.append((f"*{index}", value))
        for name in kwonly:
            if name in bound and bound[name] is not kwdefaults.get(name):
                named.append((name, bound[name]))
        args.extend(sorted(named, key=lambda pair: pair[0]))

        self._counter += 1
        record = _Call(
            f"b{self._counter - 1}", package, qualified_name, kind, resolution, args,
            receiver,
        )
        if receiver is not None and kind != "constructor":
            record.watched.append(("self", receiver, snapshot(receiver)))
        for slot, value in args:
            if slot != "self":
                record.watched.append((slot, value, snapshot(value)))
        return record

    def _classify(self, code, fn, name: str, module: str, receiver):
        if receiver is None:
            qualified = fn.__qualname__ if fn is not None else name
            package = (fn.__module__ or module) if fn is not None else module
            return "function", qualified, package, [(package, qualified)]
        mro = [c for c in type(receiver).__mro__ if c is not object]
        kind = "method"
        if name == "__init__":
            kind = "constructor"
            resolution = [
                (c.__module__, c.__qualname__) for c in mro if "__init__" in vars(c)
            ]
            if not resolution:
                resolution = [(module, type(receiver).__qualname__)]
            return kind, resolution[0][1], resolution[0][0], resolution
        for c in mro:
            attr = vars(c).get(name)
            if isinstance(attr, property):
                if attr.fget is not None and getattr(attr.fget, "__code__", None) is code:
                    kind = "getter"
                elif attr.fset is not None and getattr(attr.fset, "__code__", None) is code:
                    kind = "setter"
                break
        resolution = [
            (c.__module__, f"{c.__qualname__}.{name}") for c in mro if name in vars(c)
        ]
        if not resolution:
            resolution = [(module, f"{type(receiver).__qualname__}.{name}")]
        return kind, resolution[0][1], resolution[0][0], resolution

    # -- values -----------------------------------------------------------

    def _observe(self, value) -> dict | None:
        return observe(value, self.provenance, self.cfg.value_capture)

    # -- box assembly -------------------------------------------------------

    def _finish_call(self, record: _Call, return_value):
        box = BoxSpec(
            record.box_id,
            record.package,
            record.qualified_name,
            record.kind,
            record.resolution_list,
        )
        for slot, value in record.args:
            port = len(box.in_ports)
            box.in_ports.append(port_for_value(value))
            box.in_slots.append(slot)
            hit = self.provenance.lookup(value)
            if hit is not None:
                src_box, src_port, ref_id = hit
                self.consumed.add((src_box, src_port))
                wire_value = None if self.cfg.value_capture == "none" else ref_value(ref_id)
                self.wires.append(
                    WireSpec((src_box, src_port), (record.box_id, port), wire_value)
                )
            else:
                outer_index = len(self.outer_in)
                self.outer_in.append(port_for_value(value))
                self.outer_in_wires.append(
                    WireSpec(
                        ("@outer", outer_index),
                        (record.box_id, port),
                        self._observe(value),
                    )
                )

        def add_output(slot: str, value) -> None:
            port = len(box.out_ports)
            box.out_ports.append(port_for_value(value))
            box.out_slots.append(slot)
            self.provenance.register(value, record.box_id, port)
            self.out_values[(record.box_id, port)] = self._observe(value)
            self.out_ports.append((record.box_id, port, box.out_ports[-1]))

        if record.kind == "constructor":
            add_output("return", record.receiver)
        elif isinstance(return_value, tuple):
            for index, element in enumerate(return_value):
                add_output(f"return.{index}", element)
        elif return_value is not None:
            add_output("return", return_value)
        for slot, value, before in record.watched:
            if detect_mutation(before, snapshot(value)):
                add_output("self!" if slot == "self" else f"arg_{slot}!", value)
        self.boxes.append(box)

    # -- driving the script ---------------------------------------------------

    def run(self) -> RawDocument:
        script = self.cfg.script
        source = script.read_text(encoding="utf-8")
        code = compile(source, str(script), "exec")
        namespace = {"__name__": "__main__", "__file__": str(script)}
        script_dir = str(script.resolve().parent)
        sys.path.insert(0, script_dir)

        def thread_hook(*_args):
            self._saw_thread = True
            return None

        threading.settrace(thread_hook)
        sys.settrace(self._global_trace)
        try:
            exec(code, namespace)
        except Exception as exc:
            raise TraceError(f"traced script raised {type(exc).__name__}: {exc}") from exc
        finally:
            sys.settrace(None)
            threading.settrace(None)  # type: ignore[arg-type]
            if sys.path and sys.path[0] == script_dir:
                sys.path.pop(0)
        if self._saw_thread:
            raise TraceError("traced script started threads; multithreaded tracing is unsupported")
        return self._document()

    def _document(self) -> RawDocument:
        outer_out: list[PortSpec] = []
        wires = self.outer_in_wires + self.wires
        tail: list[WireSpec] = []
        for box_id, port, spec in self.out_ports:
            if (box_id, port) in self.consumed:
                continue
            index = len(outer_out)
            outer_out.append(spec)
            tail.append(
                WireSpec((box_id, port), ("@outer", index), self.out_values[(box_id, port)])
            )
        metadata = {
            "script": str(self.cfg.script),
            "language": "python",
            "include": list(self.cfg.include_packages),
            "traced_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "port_convention": (
                "receiver, required positionals by index, *args elements, "
                "then passed keyword parameters sorted by name"
            ),
        }
        return RawDocument(metadata, self.boxes, wires + tail, self.outer_in, outer_out)


def trace_script(cfg: TraceConfig) -> RawDocument:
    """Trace the configured script and return (and optionally write) the
    raw flow-graph document."""
    document = Tracer(cfg).run()
    if cfg.output is not None:
        Path(cfg.output).write_text(document.dumps(), encoding="utf-8")
    return document
