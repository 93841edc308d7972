"""Object provenance tracking backed by weak references.

The table maps live objects to the box output port that produced them.
Entries are keyed by object identity but guarded by a weak reference:
when an object is reclaimed its entry is purged by the weakref callback,
so a later object that happens to reuse the same identity can never
inherit stale provenance. Lookups compare the referent by identity and
never resurrect objects.

Objects that do not support weak references (plain ints, strings, lists,
dicts, tuples) are not tracked; their dataflow shows up as fresh outer
inputs instead of inter-box wires.
"""
from __future__ import annotations

import weakref


class ProvenanceTable:
    def __init__(self) -> None:
        self._entries: dict[int, tuple[weakref.ref, str | None, int, str]] = {}
        self._counter = 0

    def __len__(self) -> int:
        return len(self._entries)

    def _fresh_id(self) -> str:
        self._counter += 1
        return f"obj-{self._counter}"

    def _store(self, obj, box_id: str | None, port: int) -> str | None:
        key = id(obj)

        def purge(_ref, key=key):
            self._entries.pop(key, None)

        try:
            ref = weakref.ref(obj, purge)
        except TypeError:
            return None
        previous = self._entries.get(key)
        ref_id = (
            previous[3]
            if previous is not None and previous[0]() is obj
            else self._fresh_id()
        )
        self._entries[key] = (ref, box_id, port, ref_id)
        return ref_id

    def register(self, obj, box_id: str, port: int) -> str | None:
        """Record that (box_id, port) produced obj; returns the stable
        reference id, or None when the object cannot be weakly referenced.
        Re-registering a live object keeps its id and moves its producer."""
        return self._store(obj, box_id, port)

    def observe(self, obj) -> str | None:
        """Assign (or recall) a stable reference id without claiming any
        producer; used for objects that enter from outside the trace."""
        hit = self._entries.get(id(obj))
        if hit is not None and hit[0]() is obj:
            return hit[3]
        return self._store(obj, None, 0)

    def lookup(self, obj) -> tuple[str, int, str] | None:
        """Return (box_id, port, ref_id) if obj was produced by a traced
        call and is the same live object that was registered."""
        entry = self._entries.get(id(obj))
        if entry is None:
            return None
        ref, box_id, port, ref_id = entry
        if ref() is not obj or box_id is None:
            return None
        return (box_id, port, ref_id)

    def ref_id(self, obj) -> str | None:
        entry = self._entries.get(id(obj))
        if entry is None or entry[0]() is not obj:
            return None
        return entry[3]
