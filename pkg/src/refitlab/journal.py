"""Append-only interaction journal with undo and deterministic replay.

On disk the journal is newline-delimited JSON, one record per line:

    {"id": 3, "ts": "2024-05-01T12:00:00.123456+00:00", "kind": "refit",
     "base_version": 1, "result_version": 2, "payload": {...}}

Kinds are ``search``, ``refit``, ``snapshot`` and ``undo``. A refit payload
embeds the full problem (members, target, mode, edges, beta aligned with
edges, alpha, max_sweeps, tolerance) so the action can be re-executed
exactly; floats are written at full precision and round-trip bit-exactly.
Undo appends its own record rather than erasing anything, so the journal is
a complete, analyzable interaction stream.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Mapping

from .errors import ChainMismatchError
from .refit import AttractSpec, RefitParams, refit
from .store import EmbeddingSpace, EmbeddingStore

KINDS = ("search", "refit", "snapshot", "undo")
MUTATING_KINDS = ("refit", "undo")


def _now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class InteractionRecord:
    """One journaled user action."""

    record_id: int
    ts: str
    kind: str
    base_version: int
    result_version: int
    payload: Mapping

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        if self.record_id < 1:
            raise ValueError("record ids start at 1")
        object.__setattr__(self, "payload", dict(self.payload))

    @property
    def mutating(self) -> bool:
        return self.kind in MUTATING_KINDS

    def to_json(self) -> dict:
        return {
            "id": self.record_id,
            "ts": self.ts,
            "kind": self.kind,
            "base_version": self.base_version,
            "result_version": self.result_version,
            "payload": dict(self.payload),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "InteractionRecord":
        return cls(
            record_id=int(obj["id"]),
            ts=str(obj["ts"]),
            kind=str(obj["kind"]),
            base_version=int(obj["base_version"]),
            result_version=int(obj["result_version"]),
            payload=obj.get("payload") or {},
        )


class Journal:
    """Append-only record list, optionally mirrored to an NDJSON file."""

    def __init__(self, path: str | os.PathLike | None = None):
        self._path = os.fspath(path) if path is not None else None
        self._records: list[InteractionRecord] = []
        if self._path is not None and os.path.exists(self._path):
            self._load(self._path)

    def _load(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = InteractionRecord.from_json(json.loads(line))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise ChainMismatchError(
                        f"journal line {lineno} is not a valid record: {exc}"
                    ) from None
                if self._records and record.record_id <= self._records[-1].record_id:
                    raise ChainMismatchError(
                        f"journal line {lineno}: record ids must increase"
                    )
                self._records.append(record)

    @property
    def path(self) -> str | None:
        return self._path

    @property
    def records(self) -> tuple[InteractionRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def next_id(self) -> int:
        return self._records[-1].record_id + 1 if self._records else 1

    def append(
        self,
        kind: str,
        base_version: int,
        result_version: int,
        payload: Mapping,
        ts: str | None = None,
    ) -> InteractionRecord:
        """Append one record, assign its id, and flush it to disk if backed."""
        record = InteractionRecord(
            record_id=self.next_id(),
            ts=ts or _now_rfc3339(),
            kind=kind,
            base_version=base_version,
            result_version=result_version,
            payload=payload,
        )
        if self._path is not None:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        self._records.append(record)
        return record


def validate_chain(journal: Journal | Iterable[InteractionRecord], base_version: int) -> None:
    """Check that every record's base version continues the version chain."""
    records = journal.records if isinstance(journal, Journal) else tuple(journal)
    current = base_version
    for record in records:
        if record.base_version != current:
            raise ChainMismatchError(
                f"record {record.record_id} is based on version "
                f"{record.base_version}, expected {current}"
            )
        if record.mutating:
            current = record.result_version
        elif record.result_version != record.base_version:
            raise ChainMismatchError(
                f"record {record.record_id} ({record.kind}) must not change the version"
            )


def record_search(journal: Journal, store: EmbeddingStore, query: str, k: int) -> InteractionRecord:
    version = store.current.version_id
    return journal.append(
        kind="search",
        base_version=version,
        result_version=version,
        payload={"query": query, "k": k},
    )


def snapshot(store: EmbeddingStore, journal: Journal, label: str | None = None) -> int:
    """Pin the current version in the journal; returns that version id."""
    version = store.current.version_id
    payload: dict = {"version": version}
    if label:
        payload["label"] = label
    journal.append(kind="snapshot", base_version=version, result_version=version, payload=payload)
    return version


def undo(store: EmbeddingStore, journal: Journal) -> int:
    """Revert the store to the previous version and journal the reversal."""
    with store.lock:
        base = store.current.version_id
        reverted = store.undo().version_id
        journal.append(
            kind="undo",
            base_version=base,
            result_version=reverted,
            payload={"target_version": reverted},
        )
        return reverted


def record_refit(journal: Journal, spec: AttractSpec, params: RefitParams,
                 base_version: int, result_version: int) -> InteractionRecord:
    payload = spec.to_payload()
    payload["max_sweeps"] = params.max_sweeps
    payload["tolerance"] = params.tolerance
    return journal.append(
        kind="refit",
        base_version=base_version,
        result_version=result_version,
        payload=payload,
    )


def replay(
    journal: Journal | Iterable[InteractionRecord],
    base: EmbeddingSpace,
    upto: int | None = None,
) -> EmbeddingSpace:
    """Re-execute a journal's refits and undos against a base space.

    ``upto`` (a record id) limits replay to the journal prefix ending at
    that record; by default the whole journal is replayed. The result is
    component-exact with the live session that produced the journal. Any
    disagreement between the journal's version chain and the store raises
    :class:`ChainMismatchError`.
    """
    records = journal.records if isinstance(journal, Journal) else tuple(journal)
    if records and records[0].base_version != base.version_id:
        raise ChainMismatchError(
            f"journal starts at version {records[0].base_version}, "
            f"base space is version {base.version_id}"
        )
    store = EmbeddingStore(base)
    for record in records:
        if upto is not None and record.record_id > upto:
            break
        current = store.current.version_id
        if record.base_version != current:
            raise ChainMismatchError(
                f"record {record.record_id} is based on version "
                f"{record.base_version}, expected {current}"
            )
        if record.kind == "refit":
            spec = AttractSpec.from_payload(record.payload)
            params = RefitParams(
                max_sweeps=int(record.payload["max_sweeps"]),
                tolerance=float(record.payload["tolerance"]),
            )
            outcome = refit(store.current, spec, params)
            new_space = store.commit(outcome.updates)
            if new_space.version_id != record.result_version:
                raise ChainMismatchError(
                    f"record {record.record_id} produced version "
                    f"{new_space.version_id}, journal says {record.result_version}"
                )
        elif record.kind == "undo":
            reverted = store.undo().version_id
            if reverted != record.result_version:
                raise ChainMismatchError(
                    f"record {record.record_id} undid to version {reverted}, "
                    f"journal says {record.result_version}"
                )
        # search / snapshot records carry no state change; the base check
        # above already validated them against the chain.
    return store.current


__all__ = [
    "InteractionRecord",
    "Journal",
    "validate_chain",
    "record_search",
    "record_refit",
    "snapshot",
    "undo",
    "replay",
]
