"""Session orchestration and wire payloads shared by the service and CLI.

A :class:`Workbench` owns one store and one journal and funnels every
mutating interaction through the store's writer lock, so optimistic
concurrency (a stale ``base_version`` is rejected, never silently refit)
holds even with concurrent callers. Payload builders live here so the CLI
and the HTTP service emit byte-identical JSON for the same inputs.

Numbers in presentation payloads are rounded to 9 significant digits;
journal records pass through untouched because their floats must replay
bit-exactly.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from . import journal as journal_mod
from . import projection as projection_mod
from . import similarity
from .errors import VersionConflictError
from .journal import Journal
from .refit import AttractSpec, RefitOutcome, RefitParams, build_spec, refit
from .store import EmbeddingSpace, EmbeddingStore


def round_floats(obj, digits: int = 9):
    """Recursively round floats to ``digits`` significant decimal digits."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def to_json_bytes(payload) -> bytes:
    """Canonical JSON encoding used on every HTTP and CLI surface."""
    return json.dumps(
        payload, ensure_ascii=False, allow_nan=False, separators=(",", ":")
    ).encode("utf-8")


def params_from_payload(payload: Mapping | None) -> RefitParams:
    """Build solver params from a request's optional ``params`` object."""
    if payload is None:
        return RefitParams()
    if not isinstance(payload, Mapping):
        raise ValueError("params must be an object")
    allowed = {"max_sweeps", "tolerance", "alpha", "beta_scheme", "beta"}
    unknown = set(payload) - allowed
    if unknown:
        raise ValueError(f"unknown params fields: {sorted(unknown)}")
    kwargs = {}
    if "max_sweeps" in payload:
        kwargs["max_sweeps"] = int(payload["max_sweeps"])
    if "tolerance" in payload:
        kwargs["tolerance"] = float(payload["tolerance"])
    if "alpha" in payload:
        kwargs["alpha_default"] = float(payload["alpha"])
    if "beta_scheme" in payload:
        kwargs["beta_scheme"] = str(payload["beta_scheme"])
    if "beta" in payload:
        kwargs["beta_value"] = float(payload["beta"])
    return RefitParams(**kwargs)


def search_payload(space: EmbeddingSpace, result: similarity.SearchResult) -> dict:
    return round_floats(
        {
            "query": result.query,
            "version": space.version_id,
            "hits": [{"word": w, "score": s} for w, s in result.hits],
        }
    )


def refit_payload(outcome: RefitOutcome, spec: AttractSpec, result_version: int) -> dict:
    return round_floats(
        {
            "version": result_version,
            "base_version": outcome.updates.base_version,
            "mode": spec.mode.value,
            "members": list(spec.members),
            "sweeps_executed": outcome.sweeps_executed,
            "converged": outcome.converged,
            "objective_trace": list(outcome.objective_trace),
            "displacement": {w: outcome.displacement[w] for w in spec.members},
            "distance_before": outcome.distance_before.to_payload(),
            "distance_after": outcome.distance_after.to_payload(),
        }
    )


def distances_payload(report: similarity.DistanceReport) -> dict:
    return round_floats(report.to_payload())


def projection_payload(
    frame: projection_mod.Projection2D,
    version: int,
    baseline: projection_mod.Projection2D | None = None,
    baseline_version: int | None = None,
) -> dict:
    payload = frame.to_payload()
    payload["version"] = version
    if baseline is not None:
        payload["baseline_coords"] = baseline.to_payload()["coords"]
        payload["baseline_version"] = baseline_version
    return round_floats(payload)


def meta_payload(space: EmbeddingSpace) -> dict:
    return {
        "version": space.version_id,
        "vocab_size": len(space),
        "dim": space.dim,
    }


class Workbench:
    """Store + journal glued into the interactive operation set."""

    def __init__(self, store: EmbeddingStore, journal: Journal):
        self.store = store
        self.journal = journal

    # -- read side ----------------------------------------------------------

    def meta(self) -> dict:
        return meta_payload(self.store.current)

    def space_at(self, version: int | None) -> EmbeddingSpace:
        if version is None:
            return self.store.current
        return self.store.get(version)

    def distances(self, words: Sequence[str], version: int | None = None) -> dict:
        report = similarity.distance_report(self.space_at(version), words)
        return distances_payload(report)

    def project(
        self,
        words: Sequence[str],
        version: int | None = None,
        baseline_version: int | None = None,
    ) -> dict:
        """Project words at one version, optionally with a shared-basis
        baseline frame from another version (for before/after overlays)."""
        words = list(words)
        if not words:
            raise ValueError("project needs at least one word")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in projection request")
        space = self.space_at(version)
        vectors = [space.vector(w) for w in words]
        if baseline_version is None:
            frame = projection_mod.pca_2d(vectors, words=words)
            return projection_payload(frame, space.version_id)
        base_space = self.space_at(baseline_version)
        base_vectors = [base_space.vector(w) for w in words]
        base_frame, frame = projection_mod.joint_projection(
            base_vectors, vectors, words=words
        )
        return projection_payload(
            frame, space.version_id, baseline=base_frame,
            baseline_version=base_space.version_id,
        )

    def journal_payload(self) -> dict:
        return {"records": [r.to_json() for r in self.journal.records]}

    # -- mutating side (serialized by the store's writer lock) ---------------

    def search(self, query: str, k: int) -> dict:
        with self.store.lock:
            space = self.store.current
            result = similarity.top_k(space, query, k)
            journal_mod.record_search(self.journal, self.store, query, k)
            return search_payload(space, result)

    def refit(
        self,
        mode: str,
        words: Sequence[str],
        base_version: int,
        target: str | None = None,
        params: RefitParams | None = None,
    ) -> dict:
        params = params or RefitParams()
        spec = build_spec(mode, words, target=target, params=params)
        with self.store.lock:
            current = self.store.current
            if base_version != current.version_id:
                raise VersionConflictError(
                    expected=current.version_id, actual=base_version
                )
            outcome = refit(current, spec, params)
            new_space = self.store.commit(outcome.updates)
            journal_mod.record_refit(
                self.journal, spec, params, current.version_id, new_space.version_id
            )
            return refit_payload(outcome, spec, new_space.version_id)

    def undo(self) -> dict:
        with self.store.lock:
            version = journal_mod.undo(self.store, self.journal)
            return {"version": version}
