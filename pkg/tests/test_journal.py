import json
from datetime import datetime

import numpy as np
import pytest

from refitlab import (
    ChainMismatchError,
    EmbeddingSpace,
    EmbeddingStore,
    Journal,
    NothingToUndoError,
    RefitParams,
    Workbench,
    build_spec,
    refit,
    replay,
    snapshot,
    undo,
    validate_chain,
)
from refitlab.journal import record_refit, record_search
from helpers import random_space


def make_store(seed=101, n=8, d=4):
    rng = np.random.default_rng(seed)
    return EmbeddingStore(random_space(rng, n, d))


def run_refit(store, journal, words, mode="set", target=None, params=None):
    params = params or RefitParams()
    spec = build_spec(mode, words, target=target, params=params)
    outcome = refit(store.current, spec, params)
    space = store.commit(outcome.updates)
    record_refit(journal, spec, params, outcome.updates.base_version, space.version_id)
    return space


class TestAppend:
    def test_ids_start_at_one_and_increase(self):
        journal = Journal()
        first = journal.append("snapshot", 1, 1, {"version": 1})
        second = journal.append("snapshot", 1, 1, {"version": 1})
        assert (first.record_id, second.record_id) == (1, 2)

    def test_timestamps_are_rfc3339_utc(self):
        journal = Journal()
        record = journal.append("snapshot", 1, 1, {})
        parsed = datetime.fromisoformat(record.ts)
        assert parsed.utcoffset().total_seconds() == 0

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Journal().append("sideways", 1, 1, {})

    def test_file_lines_are_json_records(self, tmp_path):
        path = tmp_path / "journal.ndjson"
        journal = Journal(path)
        journal.append("search", 1, 1, {"query": "a", "k": 3})
        journal.append("snapshot", 1, 1, {"version": 1})
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        first = json.loads(lines[0])
        assert set(first) == {"id", "ts", "kind", "base_version", "result_version", "payload"}
        assert first["payload"] == {"query": "a", "k": 3}

    def test_id_continues_after_reload(self, tmp_path):
        path = tmp_path / "journal.ndjson"
        journal = Journal(path)
        journal.append("search", 1, 1, {"query": "a", "k": 1})
        journal.append("search", 1, 1, {"query": "b", "k": 1})

        reloaded = Journal(path)
        assert len(reloaded) == 2
        record = reloaded.append("search", 1, 1, {"query": "c", "k": 1})
        assert record.record_id == 3

    def test_corrupt_line_rejected_on_load(self, tmp_path):
        path = tmp_path / "journal.ndjson"
        path.write_text('{"id": 1, "kind": "search"}\n')
        with pytest.raises(ChainMismatchError):
            Journal(path)

    def test_records_view_is_immutable(self):
        journal = Journal()
        journal.append("snapshot", 1, 1, {})
        view = journal.records
        assert isinstance(view, tuple)
        assert len(journal.records) == 1


class TestUndoAndSnapshot:
    def test_snapshot_pins_current_version(self):
        store = make_store()
        journal = Journal()
        version = snapshot(store, journal, label="before edits")
        assert version == store.current.version_id
        assert journal.records[-1].kind == "snapshot"
        assert journal.records[-1].payload["label"] == "before edits"

    def test_refit_then_undo_restores_previous_version(self):
        store = make_store()
        journal = Journal()
        base_matrix = np.array(store.current.matrix)
        run_refit(store, journal, ["w0", "w1", "w2"])
        assert store.current.version_id == 2
        reverted = undo(store, journal)
        assert reverted == 1
        assert np.array_equal(store.current.matrix, base_matrix)

    def test_undo_is_journaled_not_erased(self):
        store = make_store()
        journal = Journal()
        run_refit(store, journal, ["w0", "w1"])
        undo(store, journal)
        kinds = [r.kind for r in journal.records]
        assert kinds == ["refit", "undo"]
        assert journal.records[-1].payload == {"target_version": 1}

    def test_undo_with_nothing_to_undo(self):
        store = make_store()
        with pytest.raises(NothingToUndoError):
            undo(store, Journal())

    def test_linear_undo_stack(self):
        store = make_store()
        journal = Journal()
        run_refit(store, journal, ["w0", "w1"])          # v2
        run_refit(store, journal, ["w2", "w3", "w4"])    # v3
        assert undo(store, journal) == 2
        assert undo(store, journal) == 1
        with pytest.raises(NothingToUndoError):
            undo(store, journal)


class TestValidateChain:
    def test_valid_chain_passes(self):
        store = make_store()
        journal = Journal()
        record_search(journal, store, "w0", 3)
        run_refit(store, journal, ["w0", "w1"])
        undo(store, journal)
        run_refit(store, journal, ["w2", "w3"])
        validate_chain(journal, base_version=1)

    def test_broken_base_version_detected(self):
        journal = Journal()
        journal.append("refit", 1, 2, {})
        journal.append("refit", 5, 6, {})
        with pytest.raises(ChainMismatchError):
            validate_chain(journal, base_version=1)

    def test_search_must_not_change_version(self):
        journal = Journal()
        journal.append("search", 1, 2, {"query": "a", "k": 1})
        with pytest.raises(ChainMismatchError):
            validate_chain(journal, base_version=1)


class TestReplay:
    def test_empty_journal_returns_base(self):
        store = make_store()
        final = replay(Journal(), store.current)
        assert final is store.current

    def test_replay_reproduces_live_session_exactly(self):
        store = make_store(seed=7)
        journal = Journal()
        record_search(journal, store, "w0", 5)
        run_refit(store, journal, ["w0", "w1", "w2"])
        run_refit(store, journal, ["w3", "w4"], mode="target", target="w3")
        undo(store, journal)
        run_refit(store, journal, ["w1", "w5", "w6"])
        snapshot(store, journal)

        base = store.get(store.base_version)
        final = replay(journal, base)
        assert final.version_id == store.current.version_id
        assert np.array_equal(final.matrix, store.current.matrix)

    def test_redo_by_prefix_replay(self, tmp_path):
        store = make_store(seed=9)
        journal = Journal(tmp_path / "journal.ndjson")
        space_after = run_refit(store, journal, ["w0", "w1", "w2"])
        refit_id = journal.records[-1].record_id
        undo(store, journal)
        assert store.current.version_id == 1

        # the undone refit can be recovered from the journal alone
        reloaded = Journal(tmp_path / "journal.ndjson")
        redone = replay(reloaded, store.get(1), upto=refit_id)
        assert redone.version_id == space_after.version_id
        assert np.array_equal(redone.matrix, space_after.matrix)

    def test_replay_round_trips_through_file(self, tmp_path):
        store = make_store(seed=13)
        journal = Journal(tmp_path / "journal.ndjson")
        run_refit(store, journal, ["w0", "w1"], params=RefitParams(max_sweeps=17, tolerance=3e-9))
        run_refit(store, journal, ["w2", "w3", "w5"])
        final = replay(Journal(tmp_path / "journal.ndjson"), store.get(1))
        assert np.array_equal(final.matrix, store.current.matrix)

    def test_base_version_mismatch_rejected(self):
        store = make_store()
        journal = Journal()
        run_refit(store, journal, ["w0", "w1"])
        wrong_base = EmbeddingSpace(5, store.get(1).words, store.get(1).matrix)
        with pytest.raises(ChainMismatchError):
            replay(journal, wrong_base)

    def test_tampered_result_version_detected(self):
        store = make_store()
        journal = Journal()
        run_refit(store, journal, ["w0", "w1"])
        tampered = [
            r if r.kind != "refit" else type(r)(
                record_id=r.record_id, ts=r.ts, kind=r.kind,
                base_version=r.base_version, result_version=99,
                payload=r.payload,
            )
            for r in journal.records
        ]
        with pytest.raises(ChainMismatchError):
            replay(tampered, store.get(1))

    def test_searches_do_not_execute_on_replay(self):
        store = make_store()
        journal = Journal()
        record_search(journal, store, "w0", 3)
        record_search(journal, store, "w1", 3)
        final = replay(journal, store.current)
        assert final.version_id == store.current.version_id


class TestWorkbenchJournaling:
    def test_every_mutation_appends_exactly_one_record(self):
        store = make_store()
        journal = Journal()
        bench = Workbench(store, journal)
        bench.search("w0", 4)
        assert len(journal) == 1
        bench.refit(mode="set", words=["w0", "w1"], base_version=1)
        assert len(journal) == 2
        bench.undo()
        assert len(journal) == 3
        assert [r.kind for r in journal.records] == ["search", "refit", "undo"]

    def test_refit_payload_carries_full_problem(self):
        store = make_store()
        journal = Journal()
        bench = Workbench(store, journal)
        bench.refit(
            mode="target", words=["w0", "w1", "w2"], target="w1", base_version=1,
            params=RefitParams(max_sweeps=4, tolerance=1e-3),
        )
        payload = journal.records[-1].payload
        assert payload["mode"] == "target"
        assert payload["members"] == ["w0", "w1", "w2"]
        assert payload["target"] == "w1"
        assert payload["max_sweeps"] == 4
        assert payload["tolerance"] == 1e-3
        assert len(payload["edges"]) == len(payload["beta"]) == 2
        assert set(payload["alpha"]) == {"w0", "w1", "w2"}
