import json

import numpy as np
import pytest
from starlette.testclient import TestClient

from refitlab import EmbeddingStore, Journal, Workbench, load_path, save_path
from refitlab.cli import main
from refitlab.service import create_app
from helpers import random_space

TOY = "2 1\nu 0.000000\nv 2.000000\n"


@pytest.fixture()
def toy_file(tmp_path):
    path = tmp_path / "toy.txt"
    path.write_text(TOY)
    return str(path)


@pytest.fixture()
def space_file(tmp_path):
    rng = np.random.default_rng(307)
    path = tmp_path / "space.txt"
    save_path(random_space(rng, 10, 4), path)
    return str(path)


class TestSearchCommand:
    def test_table_output(self, space_file, capsys):
        assert main(["search", "--embeddings", space_file, "--query", "w0", "--k", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3

    def test_k_zero_prints_nothing_and_succeeds(self, space_file, capsys):
        assert main(["search", "--embeddings", space_file, "--query", "w0", "--k", "0"]) == 0
        assert capsys.readouterr().out == ""

    def test_json_matches_service_response(self, space_file, capsys):
        assert main(["search", "--embeddings", space_file, "--query", "w0",
                     "--k", "4", "--json"]) == 0
        cli_payload = capsys.readouterr().out

        space = load_path(space_file)
        client = TestClient(create_app(Workbench(EmbeddingStore(space), Journal())))
        response = client.get("/api/v1/search", params={"q": "w0", "k": 4})
        assert cli_payload.encode() == response.content + b"\n"

    def test_oov_query_exits_3(self, space_file, capsys):
        assert main(["search", "--embeddings", space_file, "--query", "zzz"]) == 3
        assert "vocabulary" in capsys.readouterr().err

    def test_malformed_file_exits_3(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 2\na 1.0\n")
        assert main(["search", "--embeddings", str(bad), "--query", "a"]) == 3

    def test_negative_k_is_usage_error(self, space_file):
        with pytest.raises(SystemExit) as err:
            main(["search", "--embeddings", space_file, "--query", "w0", "--k", "-1"])
        assert err.value.code == 2


class TestRefitCommand:
    def test_toy_clique_output_file(self, toy_file, tmp_path, capsys):
        out = tmp_path / "refit.txt"
        code = main([
            "refit", "--embeddings", toy_file, "--mode", "set", "--words", "u,v",
            "--sweeps", "60", "--tolerance", "1e-12", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "2 1"
        assert lines[1] == "u 0.666667"
        assert lines[2] == "v 1.333333"

    def test_json_report_byte_identical_to_service(self, space_file, capsys):
        argv = [
            "refit", "--embeddings", space_file, "--mode", "target",
            "--words", "w0,w3,w5", "--target", "w3", "--json",
        ]
        assert main(argv) == 0
        cli_payload = capsys.readouterr().out

        space = load_path(space_file)
        client = TestClient(create_app(Workbench(EmbeddingStore(space), Journal())))
        response = client.post(
            "/api/v1/refit",
            json={"mode": "target", "words": ["w0", "w3", "w5"],
                  "target": "w3", "base_version": 1},
        )
        assert response.status_code == 200
        assert cli_payload.encode() == response.content + b"\n"

    def test_human_summary(self, toy_file, capsys):
        assert main(["refit", "--embeddings", toy_file, "--mode", "set",
                     "--words", "u,v"]) == 0
        out = capsys.readouterr().out
        assert "refit set" in out
        assert "u" in out and "v" in out

    def test_target_required_for_target_mode(self, toy_file):
        with pytest.raises(SystemExit) as err:
            main(["refit", "--embeddings", toy_file, "--mode", "target",
                  "--words", "u,v"])
        assert err.value.code == 2

    def test_target_rejected_in_set_mode(self, toy_file):
        with pytest.raises(SystemExit) as err:
            main(["refit", "--embeddings", toy_file, "--mode", "set",
                  "--words", "u,v", "--target", "u"])
        assert err.value.code == 2

    def test_duplicate_words_usage_error(self, toy_file):
        assert main(["refit", "--embeddings", toy_file, "--mode", "set",
                     "--words", "u,u"]) == 2

    def test_oov_word_exits_3(self, toy_file):
        assert main(["refit", "--embeddings", toy_file, "--mode", "set",
                     "--words", "u,zzz"]) == 3


class TestDistancesCommand:
    def test_json_output(self, toy_file, capsys):
        assert main(["distances", "--embeddings", toy_file, "--words", "u,v",
                     "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["words"] == ["u", "v"]
        assert payload["euclidean"][0][1] == 2.0

    def test_table_output(self, toy_file, capsys):
        assert main(["distances", "--embeddings", toy_file, "--words", "u,v"]) == 0
        out = capsys.readouterr().out
        assert "euclidean distance" in out
        assert "cosine similarity" in out

    def test_oov_exits_3(self, toy_file):
        assert main(["distances", "--embeddings", toy_file, "--words", "u,zzz"]) == 3


class TestReplayCommand:
    def _session_journal(self, space_file, tmp_path):
        journal_path = tmp_path / "journal.ndjson"
        store = EmbeddingStore(load_path(space_file))
        bench = Workbench(store, Journal(journal_path))
        bench.refit(mode="set", words=["w0", "w1", "w2"], base_version=1)
        bench.refit(mode="target", words=["w3", "w4"], target="w3", base_version=2)
        bench.undo()
        return journal_path, store

    def test_replay_reproduces_final_space(self, space_file, tmp_path, capsys):
        journal_path, store = self._session_journal(space_file, tmp_path)
        out = tmp_path / "final.txt"
        code = main(["replay", "--embeddings", space_file, "--journal",
                     str(journal_path), "--out", str(out), "--json"])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["version"] == store.current.version_id
        assert summary["records"] == 3
        replayed = load_path(str(out))
        assert np.max(np.abs(replayed.matrix - store.current.matrix)) <= 5e-7

    def test_empty_journal_is_identity(self, space_file, tmp_path, capsys):
        journal_path = tmp_path / "journal.ndjson"
        journal_path.write_text("")
        out = tmp_path / "final.txt"
        assert main(["replay", "--embeddings", space_file, "--journal",
                     str(journal_path), "--out", str(out)]) == 0
        assert load_path(str(out)).matrix == pytest.approx(load_path(space_file).matrix)

    def test_chain_mismatch_exits_4(self, space_file, tmp_path, capsys):
        journal_path, _ = self._session_journal(space_file, tmp_path)
        # corrupt the chain: bump a base_version
        lines = [json.loads(l) for l in journal_path.read_text().splitlines()]
        lines[1]["base_version"] = 77
        journal_path.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
        assert main(["replay", "--embeddings", space_file,
                     "--journal", str(journal_path)]) == 4

    def test_missing_journal_exits_3(self, space_file, tmp_path):
        assert main(["replay", "--embeddings", space_file, "--journal",
                     str(tmp_path / "nope.ndjson")]) == 3

    def test_human_summary(self, space_file, tmp_path, capsys):
        journal_path, _ = self._session_journal(space_file, tmp_path)
        assert main(["replay", "--embeddings", space_file, "--journal",
                     str(journal_path)]) == 0
        assert "replayed 3 record(s)" in capsys.readouterr().out


class TestUsage:
    def test_no_command_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_unknown_format_is_usage_error(self, toy_file):
        with pytest.raises(SystemExit) as err:
            main(["search", "--embeddings", toy_file, "--query", "u",
                  "--format", "binary"])
        assert err.value.code == 2
