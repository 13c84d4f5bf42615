import json

import pytest

from stratincon.cli import build_parser, main
from stratincon.store import Workspace


@pytest.fixture()
def pipeline_ws(tmp_path):
    raw = tmp_path / "raw"
    ws = tmp_path / "ws"
    assert main(["gen", "--seed", "11", "--frames", "80", "--matches", "2",
                 "--out", str(raw), "--prefix", "t"]) == 0
    logs = sorted(str(p) for p in raw.glob("*.log"))
    assert main(["ingest", "--workspace", str(ws)] + logs) == 0
    return tmp_path, ws


class TestGen:
    def test_deterministic_files(self, tmp_path):
        for d in ("a", "b"):
            assert main(["gen", "--seed", "5", "--frames", "40",
                         "--out", str(tmp_path / d)]) == 0
        a = (tmp_path / "a" / "syn-00000005.log").read_bytes()
        b = (tmp_path / "b" / "syn-00000005.log").read_bytes()
        assert a == b

    def test_sidecar_written(self, tmp_path):
        main(["gen", "--seed", "5", "--frames", "40", "--out", str(tmp_path)])
        sidecar = json.loads((tmp_path / "syn-00000005.truth.json").read_text())
        assert sidecar["format"] == "stratincon-truth"
        assert sidecar["n_frames"] == 40

    def test_stdout_stream(self, capsysbinary):
        assert main(["gen", "--seed", "5", "--frames", "40"]) == 0
        out = capsysbinary.readouterr().out
        assert out.count(b"\n") == 41  # header + 40 frames

    def test_seed_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--frames", "40"])
        assert exc.value.code == 2


class TestValidateIngest:
    def test_validate_clean(self, tmp_path):
        main(["gen", "--seed", "5", "--frames", "40", "--out", str(tmp_path)])
        assert main(["validate", str(tmp_path / "syn-00000005.log")]) == 0

    def test_validate_gold_decrease(self, tmp_path, capsys):
        main(["gen", "--seed", "5", "--frames", "40", "--out", str(tmp_path)])
        path = tmp_path / "syn-00000005.log"
        lines = path.read_text().strip().split("\n")
        frame = json.loads(lines[-1])
        frame["champions"][0]["gold"] = 0
        path.write_text("\n".join(lines[:-1] + [json.dumps(frame)]) + "\n")
        assert main(["validate", str(path)]) == 1
        out = capsys.readouterr().out
        assert "GoldDecrease" in out

    def test_ingest_rejects_findings(self, tmp_path, capsys):
        main(["gen", "--seed", "5", "--frames", "40", "--out", str(tmp_path)])
        path = tmp_path / "syn-00000005.log"
        lines = path.read_text().strip().split("\n")
        frame = json.loads(lines[-1])
        frame["champions"][0]["gold"] = 0
        path.write_text("\n".join(lines[:-1] + [json.dumps(frame)]) + "\n")
        ws = tmp_path / "ws"
        assert main(["ingest", "--workspace", str(ws), str(path)]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error: ") and err.count("\n") == 1

    def test_missing_file_single_line_error(self, tmp_path, capsys):
        code = main(["ingest", "--workspace", str(tmp_path), "/no/such/file.log"])
        assert code == 1
        err = capsys.readouterr().err
        assert err.startswith("error: ") and err.count("\n") == 1


class TestTrainAnalyze:
    def test_train_defaults(self):
        args = build_parser().parse_args(["train", "--seed", "0"])
        assert (args.epochs, args.batch, args.lr) == (1000, 16, 3e-4)

    def test_train_seed_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["train"])
        assert exc.value.code == 2

    def test_pipeline(self, pipeline_ws, capsys):
        tmp_path, ws = pipeline_ws
        assert main(["train", "--workspace", str(ws), "--seed", "0",
                     "--epochs", "2", "--hidden", "8"]) == 0
        assert main(["eval", "--workspace", str(ws)]) == 0
        assert main(["analyze", "--workspace", str(ws)]) == 0
        store = Workspace(ws)
        assert store.list_bundles() == ["t00000011", "t00000012"]
        assert main(["export", "--workspace", str(ws), "--match", "t00000011"]) == 0
        out = capsys.readouterr().out
        assert "t00000011" in out

    def test_analyze_idempotent(self, pipeline_ws):
        _, ws = pipeline_ws
        main(["train", "--workspace", str(ws), "--seed", "0",
              "--epochs", "2", "--hidden", "8"])
        main(["analyze", "--workspace", str(ws)])
        store = Workspace(ws)
        first = store.get_bundle("t00000011").to_json()
        main(["analyze", "--workspace", str(ws)])
        second = store.get_bundle("t00000011").to_json()
        first.pop("created_at")
        second.pop("created_at")
        assert first == second

    def test_eval_without_model(self, pipeline_ws, capsys):
        _, ws = pipeline_ws
        assert main(["eval", "--workspace", str(ws), "--name", "ghost"]) == 1
        assert capsys.readouterr().err.startswith("error: ")
