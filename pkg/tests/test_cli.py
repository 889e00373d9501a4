import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qudit_monogamy.cli import run
from qudit_monogamy.monogamy import CSV_COLUMNS
from qudit_monogamy.tensor import haar_random_tripartite, state_to_json

FAST = ["--restarts", "4", "--iters", "500"]


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def finite_numbers(obj):
    if isinstance(obj, dict):
        return all(finite_numbers(v) for v in obj.values())
    if isinstance(obj, list):
        return all(finite_numbers(v) for v in obj)
    if isinstance(obj, float):
        return math.isfinite(obj)
    return True


class TestCheck:
    def test_ghz(self, capsys):
        code, out, _ = call(capsys, "check", "--zoo", "ghz", "--dim", "3", "--pivot", "1", *FAST)
        assert code == 0
        report = json.loads(out)
        assert report["residual"] == pytest.approx(1.0, abs=1e-9)
        assert finite_numbers(report)

    def test_w(self, capsys):
        code, out, _ = call(capsys, "check", "--zoo", "w", "--pivot", "1", *FAST)
        assert code == 0 and abs(json.loads(out)["residual"]) <= 1e-7

    def test_input_file(self, capsys, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(json.dumps(state_to_json(haar_random_tripartite(3, 4))))
        code, out, _ = call(capsys, "check", "--input", str(p), "--pivot", "2", *FAST)
        assert code == 0 and json.loads(out)["pivot"] == 2

    def test_csv(self, capsys):
        code, out, _ = call(capsys, "check", "--zoo", "chi", "--format", "csv", *FAST)
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 2


class TestSample:
    def test_identical_bytes(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            p = tmp_path / name
            assert run(["sample", "--dim", "3", "--count", "100", "--seed", "7", "--restarts", "2",
                        "--iters", "200", "--out", str(p)]) == 0
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]
        assert len(outs[0].decode().strip().splitlines()) == 1 + 300

    def test_stdout_matches_file(self, capsys, tmp_path):
        p = tmp_path / "rows.csv"
        run(["sample", "--dim", "2", "--count", "2", "--seed", "1", *FAST, "--out", str(p)])
        code, out, _ = call(capsys, "sample", "--dim", "2", "--count", "2", "--seed", "1", *FAST)
        assert code == 0 and out == p.read_text()

    def test_json_summary(self, capsys):
        code, out, _ = call(capsys, "sample", "--dim", "2", "--count", "2", "--format", "json", *FAST)
        summary = json.loads(out)
        assert code == 0 and summary["violations"] == 0 and len(summary["rows"]) == 6
        assert finite_numbers(summary)


class TestOtherCommands:
    def test_zoo_round_trip(self, capsys, tmp_path):
        p = tmp_path / "ghz.json"
        assert run(["zoo", "--zoo", "ghz", "--dim", "4", "--out", str(p)]) == 0
        obj = json.loads(p.read_text())
        assert obj["dims"] == [4, 4, 4]
        code, out, _ = call(capsys, "monotones", "--input", str(p))
        assert code == 0 and json.loads(out)["g"] == pytest.approx(1, abs=1e-12)

    def test_monotones_bipartite(self, capsys, tmp_path):
        p = tmp_path / "bell.json"
        p.write_text(json.dumps({"dims": [2, 2], "amplitudes": [[2**-0.5, 0], [0, 0], [0, 0],
                                                                [2**-0.5, 0]]}))
        code, out, _ = call(capsys, "monotones", "--input", str(p))
        res = json.loads(out)
        assert code == 0 and res["raw"] == pytest.approx([1, 0.5]) and res["g"] == pytest.approx(1)

    def test_roof(self, capsys):
        code, out, _ = call(capsys, "roof", "--zoo", "w", *FAST)
        res = json.loads(out)
        assert code == 0 and [r["pair"] for r in res["roofs"]] == [[1, 2], [1, 3]]
        assert all(r["g_upper_bound"] <= 1e-6 for r in res["roofs"])
        assert finite_numbers(res)


class TestExitCodes:
    def test_usage(self, capsys):
        assert call(capsys, "check", "--zoo", "ghz", "--input", "x.json")[0] == 2
        assert call(capsys, "frobnicate")[0] == 2
        assert call(capsys, "check", "--pivot", "4")[0] == 2
        assert call(capsys, "zoo")[0] == 2
        assert call(capsys, "roof", "--zoo", "w", "--format", "csv")[0] == 2
        assert call(capsys, "check", "--seed", str(2**64))[0] == 2

    def test_missing_input(self, capsys, tmp_path):
        assert call(capsys, "check", "--input", str(tmp_path / "nope.json"))[0] == 2

    def test_malformed_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert call(capsys, "check", "--input", str(p))[0] == 2
        p.write_text(json.dumps({"dims": [3, 3, 3], "amplitudes": [[1, 0]] * 5}))
        assert call(capsys, "check", "--input", str(p))[0] == 1

    def test_unnormalised_state_is_contract_violation(self, capsys, tmp_path):
        p = tmp_path / "big.json"
        p.write_text(json.dumps({"dims": [2, 2, 2], "amplitudes": [[1, 0]] * 8}))
        code, _, err = call(capsys, "check", "--input", str(p))
        assert code == 1 and "norm" in err


def test_console_entry_point(tmp_path):
    out = tmp_path / "chi.json"
    proc = subprocess.run([sys.executable, "-m", "qudit_monogamy.cli", "zoo", "--zoo", "chi",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0
    amps = np.array(json.loads(out.read_text())["amplitudes"])
    assert np.count_nonzero(amps[:, 0]) == 6
