import csv
import io
import json
import subprocess
import sys

import pytest

from sparsetw.cli import main

FAST = {
    "sample-graph": ["--N", "30", "--d", "3", "--seed", "4"],
    "verify-lemma1": ["--N", "8", "--d", "3", "--n", "6", "--seed", "1"],
    "enum-diagrams": ["--s-max", "3", "--dump"],
    "weighted-counts": ["--s-max", "3", "--n", "20"],
    "mckay-check": ["--N", "50", "--d", "3", "--pattern", "edge,triangle", "--samples", "2000", "--seed", "7"],
    "moments": ["--N", "100", "--d", "3", "--n", "3", "--samples", "8", "--seed", "2"],
    "goe-compare": ["--N", "50", "--d", "3", "--n", "2", "--samples", "6", "--seed", "2"],
    "spectrum-ensemble": ["--N", "40", "--d", "3", "--samples", "5", "--seed", "3", "--format", "csv"],
    "tw-compare": ["--N", "40", "--d", "3", "--samples", "10", "--seed", "3"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("command", list(FAST))
def test_byte_identical_across_threads(command, capsys):
    outs = []
    for t in ("1", "2", "8"):
        code, out, _ = run([command, *FAST[command], "--threads", t], capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]
    code, again, _ = run([command, *FAST[command], "--threads", "2"], capsys)
    assert again == outs[0]


@pytest.mark.parametrize("command", [c for c in FAST if c != "spectrum-ensemble"])
def test_json_embeds_config_and_version(command, capsys):
    _, out, _ = run([command, *FAST[command]], capsys)
    doc = json.loads(out)
    assert doc["command"] == command and doc["version"].startswith("sparsetw-")
    assert "threads" not in doc["config"] and doc["config"]


def test_verify_lemma1_example(capsys):
    _, out, _ = run(["verify-lemma1", *FAST["verify-lemma1"]], capsys)
    res = json.loads(out)["result"]
    assert res["equal"] is True and res["n"] == 6 and res["P_n"] == res["E_tr"]


def test_mckay_example(capsys):
    _, out, _ = run(["mckay-check", "--N", "50", "--d", "3", "--pattern", "triangle", "--samples", "100000",
                     "--seed", "7"], capsys)
    assert json.loads(out)["result"]["within_bounds"] is True


def test_csv_is_rfc4180_and_config_goes_to_stderr(capsys):
    _, out, err = run(["spectrum-ensemble", *FAST["spectrum-ensemble"]], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["sample_index", "lambda_min", "lambda_max", "scaled_min", "scaled_max", "seed"]
    assert len(rows) == 6 and out.endswith("\r\n")
    assert json.loads(err.strip().splitlines()[-1])["config"]["N"] == 40


def test_output_file_and_sidecar(tmp_path, capsys):
    path = tmp_path / "spec.csv"
    assert main(["spectrum-ensemble", *FAST["spectrum-ensemble"], "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert path.read_text().startswith("sample_index,")
    assert json.loads((tmp_path / "spec.csv.json").read_text())["command"] == "spectrum-ensemble"


def test_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"N": 12, "d": 3, "seed": 5}))
    _, out, _ = run(["sample-graph", "--config", str(cfg)], capsys)
    assert json.loads(out)["config"] == {"N": 12, "d": 3, "seed": 5}
    _, out, _ = run(["sample-graph", "--config", str(cfg), "--N", "14"], capsys)
    assert json.loads(out)["config"]["N"] == 14
    _, out, _ = run(["sample-graph"], capsys)
    assert json.loads(out)["config"] == {"N": 100, "d": 3, "seed": 1}


@pytest.mark.parametrize("command", ["sample-graph", "moments", "mckay-check", "tw-compare"])
def test_degree_two_exits_2(command, capsys):
    code, out, err = run([command, "--N", "10", "--d", "2"], capsys)
    assert code == 2 and out == "" and "d >= 3" in err


def test_other_validation_errors(tmp_path, capsys):
    assert run(["enum-diagrams", "--s-max", "9"], capsys)[0] == 2
    assert run(["moments", "--N", "9", "--d", "3"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    assert run(["sample-graph", "--config", str(bad)], capsys)[0] == 2


def test_resource_cap_exits_3(capsys):
    code, out, err = run(["moments", "--N", "1000", "--d", "3", "--n", "10", "--samples", "100",
                          "--work-cap", "1e6"], capsys)
    assert code == 3 and out == "" and "cap" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sparsetw", "enum-diagrams", "--s-max", "2"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["result"]["counts"] == {"1": 1, "2": 7}
