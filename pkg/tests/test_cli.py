import json
import shutil
import subprocess
import sys

import pytest

from htpq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines()]


def test_solve_found(capsys):
    code, (rec,) = run(capsys, "solve", "--poly", "x0 - 3", "--ring", "include:", "--height", "5")
    assert code == 0 and rec["outcome"] == "found" and rec["witness"] == {"x0": "3"}


def test_solve_exhausted(capsys):
    code, (rec,) = run(capsys, "solve", "--poly", "2*x0^2 + 2*x1^2 - 1", "--ring", "exclude:2", "--height", "20")
    assert code == 2 and rec["outcome"] == "exhausted"


def test_solve_methods_agree(capsys):
    args = ["solve", "--poly", "x0^2 - 2*x1^2 - 1", "--ring", "include:", "--height", "10"]
    assert run(capsys, *args) == run(capsys, *args, "--method", "exhaustive")


def test_phi_nonmember(capsys):
    code, (rec,) = run(capsys, "phi", "--poly", "5*x0^2 + 5*x1^2 - 1", "--ring", "residue:3mod4")
    assert code == 1 and rec["verdict"] == "nonmember" and rec["excluded"] == [5]


def test_phi_undecided(capsys):
    code, (rec,) = run(capsys, "phi", "--poly", "x0^3 - 2", "--ring", "include:", "--rounds", "3", "--height", "8")
    assert code == 2 and rec["verdict"] == "undecided"


def test_oracle(capsys):
    code, (rec,) = run(capsys, "oracle", "quad", "--poly", "x0^2 + x1^2 - 7", "--ring", "include:")
    assert code == 1 and rec["verdict"] == "unsolvable" and rec["reason"]["failing_places"] == ["7"]
    code, (rec,) = run(capsys, "oracle", "quad", "--poly", "5*x0^2 + 5*x1^2 - 1", "--ring", "include:5")
    assert code == 0 and rec["witness"] == {"x0": "2/5", "x1": "1/5"}


def test_reduce_commands(capsys, tmp_path):
    code, (rec,) = run(capsys, "reduce", "homogenize", "--poly", "2*x0 - 1")
    assert code == 0 and rec["y"] == "x1"
    polys = tmp_path / "p.txt"
    polys.write_text("x0 - 2\n# comment\nx1 - x0\n")
    code, (rec,) = run(capsys, "reduce", "conjoin", "--polys", str(polys))
    assert code == 0 and rec["count"] == 2
    gadgets = tmp_path / "g.json"
    gadgets.write_text(json.dumps([{"prime": 5, "polynomial": "x0*x1*x2*x3", "semantics": "mock"}]))
    code, (rec,) = run(capsys, "reduce", "semilocal", "--poly", "5*x0 - 1", "--exclude", "5", "--gadgets", str(gadgets))
    assert code == 0 and rec["semantics"] == "mock" and rec["instances"] == 1
    assert run(capsys, "reduce", "semilocal", "--poly", "x0", "--exclude", "7")[0] == 3


def test_certify_and_store(capsys, tmp_path):
    store = tmp_path / "s.jsonl"
    code, recs = run(capsys, "--store", str(store), "certify", "--poly", "5*x0^2 + 5*x1^2 - 1", "--depth", "3", "--height", "10")
    assert code == 0 and len(recs) == 8
    code, recs = run(capsys, "certify", "--poly", "x0^3 - 2", "--depth", "2", "--height", "5", "--store", str(store))
    assert code == 0 and recs[-1]["inconclusive"]
    code, recs = run(capsys, "store", "verify", str(store))
    assert code == 0 and recs[-1] == {"command": "store verify", "valid": 8, "invalid": 0}
    with open(store, "a") as fh:
        fh.write("{broken\n")
    code, recs = run(capsys, "store", "verify", "--store", str(store))
    assert code == 1 and recs[0]["line"] == 9


def test_probe_and_generic(capsys, tmp_path):
    code, (rec,) = run(capsys, "probe", "--poly", "5*x0^2 + 5*x1^2 - 1", "--ring", "residue:3mod4", "--depth", "4", "--height", "10")
    assert code == 1 and rec["excluded"] == [5]
    polys = tmp_path / "p.txt"
    polys.write_text("2*x0 - 1\nx0^2 + x1^2 - 7\n")
    code, recs = run(capsys, "generic", "--ring", "include:", "--polys", str(polys))
    assert code == 0 and recs[-1]["passes_at_budget"]


def test_measure_needs_seed(capsys):
    assert run(capsys, "measure", "--poly", "x0", "--height", "5", "--samples", "10")[0] == 3


def test_measure_record(capsys):
    code, (rec,) = run(capsys, "--seed", "3", "measure", "--poly", "5*x0^2 + 5*x1^2 - 1", "--height", "10", "--samples", "1000", "--exact-family")
    assert code == 0
    assert {"value", "samples", "H", "seed", "ci_low", "ci_high"} <= rec.keys()
    assert rec["exact"]["gap"] == "0"


def test_definability_commands(capsys, tmp_path):
    spec = tmp_path / "m.json"
    spec.write_text(json.dumps({"n": 1, "h": "0", "h_plus": "x0 + x1 - x2", "h_times": "x0*x1 - x2"}))
    code, (rec,) = run(capsys, "model-check", "--spec", str(spec), "--ring", "include:", "--range", "3", "--height", "5")
    assert code == 0 and rec["status"].startswith("consistent")
    probes = tmp_path / "q.txt"
    probes.write_text("0 1 1/2\n")
    code, (rec,) = run(capsys, "exdef-check", "--g", "0", "--ring", "include:2", "--probes", str(probes), "--height", "5")
    assert code == 1 and rec["status"] == "refuted"


def test_encode_decode(capsys):
    code, (rec,) = run(capsys, "encode", "--poly", "2*x0 - 1")
    code2, (back,) = run(capsys, "decode", "--code", rec["code"])
    assert code == code2 == 0 and back["polynomial"] == "2*x0 - 1"
    assert run(capsys, "decode", "--code", "-4")[0] == 3


def test_config_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 9, "height": 10, "samples": 100}))
    code, (rec,) = run(capsys, "--config", str(cfg), "measure", "--poly", "x0 - 3")
    assert code == 0 and rec["seed"] == 9 and rec["samples"] == 100


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--poly", "x0 +", "--ring", "include:", "--height", "5"],
        ["solve", "--poly", "x0", "--ring", "bogus:1", "--height", "5"],
        ["solve", "--poly", "x0", "--ring", "include:", "--height", "0"],
        ["nosuchcommand"],
    ],
)
def test_malformed_input(capsys, argv):
    assert main(argv) == 3


def test_resource_limit(capsys):
    argv = ["solve", "--poly", "x0*x1*x2*x3*x4 - 7", "--ring", "exclude:", "--height", "400"]
    assert main(argv) == 4


def test_console_script_exit_codes(tmp_path):
    # the installed entry point, through a real process
    exe = [shutil.which("htpq")] if shutil.which("htpq") else [sys.executable, "-m", "htpq"]

    def code(*argv):
        return subprocess.run([*exe, *argv], capture_output=True, cwd=tmp_path).returncode

    assert code("solve", "--poly", "x0 - 3", "--ring", "include:", "--height", "5") == 0
    assert code("phi", "--poly", "5*x0^2 + 5*x1^2 - 1", "--ring", "residue:3mod4") == 1
    assert code("solve", "--poly", "x0^2 + 1", "--ring", "include:", "--height", "5") == 2
    assert code("solve", "--poly", "((", "--ring", "include:", "--height", "5") == 3
