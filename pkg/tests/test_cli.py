import io
import json
import subprocess
import sys

import pytest

from gpdrecon import kernels
from gpdrecon.cli import EXIT_CAPACITY, EXIT_FAIL, EXIT_INVALID, EXIT_OK, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv) + ["--format", "machine"], stdout=buf)
    return code, json.loads(buf.getvalue())


@pytest.fixture(autouse=True)
def _restore_backend():
    before = kernels.BACKEND
    yield
    kernels.set_backend(before)


@pytest.mark.parametrize("argv", [
    ["check-ring", "mod12"],
    ["units", "--ring", "mod4", "--group", "cyclic2"],
    ["groupoid-info", "bundle_c2_triv"],
    ["bisections", "pair2"],
    ["normalizer", "c2", "--ring", "mod4", "--engine", "both"],
    ["lbh", "c2", "--ring", "mod4"],
    ["roundtrip", "pair2", "mod3", "--seeds", "2"],
    ["leavitt", "leavitt_a2", "--ring", "mod2"],
])
def test_machine_output_is_deterministic(argv):
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        main(argv + ["--format", "machine"], stdout=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
    d = json.loads(outs[0])
    assert "timings" not in d and len(d["inputs_digest"]) == 64


def test_timings_opt_in():
    _, d = run("check-ring", "mod4", "--timings")
    assert "total" in d["timings"]


def test_check_ring():
    code, d = run("check-ring", "mod12")
    assert code == EXIT_OK
    assert d["verdicts"]["indecomposable"] is False


def test_units_census():
    code, d = run("units", "--ring", "mod4", "--group", "cyclic2")
    assert code == EXIT_OK
    assert (d["data"]["units"], d["data"]["trivial units"]) == (8, 4)
    assert d["witness"]["kind"] == "unit" and d["witness"]["text"] == "1+2g"


class TestExitCodes:
    def test_lbh_holds(self):
        code, d = run("lbh", "pair2", "--ring", "mod4")
        assert code == EXIT_OK and d["witness"] is None

    def test_lbh_fails_with_witness(self):
        code, d = run("lbh", "c2", "--ring", "mod4")
        assert code == EXIT_FAIL
        assert d["witness"]["kind"] == "lbh"
        assert d["witness"]["text"] in ("1+2g", "1-2g")

    def test_invalid_ring(self):
        assert run("check-ring", "mod1")[0] == EXIT_INVALID
        assert run("lbh", "c2_mod6")[0] == EXIT_INVALID

    def test_missing_instance(self):
        code, d = run("lbh", "/nonexistent.json")
        assert code == EXIT_INVALID and d["error"] == "invalid input"

    def test_capacity(self):
        code, d = run("normalizer", "pair3", "--ring", "mod4")
        assert code == EXIT_CAPACITY and d["error"] == "capacity"

    def test_bad_arguments(self):
        assert main(["no-such-command"], stdout=io.StringIO()) == EXIT_INVALID


class TestVerifyWitness:
    def test_lbh(self, tmp_path):
        buf = io.StringIO()
        assert main(["lbh", "c2", "--ring", "mod4", "--format", "machine"], stdout=buf) == EXIT_FAIL
        f = tmp_path / "report.json"
        f.write_text(buf.getvalue())
        code, d = run("verify-witness", str(f))
        assert code == EXIT_OK and d["verdicts"]["witness confirmed"] is True

    def test_tampered_lbh(self, tmp_path):
        _, d = run("lbh", "c2", "--ring", "mod4")
        d["witness"]["m"] = [1, 0]
        f = tmp_path / "report.json"
        f.write_text(json.dumps(d))
        assert run("verify-witness", str(f))[0] == EXIT_FAIL

    def test_unit(self, tmp_path):
        _, d = run("units", "--ring", "mod9", "--group", "cyclic3")
        f = tmp_path / "report.json"
        f.write_text(json.dumps(d))
        assert run("verify-witness", str(f))[0] == EXIT_OK

    def test_roundtrip_failure(self, tmp_path):
        code, d = run("roundtrip", "c2", "mod4", "--seeds", "1")
        assert code == EXIT_FAIL
        f = tmp_path / "report.json"
        f.write_text(json.dumps(d))
        assert run("verify-witness", str(f))[0] == EXIT_OK

    def test_rerun(self, tmp_path):
        f = tmp_path / "w.json"
        f.write_text(json.dumps({"kind": "rerun", "argv": ["lbh", "c2", "--ring", "mod4"]}))
        assert run("verify-witness", str(f))[0] == EXIT_OK
        f.write_text(json.dumps({"kind": "rerun", "argv": ["lbh", "pair2", "--ring", "mod4"]}))
        assert run("verify-witness", str(f))[0] == EXIT_FAIL

    def test_no_witness(self, tmp_path):
        f = tmp_path / "w.json"
        f.write_text("{}")
        assert run("verify-witness", str(f))[0] == EXIT_INVALID


def test_scramble_reconstruct_emit(tmp_path):
    pres = tmp_path / "p.json"
    code, _ = run("scramble", "bundle_c2_triv", "--ring", "mod3", "--seed", "5", "--mix",
                  "--out", str(pres))
    assert code == EXIT_OK
    emitted = tmp_path / "g.json"
    code, d = run("reconstruct", str(pres), "--emit", str(emitted))
    assert code == EXIT_OK
    code, info = run("groupoid-info", str(emitted))
    assert code == EXIT_OK
    code, direct = run("groupoid-info", "bundle_c2_triv")
    for key in ("objects", "arrows"):
        assert info["data"][key] == direct["data"][key]


def test_normalizer_on_presentation(tmp_path):
    pres = tmp_path / "p.json"
    run("scramble", "pair2", "--ring", "mod3", "--seed", "1", "--out", str(pres))
    code, d = run("normalizer", str(pres))
    assert code == EXIT_OK
    assert (d["data"]["|N|"], d["data"]["|N/~|"]) == (17, 7)
    assert d["verdicts"]["LBH"] is True


def test_germ_command():
    code, d = run("germ", "semigroup_c2_zero")
    assert code == EXIT_OK
    assert (d["data"]["points"], d["data"]["arrows"]) == (1, 2)


def test_leavitt_loop_reports_hypothesis():
    code4, d4 = run("leavitt", "graph_loop", "--ring", "mod4", "--hypothesis")
    code3, d3 = run("leavitt", "graph_loop", "--ring", "mod3", "--hypothesis")
    assert code4 == code3 == EXIT_OK
    assert d4["verdicts"]["reconstruction applies"] is False
    assert d3["verdicts"]["reconstruction applies"] is True
    assert d4["verdicts"]["condition (L)"] is False


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_backend_flag(backend):
    code, d = run("lbh", "c2", "--ring", "mod4", "--backend", backend)
    assert code == EXIT_FAIL


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gpdrecon.cli", "check-ring", "mod7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "indecomposable: yes" in proc.stdout
