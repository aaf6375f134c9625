import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from delsarte.cli import run
from delsarte.codes import extended_hamming_code, format_words, hamming_code
from delsarte.report import dumps, jsonable

from conftest import petersen_relations

HAM3 = '{"family":"hamming","n":3,"q":2}'


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "repetition.txt").write_text("000\n111\n", encoding="utf-8")
    (tmp_path / "oct.txt").write_text(
        "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n", encoding="utf-8")
    (tmp_path / "ext.txt").write_text(format_words(extended_hamming_code(3).codewords(), 8),
                                      encoding="utf-8")
    (tmp_path / "ham.txt").write_text(format_words(hamming_code(3).codewords(), 7),
                                      encoding="utf-8")
    return tmp_path


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_repetition(workdir, capsys):
    code, out, _ = _run(["analyze", "--scheme", HAM3, "--code", "repetition.txt"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["a"] == [1, 0, 0, 1]
    assert rep["b"] == [2, 0, 6, 0]
    assert rep["schema"] == 1 and rep["command"] == "analyze"
    assert rep["zero_intervals"] == [{"w": 0, "t": 2, "terminal": False}]
    assert {"n", "q", "family", "size", "degree_set", "dual_degree_set", "bounds"} <= rep.keys()


def test_report_file_is_deterministic(workdir, capsys):
    args = ["cr-check", "--scheme", '{"family":"hamming","n":8}', "--code", "ext.txt",
            "--certify-rank"]
    assert run(args + ["--report", "r1.json"]) == 0
    assert run(args + ["--report", "r2.json"]) == 0
    first = (workdir / "r1.json").read_bytes()
    assert first == (workdir / "r2.json").read_bytes()
    rep = json.loads(first)
    assert rep["completely_regular"] and rep["rho"] == 2
    assert all(c["holds"] for c in rep["rank_certificate"])
    assert any(h["w"] == 4 and h["holds"] for h in rep["hypothesis_checks"])


def test_spherical_octahedron(workdir, capsys):
    code, out, _ = _run(["spherical", "--points", "oct.txt", "--kmax", "8", "--design", "0", "3"],
                        capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["designs"] == [{"w": 0, "t": 3, "holds": True}]
    assert rep["number_mode"] == "EXACT"
    assert rep["scheme_candidates"][0]["scheme"]["q_polynomial"]


def test_annihilate_and_induce(workdir, capsys):
    code, out, _ = _run(["annihilate", "--scheme", '{"family":"hamming","n":7}', "--code",
                         "ham.txt"], capsys)
    assert code == 0 and json.loads(out)["residual"] == 0
    code, out, _ = _run(["annihilate", "--dual", "--scheme", '{"family":"hamming","n":7}',
                         "--code", "ham.txt"], capsys)
    assert code == 0 and json.loads(out)["residual"] == 0
    code, out, _ = _run(["induce", "--scheme", '{"family":"hamming","n":8}', "--code", "ext.txt",
                         "--full-verify"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["hypothesis"]["holds"]
    assert rep["induced"]["q_polynomial"] and rep["induced"]["classes"] == 2


def test_explicit_scheme_file(workdir, capsys):
    R = petersen_relations()
    (workdir / "pet.txt").write_text("\n".join(" ".join(map(str, r)) for r in R), encoding="utf-8")
    (workdir / "scheme.json").write_text('{"explicit": {"relations_file": "pet.txt"}}',
                                         encoding="utf-8")
    code, out, _ = _run(["scheme-info", "--scheme", "scheme.json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["scheme"]["multiplicities"] == [1, 5, 4]
    inline = json.dumps({"explicit": {"relations": R.tolist()}})
    code, out2, _ = _run(["scheme-info", "--scheme", inline], capsys)
    assert json.loads(out2)["scheme"] == rep["scheme"]


def test_input_errors_exit_1(workdir, capsys):
    (workdir / "bad.txt").write_text("0102\n", encoding="utf-8")
    code, _, err = _run(["analyze", "--scheme", HAM3, "--code", "bad.txt"], capsys)
    assert code == 1
    assert "error" in err.lower()
    code, _, _ = _run(["analyze", "--scheme", '{"family":"nope"}', "--code", "repetition.txt"],
                      capsys)
    assert code == 1
    code, _, _ = _run(["analyze", "--scheme", HAM3, "--code", "missing.txt"], capsys)
    assert code == 1
    bad = json.dumps({"explicit": {"relations": [[0, 1], [2, 0]]}})
    code, _, _ = _run(["scheme-info", "--scheme", bad], capsys)
    assert code == 1


def test_internal_fault_exit_2(workdir, capsys, monkeypatch):
    from delsarte import cli
    from delsarte.errors import TheoremViolation

    def boom(*a, **k):
        raise TheoremViolation("forced")

    monkeypatch.setattr(cli, "analyze_subset", boom)
    code, _, err = _run(["analyze", "--scheme", HAM3, "--code", "repetition.txt"], capsys)
    assert code == 2 and "TheoremViolation" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_reproduce_golay23(capsys):
    code, out, _ = _run(["reproduce-examples", "--which", "golay23"], capsys)
    assert code == 0
    ex = json.loads(out)["examples"][0]
    assert ex["key"] == "p-golay23"
    assert ex["a"][7] == 253 and ex["b"][8] == 4096 * 506
    iv = [i for i in ex["intervals"] if i["w"] == 16][0]
    assert (iv["w"], iv["t"], ex["degree"]) == (16, 6, 3)


def test_threads_flag(workdir, capsys, monkeypatch):
    monkeypatch.setenv("DELSARTE_THREADS", "1")
    code, _, _ = _run(["analyze", "--scheme", HAM3, "--code", "repetition.txt", "--threads", "1"],
                      capsys)
    assert code == 0


def test_module_entry_point(workdir):
    out = subprocess.run([sys.executable, "-m", "delsarte", "analyze", "--scheme", HAM3,
                          "--code", "repetition.txt"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["a"] == [1, 0, 0, 1]


def test_jsonable_formats():
    assert jsonable(Fraction(3, 4)) == "3/4"
    assert jsonable(Fraction(8, 4)) == 2
    assert jsonable(np.int64(5)) == 5
    assert jsonable(0.1 + 0.2) == 0.3
    assert jsonable(-0.0) == 0.0
    assert jsonable(np.array([[1, 2]])) == [[1, 2]]
    with pytest.raises(TypeError):
        jsonable(object())
    text = dumps({"b": 1, "a": Fraction(1, 3)})
    assert text.index('"a"') < text.index('"b"')
