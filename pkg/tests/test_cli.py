import json
import random
import subprocess
import sys

import pytest

from largersieve.cli import run
from largersieve.latsweeps import construct_lattice_instance
from largersieve.lattice import LatticeBasis, LatticeSieveInstance, Parallelepiped


def call(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def jcall(argv, capsys):
    code, out, _ = call(argv, capsys)
    return code, json.loads(out)


def test_poly_solve_example(capsys):
    code, out = jcall(["poly-solve", "0,1,1", "12"], capsys)
    assert code == 0
    assert out["roots"] == [0, 3, 8, 11]
    assert out["schema_version"] == 1


def test_constants_c3(capsys):
    code, out = jcall(["constants", "--c-s", "3"], capsys)
    assert code == 0
    row = out["c_s"][0]
    assert abs(row["value"] - 0.25 ** (1 / 3)) < 1e-15
    assert 0 < row["abs_error_bound"] < 1e-20


def test_poly_count_reports_both_policies(capsys):
    code, out = jcall(["poly-count", "7,0,1", "16", "3", "4"], capsys)
    assert code == 0
    assert out["W"] == 2 and out["witnesses"] == [3, 5]
    # 5 points: (5-1)^2 <= 16 but 5^2 > 16
    _, out = jcall(["poly-count", "7,0,1", "16", "3", "5"], capsys)
    assert out["admissible"] == {"measure": True, "count": False}


def test_verify_thm4_quick_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"degrees": [2, 3], "q_range": [2, 150],
                               "options": {"two_power_alpha": 8, "two_power_ns": [2, 4]}}))
    code, out = jcall(["verify", "thm4", "--sweep", str(cfg)], capsys)
    assert code == 0
    assert out["violations"] == []
    assert out["instances_checked"] > 0
    assert "wall_time" not in out


@pytest.mark.parametrize("target", ["thm3", "cor2", "remark", "lemma4"])
def test_verify_poly_targets_small(target, capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"degrees": [2, 3], "q_range": [2, 60], "coeff_box": 1, "samples": 50,
                               "options": {"random_q_max": 200}}))
    code, out = jcall(["verify", target, "--sweep", str(cfg)], capsys)
    assert code == 0 and out["violations"] == []


def test_lattice_verify_flags(capsys):
    code, out = jcall(["lattice-verify", "--lemma6", "--samples", "50"], capsys)
    assert code == 0 and out["target"] == "lemma6" and out["instances_checked"] == 50
    assert run(["lattice-verify", "--lemma6", "--lemma7"]) == 64


def test_usage_errors_exit_64(capsys, tmp_path):
    assert run([]) == 64
    assert run(["nosuch"]) == 64
    assert run(["poly-solve", "a,b", "7"]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(["verify", "thm3", "--sweep", str(bad)]) == 64
    bad.write_text(json.dumps({"q_range": [2, 10**9]}))
    assert run(["verify", "thm3", "--sweep", str(bad)]) == 64
    assert run(["verify", "thm3", "--sweep", str(tmp_path / "missing.json")]) == 64
    capsys.readouterr()


def test_invalid_instance_exit_3(capsys, tmp_path):
    code, out = jcall(["poly-solve", "4,0,2", "6"], capsys)
    assert code == 3 and out["error"] == "ContentNotCoprime"
    inst = tmp_path / "s.json"
    inst.write_text(json.dumps({"N": 0, "M": 10, "moduli": [{"q": 3, "nu": 5}]}))
    assert run(["sieve-bound", str(inst)]) == 3
    capsys.readouterr()


def test_sieve_bound_verify(capsys, tmp_path):
    inst = tmp_path / "s.json"
    elements = [0, 30, 60, 90]
    inst.write_text(json.dumps({"N": 0, "M": 90, "elements": elements,
                                "moduli": [{"q": q} for q in (2, 3, 5, 7, 11)]}))
    code, out = jcall(["sieve-bound", str(inst), "--verify"], capsys)
    assert code == 0
    assert out["verify"]["ok"]
    assert set(out["reports"]) == {"gallagher", "theorem1", "lambda", "corollary1"}


def test_sieve_bound_violation_exit_2(capsys, tmp_path, monkeypatch):
    # a bound evaluator that claims too little must surface as exit 2
    import largersieve.sieve1d as s1

    class Fake:
        ok = False
        checks = [("planted", False, "S exceeds 0")]

    monkeypatch.setattr(s1, "verify_instance", lambda inst, prec=None: Fake())
    inst = tmp_path / "s.json"
    inst.write_text(json.dumps({"N": 0, "M": 4, "elements": [0, 4], "moduli": [{"q": 2}]}))
    code, out = jcall(["sieve-bound", str(inst), "--verify"], capsys)
    assert code == 2


def test_lattice_bound(capsys, tmp_path):
    inst = construct_lattice_instance(random.Random(3), 2)
    f = tmp_path / "l.json"
    f.write_text(json.dumps(inst.to_dict()))
    code, out = jcall(["lattice-bound", str(f), "--validate"], capsys)
    assert code == 0
    assert out["report"]["strict"] is True
    assert out["points"] < out["report"]["bound"]


def test_lattice_bound_hypothesis_fails_exit_3(capsys, tmp_path):
    # one lattice of index 25 cannot outweigh the region: b_m <= 0
    pts = [(0, 0), (1, 0), (0, 1), (3, 2)]
    inst = LatticeSieveInstance(2, tuple(pts), ((LatticeBasis.scaled_identity(2, 5), 4),),
                                Parallelepiped.box([0, 0], [3, 2]))
    f = tmp_path / "l.json"
    f.write_text(json.dumps(inst.to_dict()))
    code, out = jcall(["lattice-bound", str(f)], capsys)
    assert code == 3 and out["error"] == "InvalidHypothesis"


def test_search_kinds(capsys):
    code, out = jcall(["search", "--count", "40", "--q-max", "200"], capsys)
    assert code == 0 and out["kind"] == "window" and out["extremal_witnesses"]
    code, out = jcall(["search", "--kind", "svk", "--count", "40", "--q-max", "200"], capsys)
    assert code == 0 and out["extremal_witnesses"]


def test_timing_flag(capsys):
    _, out = jcall(["lattice-verify", "--lemma6", "--samples", "5", "--timing"], capsys)
    assert "wall_time" in out


def test_byte_identical_reruns():
    argv = [sys.executable, "-m", "largersieve", "verify", "sieve", "--samples", "30", "--seed", "11"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_parallel_matches_serial(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"degrees": [2, 2], "q_range": [2, 120], "coeff_box": 2}))
    _, serial = jcall(["verify", "thm3", "--sweep", str(cfg)], capsys)
    _, par = jcall(["verify", "thm3", "--sweep", str(cfg), "--workers", "3"], capsys)
    serial.pop("config"), par.pop("config")
    assert serial == par
