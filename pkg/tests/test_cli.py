import json
import os
import re
import subprocess
import sys
from importlib.resources import files

import jsonschema
import pytest

from hopfq.catalog import bundled_path
from hopfq.cli import SCHEMA_VERSION, SUITES, _render, main, run

SCHEMA = json.loads(files("hopfq").joinpath("data/report.schema.json").read_text())


def bundle(name):
    return str(bundled_path(name))


def failing_labels(result):
    return [c["label"] for e in result["reports"] for c in e["checks"] if not c["pass"]]


def write_variant(tmp_path, name, patch):
    data = json.loads(bundled_path(name).read_text())
    patch(data)
    p = tmp_path / f"{name}-variant.struct"
    p.write_text(json.dumps(data))
    return str(p)


def validate(result):
    jsonschema.validate(result, SCHEMA)
    assert result["schema_version"] == SCHEMA_VERSION


# ---- verify ---------------------------------------------------------------

def test_verify_whq_suite_on_kz2():
    code, result = run(["verify", bundle("kz2"), "--suite", "whq"])
    assert code == 0 and result["pass"] and result["suites"] == ["whq"]
    validate(result)
    assert {e["kind"] for e in result["reports"]} == {"whq"}


def test_verify_octonion_hopf_quasigroup():
    code, result = run(["verify", bundle("octonion"), "--suite", "hopf-quasigroup", "--suite", "whq"])
    assert code == 0
    validate(result)
    whq = [e for e in result["reports"] if e["suite"] == "whq"]
    assert whq[0]["associativity_witness"] is not None and whq[0]["cocommutative"] is True


@pytest.mark.parametrize("name", ["kz2", "projection"])
def test_verify_all_suites(name):
    code, result = run(["verify", bundle(name)])
    assert code == 0, failing_labels(result)
    validate(result)


def test_verify_weak_suites_on_groupoid():
    args = [f"--suite={s}" for s in SUITES if s != "hopf-quasigroup"]
    code, result = run(["verify", bundle("groupoid"), *args])
    assert code == 0, failing_labels(result)


def test_verify_groupoid_not_hopf_quasigroup():
    code, result = run(["verify", bundle("groupoid"), "--suite", "hopf-quasigroup"])
    assert code == 1
    validate(result)
    assert "counit multiplicative" in failing_labels(result)


def test_corrupted_entry_reports_witness(tmp_path):
    def patch(d):
        d["whq"]["H"]["mu"][0][1] = 1
    code, result = run(["verify", write_variant(tmp_path, "kz2", patch), "--suite", "whq"])
    assert code == 1
    validate(result)
    failed = [c for e in result["reports"] for c in e["checks"] if not c["pass"]]
    assert failed and all(c["witness"] is not None for c in failed)


# ---- fundamental ----------------------------------------------------------

def test_fundamental_groupoid():
    code, result = run(["fundamental", bundle("groupoid")])
    assert code == 0
    validate(result)
    mod = [e for e in result["reports"] if e["suite"] == "fundamental"]
    assert mod and mod[0]["dims"]["M^coH"] == 2
    assert "M^coH=2" in _render(result)


def test_fundamental_octonion():
    code, result = run(["fundamental", bundle("octonion")])
    assert code == 0
    validate(result)


def test_fundamental_names_broken_d2_4(tmp_path):
    # shifting φ(e_0⊗e_1) by e_0 keeps (d2-1)-(d2-3) and breaks (d2-4)
    def patch(d):
        d["modules"]["M"]["phi"][0][3] += 1
    code, result = run(["fundamental", write_variant(tmp_path, "kz2", patch)])
    assert code == 1
    validate(result)
    assert "(d2-4)" in failing_labels(result)
    assert re.search(r"FAIL  \(d2-4\)  witness=\d+", _render(result))


def test_fundamental_stops_on_failing_prerequisite(tmp_path):
    def patch(d):
        d["anchor"]["h"]["h"] = [[0, 1], [1, 0]]
    code, result = run(["fundamental", write_variant(tmp_path, "kz2", patch)])
    assert code == 1
    assert not any(e["suite"] == "fundamental" for e in result["reports"])


# ---- equivalence ----------------------------------------------------------

@pytest.mark.parametrize("name,cls,h_l", [("kz2", "i", 1), ("groupoid", "ii", 2), ("octonion", "iii", 1),
                                          ("loop7_plus_k", "iv", 2)])
def test_equivalence_bundles(name, cls, h_l):
    code, result = run(["equivalence", bundle(name)])
    assert code == 0, failing_labels(result)
    validate(result)
    eq = [e for e in result["reports"] if e["suite"] == "equivalence"]
    assert eq[0]["corollary"] == cls and eq[0]["dims"]["H_L"] == h_l
    text = _render(result)
    assert f"corollary ({cls})" in text and f"H_L={h_l}" in text
    assert "triangle 1" in text and "triangle 2" in text


# ---- input errors ----------------------------------------------------------

def test_syntax_error_exit_2(tmp_path):
    p = tmp_path / "bad.struct"
    p.write_text(bundled_path("kz2").read_text().replace('"mu": [', '"mu" [', 1))
    code, result = run(["verify", str(p)])
    assert code == 2
    validate(result)
    assert result["error"]["kind"] == "input" and result["error"]["line"] == 12
    assert "line 12" in _render(result)


def test_unresolved_name_exit_2(tmp_path):
    def patch(d):
        d["anchor"]["h"]["target"] = "nowhere"
    code, result = run(["equivalence", write_variant(tmp_path, "kz2", patch)])
    assert code == 2 and result["error"]["line"] is not None
    validate(result)


def test_max_dim():
    code, result = run(["verify", bundle("kz2x2"), "--max-dim", "2"])
    assert code == 2 and "--max-dim" in result["error"]["message"]
    assert run(["verify", bundle("kz2x2"), "--max-dim", "4", "--suite", "whq"])[0] == 0


def test_bad_builder_parameters_fail_with_witness(tmp_path):
    p = tmp_path / "table.struct"
    p.write_text(json.dumps({"format": "hopfq-structure", "version": 1,
                             "group_table": {"G": {"table": [[0, 1, 2], [1, 0, 2], [2, 2, 0]]}}}))
    code, result = run(["verify", str(p)])
    assert code == 1
    validate(result)
    assert result["error"]["kind"] == "table" and result["error"]["witness"]


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["verify"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        run(["verify", bundle("kz2"), "--suite", "nonsense"])


# ---- output ----------------------------------------------------------------

def test_main_prints_json(capsys):
    assert main(["verify", bundle("kz2"), "--suite", "whq", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    validate(out)
    assert out["exit_code"] == 0


def test_human_output_matches_json():
    _, result = run(["verify", bundle("groupoid"), "--suite", "hopf-quasigroup"])
    text = _render(result)
    for e in result["reports"]:
        for c in e["checks"]:
            assert c["label"] in text
    assert text.splitlines()[-1].startswith("FAIL: ")


def strip_times(result):
    out = json.loads(json.dumps(result))
    out.pop("wall_time")
    for e in out["reports"]:
        e.pop("wall_time")
    return out


def test_output_independent_of_threads(monkeypatch):
    results = []
    for threads in ("1", "4"):
        monkeypatch.setenv("HOPFQ_THREADS", threads)
        results.append(strip_times(run(["verify", bundle("groupoid")])[1]))
    assert results[0] == results[1]


def test_console_script():
    env = dict(os.environ, HOPFQ_THREADS="2")
    proc = subprocess.run([sys.executable, "-m", "hopfq.cli", "verify", bundle("kz2"), "--suite", "anchor"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].startswith("PASS: ")
