import json

import numpy as np
import pytest

from zscan import fixtures
from zscan.cli import main
from zscan.equivalence import canonical_key, relabel
from zscan.realization import projective_transfer, random_matrix, realize
from zscan.store import key_hash, write_json


@pytest.fixture
def out(tmp_path):
    return tmp_path / "run"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_enumerate_counts(capsys, out):
    code, text = run(capsys, "enumerate", "-n", "2", "--out", str(out), "--format", "json")
    assert code == 0
    assert json.loads(text)["counts"] == [1, 2, 5]
    summary = json.loads((out / "summary.json").read_text())
    assert summary["counts"] == [1, 2, 5]
    assert summary["header"]["seed"] == 0
    for j in range(3):
        data = json.loads((out / f"classes-{j}.json").read_text())
        assert data["n"] == j and data["header"]["key_format"] == "v1"
    assert (out / "timing.json").exists()


def test_enumerate_zero(capsys, out):
    code, text = run(capsys, "--format", "json", "enumerate", "-n", "0", "--out", str(out))
    assert code == 0 and json.loads(text)["counts"] == [1]


def test_env_var_output(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ZSCAN_OUT", str(tmp_path / "env"))
    assert run(capsys, "enumerate", "-n", "1")[0] == 0
    assert (tmp_path / "env" / "classes-1.json").exists()


def test_resume_is_byte_identical(capsys, out):
    run(capsys, "enumerate", "-n", "4", "--out", str(out))
    before = {p.name: p.read_bytes() for p in out.glob("classes-*.json")}
    before["summary.json"] = (out / "summary.json").read_bytes()
    (out / "classes-2.json").unlink()
    run(capsys, "enumerate", "-n", "4", "--out", str(out), "--resume")
    timing = json.loads((out / "timing.json").read_text())["levels"]
    assert [t["source"] for t in timing] == ["resumed", "resumed", "computed", "computed", "computed"]
    after = {p.name: p.read_bytes() for p in out.glob("classes-*.json")}
    after["summary.json"] = (out / "summary.json").read_bytes()
    assert after == before


def test_parallel_run_identical(capsys, tmp_path):
    run(capsys, "enumerate", "-n", "4", "--out", str(tmp_path / "a"))
    run(capsys, "enumerate", "-n", "4", "--out", str(tmp_path / "b"), "--workers", "2")
    for j in range(5):
        assert (tmp_path / "a" / f"classes-{j}.json").read_bytes() == \
            (tmp_path / "b" / f"classes-{j}.json").read_bytes()


def test_bad_config(capsys, out):
    assert main(["enumerate", "-n", "-1", "--out", str(out)]) == 3
    assert main(["enumerate", "-n", "2", "--workers", "0", "--out", str(out)]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--out", str(out)])
    assert exc.value.code == 3


def test_io_failure(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["enumerate", "-n", "1", "--out", str(blocker / "sub")]) == 2


def test_explain_fixture(capsys, fixture_dir):
    code, text = run(capsys, "explain", str(fixture_dir / "four-line.json"))
    assert code == 0
    assert "P(1,2) | characteristic is (1, 1, 1), lines are 1, 2, tangency is 1" in text
    assert "excluded by Lemma 2 (witness L4, P(3,4))" in text


def test_explain_triangle_and_conic(capsys, fixture_dir):
    code, text = run(capsys, "explain", str(fixture_dir / "tangent-triangle.json"))
    assert code == 0 and "excluded by Lemma 1 (witness L1, no constraints)" in text
    code, text = run(capsys, "--format", "json", "explain", str(fixture_dir / "conic-only.json"))
    data = json.loads(text)
    assert code == 0 and data["table"] == [] and data["excluded"]


def test_explain_by_key(capsys, out):
    run(capsys, "enumerate", "-n", "4", "--out", str(out))
    key = canonical_key(fixtures.four_line_example())
    code, text = run(capsys, "explain", key, "--out", str(out))
    assert code == 0 and "excluded by Lemma 2" in text
    assert main(["explain", "n=4:(9,9,[9])", "--out", str(out)]) == 4
    assert main(["explain", "n=7:", "--out", str(out)]) == 4


def test_explain_every_key_names_witnesses(capsys, out):
    run(capsys, "enumerate", "-n", "3", "--out", str(out))
    for j in range(4):
        for c in json.loads((out / f"classes-{j}.json").read_text())["classes"]:
            code, text = run(capsys, "--format", "json", "explain", c["key"], "--out", str(out))
            data = json.loads(text)
            assert code == 0
            for v in data["verdicts"]:
                if v["excluded"] and data["n"] > 0:
                    assert v["witness_line"] is not None


def test_explain_invalid_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "points": [{"lines": [1], "on_conic": True}]}))
    assert main(["explain", str(bad)]) == 5
    bad.write_text("{not json")
    assert main(["explain", str(bad)]) == 5


def test_realize_commands(capsys, out, fixture_dir):
    code, _ = run(capsys, "realize", str(fixture_dir / "four-line.json"), "--out", str(out))
    assert code == 0
    key = canonical_key(fixtures.four_line_example())
    data = json.loads((out / f"realization-{key_hash(key)}.json").read_text())
    assert data["status"] == "Realized" and data["geometry"]["residual"] < 1e-9
    assert data["header"]["seed"] == 0
    code, _ = run(capsys, "realize", str(fixture_dir / "conic-only.json"), "--out", str(out))
    assert code == 0
    code, _ = run(capsys, "realize", str(fixture_dir / "four-line.json"), "--budget", "0", "--out", str(out))
    assert code == 10
    data = json.loads((out / f"realization-{key_hash(key)}.json").read_text())
    assert data["attempts"] == 0 and data["geometry"] is None
    assert main(["realize", str(fixture_dir / "four-line.json"), "--tol-res", "0", "--out", str(out)]) == 3


def test_realize_by_key_and_determinism(capsys, out):
    run(capsys, "enumerate", "-n", "3", "--out", str(out))
    key = canonical_key(fixtures.tangent_triangle())
    assert main(["realize", key, "--out", str(out), "--seed", "5"]) == 0
    path = out / f"realization-{key_hash(key)}.json"
    first = path.read_bytes()
    assert main(["realize", key, "--out", str(out), "--seed", "5"]) == 0
    assert path.read_bytes() == first


def test_compare_combinatorial(capsys, tmp_path, fixture_dir):
    a = fixtures.four_line_example()
    f2 = tmp_path / "relabeled.json"
    write_json(f2, relabel(a, [3, 1, 4, 2]).to_json())
    code, text = run(capsys, "--format", "json", "compare", str(fixture_dir / "four-line.json"), str(f2))
    assert code == 0 and json.loads(text)["sigma"]
    code, _ = run(capsys, "compare", str(fixture_dir / "four-line.json"), str(fixture_dir / "tangent-triangle.json"))
    assert code == 12
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["compare", str(bad), str(f2)]) == 5


def test_compare_realized(capsys, tmp_path):
    g = realize(fixtures.four_line_example(), seed=1).geometry
    h = projective_transfer(g, random_matrix(np.random.default_rng(0)))
    write_json(tmp_path / "g.json", g.to_json())
    write_json(tmp_path / "h.json", h.to_json())
    code, text = run(capsys, "--format", "json", "compare", str(tmp_path / "g.json"), str(tmp_path / "h.json"))
    assert code == 0 and json.loads(text)["projective"]["verdict"] == "Equivalent"

    a = fixtures.two_line("transverse-disjoint")
    write_json(tmp_path / "r1.json", {"geometry": realize(a, seed=1).geometry.to_json()})
    write_json(tmp_path / "r2.json", {"geometry": realize(a, seed=2).geometry.to_json()})
    assert main(["compare", str(tmp_path / "r1.json"), str(tmp_path / "r2.json")]) == 11


def test_export(capsys, out):
    run(capsys, "enumerate", "-n", "4", "--out", str(out))
    code, _ = run(capsys, "export", "--out", str(out))
    assert code == 0
    for name in ("report-4.json", "report-4.txt", "report.csv", "class-counts.png", "filters.png"):
        assert (out / name).exists()
    assert (out / "class-counts.png").read_bytes()[:4] == b"\x89PNG"


def test_export_without_catalog(capsys, tmp_path):
    assert main(["export", "--out", str(tmp_path / "empty")]) == 4
