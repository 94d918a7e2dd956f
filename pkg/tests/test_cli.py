import io
import json
import sys

import pytest

from hurwitz import cli


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = cli.main(argv)
    finally:
        sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


def test_compute_all_methods():
    code, out, _ = run_cli(
        ["compute", "--genus", "0", "--mu", "2,1", "--nu", "2,1", "--method", "all"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "4"
    assert doc["agree"] is True
    assert set(doc["values"]) == {"permutation", "ribbon", "tropical"}
    assert "timings_ms" not in doc


def test_compute_single_method():
    code, out, _ = run_cli(
        ["compute", "--genus", "1", "--mu", "2", "--nu", "2", "--method", "tropical"]
    )
    assert code == 0
    assert json.loads(out)["value"] == "1/2"


def test_compute_degree_mismatch_exits_one():
    code, _, err = run_cli(["compute", "--genus", "0", "--mu", "3", "--nu", "2"])
    assert code == 1
    assert "error" in err


def test_compute_r_zero_graph_method_exits_one():
    code, _, err = run_cli(
        ["compute", "--genus", "0", "--mu", "5", "--nu", "5", "--method", "ribbon"]
    )
    assert code == 1


def test_compute_timings_flag():
    code, out, _ = run_cli(
        [
            "compute", "--genus", "0", "--mu", "1,1", "--nu", "2",
            "--method", "permutation", "--timings",
        ]
    )
    assert code == 0
    assert "timings_ms" in json.loads(out)


def test_compute_deterministic_output():
    argv = ["compute", "--genus", "0", "--mu", "2,1", "--nu", "2,1"]
    _, out1, _ = run_cli(argv)
    _, out2, _ = run_cli(argv)
    assert out1 == out2


def test_enumerate_monodromy_sets():
    code, out, _ = run_cli(
        ["enumerate", "--kind", "monodromy-sets", "--genus", "1", "--mu", "2", "--nu", "2"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    doc = json.loads(lines[0])
    assert doc["taus"] == ["(1 2)", "(1 2)"]


def test_enumerate_hrgs():
    code, out, _ = run_cli(
        ["enumerate", "--kind", "hrgs", "--genus", "0", "--mu", "1,1", "--nu", "2"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    doc = json.loads(lines[0])
    assert doc["aut"] == 1
    assert doc["hrg"]["darts"] == 4


def test_enumerate_skeletons_needs_mnr():
    code, _, err = run_cli(["enumerate", "--kind", "skeletons"])
    assert code == 1
    code, out, _ = run_cli(
        ["enumerate", "--kind", "skeletons", "--m", "1", "--n", "1", "--r", "2"]
    )
    assert code == 0
    assert len(out.strip().splitlines()) == 1


def test_enumerate_monodromy_graphs():
    code, out, _ = run_cli(
        ["enumerate", "--kind", "monodromy-graphs", "--genus", "0", "--mu", "2,1", "--nu", "2,1"]
    )
    assert code == 0
    assert len(out.strip().splitlines()) == 2


def test_enumerate_dot_format():
    code, out, _ = run_cli(
        ["enumerate", "--kind", "tropical-graphs", "--m", "1", "--n", "1", "--r", "2", "--format", "dot"]
    )
    assert code == 0
    assert out.startswith("digraph")
    code, _, _ = run_cli(
        ["enumerate", "--kind", "monodromy-sets", "--genus", "1", "--mu", "2", "--nu", "2", "--format", "dot"]
    )
    assert code == 1


def test_enumerate_deterministic():
    argv = ["enumerate", "--kind", "monodromy-sets", "--genus", "0", "--mu", "2,1", "--nu", "2,1"]
    _, out1, _ = run_cli(argv)
    _, out2, _ = run_cli(argv)
    assert out1 == out2 and len(out1.strip().splitlines()) == 24


def test_verify_small_sweep():
    code, out, _ = run_cli(["verify", "--max-d", "3", "--max-r", "3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["all_agree"] is True
    assert doc["checked"] > 0
    for res in doc["results"]:
        assert res["agree"] and res["roundtrip_matched"]


def test_verify_vacuous_sweep():
    code, out, _ = run_cli(["verify", "--max-d", "1", "--max-r", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["checked"] == 0 and doc["all_agree"] is True


def test_verify_worker_env(monkeypatch):
    monkeypatch.setenv("HURWITZ_THREADS", "2")
    assert cli.worker_count() == 2
    monkeypatch.setenv("HURWITZ_THREADS", "0")
    assert cli.worker_count() >= 1
    monkeypatch.delenv("HURWITZ_THREADS")
    assert cli.worker_count() == 1


def test_chambers_command():
    code, out, _ = run_cli(
        ["chambers", "--genus", "0", "--m", "2", "--n", "2", "--dmax", "8"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["walls"] == ["mu1=nu1", "mu1=nu2"]
    assert len(doc["chambers"]) == 4
    for ch in doc["chambers"]:
        assert ch["holdout_passed"] and ch["degree"] <= 1 and ch["degree_ok"]


def test_chambers_r_zero_family_rejected():
    code, _, err = run_cli(["chambers", "--genus", "0", "--m", "1", "--n", "1"])
    assert code == 1


def test_chambers_genus_one():
    code, out, _ = run_cli(
        ["chambers", "--genus", "1", "--m", "1", "--n", "1", "--dmax", "8"]
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["chambers"]) == 1
    assert doc["chambers"][0]["degree"] <= 3


def test_roundtrip_command():
    code, out, _ = run_cli(["roundtrip", "--genus", "0", "--mu", "2,1", "--nu", "2,1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["matched"] is True
    assert doc["classes_ribbon"] == doc["classes_permutation"] == 4
