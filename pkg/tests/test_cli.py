"""End-to-end command-line checks through subprocess."""

import json
import math
import os
import subprocess
import sys

import pytest

ZETA_2 = 1.6449340668482264
LIOUVILLE_3 = 0.8463351937086948  # zeta(6)/zeta(3)
PSI_ZETA_3_5 = -0.184431520416382
TC2_ZETA_3_3 = 0.3284144214651332
CLUSTERING_ZETA_4_5_5_5 = 0.08392539265366059


def run_cli(*args, cwd=None, env=None):
    full_env = dict(os.environ)
    full_env.pop("ZETANET_THREADS", None)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "zetanet.cli", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
        env=full_env,
        timeout=300,
    )


def payload_of(proc):
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_eval_zeta():
    proc = run_cli("eval", "--family", "zeta", "--s", "2")
    doc = payload_of(proc)
    assert doc["command"] == "eval"
    assert doc["value"] == pytest.approx(ZETA_2, rel=1e-12)
    assert doc["tail_bound"] < 1e-10
    assert doc["family"] == {"family": "zeta"}
    assert doc["config"]["command"] == "eval"
    assert proc.stderr.strip()  # prose goes to stderr


def test_eval_liouville_closed_form():
    doc = payload_of(run_cli("eval", "--family", "liouville", "--s", "3"))
    assert doc["value"] == pytest.approx(LIOUVILLE_3, rel=1e-12)


def test_eval_partial_sum():
    doc = payload_of(
        run_cli("eval", "--family", "liouville", "--s", "3", "--n-terms", "500")
    )
    assert doc["terms_used"] == 500
    assert abs(doc["value"] - LIOUVILLE_3) <= doc["tail_bound"]


def test_eval_domain_error_exit_2():
    proc = run_cli("eval", "--family", "zeta", "--s", "0.5")
    assert proc.returncode == 2
    assert "domain error" in proc.stderr
    assert proc.stdout == ""


def test_usage_errors_exit_1():
    assert run_cli().returncode == 1
    assert run_cli("eval", "--family", "zeta").returncode == 1  # missing --s
    proc = run_cli("threshold", "--kind", "pentagonal", "--alpha", "3.5")
    assert proc.returncode == 1
    assert "usage" in proc.stderr


def test_threshold_bipartite():
    doc = payload_of(
        run_cli("threshold", "--kind", "bipartite", "--l1", "zeta", "--alpha", "3.5")
    )
    assert doc["margin"] == pytest.approx(PSI_ZETA_3_5, rel=1e-12)
    assert doc["phase"] == "SUB"
    assert doc["beta"] == 3.5  # defaults to alpha
    assert doc["formula"] == "bipartite_giant"


def test_threshold_hurwitz_spec_string():
    base = payload_of(
        run_cli("threshold", "--kind", "bipartite", "--l1", "zeta", "--alpha", "3.5")
    )
    viah = payload_of(
        run_cli("threshold", "--kind", "bipartite", "--l1", "hurwitz:k0=0",
                "--alpha", "3.5")
    )
    assert viah["margin"] == pytest.approx(base["margin"], rel=1e-10)


def test_threshold_epidemic_with_transmissibilities():
    doc = payload_of(
        run_cli("threshold", "--kind", "epidemic", "--alpha", "3.3",
                "--tmf", "0.64", "--tfm", "0.6")
    )
    assert doc["critical_product"] == pytest.approx(TC2_ZETA_3_3, rel=1e-12)
    assert doc["margin"] == pytest.approx(0.64 * 0.6 - TC2_ZETA_3_3, rel=1e-12)
    assert doc["phase"] == "SUPER"


def test_threshold_clustering():
    doc = payload_of(
        run_cli("threshold", "--kind", "clustering", "--alpha", "4.5",
                "--beta", "5.5")
    )
    assert doc["value"] == pytest.approx(CLUSTERING_ZETA_4_5_5_5, rel=1e-12)
    assert doc["in_range"] is True


def test_scan_writes_grid_curve_and_config(tmp_path):
    proc = run_cli(
        "scan", "--kind", "bipartite", "--l1", "zeta",
        "--window", "3.05", "4", "3.05", "4", "--res", "10",
        "--out", "grid.csv", "--threads", "1", cwd=tmp_path,
    )
    doc = payload_of(proc)
    assert doc["cells"] == 100
    phases = doc["phases"]
    assert phases["SUPER"] + phases["SUB"] + phases["OUTSIDE"] == 100
    assert phases["SUPER"] > 0 and phases["SUB"] > 0
    assert doc["curve_points"] > 0
    for name in ("grid.csv", "grid.csv.curve.csv", "grid.csv.config.json"):
        assert (tmp_path / name).exists()
    with open(tmp_path / "grid.csv.config.json") as fh:
        sidecar = json.load(fh)
    assert sidecar == doc["config"]
    assert sidecar["out"] == "grid.csv"


def test_scan_preset_default_filename(tmp_path):
    doc = payload_of(run_cli("scan", "--eq", "bipthr", "--res", "6",
                             "--threads", "1", cwd=tmp_path))
    assert (tmp_path / "bipthr_6.csv").exists()
    assert doc["phases"]["SUPER"] == 0
    assert doc["curve_points"] == 0


def test_scan_deterministic_across_thread_counts(tmp_path):
    args = ("scan", "--kind", "bipartite", "--l1", "zeta",
            "--window", "3.05", "4", "3.05", "4", "--res", "8")
    payload_of(run_cli(*args, "--out", "one.csv", "--threads", "1", cwd=tmp_path))
    payload_of(run_cli(*args, "--out", "two.csv", "--threads", "2", cwd=tmp_path))
    doc = payload_of(run_cli(*args, "--out", "env.csv", cwd=tmp_path,
                             env={"ZETANET_THREADS": "3"}))
    assert doc["config"]["threads"] == 3
    one = (tmp_path / "one.csv").read_bytes()
    assert (tmp_path / "two.csv").read_bytes() == one
    assert (tmp_path / "env.csv").read_bytes() == one
    curve = (tmp_path / "one.csv.curve.csv").read_bytes()
    assert (tmp_path / "two.csv.curve.csv").read_bytes() == curve


def test_scan_config_file_merging(tmp_path):
    (tmp_path / "scan.cfg").write_text("res = 9\nout = fromcfg.csv\n")
    doc = payload_of(run_cli("scan", "--eq", "bipthr", "--config", "scan.cfg",
                             "--res", "7", "--threads", "1", cwd=tmp_path))
    assert doc["cells"] == 49  # explicit flag beats the config file
    assert (tmp_path / "fromcfg.csv").exists()  # config supplies the rest


def test_scan_config_rejects_unknown_key(tmp_path):
    (tmp_path / "bad.cfg").write_text("resolution = 9\n")
    proc = run_cli("scan", "--eq", "bipthr", "--config", "bad.cfg", cwd=tmp_path)
    assert proc.returncode == 1
    assert "resolution" in proc.stderr


def test_sample_bipartite_replicates(tmp_path):
    args = ("sample", "--bipartite", "--l1", "zeta", "--alpha", "3.2",
            "--n", "3000", "--seed", "5", "--replicates", "2",
            "--measure", "giant", "--out", "g.txt")
    doc = payload_of(run_cli(*args, cwd=tmp_path))
    assert doc["mode"] == "bipartite"
    assert [r["seed"] for r in doc["replicates"]] == [5, 4]  # 5 ^ 0, 5 ^ 1
    for rec in doc["replicates"]:
        assert 0.0 <= rec["giant_fraction"] <= 1.0
    agg = doc["aggregate"]
    assert (
        agg["giant_fraction_min"]
        <= agg["giant_fraction_mean"]
        <= agg["giant_fraction_max"]
    )
    for name in ("g.r0.txt", "g.r0.txt.manifest.json", "g.r1.txt",
                 "g.txt.config.json"):
        assert (tmp_path / name).exists()
    again = payload_of(run_cli(*args, cwd=tmp_path))
    assert again["replicates"] == doc["replicates"]


def test_sample_histogram_measure(tmp_path):
    doc = payload_of(
        run_cli("sample", "--bipartite", "--alpha", "3.2", "--n", "3000",
                "--seed", "11", "--measure", "histogram", cwd=tmp_path)
    )
    rec = doc["replicates"][0]
    assert len(rec["degrees_a"]) == min(rec["k_max"], 64) + 1
    assert rec["degrees_a"][0] == 0
    assert rec["degrees_a_tail"] >= 0
    assert rec["degrees_a_mean"] == pytest.approx(rec["mean_degree_a"], abs=0.15)


def test_sample_signed_family_exit_3():
    proc = run_cli("sample", "--directed", "--l1", "mobius", "--alpha", "3.5",
                   "--n", "100")
    assert proc.returncode == 3
    assert "sampling error" in proc.stderr


def test_sample_unknown_measure_exit_2():
    proc = run_cli("sample", "--bipartite", "--alpha", "3.5", "--n", "100",
                   "--measure", "entropy")
    assert proc.returncode == 2


def test_percolate_round_trip(tmp_path):
    payload_of(run_cli("sample", "--bipartite", "--alpha", "3.1", "--n", "2000",
                       "--seed", "3", "--out", "net.txt", cwd=tmp_path))
    doc = payload_of(run_cli("percolate", "--graph", "net.txt", "--tmf", "1",
                             "--tfm", "1", "--trials", "10", "--seed", "4",
                             cwd=tmp_path))
    assert doc["population"] == 4000
    assert doc["cutoff"] == max(2, math.isqrt(4000))
    assert doc["mean_size"] >= 1.0
    assert 0.0 <= doc["giant_fraction"] <= 1.0


def test_percolate_missing_file_exit_2(tmp_path):
    proc = run_cli("percolate", "--graph", "missing.txt", "--tmf", "0.5",
                   cwd=tmp_path)
    assert proc.returncode == 2
    assert "missing.txt" in proc.stderr


def test_algebra_verify():
    doc = payload_of(run_cli("algebra", "--op", "verify", "--f", "liouville",
                             "--completely", "--n-max", "2000"))
    assert doc["multiplicative"] is True
    assert doc["witness"] is None
    doc = payload_of(run_cli("algebra", "--op", "verify", "--f", "phi",
                             "--completely", "--n-max", "100"))
    assert doc["multiplicative"] is False
    assert doc["witness"] == [2, 2]


def test_algebra_convolution_inverts_unit():
    doc = payload_of(run_cli("algebra", "--op", "convolve", "--f", "mobius",
                             "--g", "unit", "--n-max", "50"))
    values = doc["values"]
    assert values[0] == 1
    assert all(v == 0 for v in values[1:])


def test_algebra_inverse_requires_completely_multiplicative():
    proc = run_cli("algebra", "--op", "inverse", "--f", "phi", "--n-max", "50")
    assert proc.returncode == 2
