"""Phase-plane scans: grids, curve tracing, deterministic exports."""

import json
import math

import numpy as np
import pytest

from zetanet.errors import EmptyWindowError
from zetanet.lseries import make_family
from zetanet.phasescan import (
    PRESETS,
    PhaseScanResult,
    default_window,
    export_scan,
    load_scan,
    resolve_formula,
    scan,
)
from zetanet.thresholds import bipartite_margin

UNIPARTITE_ZETA_ROOT = 3.4787507857339603

ZETA_BIP = {"kind": "bipartite", "l1": {"family": "zeta"}, "l2": {"family": "zeta"}}


def test_resolve_formula_presets():
    spec = resolve_formula("bipthr")
    assert spec["kind"] == "bipartite"
    assert spec["l1"] == {"family": "liouville"}
    assert spec["tag"] == "bipthr"
    assert resolve_formula("EPIDLIOUV")["target"] == 0.5
    assert set(PRESETS) == {"bipthr", "dirthr", "mixthr", "epidliouv"}
    with pytest.raises(ValueError):
        resolve_formula("nosuch")


def test_resolve_formula_dict_specs():
    spec = resolve_formula(ZETA_BIP)
    assert spec["tag"] == "bipartite:zeta:zeta"
    epi = resolve_formula({**ZETA_BIP, "kind": "epidemic", "target": 0.25})
    assert epi["tag"] == "epidemic:zeta:zeta:0.25"
    with pytest.raises(ValueError):
        resolve_formula({**ZETA_BIP, "kind": "upside-down"})
    with pytest.raises(ValueError):
        resolve_formula({**ZETA_BIP, "kind": "epidemic"})  # no target


def test_default_windows():
    assert default_window(resolve_formula("bipthr")) == (3.05, 6.0, 3.05, 6.0)
    assert default_window(resolve_formula("dirthr")) == (2.05, 5.0, 2.05, 5.0)
    assert default_window(resolve_formula(ZETA_BIP)) == (3.05, 6.0, 3.05, 6.0)


def test_window_validation():
    with pytest.raises(EmptyWindowError):
        scan(ZETA_BIP, window=(2.0, 2.9, 3.2, 4.0), resolution=5)
    with pytest.raises(ValueError):
        scan(ZETA_BIP, window=(3.2, 3.2, 3.2, 4.0), resolution=5)
    with pytest.raises(ValueError):
        scan(ZETA_BIP, window=(3.1, 4.0, 3.1, 4.0), resolution=1)


def test_zeta_scan_matches_direct_margins():
    z = make_family("zeta")
    res = scan(ZETA_BIP, window=(3.05, 4.0, 3.05, 4.0), resolution=21)
    assert res.margin.shape == (21, 21)
    assert not np.isnan(res.margin).any()
    for i in (0, 7, 20):
        for j in (3, 13):
            a, b = float(res.alpha_grid[i]), float(res.beta_grid[j])
            assert res.margin[i, j] == bipartite_margin(z, a, z, b).margin
    assert res.phase(0, 0) == "SUPER"  # (3.05, 3.05) below the root
    assert res.phase(20, 20) == "SUB"  # (4.0, 4.0) above it


def test_zeta_scan_curve_crosses_diagonal_at_root():
    res = scan(ZETA_BIP, window=(3.05, 4.0, 3.05, 4.0), resolution=21)
    assert res.zero_curve
    z = make_family("zeta")
    for a, b in res.zero_curve:
        assert abs(bipartite_margin(z, a, z, b).margin) <= res.tol
    nearest = min(res.zero_curve, key=lambda p: abs(p[0] - p[1]))
    assert abs(0.5 * (nearest[0] + nearest[1]) - UNIPARTITE_ZETA_ROOT) < 0.03


def test_scan_marks_outside_cells():
    res = scan(ZETA_BIP, window=(2.5, 4.0, 2.5, 4.0), resolution=16)
    assert res.clipped_window == (3.0, 4.0, 3.0, 4.0)
    outside = np.isnan(res.margin)
    assert outside.any() and not outside.all()
    below = res.alpha_grid <= 3.0
    assert np.isnan(res.margin[below]).all()
    i = int(np.argmax(~below))
    j_ok = res.beta_grid > 3.0
    assert not np.isnan(res.margin[i][j_ok]).any()
    assert res.phase(0, 0) == "OUTSIDE"


def test_scan_threads_bit_identical():
    one = scan(ZETA_BIP, window=(3.05, 4.0, 3.05, 4.0), resolution=15, threads=1)
    three = scan(ZETA_BIP, window=(3.05, 4.0, 3.05, 4.0), resolution=15, threads=3)
    assert np.array_equal(one.margin, three.margin, equal_nan=True)
    assert one.zero_curve == three.zero_curve


def test_phase_labels_synthetic():
    res = PhaseScanResult(
        formula="t",
        spec={},
        alpha_grid=np.array([1.0, 2.0]),
        beta_grid=np.array([1.0, 2.0]),
        margin=np.array([[1.0, -1.0], [0.0, math.nan]]),
    )
    assert res.phase(0, 0) == "SUPER"
    assert res.phase(0, 1) == "SUB"
    assert res.phase(1, 0) == "SUB"
    assert res.phase(1, 1) == "OUTSIDE"


def test_csv_round_trip(tmp_path):
    res = scan(ZETA_BIP, window=(2.8, 4.0, 3.05, 4.0), resolution=13)
    path = str(tmp_path / "grid.csv")
    written = export_scan(res, path, fmt="csv")
    assert written == [path, path + ".curve.csv"]
    with open(path) as fh:
        header = fh.readline().strip()
        body = fh.read()
    assert header == "alpha,beta,margin,phase"
    assert ",,OUTSIDE" in body
    back = load_scan(path)
    assert np.array_equal(back.alpha_grid, res.alpha_grid)
    assert np.array_equal(back.beta_grid, res.beta_grid)
    assert np.array_equal(back.margin, res.margin, equal_nan=True)
    assert back.zero_curve == res.zero_curve


def test_csv_header_validation(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError, match="header"):
        load_scan(str(bad))


def test_json_round_trip(tmp_path):
    res = scan(ZETA_BIP, window=(2.8, 4.0, 3.05, 4.0), resolution=9)
    path = str(tmp_path / "grid.json")
    assert export_scan(res, path, fmt="json") == [path]
    with open(path) as fh:
        doc = json.load(fh)
    assert doc["schema_version"] == 1
    assert doc["formula"] == "bipartite:zeta:zeta"
    back = load_scan(path)
    assert np.array_equal(back.margin, res.margin, equal_nan=True)
    assert back.zero_curve == [tuple(p) for p in res.zero_curve]
    assert back.window == res.window
    assert back.tol == res.tol


def test_json_schema_version_checked(tmp_path):
    path = tmp_path / "old.json"
    path.write_text('{"schema_version": 99}\n')
    with pytest.raises(ValueError, match="schema_version"):
        load_scan(str(path))


def test_export_unknown_format(tmp_path):
    res = scan(ZETA_BIP, window=(3.05, 4.0, 3.05, 4.0), resolution=5)
    with pytest.raises(ValueError):
        export_scan(res, str(tmp_path / "x.bin"), fmt="parquet")


def test_signed_presets_are_everywhere_subcritical():
    # the three signed-family presets have no zero curve in their default
    # windows; the margins stay strictly negative where defined
    for tag in ("bipthr", "dirthr", "mixthr"):
        res = scan(tag, resolution=15)
        finite = res.margin[np.isfinite(res.margin)]
        assert finite.size
        assert (finite < 0).all(), tag
        assert res.zero_curve == [], tag


def test_epidemic_preset_target_unreachable():
    res = scan("epidliouv", resolution=15)
    finite = res.margin[np.isfinite(res.margin)]
    # margin = target - product stays negative: the critical product
    # exceeds 0.5 across the window
    assert (finite < 0).all()
    assert res.zero_curve == []
