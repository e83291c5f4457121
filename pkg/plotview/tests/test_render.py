"""Reader validation and rendering behavior against handcrafted exports."""

import json
import os
import subprocess
import sys

import pytest

from plotview.render import FigureSpec, SchemaError, main, read_curve_csv, read_scan_csv, render

HEADER = "alpha,beta,margin,phase\n"


def grid_csv(tmp_path, body, name="grid.csv", header=HEADER):
    path = tmp_path / name
    path.write_text(header + body)
    return str(path)


def toy_super(tmp_path):
    return grid_csv(
        tmp_path,
        "1,1,0.5,SUPER\n1,2,0.4,SUPER\n2,1,0.3,SUPER\n2,2,0.2,SUPER\n",
    )


def test_all_super_toy_single_region(tmp_path):
    out = str(tmp_path / "toy.png")
    summary = render(FigureSpec(toy_super(tmp_path), out))
    assert summary["cells"] == 4
    assert summary["super"] == 4
    assert summary["sub"] == 0
    assert summary["outside"] == 0
    assert summary["curve_points"] == 0
    assert os.path.getsize(out) > 0


def test_default_epsilon_is_hundredth_of_max(tmp_path):
    path = grid_csv(
        tmp_path,
        "1,1,2.0,SUPER\n1,2,-0.015,SUB\n2,1,0.5,SUPER\n2,2,-1.0,SUB\n",
    )
    summary = render(FigureSpec(path, str(tmp_path / "g.png")))
    assert summary["epsilon"] == pytest.approx(0.02)
    assert summary["band"] == 1  # only |-0.015| falls under 0.02


def test_explicit_epsilon_overrides(tmp_path):
    path = grid_csv(
        tmp_path,
        "1,1,2.0,SUPER\n1,2,-0.015,SUB\n2,1,0.5,SUPER\n2,2,-1.0,SUB\n",
    )
    summary = render(FigureSpec(path, str(tmp_path / "g.png"), epsilon=0.6))
    assert summary["epsilon"] == 0.6
    assert summary["band"] == 2
    with pytest.raises(ValueError, match="nonnegative"):
        render(FigureSpec(path, str(tmp_path / "g.png"), epsilon=-0.1))


def test_outside_cells_counted_and_excluded_from_band(tmp_path):
    path = grid_csv(
        tmp_path,
        "1,1,,OUTSIDE\n1,2,0.001,SUPER\n2,1,-0.4,SUB\n2,2,0.7,SUPER\n",
    )
    summary = render(FigureSpec(path, str(tmp_path / "g.png"), epsilon=0.01))
    assert summary["outside"] == 1
    assert summary["super"] == 2
    assert summary["sub"] == 1
    assert summary["band"] == 1


def test_curve_companion_overlaid(tmp_path):
    path = grid_csv(
        tmp_path,
        "1,1,0.5,SUPER\n1,2,-0.1,SUB\n2,1,0.2,SUPER\n2,2,-0.3,SUB\n",
    )
    (tmp_path / "grid.csv.curve.csv").write_text("alpha,beta\n1.0,1.4\n2.0,1.2\n")
    summary = render(FigureSpec(path, str(tmp_path / "g.png")))
    assert summary["curve_points"] == 2


def test_missing_phase_column(tmp_path):
    path = grid_csv(tmp_path, "1,1,0.5\n", header="alpha,beta,margin\n")
    with pytest.raises(SchemaError, match="'phase'"):
        read_scan_csv(path)


def test_unexpected_column(tmp_path):
    path = grid_csv(
        tmp_path, "1,1,0.5,SUPER,x\n", header="alpha,beta,margin,phase,extra\n"
    )
    with pytest.raises(SchemaError, match="'extra'"):
        read_scan_csv(path)


def test_out_of_order_columns(tmp_path):
    path = grid_csv(tmp_path, "1,0.5,1,SUPER\n", header="alpha,margin,beta,phase\n")
    with pytest.raises(SchemaError, match="'margin'"):
        read_scan_csv(path)


def test_unknown_phase_value(tmp_path):
    path = grid_csv(tmp_path, "1,1,0.5,MID\n")
    with pytest.raises(SchemaError, match="'phase'"):
        read_scan_csv(path)


def test_empty_margin_needs_outside(tmp_path):
    path = grid_csv(tmp_path, "1,1,,SUPER\n")
    with pytest.raises(SchemaError, match="'margin'"):
        read_scan_csv(path)


def test_nonnumeric_margin(tmp_path):
    path = grid_csv(tmp_path, "1,1,abc,SUPER\n")
    with pytest.raises(SchemaError, match="'margin'"):
        read_scan_csv(path)


def test_ragged_grid_rejected(tmp_path):
    path = grid_csv(tmp_path, "1,1,0.5,SUPER\n1,2,0.4,SUPER\n2,1,0.3,SUPER\n")
    with pytest.raises(SchemaError, match="grid"):
        read_scan_csv(path)


def test_curve_header_checked(tmp_path):
    curve = tmp_path / "c.curve.csv"
    curve.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError, match="'alpha'"):
        read_curve_csv(str(curve))


def test_main_success_prints_summary(tmp_path, capsys):
    out = str(tmp_path / "toy.png")
    rc = main(["--in", toy_super(tmp_path), "--out", out, "--title", "toy"])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["out"] == out
    assert summary["super"] == 4
    assert "render --in" in summary["caption"]
    assert os.path.getsize(out) > 0


def test_main_schema_error_exit(tmp_path, capsys):
    path = grid_csv(tmp_path, "1,1,0.5\n", header="alpha,beta,margin\n")
    rc = main(["--in", path, "--out", str(tmp_path / "x.png")])
    assert rc != 0
    err = capsys.readouterr().err
    assert "schema mismatch" in err and "'phase'" in err


def test_main_missing_input_exit(tmp_path, capsys):
    rc = main(["--in", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "absent.csv" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = tmp_path / "toy.png"
    proc = subprocess.run(
        [sys.executable, "-m", "plotview.render", "--in", toy_super(tmp_path), "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["cells"] == 4
    assert out.stat().st_size > 0


def test_end_to_end_scan_export(tmp_path):
    pytest.importorskip("zetanet")
    from zetanet.phasescan import export_scan, scan

    result = scan(
        {"kind": "bipartite", "l1": {"family": "zeta"}, "l2": {"family": "zeta"}},
        window=(3.2, 4.0, 3.2, 4.0),
        resolution=30,
    )
    csv_path = str(tmp_path / "fig.csv")
    export_scan(result, csv_path)
    summary = render(FigureSpec(csv_path, str(tmp_path / "fig.png")))
    assert summary["super"] > 0
    assert summary["sub"] > 0
    assert summary["curve_points"] > 0
    assert summary["band"] > 0
    assert os.path.getsize(summary["out"]) > 0
