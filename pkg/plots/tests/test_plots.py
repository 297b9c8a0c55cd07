import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1]))

import plots

DATA = pathlib.Path(__file__).parent / "data"

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def write_timeseries(path, n=50, final=0.92553):
    t = np.linspace(0.0, 1.0, n)
    f = 1.0 - (1.0 - final) * t
    lines = ["t,F"] + [f"{ti:.9g},{fi:.12g}" for ti, fi in zip(t, f)]
    path.write_text("\n".join(lines) + "\n")
    return float(f[-1])


def test_heatmap_golden_scan(tmp_path):
    out = tmp_path / "scan.png"
    facts = plots.render("heatmap", str(DATA / "scan_h.csv"), str(out))
    assert facts["cells"] == 41 * 41 == 1681
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_heatmap_color_scale_spans_min_to_one(tmp_path):
    data = plots.load_csv(str(DATA / "scan_h.csv"), "heatmap")
    facts = plots.render("heatmap", str(DATA / "scan_h.csv"), str(tmp_path / "s.png"))
    assert facts["vmax"] == 1.0
    assert facts["vmin"] == pytest.approx(float(data[:, 2].min()), abs=0)


def test_heatmap_incomplete_grid_rejected(tmp_path):
    src = tmp_path / "bad.csv"
    src.write_text("x,y,fidelity\n0,0,1\n0,1,0.5\n1,0,0.7\n")
    with pytest.raises(plots.SchemaError, match="grid is not complete"):
        plots.render("heatmap", str(src), str(tmp_path / "bad.png"))


def test_trajectory_closed_path_defect_annotated(tmp_path):
    out = tmp_path / "traj.png"
    facts = plots.render("trajectory3d", str(DATA / "traj_h.csv"), str(out))
    assert facts["points"] == 600
    assert facts["closure_defect"] < 1e-6
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_timeseries_final_value_matches_last_row(tmp_path):
    src = tmp_path / "ts.csv"
    final = write_timeseries(src)
    facts = plots.render("timeseries", str(src), str(tmp_path / "ts.png"))
    assert facts["final_value"] == final
    assert facts["points"] == 50


def test_schema_mismatch_exits_nonzero_with_diagnostic(tmp_path, capsys):
    src = tmp_path / "ts.csv"
    write_timeseries(src)
    rc = plots.main(["--kind", "heatmap", "--in", str(src), "--out", str(tmp_path / "x.png")])
    assert rc != 0
    err = capsys.readouterr().err
    assert "['x', 'y', 'fidelity']" in err and "['t', 'F']" in err
    assert not (tmp_path / "x.png").exists()


def test_missing_file_reports_io_error(tmp_path, capsys):
    rc = plots.main(["--kind", "timeseries", "--in", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "x.png")])
    assert rc == 3
    assert "nope.csv" in capsys.readouterr().err


def test_cli_end_to_end_with_title(tmp_path, capsys):
    src = tmp_path / "ts.csv"
    write_timeseries(src, final=0.9956)
    out = tmp_path / "cz.png"
    rc = plots.main(["--kind", "timeseries", "--in", str(src),
                     "--out", str(out), "--title", "CZ fidelity"])
    assert rc == 0
    assert "final_value: 0.9956" in capsys.readouterr().out
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_rendering_is_deterministic_and_read_only(tmp_path):
    src = DATA / "traj_h.csv"
    before = src.read_bytes()
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    plots.render("trajectory3d", str(src), str(a))
    plots.render("trajectory3d", str(src), str(b))
    assert a.read_bytes() == b.read_bytes()
    assert src.read_bytes() == before
