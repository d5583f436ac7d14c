import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from orthocover.cli import main
from orthocover.dem import load_dem, write_pgm
from orthocover.plan import nondominated

SMALL = ["--surface", "cos_sum", "--bounds", "-1.5", "1.5", "--grid-res", "80", "--max-iters", "40"]


def run(tmp_path, *argv):
    return main([*argv, "--out-dir", str(tmp_path)])


def test_height_bound_parabola(tmp_path, capsys):
    assert run(tmp_path, "height-bound", "--f", "x^2") == 0
    out = capsys.readouterr().out
    assert out.startswith("D = ")
    assert float(out.split()[2]) == pytest.approx(2.6, abs=0.1)
    obj = json.loads((tmp_path / "height_bound.json").read_text())
    assert obj["bounded"] and obj["D"] == pytest.approx(2.598, abs=0.01)


def test_height_bound_unbounded(tmp_path, capsys):
    assert run(tmp_path, "height-bound", "--f", "sin(x)", "--domain", "-3.14159", "3.14159") == 0
    assert "unbounded" in capsys.readouterr().out


def test_plan_and_divide(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["plan", *SMALL, "--target", "30", "--seed", "3"]
    assert run(a, *argv) == 0
    assert run(b, *argv) == 0
    for name in ("plan.json", "plan.svg", "plan_history.csv", "run_config.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    plan = json.loads((a / "plan.json").read_text())
    assert plan["status"] == "reached" and plan["metrics"]["percent_covered"] >= 30
    rows = list(csv.DictReader((a / "plan_history.csv").open()))
    assert int(rows[-1]["N"]) == len(plan["circles"])

    d = tmp_path / "d"
    assert run(d, "divide", "--plan", str(a / "plan.json"), "--grid-res", "100") == 0
    lab = json.loads((d / "labels.json").read_text())
    assert lab["rows"] == 100 and max(lab["data"]) < len(plan["circles"])
    img = load_dem(str(d / "labels.pgm")).elevations
    np.testing.assert_array_equal(img.ravel(), np.array(lab["data"]) + 1)


def test_plan_unreachable_exit_code(tmp_path):
    code = run(tmp_path, "plan", *SMALL, "--target", "99", "--n-max", "2")
    assert code == 3
    assert json.loads((tmp_path / "plan.json").read_text())["status"] == "target_unreachable"


def test_sequential_plan(tmp_path):
    assert run(tmp_path, "plan", *SMALL, "--algo", "sequential", "--step", "2", "--target", "20") == 0
    hist = list(csv.DictReader((tmp_path / "plan_history.csv").open()))
    assert [int(h["N"]) for h in hist] == list(range(2, 2 * len(hist) + 1, 2))


def test_config_round_trip(tmp_path):
    a = tmp_path / "a"
    assert run(a, "plan", *SMALL, "--target", "25", "--seed", "5", "--cost", "f2") == 0
    cfg = json.loads((a / "run_config.json").read_text())
    assert cfg["command"] == "plan" and cfg["cost"] == "F2" and cfg["seed"] == 5
    b = tmp_path / "b"
    assert run(b, "plan", "--config", str(a / "run_config.json")) == 0
    assert (a / "plan.json").read_bytes() == (b / "plan.json").read_bytes()


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"command": "plan", "nonsense": 1}))
    assert run(tmp_path, "plan", "--config", str(bad)) == 2
    bad.write_text(json.dumps({"command": "pareto"}))
    assert run(tmp_path, "plan", "--config", str(bad)) == 2


def test_divide_single_circle(tmp_path):
    plan = {"circles": [{"x": 0.0, "y": 0.0, "r": 0.5}], "metrics": {}, "provenance": {"bounds": [-1, 1, -1, 1]}}
    p = tmp_path / "plan.json"
    p.write_text(json.dumps(plan))
    assert run(tmp_path, "divide", "--plan", str(p), "--grid-res", "50") == 0
    data = np.array(json.loads((tmp_path / "labels.json").read_text())["data"])
    assert set(np.unique(data)) == {-1, 0}
    assert json.loads((tmp_path / "boundaries.json").read_text()) == []


def test_pareto_csv_nondominated(tmp_path):
    assert run(tmp_path, "pareto", "--surface", "cos_sum", "--bounds", "-2", "2", "--N", "8",
               "--n-points", "3", "--max-iters", "40") == 0
    rows = list(csv.DictReader((tmp_path / "pareto.csv").open()))
    F = np.array([[float(r["f1"]), float(r["f2"])] for r in rows])
    assert len(nondominated(F)) == len(F)
    assert np.all(np.diff(F[:, 0]) >= 0) and np.all(np.diff(F[:, 1]) <= 0)


@pytest.mark.parametrize("mode", ["exact", "polygonal", "elliptical", "circular-avg", "circular-curvature"])
def test_region_modes(tmp_path, mode):
    assert run(tmp_path, "region", "--surface", "plane", "--mode", mode, "--dx", "0.02") == 0
    obj = json.loads((tmp_path / "region.json").read_text())
    assert obj["R"] == pytest.approx(3 * np.tan(np.radians(10)))
    if mode == "exact":
        assert obj["equivalent_radius"] == pytest.approx(obj["R"], rel=0.05)


def test_surface_commands(tmp_path):
    assert run(tmp_path, "curvature", "--surface", "sphere", "--grid-res", "41") == 0
    cur = json.loads((tmp_path / "curvature.json").read_text())
    assert cur["Kmax"] == pytest.approx(0.25, abs=1e-4)
    assert run(tmp_path, "imaging-surface", "--expr", "x^2+y^2", "--bounds", "-2", "2", "--d", "3",
               "--grid-res", "41") == 0
    img = json.loads((tmp_path / "imaging_surface.json").read_text())
    assert img["invalid_count"] > 0
    assert run(tmp_path, "normals", "--f=-sqrt(1-x^2)", "--domain", "-0.95", "0.95",
               "--z-range", "-1", "0.5", "--n-rays", "200") == 0
    nor = json.loads((tmp_path / "normals.json").read_text())
    assert np.allclose(nor["suggested"][0], [0, 0], atol=0.02)


def test_ingest(tmp_path):
    grid = (np.add.outer(np.arange(20), np.arange(30)) * 4).astype(int)
    src = tmp_path / "dem.pgm"
    src.write_bytes(write_pgm(grid))
    out = tmp_path / "out"
    assert run(out, "ingest", str(src), "--smooth", "1") == 0
    obj = json.loads((out / "heightfield.json").read_text())
    assert obj["rows"] == 20 and obj["cols"] == 30
    assert (out / "heightfield.svg").read_text().startswith("<svg")


def test_input_errors(tmp_path):
    assert run(tmp_path, "ingest", str(tmp_path / "missing.pgm")) == 2
    assert run(tmp_path, "height-bound", "--f", "x +* 2") == 2
    assert run(tmp_path, "region", "--surface", "plane", "--point", "9", "9") == 2
    assert run(tmp_path, "divide", "--plan", str(tmp_path / "none.json")) == 2
    with pytest.raises(SystemExit) as exc:
        main(["region", "--mode", "hexagon"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "orthocover.cli", "height-bound", "--f", "x^2",
                           "--out-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("D = 2.59")


def test_ingest_constant_map_has_no_contours(tmp_path):
    src = tmp_path / "flat.pgm"
    src.write_bytes(write_pgm(np.full((12, 12), 90)))
    assert run(tmp_path, "ingest", str(src)) == 0
    assert "<polyline" not in (tmp_path / "heightfield.svg").read_text()


def test_plan_f3_reaches_ninety_percent(tmp_path):
    code = run(tmp_path, "plan", "--algo", "batch", "--cost", "F3", "--target", "90", "--bounds", "-2", "2",
               "--grid-res", "200")
    plan = json.loads((tmp_path / "plan.json").read_text())
    assert code == 0 and plan["metrics"]["percent_covered"] >= 90
