import argparse
import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from harmonic_aaa import cli, geometry
from harmonic_aaa.cli import main, parse_complex, parse_grid

from .conftest import EXACT_TEST_VALUE


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def l_demo(tmp_path_factory):
    out = tmp_path_factory.mktemp("l-demo")
    assert main(["demo", "l-shape", "--out", str(out)]) == 0
    return out


@pytest.mark.parametrize("text,value", [
    ("1+2i", 1 + 2j), ("1 - 2i", 1 - 2j), ("0.5+0.5i", 0.5 + 0.5j), ("-3", -3 + 0j),
    ("2i", 2j), ("-i", -1j), ("1e-3-4.5e2i", 1e-3 - 450j), (" .5 + i ", 0.5 + 1j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["1+2j", "1+2", "i2", "", "1+2ii", "abc", "1e+i"])
def test_parse_complex_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(text)


def test_parse_grid():
    assert parse_grid("0,2,0,2,3,4") == ((0.0, 2.0, 0.0, 2.0), 3, 4)
    for bad in ("0,2,0,2,3", "2,0,0,2,3,3", "0,2,0,2,1,3", "0,2,a,2,3,3"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_grid(bad)


def test_demo_outputs(l_demo, capsys):
    sol = json.loads((l_demo / "solution.json").read_text())
    assert sol["region"] == "interior"
    assert sol["config"]["smooth_degree"] == 17
    poles = _rows(l_demo / "poles.csv")
    assert sum(int(r["kept"]) for r in poles) == len(sol["kept_poles"])
    assert len(poles) == sol["total_poles"]
    assert (l_demo / "boundary.csv").exists() and (l_demo / "vertices.csv").exists()


def test_usage_errors(tmp_path, capsys):
    assert main(["demo", "l-shape", "--lawson", "2", "--out", str(tmp_path)]) == 2
    assert main(["demo", "square"]) == 2
    assert main([]) == 2
    f = tmp_path / "b.csv"
    f.write_text("0,0\n1,0\n1,1\n0,1\n")
    assert main(["map", "annulus", str(f), "--center", "0.5+0.5i", "--out", str(tmp_path)]) == 2
    assert main(["map", "disk-interior", str(f), str(f), "--center", "0.5+0.5i"]) == 2
    assert main(["solve", str(f), "--region", "interior", "--center", "1+i+i"]) == 2
    assert main(["solve", str(f), "--region", "interior", "--center", "0.5+0.5i",
                 "--cluster-corners", "5"]) == 2


def test_malformed_csv_reports_line(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("x,y,u\n0,0,1\n1,0,1\n1,1,zz\n0,1,1\n")
    assert main(["solve", str(f), "--region", "interior", "--center", "0.5+0.5i",
                 "--out", str(tmp_path)]) == 1
    assert "bad.csv:4" in capsys.readouterr().err


def test_center_on_boundary_is_data_error(l_demo, tmp_path, capsys):
    assert main(["solve", str(l_demo / "boundary.csv"), "--region", "interior",
                 "--center", "1+0i", "--out", str(tmp_path)]) == 1


def test_solve_reproduces_demo(l_demo, tmp_path, capsys):
    assert main(["solve", str(l_demo / "boundary.csv"), "--vertices", str(l_demo / "vertices.csv"),
                 "--region", "interior", "--center", "0.5+0.5i", "--out", str(tmp_path)]) == 0
    a = json.loads((l_demo / "solution.json").read_text())
    b = json.loads((tmp_path / "solution.json").read_text())
    for key in ("boundary_max_error", "total_poles", "kept_poles", "pole_coeffs", "sample_count"):
        assert a[key] == b[key]


def test_constant_boundary_file(tmp_path, capsys):
    s, poly = geometry.l_shape_boundary(0.05)
    geometry.write_boundary_csv(tmp_path / "c.csv", s.with_values(np.full(len(s), 2.5)))
    assert main(["solve", str(tmp_path / "c.csv"), "--region", "interior",
                 "--center", "0.5+0.5i", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "solution.json").read_text())["boundary_max_error"] < 1e-10


def test_deterministic_outputs(tmp_path, capsys):
    runs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["demo", "blade", "--grid", "-1,2.5,-1,2.5,12,12", "--svg",
                     str(out / "f.svg"), "--out", str(out)]) == 0
        runs.append(out)
    for name in ("solution.json", "poles.csv", "field.csv", "boundary.csv", "f.svg"):
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()


def test_eval_points(l_demo, tmp_path, capsys):
    pts = tmp_path / "p.csv"
    pole = json.loads((l_demo / "solution.json").read_text())["kept_poles"][0]
    pts.write_text(f"x,y\n0.5,0.5\n5,5\n{pole[0]!r},{pole[1]!r}\n")
    out = tmp_path / "e.csv"
    assert main(["eval", str(l_demo / "solution.json"), "--points", str(pts), "--out", str(out)]) == 0
    rows = _rows(out)
    assert abs(float(rows[0]["im_w"])) < 1e-12 and rows[0]["mask"] == "0"
    assert rows[1]["mask"] == "1"
    # kept poles lie outside the interior region, so this one is masked
    assert rows[2]["mask"] == "1"


def test_eval_pole_hit_marks_error(tmp_path, capsys):
    # kept poles never lie in the solution region, so widen the region of a
    # saved record until one of them does
    s, poly = geometry.l_shape_boundary(0.05)
    geometry.write_boundary_csv(tmp_path / "b.csv", s.with_values(lambda z: z.real ** 2))
    assert main(["solve", str(tmp_path / "b.csv"), "--region", "exterior", "--center",
                 "0.5+0.5i", "--out", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "solution.json").read_text())
    pole = rec["kept_poles"][0]
    rec["region"] = "interior"
    rec["polygons"] = [[[-10, -10], [10, -10], [10, 10], [-10, 10]]]
    (tmp_path / "hacked.json").write_text(json.dumps(rec))
    (tmp_path / "p.csv").write_text(f"{pole[0]!r},{pole[1]!r}\n3,3\n")
    out = tmp_path / "e.csv"
    assert main(["eval", str(tmp_path / "hacked.json"), "--points", str(tmp_path / "p.csv"),
                 "--out", str(out)]) == 0
    rows = list(csv.reader(open(out)))
    assert rows[1][4] == "error"
    assert rows[2][4] == "0"


def test_eval_clustered_test_point(tmp_path, capsys):
    d = tmp_path / "demo"
    assert main(["demo", "l-shape", "--out", str(d)]) == 0
    assert main(["solve", str(d / "boundary.csv"), "--vertices", str(d / "vertices.csv"),
                 "--region", "interior", "--center", "0.5+0.5i", "--cluster-corners", "50",
                 "--out", str(tmp_path / "c")]) == 0
    (tmp_path / "p.csv").write_text("0.99,0.99\n")
    out = tmp_path / "e.csv"
    assert main(["eval", str(tmp_path / "c" / "solution.json"), "--points",
                 str(tmp_path / "p.csv"), "--out", str(out)]) == 0
    assert abs(float(_rows(out)[0]["re_w"]) - EXACT_TEST_VALUE) < 5e-5


def test_eval_exterior_grid_all_masked(l_demo, tmp_path, capsys):
    out = tmp_path / "e.csv"
    assert main(["eval", str(l_demo / "solution.json"), "--grid", "3,4,3,4,5,5",
                 "--out", str(out)]) == 0
    rows = _rows(out)
    assert len(rows) == 25 and all(r["mask"] == "1" for r in rows)
    assert all(r["re_w"] == "nan" for r in rows)


def test_eval_needs_one_source(l_demo, tmp_path, capsys):
    assert main(["eval", str(l_demo / "solution.json"), "--out", str(tmp_path / "e.csv")]) == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["eval", str(tmp_path / "junk.json"), "--grid", "0,1,0,1,2,2",
                 "--out", str(tmp_path / "e.csv")]) == 1


def test_map_disk_interior_from_csv(l_demo, tmp_path, capsys):
    assert main(["map", "disk-interior", str(l_demo / "boundary.csv"), "--vertices",
                 str(l_demo / "vertices.csv"), "--center", "0.5+0.5i", "--svg",
                 str(tmp_path / "m.svg"), "--out", str(tmp_path)]) == 0
    m = cli.conformal.ConformalMap.from_dict(json.loads((tmp_path / "map.json").read_text()))
    s = geometry.read_boundary_csv(l_demo / "boundary.csv")
    assert np.all(np.abs(np.abs(m(s.points)) - 1) <= 1e-4)
    ids = {r["polyline_id"].split(":")[0] for r in _rows(tmp_path / "gridlines.csv")}
    assert ids == {"circle", "ray", "gridx", "gridy"}
    assert (tmp_path / "m.svg").read_text().startswith("<svg")
    # a map record is accepted by eval
    assert main(["eval", str(tmp_path / "map.json"), "--grid", "0,2,0,2,4,4",
                 "--out", str(tmp_path / "e.csv")]) == 0


def test_map_annulus_from_csv(tmp_path, capsys):
    (so, po), (si, pi) = geometry.double_boundary(0.01)
    for name, s, p in (("outer", so, po), ("inner", si, pi)):
        geometry.write_boundary_csv(tmp_path / f"{name}.csv", s)
        geometry.write_vertices_csv(tmp_path / f"{name}_v.csv", p)
    assert main(["map", "annulus", str(tmp_path / "outer.csv"), str(tmp_path / "inner.csv"),
                 "--vertices", str(tmp_path / "outer_v.csv"), "--inner-vertices",
                 str(tmp_path / "inner_v.csv"), "--center", "-0.25-0.25i",
                 "--out", str(tmp_path)]) == 0
    assert "modulus: 0.31" in capsys.readouterr().out
    rec = json.loads((tmp_path / "map.json").read_text())
    assert abs(rec["modulus"] - 0.314) <= 0.002


def test_negative_values_after_flags(tmp_path, capsys):
    s, _ = geometry.l_shape_boundary(0.05)
    geometry.write_boundary_csv(tmp_path / "b.csv", s.with_values(lambda z: z.real ** 2 - 5))
    assert main(["solve", str(tmp_path / "b.csv"), "--region", "exterior", "--center",
                 "0.5+0.5i", "--grid", "-1,3,-1,3,3,3", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "field.csv")) == 9
    s2 = geometry.BoundarySamples(s.points - 1 - 1j, s.values)
    geometry.write_boundary_csv(tmp_path / "m.csv", s2)
    assert main(["solve", str(tmp_path / "m.csv"), "--region", "interior", "--center",
                 "-0.5-0.5i", "--out", str(tmp_path)]) == 0


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "harmonic_aaa.cli", "demo", "nope"],
                       capture_output=True, text=True)
    assert r.returncode == 2
