import csv
import json
import os
import subprocess

import pytest

CLI = os.environ.get("STRATAKIT_CLI", "stratakit")
SCENES = os.path.join(os.path.dirname(__file__), "..", "scenes")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def scene(name):
    return os.path.join(SCENES, name + ".json")


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_cube_vertices(tmp_path):
    r = run("stratify", "--scene", scene("cube"), "--m", "0", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    inside = [row for row in rows(tmp_path / "stratify_m0.csv") if row["in_stratum"] == "1"]
    assert len(inside) == 8
    assert {tuple(float(row[k]) for k in ("x0", "x1", "x2")) for row in inside} == {
        (x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)
    }


def test_circle_strata(tmp_path):
    r = run("stratify", "--scene", scene("circle"), "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    m1 = rows(tmp_path / "stratify_m1.csv")
    m0 = rows(tmp_path / "stratify_m0.csv")
    assert m1 and all(row["in_stratum"] == "1" for row in m1)
    assert not any(row["in_stratum"] == "1" for row in m0)
    report = json.loads((tmp_path / "stratify.json").read_text())
    assert report["pass"] is True
    assert report["library_version"] == "0.1.0"


def test_cube_one_sided_echoes_kappa(tmp_path):
    r = run("verify", "--scene", scene("cube"), "--estimate", "one_sided", "--samples", "2000", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    rep = json.loads((tmp_path / "verify.json").read_text())["reports"][0]
    q, rr, s = rep["params"]["q"], rep["params"]["r"], rep["params"]["s"]
    assert rep["params"]["kappa"] == pytest.approx((1 / (2 * s)) * (1 + 2 * q / (q - rr)) ** 2)
    assert rep["pass"] is True
    assert rep["seed"] == 2024 and rep["scene_id"] == "cube"


def test_halfplane_quadratic_contact_is_flat(tmp_path):
    r = run("verify", "--scene", scene("halfplane"), "--estimate", "quadratic_contact", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    rep = json.loads((tmp_path / "verify.json").read_text())["reports"][0]
    assert rep["pass"] is True
    assert rep["params"]["lambda"] == 0.0


def test_coarea_coordinate_grid(tmp_path):
    grid = tmp_path / "coord.grid"
    assert run("grid", "--kind", "coordinate", "--spacing", "1/32", "--out", str(grid)).returncode == 0
    assert grid.stat().st_size == 8 * (4 + 3 * 2 + 33 * 33)
    r = run("coarea", "--grid", str(grid), "--out", str(tmp_path / "c"))
    assert r.returncode == 0, r.stderr
    rep = json.loads((tmp_path / "c" / "coarea.json").read_text())["reports"][0]
    assert rep["covered_fraction"] == 1.0
    assert rep["recheck_pass"] is True


def test_unbounded_polytope_is_an_input_error(tmp_path):
    r = run("verify", "--scene", scene("corrupt_unbounded"), "--out", str(tmp_path))
    assert r.returncode == 2
    assert "unbounded" in r.stderr and "scene.set" in r.stderr


def test_malformed_scene_names_the_line(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "scene_id": "x",\n  "ambient_dim": 2,\n  oops\n}\n')
    r = run("stratify", "--scene", str(bad), "--out", str(tmp_path / "o"))
    assert r.returncode == 2
    assert "line 4" in r.stderr


@pytest.mark.parametrize(
    "args",
    [
        ("verify", "--scene", "SCENE", "--estimate", "nope"),
        ("stratify", "--scene", "SCENE", "--m", "7"),
        ("stratify", "--scene", "SCENE", "--q-grid", "0.1,x"),
        ("stratify", "--scene", "missing.json"),
    ],
)
def test_bad_options(tmp_path, args):
    args = [scene("square") if a == "SCENE" else a for a in args]
    r = run(*args, "--out", str(tmp_path))
    assert r.returncode == 2
    assert r.stderr


def test_missing_required_option():
    assert run("stratify").returncode == 2

