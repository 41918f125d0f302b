import json
import math
import os

import pytest

import stratakit

SCENES = os.path.join(os.path.dirname(__file__), "..", "..", "scenes")


def scene(name):
    return stratakit.load_scene(os.path.join(SCENES, name + ".json"))


def test_version_and_estimates():
    assert stratakit.__version__ == "0.1.0"
    assert "one_sided" in stratakit.estimates()


def test_square_projection():
    sq = scene("square")
    assert sq.ambient_dim == 2
    assert sq.nearest([2.0, 0.5]) == pytest.approx([1.0, 0.5], abs=1e-14)
    assert sq.distance([2.0, 2.0]) == pytest.approx(math.sqrt(2.0))


def test_sphere_center_has_no_unique_projection():
    c = scene("circle")
    assert c.nearest([0.0, 0.0]) is None


def test_cube_vertices_are_the_zero_stratum():
    cube = scene("cube")
    r = stratakit.stratify(cube, 0)
    inside = [c["point"] for c in r["classified"] if c["in_stratum"]]
    corners = {(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)}
    assert {tuple(p) for p in inside} == corners


def test_circle_points_are_in_b1():
    c = scene("circle")
    pts = [[math.cos(t), math.sin(t)] for t in (0.1, 1.0, 2.5)]
    r = stratakit.stratify(c, 1, pts)
    assert r["in_stratum_count"] == 3


def test_kappa_formula():
    q, r, s = 0.4, 0.2, 0.1
    expected = (1 / (2 * s)) * (1 + 2 * q / (q - r)) ** 2
    assert stratakit.one_sided_kappa(q, r, s) == pytest.approx(expected, rel=1e-15)


def test_campaign_passes_on_square():
    rep = stratakit.verify(scene("square"), "angle", samples=300)
    assert rep["pass"] is True
    assert rep["samples"] == 300


def test_gamma_matches_brute_force():
    # C = ray through e1, U = span e2, v = e1; D = polar(C) is the half-plane d1 <= 0
    g = stratakit.gamma_constant([[1.0, 0.0]], [[0.0, 1.0]], [1.0, 0.0])
    best = 0.0
    for k in range(1, 20000):
        t = math.pi / 2 + math.pi * k / 20000
        d = (math.cos(t), math.sin(t))
        if -d[0] > 0:
            best = max(best, abs(d[0]) / -d[0])
    assert g == pytest.approx(best, rel=1e-9)


def test_round_trip():
    c = scene("circle")
    again = stratakit.Scene(c.to_json())
    assert json.loads(again.to_json()) == json.loads(c.to_json())


def test_bad_scene_reports_the_field():
    with pytest.raises(stratakit.InvalidInput, match="radius"):
        stratakit.Scene(
            '{"scene_id": "x", "ambient_dim": 2, "set": {"type": "ball", "center": [0, 0], "radius": "a"},'
            ' "params": {"seed": 1}}'
        )
