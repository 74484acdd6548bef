import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cost_models
from nemsigma.contour import Contour, generate_shape, save_contour
from nemsigma.elastic import CostModel, StretchFn, nem_sigma
from nemsigma.metric_audit import verify_relaxed_triangle
from nemsigma.retrieval import (DistanceMatrix, RobotSpec, SceneSpec,
                                build_corpus, distance_matrix, gap_distance,
                                knn_query, load_manifest, load_matrix,
                                robot_scenario, save_matrix)

SPECS = [
    {"kind": "circle", "name": "circle"},
    {"kind": "ellipse", "name": "ell", "a": 1.1, "b": 1.0},
    {"kind": "ellipse", "name": "wide", "a": 2.0, "b": 1.0},
    {"kind": "regular_polygon", "name": "square", "sides": 4},
    {"kind": "perturbed", "name": "blob", "noise": 0.3, "seed": 5},
]


def test_build_corpus():
    c = build_corpus(SPECS, resample_n=24)
    assert len(c) == 5
    assert {len(s) for s in c.sequences} == {24}
    again = build_corpus(SPECS, resample_n=24)
    for a, b in zip(c.sequences, again.sequences):
        np.testing.assert_array_equal(a.angles, b.angles)


def test_build_corpus_errors():
    with pytest.raises(ValueError):
        build_corpus(SPECS + [{"kind": "circle", "name": "circle"}])
    with pytest.raises(ValueError):
        build_corpus([{"name": "nokind"}])
    with pytest.raises(ValueError):
        build_corpus(SPECS, resample_n=2)


def test_identical_shapes_give_zero_matrix():
    c = build_corpus([{"kind": "circle", "name": f"c{k}"} for k in range(3)])
    assert np.all(distance_matrix(c).values == 0)


def test_two_entry_matrix_matches_solver():
    c = build_corpus(SPECS[:2], resample_n=16)
    D = distance_matrix(c).values
    assert D[0, 1] == nem_sigma(*c.sequences, c.cost_model).total


def test_parallel_fill_is_bit_identical():
    specs = [{"kind": "perturbed", "name": f"p{k}", "noise": 0.25, "seed": k}
             for k in range(8)]
    c = build_corpus(specs, resample_n=20)
    a, b = distance_matrix(c), distance_matrix(c, n_jobs=4)
    np.testing.assert_array_equal(a.values, b.values)


@pytest.mark.parametrize("name", sorted(cost_models()))
def test_matrix_axioms_every_model(name):
    specs = [{"kind": "perturbed", "name": f"p{k}", "noise": 0.3, "seed": k,
              "attrs": {"velocity": 0.5 * k, "value": 0.1 * k}}
             for k in range(4)]
    c = build_corpus(specs, cost_models()[name], resample_n=12)
    D = distance_matrix(c).values
    assert np.all(D >= 0)
    np.testing.assert_allclose(D, D.T, atol=1e-9)
    assert np.all(np.abs(np.diag(D)) <= 1e-9)


def test_missing_feature_is_reported():
    c = build_corpus(SPECS[:2], CostModel(stretch=StretchFn("feature-scaled")))
    with pytest.raises(KeyError):
        distance_matrix(c)


def test_knn_circle_prefers_mild_ellipse():
    c = build_corpus(SPECS[1:4], resample_n=32)
    ranked = knn_query(c, generate_shape("circle", 32), 3)
    assert ranked[0][0] == "ell"
    assert sorted(n for n, _ in ranked) == ["ell", "square", "wide"]
    assert [d for _, d in ranked] == sorted(d for _, d in ranked)


def test_knn_member_query_first():
    c = build_corpus(SPECS)
    ranked = knn_query(c, c.contours[4], 2)
    assert ranked[0] == ("blob", 0.0)


def test_knn_errors_and_ties():
    c = build_corpus([{"kind": "circle", "name": n} for n in ("b", "a", "c")])
    assert [n for n, _ in knn_query(c, generate_shape("circle", 50), 3)] == ["a", "b", "c"]
    for k in (0, 4):
        with pytest.raises(ValueError):
            knn_query(c, generate_shape("circle", 50), k)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4), st.integers(0, 100))
def test_knn_prefix_property(k, seed):
    c = build_corpus(SPECS, resample_n=16)
    q = generate_shape("perturbed", 40, noise=0.2, seed=seed)
    assert knn_query(c, q, k) == knn_query(c, q, k + 1)[:k]


def test_cyclic_corpus():
    base = generate_shape("perturbed", 32, noise=0.3, seed=1, name="base")
    c = build_corpus([base], resample_n=32, cyclic=True)
    X = c.sequences[0]
    assert c.distance(X, X.rotated(5)) == 0.0
    plain = build_corpus([base], resample_n=32)
    assert plain.distance(X, X.rotated(5)) > 0


def test_matrix_csv_round_trip(tmp_path):
    c = build_corpus(SPECS, resample_n=16)
    m = distance_matrix(c)
    p = tmp_path / "m.csv"
    save_matrix(p, m)
    back = load_matrix(p)
    assert back.names == m.names
    np.testing.assert_allclose(back.values, m.values, rtol=0, atol=1e-12)
    assert p.read_text().splitlines()[0] == "name,circle,ell,wide,square,blob"


def test_hand_written_csv(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("name,a,b\na,0,1.5\nb,1.5,0\n")
    m = load_matrix(p)
    assert m.names == ("a", "b") and m.values[0, 1] == 1.5


@pytest.mark.parametrize("text", [
    "name,a,b\na,0\nb,1.5,0\n",
    "name,a,b\na,0,1\nb,2,0\n",
    "x,a\na,0\n",
    "name,a,b\na,0,z\nb,1,0\n",
    "",
])
def test_bad_csv_rejected(tmp_path, text):
    p = tmp_path / "m.csv"
    p.write_text(text)
    with pytest.raises(ValueError):
        load_matrix(p)


def test_distance_matrix_shape_check():
    with pytest.raises(ValueError):
        DistanceMatrix(("a",), np.zeros((2, 2)))


def test_manifest(tmp_path):
    save_contour(tmp_path / "tri.json",
                 Contour("tri", [[0, 0], [2, 0], [1, 1.5]]))
    doc = {"shapes": [{"file": "tri.json"}, {"kind": "circle", "name": "c"}],
           "model": {"stretch": {"kind": "constant", "r": 0.5}},
           "resample_n": 12}
    p = tmp_path / "man.json"
    p.write_text(json.dumps(doc))
    c = load_manifest(p)
    assert c.names == ("tri", "c") and c.resample_n == 12
    assert c.cost_model.stretch.r == 0.5
    p.write_text("{}")
    with pytest.raises(ValueError):
        load_manifest(p)


# --------------------------------------------------------------------------
# robots


def test_robot_scene_default():
    res = robot_scenario()
    g = res.gaps
    assert g[0, 1] == pytest.approx(2, abs=1e-9)
    assert g[1, 2] == pytest.approx(2, abs=1e-9)
    assert g[0, 2] == pytest.approx(6, abs=1e-9)
    assert g[0, 0] == 0
    assert not res.gap_audit.ok
    assert any((w.x, w.y, w.z) == ("green", "blue", "purple")
               for w in res.gap_audit.violations)
    assert res.nem_sigma_audit.ok
    assert res.overlapping == []


def test_robot_scene_moving():
    robots = tuple(RobotSpec(n, {"kind": "circle", "radius": 1.0}, x, v)
                   for n, x, v in (("green", 0, 0), ("blue", 4, 1), ("purple", 8, 0)))
    res = robot_scenario(SceneSpec(robots, t=1.0))
    assert res.gaps[0, 1] == pytest.approx(3, abs=1e-9)
    assert res.gaps[1, 2] == pytest.approx(1, abs=1e-9)
    assert res.gaps[0, 2] == pytest.approx(6, abs=1e-9)
    assert not res.gap_audit.ok
    # congruent circles match along the diagonal with no stretching, so the
    # velocity-scaled penalty never applies; only rounding noise remains
    assert np.all(res.nem_sigma < 1e-12)
    assert res.nem_sigma_audit.ok


def test_robot_overlap_reported():
    robots = tuple(RobotSpec(n, {"kind": "circle", "radius": 1.0}, x)
                   for n, x in (("green", 0), ("blue", 1.5), ("purple", 8)))
    res = robot_scenario(SceneSpec(robots))
    assert res.overlapping == [("green", "blue")]


def test_scene_validation():
    with pytest.raises(ValueError):
        SceneSpec(SceneSpec().robots[:2])
    bad = (RobotSpec("g", {"kind": "circle"}, float("nan")),) + SceneSpec().robots[1:]
    with pytest.raises(ValueError):
        SceneSpec(bad)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 1.5), st.floats(0.2, 1.5), st.floats(0.2, 1.5),
       st.floats(0.1, 3), st.floats(0.1, 3))
def test_collinear_disjoint_scene_always_violates(r1, r2, r3, g1, g2):
    x2 = r1 + g1 + r2
    x3 = x2 + r2 + g2 + r3
    robots = tuple(RobotSpec(n, {"kind": "circle", "radius": r}, x)
                   for n, r, x in (("green", r1, 0.0), ("blue", r2, x2),
                                   ("purple", r3, x3)))
    res = robot_scenario(SceneSpec(robots, match_points=12))
    assert not res.gap_audit.ok


def test_distinct_scene_theta_hat_is_tight():
    robots = (RobotSpec("green", {"kind": "ellipse", "a": 1.5, "b": 1.0}, 0.0, 0.2),
              RobotSpec("blue", {"kind": "regular_polygon", "sides": 5}, 4.0, 1.0),
              RobotSpec("purple", {"kind": "superellipse", "a": 1, "b": 1, "p": 4},
                        8.0, 0.0))
    scene = SceneSpec(robots)
    res = robot_scenario(scene)
    assert res.theta_hat is not None
    assert res.nem_sigma_audit.ok
    D = res.nem_sigma
    rep = verify_relaxed_triangle(None, [0, 1, 2], res.theta_hat + 1e-9, D=D)
    assert rep.violations == []


def test_gap_distance():
    a = generate_shape("circle", 256, center=(0, 0))
    b = generate_shape("circle", 256, center=(3, 0))
    assert gap_distance(a, b) == pytest.approx(1.0, abs=1e-9)
