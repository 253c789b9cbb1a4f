# Copyright 2026 The cliqueloc Authors
# SPDX-License-Identifier: Apache-2.0

import json
import math
import os
import pathlib

import numpy as np
import pytest

import cliqueloc

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def test_localize_noiseless_scene():
    scene = cliqueloc.suite_scene("noiseless", 3, 0)
    result = cliqueloc.localize(scene.map, scene.observation, scene.embeddings)
    assert result.estimates
    best = result.estimates[0]
    assert np.allclose(best.pose.translation, scene.gt_pose.translation, atol=1e-9)
    score = cliqueloc.evaluate_matching(best.inliers, scene.ground_truth)
    assert score.precision == 100.0 and score.recall == 100.0


def test_config_round_trips_names():
    config = cliqueloc.PipelineConfig()
    assert (config.d_adj, config.d_comp, config.alpha) == (0.8, 0.3, 0.7)
    config.matching = "knn"
    config.extractor = "prosac"
    config.weights = "com"
    assert (config.matching, config.extractor, config.weights) == ("knn", "prosac", "com")
    with pytest.raises(ValueError):
        config.matching = "greedy"


def test_fit_ellipsoid_and_degenerate_cloud():
    corners = np.array([[x, y, z] for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)])
    lm = cliqueloc.fit_ellipsoid(corners)
    assert np.allclose(lm.axis_lengths, 0.5)
    with pytest.raises(cliqueloc.DegenerateCloud):
        cliqueloc.fit_ellipsoid(np.array([[0.0, 0, 0], [1, 1, 1], [2, 2, 2]]))


def test_matching_examples():
    s = np.array([[0.9, 0.8], [0.85, 0.1]])
    pairs = {(c.map_index, c.obs_index) for c in cliqueloc.match_one_to_one(s)}
    assert pairs == {(0, 0)}
    adaptive = cliqueloc.match_adaptive(np.array([[0.4, 0.85, 0.5, 0.9]]), 4)
    assert {c.map_index for c in adaptive} == {1, 3}
    assert len(cliqueloc.match_knn(s, 3)) == 4


def test_maximal_cliques_path():
    cliques, truncated = cliqueloc.maximal_cliques(3, [(0, 1), (1, 2)])
    assert not truncated
    assert sorted(c.members for c in cliques) == [[0, 1], [1, 2]]


def test_solve_weighted_pose_recovers_transform():
    rng = np.random.default_rng(0)
    obs = rng.uniform(-3, 3, size=(10, 3))
    angle = 0.7
    rot = np.array([[math.cos(angle), -math.sin(angle), 0], [math.sin(angle), math.cos(angle), 0], [0, 0, 1]])
    t = np.array([1.0, -2.0, 0.5])
    est = cliqueloc.solve_weighted_pose(obs @ rot.T + t, obs, list(rng.uniform(0.1, 1, 10)))
    assert np.allclose(est.pose.rotation, rot, atol=1e-9)
    assert np.allclose(est.pose.translation, t, atol=1e-9)


def test_embedding_fixture_loads():
    table = cliqueloc.io.load_embeddings(FIXTURES / "embeds.json")
    assert table.dim == 16 and len(table) == 4
    for key in table.ids:
        assert abs(np.linalg.norm(np.asarray(table.vector(key), dtype=np.float64)) - 1.0) < 1e-6


def test_io_round_trip(tmp_path):
    scene = cliqueloc.suite_scene("partial", 1, 2)
    cliqueloc.io.save_map(tmp_path / "map.json", scene.map)
    cliqueloc.io.save_observation(tmp_path / "obs.json", scene.observation)
    loaded = cliqueloc.io.load_map(tmp_path / "map.json")
    assert len(loaded) == len(scene.map)
    obs = cliqueloc.io.load_observation(tmp_path / "obs.json")
    assert obs.source_pose_gt is not None
    result = cliqueloc.localize(loaded, obs, scene.embeddings)
    doc = json.loads(cliqueloc.io.result_json(result, loaded, obs))
    assert doc["estimates"][0]["rank"] == 1


def test_parse_error_is_library_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(cliqueloc.ParseError):
        cliqueloc.io.load_map(bad)
    assert issubclass(cliqueloc.ParseError, cliqueloc.Error)
