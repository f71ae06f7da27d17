import math
import os
import subprocess

import pytest

import srcloc


def test_graph_construction():
    g = srcloc.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert g.node_count == 4
    assert g.edge_count == 3
    assert g.is_tree
    assert g.neighbors(1) == [0, 2]

    tri = srcloc.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert not tri.is_tree


def test_simulate_and_localize_tree():
    g = srcloc.generate_regular_tree(3, 6)
    cascade = srcloc.simulate_si(g, source=0, p=0.5, seed=11)
    assert cascade.first_infection[0] == 0
    obs = srcloc.sample_observers(cascade, q=0.6, seed=12)
    assert len(obs.sampled) > 0
    est = srcloc.localize_tree(g, obs, p=0.5, full_sampled_set=True)
    assert est.source in est.search_region
    if obs.time_of(0) is not None:
        assert est.source == 0


def test_localize_graph_runs_on_cyclic_input():
    g = srcloc.generate_er(100, 300, seed=5)
    cascade = srcloc.simulate_si(g, source=10, p=0.5, seed=6)
    obs = srcloc.sample_observers(cascade, q=0.5, seed=7)
    est = srcloc.localize_graph(g, obs, p=0.5, theta=0.95)
    assert 0 <= est.source < g.node_count


def test_min_estimator():
    obs = srcloc.Observation([3, 5], [7, 4])
    assert srcloc.min_timestamp_estimator(obs, seed=1) == 5


def test_theory_values():
    assert math.isclose(srcloc.line_detection_probability(0.5, 0.5), 0.73333, abs_tol=1e-4)
    assert math.isclose(srcloc.line_expected_distance_bound(0.5, 0.5), 0.48, abs_tol=1e-9)
    assert math.isclose(srcloc.sigma_diff_pmf(0.5, 0.5, 0), 0.2, abs_tol=1e-12)
    b = srcloc.regular_tree_bound(3, 0.5, 0.5, 1)
    assert math.isclose(b["bound"], 0.7890625, abs_tol=1e-12)
    rate, mean = srcloc.naive_line_stats(0.5)
    assert rate == pytest.approx(0.5)
    assert mean == pytest.approx(1.0)


def test_candidate_path():
    g = srcloc.generate_line(7)
    obs = srcloc.Observation([1, 5], [2, 4])
    cp = srcloc.candidate_path(g, 3, obs)
    assert cp.anchor == 3
    assert cp.path_nodes == [3, 2, 1]


def test_determinism():
    g = srcloc.generate_line(101)
    a = srcloc.simulate_si(g, source=50, p=0.5, seed=99)
    b = srcloc.simulate_si(g, source=50, p=0.5, seed=99)
    assert a.first_infection == b.first_infection


@pytest.mark.skipif("SRCLOC_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_round_trip(tmp_path):
    cli = os.environ["SRCLOC_CLI"]
    cascade = tmp_path / "cascade.json"
    obs = tmp_path / "obs.json"
    subprocess.run(
        [cli, "simulate", "--graph", "gen:line:101", "--source", "50", "--p", "0.5",
         "--seed", "3", "--out", str(cascade)],
        check=True, capture_output=True)
    subprocess.run(
        [cli, "observe", "--cascade", str(cascade), "--q", "0.5", "--seed", "4",
         "--out", str(obs)],
        check=True, capture_output=True)
    out = subprocess.run(
        [cli, "estimate", "--graph", "gen:line:101", "--obs", str(obs), "--p", "0.5"],
        check=True, capture_output=True, text=True)
    node, score = out.stdout.split()
    assert 0 <= int(node) < 101
    assert int(score) >= 0
