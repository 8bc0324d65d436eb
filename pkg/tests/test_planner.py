import numpy as np
import pytest

from gazeguide.errors import TooManyWaypoints
from gazeguide.planner import path_length, plan_trajectory, replan_on_deviation
from gazeguide.saliency import Waypoint
from gazeguide.scene import Point2

import oracles


def wp(x, y, score=0.5):
    return Waypoint(Point2(x, y), score)


def test_empty_waypoints_direct_path():
    traj = plan_trajectory(Point2(0.1, 0.5), [], Point2(0.9, 0.5))
    assert traj.stops == ()
    assert traj.total_length == Point2(0.1, 0.5).dist(Point2(0.9, 0.5))


def test_single_waypoint():
    g = wp(0.5, 0.3)
    traj = plan_trajectory(Point2(0.1, 0.5), [g], Point2(0.9, 0.5))
    assert traj.stops == (g,)
    assert traj.points() == [Point2(0.1, 0.5), Point2(0.5, 0.3), Point2(0.9, 0.5)]


def test_collinear_three_stops_sorted():
    stops = [wp(0.3, 0.5), wp(0.7, 0.5), wp(0.5, 0.5)]
    traj = plan_trajectory(Point2(0.1, 0.5), stops, Point2(0.9, 0.5))
    assert [s.position.x for s in traj.stops] == [0.3, 0.5, 0.7]
    assert traj.total_length == pytest.approx(0.8, abs=1e-12)


def test_total_length_consistent():
    rng = np.random.default_rng(11)
    for _ in range(20):
        k = int(rng.integers(0, 5))
        stops = [wp(float(x), float(y)) for x, y in rng.uniform(0, 1, (k, 2))]
        p0 = Point2(float(rng.uniform()), float(rng.uniform()))
        h = Point2(float(rng.uniform()), float(rng.uniform()))
        traj = plan_trajectory(p0, stops, h)
        assert traj.total_length == pytest.approx(
            path_length(traj.start, traj.stops, traj.terminal), abs=1e-12)
        assert sorted(id(s) for s in traj.stops) == sorted(id(s) for s in stops)


def test_matches_enumeration_oracle():
    rng = np.random.default_rng(77)
    for _ in range(60):
        k = int(rng.integers(0, 7))
        positions = [Point2(float(x), float(y)) for x, y in rng.uniform(0, 1, (k, 2))]
        stops = [Waypoint(p, 0.5) for p in positions]
        p0 = Point2(float(rng.uniform()), float(rng.uniform()))
        h = Point2(float(rng.uniform()), float(rng.uniform()))
        traj = plan_trajectory(p0, stops, h)
        best_len, best_perm = oracles.best_order_by_enumeration(p0, positions, h)
        assert traj.total_length == best_len
        assert [s.position for s in traj.stops] == [positions[i] for i in best_perm]


def test_symmetric_tie_breaks_by_y_then_x():
    p0, h = Point2(0.1, 0.5), Point2(0.9, 0.5)
    top, bottom = wp(0.5, 0.25), wp(0.5, 0.75)
    for order in ([top, bottom], [bottom, top]):
        traj = plan_trajectory(p0, order, h)
        assert [s.position for s in traj.stops] == [top.position, bottom.position]


def test_beats_or_matches_score_order():
    rng = np.random.default_rng(13)
    for _ in range(20):
        k = int(rng.integers(2, 6))
        stops = [Waypoint(Point2(float(x), float(y)), float(s))
                 for (x, y), s in zip(rng.uniform(0, 1, (k, 2)), rng.uniform(0.3, 1, k))]
        stops.sort(key=lambda w: -w.score)
        p0 = Point2(float(rng.uniform()), float(rng.uniform()))
        h = Point2(float(rng.uniform()), float(rng.uniform()))
        planned = plan_trajectory(p0, stops, h).total_length
        naive = path_length(p0, tuple(stops), h)
        assert planned <= naive


def test_too_many_waypoints():
    stops = [wp(i / 10, 0.5) for i in range(9)]
    with pytest.raises(TooManyWaypoints):
        plan_trajectory(Point2(0.1, 0.5), stops, Point2(0.9, 0.5))


def test_replan_empty_remaining():
    p0, h = Point2(0.2, 0.2), Point2(0.9, 0.5)
    current = plan_trajectory(p0, [wp(0.5, 0.5)], h)
    new = replan_on_deviation(current, Point2(0.6, 0.6), [], h)
    assert new.stops == ()
    assert new.start == Point2(0.6, 0.6)


def test_replan_idempotent_when_nothing_changed():
    p0, h = Point2(0.2, 0.2), Point2(0.9, 0.5)
    stops = [wp(0.5, 0.5), wp(0.4, 0.7)]
    current = plan_trajectory(p0, stops, h)
    again = replan_on_deviation(current, p0, list(current.stops), h)
    assert again == current


def test_replan_matches_fresh_plan():
    p0, h = Point2(0.1, 0.5), Point2(0.9, 0.5)
    stops = [wp(0.3, 0.4), wp(0.5, 0.6), wp(0.7, 0.45)]
    current = plan_trajectory(p0, stops, h)
    remaining = list(current.stops[1:])
    new_p0 = current.stops[0].position
    replanned = replan_on_deviation(current, new_p0, remaining, h)
    fresh = plan_trajectory(new_p0, remaining, h)
    assert replanned == fresh
    best_len, _ = oracles.best_order_by_enumeration(
        new_p0, [w.position for w in remaining], h)
    assert replanned.total_length == best_len


def test_replan_rejects_unknown_waypoints():
    p0, h = Point2(0.1, 0.5), Point2(0.9, 0.5)
    current = plan_trajectory(p0, [wp(0.3, 0.4)], h)
    with pytest.raises(ValueError):
        replan_on_deviation(current, p0, [wp(0.99, 0.99)], h)
