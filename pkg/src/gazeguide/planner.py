"""Gaze-guidance trajectory ordering.

Orders extracted waypoints between the driver's current fixation point and
the hazard so the total gaze travel is minimal. Counts are small (k_max
caps them well under 8), so exact permutation enumeration is used; ties are
broken by the lexicographically smallest (y, x) stop sequence for
determinism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import TooManyWaypoints
from .saliency import Waypoint
from .scene import Point2

MAX_EXACT = 8


@dataclass(frozen=True)
class PlannedTrajectory:
    start: Point2
    stops: tuple[Waypoint, ...]
    terminal: Point2
    total_length: float

    def points(self) -> list[Point2]:
        return [self.start, *(w.position for w in self.stops), self.terminal]


def path_length(start: Point2, stops: tuple[Waypoint, ...], terminal: Point2) -> float:
    prev = start
    total = 0.0
    for w in stops:
        total += prev.dist(w.position)
        prev = w.position
    return total + prev.dist(terminal)


def plan_trajectory(p0: Point2, waypoints: list[Waypoint], hazard: Point2,
                    max_exact: int = MAX_EXACT) -> PlannedTrajectory:
    """Minimal-length ordering of all waypoints for the fixed endpoints p0 -> h."""
    if len(waypoints) > max_exact:
        raise TooManyWaypoints(f"{len(waypoints)} waypoints > max_exact {max_exact}")
    best_order = tuple(waypoints)
    best_len = path_length(p0, best_order, hazard)
    best_key = tuple((w.position.y, w.position.x) for w in best_order)
    for perm in itertools.permutations(waypoints):
        length = path_length(p0, perm, hazard)
        key = tuple((w.position.y, w.position.x) for w in perm)
        if length < best_len or (length == best_len and key < best_key):
            best_order, best_len, best_key = perm, length, key
    return PlannedTrajectory(p0, best_order, hazard, best_len)


def replan_on_deviation(current: PlannedTrajectory, new_p0: Point2,
                        remaining: list[Waypoint], hazard: Point2) -> PlannedTrajectory:
    """Fresh plan over the unacquired markers from the driver's new fixation point."""
    current_set = set(current.stops)
    for w in remaining:
        if w not in current_set:
            raise ValueError(f"waypoint {w} not in current trajectory")
    return plan_trajectory(new_p0, remaining, hazard)
