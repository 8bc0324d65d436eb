"""Saliency field synthesis, hazard-prior fusion, and waypoint extraction.

The base field is an analytic stand-in for a learned saliency model: a
peak-normalized sum of isotropic Gaussian blobs, one per scene object.
Fusion multiplies the base field by a Gaussian prior centered on the
hazard, so surviving high-value regions are the hazard-relevant ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, NonPositiveSigma
from .scene import Point2, SceneSpec

MOVING_BOOST = 1.5


@dataclass(frozen=True)
class SaliencyGrid:
    """Non-negative attention field over the windshield plane.

    `values` is row-major with shape (height, width); cell (col i, row j)
    has its center at ((i + 0.5) / width, (j + 0.5) / height).
    Peak-normalized: max == 1 unless the grid is identically zero.
    """

    width: int
    height: int
    values: np.ndarray
    fused: bool = False

    def value_at(self, p: Point2) -> float:
        i = min(int(p.x * self.width), self.width - 1)
        j = min(int(p.y * self.height), self.height - 1)
        return float(self.values[j, i])

    def cell_center(self, i: int, j: int) -> Point2:
        return Point2((i + 0.5) / self.width, (j + 0.5) / self.height)


@dataclass(frozen=True)
class Waypoint:
    position: Point2
    score: float
    snapped_object_id: str | None = None


@dataclass(frozen=True)
class SaliencyConfig:
    grid_width: int = 64
    grid_height: int = 64
    sigma_h: float = 0.18
    tau: float = 0.35
    min_sep: float = 0.08
    k_max: int = 4
    hazard_exclusion: float = 0.05
    snap_radius: float = 0.04


def _cell_centers(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    xs = (np.arange(width) + 0.5) / width
    ys = (np.arange(height) + 0.5) / height
    return np.meshgrid(xs, ys)


def _peak_normalize(values: np.ndarray) -> np.ndarray:
    peak = values.max() if values.size else 0.0
    if peak > 0.0:
        return values / peak
    return np.zeros_like(values)


def base_saliency(scene: SceneSpec, grid_width: int = 64, grid_height: int = 64) -> SaliencyGrid:
    """Peak-normalized sum of per-object Gaussian blobs.

    Per object: amplitude = salience_weight * (1.5 if moving else 1.0),
    sigma = max(half_extent.x, half_extent.y). No objects -> all-zero grid.
    """
    if grid_width < 8 or grid_height < 8:
        raise GridTooSmall(f"grid {grid_width}x{grid_height} below 8x8 minimum")
    gx, gy = _cell_centers(grid_width, grid_height)
    total = np.zeros((grid_height, grid_width))
    for obj in scene.objects:
        amp = obj.salience_weight * (MOVING_BOOST if obj.moving else 1.0)
        sigma = max(obj.half_extent.x, obj.half_extent.y)
        d2 = (gx - obj.centroid.x) ** 2 + (gy - obj.centroid.y) ** 2
        total += amp * np.exp(-d2 / (2.0 * sigma * sigma))
    return SaliencyGrid(grid_width, grid_height, _peak_normalize(total))


def fuse_hazard_prior(base: SaliencyGrid, hazard: Point2, sigma_h: float = 0.18) -> SaliencyGrid:
    """Multiply the base field by a Gaussian prior at the hazard, then peak-normalize."""
    if sigma_h <= 0.0:
        raise NonPositiveSigma(f"sigma_h must be > 0, got {sigma_h}")
    gx, gy = _cell_centers(base.width, base.height)
    d2 = (gx - hazard.x) ** 2 + (gy - hazard.y) ** 2
    prior = np.exp(-d2 / (2.0 * sigma_h * sigma_h))
    return SaliencyGrid(base.width, base.height, _peak_normalize(base.values * prior), fused=True)


def _local_maxima(values: np.ndarray) -> list[tuple[int, int]]:
    """Cells whose value is >= every in-bounds 8-neighbor (plateaus included)."""
    h, w = values.shape
    padded = np.full((h + 2, w + 2), -np.inf)
    padded[1:-1, 1:-1] = values
    keep = np.ones(values.shape, dtype=bool)
    for dj in (-1, 0, 1):
        for di in (-1, 0, 1):
            if dj == 0 and di == 0:
                continue
            keep &= values >= padded[1 + dj:h + 1 + dj, 1 + di:w + 1 + di]
    js, is_ = np.nonzero(keep)
    return list(zip(is_.tolist(), js.tolist()))


def extract_waypoints(filtered: SaliencyGrid, scene: SceneSpec,
                      cfg: SaliencyConfig = SaliencyConfig()) -> list[Waypoint]:
    """High-value regions of the fused field, mapped to object locations.

    Local maxima with value >= tau are snapped to the nearest object centroid
    within snap_radius, then greedily selected in descending-value order with
    non-maximum suppression at radius min_sep (so emitted positions are always
    pairwise >= min_sep apart, snapped or not). Cells within hazard_exclusion
    of the hazard are dropped. At most k_max results, ordered by descending
    score with ties broken by ascending (y, x).
    """
    if not (0.0 < cfg.tau < 1.0):
        raise ValueError(f"tau must be in (0,1), got {cfg.tau}")
    if cfg.k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {cfg.k_max}")
    hazard = scene.hazard.position
    candidates = []
    for i, j in _local_maxima(filtered.values):
        score = float(filtered.values[j, i])
        if score < cfg.tau:
            continue
        cell = filtered.cell_center(i, j)
        if cell.dist(hazard) <= cfg.hazard_exclusion:
            continue
        pos = cell
        snapped_id = None
        best = None
        for obj in sorted(scene.objects, key=lambda o: o.id):
            d = cell.dist(obj.centroid)
            if d <= cfg.snap_radius and (best is None or d < best):
                best = d
                snapped_id = obj.id
                pos = obj.centroid
        candidates.append(Waypoint(pos, score, snapped_id))

    candidates.sort(key=lambda w: (-w.score, w.position.y, w.position.x))
    selected: list[Waypoint] = []
    for cand in candidates:
        if len(selected) >= cfg.k_max:
            break
        if all(cand.position.dist(s.position) >= cfg.min_sep for s in selected):
            selected.append(cand)
    return selected


def to_pgm(grid: SaliencyGrid, maxval: int = 255) -> str:
    """Render the grid as a plain portable graymap (PGM, P2) for debugging."""
    scaled = np.rint(grid.values * maxval).astype(int)
    lines = ["P2", f"{grid.width} {grid.height}", str(maxval)]
    for row in scaled:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
