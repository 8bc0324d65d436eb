"""Gaze stream processing and synthetic driver agents.

Gaze arrives as timestamped normalized points (eye-tracking hardware is out
of scope; the session service or an agent produces the stream). Fixation
detection is dispersion-threshold identification (I-DT): a window is a
fixation when its x-span + y-span stays under a threshold for a minimum
duration.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import rng
from .errors import UnorderedSamples
from .scene import Point2, SceneSpec


@dataclass(frozen=True)
class GazeSample:
    t: float
    point: Point2
    valid: bool = True


@dataclass(frozen=True)
class FixationState:
    centroid: Point2
    start_t: float
    duration_s: float
    dispersion: float


@dataclass(frozen=True)
class IdtConfig:
    min_fix_duration_s: float = 0.1
    disp_threshold: float = 0.03


@dataclass(frozen=True)
class TargetFixationConfig:
    target_fix_duration_s: float = 2.0
    radius: float = 0.05  # reserved for associating the fixation with the distraction point


def _check_ordered(samples) -> None:
    for a, b in zip(samples, samples[1:]):
        if b.t < a.t:
            raise UnorderedSamples(f"t decreased from {a.t} to {b.t}")


def detect_fixation(window: list[GazeSample], cfg: IdtConfig = IdtConfig()) -> FixationState | None:
    """Maximal-duration fixation ending at the window tail, or None.

    Walks backwards from the tail over consecutive valid samples, extending
    while x-span + y-span stays within the dispersion threshold; reports the
    widest such suffix if it lasts at least the minimum duration.
    """
    _check_ordered(window)
    if not window or not window[-1].valid:
        return None
    end = len(window) - 1
    minx = maxx = window[end].point.x
    miny = maxy = window[end].point.y
    best_start = end
    k = end - 1
    while k >= 0 and window[k].valid:
        p = window[k].point
        nminx, nmaxx = min(minx, p.x), max(maxx, p.x)
        nminy, nmaxy = min(miny, p.y), max(maxy, p.y)
        if (nmaxx - nminx) + (nmaxy - nminy) > cfg.disp_threshold:
            break
        minx, maxx, miny, maxy = nminx, nmaxx, nminy, nmaxy
        best_start = k
        k -= 1
    duration = window[end].t - window[best_start].t
    if duration < cfg.min_fix_duration_s:
        return None
    member = window[best_start:end + 1]
    cx = sum(s.point.x for s in member) / len(member)
    cy = sum(s.point.y for s in member) / len(member)
    return FixationState(Point2(cx, cy), window[best_start].t, duration,
                         (maxx - minx) + (maxy - miny))


def segment_fixations(samples: list[GazeSample], cfg: IdtConfig = IdtConfig()) -> list[FixationState]:
    """Greedy I-DT segmentation of a whole stream into fixations.

    Each window grows from its start sample while the dispersion stays under
    threshold; if it covers the minimum duration it is emitted and scanning
    resumes after it, otherwise the start slides by one. Invalid samples
    terminate any window they touch.
    """
    _check_ordered(samples)
    fixations: list[FixationState] = []
    run_start = 0
    n = len(samples)
    while run_start < n:
        if not samples[run_start].valid:
            run_start += 1
            continue
        run_end = run_start
        while run_end + 1 < n and samples[run_end + 1].valid:
            run_end += 1
        fixations.extend(_scan_valid_run(samples, run_start, run_end, cfg))
        run_start = run_end + 1
    return fixations


def _scan_valid_run(samples, lo: int, hi: int, cfg: IdtConfig) -> list[FixationState]:
    out = []
    i = lo
    while i <= hi:
        minx = maxx = samples[i].point.x
        miny = maxy = samples[i].point.y
        j = i
        while j + 1 <= hi:
            p = samples[j + 1].point
            nminx, nmaxx = min(minx, p.x), max(maxx, p.x)
            nminy, nmaxy = min(miny, p.y), max(maxy, p.y)
            if (nmaxx - nminx) + (nmaxy - nminy) > cfg.disp_threshold:
                break
            minx, maxx, miny, maxy = nminx, nmaxx, nminy, nmaxy
            j += 1
        if samples[j].t - samples[i].t >= cfg.min_fix_duration_s:
            member = samples[i:j + 1]
            cx = sum(s.point.x for s in member) / len(member)
            cy = sum(s.point.y for s in member) / len(member)
            out.append(FixationState(Point2(cx, cy), samples[i].t,
                                     samples[j].t - samples[i].t,
                                     (maxx - minx) + (maxy - miny)))
            i = j + 1
        else:
            i += 1
    return out


def detect_target_fixation(fix: FixationState,
                           cfg: TargetFixationConfig = TargetFixationConfig()) -> bool:
    """True when a fixation has lasted long enough to count as target fixation."""
    return fix.duration_s >= cfg.target_fix_duration_s


# ---------------------------------------------------------------------------
# Synthetic driver agents


class AgentKind(Enum):
    COMPLIANT = "Compliant"
    DISTRACTED = "Distracted"
    NON_COMPLIANT = "NonCompliant"
    RANDOM_SCAN = "RandomScan"


@dataclass(frozen=True)
class GazeAgentConfig:
    kind: AgentKind = AgentKind.COMPLIANT
    reaction_latency_s: float = 0.25
    saccade_speed: float = 3.0
    landing_noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.reaction_latency_s < 0:
            raise ValueError("reaction_latency_s must be >= 0")
        if self.saccade_speed <= 0:
            raise ValueError("saccade_speed must be > 0")


DISTRACTED_LATENCY_S = 0.8
RANDOM_SCAN_FIX_S = 0.5


@dataclass(frozen=True)
class ActiveMarkerInfo:
    """What the driver can see of the currently active cue."""
    index: int
    position: Point2
    urgency: str
    activated_t: float


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, v))


class GazeAgent:
    """Base synthetic driver: holds a fixation point until a subclass moves it."""

    def __init__(self, cfg: GazeAgentConfig, scene: SceneSpec, seed: int | None = None,
                 warmup_until: float = 0.0):
        self.cfg = cfg
        self.scene = scene
        self.warmup_until = warmup_until
        base_seed = cfg.seed if seed is None else seed
        self._choice_rng = rng.stream(base_seed, "agent")
        self._noise_rng = rng.stream(base_seed, "noise")
        self.pos = scene.distraction_point

    def step(self, now_t: float, marker: ActiveMarkerInfo | None) -> GazeSample:
        if now_t >= self.warmup_until:
            self._advance(now_t, marker)
        return GazeSample(now_t, Point2(_clamp(self.pos.x), _clamp(self.pos.y)), True)

    def _advance(self, now_t: float, marker: ActiveMarkerInfo | None) -> None:
        raise NotImplementedError

    def _landing_noise(self) -> tuple[float, float]:
        dx, dy = self._noise_rng.normal(0.0, self.cfg.landing_noise_sigma, 2)
        return float(dx), float(dy)


class NonCompliantAgent(GazeAgent):
    """Never leaves the distraction point; emits it exactly, no noise."""

    def _advance(self, now_t: float, marker) -> None:
        self.pos = self.scene.distraction_point


class _SaccadeToMarkerAgent(GazeAgent):
    """Shared move-to-marker mechanics: latency, straight travel, noisy landing."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._target_key: tuple[int, float] | None = None
        self._motion: tuple[Point2, Point2, float, float] | None = None  # origin, landing, start, dist

    def _respond_anchor(self, now_t: float, marker: ActiveMarkerInfo) -> float | None:
        """Time the agent noticed the cue it reacts to, or None to keep ignoring it."""
        raise NotImplementedError

    def _latency(self) -> float:
        return self.cfg.reaction_latency_s

    def _advance(self, now_t: float, marker: ActiveMarkerInfo | None) -> None:
        if marker is None:
            return
        if self._target_key != (marker.index, marker.activated_t):
            anchor = self._respond_anchor(now_t, marker)
            if anchor is None:
                return
            self._target_key = (marker.index, marker.activated_t)
            dx, dy = self._landing_noise()
            landing = Point2(_clamp(marker.position.x + dx), _clamp(marker.position.y + dy))
            self._motion = (self.pos, landing, anchor + self._latency(), self.pos.dist(landing))
        if self._motion is None:
            return
        origin, landing, start, dist = self._motion
        if now_t < start:
            return
        travelled = self.cfg.saccade_speed * (now_t - start)
        if travelled >= dist or dist == 0.0:
            self.pos = landing
            self._motion = None
        else:
            f = travelled / dist
            self.pos = Point2(origin.x + f * (landing.x - origin.x),
                              origin.y + f * (landing.y - origin.y))


class CompliantAgent(_SaccadeToMarkerAgent):
    """Follows every cue after its reaction latency, measured from activation."""

    def _respond_anchor(self, now_t: float, marker: ActiveMarkerInfo) -> float | None:
        return marker.activated_t


class DistractedAgent(_SaccadeToMarkerAgent):
    """Ignores cues until their urgency escalates to High, then reacts slowly."""

    def _respond_anchor(self, now_t: float, marker: ActiveMarkerInfo) -> float | None:
        return now_t if marker.urgency == "High" else None

    def _latency(self) -> float:
        return DISTRACTED_LATENCY_S


class RandomScanAgent(GazeAgent):
    """Ignores cues; hops between object centroids, fixating each for 0.5 s.

    Hops are instantaneous (saccades are sub-tick at desk scale). With no
    objects in the scene there is nothing to scan, so the agent stays put.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._next_jump_t: float | None = None

    def _advance(self, now_t: float, marker) -> None:
        if not self.scene.objects:
            return
        if self._next_jump_t is None:
            self._next_jump_t = now_t
        if now_t >= self._next_jump_t:
            obj = self.scene.objects[int(self._choice_rng.integers(len(self.scene.objects)))]
            dx, dy = self._landing_noise()
            self.pos = Point2(_clamp(obj.centroid.x + dx), _clamp(obj.centroid.y + dy))
            self._next_jump_t += RANDOM_SCAN_FIX_S


class ReplayAgent(GazeAgent):
    """Feeds back a recorded trace; sample timestamps must match the tick grid."""

    def __init__(self, trace: list[GazeSample], scene: SceneSpec):
        super().__init__(GazeAgentConfig(), scene)
        self._trace = trace
        self._i = 0

    def step(self, now_t: float, marker: ActiveMarkerInfo | None) -> GazeSample:
        while self._i < len(self._trace) and self._trace[self._i].t < now_t - 1e-9:
            self._i += 1
        if self._i < len(self._trace) and abs(self._trace[self._i].t - now_t) <= 1e-9:
            sample = self._trace[self._i]
            self._i += 1
            return sample
        return GazeSample(now_t, self.pos, False)


_AGENT_CLASSES = {
    AgentKind.COMPLIANT: CompliantAgent,
    AgentKind.DISTRACTED: DistractedAgent,
    AgentKind.NON_COMPLIANT: NonCompliantAgent,
    AgentKind.RANDOM_SCAN: RandomScanAgent,
}


def make_agent(cfg: GazeAgentConfig, scene: SceneSpec, seed: int | None = None,
               warmup_until: float = 0.0) -> GazeAgent:
    return _AGENT_CLASSES[cfg.kind](cfg, scene, seed=seed, warmup_until=warmup_until)


def agent_step(agent: GazeAgent, now_t: float, marker: ActiveMarkerInfo | None) -> GazeSample:
    """Advance an agent one tick and return its gaze sample."""
    return agent.step(now_t, marker)


# ---------------------------------------------------------------------------
# Trace I/O: line-delimited `t,x,y,valid` records for session replay.


def dump_trace(samples: list[GazeSample]) -> str:
    lines = [f"{s.t!r},{s.point.x!r},{s.point.y!r},{int(s.valid)}" for s in samples]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str) -> list[GazeSample]:
    samples = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"trace line {lineno}: expected t,x,y,valid")
        t, x, y = float(parts[0]), float(parts[1]), float(parts[2])
        samples.append(GazeSample(t, Point2(x, y), parts[3].strip() == "1"))
    return samples


def save_trace(samples: list[GazeSample], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_trace(samples))


def load_trace(path) -> list[GazeSample]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read())
