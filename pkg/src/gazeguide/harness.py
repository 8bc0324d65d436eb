"""Deterministic fixed-tick scenario runner, metrics, baselines, and export.

Every run is a pure function of its RunConfig: engine time is
tick_index / tick_hz, all randomness flows from the run seed through named
substreams, and the event log is byte-stable on re-export.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass, replace
from typing import Mapping

from .cues import (CueEvent, CueEventKind, CueMachine, EscalationConfig, StepOutput,
                   init_cues)
from .errors import SceneNotFound
from .gaze import (AgentKind, GazeAgentConfig, GazeSample, ReplayAgent,
                   detect_fixation, make_agent)
from .planner import PlannedTrajectory, plan_trajectory, replan_on_deviation
from .saliency import (SaliencyConfig, Waypoint, base_saliency, extract_waypoints,
                       fuse_hazard_prior)
from .scene import Point2, SceneSpec

SCHEMA_VERSION = 1
WARMUP_S = 0.5
BREAK_RADIUS = 0.08

CSV_COLUMNS = [
    "scene_id", "seed", "agent_kind", "completed", "t_break_s", "t_hazard_s",
    "waypoints_acquired", "escalations_medium", "escalations_high",
    "gaze_path_length", "planned_length",
]


@dataclass(frozen=True)
class RunConfig:
    scene_id: str
    agent: GazeAgentConfig = GazeAgentConfig()
    escalation: EscalationConfig = EscalationConfig()
    saliency: SaliencyConfig = SaliencyConfig()
    tick_hz: int = 60
    seed: int = 1

    def __post_init__(self):
        if self.tick_hz <= 0:
            raise ValueError("tick_hz must be > 0")


@dataclass(frozen=True)
class RunMetrics:
    t_break_s: float | None
    t_hazard_s: float | None
    waypoints_acquired: int
    escalations_medium: int
    escalations_high: int
    gaze_path_length: float
    planned_length: float
    completed: bool


@dataclass
class RunResult:
    config: RunConfig
    metrics: RunMetrics
    events: list[dict]
    samples: list[GazeSample]
    waypoints: list[Waypoint]
    trajectory: PlannedTrajectory

    def record(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": run_config_to_dict(self.config),
            "metrics": metrics_to_dict(self.metrics),
            "events": self.events,
        }

    def record_line(self) -> str:
        return json.dumps(self.record(), sort_keys=True, separators=(",", ":"))


def initial_fixation_point(warmup_samples: list[GazeSample], fallback: Point2) -> Point2:
    """p0 for planning: the warm-up fixation centroid, else the last valid sample."""
    fix = detect_fixation(warmup_samples)
    if fix is not None:
        return fix.centroid
    for s in reversed(warmup_samples):
        if s.valid:
            return s.point
    return fallback


def compute_waypoints(scene: SceneSpec, cfg: SaliencyConfig):
    base = base_saliency(scene, cfg.grid_width, cfg.grid_height)
    fused = fuse_hazard_prior(base, scene.hazard.position, cfg.sigma_h)
    return base, fused, extract_waypoints(fused, scene, cfg)


def _cue_event_dict(ev: CueEvent) -> dict:
    return {
        "t": ev.t,
        "type": "cue",
        "kind": ev.kind.value,
        "marker_index": ev.marker_index,
        "urgency": ev.urgency.value if ev.urgency is not None else None,
    }


def _audio_event_dict(ev) -> dict:
    return {
        "t": ev.t,
        "type": "audio",
        "kind": ev.kind.value,
        "frequency_hz": ev.frequency_hz,
        "duration_s": ev.duration_s,
        "pan": ev.pan,
    }


def _log_step(log: list[dict], out: StepOutput) -> None:
    log.extend(_cue_event_dict(e) for e in out.events)
    log.extend(_audio_event_dict(a) for a in out.audio)


class Simulation:
    """Tick-by-tick pipeline core shared by the batch runner and the live
    session service; feeding the same sample stream always reproduces the
    same event log.

    Callers supply one GazeSample per tick (sample.t on the tick grid). The
    warm-up phase just records samples; at the TOR tick the initial fixation
    is planned into a trajectory and the cue machine starts.
    """

    def __init__(self, scene: SceneSpec, cfg: RunConfig):
        self.scene = scene
        self.cfg = cfg
        _, _, self.waypoints = compute_waypoints(scene, cfg.saliency)
        self.hz = cfg.tick_hz
        self.tor_tick = int(round(WARMUP_S * self.hz))
        self.last_tick = int(scene.duration_s * self.hz + 1e-9)
        self.tick = 0
        self.samples: list[GazeSample] = []
        self.log: list[dict] = []
        self.machine: CueMachine | None = None
        self.trajectory: PlannedTrajectory | None = None
        self._current_traj: PlannedTrajectory | None = None
        self._acquired_stops = 0

    @property
    def now_t(self) -> float:
        return self.tick / self.hz

    @property
    def finished(self) -> bool:
        if self.machine is not None and self.machine.complete:
            return True
        return self.tick > self.last_tick

    def marker_info(self):
        return self.machine.active_marker_info() if self.machine is not None else None

    def step(self, sample: GazeSample) -> StepOutput:
        """Advance one tick with the given gaze sample."""
        t = self.now_t
        outputs: list[StepOutput] = []
        if self.tick == self.tor_tick:
            p0 = initial_fixation_point(self.samples, self.scene.distraction_point)
            self.trajectory = plan_trajectory(p0, self.waypoints,
                                              self.scene.hazard.position)
            self._current_traj = self.trajectory
            self.machine = init_cues(self.trajectory, self.scene.hazard.severity,
                                     self.cfg.escalation, now_t=t)
            outputs.append(self.machine.poll())
        if self.machine is not None and not self.machine.complete:
            out = self.machine.step(sample, t)
            outputs.append(out)
            self._acquired_stops += _stops_acquired(out, len(self._current_traj.stops))
            if not self.machine.complete \
                    and any(e.kind is CueEventKind.DEVIATION for e in out.events):
                outputs.extend(self._maybe_replan(sample.point, t))
        self.samples.append(sample)
        self.tick += 1
        merged = StepOutput(
            events=tuple(e for o in outputs for e in o.events),
            audio=tuple(a for o in outputs for a in o.audio),
        )
        _log_step(self.log, merged)
        return merged

    def _maybe_replan(self, new_p0: Point2, now_t: float) -> list[StepOutput]:
        """Replan over unacquired stops; rebuild markers only when the order changes.

        Keeping the machine untouched for an unchanged order preserves the
        active marker's escalation clock, so a stalled driver keeps escalating
        rather than being reset by every deviation.
        """
        current = self._current_traj
        remaining = list(current.stops[self.machine.active_idx:]) \
            if self.machine.active_idx < len(current.stops) else []
        new_traj = replan_on_deviation(current, new_p0, remaining,
                                       self.scene.hazard.position)
        if [w.position for w in new_traj.stops] == [w.position for w in remaining]:
            return []
        self.machine = init_cues(new_traj, self.scene.hazard.severity,
                                 self.cfg.escalation, now_t=now_t)
        self._current_traj = new_traj
        return [self.machine.poll()]

    def metrics(self) -> RunMetrics:
        return _compute_metrics(self.scene, self.samples, self.log, self.machine,
                                self.trajectory, self._acquired_stops,
                                self.tor_tick / self.hz)

    def result(self, cfg: RunConfig | None = None) -> RunResult:
        return RunResult(cfg or self.cfg, self.metrics(), self.log, self.samples,
                         self.waypoints, self.trajectory)


def run_scenario(cfg: RunConfig, scenes: Mapping[str, SceneSpec],
                 replay_trace: list[GazeSample] | None = None) -> RunResult:
    """Execute the full pipeline for one scenario.

    saliency -> hazard fusion -> waypoints -> warm-up fixation -> trajectory
    -> tick loop (agent step, then cue step) until the hazard marker is
    acquired or the scenario duration runs out. Identical configs produce
    bit-identical results; passing a recorded trace replays it through the
    same loop.
    """
    try:
        scene = scenes[cfg.scene_id]
    except KeyError:
        raise SceneNotFound(cfg.scene_id) from None

    if replay_trace is not None:
        agent = ReplayAgent(replay_trace, scene)
    else:
        agent = make_agent(cfg.agent, scene, seed=cfg.seed, warmup_until=WARMUP_S)

    sim = Simulation(scene, cfg)
    while not sim.finished:
        sample = agent.step(sim.now_t, sim.marker_info())
        sim.step(sample)
    return sim.result()


def _stops_acquired(out: StepOutput, stop_count: int) -> int:
    return sum(1 for e in out.events
               if e.kind is CueEventKind.MARKER_ACQUIRED and e.marker_index < stop_count)


def _compute_metrics(scene: SceneSpec, samples: list[GazeSample],
                     log: list[dict], machine: CueMachine | None,
                     initial_traj: PlannedTrajectory, acquired_stops: int,
                     tor_t: float) -> RunMetrics:
    t_break = None
    for s in samples:
        if s.t >= tor_t - 1e-9 and s.valid \
                and s.point.dist(scene.distraction_point) > BREAK_RADIUS:
            t_break = s.t
            break

    completed = machine is not None and machine.complete
    t_hazard = machine.markers[-1].acquired_t if completed else None

    esc_medium = sum(1 for e in log if e["type"] == "cue"
                     and e["kind"] == CueEventKind.ESCALATED.value and e["urgency"] == "Medium")
    esc_high = sum(1 for e in log if e["type"] == "cue"
                   and e["kind"] == CueEventKind.ESCALATED.value and e["urgency"] == "High")

    path = 0.0
    prev = None
    for s in samples:
        if s.t < tor_t - 1e-9 or not s.valid:
            continue
        if prev is not None:
            path += prev.dist(s.point)
        prev = s.point

    return RunMetrics(
        t_break_s=t_break,
        t_hazard_s=t_hazard,
        waypoints_acquired=acquired_stops,
        escalations_medium=esc_medium,
        escalations_high=esc_high,
        gaze_path_length=path,
        planned_length=0.0 if initial_traj is None else initial_traj.total_length,
        completed=completed,
    )


# ---------------------------------------------------------------------------
# Unguided baseline: no cues at all; success mirrors guided acquisition
# (gaze within acquire_radius of the hazard held for dwell_s).


@dataclass(frozen=True)
class UnguidedResult:
    t_hazard_s: float | None
    completed: bool


def run_unguided(cfg: RunConfig, scene: SceneSpec) -> UnguidedResult:
    hz = cfg.tick_hz
    agent = make_agent(cfg.agent, scene, seed=cfg.seed, warmup_until=WARMUP_S)
    hazard = scene.hazard.position
    entry_t = None
    last_tick = int(scene.duration_s * hz + 1e-9)
    for k in range(last_tick + 1):
        t = k / hz
        sample = agent.step(t, None)
        if t < WARMUP_S - 1e-9:
            continue
        if sample.valid and sample.point.dist(hazard) <= cfg.escalation.acquire_radius:
            if entry_t is None:
                entry_t = t
            if t - entry_t >= cfg.escalation.dwell_s - 1e-9:
                return UnguidedResult(entry_t + cfg.escalation.dwell_s, True)
        else:
            entry_t = None
    return UnguidedResult(None, False)


@dataclass(frozen=True)
class SeedPair:
    seed: int
    guided_t: float | None
    unguided_t: float | None


@dataclass(frozen=True)
class ComparisonSummary:
    scene_id: str
    n_seeds: int
    pairs: tuple[SeedPair, ...]
    guided_median: float
    unguided_median: float
    guided_wins: int

    @property
    def win_rate(self) -> float:
        return self.guided_wins / self.n_seeds

    def to_dict(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "n_seeds": self.n_seeds,
            "pairs": [[p.seed, p.guided_t, p.unguided_t] for p in self.pairs],
            "guided_median": self.guided_median,
            "unguided_median": self.unguided_median,
            "guided_wins": self.guided_wins,
            "win_rate": self.win_rate,
        }


def run_baseline_comparison(scene_id: str, scenes: Mapping[str, SceneSpec],
                            n_seeds: int, base: RunConfig | None = None) -> ComparisonSummary:
    """Guided (Compliant + cues) vs unguided (RandomScan, no cues) over seeds 1..n.

    Runs that never reach the hazard are censored at the scenario duration
    for the medians; a win requires the guided run to be strictly faster.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    try:
        scene = scenes[scene_id]
    except KeyError:
        raise SceneNotFound(scene_id) from None
    if base is None:
        base = RunConfig(scene_id=scene_id)

    pairs = []
    wins = 0
    for seed in range(1, n_seeds + 1):
        guided_cfg = replace(base, seed=seed,
                             agent=replace(base.agent, kind=AgentKind.COMPLIANT))
        unguided_cfg = replace(base, seed=seed,
                               agent=replace(base.agent, kind=AgentKind.RANDOM_SCAN))
        guided = run_scenario(guided_cfg, scenes)
        unguided = run_unguided(unguided_cfg, scene)
        g, u = guided.metrics.t_hazard_s, unguided.t_hazard_s
        pairs.append(SeedPair(seed, g, u))
        if (g if g is not None else float("inf")) < (u if u is not None else float("inf")):
            wins += 1

    duration = scene.duration_s

    def censored(v):
        return duration if v is None else v

    return ComparisonSummary(
        scene_id=scene_id,
        n_seeds=n_seeds,
        pairs=tuple(pairs),
        guided_median=statistics.median(censored(p.guided_t) for p in pairs),
        unguided_median=statistics.median(censored(p.unguided_t) for p in pairs),
        guided_wins=wins,
    )


# ---------------------------------------------------------------------------
# Persistence


def metrics_to_dict(m: RunMetrics) -> dict:
    return {
        "t_break_s": m.t_break_s,
        "t_hazard_s": m.t_hazard_s,
        "waypoints_acquired": m.waypoints_acquired,
        "escalations_medium": m.escalations_medium,
        "escalations_high": m.escalations_high,
        "gaze_path_length": m.gaze_path_length,
        "planned_length": m.planned_length,
        "completed": m.completed,
    }


def run_config_to_dict(cfg: RunConfig) -> dict:
    return {
        "scene_id": cfg.scene_id,
        "agent": {
            "kind": cfg.agent.kind.value,
            "reaction_latency_s": cfg.agent.reaction_latency_s,
            "saccade_speed": cfg.agent.saccade_speed,
            "landing_noise_sigma": cfg.agent.landing_noise_sigma,
            "seed": cfg.agent.seed,
        },
        "escalation": {
            "t_medium_s": cfg.escalation.t_medium_s,
            "t_high_s": cfg.escalation.t_high_s,
            "acquire_radius": cfg.escalation.acquire_radius,
            "dwell_s": cfg.escalation.dwell_s,
            "beep_period_s": cfg.escalation.beep_period_s,
            "deviation_distance": cfg.escalation.deviation_distance,
            "deviation_dwell_s": cfg.escalation.deviation_dwell_s,
        },
        "saliency": {
            "grid_width": cfg.saliency.grid_width,
            "grid_height": cfg.saliency.grid_height,
            "sigma_h": cfg.saliency.sigma_h,
            "tau": cfg.saliency.tau,
            "min_sep": cfg.saliency.min_sep,
            "k_max": cfg.saliency.k_max,
            "hazard_exclusion": cfg.saliency.hazard_exclusion,
            "snap_radius": cfg.saliency.snap_radius,
        },
        "tick_hz": cfg.tick_hz,
        "seed": cfg.seed,
    }


def run_config_from_dict(doc: dict, scene_id: str | None = None) -> RunConfig:
    """Build a RunConfig from a config document, filling defaults for absent fields."""
    agent_doc = doc.get("agent", {})
    esc_doc = doc.get("escalation", {})
    sal_doc = doc.get("saliency", {})
    defaults = RunConfig(scene_id="_")
    agent = GazeAgentConfig(
        kind=AgentKind(agent_doc.get("kind", defaults.agent.kind.value)),
        reaction_latency_s=float(agent_doc.get("reaction_latency_s",
                                               defaults.agent.reaction_latency_s)),
        saccade_speed=float(agent_doc.get("saccade_speed", defaults.agent.saccade_speed)),
        landing_noise_sigma=float(agent_doc.get("landing_noise_sigma",
                                                defaults.agent.landing_noise_sigma)),
        seed=int(agent_doc.get("seed", defaults.agent.seed)),
    )
    escalation = EscalationConfig(
        t_medium_s=float(esc_doc.get("t_medium_s", defaults.escalation.t_medium_s)),
        t_high_s=float(esc_doc.get("t_high_s", defaults.escalation.t_high_s)),
        acquire_radius=float(esc_doc.get("acquire_radius", defaults.escalation.acquire_radius)),
        dwell_s=float(esc_doc.get("dwell_s", defaults.escalation.dwell_s)),
        beep_period_s=float(esc_doc.get("beep_period_s", defaults.escalation.beep_period_s)),
        deviation_distance=float(esc_doc.get("deviation_distance",
                                             defaults.escalation.deviation_distance)),
        deviation_dwell_s=float(esc_doc.get("deviation_dwell_s",
                                            defaults.escalation.deviation_dwell_s)),
    )
    saliency = SaliencyConfig(
        grid_width=int(sal_doc.get("grid_width", defaults.saliency.grid_width)),
        grid_height=int(sal_doc.get("grid_height", defaults.saliency.grid_height)),
        sigma_h=float(sal_doc.get("sigma_h", defaults.saliency.sigma_h)),
        tau=float(sal_doc.get("tau", defaults.saliency.tau)),
        min_sep=float(sal_doc.get("min_sep", defaults.saliency.min_sep)),
        k_max=int(sal_doc.get("k_max", defaults.saliency.k_max)),
        hazard_exclusion=float(sal_doc.get("hazard_exclusion",
                                           defaults.saliency.hazard_exclusion)),
        snap_radius=float(sal_doc.get("snap_radius", defaults.saliency.snap_radius)),
    )
    return RunConfig(
        scene_id=scene_id or doc.get("scene_id", ""),
        agent=agent,
        escalation=escalation,
        saliency=saliency,
        tick_hz=int(doc.get("tick_hz", defaults.tick_hz)),
        seed=int(doc.get("seed", defaults.seed)),
    )


def records_text(results: list[RunResult]) -> str:
    return "".join(r.record_line() + "\n" for r in results)


def metrics_csv_text(results: list[RunResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        m = r.metrics
        writer.writerow([
            r.config.scene_id, r.config.seed, r.config.agent.kind.value,
            m.completed,
            "" if m.t_break_s is None else repr(m.t_break_s),
            "" if m.t_hazard_s is None else repr(m.t_hazard_s),
            m.waypoints_acquired, m.escalations_medium, m.escalations_high,
            repr(m.gaze_path_length), repr(m.planned_length),
        ])
    return buf.getvalue()


def export_results(results: list[RunResult], out_dir) -> tuple[str, str]:
    """Write run records (one JSON object per line) and the metrics CSV.

    Re-exporting the same runs produces identical bytes.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    records_path = os.path.join(out_dir, "records.jsonl")
    csv_path = os.path.join(out_dir, "metrics.csv")
    with open(records_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_text(results))
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(metrics_csv_text(results))
    return records_path, csv_path
