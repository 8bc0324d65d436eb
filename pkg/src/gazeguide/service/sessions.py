"""Live session engine: one driver's gaze stream in, cue state out.

The engine is synchronous and owns nothing but Simulation state; the
WebSocket layer paces it against the wall clock, but engine time is always
tick_index / tick_hz, so a persisted session replays bit-for-bit through
the headless runner.
"""

from __future__ import annotations

import os
import threading

from ..errors import CapacityExceeded, MalformedMessage, SceneNotFound, SessionClosed
from ..gaze import GazeSample, save_trace
from ..harness import RunConfig, RunResult, Simulation, export_results
from ..cues import StepOutput, style_dict, style_for, Urgency
from ..scene import Point2, SceneSpec, scene_to_dict

STALE_TICKS = 3
SNAPSHOT_EVERY_TICKS = 6  # 10 Hz at the default 60 Hz tick


class SessionEngine:
    """Engine state for one live session (Waiting -> Running -> Complete/Ended)."""

    def __init__(self, session_id: str, scene: SceneSpec, cfg: RunConfig):
        self.session_id = session_id
        self.scene = scene
        self.cfg = cfg
        self.sim = Simulation(scene, cfg)
        self.phase = "Waiting"
        self._latest: tuple[float, float, bool] | None = None
        self._latest_tick = -(10 ** 9)
        self._closed = False

    # -- inbound -----------------------------------------------------------

    def submit_gaze(self, x: float, y: float, valid: bool = True) -> None:
        if self._closed:
            raise SessionClosed(self.session_id)
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise MalformedMessage(f"gaze ({x}, {y}) outside [0,1]^2")
        if self.phase == "Waiting":
            self.phase = "Running"
        self._latest = (x, y, valid)
        self._latest_tick = self.sim.tick

    # -- tick --------------------------------------------------------------

    def consume_sample(self) -> GazeSample:
        """Latest-sample-wins: the newest client gaze, stale or absent -> invalid."""
        t = self.sim.now_t
        if self._latest is None:
            p = self.scene.distraction_point
            return GazeSample(t, p, False)
        x, y, valid = self._latest
        stale = self.sim.tick - self._latest_tick > STALE_TICKS
        return GazeSample(t, Point2(x, y), valid and not stale)

    def tick(self) -> StepOutput | None:
        """Advance one engine tick; None when the session is over."""
        if self._closed or self.sim.finished:
            return None
        out = self.sim.step(self.consume_sample())
        if self.sim.finished:
            self.phase = "Complete"
        return out

    @property
    def finished(self) -> bool:
        return self._closed or self.sim.finished

    def wants_snapshot(self) -> bool:
        return self.sim.tick % SNAPSHOT_EVERY_TICKS == 0

    # -- views ---------------------------------------------------------------

    def pending_markers(self) -> list[dict]:
        """Marker preview before the TOR: every waypoint plus the hazard, Pending."""
        if self.sim.machine is not None:
            return self.sim.machine.snapshot()["markers"]
        positions = [w.position for w in self.sim.waypoints] + [self.scene.hazard.position]
        style = style_dict(style_for(Urgency.LOW))
        return [
            {"index": i, "position": [p.x, p.y], "state": "Pending",
             "urgency": "Low", "style": style, "activated_t": None, "acquired_t": None}
            for i, p in enumerate(positions)
        ]

    def snapshot(self) -> dict:
        if self.sim.machine is None:
            body = {"complete": False, "active_index": None,
                    "markers": self.pending_markers()}
        else:
            body = self.sim.machine.snapshot()
        body["t"] = self.sim.now_t
        body["phase"] = self.phase
        body["acquired_count"] = (self.sim.machine.acquired_count()
                                  if self.sim.machine is not None else 0)
        return body

    def scene_dict(self) -> dict:
        return scene_to_dict(self.scene)

    # -- teardown ------------------------------------------------------------

    def close(self) -> RunResult:
        """Finalize and return the run result; further input raises SessionClosed."""
        if self._closed:
            raise SessionClosed(self.session_id)
        self._closed = True
        if self.phase != "Complete":
            self.phase = "Ended"
        return self.sim.result()


class SessionManager:
    """Tracks open sessions, enforces capacity, persists finished runs."""

    def __init__(self, scenes: dict[str, SceneSpec], runs_dir: str | None = None,
                 max_sessions: int = 16):
        self.scenes = scenes
        self.runs_dir = runs_dir
        self.max_sessions = max_sessions
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionEngine] = {}
        self._counter = 0

    def open(self, scene_id: str, cfg: RunConfig | None = None) -> SessionEngine:
        try:
            scene = self.scenes[scene_id]
        except KeyError:
            raise SceneNotFound(scene_id) from None
        with self._lock:
            if len(self._sessions) >= self.max_sessions:
                raise CapacityExceeded(f"{self.max_sessions} sessions already open")
            self._counter += 1
            session_id = f"s{self._counter:06d}"
            if cfg is None:
                cfg = RunConfig(scene_id=scene_id)
            engine = SessionEngine(session_id, scene, cfg)
            self._sessions[session_id] = engine
        return engine

    def close(self, engine: SessionEngine) -> RunResult:
        result = engine.close()
        with self._lock:
            self._sessions.pop(engine.session_id, None)
        if self.runs_dir:
            out_dir = os.path.join(self.runs_dir, engine.session_id)
            export_results([result], out_dir)
            save_trace(result.samples, os.path.join(out_dir, "trace.gaze"))
        return result

    def discard(self, engine: SessionEngine) -> None:
        """Drop a session that failed before closing cleanly."""
        with self._lock:
            self._sessions.pop(engine.session_id, None)
