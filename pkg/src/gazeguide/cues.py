"""Sequential HUD marker lifecycle: dwell-based acquisition, urgency
escalation, and audio alert scheduling.

One marker is active at a time. The driver acquires it by holding gaze
within the acquire radius for the dwell time; stalls escalate urgency on a
per-marker clock (Low -> Medium -> High) and High urgency beeps on a fixed
period until the marker is acquired.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ClockRegression
from .gaze import ActiveMarkerInfo, GazeSample
from .planner import PlannedTrajectory
from .scene import Point2, Severity

_EPS = 1e-9


class Urgency(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"

    @property
    def rank(self) -> int:
        return _URGENCY_RANK[self]


_URGENCY_RANK = {Urgency.LOW: 0, Urgency.MEDIUM: 1, Urgency.HIGH: 2}


class MarkerState(Enum):
    PENDING = "Pending"
    ACTIVE = "Active"
    ACQUIRED = "Acquired"


class CueShape(Enum):
    ARROW = "Arrow"
    ICON = "Icon"
    RING = "Ring"


class CueColor(Enum):
    NEUTRAL = "Neutral"
    YELLOW = "Yellow"
    RED = "Red"


@dataclass(frozen=True)
class CueStyle:
    shape: CueShape
    color: CueColor
    pulsing: bool
    pulse_period_s: float


_STYLE_TABLE = {
    Urgency.LOW: CueStyle(CueShape.ARROW, CueColor.NEUTRAL, False, 0.0),
    Urgency.MEDIUM: CueStyle(CueShape.ARROW, CueColor.YELLOW, True, 0.8),
    Urgency.HIGH: CueStyle(CueShape.ARROW, CueColor.RED, True, 0.4),
}


def style_for(urgency: Urgency) -> CueStyle:
    """Visual presentation for an urgency level (arrow cue hierarchy)."""
    return _STYLE_TABLE[urgency]


class AudioKind(Enum):
    LOW_TONE = "LowTone"
    URGENT_BEEP = "UrgentBeep"


_AUDIO_PARAMS = {AudioKind.LOW_TONE: (440.0, 0.15), AudioKind.URGENT_BEEP: (880.0, 0.10)}


@dataclass(frozen=True)
class AudioEvent:
    t: float
    kind: AudioKind
    frequency_hz: float
    duration_s: float
    pan: float  # -1 full left .. +1 full right


def make_audio_event(kind: AudioKind, t: float, marker_x: float) -> AudioEvent:
    freq, dur = _AUDIO_PARAMS[kind]
    return AudioEvent(t, kind, freq, dur, 2.0 * marker_x - 1.0)


@dataclass
class CueMarker:
    index: int
    position: Point2
    state: MarkerState = MarkerState.PENDING
    urgency: Urgency = Urgency.LOW
    activated_t: float | None = None
    acquired_t: float | None = None


@dataclass(frozen=True)
class EscalationConfig:
    t_medium_s: float = 2.0
    t_high_s: float = 4.0
    acquire_radius: float = 0.06
    dwell_s: float = 0.3
    beep_period_s: float = 0.5
    deviation_distance: float = 0.15
    deviation_dwell_s: float = 1.0

    def __post_init__(self):
        if not (0 < self.t_medium_s < self.t_high_s):
            raise ValueError("need 0 < t_medium_s < t_high_s")
        if self.acquire_radius <= 0 or self.dwell_s <= 0:
            raise ValueError("acquire_radius and dwell_s must be > 0")


class CueEventKind(Enum):
    MARKER_ACTIVATED = "MarkerActivated"
    MARKER_ACQUIRED = "MarkerAcquired"
    ESCALATED = "Escalated"
    DEVIATION = "Deviation"
    COMPLETE = "Complete"


@dataclass(frozen=True)
class CueEvent:
    t: float
    kind: CueEventKind
    marker_index: int | None = None
    urgency: Urgency | None = None


@dataclass(frozen=True)
class StepOutput:
    events: tuple[CueEvent, ...]
    audio: tuple[AudioEvent, ...]


class CueMachine:
    """Single-owner marker lifecycle state, advanced once per tick."""

    def __init__(self, trajectory: PlannedTrajectory, severity: Severity,
                 cfg: EscalationConfig = EscalationConfig(), now_t: float = 0.0):
        self.cfg = cfg
        self.severity = severity
        self.initial_urgency = Urgency.MEDIUM if severity is Severity.HIGH else Urgency.LOW
        self.activation_audio = (AudioKind.URGENT_BEEP if severity is Severity.HIGH
                                 else AudioKind.LOW_TONE)
        positions = [w.position for w in trajectory.stops] + [trajectory.terminal]
        self.markers = [CueMarker(i, p) for i, p in enumerate(positions)]
        self.active_idx = 0
        self.complete = False
        self._last_t = now_t
        self._entry_t: float | None = None
        self._dev_entry_t: float | None = None
        self._last_beep_t: float | None = None
        self._events: list[CueEvent] = []
        self._audio: list[AudioEvent] = []
        self._activate(0, now_t)

    # -- outbox ------------------------------------------------------------

    def poll(self) -> StepOutput:
        """Drain events emitted since the last poll/step."""
        out = StepOutput(tuple(self._events), tuple(self._audio))
        self._events.clear()
        self._audio.clear()
        return out

    # -- queries -----------------------------------------------------------

    @property
    def active_marker(self) -> CueMarker | None:
        return None if self.complete else self.markers[self.active_idx]

    def active_marker_info(self) -> ActiveMarkerInfo | None:
        m = self.active_marker
        if m is None:
            return None
        return ActiveMarkerInfo(m.index, m.position, m.urgency.value, m.activated_t)

    def acquired_count(self) -> int:
        return sum(1 for m in self.markers if m.state is MarkerState.ACQUIRED)

    # -- transitions --------------------------------------------------------

    def _activate(self, idx: int, now_t: float) -> None:
        m = self.markers[idx]
        m.state = MarkerState.ACTIVE
        m.activated_t = now_t
        m.urgency = self.initial_urgency
        self.active_idx = idx
        self._entry_t = None
        self._dev_entry_t = None
        self._last_beep_t = None
        self._events.append(CueEvent(now_t, CueEventKind.MARKER_ACTIVATED, idx, m.urgency))
        self._audio.append(make_audio_event(self.activation_audio, now_t, m.position.x))

    def step(self, sample: GazeSample, now_t: float) -> StepOutput:
        """Advance one tick: acquisition, then escalation, then deviation."""
        if now_t < self._last_t - _EPS:
            raise ClockRegression(f"now_t went from {self._last_t} to {now_t}")
        self._last_t = now_t
        if self.complete:
            return self.poll()

        active = self.markers[self.active_idx]
        just_activated = False

        if sample.valid and sample.point.dist(active.position) <= self.cfg.acquire_radius:
            if self._entry_t is None:
                self._entry_t = now_t
            if now_t - self._entry_t >= self.cfg.dwell_s - _EPS:
                active.state = MarkerState.ACQUIRED
                active.acquired_t = self._entry_t + self.cfg.dwell_s
                self._events.append(CueEvent(now_t, CueEventKind.MARKER_ACQUIRED,
                                             active.index, active.urgency))
                if self.active_idx + 1 < len(self.markers):
                    self._activate(self.active_idx + 1, now_t)
                    active = self.markers[self.active_idx]
                    just_activated = True
                else:
                    self.complete = True
                    self._events.append(CueEvent(now_t, CueEventKind.COMPLETE))
                    return self.poll()
        else:
            self._entry_t = None

        if not just_activated:
            stalled_for = now_t - active.activated_t
            if active.urgency.rank < Urgency.MEDIUM.rank and stalled_for >= self.cfg.t_medium_s - _EPS:
                active.urgency = Urgency.MEDIUM
                self._events.append(CueEvent(now_t, CueEventKind.ESCALATED,
                                             active.index, active.urgency))
            if active.urgency.rank < Urgency.HIGH.rank and stalled_for >= self.cfg.t_high_s - _EPS:
                active.urgency = Urgency.HIGH
                self._events.append(CueEvent(now_t, CueEventKind.ESCALATED,
                                             active.index, active.urgency))
                self._last_beep_t = now_t
                self._audio.append(make_audio_event(AudioKind.URGENT_BEEP, now_t,
                                                    active.position.x))
            elif active.urgency is Urgency.HIGH and self._last_beep_t is not None \
                    and now_t - self._last_beep_t >= self.cfg.beep_period_s - _EPS:
                self._last_beep_t = now_t
                self._audio.append(make_audio_event(AudioKind.URGENT_BEEP, now_t,
                                                    active.position.x))

        if not just_activated and sample.valid \
                and sample.point.dist(active.position) > self.cfg.deviation_distance:
            if self._dev_entry_t is None:
                self._dev_entry_t = now_t
            elif now_t - self._dev_entry_t >= self.cfg.deviation_dwell_s - _EPS:
                self._events.append(CueEvent(now_t, CueEventKind.DEVIATION, active.index))
                self._dev_entry_t = None
        else:
            self._dev_entry_t = None

        return self.poll()

    def snapshot(self) -> dict:
        """Plain-data view for wire snapshots and UIs."""
        return {
            "complete": self.complete,
            "active_index": None if self.complete else self.active_idx,
            "markers": [
                {
                    "index": m.index,
                    "position": [m.position.x, m.position.y],
                    "state": m.state.value,
                    "urgency": m.urgency.value,
                    "style": style_dict(style_for(m.urgency)),
                    "activated_t": m.activated_t,
                    "acquired_t": m.acquired_t,
                }
                for m in self.markers
            ],
        }


def style_dict(style: CueStyle) -> dict:
    return {"shape": style.shape.value, "color": style.color.value,
            "pulsing": style.pulsing, "pulse_period_s": style.pulse_period_s}


def init_cues(trajectory: PlannedTrajectory, severity: Severity,
              cfg: EscalationConfig = EscalationConfig(), now_t: float = 0.0) -> CueMachine:
    """Create the marker sequence for a planned trajectory; marker 0 starts Active."""
    return CueMachine(trajectory, severity, cfg, now_t)
