"""Pydantic models for the HTTP API and the session wire protocol.

Wire protocol: JSON text messages over the /session WebSocket, one session
per connection. Message framing is handled by the socket; `seq` is strictly
increasing per direction. `schema_version` is announced in SessionStart.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

PROTOCOL_SCHEMA_VERSION = 1


# -- REST ----------------------------------------------------------------------


class SceneSummary(BaseModel):
    id: str
    object_count: int
    duration_s: float
    hazard_severity: str


class RunRequest(BaseModel):
    scene_id: str
    agent_kind: str = "Compliant"
    seed: int = 1
    config: dict = Field(default_factory=dict)


class RunResponse(BaseModel):
    schema_version: int
    config: dict
    metrics: dict
    events: list[dict]


class CompareRequest(BaseModel):
    scene_id: str
    n_seeds: int = 20


class CompareResponse(BaseModel):
    scene_id: str
    n_seeds: int
    pairs: list[list]
    guided_median: float
    unguided_median: float
    guided_wins: int
    win_rate: float


class SaliencyResponse(BaseModel):
    scene_id: str
    width: int
    height: int
    base: list[list[float]]
    fused: list[list[float]]
    waypoints: list[dict]


# -- session protocol ------------------------------------------------------------


class GazeInputMsg(BaseModel):
    kind: Literal["GazeInput"]
    seq: int
    t: float
    x: float = Field(ge=0.0, le=1.0)
    y: float = Field(ge=0.0, le=1.0)
    valid: bool = True


class SessionEndRequest(BaseModel):
    kind: Literal["SessionEnd"]
    seq: int


class MarkerView(BaseModel):
    index: int
    position: list[float]
    state: str
    urgency: str
    style: dict
    activated_t: Optional[float] = None
    acquired_t: Optional[float] = None


class SessionStartMsg(BaseModel):
    kind: Literal["SessionStart"] = "SessionStart"
    seq: int = 0
    schema_version: int = PROTOCOL_SCHEMA_VERSION
    session_id: str
    tick_hz: int
    warmup_s: float
    scene: dict
    markers: list[MarkerView]


class StateSnapshotMsg(BaseModel):
    kind: Literal["StateSnapshot"] = "StateSnapshot"
    seq: int = 0
    t: float
    phase: str
    complete: bool
    active_index: Optional[int]
    markers: list[MarkerView]
    acquired_count: int


class CueEventMsg(BaseModel):
    kind: Literal["CueEventMsg"] = "CueEventMsg"
    seq: int = 0
    event: dict


class AudioEventMsg(BaseModel):
    kind: Literal["AudioEventMsg"] = "AudioEventMsg"
    seq: int = 0
    event: dict


class SessionEndMsg(BaseModel):
    kind: Literal["SessionEnd"] = "SessionEnd"
    seq: int = 0
    metrics: dict
    replay_token: str


class ErrorMsg(BaseModel):
    kind: Literal["Error"] = "Error"
    seq: int = 0
    code: str
    detail: str = ""
