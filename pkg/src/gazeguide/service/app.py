"""FastAPI service: scene listing, headless runs, and live duplex sessions.

`WS /session?scene=ID` speaks the versioned JSON message protocol
(docs/protocol.md). Engine time never reads the wall clock; the ticker task
only paces when each tick happens, so a stalled client changes nothing but
delivery timing. Event delivery is lossless and ordered; state snapshots are
dropped when the client cannot keep up.
"""

from __future__ import annotations

import asyncio
import json

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from ..errors import (CapacityExceeded, GazeGuideError, MalformedMessage, SceneNotFound,
                      SessionClosed)
from ..gaze import AgentKind, GazeAgentConfig
from ..harness import (RunConfig, metrics_to_dict, run_baseline_comparison,
                       run_config_from_dict, run_scenario)
from ..saliency import base_saliency, extract_waypoints, fuse_hazard_prior
from ..scene import SceneSpec, load_scene_dir, scene_to_dict
from .schemas import (AudioEventMsg, CompareRequest, CompareResponse, CueEventMsg,
                      ErrorMsg, GazeInputMsg, RunRequest, RunResponse, SaliencyResponse,
                      SceneSummary, SessionEndMsg, SessionStartMsg, StateSnapshotMsg)
from .sessions import SessionEngine, SessionManager


def create_app(scenes_dir: str | None = None, scenes: dict[str, SceneSpec] | None = None,
               runs_dir: str | None = None, max_sessions: int = 16,
               ui_dir: str | None = None) -> FastAPI:
    if scenes is None:
        scenes = load_scene_dir(scenes_dir) if scenes_dir else {}
    manager = SessionManager(scenes, runs_dir=runs_dir, max_sessions=max_sessions)

    app = FastAPI(title="gazeguide", version="0.1.0")
    app.state.manager = manager

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    # -- REST ----------------------------------------------------------------

    @app.get("/scenes", response_model=list[SceneSummary])
    def list_scenes():
        return [
            SceneSummary(id=s.id, object_count=len(s.objects), duration_s=s.duration_s,
                         hazard_severity=s.hazard.severity.value)
            for s in sorted(manager.scenes.values(), key=lambda s: s.id)
        ]

    @app.get("/scenes/{scene_id}")
    def get_scene(scene_id: str):
        try:
            return scene_to_dict(manager.scenes[scene_id])
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown scene {scene_id!r}")

    @app.post("/runs", response_model=RunResponse)
    def post_run(req: RunRequest):
        cfg = run_config_from_dict(req.config, scene_id=req.scene_id)
        try:
            agent = GazeAgentConfig(
                kind=AgentKind(req.agent_kind),
                reaction_latency_s=cfg.agent.reaction_latency_s,
                saccade_speed=cfg.agent.saccade_speed,
                landing_noise_sigma=cfg.agent.landing_noise_sigma,
                seed=cfg.agent.seed,
            )
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown agent kind {req.agent_kind!r}")
        cfg = RunConfig(scene_id=req.scene_id, agent=agent, escalation=cfg.escalation,
                        saliency=cfg.saliency, tick_hz=cfg.tick_hz, seed=req.seed)
        try:
            result = run_scenario(cfg, manager.scenes)
        except SceneNotFound:
            raise HTTPException(status_code=404, detail=f"unknown scene {req.scene_id!r}")
        record = result.record()
        return RunResponse(**record)

    @app.post("/compare", response_model=CompareResponse)
    def post_compare(req: CompareRequest):
        if req.n_seeds < 1:
            raise HTTPException(status_code=422, detail="n_seeds must be >= 1")
        try:
            summary = run_baseline_comparison(req.scene_id, manager.scenes, req.n_seeds)
        except SceneNotFound:
            raise HTTPException(status_code=404, detail=f"unknown scene {req.scene_id!r}")
        return CompareResponse(**summary.to_dict())

    @app.get("/saliency/{scene_id}", response_model=SaliencyResponse)
    def get_saliency(scene_id: str):
        try:
            scene = manager.scenes[scene_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown scene {scene_id!r}")
        cfg = RunConfig(scene_id=scene_id).saliency
        base = base_saliency(scene, cfg.grid_width, cfg.grid_height)
        fused = fuse_hazard_prior(base, scene.hazard.position, cfg.sigma_h)
        wps = extract_waypoints(fused, scene, cfg)
        return SaliencyResponse(
            scene_id=scene_id, width=base.width, height=base.height,
            base=base.values.tolist(), fused=fused.values.tolist(),
            waypoints=[{"position": [w.position.x, w.position.y], "score": w.score,
                        "snapped_object_id": w.snapped_object_id} for w in wps],
        )

    # -- live sessions ---------------------------------------------------------

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        params = ws.query_params
        scene_id = params.get("scene", "")
        try:
            cfg_doc = json.loads(params.get("config", "{}"))
            cfg = run_config_from_dict(cfg_doc if isinstance(cfg_doc, dict) else {},
                                       scene_id=scene_id)
            cfg = RunConfig(scene_id=scene_id, agent=cfg.agent, escalation=cfg.escalation,
                            saliency=cfg.saliency, tick_hz=cfg.tick_hz,
                            seed=int(params.get("seed", cfg.seed)))
            engine = manager.open(scene_id, cfg)
        except (SceneNotFound, CapacityExceeded, ValueError, json.JSONDecodeError) as exc:
            code = type(exc).__name__ if isinstance(exc, GazeGuideError) else "BadRequest"
            await ws.send_text(ErrorMsg(seq=1, code=code, detail=str(exc))
                               .model_dump_json())
            await ws.close()
            return
        await _run_session(ws, engine, manager)

    return app


class _Outbound:
    """Per-connection send machinery: lossless ordered events, droppable snapshots."""

    def __init__(self, ws: WebSocket):
        self.ws = ws
        self.events: asyncio.Queue = asyncio.Queue()
        self.snapshot = None
        self.wake = asyncio.Event()
        self.seq = 0
        self.closed = False

    def push_event(self, msg) -> None:
        self.events.put_nowait(msg)
        self.wake.set()

    def push_snapshot(self, msg) -> None:
        self.snapshot = msg  # latest wins; unsent snapshots are dropped
        self.wake.set()

    async def send_now(self, msg) -> None:
        self.seq += 1
        msg.seq = self.seq
        await self.ws.send_text(msg.model_dump_json())

    def shutdown(self) -> None:
        """Ask the sender to exit once every queued event has gone out."""
        self.closed = True
        self.wake.set()

    async def sender(self) -> None:
        while True:
            if not self.events.empty():
                await self.send_now(self.events.get_nowait())
            elif self.snapshot is not None:
                msg, self.snapshot = self.snapshot, None
                await self.send_now(msg)
            elif self.closed:
                return
            else:
                self.wake.clear()
                await self.wake.wait()


async def _run_session(ws: WebSocket, engine: SessionEngine, manager: SessionManager) -> None:
    out = _Outbound(ws)
    started = asyncio.Event()
    client_done = asyncio.Event()

    await out.send_now(SessionStartMsg(
        session_id=engine.session_id,
        tick_hz=engine.cfg.tick_hz,
        warmup_s=engine.sim.tor_tick / engine.cfg.tick_hz,
        scene=engine.scene_dict(),
        markers=engine.pending_markers(),
    ))

    async def receiver():
        last_seq = 0
        while True:
            try:
                raw = await ws.receive_text()
            except WebSocketDisconnect:
                client_done.set()
                return
            try:
                doc = json.loads(raw)
                kind = doc.get("kind")
                if kind == "GazeInput":
                    msg = GazeInputMsg(**doc)
                    if msg.seq <= last_seq:
                        raise MalformedMessage(f"seq {msg.seq} not increasing")
                    last_seq = msg.seq
                    engine.submit_gaze(msg.x, msg.y, msg.valid)
                    started.set()
                elif kind == "SessionEnd":
                    client_done.set()
                    return
                else:
                    raise MalformedMessage(f"unknown kind {kind!r}")
            except MalformedMessage as exc:
                out.push_event(ErrorMsg(code="MalformedMessage", detail=str(exc)))
            except SessionClosed:
                return
            except (TypeError, ValueError) as exc:
                out.push_event(ErrorMsg(code="MalformedMessage", detail=str(exc)))

    async def ticker():
        await started.wait()
        loop = asyncio.get_running_loop()
        base = loop.time()
        first_tick = engine.sim.tick
        while not engine.finished and not client_done.is_set():
            step_out = engine.tick()
            if step_out is not None:
                for ev in step_out.events:
                    out.push_event(CueEventMsg(event={
                        "t": ev.t, "kind": ev.kind.value, "marker_index": ev.marker_index,
                        "urgency": ev.urgency.value if ev.urgency else None}))
                for au in step_out.audio:
                    out.push_event(AudioEventMsg(event={
                        "t": au.t, "kind": au.kind.value, "frequency_hz": au.frequency_hz,
                        "duration_s": au.duration_s, "pan": au.pan}))
            if engine.wants_snapshot():
                snap = engine.snapshot()
                out.push_snapshot(StateSnapshotMsg(
                    t=snap["t"], phase=snap["phase"], complete=snap["complete"],
                    active_index=snap["active_index"], markers=snap["markers"],
                    acquired_count=snap["acquired_count"]))
            if engine.finished:
                break
            deadline = base + (engine.sim.tick - first_tick) / engine.cfg.tick_hz
            delay = deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)

    recv_task = asyncio.create_task(receiver())
    tick_task = asyncio.create_task(ticker())
    send_task = asyncio.create_task(out.sender())
    done_waiter = asyncio.create_task(client_done.wait())
    try:
        await asyncio.wait({tick_task, done_waiter}, return_when=asyncio.FIRST_COMPLETED)
        if tick_task.done() and not tick_task.cancelled() and tick_task.exception():
            raise tick_task.exception()
        out.shutdown()
        try:
            await send_task
        except (WebSocketDisconnect, RuntimeError):
            pass
        try:
            result = manager.close(engine)  # persists the trace either way
        except SessionClosed:
            result = None
        if result is not None:
            try:
                await out.send_now(SessionEndMsg(metrics=metrics_to_dict(result.metrics),
                                                 replay_token=engine.session_id))
            except (WebSocketDisconnect, RuntimeError):
                pass  # client vanished; the run record is already on disk
        try:
            await ws.close()
        except RuntimeError:
            pass
    finally:
        for task in (recv_task, tick_task, send_task, done_waiter):
            task.cancel()
        manager.discard(engine)
