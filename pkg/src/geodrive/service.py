"""Web service: interactive sessions over a websocket, runs over REST.

One interactive client drives at a time over ``/ws`` with single-object
JSON text frames.  The tick loop paces itself against the wall clock but
advances simulated time by exactly dt per tick, so jitter changes frame
arrival times, never trajectories.  Slow consumers lose state frames (the
outbox is bounded and drops on overflow) but can never stall the loop.

REST endpoints expose health, configuration, route polylines, headless
runs, and summaries of recorded logs, so the CLI can act as a thin client
of a running service.
"""

from __future__ import annotations

import asyncio
import json
import time
from dataclasses import asdict, replace
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from .config import ConfigError
from .controller import ControllerConfig, SafetyBoundConfig
from .driver import ScriptedDriver
from .routes import make_route
from .session import Session
from .simulation import replay_log, run_closed_loop
from .telemetry import read_log, record_to_dict, summarize, write_log
from .vehicle import VehicleParams

__all__ = ["create_app", "serve_forever"]


class InputMsg(BaseModel):
    type: Literal["input"]
    v_norm: float = Field(ge=-1.0, le=1.0)
    steer_norm: float = Field(ge=-1.0, le=1.0)


class SetConfigMsg(BaseModel):
    type: Literal["set_config"]
    config: dict[str, Union[int, float]]


class ResetMsg(BaseModel):
    type: Literal["reset"]
    route: Optional[str] = None
    scale: Optional[float] = None


class RecordMsg(BaseModel):
    type: Literal["record"]
    on: bool


InboundMessage = Annotated[
    Union[InputMsg, SetConfigMsg, ResetMsg, RecordMsg], Field(discriminator="type")
]
_INBOUND: TypeAdapter = TypeAdapter(InboundMessage)


class RunRequest(BaseModel):
    route: Literal["figure8", "spiral"] = "figure8"
    scale: float = Field(default=3.0, gt=0.0)
    seed: int = 0
    duration: float = Field(default=30.0, gt=0.0)
    dt: float = Field(default=0.02, gt=0.0)
    n: Optional[int] = Field(default=None, ge=1)
    v_m: Optional[float] = Field(default=None, gt=0.0)
    controller_on: bool = True
    noise_std: float = Field(default=0.25, ge=0.0)
    lookahead: float = Field(default=1.2, gt=0.0)
    delay_ticks: int = Field(default=6, ge=0)


class RunResponse(BaseModel):
    ticks: int
    summary: dict


class SummarizeRequest(BaseModel):
    name: str


def _error(code: str, text: str) -> dict:
    return {"type": "error", "code": code, "text": text}


def create_app(
    cfg: ControllerConfig | None = None,
    bounds: SafetyBoundConfig | None = None,
    params: VehicleParams | None = None,
    route_kind: str = "figure8",
    route_scale: float = 3.0,
    dt: float = 0.02,
    runs_dir: str | Path = "runs",
    static_dir: str | Path | None = None,
) -> FastAPI:
    cfg = cfg or ControllerConfig()
    bounds = bounds or SafetyBoundConfig()
    params = params or VehicleParams(v_max=cfg.v_m)
    app = FastAPI(title="geodrive", version="0.1.0")

    session = Session(cfg, bounds, params, make_route(route_kind, route_scale), dt=dt)
    app.state.session = session
    app.state.runs_dir = Path(runs_dir)
    app.state.ws_busy = False

    def save_recording() -> str | None:
        """Flush the active recording segment to a log file, if any."""
        records = session.end_recording()
        if not records:
            return None
        app.state.runs_dir.mkdir(parents=True, exist_ok=True)
        stamp = time.strftime("%Y%m%d-%H%M%S")
        path = app.state.runs_dir / f"run-{stamp}-t{records[0].t:.2f}.jsonl"
        write_log(session.make_header(), records, path)
        return path.name

    def handle_command(msg: InboundMessage) -> list[dict]:
        """Apply one non-input command; returns messages to send back."""
        if isinstance(msg, SetConfigMsg):
            # A config change invalidates the replay header of an open
            # recording segment, so the segment is cut first.
            was_recording = session.recording
            if was_recording:
                save_recording()
            try:
                new_cfg = session.set_config(msg.config)
            except ConfigError as exc:
                if was_recording:
                    session.begin_recording()
                return [_error("bad_config", str(exc))]
            if was_recording:
                session.begin_recording()
            return [{"type": "config_ack", "config": asdict(new_cfg)}]
        if isinstance(msg, ResetMsg):
            was_recording = session.recording
            if was_recording:
                save_recording()
            try:
                route = (
                    make_route(msg.route, msg.scale or session.route.scale)
                    if msg.route
                    else None
                )
            except ValueError as exc:
                if was_recording:
                    session.begin_recording()
                return [_error("bad_config", str(exc))]
            session.reset(route)
            if was_recording:
                session.begin_recording()
            return []
        if isinstance(msg, RecordMsg):
            if msg.on and not session.recording:
                session.begin_recording()
            elif not msg.on and session.recording:
                save_recording()
            return []
        raise AssertionError(f"unhandled command {type(msg).__name__}")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        if app.state.ws_busy:
            await ws.send_text(json.dumps(_error("busy", "another client is driving")))
            await ws.close()
            return
        app.state.ws_busy = True

        inbox: asyncio.Queue = asyncio.Queue()
        outbox: asyncio.Queue = asyncio.Queue(maxsize=32)

        def push(msg: dict) -> None:
            # Drop-on-full: a slow consumer loses frames, never stalls us.
            try:
                outbox.put_nowait(msg)
            except asyncio.QueueFull:
                pass

        async def reader() -> None:
            while True:
                text = await ws.receive_text()
                try:
                    data = json.loads(text)
                except json.JSONDecodeError:
                    await inbox.put(("fatal", _error("bad_frame", "frame is not JSON")))
                    # Park instead of returning: the loop must stay up until
                    # the sender has flushed the error and closed the socket.
                    await asyncio.Event().wait()
                try:
                    msg = _INBOUND.validate_python(data)
                except ValidationError as exc:
                    push(_error("bad_message", str(exc.errors()[0]["msg"])))
                    continue
                await inbox.put(("msg", msg))

        async def ticker() -> None:
            deadline = time.monotonic()
            while True:
                fatal = None
                while not inbox.empty():
                    kind, payload = inbox.get_nowait()
                    if kind == "fatal":
                        fatal = payload
                        break
                    if isinstance(payload, InputMsg):
                        session.apply_input(payload.v_norm, payload.steer_norm)
                    else:
                        for reply in handle_command(payload):
                            push(reply)
                if fatal is not None:
                    await outbox.put(fatal)
                    await outbox.put(None)
                    # Park: if this task returned, the endpoint would tear
                    # everything down before the sender flushed the error
                    # and closed the socket. The sender finishes first.
                    await asyncio.Event().wait()
                record = session.step()
                push(
                    {
                        "type": "state",
                        "tick": session.tick_index - 1,
                        "record": record_to_dict(record),
                    }
                )
                deadline += session.dt
                delay = deadline - time.monotonic()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    # Fell behind; re-anchor instead of bursting to catch up.
                    deadline = time.monotonic()
                    await asyncio.sleep(0)

        async def sender() -> None:
            while True:
                msg = await outbox.get()
                if msg is None:
                    await ws.close()
                    return
                await ws.send_text(json.dumps(msg))

        tasks = [
            asyncio.create_task(reader()),
            asyncio.create_task(ticker()),
            asyncio.create_task(sender()),
        ]
        try:
            done, pending = await asyncio.wait(tasks, return_when=asyncio.FIRST_COMPLETED)
            for task in pending:
                task.cancel()
            for task in done:
                exc = task.exception()
                if exc is not None and not isinstance(exc, WebSocketDisconnect):
                    raise exc
        except WebSocketDisconnect:
            pass
        finally:
            for task in tasks:
                task.cancel()
            if session.recording:
                save_recording()
            app.state.ws_busy = False

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "tick": session.tick_index}

    @app.get("/api/config")
    def get_config() -> dict:
        return {
            "controller": asdict(session.cfg),
            "bounds": asdict(session.bounds),
            "vehicle": asdict(session.params),
            "dt": session.dt,
            "route": {"kind": session.route.kind, "scale": session.route.scale},
        }

    @app.get("/api/routes/{kind}")
    def get_route(kind: str, scale: float = 3.0) -> dict:
        try:
            route = make_route(kind, scale)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return {
            "kind": route.kind,
            "scale": route.scale,
            "closed": route.closed,
            "points": route.points.tolist(),
        }

    @app.post("/api/run")
    async def api_run(req: RunRequest) -> RunResponse:
        run_cfg = session.cfg
        if req.n is not None or req.v_m is not None:
            changes = {}
            if req.n is not None:
                changes["n"] = req.n
            if req.v_m is not None:
                changes["v_m"] = req.v_m
            run_cfg = replace(run_cfg, **changes)
        run_params = VehicleParams(
            wheel_separation=session.params.wheel_separation,
            wheel_radius=session.params.wheel_radius,
            v_max=run_cfg.v_m,
        )
        route = make_route(req.route, req.scale)
        driver = ScriptedDriver(
            lookahead=req.lookahead,
            delay_ticks=req.delay_ticks,
            noise_std=req.noise_std,
            seed=req.seed,
            target_speed=run_cfg.v_m,
            tick_dt=req.dt,
        )
        records = await asyncio.to_thread(
            run_closed_loop,
            run_cfg,
            session.bounds,
            run_params,
            route,
            driver,
            req.duration,
            req.dt,
            req.controller_on,
        )
        summary = summarize(records, route, v_max=run_cfg.v_m)
        return RunResponse(ticks=len(records), summary=summary.as_dict())

    @app.get("/api/runs")
    def list_runs() -> dict:
        directory = app.state.runs_dir
        if not directory.is_dir():
            return {"runs": []}
        runs = [
            {"name": p.name, "bytes": p.stat().st_size}
            for p in sorted(directory.glob("*.jsonl"))
        ]
        return {"runs": runs}

    @app.post("/api/summarize")
    def api_summarize(req: SummarizeRequest) -> dict:
        if "/" in req.name or "\\" in req.name or req.name.startswith("."):
            raise HTTPException(status_code=400, detail="name must be a bare file name")
        path = app.state.runs_dir / req.name
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no such run: {req.name}")
        header, records = read_log(path)
        route = make_route(header.route_kind, header.route_scale)
        summary = summarize(records, route, v_max=header.controller.v_m)
        replayed = replay_log(header, records)
        replay_ok = all(
            a.pose == b.pose for a, b in zip(records, replayed)
        )
        out = summary.as_dict()
        out["ticks"] = len(records)
        out["replay_ok"] = replay_ok
        return out

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="cockpit")

    return app


def serve_forever(
    bind: str,
    cfg: ControllerConfig | None = None,
    bounds: SafetyBoundConfig | None = None,
    route_kind: str = "figure8",
    route_scale: float = 3.0,
    dt: float = 0.02,
    runs_dir: str | Path = "runs",
    static_dir: str | Path | None = None,
) -> None:
    """Blocking entry point for the serve subcommand."""
    import uvicorn

    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bind address must look like host:port, got {bind!r}")
    app = create_app(
        cfg=cfg,
        bounds=bounds,
        route_kind=route_kind,
        route_scale=route_scale,
        dt=dt,
        runs_dir=runs_dir,
        static_dir=static_dir,
    )
    uvicorn.run(app, host=host, port=int(port), log_level="info")
