"""HTTP and websocket service hosting operator sessions.

One simulation loop per active round owns the world exclusively; the socket
reader feeds a queue drained once per tick (latest-wins), and outbound
snapshots pass through a drop-oldest queue so a slow client can never stall
the simulation. Round k+1 never starts before the rating for round k is on
disk.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
from collections import deque
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket
from fastapi.middleware.cors import CORSMiddleware
from starlette.websockets import WebSocketDisconnect

from ..rng import derive_seed
from .protocol import (
    ProtocolError,
    notice_message,
    parse_operator_input,
    round_end_message,
    round_start_message,
)
from .rounds import RoundEngine, RoundSpec
from .store import RatingError, RatingRecord, SessionStore, UnknownSessionError
from .teams import TeamCatalog

logger = logging.getLogger(__name__)

_DISCONNECT = object()


class _Disconnected(Exception):
    pass


class Outbox:
    """Outbound message queue; snapshots are droppable under backpressure."""

    def __init__(self, max_pending_snapshots: int = 30) -> None:
        self.max_pending_snapshots = max_pending_snapshots
        self._items: deque[tuple[bool, str]] = deque()
        self._ready = asyncio.Event()
        self._pending_snapshots = 0
        self.dropped = 0

    def push(self, message: dict, droppable: bool = False) -> None:
        if droppable and self._pending_snapshots >= self.max_pending_snapshots:
            for i, (is_droppable, _) in enumerate(self._items):
                if is_droppable:
                    del self._items[i]
                    self._pending_snapshots -= 1
                    self.dropped += 1
                    break
        if droppable:
            self._pending_snapshots += 1
        self._items.append((droppable, json.dumps(message, separators=(",", ":"))))
        self._ready.set()

    @property
    def pending(self) -> int:
        return len(self._items)

    async def drain_forever(self, ws: WebSocket) -> None:
        try:
            while True:
                while self._items:
                    droppable, text = self._items.popleft()
                    if droppable:
                        self._pending_snapshots -= 1
                    await ws.send_text(text)
                self._ready.clear()
                await self._ready.wait()
        except (WebSocketDisconnect, RuntimeError, asyncio.CancelledError):
            return

    async def flush(self, timeout: float = 2.0) -> None:
        deadline = time.monotonic() + timeout
        while self._items and time.monotonic() < deadline:
            await asyncio.sleep(0.005)


async def _read_messages(ws: WebSocket, inbox: asyncio.Queue) -> None:
    try:
        while True:
            inbox.put_nowait(await ws.receive_text())
    except (WebSocketDisconnect, RuntimeError):
        inbox.put_nowait(_DISCONNECT)


def _parse_message(text: str) -> dict | None:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return None
    return data if isinstance(data, dict) else None


def _strict_likert(value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RatingError("rating_out_of_range", "ratings must be integers in 1..7")
    if float(value) != int(value):
        raise RatingError("rating_out_of_range", "ratings must be integers in 1..7")
    return int(value)


class SessionRunner:
    """Drives one websocket connection through the remaining rounds of a session."""

    def __init__(
        self,
        store: SessionStore,
        session_id: str,
        plan: list[RoundSpec],
        inbox: asyncio.Queue,
        outbox: Outbox,
        realtime: bool,
        target_visible_on_appearance: bool = True,
    ) -> None:
        self.store = store
        self.session_id = session_id
        self.plan = plan
        self.inbox = inbox
        self.outbox = outbox
        self.realtime = realtime
        self.target_visible_on_appearance = target_visible_on_appearance

    async def serve(self) -> None:
        while True:
            round_index = self.store.next_unrated_round(self.session_id, self.plan)
            if round_index is None:
                self.outbox.push(notice_message("session_complete", "All rounds rated."))
                return
            spec = self.plan[round_index - 1]
            attempt = self.store.attempt_count(self.session_id, round_index)
            seed = spec.config.seed if attempt == 0 else derive_seed(spec.config.seed, attempt)
            live_spec = replace(spec, config=replace(spec.config, seed=seed))

            self.outbox.push(round_start_message(round_index, spec.time_limit_s))
            await self._await_ready()

            engine = RoundEngine(
                live_spec, target_visible_on_appearance=self.target_visible_on_appearance
            )
            try:
                jitter_mean, jitter_max = await self._run_round(engine)
            except _Disconnected:
                self.store.record_outcome(
                    self.session_id, attempt, seed, engine.outcome(), status="aborted"
                )
                logger.info(
                    "session %s round %d attempt %d aborted on disconnect; "
                    "a fresh seed will be used on reconnect",
                    self.session_id,
                    round_index,
                    attempt,
                )
                raise
            outcome = engine.outcome()
            self.store.record_outcome(
                self.session_id,
                attempt,
                seed,
                outcome,
                status="completed",
                jitter_ms_mean=jitter_mean,
                jitter_ms_max=jitter_max,
            )
            self.outbox.push(round_end_message(outcome.success, outcome.completion_s))
            await self._rating_phase(spec)

    async def _next_message(self) -> dict | None:
        raw = await self.inbox.get()
        if raw is _DISCONNECT:
            raise _Disconnected()
        return _parse_message(raw)

    async def _await_ready(self) -> None:
        while True:
            data = await self._next_message()
            if data is None:
                self.outbox.push(notice_message("bad_message", "messages must be JSON objects"))
            elif data.get("type") == "ready":
                return
            elif data.get("type") == "input":
                logger.info("session %s: input before round start ignored", self.session_id)
            elif data.get("type") == "rating":
                self.outbox.push(
                    notice_message("rating_wrong_round", "no round is awaiting a rating")
                )

    def _drain_inputs(self, engine: RoundEngine) -> None:
        while True:
            try:
                raw = self.inbox.get_nowait()
            except asyncio.QueueEmpty:
                return
            if raw is _DISCONNECT:
                raise _Disconnected()
            data = _parse_message(raw)
            if data is None:
                self.outbox.push(notice_message("bad_message", "messages must be JSON objects"))
            elif data.get("type") == "input":
                try:
                    engine.queue_input(parse_operator_input(data))
                except ProtocolError as exc:
                    self.outbox.push(notice_message(exc.code, exc.text))
            elif data.get("type") == "rating":
                self.outbox.push(
                    notice_message("rating_wrong_round", "the round is still running")
                )

    async def _run_round(self, engine: RoundEngine) -> tuple[float | None, float | None]:
        tick_duration = engine.spec.config.world.tick_duration
        send_times: list[float] = []
        deadline = time.monotonic()
        while not engine.done:
            self._drain_inputs(engine)
            snapshot, notices = engine.tick()
            for notice in notices:
                self.outbox.push(notice_message(notice.code, notice.text))
            self.outbox.push(snapshot, droppable=True)
            send_times.append(time.monotonic())
            if self.realtime:
                deadline += tick_duration
                delay = deadline - time.monotonic()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    deadline = time.monotonic()  # fell behind; do not burst to catch up
            else:
                await asyncio.sleep(0)

        if self.realtime and len(send_times) >= 2:
            gaps = [b - a for a, b in zip(send_times, send_times[1:])]
            jitter = [abs(g - tick_duration) * 1000.0 for g in gaps]
            jitter_mean = sum(jitter) / len(jitter)
            jitter_max = max(jitter)
            logger.info(
                "session %s round %d: snapshot jitter mean %.1f ms, max %.1f ms",
                self.session_id,
                engine.spec.round_index,
                jitter_mean,
                jitter_max,
            )
            return jitter_mean, jitter_max
        return None, None

    async def _rating_phase(self, spec: RoundSpec) -> None:
        while True:
            data = await self._next_message()
            if data is None:
                self.outbox.push(notice_message("bad_message", "messages must be JSON objects"))
                continue
            kind = data.get("type")
            if kind == "input":
                logger.info(
                    "session %s: input during rating phase ignored", self.session_id
                )
                continue
            if kind != "rating":
                continue
            try:
                if int(data.get("round_index", -1)) != spec.round_index:
                    raise RatingError(
                        "rating_wrong_round",
                        f"round {spec.round_index} is awaiting its rating",
                    )
                record = RatingRecord(
                    session_id=self.session_id,
                    round_index=spec.round_index,
                    config_id=spec.config.config_id,
                    warmth=_strict_likert(data.get("warmth")),
                    competence=_strict_likert(data.get("competence")),
                    joint_effort=_strict_likert(data.get("joint_effort")),
                    submitted_at=datetime.now(timezone.utc).isoformat(),
                )
                self.store.record_rating(record)
            except RatingError as exc:
                self.outbox.push(notice_message(exc.code, exc.text))
                continue
            self.outbox.push(notice_message("rating_accepted", "Rating stored."))
            return


def create_app(
    data_dir: str | Path,
    teams_path: str | Path | None = None,
    realtime: bool = True,
    ui_dir: str | Path | None = None,
    target_visible_on_appearance: bool = True,
) -> FastAPI:
    store = SessionStore(data_dir)
    teams = TeamCatalog.load(teams_path) if teams_path is not None else None

    app = FastAPI(title="swarmsearch session server")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store
    app.state.teams = teams
    app.state.realtime = realtime
    active_sessions: set[str] = set()

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict) -> dict:
        if body.get("mode") == "study":
            if teams is None:
                raise HTTPException(status_code=400, detail="no team catalog loaded")
            try:
                plan = teams.sample_study_plan(seed=int(body.get("seed", 0)))
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        elif "rounds" in body:
            try:
                plan = [RoundSpec.from_json(item) for item in body["rounds"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"malformed round plan: {exc}")
        else:
            raise HTTPException(
                status_code=422, detail="body needs mode='study' or a rounds list"
            )
        try:
            session_id = store.create_session(plan)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"session_id": session_id, "rounds": len(plan)}

    @app.get("/sessions/{session_id}/export")
    async def export_session(session_id: str) -> dict:
        try:
            return store.export(session_id)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.websocket("/session")
    async def session_socket(ws: WebSocket) -> None:
        await ws.accept()
        inbox: asyncio.Queue = asyncio.Queue()
        outbox = Outbox()
        sender = asyncio.create_task(outbox.drain_forever(ws))
        reader = asyncio.create_task(_read_messages(ws, inbox))
        try:
            session_id = ws.query_params.get("session")
            if not session_id:
                outbox.push(notice_message("unknown_session", "connect with ?session=<id>"))
                await outbox.flush()
                return
            try:
                plan = store.load_plan(session_id)
            except UnknownSessionError:
                outbox.push(notice_message("unknown_session", f"no session {session_id!r}"))
                await outbox.flush()
                return
            if session_id in active_sessions:
                outbox.push(
                    notice_message("session_busy", "another client is driving this session")
                )
                await outbox.flush()
                return
            active_sessions.add(session_id)
            try:
                runner = SessionRunner(
                    store,
                    session_id,
                    plan,
                    inbox,
                    outbox,
                    realtime,
                    target_visible_on_appearance=target_visible_on_appearance,
                )
                await runner.serve()
                await outbox.flush()
            finally:
                active_sessions.discard(session_id)
        except _Disconnected:
            pass
        finally:
            sender.cancel()
            reader.cancel()
            try:
                await ws.close()
            except RuntimeError:
                pass

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
