"""HTTP gateway for interactive evolution sessions.

Each session owns one engine state and is advanced only on request. All
operations on a session are serialized; a second step while one is in
flight is rejected with 409 Busy rather than queued. Generation records
are pushed to subscribers of the session's server-sent event stream with
exactly the bytes returned by the step endpoint.

Endpoints:
    POST   /sessions                       create a session
    POST   /sessions/{id}/step             advance k generations
    GET    /sessions/{id}/state            snapshot + hypervolume history
    GET    /sessions/{id}/levels/{member}  level payload for an archive member
    POST   /sessions/{id}/play             validate a playthrough
    DELETE /sessions/{id}                  drop the session (idempotent)
    GET    /sessions/{id}/events           SSE stream of generation records

The built web UI, when present, is served at /. Bind address and port come
from SOKOEVO_HOST / SOKOEVO_PORT, overridable by CLI flags.
"""

from __future__ import annotations

import argparse
import json
import os
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import Response, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import domain, engine, evaluation, solver
from .problem import SokobanProblem
from .solver import MOVE_ALPHABET, validate_playthrough

MAX_SESSIONS = 64
MAX_LEVEL_AREA = 400
SESSION_TTL_SECONDS = float(os.environ.get("SOKOEVO_SESSION_TTL", 30 * 60))


class SessionRequest(BaseModel):
    model_config = {"extra": "forbid"}

    width: int = Field(default=8, ge=3)
    height: int = Field(default=8, ge=3)
    max_boxes: int = Field(default=3, ge=1)
    ca_capacity: int = Field(default=20, ge=1)
    da_capacity: int = Field(default=20, ge=1)
    offspring_per_generation: int = Field(default=20, ge=1)
    generations: int = Field(default=100, ge=0)
    crossover_probability: float = Field(default=0.9, ge=0.0, le=1.0)
    mutation_rate: float | None = Field(default=None, ge=0.0, le=1.0)
    indicator_scale_kappa: float = Field(default=0.05, gt=0.0)
    feasible_retry_cap: int = Field(default=50, ge=0)
    max_states: int = Field(default=200_000, ge=1)
    max_solution_pushes: int = Field(default=1_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class StepRequest(BaseModel):
    model_config = {"extra": "forbid"}

    k: int = Field(ge=1)


class PlayRequest(BaseModel):
    model_config = {"extra": "forbid"}

    member: int
    moves: str


@dataclass
class Session:
    id: str
    state: engine.EngineState
    problem: SokobanProblem
    generation_cap: int
    created: float
    touched: float
    lock: threading.Lock = dc_field(default_factory=threading.Lock)
    history: list[dict] = dc_field(default_factory=list)
    subscribers: list["queue.Queue[str | None]"] = dc_field(default_factory=list)

    @property
    def status(self) -> str:
        return "Done" if self.state.generation >= self.generation_cap else "Idle"


def _validation_error(fields: list[str], message: str) -> HTTPException:
    return HTTPException(
        status_code=422,
        detail=[{"loc": ["body", f], "msg": message, "type": "value_error"} for f in fields],
    )


def _member_snapshot(members) -> list[dict]:
    return [{"id": m.id, "objectives": list(m.objectives)} for m in members]


def create_app() -> FastAPI:
    app = FastAPI(title="sokoevo session service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def _evict_idle(now: float) -> None:
        for sid in [s for s, sess in sessions.items() if now - sess.touched > SESSION_TTL_SECONDS]:
            dead = sessions.pop(sid)
            for q in dead.subscribers:
                q.put(None)

    def _get(sid: str) -> Session:
        with registry_lock:
            _evict_idle(time.time())
            sess = sessions.get(sid)
        if sess is None:
            raise HTTPException(status_code=404, detail=f"no session {sid}")
        sess.touched = time.time()
        return sess

    def _history_point(sess: Session, rec: engine.GenerationRecord) -> dict:
        return {
            "generation": rec.generation,
            "ca_size": len(rec.ca),
            "da_size": len(rec.da),
            "da_hypervolume": rec.da_hypervolume,
            "cumulative_hypervolume": rec.cumulative_hypervolume,
        }

    @app.post("/sessions", status_code=201)
    def create_session(req: SessionRequest):
        if req.width * req.height > MAX_LEVEL_AREA:
            raise _validation_error(
                ["width", "height"], f"level area must be <= {MAX_LEVEL_AREA} tiles"
            )
        try:
            spec = domain.DesignSpec(width=req.width, height=req.height, max_boxes=req.max_boxes)
        except ValueError as err:
            raise _validation_error(["max_boxes"], str(err))
        config = engine.EngineConfig(
            ca_capacity=req.ca_capacity,
            da_capacity=req.da_capacity,
            offspring_per_generation=req.offspring_per_generation,
            generations=req.generations,
            crossover_probability=req.crossover_probability,
            mutation_rate=req.mutation_rate,
            rng_seed=req.seed,
            indicator_scale_kappa=req.indicator_scale_kappa,
            feasible_retry_cap=req.feasible_retry_cap,
        )
        problem = SokobanProblem(
            spec=spec,
            limits=solver.SolveLimits(req.max_states, req.max_solution_pushes),
        )
        with registry_lock:
            _evict_idle(time.time())
            if len(sessions) >= MAX_SESSIONS:
                raise HTTPException(status_code=429, detail="session limit reached")
        try:
            state = engine.initialize(config, problem, seed=req.seed)
        except engine.InitializationExhausted as err:
            raise HTTPException(
                status_code=400,
                detail={"error": "initialization_exhausted", "message": str(err)},
            )
        sess = Session(
            id=uuid.uuid4().hex,
            state=state,
            problem=problem,
            generation_cap=req.generations,
            created=time.time(),
            touched=time.time(),
        )
        init_rec = engine.GenerationRecord(
            generation=0,
            ca=tuple(state.ca),
            da=tuple(state.da),
            offspring=state.evaluation_count,
            feasible_offspring=state.init_feasible_count,
            da_hypervolume=evaluation.hypervolume_2d([m.objectives for m in state.da]),
            cumulative_hypervolume=evaluation.hypervolume_2d(list(state.cumulative_front)),
        )
        sess.history.append(_history_point(sess, init_rec))
        with registry_lock:
            sessions[sess.id] = sess
        return {
            "session_id": sess.id,
            "generation": 0,
            "status": sess.status,
            "ca": _member_snapshot(state.ca),
            "da": _member_snapshot(state.da),
        }

    @app.post("/sessions/{sid}/step")
    def step_session(sid: str, req: StepRequest):
        sess = _get(sid)
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="step already in flight")
        try:
            remaining = max(0, sess.generation_cap - sess.state.generation)
            payloads = []
            for _ in range(min(req.k, remaining)):
                rec = engine.step(sess.state, sess.problem)
                text = rec.to_json()
                payloads.append(text)
                sess.history.append(_history_point(sess, rec))
                for q in list(sess.subscribers):
                    q.put(text)
        finally:
            sess.lock.release()
        body = '{"status": %s, "records": [%s]}' % (
            json.dumps(sess.status),
            ",".join(payloads),
        )
        return Response(content=body, media_type="application/json")

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        sess = _get(sid)
        with sess.lock:
            return {
                "session_id": sess.id,
                "generation": sess.state.generation,
                "status": sess.status,
                "ca": _member_snapshot(sess.state.ca),
                "da": _member_snapshot(sess.state.da),
                "history": list(sess.history),
            }

    def _find_member(sess: Session, member: int) -> engine.Individual:
        for m in list(sess.state.ca) + list(sess.state.da):
            if m.id == member:
                return m
        raise HTTPException(status_code=404, detail=f"no archive member {member}")

    @app.get("/sessions/{sid}/levels/{member}")
    def get_level(sid: str, member: int):
        sess = _get(sid)
        with sess.lock:
            m = _find_member(sess, member)
        return {
            "id": m.id,
            "f_emp": m.objectives[0],
            "f_div": m.objectives[1],
            "level": m.payload["level"],
            "solution": m.payload["solution"],
            "pushes": m.payload["pushes"],
        }

    @app.post("/sessions/{sid}/play")
    def play(sid: str, req: PlayRequest):
        sess = _get(sid)
        bad = sorted({ch for ch in req.moves if ch not in MOVE_ALPHABET})
        if bad:
            raise _validation_error(["moves"], f"moves must use U/D/L/R only, got {bad}")
        with sess.lock:
            m = _find_member(sess, req.member)
        level = domain.parse_level(m.payload["level"])
        result = validate_playthrough(level, req.moves)
        return {
            "member": m.id,
            "won": result.won,
            "rejected_moves": list(result.rejected_moves),
            "player": list(result.final.player),
            "boxes": sorted(list(b) for b in result.final.boxes),
        }

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        with registry_lock:
            sess = sessions.pop(sid, None)
        if sess is not None:
            for q in sess.subscribers:
                q.put(None)
        return {"deleted": sid}

    @app.get("/sessions/{sid}/events")
    def events(sid: str, request: Request):
        sess = _get(sid)
        q: queue.Queue[str | None] = queue.Queue()
        sess.subscribers.append(q)

        def stream():
            try:
                while True:
                    try:
                        item = q.get(timeout=1.0)
                    except queue.Empty:
                        yield ": keep-alive\n\n"
                        continue
                    if item is None:
                        return
                    yield f"data: {item}\n\n"
            finally:
                if q in sess.subscribers:
                    sess.subscribers.remove(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    ui_dir = Path(os.environ.get("SOKOEVO_UI_DIR", Path(__file__).resolve().parents[2] / "frontend" / "dist"))
    if ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


app = create_app()


def main(argv: list[str] | None = None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="sokoevo-serve", description="Run the session service")
    parser.add_argument("--host", default=os.environ.get("SOKOEVO_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("SOKOEVO_PORT", "8000")))
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
