"""HTTP service wrapping the environment suite.

Sessions are server-side env instances addressed by id; reset/step/seed
mirror the in-process API exactly, so a client replaying the same seed and
actions gets bit-identical numbers to the CLI (floats serialize in
shortest round-trip form on both paths).

Error mapping: unknown env/session -> 404, stepping a finished or unreset
episode -> 409, malformed actions -> 400. Bodies carry a stable ``code``
plus a human message (see schemas.ErrorDetail).
"""

from __future__ import annotations

import itertools
import threading

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..envs.catalog import CatalogMissError, list_envs, make_env
from ..envs.env import Env, EpisodeDoneError, NotResetError
from .schemas import (
    CatalogEntryOut,
    CatalogOut,
    CreateSessionIn,
    HealthOut,
    ObservationOut,
    SeedIn,
    SessionCountOut,
    SessionOut,
    SpacesOut,
    StepIn,
    StepOut,
)


class Session:
    """One env instance plus the lock that serializes requests to it; an
    env is a single logical simulation and must never step concurrently."""

    def __init__(self, env: Env):
        self.env = env
        self.lock = threading.Lock()


class SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._ids = itertools.count(1)

    def create(self, env: Env) -> str:
        with self._lock:
            sid = f"s{next(self._ids)}"
            self._sessions[sid] = Session(env)
            return sid

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail={
                "code": "session_not_found",
                "message": f"no open session {sid!r}",
            })
        return session

    def drop(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise HTTPException(status_code=404, detail={
                    "code": "session_not_found",
                    "message": f"no open session {sid!r}",
                })
            del self._sessions[sid]

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)


def create_app() -> FastAPI:
    app = FastAPI(title="terrasuite", version=__version__)
    store = SessionStore()
    app.state.store = store

    @app.exception_handler(CatalogMissError)
    def _catalog_miss(request, exc: CatalogMissError):
        return JSONResponse(status_code=404, content={"detail": {
            "code": "catalog_miss",
            "message": str(exc),
            "suggestions": exc.suggestions,
        }})

    @app.exception_handler(EpisodeDoneError)
    def _episode_done(request, exc):
        return JSONResponse(status_code=409, content={"detail": {
            "code": "episode_finished", "message": str(exc)}})

    @app.exception_handler(NotResetError)
    def _not_reset(request, exc):
        return JSONResponse(status_code=409, content={"detail": {
            "code": "not_reset", "message": str(exc)}})

    @app.exception_handler(ValueError)
    def _bad_value(request, exc):
        return JSONResponse(status_code=400, content={"detail": {
            "code": "bad_request", "message": str(exc)}})

    @app.get("/health", response_model=HealthOut)
    def health():
        return HealthOut(status="ok", version=__version__)

    @app.get("/envs", response_model=CatalogOut)
    def envs(filter: str | None = None):
        entries = list_envs(filter)
        return CatalogOut(count=len(entries), envs=[
            CatalogEntryOut(name=e.name, obs_dim=e.obs_dim, act_dim=e.act_dim,
                            description=e.description)
            for e in entries
        ])

    @app.post("/sessions", response_model=SessionOut)
    def create_session(body: CreateSessionIn):
        env = make_env(body.env_name)
        if body.seed is not None:
            env.set_random_seed(body.seed)
        sid = store.create(env)
        return SessionOut(session_id=sid, env_name=body.env_name,
                          obs_dim=env.obs_dim, act_dim=env.act_dim,
                          terrain_len=env.terrain_len)

    @app.get("/sessions", response_model=SessionCountOut)
    def session_count():
        return SessionCountOut(open_sessions=store.count())

    @app.post("/sessions/{sid}/seed")
    def seed(sid: str, body: SeedIn):
        session = store.get(sid)
        with session.lock:
            session.env.set_random_seed(body.seed)
        return {"ok": True}

    @app.post("/sessions/{sid}/reset", response_model=ObservationOut)
    def reset(sid: str):
        session = store.get(sid)
        with session.lock:
            obs = session.env.reset()
        return ObservationOut(observation=[float(v) for v in obs.data],
                              terrain_len=obs.terrain_len)

    @app.post("/sessions/{sid}/step", response_model=StepOut)
    def step(sid: str, body: StepIn):
        session = store.get(sid)
        with session.lock:
            result = session.env.step(body.action)
        return StepOut(observation=[float(v) for v in result.observation.data],
                       reward=result.reward, done=result.done, info=result.info)

    @app.get("/sessions/{sid}/spaces", response_model=SpacesOut)
    def spaces(sid: str):
        session = store.get(sid)
        with session.lock:
            env = session.env
            lo, hi = env.observation_space()
            return SpacesOut(
                action_min=[float(v) for v in env.action_space.minimum],
                action_max=[float(v) for v in env.action_space.maximum],
                observation_min=[float(v) for v in lo],
                observation_max=[float(v) for v in hi],
            )

    @app.delete("/sessions/{sid}")
    def close(sid: str):
        store.drop(sid)
        return {"ok": True}

    return app


app = create_app()
