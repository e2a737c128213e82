"""HTTP facade for live policy administration.

A :class:`PolicySession` owns the loaded document, the precedent log,
and per-mode matrix caches keyed by a monotonically increasing revision
number. Mutations are serialized through a single lock; reads serve
immutable snapshots, so any interleaving of requests is equivalent to
some serial order of the mutations.

Only the admitted precedent log is persisted (write-through to the
policy document on every mutation and on shutdown); matrices are
derived data and are always recomputed from the log.
"""

from __future__ import annotations

import os
import tempfile
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import engine
from .model import Decision, PolicyUniverse
from .policyfile import (
    PolicyDocument,
    audit_records,
    build_log,
    cell_to_dict,
    matrix_to_dict,
    policy_to_dict,
    serialize_policy,
)
from .precedents import (
    CollisionStateError,
    InvalidPrecedentError,
    Outcome,
    PrecedentLog,
    UnknownEntityError,
)


class SessionLoadError(ValueError):
    """The document's precedents are not admissible under its strategy."""


class PolicySession:
    """Single-writer, snapshot-reader session over one policy document."""

    def __init__(self, document: PolicyDocument, persist_path: str | None = None):
        self._settings = document.settings
        self._universe: PolicyUniverse = document.universe()
        self._document = document
        self._persist_path = persist_path
        self._lock = threading.Lock()
        self._revision = 0
        self._matrices: dict[tuple[str, str], engine.AccessMatrix] = {}

        log, outcomes = build_log(document, universe=self._universe)
        refused = [o for o in outcomes if o.status != "admitted"]
        if refused:
            raise SessionLoadError(
                "document precedents are not admissible: "
                + "; ".join(f"{o.precedent.describe()} {o.status}" for o in refused)
            )
        self._log: PrecedentLog = log

    # -- reads ---------------------------------------------------------

    @property
    def revision(self) -> int:
        return self._revision

    @property
    def universe(self) -> PolicyUniverse:
        return self._universe

    @property
    def log(self) -> PrecedentLog:
        return self._log

    @property
    def settings(self):
        return self._settings

    def matrix(self, mode: str | None = None) -> engine.AccessMatrix:
        mode = mode or self._settings.mode
        if mode not in engine.MODES:
            raise ValueError(f"unknown interpolation mode: {mode!r}")
        depth = self._settings.dominance_depth
        key = (mode, depth)
        # Hold one reference to the cache dict: _bump swaps the dict out,
        # so a computation racing a mutation can only populate the
        # discarded generation, never poison the new one.
        cache = self._matrices
        cached = cache.get(key)
        if cached is None:
            cached = engine.interpolate(self._universe, self._log.admitted(), mode, depth)
            cache[key] = cached
        return cached

    def explain(self, subject_id: str, object_id: str, mode: str | None = None):
        matrix = self.matrix(mode)
        sid = self._universe.rep_id(subject_id)
        oid = self._universe.rep_id(object_id)
        return matrix, sid, oid, engine.explain_cell(matrix, sid, oid)

    def document(self) -> PolicyDocument:
        """Current document: declared universe plus the admitted log."""
        return PolicyDocument(
            schema=self._document.schema,
            rights=self._document.rights,
            subjects=self._document.subjects,
            objects=self._document.objects,
            precedents=self._log.admitted(),
            settings=self._settings,
        )

    def audit(self) -> list[dict]:
        return audit_records(self._log)

    def whatif(self, hypotheticals: list[tuple[str, str, Decision, str | None]],
               mode: str | None = None):
        """Diff the current matrix against admitted plus hypotheticals.

        Returns ``(diffs, base_matrix, hypothetical_matrix)``. Collisions
        inside the hypothetical copy are resolved by overwrite; session
        state is untouched.
        """
        base = self.matrix(mode)
        shadow = PrecedentLog(self._universe, strategy="overwrite-old")
        for p in self._log.admitted():
            shadow.apply(p.subject_id, p.object_id, p.decision, note=p.note)
        for subject_id, object_id, decision, note in hypotheticals:
            shadow.apply(subject_id, object_id, decision, note=note)
        hypothetical = engine.interpolate(
            self._universe, shadow.admitted(),
            mode or self._settings.mode, self._settings.dominance_depth,
        )
        return engine.diff_matrices(base, hypothetical), base, hypothetical

    # -- mutations -------------------------------------------------------

    def submit(self, subject_id: str, object_id: str, decision: Decision,
               note: str | None = None) -> tuple[Outcome, int]:
        with self._lock:
            outcome = self._log.apply(subject_id, object_id, decision, note=note)
            if outcome.status in ("admitted", "pending"):
                self._bump()
            return outcome, self._revision

    def resolve(self, collision_id: int, choice: str) -> tuple[Outcome, int]:
        with self._lock:
            outcome = self._log.resolve(collision_id, choice)
            self._bump()
            return outcome, self._revision

    def persist(self) -> None:
        if not self._persist_path:
            return
        text = serialize_policy(self.document())
        directory = os.path.dirname(os.path.abspath(self._persist_path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, self._persist_path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def _bump(self) -> None:
        self._revision += 1
        self._matrices = {}
        self.persist()


# -- request bodies ----------------------------------------------------


class PrecedentBody(BaseModel):
    subject: str
    object: str
    effect: str
    rights: list[str] = Field(min_length=1)
    note: str | None = None


class ResolutionBody(BaseModel):
    choice: str


class WhatifBody(BaseModel):
    precedents: list[PrecedentBody]
    mode: str | None = None


def _decision_from_body(body: PrecedentBody) -> Decision:
    try:
        return Decision(effect=body.effect, rights=frozenset(body.rights))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e)) from None


def _precedent_payload(p) -> dict:
    return {
        "subject": p.subject_id,
        "object": p.object_id,
        "effect": p.decision.effect,
        "rights": sorted(p.decision.rights),
        "note": p.note,
    }


def create_app(session: PolicySession, cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    """Build the REST application over one session."""

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        session.persist()

    app = FastAPI(title="dacmatrix policy service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _matrix_or_400(mode: str | None):
        try:
            return session.matrix(mode)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None

    @app.get("/matrix")
    def get_matrix(mode: str | None = Query(default=None)):
        matrix = _matrix_or_400(mode)
        return {
            "revision": session.revision,
            "summary": engine.summarize(matrix),
            "matrix": matrix_to_dict(matrix),
        }

    @app.get("/explain")
    def get_explain(subject: str, object: str, mode: str | None = Query(default=None)):  # noqa: A002
        matrix = _matrix_or_400(mode)
        try:
            sid = session.universe.rep_id(subject)
            oid = session.universe.rep_id(object)
        except KeyError as e:
            raise HTTPException(status_code=404, detail=str(e)) from None
        explanation = engine.explain_cell(matrix, sid, oid)
        return {
            "revision": session.revision,
            "subject": sid,
            "object": oid,
            "mode": matrix.mode,
            "defined": explanation.defined,
            "summary": explanation.summary(),
            "cell": cell_to_dict(matrix, sid, oid),
        }

    @app.get("/policy")
    def get_policy():
        return {
            "revision": session.revision,
            "policy": policy_to_dict(session.document()),
            "pending_collisions": [
                {
                    "collision_id": c.collision_id,
                    "old": _precedent_payload(c.old),
                    "new": _precedent_payload(c.new),
                }
                for c in session.log.pending()
            ],
        }

    @app.get("/audit")
    def get_audit():
        return {
            "revision": session.revision,
            "strategy": session.log.strategy,
            "records": session.audit(),
        }

    @app.post("/precedents")
    def post_precedent(body: PrecedentBody):
        decision = _decision_from_body(body)
        try:
            outcome, revision = session.submit(body.subject, body.object, decision, body.note)
        except (UnknownEntityError, InvalidPrecedentError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from None
        if outcome.status == "rejected":
            raise HTTPException(
                status_code=409,
                detail={
                    "outcome": "rejected",
                    "conflict": _precedent_payload(outcome.conflict),
                },
            )
        payload = {
            "outcome": outcome.status,
            "revision": revision,
            "precedent": _precedent_payload(outcome.precedent),
        }
        if outcome.status == "pending":
            payload["collision_id"] = outcome.collision_id
            payload["conflict"] = _precedent_payload(outcome.conflict)
            return _status(payload, 202)
        return payload

    @app.post("/collisions/{collision_id}/resolution")
    def post_resolution(collision_id: int, body: ResolutionBody):
        if body.choice not in ("keep-old", "keep-new"):
            raise HTTPException(status_code=422, detail="choice must be keep-old or keep-new")
        try:
            outcome, revision = session.resolve(collision_id, body.choice)
        except CollisionStateError as e:
            status = 404 if "unknown" in str(e) else 409
            raise HTTPException(status_code=status, detail=str(e)) from None
        payload = {"outcome": outcome.status, "revision": revision}
        if outcome.status == "pending":
            payload["collision_id"] = outcome.collision_id
            payload["conflict"] = _precedent_payload(outcome.conflict)
        return payload

    @app.post("/whatif")
    def post_whatif(body: WhatifBody):
        hypotheticals = []
        for item in body.precedents:
            hypotheticals.append((item.subject, item.object,
                                  _decision_from_body(item), item.note))
        try:
            diffs, base, hypothetical = session.whatif(hypotheticals, body.mode)
        except (UnknownEntityError, InvalidPrecedentError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from None
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return {
            "revision": session.revision,
            "mode": base.mode,
            "diff": [
                {
                    "subject": d.subject_id,
                    "object": d.object_id,
                    "before": cell_to_dict(base, d.subject_id, d.object_id),
                    "after": cell_to_dict(hypothetical, d.subject_id, d.object_id),
                }
                for d in diffs
            ],
        }

    return app


def _status(payload: dict, code: int):
    from fastapi.responses import JSONResponse

    return JSONResponse(content=payload, status_code=code)
