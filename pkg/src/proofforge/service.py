"""HTTP service exposing ontology projects and asynchronous proof jobs.

Projects are content-addressed: uploading the same ontology text twice yields
the same project id. Proof generation runs on a small worker pool; clients
poll ``GET /jobs/{id}`` and may cancel with ``DELETE``. A cancelled job still
carries a result when the search had found any proof by then, flagged as
``suboptimal``.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .syntax import (Axiom, Ontology, ParseError, Signature, axiom_unicode,
                     parse_axiom, parse_ontology)
from .proofmodel import DEPTH, SIZE, proof_to_obj
from .extract import CancelToken, Cancelled, NoProofError
from .elreasoner import classify, generate_el_proof, is_elh
from .elimination import EliminationTask, generate_elimination_proof
from .detailed import GoalNotDerivedError, generate_detailed_proof
from .justify import NotEntailedError, justification_union
from . import tableau

MAX_WORKERS = 2
DEFAULT_PORT = 8321

METHODS = ("elk-size", "elk-depth", "elim-heur", "elim-name-opt",
           "elim-size-opt", "detailed")


class ProjectIn(BaseModel):
    ontology: str


class ProofIn(BaseModel):
    goal: str
    method: str
    known: list[str] = []
    timeout: Optional[float] = None


@dataclass
class Job:
    id: str
    state: str = "queued"  # queued -> running -> done | cancelled | failed
    token: CancelToken = field(default_factory=CancelToken)
    result: Optional[dict] = None
    suboptimal: bool = False
    error: Optional[str] = None


def _project_id(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _webui_dir() -> Optional[Path]:
    env = os.environ.get("PROOFFORGE_WEBUI_DIR")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for c in candidates:
        if c.is_dir():
            return c
    return None


def _run_job(method: str, o: Ontology, goal: Axiom, known: Signature,
             token: CancelToken):
    known_check = None
    if known.names:
        cache: dict = {}

        def known_check(a, _c=cache):
            if a not in _c:
                _c[a] = tableau.is_entailed(o, a)
            return _c[a]

    if method in ("elk-size", "elk-depth"):
        union = justification_union(o, goal)
        if not is_elh(union):
            raise ValueError(f"{method} needs an EL-expressible justification")
        measure = SIZE if method == "elk-size" else DEPTH
        return generate_el_proof(union, goal, measure, known, known_check, token)
    if method == "detailed":
        return generate_detailed_proof(o, goal, SIZE, known, known_check, token)
    strategy = {"elim-heur": "heuristic", "elim-name-opt": "nameOptimized",
                "elim-size-opt": "sizeOptimized"}[method]
    return generate_elimination_proof(EliminationTask(
        o, goal, strategy=strategy, known=known, cancel=token))


def create_app() -> FastAPI:
    app = FastAPI(title="proofforge")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    projects: dict[str, Ontology] = {}
    jobs: dict[str, Job] = {}
    lock = threading.Lock()
    pool = ThreadPoolExecutor(max_workers=MAX_WORKERS)

    @app.post("/projects")
    def create_project(body: ProjectIn):
        try:
            o = parse_ontology(body.ontology)
        except ParseError as e:
            raise HTTPException(400, str(e))
        pid = _project_id(body.ontology)
        with lock:
            projects[pid] = o
        sig = o.signature
        return {"id": pid, "axiomCount": len(o.axioms),
                "conceptNames": sorted(sig.concept_names),
                "roleNames": sorted(sig.role_names)}

    def _project(pid: str) -> Ontology:
        with lock:
            o = projects.get(pid)
        if o is None:
            raise HTTPException(404, "unknown project")
        return o

    @app.get("/projects/{pid}/entailments")
    def entailments(pid: str):
        o = _project(pid)
        return {"entailments": [axiom_unicode(a) for a in classify(o)]}

    @app.post("/projects/{pid}/proofs", status_code=202)
    def submit_proof(pid: str, body: ProofIn):
        o = _project(pid)
        if body.method not in METHODS:
            raise HTTPException(400, f"unknown method {body.method!r}")
        try:
            goal = parse_axiom(body.goal)
        except ParseError as e:
            raise HTTPException(400, f"bad goal: {e}")
        roles = {n for n in body.known if n in o.signature.role_names}
        known = Signature(frozenset(set(body.known) - roles), frozenset(roles))
        job = Job(id=uuid.uuid4().hex)
        with lock:
            jobs[job.id] = job
        timer = None
        if body.timeout and body.timeout > 0:
            timer = threading.Timer(body.timeout, job.token.cancel)

        def work():
            with lock:
                if job.state == "cancelled":
                    return
                job.state = "running"
            if timer:
                timer.start()
            try:
                proof = _run_job(body.method, o, goal, known, job.token)
                result, state, subopt = proof_to_obj(proof), "done", False
            except Cancelled as e:
                state = "cancelled"
                result = proof_to_obj(e.best) if e.best is not None else None
                subopt = result is not None
            except (NotEntailedError, NoProofError, GoalNotDerivedError) as e:
                state, result, subopt = "failed", None, False
                job.error = str(e) or e.__class__.__name__
            except Exception as e:  # keep the worker pool alive
                state, result, subopt = "failed", None, False
                job.error = f"{e.__class__.__name__}: {e}"
            finally:
                if timer:
                    timer.cancel()
            with lock:
                job.result, job.suboptimal = result, subopt
                job.state = state
        pool.submit(work)
        return {"jobId": job.id}

    def _job(jid: str) -> Job:
        with lock:
            job = jobs.get(jid)
        if job is None:
            raise HTTPException(404, "unknown job")
        return job

    @app.get("/jobs/{jid}")
    def job_status(jid: str):
        job = _job(jid)
        with lock:
            out = {"id": job.id, "state": job.state}
            if job.result is not None:
                out["result"] = job.result
                out["suboptimal"] = job.suboptimal
            if job.error is not None:
                out["error"] = job.error
        return out

    @app.delete("/jobs/{jid}")
    def cancel_job(jid: str):
        job = _job(jid)
        with lock:
            if job.state == "queued":
                job.state = "cancelled"
        job.token.cancel()
        return {"id": job.id, "state": job.state}

    webui = _webui_dir()
    if webui is not None:
        app.mount("/", StaticFiles(directory=webui, html=True), name="webui")

    return app
