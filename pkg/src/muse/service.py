"""HTTP API for the mixed-initiative workflow.

Session protocol: problem_finding -> generated -> selected -> planned, with an
explicit reset back to problem finding.  Every response carries the engine
version; errors carry machine-readable reason codes.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import design
from .engine import ENGINE_VERSION, Engine
from .sessions import SessionError, SessionStore

_SORT_KEYS = ("composite", "surprise", "pleasantness", "pairing")


class ProblemBody(BaseModel):
    key_ingredient: str
    cuisines: list[str] = Field(min_length=1)
    dish_type: str
    min_ingredients: int = 3
    max_ingredients: int = 12


class GenerateBody(BaseModel):
    seed: int = 0
    weights: Optional[dict[str, float]] = None
    population_size: Optional[int] = None
    generations: Optional[int] = None


class SelectBody(BaseModel):
    candidate_id: str


def _session_payload(session) -> dict:
    return {"engine_version": ENGINE_VERSION,
            "session": {"id": session.id, "state": session.state,
                        "problem": session.problem,
                        "selection": session.selection,
                        "seed": session.seed,
                        "candidate_count": len(session.candidates or []),
                        "created": session.created, "updated": session.updated}}


def create_app(engine: Engine, store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="muse", version=ENGINE_VERSION)
    store = store or SessionStore(engine.config.session_dir)

    @app.exception_handler(SessionError)
    async def _session_error(request: Request, exc: SessionError):
        status = {"session_not_found": 404, "candidate_not_found": 404,
                  "invalid_state": 409, "conflict": 409,
                  "corrupt_session": 500}.get(exc.code, 400)
        return JSONResponse(status_code=status,
                            content={"engine_version": ENGINE_VERSION,
                                     "error": {"code": exc.code, "message": str(exc)}})

    @app.exception_handler(design.DesignError)
    async def _design_error(request: Request, exc: design.DesignError):
        return JSONResponse(status_code=422,
                            content={"engine_version": ENGINE_VERSION,
                                     "error": {"code": "bad_problem", "message": str(exc)}})

    @app.post("/sessions", status_code=201)
    def create_session():
        return _session_payload(store.create())

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_payload(store.load(session_id))

    @app.get("/ingredients")
    def ingredients(suggest_for: Optional[str] = None):
        return {"engine_version": ENGINE_VERSION,
                "dish_types": engine.dish_types(),
                "cuisines": sorted(engine.cuisines),
                "ingredients": engine.ingredient_choices(suggest_for)}

    @app.post("/sessions/{session_id}/problem")
    def set_problem(session_id: str, body: ProblemBody):
        if body.key_ingredient not in engine.ingredients:
            raise SessionError("unknown_ingredient",
                               f"key ingredient {body.key_ingredient!r} not in catalog")
        problem = design.DesignProblem(key_ingredient=body.key_ingredient,
                                       cuisines=frozenset(body.cuisines),
                                       dish_type=body.dish_type,
                                       min_ingredients=body.min_ingredients,
                                       max_ingredients=body.max_ingredients)

        def apply(session):
            session.transition("problem_finding")
            session.problem = {"key_ingredient": problem.key_ingredient,
                               "cuisines": sorted(problem.cuisines),
                               "dish_type": problem.dish_type,
                               "min_ingredients": problem.min_ingredients,
                               "max_ingredients": problem.max_ingredients}
            session.candidates = None
            session.selection = None
            session.plan = None

        return _session_payload(store.mutate(session_id, apply))

    @app.post("/sessions/{session_id}/generate")
    def generate(session_id: str, body: GenerateBody):
        session = store.load(session_id)
        if session.state != "problem_finding" or not session.problem:
            raise SessionError("invalid_state", "set a design problem before generating")
        p = session.problem
        problem = design.DesignProblem(key_ingredient=p["key_ingredient"],
                                       cuisines=frozenset(p["cuisines"]),
                                       dish_type=p["dish_type"],
                                       min_ingredients=p["min_ingredients"],
                                       max_ingredients=p["max_ingredients"])
        g = engine.config.generation
        gen = design.GenerationConfig(
            population_size=body.population_size or g.population_size,
            generations=body.generations if body.generations is not None else g.generations,
            mutation_rate=g.mutation_rate, crossover_rate=g.crossover_rate,
            seed=body.seed, output_cap=g.output_cap)
        ranked = engine.generate_and_rank(problem, seed=body.seed, gen=gen,
                                          weights=body.weights)
        payload = [rc.to_json() for rc in ranked]

        def apply(session):
            session.transition("generated")
            session.candidates = payload
            session.seed = body.seed

        out = _session_payload(store.mutate(session_id, apply))
        out["seed"] = body.seed
        return out

    @app.get("/sessions/{session_id}/candidates")
    def candidates(session_id: str, limit: int = 10, sort: str = "composite"):
        session = store.load(session_id)
        if session.candidates is None:
            raise SessionError("invalid_state", "no candidates generated yet")
        if sort not in _SORT_KEYS:
            raise HTTPException(status_code=422,
                                detail={"code": "bad_sort",
                                        "message": f"sort must be one of {_SORT_KEYS}"})
        items = list(session.candidates)
        if sort == "composite":
            items.sort(key=lambda c: c["rank"])
        else:
            items.sort(key=lambda c: (-c[sort], c["id"]))
        return {"engine_version": ENGINE_VERSION, "seed": session.seed,
                "sort": sort, "total": len(items),
                "candidates": items[: max(limit, 0)]}

    @app.post("/sessions/{session_id}/select")
    def select(session_id: str, body: SelectBody):
        def apply(session):
            if session.candidates is None:
                raise SessionError("invalid_state", "nothing to select from")
            ids = {c["id"] for c in session.candidates}
            if body.candidate_id not in ids:
                raise SessionError("candidate_not_found",
                                   f"unknown candidate {body.candidate_id!r}")
            session.transition("selected")
            session.selection = body.candidate_id

        return _session_payload(store.mutate(session_id, apply))

    @app.get("/sessions/{session_id}/plan")
    def plan(session_id: str, cooks: int = 1):
        session = store.load(session_id)
        if session.state not in ("selected", "planned") or not session.selection:
            raise SessionError("invalid_state", "select a candidate before planning")
        if cooks < 1:
            raise HTTPException(status_code=422,
                                detail={"code": "bad_cooks", "message": "cooks must be >= 1"})
        chosen = next(c for c in session.candidates if c["id"] == session.selection)
        proportioned, scheduled = engine.plan_candidate(chosen["ingredients"],
                                                        session.problem["dish_type"],
                                                        cooks=cooks)
        plan_json = scheduled.to_json()

        def apply(session):
            session.transition("planned")
            session.plan = plan_json

        store.mutate(session_id, apply)
        return {"engine_version": ENGINE_VERSION, "seed": session.seed,
                "cooks": cooks,
                "proportions": [{"ingredient_id": ri.ingredient_id,
                                 "qty": str(ri.quantity), "unit": ri.unit}
                                for ri in proportioned.ingredients],
                "plan": plan_json}

    @app.post("/sessions/{session_id}/reset")
    def reset(session_id: str):
        def apply(session):
            session.transition("problem_finding")
            session.candidates = None
            session.selection = None
            session.plan = None

        return _session_payload(store.mutate(session_id, apply))

    @app.get("/menus/suggest")
    def menus(k: int = 2, seed: int = 0):
        if k < 2:
            raise HTTPException(status_code=422,
                                detail={"code": "bad_k", "message": "k must be >= 2"})
        result = engine.suggest_menu(k, seed=seed)
        return {"engine_version": ENGINE_VERSION, "seed": seed, **result}

    return app
