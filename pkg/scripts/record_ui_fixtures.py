"""Record live API responses as JSON fixtures for the frontend test suite.

Runs the service in-process (no sockets) and captures one deterministic
workflow: ingredients listing, generation with seed 7, the candidate list,
and plans for 1..3 cooks on a candidate whose step graph parallelizes.
"""

import json
import warnings
from pathlib import Path

from fastapi.testclient import TestClient

from muse.config import EngineConfig, GenerationDefaults
from muse.engine import Engine
from muse.service import create_app
from muse.sessions import SessionStore

OUT = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"

PROBLEM = {"key_ingredient": "saffron", "cuisines": ["spanish", "french"],
           "dish_type": "quiche", "min_ingredients": 4, "max_ingredients": 8}


def main():
    warnings.filterwarnings("ignore")
    OUT.mkdir(parents=True, exist_ok=True)
    cfg = EngineConfig(generation=GenerationDefaults(population_size=24,
                                                     generations=5))
    engine = Engine.load(cfg)
    client = TestClient(create_app(engine, SessionStore(OUT / ".tmp-sessions")))

    def dump(name, payload):
        (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}")

    dump("ingredients.json", client.get("/ingredients").json())

    session = client.post("/sessions").json()
    sid = session["session"]["id"]
    dump("session_new.json", session)

    client.post(f"/sessions/{sid}/problem", json=PROBLEM)
    dump("session_problem.json", client.get(f"/sessions/{sid}").json())

    client.post(f"/sessions/{sid}/generate", json={"seed": 7})
    candidates = client.get(f"/sessions/{sid}/candidates",
                            params={"limit": 10}).json()
    dump("candidates.json", candidates)

    # pick the best-ranked candidate whose plan actually parallelizes
    chosen = None
    for cand in candidates["candidates"]:
        client.post(f"/sessions/{sid}/select", json={"candidate_id": cand["id"]})
        plans = {m: client.get(f"/sessions/{sid}/plan",
                               params={"cooks": m}).json() for m in (1, 2, 3)}
        if plans[2]["plan"]["makespan"] < plans[1]["plan"]["makespan"]:
            chosen = cand
            break
    assert chosen is not None, "no candidate with a parallelizable plan"
    dump("selection.json", client.get(f"/sessions/{sid}").json())
    for m, payload in plans.items():
        dump(f"plan_cooks{m}.json", payload)

    for f in (OUT / ".tmp-sessions").glob("*"):
        f.unlink()
    (OUT / ".tmp-sessions").rmdir()


if __name__ == "__main__":
    main()
