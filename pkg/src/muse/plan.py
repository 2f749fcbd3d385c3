"""Externalization: proportions, step DAG synthesis, and multi-cook schedule.

Step graphs are transferred from the nearest corpus recipe (by ingredient
overlap) rather than synthesized from scratch; scheduling is list scheduling
with longest-processing-time priority among ready nodes.
"""

from __future__ import annotations

import csv
import json
import statistics
import warnings as _warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .corpus import Ingredient, Recipe, RecipeIngredient, Step
from .parsing import RecipeDocument, parse_recipe


class PlanError(Exception):
    pass


# quantities are compared on a single scale; unit -> canonical multiplier
_UNIT_SCALE = {
    None: 50.0, "cup": 240.0, "tablespoon": 15.0, "teaspoon": 5.0,
    "gram": 1.0, "kilogram": 1000.0, "milliliter": 1.0, "liter": 1000.0,
    "ounce": 28.0, "pound": 454.0, "pinch": 0.5, "dash": 0.5, "clove": 5.0,
    "slice": 25.0, "piece": 50.0, "can": 400.0, "bunch": 60.0, "sprig": 2.0,
    "stick": 113.0, "head": 500.0, "stalk": 40.0,
}


def _to_scale(qty: Fraction, unit: Optional[str]) -> float:
    return float(qty) * _UNIT_SCALE.get(unit, 50.0)


@dataclass(frozen=True)
class PlanNode:
    id: str
    kind: str  # "ingredient" | "action"
    action: Optional[str] = None
    tool: Optional[str] = None
    duration: float = 0.0


@dataclass
class Plan:
    nodes: list[PlanNode]
    edges: list[tuple[str, str]]
    assignment: dict[str, int] = field(default_factory=dict)
    start_times: dict[str, float] = field(default_factory=dict)
    makespan: float = 0.0

    def action_nodes(self) -> list[PlanNode]:
        return [n for n in self.nodes if n.kind == "action"]

    def predecessors(self, node_id: str) -> list[str]:
        return [a for a, b in self.edges if b == node_id]

    def to_json(self) -> dict:
        return {"nodes": [{"id": n.id, "kind": n.kind, "action": n.action,
                           "tool": n.tool, "duration": n.duration}
                          for n in self.nodes],
                "edges": [list(e) for e in self.edges],
                "assignment": self.assignment,
                "start_times": self.start_times,
                "makespan": self.makespan}

    @classmethod
    def from_json(cls, obj: dict) -> "Plan":
        return cls(nodes=[PlanNode(id=n["id"], kind=n["kind"], action=n.get("action"),
                                   tool=n.get("tool"), duration=float(n.get("duration", 0.0)))
                          for n in obj["nodes"]],
                   edges=[tuple(e) for e in obj["edges"]],
                   assignment={k: int(v) for k, v in obj.get("assignment", {}).items()},
                   start_times={k: float(v) for k, v in obj.get("start_times", {}).items()},
                   makespan=float(obj.get("makespan", 0.0)))


def load_action_durations(path=None) -> dict[str, float]:
    if path is None:
        path = resources.files("muse.data").joinpath("action_durations.csv")
    out: dict[str, float] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out[row["action"].strip()] = float(row["default_minutes"])
    return out


def estimate_proportions(ingredient_set: Sequence[str], corpus: Sequence[Recipe],
                         dish_type: str,
                         ingredients: Optional[dict[str, Ingredient]] = None,
                         servings: int = 4) -> Recipe:
    """Fill quantities from corpus medians: same-dish-type median for the
    ingredient, then its category median, then 1 unit."""
    ids = sorted(set(ingredient_set))
    if not ids:
        raise PlanError("empty ingredient set")
    if not corpus:
        raise PlanError("empty corpus")

    same_dish = [r for r in corpus if r.dish_type == dish_type] or list(corpus)
    per_ing: dict[str, list[tuple[Fraction, Optional[str]]]] = {}
    per_cat_scaled: dict[str, list[float]] = {}
    for r in same_dish:
        for ri in r.ingredients:
            if ri.quantity is None:
                continue
            per_ing.setdefault(ri.ingredient_id, []).append((ri.quantity, ri.unit))
            if ingredients and ri.ingredient_id in ingredients:
                cat = ingredients[ri.ingredient_id].category
                per_cat_scaled.setdefault(cat, []).append(_to_scale(ri.quantity, ri.unit))

    out: list[RecipeIngredient] = []
    scale = Fraction(servings, 4)  # corpus recipes are treated as 4 servings
    for iid in ids:
        obs = per_ing.get(iid)
        if obs:
            scaled = sorted(obs, key=lambda qu: _to_scale(*qu))
            qty, unit = scaled[len(scaled) // 2] if len(scaled) % 2 else scaled[len(scaled) // 2 - 1]
            out.append(RecipeIngredient(ingredient_id=iid, quantity=qty * scale, unit=unit))
            continue
        cat = ingredients[iid].category if ingredients and iid in ingredients else None
        if cat and per_cat_scaled.get(cat):
            med = statistics.median(per_cat_scaled[cat])
            qty = Fraction(med).limit_denominator(8) * scale
            _warnings.warn(f"no corpus quantity for {iid!r}; using {cat} category median",
                           stacklevel=2)
            out.append(RecipeIngredient(ingredient_id=iid,
                                        quantity=qty if qty > 0 else Fraction(1),
                                        unit="gram"))
        else:
            _warnings.warn(f"no corpus quantity for {iid!r}; defaulting to 1 unit",
                           stacklevel=2)
            out.append(RecipeIngredient(ingredient_id=iid, quantity=Fraction(1) * scale,
                                        unit=None))

    title = f"generated {dish_type}"
    return Recipe(id="generated", title=title, dish_type=dish_type,
                  ingredients=tuple(out), provenance="generated")


def _parsed_template(recipe: Recipe) -> Optional[list[Step]]:
    """Corpus recipes carry raw-text steps; re-parse them into structured steps."""
    texts = []
    for s in recipe.steps:
        raw = [i for i in s.inputs if i.startswith("_text:")]
        if s.action == "raw" and raw:
            texts.append(raw[0][len("_text:"):])
    if not texts:
        structured = [s for s in recipe.steps if s.action != "raw"]
        return list(structured) or None
    doc = RecipeDocument(title=recipe.title,
                         ingredient_lines=tuple(ri.ingredient_id for ri in recipe.ingredients),
                         instruction_lines=tuple(texts), dish_type=recipe.dish_type)
    parsed, _ = parse_recipe(doc)
    return list(parsed.steps) or None


def _fallback_chain(recipe: Recipe, durations: dict[str, float]) -> Plan:
    nodes = [PlanNode(id=ri.ingredient_id, kind="ingredient")
             for ri in recipe.ingredients]
    prep = PlanNode(id="prep", kind="action", action="chop",
                    duration=durations.get("chop", 5.0))
    combine = PlanNode(id="combine", kind="action", action="mix",
                       duration=durations.get("mix", 5.0))
    cook = PlanNode(id="cook", kind="action", action="bake",
                    duration=durations.get("bake", 30.0))
    edges = [(n.id, "prep") for n in nodes]
    edges += [("prep", "combine"), ("combine", "cook")]
    return Plan(nodes=nodes + [prep, combine, cook], edges=edges)


def build_step_graph(recipe: Recipe, corpus: Sequence[Recipe],
                     ingredients: Optional[dict[str, Ingredient]] = None,
                     durations: Optional[dict[str, float]] = None) -> Plan:
    """Transfer the step template of the nearest corpus recipe (ingredient
    overlap) onto this recipe; unbound recipe ingredients join a default
    preparation chain."""
    if not recipe.ingredients:
        raise PlanError("recipe has no ingredients")
    durations = durations if durations is not None else load_action_durations()
    my_ids = recipe.ingredient_ids()

    def overlap(r: Recipe) -> float:
        other = r.ingredient_ids()
        return len(my_ids & other) / max(len(my_ids | other), 1)

    template_steps: Optional[list[Step]] = None
    same_dish = [r for r in corpus if r.dish_type == recipe.dish_type]
    for r in sorted(same_dish or corpus, key=lambda r: (-overlap(r), r.id)):
        template_steps = _parsed_template(r)
        if template_steps:
            break

    if not template_steps:
        _warnings.warn("no step template available; using fallback prep chain",
                       stacklevel=2)
        return _fallback_chain(recipe, durations)

    def category(iid: str) -> Optional[str]:
        if ingredients and iid in ingredients:
            return ingredients[iid].category
        return None

    # bind template ingredient inputs to this recipe's ingredients by id, then category
    binding: dict[str, str] = {}
    used: set[str] = set()
    template_inputs = sorted({i for s in template_steps for i in s.inputs
                              if not i.startswith("stage")})
    for tin in template_inputs:
        if tin in my_ids:
            binding[tin] = tin
            used.add(tin)
    for tin in template_inputs:
        if tin in binding:
            continue
        cat = category(tin)
        match = next((i for i in sorted(my_ids - used) if cat and category(i) == cat), None)
        if match:
            binding[tin] = match
            used.add(match)
        # unbound template inputs are dropped

    nodes: list[PlanNode] = [PlanNode(id=i, kind="ingredient") for i in sorted(my_ids)]
    edges: list[tuple[str, str]] = []
    stage_node: dict[str, str] = {}
    for n, step in enumerate(template_steps):
        node_id = f"step{n + 1}"
        dur = step.duration if step.duration is not None else durations.get(step.action, 5.0)
        nodes.append(PlanNode(id=node_id, kind="action", action=step.action,
                              tool=step.tool, duration=float(dur)))
        for src in sorted(step.inputs):
            if src.startswith("stage") and src in stage_node:
                edges.append((stage_node[src], node_id))
            elif src in binding:
                edges.append((binding[src], node_id))
        stage_node[step.output] = node_id
        if not any(b == node_id for _, b in edges) and n > 0:
            edges.append((f"step{n}", node_id))  # keep the chain connected

    # unbound recipe ingredients: attach through a default preparation step
    unbound = sorted(my_ids - used - {b for b in binding.values()})
    first_action = next(n.id for n in nodes if n.kind == "action")
    bound_targets = {a for a, _ in edges}
    for iid in unbound:
        if iid not in bound_targets and not any(a == iid for a, _ in edges):
            edges.append((iid, first_action))

    plan = Plan(nodes=nodes, edges=sorted(set(edges)))
    _toposort(plan)  # raises on cycles
    return plan


def _toposort(plan: Plan) -> list[str]:
    ids = [n.id for n in plan.nodes]
    indeg = {i: 0 for i in ids}
    succ: dict[str, list[str]] = {i: [] for i in ids}
    for a, b in plan.edges:
        if a not in indeg or b not in indeg:
            raise PlanError(f"edge references unknown node: {(a, b)}")
        indeg[b] += 1
        succ[a].append(b)
    ready = sorted(i for i in ids if indeg[i] == 0)
    order = []
    while ready:
        cur = ready.pop(0)
        order.append(cur)
        for nxt in succ[cur]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
        ready.sort()
    if len(order) != len(ids):
        raise PlanError("step graph contains a cycle")
    return order


def schedule(plan: Plan, num_cooks: int) -> Plan:
    """Best list schedule using at most `num_cooks` cooks.

    Trying every cook count up to the limit sidesteps Graham's scheduling
    anomalies and makes the makespan non-increasing in num_cooks.
    """
    if num_cooks < 1:
        raise PlanError("need at least one cook")
    best: Optional[Plan] = None
    for m in range(1, num_cooks + 1):
        cand = _list_schedule(plan, m)
        if best is None or cand.makespan < best.makespan:
            best = cand
    return best


def _list_schedule(plan: Plan, num_cooks: int) -> Plan:
    """LPT list scheduling: among ready action nodes pick the longest duration
    (ties by node id) for the earliest-free cook.  Ingredient nodes are
    zero-duration sources."""
    _toposort(plan)

    durations = {n.id: (n.duration if n.kind == "action" else 0.0) for n in plan.nodes}
    preds: dict[str, list[str]] = {n.id: [] for n in plan.nodes}
    for a, b in plan.edges:
        preds[b].append(a)

    finish: dict[str, float] = {}
    start: dict[str, float] = {}
    assignment: dict[str, int] = {}
    for n in plan.nodes:
        if n.kind == "ingredient":
            start[n.id] = 0.0
            finish[n.id] = 0.0
            assignment[n.id] = -1

    cook_free = [0.0] * num_cooks
    pending = [n for n in plan.nodes if n.kind == "action"]
    while pending:
        ready = [n for n in pending if all(p in finish for p in preds[n.id])]
        if not ready:
            raise PlanError("unschedulable graph")
        ready.sort(key=lambda n: (-durations[n.id], n.id))
        node = ready[0]
        cook = min(range(num_cooks), key=lambda c: (cook_free[c], c))
        t0 = max([cook_free[cook]] + [finish[p] for p in preds[node.id]])
        start[node.id] = t0
        finish[node.id] = t0 + durations[node.id]
        assignment[node.id] = cook
        cook_free[cook] = finish[node.id]
        pending.remove(node)

    makespan = max(finish.values(), default=0.0)
    return Plan(nodes=list(plan.nodes), edges=list(plan.edges),
                assignment=assignment, start_times=start, makespan=makespan)


def save_plan(plan: Plan, path) -> None:
    Path(path).write_text(json.dumps(plan.to_json(), indent=2, sort_keys=True))
