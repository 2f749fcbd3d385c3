import { describe, expect, it } from "vitest";

import { assignLayers, layerColumns } from "../src/layout.js";
import { defaultPlanView, renderPlanScreen } from "../src/screens/plan.js";
import type { PlanPayload } from "../src/types.js";
import { fixture } from "./helpers.js";

const plan1 = fixture<PlanPayload>("plan_cooks1.json");
const plan2 = fixture<PlanPayload>("plan_cooks2.json");
const plan3 = fixture<PlanPayload>("plan_cooks3.json");

function chainPlan(): PlanPayload {
  return {
    engine_version: "0.1.0",
    seed: 7,
    cooks: 1,
    proportions: [{ ingredient_id: "rice", qty: "1", unit: "cup" }],
    plan: {
      nodes: [
        { id: "rice", kind: "ingredient", action: null, tool: null, duration: 0 },
        { id: "boil", kind: "action", action: "boil", tool: null, duration: 10 },
        { id: "serve", kind: "action", action: "serve", tool: null, duration: 2 },
      ],
      edges: [
        ["rice", "boil"],
        ["boil", "serve"],
      ],
      assignment: { rice: -1, boil: 0, serve: 0 },
      start_times: { rice: 0, boil: 0, serve: 10 },
      makespan: 12,
    },
  };
}

describe("DAG layout", () => {
  it("chain plans become one node per layer", () => {
    const columns = layerColumns(chainPlan().plan);
    expect(columns).toEqual([["rice"], ["boil"], ["serve"]]);
  });

  it("layers respect every edge of the recorded plan", () => {
    const layers = assignLayers(plan2.plan);
    for (const [a, b] of plan2.plan.edges) {
      expect(layers.get(b)!).toBeGreaterThan(layers.get(a)!);
    }
  });

  it("rejects cyclic graphs", () => {
    const broken = chainPlan();
    broken.plan.edges.push(["serve", "boil"]);
    expect(() => assignLayers(broken.plan)).toThrow(/cycle/);
  });
});

describe("plan screen", () => {
  it("shows the API makespan verbatim", () => {
    const html = renderPlanScreen(plan2, defaultPlanView());
    expect(html).toContain(`Makespan: ${plan2.plan.makespan} min with 2 cooks`);
  });

  it("distinguishes ingredient and action nodes", () => {
    const html = renderPlanScreen(plan1, defaultPlanView());
    for (const node of plan1.plan.nodes) {
      expect(html).toContain(`class="node ${node.kind}" data-id="${node.id}"`);
    }
  });

  it("bake precedes cool in the layout", () => {
    const layers = assignLayers(plan1.plan);
    const bake = plan1.plan.nodes.find((n) => n.action === "bake");
    const cool = plan1.plan.nodes.find((n) => n.action === "cool");
    expect(bake && cool).toBeTruthy();
    expect(layers.get(bake!.id)!).toBeLessThan(layers.get(cool!.id)!);
  });

  it("displayed makespan is non-increasing as cooks increase", () => {
    const spans = [plan1, plan2, plan3].map((p) => p.plan.makespan);
    expect(spans[1]).toBeLessThanOrEqual(spans[0]);
    expect(spans[2]).toBeLessThanOrEqual(spans[1]);
    expect(spans[1]).toBeLessThan(spans[0]); // the fixture parallelizes
  });

  it("cook slider reflects the payload's cook count", () => {
    const html = renderPlanScreen(plan3, { ...defaultPlanView(), cooks: 3 });
    expect(html).toContain(`id="cooks" min="1" max="4" value="3"`);
  });

  it("renders proportions from the payload", () => {
    const html = renderPlanScreen(plan1, defaultPlanView());
    for (const p of plan1.proportions) {
      expect(html).toContain(p.ingredient_id);
    }
  });

  it("missing plan renders the retry affordance", () => {
    const view = { ...defaultPlanView(), loadError: "conflict: session modified" };
    const html = renderPlanScreen(null, view);
    expect(html).toContain("conflict: session modified");
    expect(html).toContain(`id="retry-plan"`);
  });
});
