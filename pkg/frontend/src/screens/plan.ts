import { attr, esc } from "../html.js";
import { layerColumns } from "../layout.js";
import type { PlanPayload } from "../types.js";

export interface PlanView {
  cooks: number;
  maxCooks: number;
  loadError: string | null;
}

export function defaultPlanView(): PlanView {
  return { cooks: 1, maxCooks: 4, loadError: null };
}

export function renderPlanScreen(data: PlanPayload | null, view: PlanView): string {
  if (data === null) {
    const message = view.loadError ?? "plan not loaded";
    return `<section class="screen plan-screen">
<p class="error">${esc(message)}</p>
<button id="retry-plan">Retry</button>
</section>`;
  }

  const byId = new Map(data.plan.nodes.map((n) => [n.id, n]));
  const columns = layerColumns(data.plan)
    .map((ids, layer) => {
      const cells = ids
        .map((id) => {
          const node = byId.get(id)!;
          const label =
            node.kind === "action"
              ? `${node.action}${node.tool ? ` (${node.tool})` : ""} — ${node.duration}m`
              : node.id;
          const cook = data.plan.assignment[id];
          const start = data.plan.start_times[id];
          return `<div class="node ${esc(node.kind)}" ${attr("data-id", id)} ${attr("data-layer", layer)} ${attr("data-cook", cook)} ${attr("data-start", start)}>${esc(label)}</div>`;
        })
        .join("\n");
      return `<div class="layer" ${attr("data-layer", layer)}>\n${cells}\n</div>`;
    })
    .join("\n");

  const proportions = data.proportions
    .map(
      (p) =>
        `<li>${esc(p.qty)}${p.unit ? ` ${esc(p.unit)}` : ""} ${esc(p.ingredient_id)}</li>`,
    )
    .join("\n");

  return `<section class="screen plan-screen">
<h1>Work plan</h1>
<p class="makespan">Makespan: ${esc(data.plan.makespan)} min with ${esc(data.cooks)} cook${data.cooks === 1 ? "" : "s"}</p>
<label>Cooks <input type="range" id="cooks" min="1" ${attr("max", view.maxCooks)} ${attr("value", data.cooks)}></label>
<ul class="proportions">
${proportions}
</ul>
<div class="dag">
${columns}
</div>
</section>`;
}
