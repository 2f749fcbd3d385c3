import { attr, esc } from "../html.js";
import { METRICS, type CandidatesPayload, type SortKey } from "../types.js";

export interface SelectionView {
  sort: SortKey;
  selectedCandidate: string | null;
}

export function defaultSelectionView(): SelectionView {
  return { sort: "composite", selectedCandidate: null };
}

/** Bar width for a metric value, scaled against the largest value on screen.
 * Purely presentational; the displayed numbers are the raw API fields. */
function barWidth(value: number, maxValue: number): number {
  if (maxValue <= 0) return 0;
  return Math.round((value / maxValue) * 1000) / 10;
}

export function renderSelectionScreen(
  data: CandidatesPayload,
  view: SelectionView,
): string {
  const maxima: Record<string, number> = {};
  for (const metric of METRICS) {
    maxima[metric] = Math.max(0, ...data.candidates.map((c) => c[metric]));
  }

  const sortLinks = (["composite", ...METRICS] as SortKey[])
    .map((key) => {
      const current = key === data.sort ? ` ${attr("aria-current", "true")}` : "";
      return `<button class="sort-key" ${attr("data-sort", key)}${current}>${esc(key)}</button>`;
    })
    .join("\n");

  const cards = data.candidates
    .map((cand) => {
      const selected = cand.id === view.selectedCandidate ? " selected" : "";
      const bars = METRICS.map((metric) => {
        const width = barWidth(cand[metric], maxima[metric]);
        return (
          `<div class="metric"><span class="metric-name">${esc(metric)}</span>` +
          `<span class="metric-value">${esc(cand[metric].toFixed(4))}</span>` +
          `<div class="bar ${esc(metric)}" style="width: ${width}%"></div></div>`
        );
      }).join("\n");
      const mutations = cand.reasoning.mutated_ingredients
        .map(([from, to]) => `<li>${esc(from)} → ${esc(to)}</li>`)
        .join("");
      return `<article class="candidate${selected}" ${attr("data-id", cand.id)} ${attr("data-rank", cand.rank)}>
<h2>#${esc(cand.rank)} ${esc(cand.ingredients.join(", "))}</h2>
${bars}
<details class="reasoning"><summary>Design reasoning</summary>
<p>Parent recipes: ${esc(cand.reasoning.parent_recipes.join(", ") || "none")}</p>
<ul class="mutations">${mutations}</ul>
</details>
<button class="select-button" ${attr("data-id", cand.id)}>Choose this idea</button>
</article>`;
    })
    .join("\n");

  return `<section class="screen selection-screen">
<h1>Pick an idea</h1>
<p class="summary">${esc(data.candidates.length)} of ${esc(data.total)} candidates, sorted by ${esc(data.sort)} (seed ${esc(data.seed ?? "none")})</p>
<nav class="sorting">${sortLinks}</nav>
${cards}
</section>`;
}
