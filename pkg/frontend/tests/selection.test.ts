import { describe, expect, it } from "vitest";

import {
  defaultSelectionView,
  renderSelectionScreen,
} from "../src/screens/selection.js";
import type { CandidatesPayload } from "../src/types.js";
import { fixture } from "./helpers.js";

const data = fixture<CandidatesPayload>("candidates.json");

function cardIds(html: string): string[] {
  return [...html.matchAll(/<article class="candidate[^"]*" data-id="([^"]+)"/g)].map(
    (m) => m[1],
  );
}

describe("selection screen", () => {
  it("shows at most ten cards, in API order", () => {
    const html = renderSelectionScreen(data, defaultSelectionView());
    const ids = cardIds(html);
    expect(ids.length).toBeLessThanOrEqual(10);
    expect(ids).toEqual(data.candidates.map((c) => c.id));
  });

  it("does not reorder: a fixture sorted by surprise renders as-is", () => {
    const bySurprise: CandidatesPayload = {
      ...data,
      sort: "surprise",
      candidates: [...data.candidates].sort((a, b) => b.surprise - a.surprise),
    };
    const html = renderSelectionScreen(bySurprise, defaultSelectionView());
    expect(cardIds(html)).toEqual(bySurprise.candidates.map((c) => c.id));
  });

  it("displays raw metric values from the payload", () => {
    const html = renderSelectionScreen(data, defaultSelectionView());
    for (const cand of data.candidates) {
      expect(html).toContain(cand.surprise.toFixed(4));
      expect(html).toContain(cand.pleasantness.toFixed(4));
    }
  });

  it("bar lengths are proportional to the scores", () => {
    const html = renderSelectionScreen(data, defaultSelectionView());
    const widths = [...html.matchAll(/class="bar surprise" style="width: ([\d.]+)%"/g)].map(
      (m) => Number(m[1]),
    );
    expect(widths.length).toBe(data.candidates.length);
    const max = Math.max(...data.candidates.map((c) => c.surprise));
    data.candidates.forEach((cand, i) => {
      expect(widths[i]).toBeCloseTo((cand.surprise / max) * 100, 0);
    });
    expect(Math.max(...widths)).toBe(100);
  });

  it("shows the design reasoning panel", () => {
    const html = renderSelectionScreen(data, defaultSelectionView());
    const withParents = data.candidates.find(
      (c) => c.reasoning.parent_recipes.length > 0,
    );
    expect(withParents).toBeDefined();
    expect(html).toContain(withParents!.reasoning.parent_recipes[0]);
    expect(html).toContain("Design reasoning");
  });

  it("marks the selected candidate", () => {
    const view = defaultSelectionView();
    view.selectedCandidate = data.candidates[2].id;
    const html = renderSelectionScreen(data, view);
    expect(html).toContain(
      `<article class="candidate selected" data-id="${data.candidates[2].id}"`,
    );
  });

  it("highlights the active sort key", () => {
    const html = renderSelectionScreen(data, defaultSelectionView());
    expect(html).toContain(`data-sort="composite" aria-current="true"`);
    expect(html).not.toContain(`data-sort="surprise" aria-current="true"`);
  });
});
