/** Browser wiring: one session, three screens, at most one in-flight mutating
 * request. With `window.MUSE_FIXTURES` set, screens render from recorded
 * payloads and no network calls are made (fixture mode). */

import { ApiError, MuseApi } from "./api.js";
import {
  canSubmitProblem,
  defaultProblemView,
  renderProblemScreen,
  type ProblemView,
} from "./screens/problem.js";
import {
  defaultSelectionView,
  renderSelectionScreen,
  type SelectionView,
} from "./screens/selection.js";
import {
  defaultPlanView,
  renderPlanScreen,
  type PlanView,
} from "./screens/plan.js";
import type {
  CandidatesPayload,
  IngredientsPayload,
  PlanPayload,
  SortKey,
} from "./types.js";

type Screen = "problem" | "selection" | "plan";

export interface Fixtures {
  ingredients: IngredientsPayload;
  candidates: CandidatesPayload;
  plans: Record<number, PlanPayload>;
}

export interface ScreenState {
  screen: Screen;
  sessionId: string | null;
  problem: ProblemView;
  selection: SelectionView;
  plan: PlanView;
}

export class App {
  state: ScreenState = {
    screen: "problem",
    sessionId: null,
    problem: defaultProblemView(),
    selection: defaultSelectionView(),
    plan: defaultPlanView(),
  };
  private ingredients: IngredientsPayload | null = null;
  private candidates: CandidatesPayload | null = null;
  private planPayload: PlanPayload | null = null;
  private busy = false;

  constructor(
    private readonly api: MuseApi,
    private readonly mount: (html: string) => void,
    private readonly fixtures: Fixtures | null = null,
  ) {}

  async start(): Promise<void> {
    if (this.fixtures) {
      this.ingredients = this.fixtures.ingredients;
    } else {
      this.ingredients = await this.api.ingredients();
      this.state.sessionId = (await this.api.createSession()).session.id;
    }
    this.render();
  }

  render(): void {
    const { screen } = this.state;
    if (screen === "problem" && this.ingredients) {
      this.mount(renderProblemScreen(this.ingredients, this.state.problem));
    } else if (screen === "selection" && this.candidates) {
      this.mount(renderSelectionScreen(this.candidates, this.state.selection));
    } else if (screen === "plan") {
      this.mount(renderPlanScreen(this.planPayload, this.state.plan));
    }
  }

  /** Serialize mutating turns: drop input while a request is in flight. */
  private async turn(work: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await work();
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.plan.loadError = `${err.code}: ${err.message}`;
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async submitProblem(): Promise<void> {
    const view = this.state.problem;
    if (!canSubmitProblem(view)) return;
    await this.turn(async () => {
      if (this.fixtures) {
        this.candidates = this.fixtures.candidates;
      } else {
        const id = this.state.sessionId!;
        await this.api.setProblem(id, {
          key_ingredient: view.keyIngredient ?? view.suggestedKeyIngredient!,
          cuisines: view.cuisines,
          dish_type: view.dishType!,
          min_ingredients: view.minIngredients,
          max_ingredients: view.maxIngredients,
        });
        await this.api.generate(id, { seed: 7 });
        this.candidates = await this.api.candidates(id, this.state.selection.sort);
      }
      this.state.screen = "selection";
    });
  }

  async resort(sort: SortKey): Promise<void> {
    await this.turn(async () => {
      this.state.selection.sort = sort;
      if (!this.fixtures) {
        this.candidates = await this.api.candidates(this.state.sessionId!, sort);
      }
    });
  }

  async choose(candidateId: string): Promise<void> {
    await this.turn(async () => {
      try {
        if (!this.fixtures) {
          await this.api.select(this.state.sessionId!, candidateId);
        }
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          // stale candidate: refresh the list and stay on the selection screen
          this.candidates = await this.api.candidates(
            this.state.sessionId!,
            this.state.selection.sort,
          );
          return;
        }
        throw err;
      }
      this.state.selection.selectedCandidate = candidateId;
      this.state.screen = "plan";
      await this.loadPlan(this.state.plan.cooks);
    });
  }

  async setCooks(cooks: number): Promise<void> {
    await this.turn(() => this.loadPlan(cooks));
  }

  private async loadPlan(cooks: number): Promise<void> {
    this.state.plan.cooks = cooks;
    this.state.plan.loadError = null;
    this.planPayload = this.fixtures
      ? (this.fixtures.plans[cooks] ?? null)
      : await this.api.plan(this.state.sessionId!, cooks);
  }

  /** Back navigation is the API's explicit reset. */
  async back(): Promise<void> {
    await this.turn(async () => {
      if (!this.fixtures && this.state.sessionId) {
        await this.api.reset(this.state.sessionId);
      }
      this.candidates = null;
      this.planPayload = null;
      this.state.screen = "problem";
      this.state.selection = defaultSelectionView();
      this.state.plan = defaultPlanView();
    });
  }
}

declare global {
  interface Window {
    MUSE_FIXTURES?: Fixtures;
    MUSE_BASE_URL?: string;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    const api = new MuseApi(window.MUSE_BASE_URL ?? "");
    const app = new App(api, (html) => {
      root.innerHTML = html;
    }, window.MUSE_FIXTURES ?? null);
    root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.matches(".select-button")) {
        void app.choose(target.dataset.id!);
      } else if (target.matches(".sort-key")) {
        void app.resort(target.dataset.sort as SortKey);
      }
    });
    root.addEventListener("change", (event) => {
      const target = event.target as HTMLInputElement;
      if (target.id === "cooks") void app.setCooks(Number(target.value));
      if (target.id === "key-ingredient") {
        app.state.problem.keyIngredient = target.value || null;
        app.render();
      }
      if (target.id === "dish-type") {
        app.state.problem.dishType = target.value || null;
        app.render();
      }
      if (target.name === "cuisine") {
        const set = new Set(app.state.problem.cuisines);
        target.checked ? set.add(target.value) : set.delete(target.value);
        app.state.problem.cuisines = [...set];
        app.render();
      }
    });
    root.addEventListener("submit", (event) => {
      event.preventDefault();
      void app.submitProblem();
    });
    void app.start();
  }
}
