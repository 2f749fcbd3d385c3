/** Payload shapes of the muse HTTP API. The UI never derives metrics itself:
 * every number it shows comes straight from one of these fields. */

export interface IngredientChoice {
  id: string;
  name: string;
  category: string;
  corpus_count: number;
  commonness: string;
}

export interface IngredientsPayload {
  engine_version: string;
  dish_types: string[];
  cuisines: string[];
  ingredients: IngredientChoice[];
}

export interface SessionInfo {
  id: string;
  state: string;
  problem: {
    key_ingredient: string;
    cuisines: string[];
    dish_type: string;
    min_ingredients: number;
    max_ingredients: number;
  } | null;
  selection: string | null;
  seed: number | null;
  candidate_count: number;
  created: number;
  updated: number;
}

export interface SessionPayload {
  engine_version: string;
  session: SessionInfo;
}

export interface CandidateReasoning {
  parent_recipes: string[];
  mutated_ingredients: string[][];
}

export interface Candidate {
  id: string;
  ingredients: string[];
  surprise: number;
  pleasantness: number;
  pairing: number;
  composite: number;
  rank: number;
  reasoning: CandidateReasoning;
}

export interface CandidatesPayload {
  engine_version: string;
  seed: number | null;
  sort: string;
  total: number;
  candidates: Candidate[];
}

export interface PlanNode {
  id: string;
  kind: "ingredient" | "action";
  action: string | null;
  tool: string | null;
  duration: number;
}

export interface PlanGraph {
  nodes: PlanNode[];
  edges: [string, string][];
  assignment: Record<string, number>;
  start_times: Record<string, number>;
  makespan: number;
}

export interface Proportion {
  ingredient_id: string;
  qty: string;
  unit: string | null;
}

export interface PlanPayload {
  engine_version: string;
  seed: number | null;
  cooks: number;
  proportions: Proportion[];
  plan: PlanGraph;
}

export interface ApiErrorBody {
  engine_version: string;
  error: { code: string; message: string };
}

export const METRICS = ["surprise", "pleasantness", "pairing"] as const;
export type Metric = (typeof METRICS)[number];
export type SortKey = Metric | "composite";
