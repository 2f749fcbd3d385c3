import type {
  CandidatesPayload,
  IngredientsPayload,
  PlanPayload,
  SessionPayload,
  SortKey,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface GenerateOptions {
  seed?: number;
  population_size?: number;
  generations?: number;
  weights?: Record<string, number>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin client over the session API; surfaces error reason codes verbatim. */
export class MuseApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "content-type": "application/json" } : {},
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await res.json();
    if (!res.ok) {
      const code = payload?.error?.code ?? "unknown";
      const message = payload?.error?.message ?? res.statusText;
      throw new ApiError(res.status, code, message);
    }
    return payload as T;
  }

  createSession(): Promise<SessionPayload> {
    return this.request("POST", "/sessions");
  }

  getSession(id: string): Promise<SessionPayload> {
    return this.request("GET", `/sessions/${id}`);
  }

  ingredients(suggestFor?: string): Promise<IngredientsPayload> {
    const query = suggestFor ? `?suggest_for=${encodeURIComponent(suggestFor)}` : "";
    return this.request("GET", `/ingredients${query}`);
  }

  setProblem(
    id: string,
    problem: {
      key_ingredient: string;
      cuisines: string[];
      dish_type: string;
      min_ingredients?: number;
      max_ingredients?: number;
    },
  ): Promise<SessionPayload> {
    return this.request("POST", `/sessions/${id}/problem`, problem);
  }

  generate(id: string, options: GenerateOptions = {}): Promise<SessionPayload> {
    return this.request("POST", `/sessions/${id}/generate`, options);
  }

  candidates(
    id: string,
    sort: SortKey = "composite",
    limit = 10,
  ): Promise<CandidatesPayload> {
    return this.request(
      "GET",
      `/sessions/${id}/candidates?limit=${limit}&sort=${sort}`,
    );
  }

  select(id: string, candidateId: string): Promise<SessionPayload> {
    return this.request("POST", `/sessions/${id}/select`, {
      candidate_id: candidateId,
    });
  }

  plan(id: string, cooks: number): Promise<PlanPayload> {
    return this.request("GET", `/sessions/${id}/plan?cooks=${cooks}`);
  }

  reset(id: string): Promise<SessionPayload> {
    return this.request("POST", `/sessions/${id}/reset`);
  }
}
