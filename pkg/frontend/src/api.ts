/**
 * Typed client for the workbench HTTP API (/api/v1).
 *
 * Every method resolves to the parsed JSON payload exactly as the server
 * sent it; non-2xx responses reject with an ApiError carrying the server's
 * error code so callers can branch on version conflicts, missing words, etc.
 */

export interface Hit {
  word: string;
  score: number;
}

export interface SearchResponse {
  query: string;
  version: number;
  hits: Hit[];
}

export interface DistanceReport {
  words: string[];
  euclidean: number[][];
  cosine: number[][];
}

export interface RefitResponse {
  version: number;
  base_version: number;
  mode: string;
  members: string[];
  sweeps_executed: number;
  converged: boolean;
  objective_trace: number[];
  displacement: Record<string, number>;
  distance_before: DistanceReport;
  distance_after: DistanceReport;
}

export interface ProjectResponse {
  words: string[];
  coords: Array<[number, number]>;
  version: number;
  baseline_coords?: Array<[number, number]>;
  baseline_version?: number;
}

export interface JournalRecord {
  id: number;
  ts: string;
  kind: "search" | "refit" | "snapshot" | "undo";
  base_version: number;
  result_version: number;
  payload: Record<string, unknown>;
}

export interface MetaResponse {
  version: number;
  vocab_size: number;
  dim: number;
}

export interface RefitRequest {
  mode: "target" | "set";
  words: string[];
  target?: string;
  base_version: number;
  params?: {
    max_sweeps?: number;
    tolerance?: number;
    alpha?: number;
    beta_scheme?: "inverse-degree" | "uniform";
    beta?: number;
  };
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
    readonly detail?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const code = body?.code ?? "internal";
      const message = body?.message ?? `HTTP ${response.status}`;
      throw new ApiError(code, message, response.status, body?.detail);
    }
    return body as T;
  }

  search(query: string, k: number): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, k: String(k) });
    return this.request(`/api/v1/search?${params}`);
  }

  refit(body: RefitRequest): Promise<RefitResponse> {
    return this.request("/api/v1/refit", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  undo(): Promise<{ version: number }> {
    return this.request("/api/v1/undo", { method: "POST" });
  }

  journal(): Promise<{ records: JournalRecord[] }> {
    return this.request("/api/v1/journal");
  }

  project(
    words: string[],
    version?: number,
    baselineVersion?: number,
  ): Promise<ProjectResponse> {
    const body: Record<string, unknown> = { words };
    if (version !== undefined) body.version = version;
    if (baselineVersion !== undefined) body.baseline_version = baselineVersion;
    return this.request("/api/v1/project", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  distances(words: string[], version?: number): Promise<DistanceReport> {
    const params = new URLSearchParams({ words: words.join(",") });
    if (version !== undefined) params.set("version", String(version));
    return this.request(`/api/v1/distances?${params}`);
  }

  meta(): Promise<MetaResponse> {
    return this.request("/api/v1/meta");
  }
}
