// Typed client for the what-if service. The UI never computes a score
// itself: every displayed number is a field of one of these responses.

export interface Provenance {
  config_hash: string;
  master_seed: number;
  tool_version: string;
  simulation_source: string;
}

export interface RankingPayload {
  totals: Record<string, number>;
  order: number[];
  method: string;
}

export interface ScoreResponse {
  dynamic: RankingPayload;
  static: RankingPayload;
  cba: RankingPayload;
  provenance: Provenance;
}

export interface SensitivityReport {
  variant: string;
  iterations: number;
  seed: number;
  top_rank_frequency: Record<string, number>;
  rank_distribution: Record<string, number[]>;
}

export interface SensitivityResponse {
  report: SensitivityReport;
  provenance: Provenance;
}

export interface CriterionInfo {
  id: string;
  label: string;
  kind: string;
  simulation_derived: boolean;
}

export interface MatrixPayload {
  options: number[];
  criteria: CriterionInfo[];
  values: number[][];
}

export interface ArtifactResponse {
  provenance: Provenance;
  scores: { raw: MatrixPayload; normalized: MatrixPayload; weights: Record<string, number> };
  rankings: Record<string, RankingPayload>;
  config: { criteria: { weights: Record<string, number> } } & Record<string, unknown>;
}

export interface SensitivityRequest {
  variant: string;
  iterations?: number;
  seed?: number;
  weights?: Record<string, number>;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      detail = JSON.stringify(body.detail ?? body);
    } catch {
      // non-JSON error body; keep the status
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export function createClient(baseUrl = "", fetchImpl: FetchLike = fetch) {
  const post = (path: string, body: unknown, signal?: AbortSignal) =>
    fetchImpl(`${baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });

  return {
    artifact: (): Promise<ArtifactResponse> =>
      fetchImpl(`${baseUrl}/api/artifact`).then((r) => asJson<ArtifactResponse>(r)),

    score: (weights: Record<string, number>, signal?: AbortSignal): Promise<ScoreResponse> =>
      post("/api/score", { weights }, signal).then((r) => asJson<ScoreResponse>(r)),

    sensitivity: (request: SensitivityRequest, signal?: AbortSignal): Promise<SensitivityResponse> =>
      post("/api/sensitivity", request, signal).then((r) => asJson<SensitivityResponse>(r)),
  };
}

export type Client = ReturnType<typeof createClient>;
