/**
 * Typed client for the gateway HTTP API. These five calls are the portal's
 * entire surface against the backend; every number the UI shows comes back
 * from one of them.
 */

import {
  DoseResponse,
  GatewayError,
  HistoryResponse,
  PumpCommand,
  SoilValues,
  StateResponse,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body; keep the status text */
  }
  throw new GatewayError(response.status, detail);
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  getState(): Promise<StateResponse> {
    return this.get<StateResponse>("/api/v1/state");
  }

  getHistory(metric: string, limit: number): Promise<HistoryResponse> {
    const params = new URLSearchParams({ metric, limit: String(limit) });
    return this.get<HistoryResponse>(`/api/v1/history?${params}`);
  }

  postReading(metric: string, value: number, tick: number): Promise<unknown> {
    return this.post("/api/v1/readings", { metric, value, tick });
  }

  setPump(command: PumpCommand): Promise<unknown> {
    return this.post("/api/v1/pump", command);
  }

  recommend(crop: string, soil?: SoilValues): Promise<DoseResponse> {
    return this.post<DoseResponse>(
      "/api/v1/recommend",
      soil ? { crop, soil } : { crop },
    );
  }
}
