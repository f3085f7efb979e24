// Thin typed client over the scoring service's HTTP surface. Identity is a
// bearer token; no cookies, so the CSRF guard does not apply to this client.

import {
  EvaluatePayload,
  FavouriteEntry,
  ScoreReport,
  UiConfig,
  WeightVector,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public label: string,
    detail: string,
  ) {
    super(`${label}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private config: UiConfig,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.config.apiBaseUrl}${path}`, {
      method,
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${this.config.userToken}`,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    if (!response.ok) {
      let label = `HTTP ${response.status}`;
      let detail = response.statusText;
      try {
        const parsed = await response.json();
        label = parsed.error ?? label;
        detail = parsed.detail ?? detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, label, detail);
    }
    return response.json() as Promise<T>;
  }

  evaluate(payload: EvaluatePayload, signal?: AbortSignal): Promise<ScoreReport> {
    return this.request("POST", "/api/v1/evaluate", payload, signal);
  }

  scoreHistory(locationId: number): Promise<{ scores: unknown[] }> {
    return this.request("GET", `/api/v1/locations/${locationId}/scores`);
  }

  getProfile(): Promise<{ weights: WeightVector; traffic_sensitive: boolean }> {
    return this.request("GET", "/api/v1/profile");
  }

  putProfile(weights: WeightVector, trafficSensitive: boolean, purpose = "residence") {
    return this.request("PUT", "/api/v1/profile", {
      weights,
      traffic_sensitive: trafficSensitive,
      declared_purpose: purpose,
    });
  }

  listFavourites(): Promise<{ favourites: FavouriteEntry[] }> {
    return this.request("GET", "/api/v1/favourites");
  }

  addFavourite(locationId: number) {
    return this.request("POST", "/api/v1/favourites", { location_id: locationId });
  }

  removeFavourite(locationId: number) {
    return this.request("DELETE", `/api/v1/favourites/${locationId}`);
  }

  stats(): Promise<unknown> {
    return this.request("GET", "/api/v1/stats");
  }

  health(): Promise<{ status: string; breakers: Record<string, string> }> {
    return this.request("GET", "/healthz");
  }
}
