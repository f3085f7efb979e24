import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { DEFAULT_CONFIG } from "../src/types.js";

interface Seen {
  url: string;
  method?: string;
  headers: Record<string, string>;
  body?: string;
}

function recordingFetch(status = 200, body: unknown = {}) {
  const seen: Seen[] = [];
  const fetchImpl = (url: string, init?: RequestInit) => {
    seen.push({
      url,
      method: init?.method,
      headers: (init?.headers ?? {}) as Record<string, string>,
      body: init?.body as string | undefined,
    });
    return Promise.resolve(new Response(JSON.stringify(body), { status }));
  };
  return { seen, fetchImpl };
}

describe("ApiClient", () => {
  it("posts evaluate bodies with the bearer token", async () => {
    const { seen, fetchImpl } = recordingFetch(200, { aggregate: 84 });
    const api = new ApiClient({ ...DEFAULT_CONFIG, userToken: "alice" }, fetchImpl);
    await api.evaluate({ address: "Parcul Tineretului", radius_m: 1000 });
    expect(seen[0].url).toBe("http://localhost:8000/api/v1/evaluate");
    expect(seen[0].method).toBe("POST");
    expect(seen[0].headers.Authorization).toBe("Bearer alice");
    expect(JSON.parse(seen[0].body!)).toEqual({ address: "Parcul Tineretului", radius_m: 1000 });
  });

  it("maps error bodies onto ApiError", async () => {
    const { fetchImpl } = recordingFetch(422, { error: "GeocodeFailed", detail: "no result" });
    const api = new ApiClient(DEFAULT_CONFIG, fetchImpl);
    await expect(api.evaluate({ address: "x", radius_m: 800 })).rejects.toThrowError(ApiError);
    await api.evaluate({ address: "x", radius_m: 800 }).catch((error: ApiError) => {
      expect(error.status).toBe(422);
      expect(error.label).toBe("GeocodeFailed");
    });
  });

  it("addresses the favourites routes", async () => {
    const { seen, fetchImpl } = recordingFetch(200, { favourites: [] });
    const api = new ApiClient(DEFAULT_CONFIG, fetchImpl);
    await api.listFavourites();
    await api.addFavourite(7);
    await api.removeFavourite(7);
    expect(seen.map((s) => `${s.method} ${s.url.replace(DEFAULT_CONFIG.apiBaseUrl, "")}`))
      .toEqual([
        "GET /api/v1/favourites",
        "POST /api/v1/favourites",
        "DELETE /api/v1/favourites/7",
      ]);
  });

  it("round-trips the profile", async () => {
    const { seen, fetchImpl } = recordingFetch(200, {});
    const api = new ApiClient(DEFAULT_CONFIG, fetchImpl);
    await api.putProfile(
      { air: 0.2, traffic: 0.2, lifestyle: 0.2, education: 0.2, metro: 0.1, surface: 0.1 },
      true,
    );
    const body = JSON.parse(seen[0].body!);
    expect(body.traffic_sensitive).toBe(true);
    expect(body.declared_purpose).toBe("residence");
  });
});
