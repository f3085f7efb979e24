// Wire types mirroring the scoring API's JSON bodies.

export const SUBSCORE_KEYS = [
  "air",
  "traffic",
  "lifestyle",
  "education",
  "metro",
  "surface",
] as const;

export type SubScoreKey = (typeof SUBSCORE_KEYS)[number];

export type SubScores = Record<SubScoreKey, number>;
export type WeightVector = Record<SubScoreKey, number>;

export interface GeoPoint {
  lat: number;
  lon: number;
}

export interface ResolvedAddress {
  point: GeoPoint;
  display_name: string;
  hierarchy: Record<string, string>;
  source_query: string;
}

export interface FacilitySummary {
  counts: Record<string, number>;
  entropy_nats: number;
  routes: string[];
  nearest_metro_m: number | null;
  schools: [string, number][];
}

export interface Explanation {
  text: string;
  word_count: number;
  source: "remote" | "template";
  grounded: boolean;
  generated_at: string;
}

export interface ScoreReport {
  location: ResolvedAddress;
  location_id: number;
  sub_scores: SubScores;
  aggregate: number;
  weights: WeightVector;
  profile_hash: string;
  degraded: string[];
  facilities: FacilitySummary;
  explanation: Explanation;
  timings_ms: Record<string, number>;
  feed_freshness: Record<string, string>;
}

export interface EvaluatePayload {
  address?: string;
  point?: GeoPoint;
  radius_m: number;
  profile?: { weights: WeightVector; traffic_sensitive: boolean };
  locale?: string;
}

export interface FavouriteEntry {
  location_id: number;
  saved_at: string;
}

export interface UiConfig {
  apiBaseUrl: string;
  tileUrl: string;
  userToken: string;
}

export const DEFAULT_CONFIG: UiConfig = {
  apiBaseUrl: "http://localhost:8000",
  tileUrl: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
  userToken: "demo-user",
};
