// UI session state: the selected target, radius, weights, the latest report.
// Evaluations are superseded, never interleaved: changing any input aborts
// the in-flight request and stale responses are dropped by generation count.

import { ApiClient } from "./api.js";
import {
  EvaluatePayload,
  GeoPoint,
  ScoreReport,
  SubScoreKey,
  WeightVector,
} from "./types.js";
import { DEFAULT_WEIGHTS, applySliderChange } from "./weights.js";

export type Target = { kind: "address"; address: string } | { kind: "point"; point: GeoPoint };

export interface UiState {
  target: Target | null;
  radiusM: number;
  weights: WeightVector; // preview until the server's vector replaces it
  trafficSensitive: boolean;
  report: ScoreReport | null;
  pending: boolean;
  error: string | null;
  favourites: number[];
}

type Listener = (state: UiState) => void;

export class SessionStore {
  private state: UiState = {
    target: null,
    radiusM: 800,
    weights: { ...DEFAULT_WEIGHTS },
    trafficSensitive: false,
    report: null,
    pending: false,
    error: null,
    favourites: [],
  };
  private listeners: Listener[] = [];
  private generation = 0;
  private controller: AbortController | null = null;

  constructor(
    private api: ApiClient,
    private makeController: () => AbortController = () => new AbortController(),
  ) {}

  get current(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private patch(partial: Partial<UiState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  selectAddress(address: string): Promise<void> {
    this.patch({ target: { kind: "address", address } });
    return this.evaluate();
  }

  selectPoint(point: GeoPoint): Promise<void> {
    this.patch({ target: { kind: "point", point } });
    return this.evaluate();
  }

  setRadius(radiusM: number): Promise<void> {
    this.patch({ radiusM });
    return this.evaluate();
  }

  /** Optimistic preview immediately; the re-evaluation replaces it with the
   * server-normalized vector carried on the report. */
  moveSlider(key: SubScoreKey, value: number): Promise<void> {
    this.patch({ weights: applySliderChange(this.state.weights, key, value) });
    return this.evaluate();
  }

  toggleTrafficSensitive(on: boolean): Promise<void> {
    this.patch({ trafficSensitive: on });
    return this.evaluate();
  }

  async evaluate(): Promise<void> {
    const target = this.state.target;
    if (!target) return;

    this.controller?.abort();
    this.controller = this.makeController();
    const generation = ++this.generation;
    this.patch({ pending: true, error: null });

    const payload: EvaluatePayload = {
      radius_m: this.state.radiusM,
      profile: {
        weights: this.state.weights,
        traffic_sensitive: this.state.trafficSensitive,
      },
    };
    if (target.kind === "address") payload.address = target.address;
    else payload.point = target.point;

    try {
      const report = await this.api.evaluate(payload, this.controller.signal);
      if (generation !== this.generation) return; // superseded meanwhile
      // the server's normalized weights are authoritative for the sliders
      this.patch({ report, weights: { ...report.weights }, pending: false });
    } catch (error) {
      if (generation !== this.generation) return;
      if ((error as Error).name === "AbortError") return;
      this.patch({ pending: false, error: String(error), report: this.state.report });
    }
  }

  async refreshFavourites(): Promise<void> {
    const { favourites } = await this.api.listFavourites();
    this.patch({ favourites: favourites.map((f) => f.location_id) });
  }

  async saveFavourite(): Promise<void> {
    const report = this.state.report;
    if (!report) return;
    await this.api.addFavourite(report.location_id);
    await this.refreshFavourites();
  }

  async removeFavourite(locationId: number): Promise<void> {
    await this.api.removeFavourite(locationId);
    await this.refreshFavourites();
  }
}
