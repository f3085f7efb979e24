// Bootstraps the page: map, search, radius, sliders, score card, favourites.

import { ApiClient } from "./api.js";
import { drawScoreBars } from "./chart.js";
import { SlippyMap } from "./map.js";
import { SessionStore, UiState } from "./state.js";
import { DEFAULT_CONFIG, SUBSCORE_KEYS, SubScoreKey, UiConfig } from "./types.js";
import { weightsSumPercent } from "./weights.js";

const SLIDER_LABELS: Record<SubScoreKey, string> = {
  air: "Aer",
  traffic: "Trafic",
  lifestyle: "Stil de viață",
  education: "Educație",
  metro: "Metrou",
  surface: "Transport de suprafață",
};

async function loadConfig(): Promise<UiConfig> {
  try {
    const response = await fetch("./config.json");
    if (!response.ok) return DEFAULT_CONFIG;
    return { ...DEFAULT_CONFIG, ...(await response.json()) };
  } catch {
    return DEFAULT_CONFIG;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config);
  const store = new SessionStore(api);

  const map = new SlippyMap(el("map"), config.tileUrl);
  map.onClick = (point) => void store.selectPoint(point);

  // -- search / radius ------------------------------------------------------

  const searchForm = el<HTMLFormElement>("search-form");
  const searchInput = el<HTMLInputElement>("search-input");
  searchForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const query = searchInput.value.trim();
    if (query) void store.selectAddress(query);
  });

  const radiusInput = el<HTMLInputElement>("radius");
  const radiusLabel = el("radius-label");
  radiusInput.addEventListener("change", () => {
    radiusLabel.textContent = `${radiusInput.value} m`;
    void store.setRadius(Number(radiusInput.value));
  });

  // -- preference sliders ---------------------------------------------------

  const slidersBox = el("sliders");
  const sliders = {} as Record<SubScoreKey, HTMLInputElement>;
  const sliderValues = {} as Record<SubScoreKey, HTMLElement>;
  for (const key of SUBSCORE_KEYS) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const name = document.createElement("span");
    name.textContent = SLIDER_LABELS[key];
    const input = document.createElement("input");
    input.type = "range";
    input.min = "5";
    input.max = "40";
    input.step = "1";
    const value = document.createElement("span");
    value.className = "slider-value";
    input.addEventListener("input", () => {
      void store.moveSlider(key, Number(input.value) / 100);
    });
    row.append(name, input, value);
    slidersBox.appendChild(row);
    sliders[key] = input;
    sliderValues[key] = value;
  }

  const sensitiveToggle = el<HTMLInputElement>("traffic-sensitive");
  sensitiveToggle.addEventListener("change", () => {
    void store.toggleTrafficSensitive(sensitiveToggle.checked);
  });

  // -- favourites ------------------------------------------------------------

  el("save-favourite").addEventListener("click", () => {
    void store.saveFavourite().catch(() => undefined); // duplicate: ignore
  });

  // -- rendering --------------------------------------------------------------

  const card = el("score-card");
  const statusLine = el("status");
  const canvas = el<HTMLCanvasElement>("score-bars");

  function render(state: UiState): void {
    statusLine.textContent = state.pending
      ? "se evaluează..."
      : state.error ?? "";

    for (const key of SUBSCORE_KEYS) {
      const percent = state.weights[key] * 100;
      sliders[key].value = String(Math.round(percent));
      sliderValues[key].textContent = `${percent.toFixed(1)} %`;
    }
    el("weights-sum").textContent = `Σ ${weightsSumPercent(state.weights).toFixed(1)} %`;

    const favBox = el("favourites");
    favBox.textContent = state.favourites.length
      ? `Favorite: ${state.favourites.join(", ")}`
      : "Favorite: —";

    const report = state.report;
    if (!report) {
      card.classList.add("empty");
      return;
    }
    card.classList.remove("empty");
    el("place-name").textContent = report.location.display_name;
    // the aggregate badge always shows the API's own value
    el("aggregate").textContent = String(report.aggregate);
    el("narrative").textContent = report.explanation.text;
    el("explanation-source").textContent =
      report.explanation.source === "template" ? "(descriere locală)" : "";
    el("degraded").textContent = report.degraded.length
      ? `Date incomplete: ${report.degraded.join(", ")}`
      : "";
    const tier = Object.entries(report.feed_freshness)
      .map(([feed, freshness]) => `${feed}:${freshness}`)
      .join(" ");
    el("timing-badge").textContent =
      `${Math.round(report.timings_ms.total_ms)} ms ${tier}`;
    drawScoreBars(canvas, report.sub_scores, report.weights);
    map.dropMarker(report.location.point);
  }

  store.subscribe(render);
  render(store.current);
  void store.refreshFavourites().catch(() => undefined);
}

boot();
