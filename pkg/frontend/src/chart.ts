// Six-bar sub-score chart on a plain canvas; no charting dependency needed
// for half a dozen horizontal bars.

import { SUBSCORE_KEYS, SubScores, WeightVector } from "./types.js";

const LABELS: Record<string, string> = {
  air: "Aer",
  traffic: "Trafic",
  lifestyle: "Stil de viață",
  education: "Educație",
  metro: "Metrou",
  surface: "Transport",
};

const BAR_COLORS: Record<string, string> = {
  air: "#4c9f70",
  traffic: "#c0504d",
  lifestyle: "#4f81bd",
  education: "#8064a2",
  metro: "#f79646",
  surface: "#2c4d75",
};

export function drawScoreBars(
  canvas: HTMLCanvasElement,
  scores: SubScores,
  weights?: WeightVector,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const width = canvas.width;
  const rowHeight = canvas.height / SUBSCORE_KEYS.length;
  const labelWidth = 110;
  const valueWidth = 46;
  const barSpan = width - labelWidth - valueWidth;

  ctx.clearRect(0, 0, width, canvas.height);
  ctx.font = "12px sans-serif";
  ctx.textBaseline = "middle";

  SUBSCORE_KEYS.forEach((key, row) => {
    const y = row * rowHeight + rowHeight / 2;
    const value = scores[key];

    ctx.fillStyle = "#333";
    ctx.textAlign = "left";
    const weight = weights ? ` ${(weights[key] * 100).toFixed(0)}%` : "";
    ctx.fillText(`${LABELS[key]}${weight}`, 4, y);

    ctx.fillStyle = "#e8e8e8";
    ctx.fillRect(labelWidth, y - 7, barSpan, 14);
    ctx.fillStyle = BAR_COLORS[key];
    ctx.fillRect(labelWidth, y - 7, (barSpan * value) / 100, 14);

    ctx.fillStyle = "#333";
    ctx.textAlign = "right";
    ctx.fillText(value.toFixed(1), width - 4, y);
  });
}
