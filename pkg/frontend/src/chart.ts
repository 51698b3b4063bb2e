// Bar-chart geometry for top-rank frequencies. Pure so it can be tested
// without a DOM; rendering is a straight translation of these bars.

import type { SensitivityReport } from "./api.js";

export interface Bar {
  optionId: number;
  label: string;
  percent: number; // exactly the API frequency
  widthPct: number; // drawn width, 0-100
}

export function frequencyBars(report: SensitivityReport): Bar[] {
  return Object.keys(report.top_rank_frequency)
    .map((key) => Number(key))
    .sort((a, b) => a - b)
    .map((optionId) => {
      const percent = report.top_rank_frequency[String(optionId)]!;
      return {
        optionId,
        label: `option ${optionId}`,
        percent,
        widthPct: Math.max(0, Math.min(100, percent)),
      };
    });
}

export function renderBars(bars: Bar[]): string {
  if (bars.length === 0) return "<p>no sensitivity run yet</p>";
  const rows = bars
    .map(
      (b) => `
      <div class="bar-row">
        <span class="bar-label">${b.label}</span>
        <div class="bar-track"><div class="bar-fill" style="width:${b.widthPct}%"></div></div>
        <span class="bar-value">${b.percent.toFixed(1)}%</span>
      </div>`,
    )
    .join("");
  return `<div class="bar-chart">${rows}</div>`;
}
