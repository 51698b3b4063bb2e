// Score-table builders: side-by-side option columns, straight from the API
// matrices. Pure string builders, testable without a DOM.

import type { MatrixPayload, RankingPayload } from "./api.js";

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

export function scoreTable(
  matrix: MatrixPayload,
  weights: Record<string, number>,
  totals: RankingPayload | null,
): string {
  const header = matrix.options.map((oid) => `<th>option ${oid}</th>`).join("");
  const rows = matrix.criteria
    .map((criterion, j) => {
      const cells = matrix.options
        .map((_, i) => `<td>${fmt(matrix.values[i]![j]!)}</td>`)
        .join("");
      const weight = weights[criterion.id];
      const tag = criterion.simulation_derived ? " (simulated)" : "";
      return `<tr><td>${criterion.label}${tag}</td><td>${weight === undefined ? "" : fmt(weight)}</td>${cells}</tr>`;
    })
    .join("");
  const totalRow = totals
    ? `<tr class="total"><td>Total</td><td></td>${matrix.options
        .map((oid) => `<td>${totals.totals[String(oid)]!.toFixed(2)}</td>`)
        .join("")}</tr>`
    : "";
  return `<table><thead><tr><th>criterion</th><th>weight</th>${header}</tr></thead><tbody>${rows}${totalRow}</tbody></table>`;
}

export function rankingLine(ranking: RankingPayload): string {
  const parts = ranking.order.map((oid, rank) => {
    const total = ranking.totals[String(oid)]!;
    const shown = ranking.method === "cba" ? total.toFixed(0) : total.toFixed(2);
    return `${rank + 1}. option ${oid} (${shown})`;
  });
  return parts.join("   ");
}
