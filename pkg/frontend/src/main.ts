// DOM wiring. All analysis numbers come from the API; this file only moves
// them between requests and the page. In-flight requests are aborted when a
// newer user action supersedes them (last write wins).

import { createClient, type ArtifactResponse } from "./api.js";
import { frequencyBars, renderBars } from "./chart.js";
import { rankingLine, scoreTable } from "./tables.js";
import {
  adjustWeight,
  applyError,
  applyScore,
  applySensitivity,
  initialState,
  resetWeights,
  selectRanking,
  weightSum,
  type Method,
  type ViewState,
} from "./state.js";

const client = createClient("");

let state: ViewState;
let artifact: ArtifactResponse;
let scoreAbort: AbortController | null = null;
let sensitivityAbort: AbortController | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderError() {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = state.error ?? "";
  banner.style.display = state.error ? "block" : "none";
}

function renderProvenance() {
  el<HTMLSpanElement>("provenance").textContent = state.provenanceHash
    ? `run ${state.provenanceHash}`
    : "";
}

function renderWeights() {
  for (const [cid, value] of Object.entries(state.weights)) {
    const slider = document.getElementById(`w-${cid}`) as HTMLInputElement | null;
    const label = document.getElementById(`wv-${cid}`);
    if (slider) slider.value = String(value);
    if (label) label.textContent = value.toFixed(3);
  }
  el<HTMLSpanElement>("weight-sum").textContent = weightSum(state.weights).toFixed(3);
}

function renderRanking() {
  const ranking = selectRanking(state);
  el<HTMLDivElement>("ranking").textContent = ranking
    ? rankingLine(ranking)
    : "scoring...";
  const normalized = artifact.scores.normalized;
  el<HTMLDivElement>("score-table").innerHTML = scoreTable(
    normalized,
    state.weights,
    state.method === "dynamicMcda" ? (state.lastScore?.dynamic ?? null) : null,
  );
}

function renderSensitivity() {
  const report = state.lastSensitivity;
  el<HTMLDivElement>("sensitivity-chart").innerHTML = report
    ? renderBars(frequencyBars(report))
    : renderBars([]);
  el<HTMLSpanElement>("sensitivity-meta").textContent = report
    ? `${report.variant}, ${report.iterations} iterations, seed ${report.seed}`
    : "";
}

function renderAll() {
  renderWeights();
  renderRanking();
  renderSensitivity();
  renderProvenance();
  renderError();
}

async function requestScore() {
  scoreAbort?.abort();
  scoreAbort = new AbortController();
  try {
    const response = await client.score(state.weights, scoreAbort.signal);
    state = applyScore(state, response);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    state = applyError(state, `scoring failed: ${(err as Error).message}`);
  }
  renderAll();
}

async function requestSensitivity() {
  sensitivityAbort?.abort();
  sensitivityAbort = new AbortController();
  const variant = el<HTMLSelectElement>("variant").value;
  const iterations = Number(el<HTMLInputElement>("iterations").value) || 10000;
  el<HTMLSpanElement>("sensitivity-meta").textContent = "running...";
  try {
    const response = await client.sensitivity(
      { variant, iterations, weights: state.weights },
      sensitivityAbort.signal,
    );
    state = applySensitivity(state, response.report, response.provenance);
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    state = applyError(state, `sensitivity failed: ${(err as Error).message}`);
  }
  renderAll();
}

function buildSliders() {
  const host = el<HTMLDivElement>("sliders");
  host.innerHTML = "";
  for (const criterion of artifact.scores.normalized.criteria) {
    const row = document.createElement("div");
    row.className = "slider-row";
    row.innerHTML = `
      <label for="w-${criterion.id}">${criterion.label}</label>
      <input type="range" id="w-${criterion.id}" min="0" max="1" step="0.005">
      <span id="wv-${criterion.id}" class="weight-value"></span>`;
    host.appendChild(row);
    const slider = row.querySelector("input")!;
    slider.addEventListener("input", () => {
      state = { ...state, weights: adjustWeight(state.weights, criterion.id, Number(slider.value)) };
      renderWeights();
      void requestScore();
    });
  }
}

function wireControls() {
  el<HTMLButtonElement>("reset").addEventListener("click", () => {
    state = resetWeights(state);
    renderWeights();
    void requestScore();
  });
  el<HTMLButtonElement>("run-sensitivity").addEventListener("click", () => {
    void requestSensitivity();
  });
  for (const method of ["cba", "staticMcda", "dynamicMcda"] as Method[]) {
    el<HTMLInputElement>(`method-${method}`).addEventListener("change", () => {
      state = { ...state, method };
      renderRanking();
    });
  }
}

async function boot() {
  artifact = await client.artifact();
  state = initialState(artifact.config.criteria.weights);
  state = { ...state, provenanceHash: artifact.provenance.config_hash };
  buildSliders();
  wireControls();
  renderAll();
  await requestScore();
}

void boot();
