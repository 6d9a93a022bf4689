/**
 * DOM rendering. Reads the model snapshot and rebuilds the panels; all
 * numbers are printed exactly as the API returned them (String(n)), never
 * recomputed or reformatted client-side.
 */

import { DistanceReport } from "./api.js";
import { AppModel } from "./model.js";
import { renderScatterSvg } from "./scatter.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function distanceTableHtml(report: DistanceReport, title: string): string {
  const head = report.words
    .map((w) => `<th scope="col">${escapeHtml(w)}</th>`)
    .join("");
  const rows = report.words
    .map((word, i) => {
      const cells = report.euclidean[i]
        .map((value) => `<td>${String(value)}</td>`)
        .join("");
      return `<tr><th scope="row">${escapeHtml(word)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<h3>${escapeHtml(title)}</h3>` +
    `<table class="matrix"><thead><tr><th></th>${head}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

function escapeHtml(text: string): string {
  const div = document.createElement("div");
  div.textContent = text;
  return div.innerHTML;
}

export function bindView(model: AppModel): () => void {
  const queryInput = el<HTMLInputElement>("query");
  const kInput = el<HTMLInputElement>("k");
  const searchButton = el<HTMLButtonElement>("search-btn");
  const hitsBox = el<HTMLDivElement>("hits");
  const selectionBox = el<HTMLDivElement>("selection");
  const modeSet = el<HTMLInputElement>("mode-set");
  const modeTarget = el<HTMLInputElement>("mode-target");
  const refitButton = el<HTMLButtonElement>("refit-btn");
  const clearButton = el<HTMLButtonElement>("clear-btn");
  const undoButton = el<HTMLButtonElement>("undo-btn");
  const banner = el<HTMLDivElement>("banner");
  const errorBox = el<HTMLDivElement>("error");
  const resultBox = el<HTMLDivElement>("refit-result");
  const distancesBox = el<HTMLDivElement>("distances");
  const scatterBox = el<HTMLDivElement>("scatter");
  const journalBox = el<HTMLTableSectionElement>("journal-rows");
  const metaBox = el<HTMLSpanElement>("meta");

  searchButton.addEventListener("click", () => {
    const query = queryInput.value.trim();
    if (query) void model.search(query, Number(kInput.value) || 10);
  });
  queryInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") searchButton.click();
  });
  modeSet.addEventListener("change", () => model.setMode("set"));
  modeTarget.addEventListener("change", () => model.setMode("target"));
  refitButton.addEventListener("click", () => void model.refit());
  clearButton.addEventListener("click", () => model.clearSelection());
  undoButton.addEventListener("click", () => void model.undo());
  el<HTMLButtonElement>("refresh-btn").addEventListener("click", () =>
    void model.refreshMeta().then(() => model.refreshDistances()),
  );

  return function render(): void {
    const state = model.snapshot;

    metaBox.textContent =
      state.version === null
        ? "connecting…"
        : `version ${state.version} · ${state.vocabSize} words · dim ${state.dim}`;

    banner.hidden = !state.staleVersion;
    errorBox.hidden = state.error === null;
    errorBox.textContent = state.error ?? "";

    hitsBox.innerHTML = "";
    state.queryHits.forEach((hit) => {
      const row = document.createElement("label");
      row.className = "hit";
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = state.selection.includes(hit.word);
      box.addEventListener("change", () => model.toggleWord(hit.word));
      row.appendChild(box);
      const text = document.createElement("span");
      text.textContent = `${hit.word} (${String(hit.score)})`;
      row.appendChild(text);
      hitsBox.appendChild(row);
    });

    selectionBox.innerHTML = "";
    state.selection.forEach((word) => {
      const chip = document.createElement("span");
      chip.className = "chip" + (state.target === word ? " target" : "");
      chip.textContent = word;
      chip.title = "click to make this the target";
      chip.addEventListener("click", () => model.setTarget(word));
      selectionBox.appendChild(chip);
    });

    modeSet.checked = state.mode === "set";
    modeTarget.checked = state.mode === "target";
    refitButton.disabled = !model.canRefit;
    undoButton.disabled = state.busy;

    if (state.lastRefit) {
      const refit = state.lastRefit;
      const trace = refit.objective_trace.map(String).join(" → ");
      const moved = refit.members
        .map((w) => `<li>${escapeHtml(w)}: ${String(refit.displacement[w])}</li>`)
        .join("");
      resultBox.innerHTML =
        `<p>refit <strong>${escapeHtml(refit.mode)}</strong>: v${refit.base_version} → ` +
        `v${refit.version}, ${refit.sweeps_executed} sweep(s)</p>` +
        `<p class="trace">objective: ${trace}</p>` +
        `<ul class="moves">${moved}</ul>` +
        distanceTableHtml(refit.distance_before, "distances before") +
        distanceTableHtml(refit.distance_after, "distances after");
    } else {
      resultBox.innerHTML = "<p class=\"hint\">no refit yet</p>";
    }

    distancesBox.innerHTML = state.distanceTable
      ? distanceTableHtml(state.distanceTable, "selection distances (current version)")
      : "";

    scatterBox.innerHTML = state.scatter ? renderScatterSvg(state.scatter) : "";

    journalBox.innerHTML = "";
    [...state.journal].reverse().forEach((record) => {
      const tr = document.createElement("tr");
      tr.innerHTML =
        `<td>${record.id}</td><td>${escapeHtml(record.kind)}</td>` +
        `<td>v${record.base_version} → v${record.result_version}</td>` +
        `<td class="ts">${escapeHtml(record.ts)}</td>`;
      journalBox.appendChild(tr);
    });
  };
}
