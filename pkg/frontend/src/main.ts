import { fetchDefaults, fetchThread, postQuery } from "./api.js";
import {
  BUILTIN_DEFAULTS,
  RequestSequencer,
  clampThreshold,
  formToRequest,
  initialFormState,
} from "./state.js";
import type { QueryFormState } from "./state.js";
import { clearNotices, renderFormError, renderMatches, renderRetryBanner, renderThread } from "./render.js";
import type { RankingMode } from "./types.js";

const API_BASE =
  (window as { __FORUMQA_API__?: string }).__FORUMQA_API__ ?? "http://127.0.0.1:8080";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing #${id} in the page skeleton`);
  }
  return el as T;
}

async function init(): Promise<void> {
  const form = byId<HTMLFormElement>("query-form");
  const titleInput = byId<HTMLInputElement>("title");
  const contentInput = byId<HTMLTextAreaElement>("content");
  const submitButton = byId<HTMLButtonElement>("submit");
  const kInput = byId<HTMLInputElement>("opt-k");
  const thresholdInput = byId<HTMLInputElement>("opt-threshold");
  const thresholdValue = byId<HTMLElement>("opt-threshold-value");
  const weightP = byId<HTMLInputElement>("opt-weight-p");
  const weightQ = byId<HTMLInputElement>("opt-weight-q");
  const weightR = byId<HTMLInputElement>("opt-weight-r");
  const modeSelect = byId<HTMLSelectElement>("opt-mode");
  const cascadeInput = byId<HTMLInputElement>("opt-cascade-m");
  const results = byId<HTMLElement>("results");
  const threadPanel = byId<HTMLElement>("thread-panel");
  const bannerArea = byId<HTMLElement>("banner");
  const errorArea = byId<HTMLElement>("form-error");
  const timing = byId<HTMLElement>("timing");

  const defaults = (await fetchDefaults(API_BASE)) ?? BUILTIN_DEFAULTS;
  const state: QueryFormState = initialFormState(defaults);

  kInput.value = String(state.k);
  thresholdInput.value = String(state.threshold);
  thresholdValue.textContent = state.threshold.toFixed(2);
  weightP.value = String(state.weights.p);
  weightQ.value = String(state.weights.q);
  weightR.value = String(state.weights.r);
  modeSelect.value = state.mode;
  cascadeInput.value = state.cascadeM === null ? "" : String(state.cascadeM);

  thresholdInput.addEventListener("input", () => {
    thresholdValue.textContent = clampThreshold(Number(thresholdInput.value)).toFixed(2);
  });

  const sequencer = new RequestSequencer();

  const readForm = () => {
    state.title = titleInput.value;
    state.content = contentInput.value;
    state.k = Math.max(1, Math.trunc(Number(kInput.value) || defaults.k));
    state.threshold = clampThreshold(Number(thresholdInput.value));
    state.weights = {
      p: Number(weightP.value),
      q: Number(weightQ.value),
      r: Number(weightR.value),
    };
    state.mode = modeSelect.value as RankingMode;
    const cascadeRaw = cascadeInput.value.trim();
    state.cascadeM = cascadeRaw === "" ? null : Math.max(1, Math.trunc(Number(cascadeRaw)));
  };

  const setInFlight = (value: boolean) => {
    state.inFlight = value;
    submitButton.disabled = value;
    submitButton.textContent = value ? "Querying…" : "Query";
  };

  const showThread = async (queryId: string) => {
    renderThread(threadPanel, await fetchThread(API_BASE, queryId));
  };

  const submit = async () => {
    if (state.inFlight) {
      return;
    }
    readForm();
    clearNotices(bannerArea, errorArea, threadPanel);
    timing.textContent = "";
    setInFlight(true);
    const token = sequencer.begin();
    const outcome = await postQuery(API_BASE, formToRequest(state));
    setInFlight(false);
    if (!sequencer.isCurrent(token)) {
      return; // a newer query owns the screen now
    }
    switch (outcome.kind) {
      case "ok":
        renderMatches(results, outcome.response.matches, showThread);
        timing.textContent = `${outcome.response.elapsed_ms.toFixed(1)} ms`;
        break;
      case "rejected":
        renderFormError(errorArea, outcome.detail);
        break;
      case "unreachable":
        renderRetryBanner(bannerArea, () => void submit());
        break;
    }
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });
}

document.addEventListener("DOMContentLoaded", () => {
  void init();
});
