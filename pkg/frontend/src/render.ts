import type { Match, ThreadPost } from "./types.js";
import type { ThreadOutcome } from "./api.js";

export function formatPercent(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}

function scoreBar(label: string, value: number): HTMLElement {
  const row = document.createElement("div");
  row.className = "score-row";

  const name = document.createElement("span");
  name.className = "score-label";
  name.textContent = label;

  const track = document.createElement("div");
  track.className = "score-track";
  const fill = document.createElement("div");
  fill.className = "score-fill";
  const clamped = Math.min(1, Math.max(0, value));
  fill.style.width = `${(clamped * 100).toFixed(1)}%`;
  fill.dataset.value = value.toFixed(4);
  track.appendChild(fill);

  row.appendChild(name);
  row.appendChild(track);
  return row;
}

function matchCard(match: Match, onThread: (queryId: string) => void): HTMLElement {
  const card = document.createElement("article");
  card.className = "match-card";
  card.dataset.queryId = match.query_id;

  const header = document.createElement("header");
  const rank = document.createElement("span");
  rank.className = "match-rank";
  rank.textContent = `#${match.rank}`;
  const title = document.createElement("h3");
  title.className = "match-title";
  title.textContent = match.title;
  const overall = document.createElement("span");
  overall.className = "match-overall";
  overall.textContent = formatPercent(match.scores.n_sim);
  header.appendChild(rank);
  header.appendChild(title);
  header.appendChild(overall);
  card.appendChild(header);

  const bars = document.createElement("div");
  bars.className = "match-bars";
  bars.appendChild(scoreBar("title", match.scores.t_sim));
  bars.appendChild(scoreBar("cross", match.scores.h_sim));
  bars.appendChild(scoreBar("content", match.scores.c_sim));
  card.appendChild(bars);

  if (match.thread_available) {
    const link = document.createElement("button");
    link.type = "button";
    link.className = "thread-link";
    link.textContent = "view answer thread";
    link.addEventListener("click", () => onThread(match.query_id));
    card.appendChild(link);
  }

  return card;
}

// Cards appear in exactly the order the service ranked them; this
// function never sorts.
export function renderMatches(
  container: HTMLElement,
  matches: Match[],
  onThread: (queryId: string) => void,
): void {
  container.innerHTML = "";
  if (matches.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No similar question found. This one is likely new; consider posting it.";
    container.appendChild(empty);
    return;
  }
  for (const match of matches) {
    container.appendChild(matchCard(match, onThread));
  }
}

function postBlock(post: ThreadPost): HTMLElement {
  const block = document.createElement("div");
  block.className = "thread-post";
  const badge = document.createElement("span");
  badge.className = `role-badge role-${post.author_role}`;
  badge.textContent = post.author_role;
  const body = document.createElement("p");
  body.className = "post-body";
  body.textContent = post.body;
  block.appendChild(badge);
  block.appendChild(body);
  return block;
}

export function renderThread(container: HTMLElement, outcome: ThreadOutcome): void {
  container.innerHTML = "";
  const notice = (className: string, text: string) => {
    const p = document.createElement("p");
    p.className = className;
    p.textContent = text;
    container.appendChild(p);
  };

  switch (outcome.kind) {
    case "ok": {
      const heading = document.createElement("h4");
      heading.textContent = `Thread for ${outcome.thread.query_id}`;
      container.appendChild(heading);
      for (const post of outcome.thread.posts) {
        container.appendChild(postBlock(post));
      }
      break;
    }
    case "no-answer":
      notice("thread-empty", "Question matched but no recorded answer.");
      break;
    case "not-found":
      notice("thread-missing", "That question is no longer in the archive.");
      break;
    case "rejected":
      notice("thread-error", outcome.detail);
      break;
    case "unreachable":
      notice("thread-error", "Could not reach the service to load the thread.");
      break;
  }
}

export function renderRetryBanner(container: HTMLElement, onRetry: () => void): void {
  container.innerHTML = "";
  const banner = document.createElement("div");
  banner.className = "retry-banner";
  const text = document.createElement("span");
  text.textContent = "The service could not be reached.";
  const retry = document.createElement("button");
  retry.type = "button";
  retry.textContent = "Retry";
  retry.addEventListener("click", onRetry);
  banner.appendChild(text);
  banner.appendChild(retry);
  container.appendChild(banner);
}

export function renderFormError(container: HTMLElement, detail: string): void {
  container.innerHTML = "";
  const error = document.createElement("p");
  error.className = "form-error";
  error.textContent = detail;
  container.appendChild(error);
}

export function clearNotices(...containers: HTMLElement[]): void {
  for (const el of containers) {
    el.innerHTML = "";
  }
}
