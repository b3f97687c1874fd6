import type { QueryRequest, QueryResponse, ServiceDefaults, ThreadResponse } from "./types.js";

// A request either reaches the service or it does not; the two failure
// families need different UI (inline form error vs retry banner), so the
// outcomes are explicit unions instead of thrown errors.

export type QueryOutcome =
  | { kind: "ok"; response: QueryResponse }
  | { kind: "rejected"; status: number; detail: string }
  | { kind: "unreachable"; message: string };

export type ThreadOutcome =
  | { kind: "ok"; thread: ThreadResponse }
  | { kind: "no-answer" }
  | { kind: "not-found" }
  | { kind: "rejected"; status: number; detail: string }
  | { kind: "unreachable"; message: string };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function readDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? `request failed with status ${response.status}`;
  } catch {
    return `request failed with status ${response.status}`;
  }
}

export async function postQuery(
  baseUrl: string,
  request: QueryRequest,
  fetchFn: FetchLike = fetch,
): Promise<QueryOutcome> {
  let response: Response;
  try {
    response = await fetchFn(`${baseUrl}/api/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  } catch (error) {
    return { kind: "unreachable", message: error instanceof Error ? error.message : String(error) };
  }
  if (!response.ok) {
    return { kind: "rejected", status: response.status, detail: await readDetail(response) };
  }
  return { kind: "ok", response: (await response.json()) as QueryResponse };
}

export async function fetchThread(
  baseUrl: string,
  queryId: string,
  fetchFn: FetchLike = fetch,
): Promise<ThreadOutcome> {
  let response: Response;
  try {
    response = await fetchFn(`${baseUrl}/api/thread/${encodeURIComponent(queryId)}`);
  } catch (error) {
    return { kind: "unreachable", message: error instanceof Error ? error.message : String(error) };
  }
  if (response.status === 204) {
    return { kind: "no-answer" };
  }
  if (response.status === 404) {
    return { kind: "not-found" };
  }
  if (!response.ok) {
    return { kind: "rejected", status: response.status, detail: await readDetail(response) };
  }
  return { kind: "ok", thread: (await response.json()) as ThreadResponse };
}

// Defaults power the advanced controls; a service that cannot provide
// them is not an error worth surfacing, the caller falls back.
export async function fetchDefaults(
  baseUrl: string,
  fetchFn: FetchLike = fetch,
): Promise<ServiceDefaults | null> {
  try {
    const response = await fetchFn(`${baseUrl}/api/defaults`);
    if (!response.ok) {
      return null;
    }
    return (await response.json()) as ServiceDefaults;
  } catch {
    return null;
  }
}
