/** Thin fetch wrappers over the session service endpoints. */

import type {
  LevelPayload,
  PlayResponse,
  SessionConfigForm,
  SessionSnapshot,
  SessionState,
  StepResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`HTTP ${status}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = resp.status === 204 ? null : await resp.json().catch(() => null);
  if (!resp.ok) throw new ApiError(resp.status, body?.detail ?? body);
  return body as T;
}

export function createSession(config: SessionConfigForm): Promise<SessionSnapshot> {
  return request("/sessions", { method: "POST", body: JSON.stringify(config) });
}

export function stepSession(id: string, k: number): Promise<StepResponse> {
  return request(`/sessions/${id}/step`, { method: "POST", body: JSON.stringify({ k }) });
}

export function getState(id: string): Promise<SessionState> {
  return request(`/sessions/${id}/state`);
}

export function getLevel(id: string, member: number): Promise<LevelPayload> {
  return request(`/sessions/${id}/levels/${member}`);
}

export function play(id: string, member: number, moves: string): Promise<PlayResponse> {
  return request(`/sessions/${id}/play`, {
    method: "POST",
    body: JSON.stringify({ member, moves }),
  });
}

export function deleteSession(id: string): Promise<unknown> {
  return request(`/sessions/${id}`, { method: "DELETE" });
}

export function openEvents(id: string, onRecord: (data: string) => void): EventSource {
  const source = new EventSource(`/sessions/${id}/events`);
  source.onmessage = (event) => onRecord(event.data);
  return source;
}
