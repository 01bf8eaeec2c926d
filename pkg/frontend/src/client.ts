// HTTP client for the engine service. Talks only to the public endpoints:
// POST /sessions, POST /sessions/{id}/turns (SSE response),
// GET /sessions/{id}/turns/{n}/trace.

import { readSseBody } from "./sse.js";
import type { TranscriptStore } from "./store.js";
import type { EventName } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ConsoleClientOptions {
  baseUrl: string;
  fetchImpl?: FetchLike;
  /** Delay between trace polls after a dropped stream. */
  retryDelayMs?: number;
  /** Give up resolving a dropped turn after this many polls. */
  maxRetries?: number;
  sleep?: (ms: number) => Promise<void>;
}

const EVENT_NAMES: ReadonlySet<string> = new Set([
  "plan_ready",
  "task_started",
  "task_finished",
  "verdict",
  "answer",
  "failure",
]);

export class ConsoleClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly retryDelayMs: number;
  private readonly maxRetries: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(options: ConsoleClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.fetchImpl = options.fetchImpl ?? ((input, init) => fetch(input, init));
    this.retryDelayMs = options.retryDelayMs ?? 1000;
    this.maxRetries = options.maxRetries ?? 30;
    this.sleep =
      options.sleep ?? ((ms) => new Promise((resolve) => setTimeout(resolve, ms)));
  }

  async createSession(sessionId?: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(sessionId === undefined ? {} : { session_id: sessionId }),
    });
    if (!response.ok) throw new Error(`create session failed: HTTP ${response.status}`);
    const body = (await response.json()) as { session_id: string };
    return body.session_id;
  }

  async fetchTrace(sessionId: string, turnIndex: number): Promise<unknown | null> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/turns/${turnIndex}/trace`,
    );
    if (response.status === 404) return null;
    if (!response.ok) throw new Error(`fetch trace failed: HTTP ${response.status}`);
    return response.json();
  }

  /**
   * Run one turn, feeding every streamed event into the store. If the
   * stream drops before a terminal event, the transcript is kept, the
   * store switches to its reconnect state, and the durable trace is
   * polled to resolve the turn.
   */
  async runTurn(
    store: TranscriptStore,
    sessionId: string,
    query: string,
    media?: { name: string; content: Blob },
  ): Promise<void> {
    const turnIndex = store.beginTurn(query, media?.name ?? null);
    const form = new FormData();
    form.append("query", query);
    if (media !== undefined) form.append("media", media.content, media.name);

    let sawTerminal = false;
    try {
      const response = await this.fetchImpl(
        `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/turns`,
        { method: "POST", body: form },
      );
      if (!response.ok || response.body === null) {
        throw new Error(`turn request failed: HTTP ${response.status}`);
      }
      await readSseBody(response.body, (frame) => {
        if (!EVENT_NAMES.has(frame.event)) return;
        store.eventArrived(frame.event as EventName, frame.data);
        if (frame.event === "answer" || frame.event === "failure") sawTerminal = true;
      });
      if (!sawTerminal) throw new Error("stream ended before a terminal event");
    } catch (err) {
      if (sawTerminal) throw err;
      store.connectionLost();
      await this.resolveAfterDrop(store, sessionId, turnIndex);
    }
  }

  private async resolveAfterDrop(
    store: TranscriptStore,
    sessionId: string,
    turnIndex: number,
  ): Promise<void> {
    for (let attempt = 0; attempt < this.maxRetries; attempt += 1) {
      let trace: unknown | null = null;
      try {
        trace = await this.fetchTrace(sessionId, turnIndex);
      } catch {
        trace = null; // still unreachable; keep polling
      }
      if (trace !== null && typeof trace === "object") {
        store.resolveFromTrace(
          turnIndex,
          trace as Parameters<TranscriptStore["resolveFromTrace"]>[1],
        );
        return;
      }
      await this.sleep(this.retryDelayMs);
    }
    throw new Error(`turn ${turnIndex} could not be resolved after the stream dropped`);
  }
}
