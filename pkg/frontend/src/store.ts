// Single source of truth for the chat transcript. Every mutation goes
// through one of the methods below and notifies subscribers synchronously,
// so renders always see events in exactly the order they arrived.

import type { ConsoleEvent, EventName } from "./types.js";

export type TurnStatus = "streaming" | "ok" | "failed" | "interrupted";
export type ConnectionState = "idle" | "streaming" | "reconnecting";

export interface TurnEntry {
  index: number;
  query: string;
  mediaName: string | null;
  events: ConsoleEvent[];
  status: TurnStatus;
  answer: string | null;
  failure: { error: string; message: string; rounds_used?: number } | null;
}

export interface TranscriptState {
  sessionId: string | null;
  connection: ConnectionState;
  turns: TurnEntry[];
}

export type Listener = (state: TranscriptState) => void;

const TERMINAL: ReadonlySet<EventName> = new Set(["answer", "failure"]);

export class TranscriptStore {
  private state: TranscriptState = { sessionId: null, connection: "idle", turns: [] };
  private listeners: Listener[] = [];
  private readonly now: () => number;

  constructor(now: () => number = Date.now) {
    this.now = now;
  }

  getState(): TranscriptState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  sessionOpened(sessionId: string): void {
    this.state = { sessionId, connection: "idle", turns: [] };
    this.notify();
  }

  /** A turn was submitted; its live event feed starts empty. */
  beginTurn(query: string, mediaName: string | null = null): number {
    const index = this.state.turns.length;
    const turn: TurnEntry = {
      index,
      query,
      mediaName,
      events: [],
      status: "streaming",
      answer: null,
      failure: null,
    };
    this.state = {
      ...this.state,
      connection: "streaming",
      turns: [...this.state.turns, turn],
    };
    this.notify();
    return index;
  }

  /** Append one streamed event to the active turn, in arrival order. */
  eventArrived(name: EventName, data: unknown): void {
    const turn = this.activeTurn();
    if (turn === null) return;
    const event = { name, data, receivedAt: this.now() } as ConsoleEvent;
    const updated: TurnEntry = { ...turn, events: [...turn.events, event] };
    if (name === "answer") {
      updated.status = "ok";
      updated.answer = (data as { answer: string }).answer;
    } else if (name === "failure") {
      updated.status = "failed";
      updated.failure = (data as { failure: TurnEntry["failure"] }).failure ?? null;
    }
    this.state = {
      ...this.state,
      connection: TERMINAL.has(name) ? "idle" : this.state.connection,
      turns: this.state.turns.map((t) => (t.index === updated.index ? updated : t)),
    };
    this.notify();
  }

  /** The stream dropped mid-turn. Everything received so far is kept. */
  connectionLost(): void {
    const turn = this.activeTurn();
    if (turn !== null) this.replaceActive({ ...turn, status: "interrupted" });
    this.state = { ...this.state, connection: "reconnecting" };
    this.notify();
  }

  /**
   * Recovery after a drop: the durable trace supplies the terminal state
   * the stream never delivered. Prior events are untouched.
   */
  resolveFromTrace(index: number, trace: {
    final_status: string;
    answer: string | null;
    failure: TurnEntry["failure"];
  }): void {
    const turn = this.state.turns[index];
    if (turn === undefined) return;
    const resolved: TurnEntry = {
      ...turn,
      status: trace.final_status === "ok" ? "ok" : "failed",
      answer: trace.answer,
      failure: trace.failure,
    };
    this.state = {
      ...this.state,
      connection: "idle",
      turns: this.state.turns.map((t) => (t.index === index ? resolved : t)),
    };
    this.notify();
  }

  private activeTurn(): TurnEntry | null {
    const last = this.state.turns[this.state.turns.length - 1];
    return last !== undefined && (last.status === "streaming" || last.status === "interrupted")
      ? last
      : null;
  }

  private replaceActive(updated: TurnEntry): void {
    this.state = {
      ...this.state,
      turns: this.state.turns.map((t) => (t.index === updated.index ? updated : t)),
    };
    this.notify();
  }

  private notify(): void {
    const snapshot = this.state;
    for (const listener of this.listeners) listener(snapshot);
  }
}
