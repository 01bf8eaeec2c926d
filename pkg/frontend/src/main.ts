// Browser entry point: wires the store, client, and renderers to the
// static page. All state lives in the TranscriptStore; this file only
// moves strings between it and the DOM.

import { ConsoleClient } from "./client.js";
import { renderChatView, renderTraceView } from "./render.js";
import { TranscriptStore } from "./store.js";
import { parseTrace } from "./traceModel.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) throw new Error(`missing element #${id}`);
  return element as T;
}

const store = new TranscriptStore();
const client = new ConsoleClient({ baseUrl: inferBaseUrl() });

const chatRoot = byId<HTMLDivElement>("chat");
const traceRoot = byId<HTMLDivElement>("trace");
const sessionForm = byId<HTMLFormElement>("session-form");
const sessionInput = byId<HTMLInputElement>("session-id");
const queryForm = byId<HTMLFormElement>("query-form");
const queryInput = byId<HTMLInputElement>("query-text");
const mediaInput = byId<HTMLInputElement>("query-media");
const sendButton = byId<HTMLButtonElement>("send");

function inferBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("service") ?? "http://localhost:8080";
}

store.subscribe((state) => {
  chatRoot.innerHTML = renderChatView(state);
  // One turn at a time per session; the service answers 409 otherwise.
  sendButton.disabled = state.sessionId === null || state.connection !== "idle";
  for (const button of chatRoot.querySelectorAll<HTMLButtonElement>("button[data-turn]")) {
    button.addEventListener("click", () => showTrace(Number(button.dataset.turn)));
  }
});

sessionForm.addEventListener("submit", (event) => {
  event.preventDefault();
  const wanted = sessionInput.value.trim();
  client
    .createSession(wanted === "" ? undefined : wanted)
    .then((sessionId) => {
      store.sessionOpened(sessionId);
      sessionInput.value = sessionId;
    })
    .catch((err) => window.alert(String(err)));
});

queryForm.addEventListener("submit", (event) => {
  event.preventDefault();
  const state = store.getState();
  if (state.sessionId === null || state.connection !== "idle") return;
  const text = queryInput.value.trim();
  if (text === "") return;
  const file = mediaInput.files?.[0];
  const media = file === undefined ? undefined : { name: file.name, content: file };
  queryInput.value = "";
  mediaInput.value = "";
  void client.runTurn(store, state.sessionId, text, media).catch((err) => {
    window.alert(String(err));
  });
});

async function showTrace(turnIndex: number): Promise<void> {
  const state = store.getState();
  if (state.sessionId === null) return;
  try {
    const doc = await client.fetchTrace(state.sessionId, turnIndex);
    traceRoot.innerHTML = renderTraceView(parseTrace(doc));
  } catch (err) {
    traceRoot.innerHTML = renderTraceView({
      kind: "schema-error",
      message: String(err),
    });
  }
}

chatRoot.innerHTML = renderChatView(store.getState());
sendButton.disabled = true;
