// HTML renderers for the two views. Pure string-in, string-out so they
// can be snapshot-tested without a browser. Every number and text below
// comes verbatim from a service payload field; the renderers add markup
// and labels only.

import type { TranscriptState, TurnEntry } from "./store.js";
import type { TraceModel, TraceSchemaError, RoundModel, TaskNode } from "./traceModel.js";
import type { ConsoleEvent } from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const esc = escapeHtml;

// Numbers pass through String() so "0.5" stays "0.5"; no rounding here.
function num(value: number): string {
  return esc(String(value));
}

// ---------------------------------------------------------------- chat view

export function renderChatView(state: TranscriptState): string {
  if (state.sessionId === null) {
    return `<div class="empty-state">Create a session to start chatting.</div>`;
  }
  if (state.turns.length === 0) {
    return `<div class="empty-state">Session <code>${esc(state.sessionId)}</code> is empty. Ask a question, optionally attaching a motion clip.</div>`;
  }
  const parts = state.turns.map((turn) => renderTurn(turn, state));
  return `<div class="transcript">\n${parts.join("\n")}\n</div>`;
}

function renderTurn(turn: TurnEntry, state: TranscriptState): string {
  const pieces: string[] = [];
  const media = turn.mediaName === null ? "" : ` <span class="media-chip">${esc(turn.mediaName)}</span>`;
  pieces.push(`<div class="bubble user">${esc(turn.query)}${media}</div>`);

  const reconnecting = turn.status === "interrupted" && state.connection === "reconnecting";
  if (reconnecting) {
    pieces.push(`<div class="banner reconnect">Connection lost. Reconnecting; progress so far is kept.</div>`);
  }

  const live = turn.status === "streaming" || turn.status === "interrupted";
  if (turn.events.length > 0) {
    const items = turn.events.map((e) => `  <li>${renderEvent(e)}</li>`).join("\n");
    if (live) {
      pieces.push(`<ul class="event-feed live">\n${items}\n</ul>`);
    } else {
      // The terminal event closed the stream view; the feed stays
      // available but folded.
      pieces.push(`<details class="event-feed done"><summary>progress</summary>\n<ul>\n${items}\n</ul>\n</details>`);
    }
  }

  if (turn.status === "ok" && turn.answer !== null) {
    pieces.push(`<div class="bubble bot">${esc(turn.answer)}</div>`);
  } else if (turn.status === "failed") {
    pieces.push(renderFailure(turn.failure));
  }
  if (turn.status === "ok" || turn.status === "failed") {
    pieces.push(`<button class="trace-link" data-turn="${turn.index}">view trace</button>`);
  }
  return pieces.join("\n");
}

function renderEvent(event: ConsoleEvent): string {
  switch (event.name) {
    case "plan_ready":
      return `plan v${num(event.data.plan.version)} ready (round ${num(event.data.round)})`;
    case "task_started":
      return `task ${esc(event.data.task_id)} started on ${esc(event.data.tool_id)}`;
    case "task_finished":
      return `task ${esc(event.data.task_id)} finished: ${esc(event.data.status)}`;
    case "verdict": {
      const verdict = event.data.verdict;
      const reasons = verdict.reasons.length
        ? ` <span class="reasons">${verdict.reasons.map(esc).join("; ")}</span>`
        : "";
      return `${esc(event.data.stage)} verdict: <b class="decision-${esc(verdict.decision)}">${esc(verdict.decision)}</b>${reasons}`;
    }
    case "answer":
      return `answer ready`;
    case "failure":
      return `turn failed`;
  }
}

function renderFailure(failure: TurnEntry["failure"]): string {
  if (failure === null) {
    return `<div class="bubble failure">Turn failed.</div>`;
  }
  const rounds =
    failure.rounds_used === undefined
      ? ""
      : `<div class="rounds">rounds used: ${num(failure.rounds_used)}</div>`;
  return (
    `<div class="bubble failure"><b>${esc(failure.error)}</b>: ${esc(failure.message)}` +
    `${rounds}</div>`
  );
}

// --------------------------------------------------------------- trace view

export function renderTraceView(model: TraceModel | TraceSchemaError): string {
  if (model.kind === "schema-error") {
    return `<div class="schema-error">This trace cannot be displayed: ${esc(model.message)}</div>`;
  }
  const parts: string[] = [];
  parts.push(`<header class="trace-head">`);
  parts.push(`  <h2>turn <code>${esc(model.turnId)}</code></h2>`);
  parts.push(`  <span class="status status-${esc(model.finalStatus)}">${esc(model.finalStatus)}</span>`);
  parts.push(`  <p class="query">${esc(model.queryText)}</p>`);
  for (const mediaId of model.mediaIds) {
    parts.push(`  <span class="media-chip">${esc(mediaId)}</span>`);
  }
  parts.push(`</header>`);

  for (const round of model.rounds) {
    parts.push(renderRound(round));
  }

  if (model.answer !== null) {
    parts.push(`<div class="panel answer"><h3>answer</h3><p>${esc(model.answer)}</p></div>`);
  }
  if (model.failure !== null) {
    const rounds =
      model.failure.rounds_used === undefined
        ? ""
        : `<div class="rounds">rounds used: ${num(model.failure.rounds_used)}</div>`;
    parts.push(
      `<div class="panel failure"><h3>failure</h3><p><b>${esc(model.failure.error)}</b>: ` +
        `${esc(model.failure.message)}</p>${rounds}</div>`,
    );
  }
  return parts.join("\n");
}

function renderRound(round: RoundModel): string {
  const parts: string[] = [];
  parts.push(`<section class="round">`);
  parts.push(`<h3>round ${num(round.roundIndex)} &middot; plan v${num(round.planVersion)}</h3>`);

  parts.push(`<ul class="plan-tree">`);
  for (const objective of round.objectives) {
    parts.push(`  <li class="objective"><span class="objective-desc">${esc(objective.description)}</span>`);
    parts.push(`    <ul>`);
    for (const task of objective.tasks) {
      parts.push(renderTask(task));
    }
    parts.push(`    </ul>`);
    parts.push(`  </li>`);
  }
  parts.push(`</ul>`);

  parts.push(renderVerdict("plan verdict", round.planVerdict));
  parts.push(renderVerdict("results verdict", round.resultsVerdict));
  if (round.aggregation !== null) {
    parts.push(renderAggregation(round.aggregation));
  }
  parts.push(`</section>`);
  return parts.filter((p) => p !== "").join("\n");
}

function renderTask(task: TaskNode): string {
  const deps = task.dependsOn.length
    ? ` <span class="deps">after ${task.dependsOn.map(esc).join(", ")}</span>`
    : "";
  let call = "";
  if (task.call !== null) {
    const status =
      task.call.status === null ? "" : ` <span class="status-${esc(task.call.status)}">${esc(task.call.status)}</span>`;
    const error = task.call.error === null ? "" : ` <span class="error">${esc(task.call.error)}</span>`;
    const tool = task.call.toolId === null ? "" : `<code>${esc(task.call.toolId)}</code>`;
    call = `<div class="tool-call">${tool}${status}${error}</div>`;
  }
  return (
    `      <li class="task"><code>${esc(task.id)}</code> ${esc(task.capability)}${deps}${call}</li>`
  );
}

function renderVerdict(label: string, verdict: RoundModel["planVerdict"]): string {
  if (verdict === null) return "";
  const reasons = verdict.reasons.length
    ? `<ul class="reasons">${verdict.reasons.map((r) => `<li>${esc(r)}</li>`).join("")}</ul>`
    : "";
  const hints = verdict.revision_hints.length
    ? `<ul class="hints">${verdict.revision_hints.map((h) => `<li>${esc(h)}</li>`).join("")}</ul>`
    : "";
  return (
    `<div class="verdict"><span class="verdict-label">${esc(label)}</span> ` +
    `<b class="decision-${esc(verdict.decision)}">${esc(verdict.decision)}</b>${reasons}${hints}</div>`
  );
}

function renderAggregation(agg: NonNullable<RoundModel["aggregation"]>): string {
  const parts: string[] = [];
  parts.push(`<div class="panel aggregation">`);
  parts.push(`<h4>aggregation &middot; ${esc(agg.method)}${agg.degraded ? ` <span class="degraded">degraded</span>` : ""}</h4>`);
  if (agg.candidates.length > 0) {
    parts.push(`<ul class="candidates">`);
    for (const candidate of agg.candidates) {
      parts.push(
        `  <li><code>${esc(candidate.model_id)}</code> <span class="confidence">${num(candidate.confidence)}</span> ${esc(candidate.text)}</li>`,
      );
    }
    parts.push(`</ul>`);
  }
  parts.push(
    `<p class="winner">winning cluster [${agg.winningCluster.map((m) => esc(m)).join(", ")}] ` +
      `with mass <span class="mass">${num(agg.supportMass)}</span></p>`,
  );
  if (agg.preliminary !== null) {
    parts.push(`<p class="preliminary">preliminary estimate: ${esc(agg.preliminary)}</p>`);
  }
  for (const stage of agg.stages) {
    parts.push(
      `<p class="stage"><code>${esc(stage.stage)}</code> via <code>${esc(stage.model_id)}</code>: ${esc(stage.output_text)}</p>`,
    );
  }
  parts.push(`<p class="final">final: ${esc(agg.finalText)}</p>`);
  parts.push(`</div>`);
  return parts.join("\n");
}
