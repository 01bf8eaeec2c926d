// Reshapes a raw trace document into what the explorer renders: plan
// versions as objective -> meta-task -> tool-call trees, per-round
// verdicts, and the aggregation detail. Values pass through verbatim;
// nothing here computes, rounds, or summarizes.

import type {
  OutcomeDoc,
  RoundDoc,
  ScoredResultDoc,
  StageDoc,
  TraceDoc,
  VerdictDoc,
} from "./types.js";

export interface ToolCallModel {
  taskId: string;
  toolId: string | null;
  selectionReason: string | null;
  status: string | null;
  error: string | null;
}

export interface TaskNode {
  id: string;
  capability: string;
  dependsOn: string[];
  call: ToolCallModel | null;
}

export interface ObjectiveNode {
  id: string;
  description: string;
  tasks: TaskNode[];
}

export interface AggregationDetail {
  taskId: string;
  method: string;
  finalText: string;
  winningCluster: string[];
  supportMass: number;
  preliminary: string | null;
  degraded: boolean;
  stages: StageDoc[];
  candidates: ScoredResultDoc[];
}

export interface RoundModel {
  roundIndex: number;
  planVersion: number;
  objectives: ObjectiveNode[];
  planVerdict: VerdictDoc | null;
  resultsVerdict: VerdictDoc | null;
  aggregation: AggregationDetail | null;
}

export interface TraceModel {
  kind: "trace";
  turnId: string;
  finalStatus: string;
  queryText: string;
  mediaIds: string[];
  answer: string | null;
  failure: { error: string; message: string; rounds_used?: number } | null;
  rounds: RoundModel[];
}

export interface TraceSchemaError {
  kind: "schema-error";
  message: string;
}

export function parseTrace(doc: unknown): TraceModel | TraceSchemaError {
  try {
    return build(doc);
  } catch (err) {
    return { kind: "schema-error", message: err instanceof Error ? err.message : String(err) };
  }
}

function build(doc: unknown): TraceModel {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("trace is not a JSON object");
  }
  const trace = doc as Partial<TraceDoc>;
  if (typeof trace.turn_id !== "string") throw new Error("missing turn_id");
  if (typeof trace.final_status !== "string") throw new Error("missing final_status");
  if (!Array.isArray(trace.rounds)) throw new Error("rounds is not a list");
  const query = trace.query;
  if (typeof query !== "object" || query === null || typeof query.text !== "string") {
    throw new Error("missing query text");
  }
  return {
    kind: "trace",
    turnId: trace.turn_id,
    finalStatus: trace.final_status,
    queryText: query.text,
    mediaIds: (query.attachments ?? []).map((a) => str(a?.media_id, "attachment media_id")),
    answer: typeof trace.answer === "string" ? trace.answer : null,
    failure: trace.failure ?? null,
    rounds: trace.rounds.map(buildRound),
  };
}

function buildRound(round: RoundDoc, position: number): RoundModel {
  const plan = round?.plan;
  if (typeof plan !== "object" || plan === null) {
    throw new Error(`round ${position}: missing plan`);
  }
  if (!Array.isArray(plan.objectives) || !Array.isArray(plan.tasks)) {
    throw new Error(`round ${position}: plan lacks objectives or tasks`);
  }
  const selections = new Map<string, { toolId: string; reason: string }>();
  for (const s of round.selections ?? []) {
    selections.set(str(s.task_id, "selection task_id"), {
      toolId: str(s.tool_id, "selection tool_id"),
      reason: str(s.reason, "selection reason"),
    });
  }
  const outcomes = new Map<string, OutcomeDoc>();
  for (const o of round.outcomes ?? []) {
    outcomes.set(str(o.task_id, "outcome task_id"), o);
  }

  const objectives: ObjectiveNode[] = plan.objectives.map((obj) => ({
    id: str(obj.id, "objective id"),
    description: str(obj.description, "objective description"),
    tasks: [],
  }));
  const byId = new Map(objectives.map((o) => [o.id, o]));
  for (const task of plan.tasks) {
    const id = str(task.id, "task id");
    const selection = selections.get(id) ?? null;
    const outcome = outcomes.get(id) ?? null;
    const node: TaskNode = {
      id,
      capability: str(task.capability, "task capability"),
      dependsOn: (task.depends_on ?? []).map((d) => str(d, "dependency id")),
      call:
        selection === null && outcome === null
          ? null
          : {
              taskId: id,
              toolId: outcome?.tool_id ?? selection?.toolId ?? null,
              selectionReason: selection?.reason ?? null,
              status: outcome?.status ?? null,
              error: outcome?.error ?? null,
            },
    };
    const home = byId.get(task.objective_id ?? "");
    if (home !== undefined) {
      home.tasks.push(node);
    } else if (objectives[0] !== undefined) {
      objectives[0].tasks.push(node);
    } else {
      throw new Error(`task ${id} has no objective to attach to`);
    }
  }

  return {
    roundIndex: num(round.round_index, "round_index"),
    planVersion: num(plan.version, "plan version"),
    objectives,
    planVerdict: round.plan_verdict ?? null,
    resultsVerdict: round.results_verdict ?? null,
    aggregation: findAggregation(round.outcomes ?? []),
  };
}

// The aggregation detail pairs the aggregated payload with the candidate
// scored results that fed it, both lifted straight from tool outcomes.
function findAggregation(outcomes: OutcomeDoc[]): AggregationDetail | null {
  const aggregated = outcomes.find((o) => o.payload?.kind === "aggregated");
  if (aggregated === undefined || aggregated.payload === null) return null;
  const payload = aggregated.payload;
  const candidates: ScoredResultDoc[] = [];
  for (const o of outcomes) {
    if (o.payload?.kind === "scored_results") {
      candidates.push(...((o.payload.results ?? []) as ScoredResultDoc[]));
    }
  }
  return {
    taskId: aggregated.task_id,
    method: str(payload.method, "aggregation method"),
    finalText: str(payload.final_text, "aggregation final_text"),
    winningCluster: ((payload.winning_cluster ?? []) as unknown[]).map((m) =>
      str(m, "winning cluster member"),
    ),
    supportMass: num(payload.support_mass, "support_mass"),
    preliminary: typeof payload.preliminary === "string" ? payload.preliminary : null,
    degraded: payload.degraded === true,
    stages: (payload.stages ?? []) as StageDoc[],
    candidates,
  };
}

function str(value: unknown, label: string): string {
  if (typeof value !== "string") throw new Error(`${label} is not a string`);
  return value;
}

function num(value: unknown, label: string): number {
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new Error(`${label} is not a number`);
  }
  return value;
}
