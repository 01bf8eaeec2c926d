// Event payloads mirror the service's SSE stream field for field; the
// console adds only the arrival timestamp.

export type EventName =
  | "plan_ready"
  | "task_started"
  | "task_finished"
  | "verdict"
  | "answer"
  | "failure";

export interface PlanReadyData {
  round: number;
  plan: PlanDoc;
}

export interface TaskStartedData {
  round: number;
  task_id: string;
  tool_id: string;
}

export interface TaskFinishedData {
  round: number;
  task_id: string;
  tool_id: string;
  status: string;
}

export interface VerdictData {
  round: number;
  stage: "plan" | "results";
  verdict: VerdictDoc;
}

export interface AnswerData {
  turn_id: string;
  answer: string;
}

export interface FailureData {
  turn_id: string;
  failure: FailureDoc;
}

export type ConsoleEvent =
  | { name: "plan_ready"; data: PlanReadyData; receivedAt: number }
  | { name: "task_started"; data: TaskStartedData; receivedAt: number }
  | { name: "task_finished"; data: TaskFinishedData; receivedAt: number }
  | { name: "verdict"; data: VerdictData; receivedAt: number }
  | { name: "answer"; data: AnswerData; receivedAt: number }
  | { name: "failure"; data: FailureData; receivedAt: number };

// Trace documents as served by GET /sessions/{id}/turns/{n}/trace. Fields
// the console does not render are left open.

export interface ObjectiveDoc {
  id: string;
  description: string;
  derived_from?: string;
}

export interface TaskDoc {
  id: string;
  capability: string;
  depends_on: string[];
  objective_id: string;
  instruction?: string;
  inputs?: unknown[];
}

export interface PlanDoc {
  version: number;
  objectives: ObjectiveDoc[];
  tasks: TaskDoc[];
}

export interface VerdictDoc {
  decision: string;
  reasons: string[];
  revision_hints: string[];
}

export interface SelectionDoc {
  task_id: string;
  tool_id: string;
  reason: string;
}

export interface ScoredResultDoc {
  model_id: string;
  text: string;
  confidence: number;
}

export interface StageDoc {
  stage: string;
  model_id: string;
  output_text: string;
}

export interface OutcomeDoc {
  task_id: string;
  tool_id: string;
  status: string;
  error: string | null;
  payload: Record<string, unknown> | null;
}

export interface RoundDoc {
  round_index: number;
  plan: PlanDoc;
  plan_verdict: VerdictDoc | null;
  results_verdict: VerdictDoc | null;
  selections?: SelectionDoc[];
  outcomes?: OutcomeDoc[];
}

export interface FailureDoc {
  error: string;
  message: string;
  rounds_used?: number;
}

export interface TraceDoc {
  turn_id: string;
  final_status: string;
  answer: string | null;
  failure: FailureDoc | null;
  query: { text: string; attachments: { media_id: string; modality: string }[] };
  rounds: RoundDoc[];
}
