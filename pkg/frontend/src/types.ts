// Payload shapes of the policy service API. The workbench renders these
// verbatim; it never computes policy on its own.

export type Effect = "allow" | "deny";

export interface DecisionPayload {
  effect: Effect;
  rights: string[];
}

export interface SourcePayload {
  type: "precedent" | "derived";
  subject: string;
  object: string;
  effect: Effect;
  rights: string[];
  note?: string | null;
}

export interface CandidatePayload {
  source: SourcePayload;
  key: number[];
  families: string[];
}

export interface DefeatedPayload extends CandidatePayload {
  via: string;
}

export interface ProvenancePayload {
  rule: string;
  source: SourcePayload;
  key: number[];
  families: string[];
  tie_consistent: boolean;
  defeated: DefeatedPayload[];
}

export interface CellPayload {
  subject: string;
  object: string;
  state: "explicit" | "implicit" | "undefined";
  precedents?: SourcePayload[];
  decision?: DecisionPayload;
  derived?: boolean;
  provenance?: ProvenancePayload;
  reason?: "no-influence" | "ambiguous";
  candidates?: CandidatePayload[];
}

export interface MatrixPayload {
  format: string;
  mode: string;
  dominance_depth: string;
  default_policy: string;
  rights: string[];
  subjects: string[];
  objects: string[];
  cells: CellPayload[];
}

export interface MatrixResponse {
  revision: number;
  summary: { explicit: number; implicit: number; derived: number; undefined: number };
  matrix: MatrixPayload;
}

export interface PrecedentPayload {
  subject: string;
  object: string;
  effect: Effect;
  rights: string[];
  note?: string | null;
}

export interface SubmitResponse {
  outcome: "admitted" | "pending";
  revision: number;
  precedent: PrecedentPayload;
  collision_id?: number;
  conflict?: PrecedentPayload;
}

export interface RejectionDetail {
  outcome: "rejected";
  conflict: PrecedentPayload;
}

export interface ResolutionResponse {
  outcome: string;
  revision: number;
  collision_id?: number;
  conflict?: PrecedentPayload;
}

export interface ExplainResponse {
  revision: number;
  subject: string;
  object: string;
  mode: string;
  defined: boolean;
  summary: string;
  cell: CellPayload;
}

export interface DiffEntry {
  subject: string;
  object: string;
  before: CellPayload;
  after: CellPayload;
}

export interface WhatifResponse {
  revision: number;
  mode: string;
  diff: DiffEntry[];
}

export interface PolicyResponse {
  revision: number;
  policy: unknown;
  pending_collisions: {
    collision_id: number;
    old: PrecedentPayload;
    new: PrecedentPayload;
  }[];
}
