// Handcrafted service payloads used by the unit tests. The implicit
// cells carry the provenance the service reports for the two-precedent
// state of the worked example.

import type { CellPayload, MatrixResponse, SourcePayload } from "../src/types";

export const q1: SourcePayload = {
  type: "precedent", subject: "S1", object: "O1",
  effect: "allow", rights: ["all"], note: "q1",
};
export const q2: SourcePayload = {
  type: "precedent", subject: "S1", object: "O3",
  effect: "deny", rights: ["all"], note: "q2",
};

function implicit(
  subject: string, object: string, source: SourcePayload,
  key: number[], families: string[], rule = "column",
  defeated: { source: SourcePayload; key: number[]; families: string[]; via: string }[] = [],
): CellPayload {
  return {
    subject, object, state: "implicit",
    decision: { effect: source.effect, rights: source.rights },
    derived: false,
    provenance: { rule, source, key, families, tie_consistent: false, defeated },
  };
}

function undefinedCell(subject: string, object: string): CellPayload {
  return { subject, object, state: "undefined", reason: "no-influence", candidates: [] };
}

/** The two-precedent partial matrix: rows S1..S3, columns O1..O3. */
export function table2Response(): MatrixResponse {
  return {
    revision: 0,
    summary: { explicit: 2, implicit: 5, derived: 0, undefined: 2 },
    matrix: {
      format: "dacmatrix.matrix/1",
      mode: "partial",
      dominance_depth: "lexicographic",
      default_policy: "deny",
      rights: ["all"],
      subjects: ["S1", "S2", "S3"],
      objects: ["O1", "O2", "O3"],
      cells: [
        { subject: "S1", object: "O1", state: "explicit", precedents: [q1] },
        implicit("S1", "O2", q2, [2], ["B2"], "row",
          [{ source: q1, key: [3], families: ["B3"], via: "key-order" }]),
        { subject: "S1", object: "O3", state: "explicit", precedents: [q2] },
        implicit("S2", "O1", q1, [2], ["A2"]),
        undefinedCell("S2", "O2"),
        implicit("S2", "O3", q2, [2], ["A2"]),
        implicit("S3", "O1", q1, [1], ["A1"]),
        undefinedCell("S3", "O2"),
        implicit("S3", "O3", q2, [1], ["A1"]),
      ],
    },
  };
}

export const TABLE_2_TOKENS = [
  ["[1]", "0", "[0]"],
  ["1", "?", "0"],
  ["1", "?", "0"],
];
