// Pure view model for the access-matrix grid. Every displayed value is
// a rendering of the service payload; nothing is recomputed here.

import type { CellPayload, DecisionPayload, MatrixResponse, SourcePayload } from "./types.js";

export type StateClass = "explicit" | "implicit" | "derived" | "undefined";

export interface GridCell {
  subject: string;
  object: string;
  token: string;
  stateClass: StateClass;
  tooltip: string;
}

export interface GridModel {
  revision: number;
  mode: string;
  columns: string[];
  rows: { subject: string; cells: GridCell[] }[];
}

export function decisionToken(decision: DecisionPayload, singleRight: boolean): string {
  if (singleRight) {
    return decision.effect === "allow" ? "1" : "0";
  }
  const sign = decision.effect === "allow" ? "+" : "-";
  return sign + [...decision.rights].sort().join(",");
}

export function sourceLabel(source: SourcePayload, singleRight: boolean): string {
  if (source.type === "precedent" && source.note) return source.note;
  const token = decisionToken({ effect: source.effect, rights: source.rights }, singleRight);
  const core = `(${source.subject},${source.object},${token})`;
  return source.type === "derived" ? `derived ${core}` : core;
}

export function cellToken(cell: CellPayload, singleRight: boolean): string {
  if (cell.state === "explicit") {
    const tokens = (cell.precedents ?? [])
      .map((p) => decisionToken({ effect: p.effect, rights: p.rights }, singleRight))
      .sort();
    return `[${tokens.join("|")}]`;
  }
  if (cell.state === "implicit") {
    const token = decisionToken(cell.decision!, singleRight);
    return cell.derived ? `>${token}<` : token;
  }
  return "?";
}

export function cellStateClass(cell: CellPayload): StateClass {
  if (cell.state === "explicit") return "explicit";
  if (cell.state === "implicit") return cell.derived ? "derived" : "implicit";
  return "undefined";
}

export function cellTooltip(cell: CellPayload, singleRight: boolean): string {
  if (cell.state === "explicit") {
    const names = (cell.precedents ?? []).map((p) => sourceLabel(p, singleRight));
    return `explicit: ${names.join(", ")}`;
  }
  if (cell.state === "implicit") {
    const p = cell.provenance!;
    return `${p.rule} rule: ${sourceLabel(p.source, singleRight)} via ${p.families.join(",")}`;
  }
  if (cell.reason === "ambiguous") {
    const names = (cell.candidates ?? []).map((c) => sourceLabel(c.source, singleRight));
    return `ambiguous: ${names.join(" vs ")}`;
  }
  return "no influencing precedent";
}

export function buildGridModel(response: MatrixResponse): GridModel {
  const matrix = response.matrix;
  const singleRight = matrix.rights.length === 1;
  const bySubject = new Map<string, Map<string, CellPayload>>();
  for (const cell of matrix.cells) {
    let row = bySubject.get(cell.subject);
    if (!row) {
      row = new Map();
      bySubject.set(cell.subject, row);
    }
    row.set(cell.object, cell);
  }
  return {
    revision: response.revision,
    mode: matrix.mode,
    columns: [...matrix.objects],
    rows: matrix.subjects.map((subject) => ({
      subject,
      cells: matrix.objects.map((object) => {
        const cell = bySubject.get(subject)?.get(object);
        if (!cell) {
          throw new Error(`matrix payload is missing cell (${subject}, ${object})`);
        }
        return {
          subject,
          object,
          token: cellToken(cell, singleRight),
          stateClass: cellStateClass(cell),
          tooltip: cellTooltip(cell, singleRight),
        };
      }),
    })),
  };
}

export function tokenGrid(model: GridModel): string[][] {
  return model.rows.map((row) => row.cells.map((cell) => cell.token));
}
