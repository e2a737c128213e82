// Provenance side panel: renders /explain traces and offers a shortcut
// to draft an explicit rule at weakly-determined cells.

import { sourceLabel } from "./gridModel.js";
import type { ExplainResponse } from "./types.js";

export interface ProvenanceLine {
  text: string;
  kind: "headline" | "dominant" | "defeated" | "candidate" | "hint";
}

export function explainLines(response: ExplainResponse, singleRight: boolean): ProvenanceLine[] {
  const cell = response.cell;
  const lines: ProvenanceLine[] = [
    {
      text: `(${response.subject}, ${response.object}) — ${response.mode} mode`,
      kind: "headline",
    },
  ];
  if (cell.state === "explicit") {
    for (const p of cell.precedents ?? []) {
      lines.push({ text: `explicit precedent ${sourceLabel(p, singleRight)}`, kind: "dominant" });
    }
    return lines;
  }
  if (cell.state === "implicit") {
    const prov = cell.provenance!;
    lines.push({
      text: `dominant ${sourceLabel(prov.source, singleRight)} via ${prov.families.join(",")}`
        + ` (${prov.rule} rule${prov.tie_consistent ? ", tie-consistent" : ""})`,
      kind: "dominant",
    });
    for (const d of prov.defeated) {
      lines.push({
        text: `defeated ${sourceLabel(d.source, singleRight)} via ${d.families.join(",")}`,
        kind: "defeated",
      });
    }
    return lines;
  }
  if (cell.reason === "ambiguous") {
    lines.push({ text: "undefined: tied candidates disagree", kind: "headline" });
    for (const c of cell.candidates ?? []) {
      lines.push({
        text: `candidate ${sourceLabel(c.source, singleRight)} via ${c.families.join(",")}`,
        kind: "candidate",
      });
    }
  } else {
    lines.push({ text: "undefined: no influencing precedent", kind: "headline" });
  }
  lines.push({ text: "enforcement defaults to deny; add an explicit rule here", kind: "hint" });
  return lines;
}

export interface ProvenancePanelHandlers {
  onDraftRule?: (subject: string, object: string) => void;
}

export function renderProvenancePanel(
  container: HTMLElement,
  response: ExplainResponse,
  singleRight: boolean,
  handlers: ProvenancePanelHandlers = {},
): void {
  container.replaceChildren();
  for (const line of explainLines(response, singleRight)) {
    const p = document.createElement("p");
    p.className = `prov-${line.kind}`;
    p.textContent = line.text;
    container.appendChild(p);
  }
  if (!response.defined && handlers.onDraftRule) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "draft-rule";
    button.textContent = "create explicit rule here";
    button.addEventListener("click", () =>
      handlers.onDraftRule!(response.subject, response.object),
    );
    container.appendChild(button);
  }
}
