import { describe, expect, it } from "vitest";

import { explainLines, renderProvenancePanel } from "../src/provenancePanel";
import type { ExplainResponse } from "../src/types";
import { q1, q2, table2Response } from "./fixtures";

function explainS1O2(): ExplainResponse {
  const cell = table2Response().matrix.cells.find(
    (c) => c.subject === "S1" && c.object === "O2",
  )!;
  return {
    revision: 0, subject: "S1", object: "O2", mode: "partial",
    defined: true, summary: "Deny; dominant q2 via B2; defeated q1 via B3",
    cell,
  };
}

describe("explainLines", () => {
  it("shows the dominant source and the defeated candidates", () => {
    const lines = explainLines(explainS1O2(), true);
    const texts = lines.map((l) => l.text);
    expect(texts.some((t) => t.includes("dominant q2 via B2"))).toBe(true);
    expect(texts.some((t) => t.includes("defeated q1 via B3"))).toBe(true);
  });

  it("lists tied candidates for ambiguous cells", () => {
    const response: ExplainResponse = {
      revision: 0, subject: "S1", object: "O7", mode: "partial",
      defined: false, summary: "ambiguous",
      cell: {
        subject: "S1", object: "O7", state: "undefined", reason: "ambiguous",
        candidates: [
          { source: { ...q1, object: "O4" }, key: [1], families: ["B1"] },
          { source: { ...q2, object: "O8" }, key: [1], families: ["B1"] },
        ],
      },
    };
    const texts = explainLines(response, true).map((l) => l.text);
    expect(texts.some((t) => t.includes("tied candidates disagree"))).toBe(true);
    expect(texts.filter((t) => t.startsWith("candidate"))).toHaveLength(2);
  });
});

describe("renderProvenancePanel", () => {
  it("offers the draft-rule shortcut only for undefined cells", () => {
    const host = document.createElement("div");
    renderProvenancePanel(host, explainS1O2(), true, { onDraftRule: () => {} });
    expect(host.querySelector("button.draft-rule")).toBeNull();

    const drafted: string[] = [];
    const response: ExplainResponse = {
      revision: 0, subject: "S2", object: "O2", mode: "partial",
      defined: false, summary: "undefined",
      cell: { subject: "S2", object: "O2", state: "undefined", reason: "no-influence" },
    };
    renderProvenancePanel(host, response, true, {
      onDraftRule: (s, o) => drafted.push(`${s}/${o}`),
    });
    const button = host.querySelector<HTMLButtonElement>("button.draft-rule");
    expect(button).not.toBeNull();
    button!.click();
    expect(drafted).toEqual(["S2/O2"]);
  });
});
