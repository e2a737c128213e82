import { describe, expect, it } from "vitest";

import { buildOverlay, overlayKey } from "../src/whatif";
import type { DiffEntry } from "../src/types";
import { q1 } from "./fixtures";

const diff: DiffEntry[] = [
  {
    subject: "S2",
    object: "O2",
    before: { subject: "S2", object: "O2", state: "undefined", reason: "no-influence" },
    after: {
      subject: "S2", object: "O2", state: "explicit",
      precedents: [{ type: "precedent", subject: "S2", object: "O2",
                     effect: "allow", rights: ["all"], note: "q3" }],
    },
  },
  {
    subject: "S2",
    object: "O3",
    before: {
      subject: "S2", object: "O3", state: "implicit",
      decision: { effect: "deny", rights: ["all"] }, derived: false,
      provenance: { rule: "column", source: q1, key: [2], families: ["A2"],
                    tie_consistent: false, defeated: [] },
    },
    after: {
      subject: "S2", object: "O3", state: "implicit",
      decision: { effect: "allow", rights: ["all"] }, derived: false,
      provenance: { rule: "row", source: q1, key: [2], families: ["B2"],
                    tie_consistent: false, defeated: [] },
    },
  },
];

describe("buildOverlay", () => {
  it("maps each diff entry to a before/after token pair", () => {
    const overlay = buildOverlay(diff, true);
    expect(overlay.size).toBe(2);
    expect(overlay.get(overlayKey("S2", "O2"))).toEqual({
      subject: "S2", object: "O2", beforeToken: "?", afterToken: "[1]",
    });
    expect(overlay.get(overlayKey("S2", "O3"))).toEqual({
      subject: "S2", object: "O3", beforeToken: "0", afterToken: "1",
    });
  });

  it("is empty for an empty diff", () => {
    expect(buildOverlay([], true).size).toBe(0);
  });
});
