import { describe, expect, it } from "vitest";

import {
  buildGridModel,
  cellStateClass,
  cellToken,
  decisionToken,
  tokenGrid,
} from "../src/gridModel";
import type { CellPayload } from "../src/types";
import { TABLE_2_TOKENS, q1, table2Response } from "./fixtures";

describe("decisionToken", () => {
  it("renders 1/0 for a single-right universe", () => {
    expect(decisionToken({ effect: "allow", rights: ["all"] }, true)).toBe("1");
    expect(decisionToken({ effect: "deny", rights: ["all"] }, true)).toBe("0");
  });

  it("spells polarity and sorted rights otherwise", () => {
    expect(decisionToken({ effect: "allow", rights: ["write", "read"] }, false))
      .toBe("+read,write");
    expect(decisionToken({ effect: "deny", rights: ["read"] }, false)).toBe("-read");
  });
});

describe("cellToken", () => {
  it("brackets explicit cells", () => {
    const cell: CellPayload = {
      subject: "S1", object: "O1", state: "explicit", precedents: [q1],
    };
    expect(cellToken(cell, true)).toBe("[1]");
  });

  it("angle-marks derived cells", () => {
    const cell: CellPayload = {
      subject: "S1", object: "O2", state: "implicit",
      decision: { effect: "deny", rights: ["all"] },
      derived: true,
      provenance: {
        rule: "row", source: q1, key: [2], families: ["B2"],
        tie_consistent: false, defeated: [],
      },
    };
    expect(cellToken(cell, true)).toBe(">0<");
    expect(cellStateClass(cell)).toBe("derived");
  });

  it("question-marks undefined cells", () => {
    const cell: CellPayload = {
      subject: "S2", object: "O2", state: "undefined", reason: "no-influence",
    };
    expect(cellToken(cell, true)).toBe("?");
  });
});

describe("buildGridModel", () => {
  it("renders exactly the mock payload, cell for cell", () => {
    const model = buildGridModel(table2Response());
    expect(model.revision).toBe(0);
    expect(model.mode).toBe("partial");
    expect(model.columns).toEqual(["O1", "O2", "O3"]);
    expect(tokenGrid(model)).toEqual(TABLE_2_TOKENS);
  });

  it("performs no policy computation: payload edits pass through verbatim", () => {
    // Flip one implicit decision in the payload; the grid must follow
    // the payload, proving the client recomputes nothing.
    const response = table2Response();
    const cell = response.matrix.cells.find(
      (c) => c.subject === "S2" && c.object === "O3",
    )!;
    cell.decision = { effect: "allow", rights: ["all"] };
    const grid = tokenGrid(buildGridModel(response));
    expect(grid[1]).toEqual(["1", "?", "1"]);
  });

  it("fails loudly on an incomplete payload", () => {
    const response = table2Response();
    response.matrix.cells.pop();
    expect(() => buildGridModel(response)).toThrow(/missing cell/);
  });
});
