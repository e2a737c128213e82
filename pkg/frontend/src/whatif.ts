// What-if sandbox: preview matrix changes before committing precedents.

import type { PolicyClient } from "./api.js";
import { cellToken } from "./gridModel.js";
import type { DiffEntry, PrecedentPayload, WhatifResponse } from "./types.js";

export interface OverlayCell {
  subject: string;
  object: string;
  beforeToken: string;
  afterToken: string;
}

export type Overlay = Map<string, OverlayCell>;

export function overlayKey(subject: string, object: string): string {
  return `${subject}|${object}`;
}

export function buildOverlay(diff: DiffEntry[], singleRight: boolean): Overlay {
  const overlay: Overlay = new Map();
  for (const entry of diff) {
    overlay.set(overlayKey(entry.subject, entry.object), {
      subject: entry.subject,
      object: entry.object,
      beforeToken: cellToken(entry.before, singleRight),
      afterToken: cellToken(entry.after, singleRight),
    });
  }
  return overlay;
}

export class WhatifSandbox {
  private hypotheticals: PrecedentPayload[] = [];
  private lastResponse: WhatifResponse | null = null;

  constructor(private readonly client: PolicyClient) {}

  get entries(): readonly PrecedentPayload[] {
    return this.hypotheticals;
  }

  get response(): WhatifResponse | null {
    return this.lastResponse;
  }

  add(precedent: PrecedentPayload): void {
    this.hypotheticals.push(precedent);
  }

  clear(): void {
    this.hypotheticals = [];
    this.lastResponse = null;
  }

  async preview(mode: string | undefined, singleRight: boolean): Promise<Overlay> {
    this.lastResponse = await this.client.whatif(this.hypotheticals, mode);
    return buildOverlay(this.lastResponse.diff, singleRight);
  }

  /** Replay the sandbox through real submissions, in order. */
  async commit(): Promise<void> {
    for (const precedent of this.hypotheticals) {
      const result = await this.client.submitPrecedent(precedent);
      if (result.kind !== "admitted") {
        throw new Error(`hypothetical ${precedent.subject}/${precedent.object} `
          + `was not admitted on commit (${result.kind})`);
      }
    }
    this.clear();
  }
}
