// Workbench wiring: grid, precedent form, collision dialog, provenance
// panel, what-if sandbox. All policy values come from service responses.

import { PolicyClient } from "./api.js";
import { CollisionDialog } from "./collisionDialog.js";
import { buildGridModel, type GridModel } from "./gridModel.js";
import { renderProvenancePanel } from "./provenancePanel.js";
import type { MatrixResponse, PrecedentPayload } from "./types.js";
import { overlayKey, WhatifSandbox, type Overlay } from "./whatif.js";

export interface AppElements {
  grid: HTMLElement;
  revision: HTMLElement;
  banner: HTMLElement;
  provenance: HTMLElement;
  form: HTMLFormElement;
  formError: HTMLElement;
  modeButtons: HTMLElement;
  whatifStatus: HTMLElement;
  dialogHost: HTMLElement;
}

export class WorkbenchApp {
  readonly dialog = new CollisionDialog();
  readonly sandbox: WhatifSandbox;
  mode: string | undefined;
  private lastResponse: MatrixResponse | null = null;
  private overlay: Overlay | null = null;
  private pendingCollision: number | null = null;

  constructor(
    private readonly client: PolicyClient,
    private readonly el: AppElements,
  ) {
    this.sandbox = new WhatifSandbox(client);
  }

  get renderedRevision(): number {
    return this.lastResponse?.revision ?? -1;
  }

  get singleRight(): boolean {
    return (this.lastResponse?.matrix.rights.length ?? 1) === 1;
  }

  get submissionBlocked(): boolean {
    return this.pendingCollision !== null;
  }

  async start(): Promise<void> {
    this.bindForm();
    this.bindModeToggle();
    await this.refresh();
  }

  async refresh(): Promise<void> {
    try {
      this.lastResponse = await this.client.matrix(this.mode);
      this.el.banner.textContent = "";
      this.el.banner.className = "banner";
    } catch (error) {
      this.el.banner.textContent = `service unreachable: ${String(error)}`;
      this.el.banner.className = "banner banner-error";
      return;
    }
    this.renderGrid(buildGridModel(this.lastResponse));
    this.el.revision.textContent = `revision ${this.lastResponse.revision}`;
  }

  renderGrid(model: GridModel): void {
    const table = document.createElement("table");
    table.className = "matrix";
    const thead = document.createElement("thead");
    const head = document.createElement("tr");
    head.appendChild(document.createElement("th"));
    for (const column of model.columns) {
      const th = document.createElement("th");
      th.textContent = column;
      head.appendChild(th);
    }
    thead.appendChild(head);
    table.appendChild(thead);
    const body = document.createElement("tbody");
    table.appendChild(body);
    for (const row of model.rows) {
      const tr = document.createElement("tr");
      body.appendChild(tr);
      const th = document.createElement("th");
      th.textContent = row.subject;
      tr.appendChild(th);
      for (const cell of row.cells) {
        const td = document.createElement("td");
        tr.appendChild(td);
        td.textContent = cell.token;
        td.className = `cell cell-${cell.stateClass}`;
        td.title = cell.tooltip;
        td.dataset.subject = cell.subject;
        td.dataset.object = cell.object;
        const changed = this.overlay?.get(overlayKey(cell.subject, cell.object));
        if (changed) {
          td.classList.add("cell-overlay");
          td.textContent = `${changed.beforeToken} → ${changed.afterToken}`;
        }
        td.addEventListener("click", () => void this.inspect(cell.subject, cell.object));
      }
    }
    this.el.grid.replaceChildren(table);
  }

  async inspect(subject: string, object: string): Promise<void> {
    const response = await this.client.explain(subject, object, this.mode);
    renderProvenancePanel(this.el.provenance, response, this.singleRight, {
      onDraftRule: (s, o) => this.prefillForm(s, o),
    });
  }

  prefillForm(subject: string, object: string): void {
    (this.el.form.elements.namedItem("subject") as HTMLInputElement).value = subject;
    (this.el.form.elements.namedItem("object") as HTMLInputElement).value = object;
  }

  readForm(): PrecedentPayload | null {
    const data = new FormData(this.el.form);
    const rights = String(data.get("rights") ?? "")
      .split(",")
      .map((r) => r.trim())
      .filter((r) => r.length > 0);
    if (rights.length === 0) {
      this.el.formError.textContent = "rights must not be empty";
      return null;
    }
    this.el.formError.textContent = "";
    return {
      subject: String(data.get("subject") ?? ""),
      object: String(data.get("object") ?? ""),
      effect: data.get("effect") === "deny" ? "deny" : "allow",
      rights,
      note: String(data.get("note") ?? "") || null,
    };
  }

  async submit(precedent: PrecedentPayload): Promise<string> {
    if (this.submissionBlocked) {
      this.el.formError.textContent = "resolve the pending collision first";
      return "blocked";
    }
    const result = await this.client.submitPrecedent(precedent);
    if (result.kind === "rejected") {
      this.el.formError.textContent =
        `rejected: collides with an admitted precedent at `
        + `(${result.detail.conflict.subject}, ${result.detail.conflict.object})`;
      return "rejected";
    }
    if (result.kind === "pending") {
      this.pendingCollision = result.body.collision_id!;
      this.dialog.open(
        this.el.dialogHost,
        result.body.conflict!,
        result.body.precedent,
        this.singleRight,
        (choice) => void this.resolve(choice),
      );
      return "pending";
    }
    this.flagIfStale(result.body.revision);
    await this.refresh();
    return "admitted";
  }

  async resolve(choice: "keep-old" | "keep-new"): Promise<void> {
    if (this.pendingCollision === null) return;
    const collisionId = this.pendingCollision;
    this.pendingCollision = null;
    const response = await this.client.resolveCollision(collisionId, choice);
    if (response.outcome === "pending" && response.collision_id !== undefined) {
      // Chained collision: the survivor clashed with another entry.
      this.pendingCollision = response.collision_id;
    }
    this.flagIfStale(response.revision);
    await this.refresh();
  }

  flagIfStale(mutationRevision: number): void {
    if (this.lastResponse && mutationRevision > this.lastResponse.revision + 1) {
      this.el.banner.textContent =
        "policy changed elsewhere since the last fetch; grid refreshed";
      this.el.banner.className = "banner banner-stale";
    }
  }

  async previewWhatif(): Promise<void> {
    this.overlay = await this.sandbox.preview(this.mode, this.singleRight);
    this.el.whatifStatus.textContent =
      `${this.sandbox.entries.length} hypothetical(s), ${this.overlay.size} cell(s) change`;
    if (this.lastResponse) this.renderGrid(buildGridModel(this.lastResponse));
  }

  clearWhatif(): void {
    this.sandbox.clear();
    this.overlay = null;
    this.el.whatifStatus.textContent = "";
    if (this.lastResponse) this.renderGrid(buildGridModel(this.lastResponse));
  }

  async commitWhatif(): Promise<void> {
    await this.sandbox.commit();
    this.overlay = null;
    this.el.whatifStatus.textContent = "committed";
    await this.refresh();
  }

  private bindForm(): void {
    this.el.form.addEventListener("submit", (event) => {
      event.preventDefault();
      const precedent = this.readForm();
      if (precedent) void this.submit(precedent);
    });
  }

  private bindModeToggle(): void {
    this.el.modeButtons.querySelectorAll("button[data-mode]").forEach((button) => {
      button.addEventListener("click", () => {
        this.mode = (button as HTMLElement).dataset.mode;
        void this.refresh();
      });
    });
  }
}
