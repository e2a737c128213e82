// Modal raised when a submission collides with an admitted precedent.
// The administrator must pick a survivor before submitting anything else.

import { sourceLabel } from "./gridModel.js";
import type { PrecedentPayload } from "./types.js";

export type CollisionChoice = "keep-old" | "keep-new";

export function precedentLabel(p: PrecedentPayload, singleRight: boolean): string {
  return sourceLabel(
    { type: "precedent", subject: p.subject, object: p.object,
      effect: p.effect, rights: p.rights, note: p.note ?? undefined },
    singleRight,
  );
}

export class CollisionDialog {
  private element: HTMLElement | null = null;

  get isOpen(): boolean {
    return this.element !== null;
  }

  open(
    host: HTMLElement,
    oldPrecedent: PrecedentPayload,
    newPrecedent: PrecedentPayload,
    singleRight: boolean,
    onChoice: (choice: CollisionChoice) => void,
  ): void {
    this.close();
    const backdrop = document.createElement("div");
    backdrop.className = "collision-backdrop";
    const dialog = document.createElement("div");
    dialog.className = "collision-dialog";

    const title = document.createElement("h2");
    title.textContent = "Precedent collision";
    dialog.appendChild(title);

    const question = document.createElement("p");
    question.textContent = "Which precedent is correct?";
    dialog.appendChild(question);

    const table = document.createElement("dl");
    for (const [label, p] of [["existing", oldPrecedent], ["submitted", newPrecedent]] as const) {
      const dt = document.createElement("dt");
      dt.textContent = label;
      const dd = document.createElement("dd");
      dd.textContent =
        `${precedentLabel(p, singleRight)}: ${p.effect} {${[...p.rights].sort().join(",")}} `
        + `at (${p.subject}, ${p.object})`;
      table.appendChild(dt);
      table.appendChild(dd);
    }
    dialog.appendChild(table);

    const buttons = document.createElement("div");
    buttons.className = "collision-buttons";
    for (const [text, choice] of [
      ["Keep existing", "keep-old"],
      ["Accept submitted", "keep-new"],
    ] as const) {
      const button = document.createElement("button");
      button.type = "button";
      button.dataset.choice = choice;
      button.textContent = text;
      button.addEventListener("click", () => {
        this.close();
        onChoice(choice);
      });
      buttons.appendChild(button);
    }
    dialog.appendChild(buttons);

    backdrop.appendChild(dialog);
    host.appendChild(backdrop);
    this.element = backdrop;
  }

  close(): void {
    this.element?.remove();
    this.element = null;
  }
}
