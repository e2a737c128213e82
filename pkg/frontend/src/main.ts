import { PolicyClient } from "./api.js";
import { WorkbenchApp, type AppElements } from "./app.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";

const elements: AppElements = {
  grid: el("grid"),
  revision: el("revision"),
  banner: el("banner"),
  provenance: el("provenance"),
  form: el<HTMLFormElement>("precedent-form"),
  formError: el("form-error"),
  modeButtons: el("mode-buttons"),
  whatifStatus: el("whatif-status"),
  dialogHost: document.body,
};

const app = new WorkbenchApp(new PolicyClient(baseUrl), elements);

el("whatif-add").addEventListener("click", () => {
  const precedent = app.readForm();
  if (precedent) {
    app.sandbox.add(precedent);
    void app.previewWhatif();
  }
});
el("whatif-clear").addEventListener("click", () => app.clearWhatif());
el("whatif-commit").addEventListener("click", () => void app.commitWhatif());

void app.start();
