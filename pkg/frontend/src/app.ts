/** Page logic: project upload, entailment picking, proof generation with
 * polling and cancellation, and the proof view. */

import { Client, JobStatus } from "./api.js";
import { Proof, ProofStep } from "./proof.js";
import { ProofView } from "./prooftree.js";

export const METHODS = [
  "elk-size", "elk-depth", "elim-heur", "elim-name-opt", "elim-size-opt",
  "detailed",
];

export const SUBOPTIMAL_WARNING = "proof may be sub-optimal";

/** "A ⊑ B" (atomic, as listed by the entailments endpoint) → "sub(A, B)". */
export function atomicGoalToAscii(display: string): string {
  const [lhs, rhs] = display.split(" ⊑ ");
  return `sub(${lhs}, ${rhs})`;
}

export class App {
  private doc: Document;
  private client: Client;
  private pollMs: number;
  private projectId: string | null = null;
  private jobId: string | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  view: ProofView | null = null;

  constructor(doc: Document, client: Client, pollMs = 1000) {
    this.doc = doc;
    this.client = client;
    this.pollMs = pollMs;
    this.el("upload-btn").addEventListener("click", () => this.upload());
    this.el("start-btn").addEventListener("click", () => this.start());
    this.el("cancel-btn").addEventListener("click", () => this.cancel());
    const vertical = this.el("vertical-toggle") as HTMLInputElement;
    vertical.addEventListener("change",
      () => this.view?.setVertical(vertical.checked));
    this.el("expand-all-btn").addEventListener("click",
      () => this.view?.expandAll());
    this.el("collapse-all-btn").addEventListener("click",
      () => this.view?.collapseAll());
  }

  private el(id: string): HTMLElement {
    const e = this.doc.getElementById(id);
    if (!e) throw new Error(`missing element #${id}`);
    return e;
  }

  private show(id: string, on: boolean): void {
    this.el(id).classList.toggle("hidden", !on);
  }

  async upload(): Promise<void> {
    const text = (this.el("ontology-input") as HTMLTextAreaElement).value;
    this.show("project-error", false);
    let info;
    try {
      info = await this.client.createProject(text);
    } catch (e) {
      this.el("project-error").textContent = String((e as Error).message);
      this.show("project-error", true);
      return;
    }
    this.projectId = info.id;
    const known = this.el("known-select") as HTMLSelectElement;
    known.textContent = "";
    for (const n of [...info.conceptNames, ...info.roleNames]) {
      const opt = this.doc.createElement("option");
      opt.value = n;
      opt.textContent = n;
      known.appendChild(opt);
    }
    const list = this.el("entailment-list");
    list.textContent = "";
    for (const ent of await this.client.entailments(info.id)) {
      const li = this.doc.createElement("li");
      li.textContent = ent;
      li.addEventListener("click", () => this.pickGoal(ent, li));
      list.appendChild(li);
    }
    this.show("panel", false);
  }

  pickGoal(display: string, li?: HTMLElement): void {
    const list = this.el("entailment-list");
    for (const other of Array.from(list.children))
      other.classList.remove("selected");
    li?.classList.add("selected");
    this.el("selected-goal").textContent = display;
    this.show("panel", true);
  }

  private selectedKnown(): string[] {
    const sel = this.el("known-select") as HTMLSelectElement;
    return Array.from(sel.selectedOptions).map((o) => o.value);
  }

  async start(): Promise<void> {
    if (!this.projectId) return;
    const goal = this.el("selected-goal").textContent ?? "";
    const method = (this.el("method-select") as HTMLSelectElement).value;
    this.show("suboptimal-warning", false);
    this.show("job-error", false);
    this.show("proof-section", false);
    this.el("job-status").textContent = "";
    try {
      this.jobId = await this.client.startProof(
        this.projectId, atomicGoalToAscii(goal), method, this.selectedKnown());
    } catch (e) {
      this.el("job-error").textContent = String((e as Error).message);
      this.show("job-error", true);
      return;
    }
    (this.el("cancel-btn") as HTMLButtonElement).disabled = false;
    this.el("job-status").textContent = "queued";
    this.pollTimer = setTimeout(() => this.poll(), this.pollMs);
  }

  async cancel(): Promise<void> {
    if (this.jobId) await this.client.cancelJob(this.jobId);
  }

  private async poll(): Promise<void> {
    if (!this.jobId) return;
    let status: JobStatus;
    try {
      status = await this.client.jobStatus(this.jobId);
    } catch (e) {
      this.el("job-error").textContent = String((e as Error).message);
      this.show("job-error", true);
      return;
    }
    this.el("job-status").textContent = status.state;
    if (status.state === "queued" || status.state === "running") {
      this.pollTimer = setTimeout(() => this.poll(), this.pollMs);
      return;
    }
    (this.el("cancel-btn") as HTMLButtonElement).disabled = true;
    this.jobId = null;
    if (status.state === "failed") {
      this.el("job-error").textContent = status.error ?? "proof search failed";
      this.show("job-error", true);
      return;
    }
    if (status.result) {
      if (status.suboptimal) this.show("suboptimal-warning", true);
      this.showProof(status.result);
    } else if (status.state === "cancelled") {
      this.el("job-status").textContent = "cancelled (no proof found yet)";
    }
  }

  showProof(proof: Proof): void {
    this.show("proof-section", true);
    const container = this.el("proof-container");
    this.view = new ProofView(container, proof,
                              (s: ProofStep) => void s);
    const vertical = this.el("vertical-toggle") as HTMLInputElement;
    if (vertical.checked) this.view.setVertical(true);
  }
}

export function initApp(doc: Document, client?: Client, pollMs = 1000): App {
  const select = doc.getElementById("method-select") as HTMLSelectElement;
  if (select && !select.options.length) {
    for (const m of METHODS) {
      const opt = doc.createElement("option");
      opt.value = m;
      opt.textContent = m;
      select.appendChild(opt);
    }
  }
  return new App(doc, client ?? new Client(), pollMs);
}
