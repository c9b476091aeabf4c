/** Thin client over the service's REST endpoints. */

import { Proof } from "./proof.js";

export interface ProjectInfo {
  id: string;
  axiomCount: number;
  conceptNames: string[];
  roleNames: string[];
}

export interface JobStatus {
  state: "queued" | "running" | "done" | "cancelled" | "failed";
  result?: Proof;
  suboptimal?: boolean;
  error?: string;
}

export class ApiError extends Error {}

async function asJson(r: Response): Promise<unknown> {
  const body = await r.json().catch(() => ({}));
  if (!r.ok) {
    const detail = (body as { detail?: string }).detail;
    throw new ApiError(detail ?? `${r.status} ${r.statusText}`);
  }
  return body;
}

export class Client {
  constructor(private base = "") {}

  async createProject(ontology: string): Promise<ProjectInfo> {
    const r = await fetch(`${this.base}/projects`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ ontology }),
    });
    return (await asJson(r)) as ProjectInfo;
  }

  async entailments(projectId: string): Promise<string[]> {
    const r = await fetch(`${this.base}/projects/${projectId}/entailments`);
    return ((await asJson(r)) as { entailments: string[] }).entailments;
  }

  async startProof(projectId: string, goal: string, method: string,
                   known: string[]): Promise<string> {
    const r = await fetch(`${this.base}/projects/${projectId}/proofs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ goal, method, known }),
    });
    return ((await asJson(r)) as { jobId: string }).jobId;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    const r = await fetch(`${this.base}/jobs/${jobId}`);
    return (await asJson(r)) as JobStatus;
  }

  async cancelJob(jobId: string): Promise<void> {
    await asJson(await fetch(`${this.base}/jobs/${jobId}`,
                             { method: "DELETE" }));
  }
}
