/** Proof JSON as served by the backend. */

export interface ProofVertex {
  id: number;
  axiom: string;
  asserted: boolean;
  known: boolean;
}

export interface ProofStep {
  conclusion: number;
  premises: number[];
  rule: string;
  eliminated: string[];
}

export interface Proof {
  goal: string;
  vertices: ProofVertex[];
  steps: ProofStep[];
  root: number;
  measures: { size: number; depth: number; weightedSize: number };
  suboptimal: boolean;
}
