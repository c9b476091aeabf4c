import { Proof } from "../src/proof.js";

/** Three-stage elimination proof for the four-axiom chain ontology,
 * exactly as the service serializes it. */
export const CHAIN_PROOF: Proof = {
  goal: "A ⊑ B",
  vertices: [
    { id: 0, axiom: "A ⊑ ∀r.C1", asserted: true, known: false },
    { id: 1, axiom: "C1 ⊑ C2⊔C3", asserted: true, known: false },
    { id: 2, axiom: "C2 ⊑ C3", asserted: true, known: false },
    { id: 3, axiom: "C1 ⊑ C3", asserted: false, known: false },
    { id: 4, axiom: "A ⊑ ∀r.C3", asserted: false, known: false },
    { id: 5, axiom: "∀r.C3 ⊑ B", asserted: true, known: false },
    { id: 6, axiom: "A ⊑ B", asserted: false, known: false },
  ],
  steps: [
    { conclusion: 3, premises: [1, 2], rule: "eliminate C2",
      eliminated: ["C2"] },
    { conclusion: 4, premises: [0, 3], rule: "eliminate C1",
      eliminated: ["C1"] },
    { conclusion: 6, premises: [4, 5], rule: "eliminate r, C3",
      eliminated: ["r", "C3"] },
  ],
  root: 6,
  measures: { size: 7, depth: 3, weightedSize: 29 },
  suboptimal: false,
};

/** Same goal with known signature {C1, C3}: C1 ⊑ C3 becomes a known leaf. */
export const CHAIN_PROOF_KNOWN: Proof = {
  goal: "A ⊑ B",
  vertices: [
    { id: 0, axiom: "A ⊑ ∀r.C1", asserted: true, known: false },
    { id: 1, axiom: "C1 ⊑ C3", asserted: false, known: true },
    { id: 2, axiom: "A ⊑ ∀r.C3", asserted: false, known: false },
    { id: 3, axiom: "∀r.C3 ⊑ B", asserted: true, known: false },
    { id: 4, axiom: "A ⊑ B", asserted: false, known: false },
  ],
  steps: [
    { conclusion: 2, premises: [0, 1], rule: "eliminate C1",
      eliminated: ["C1"] },
    { conclusion: 4, premises: [2, 3], rule: "eliminate r, C3",
      eliminated: ["r", "C3"] },
  ],
  root: 4,
  measures: { size: 5, depth: 2, weightedSize: 21 },
  suboptimal: false,
};
