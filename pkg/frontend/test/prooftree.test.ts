import { beforeEach, describe, expect, it } from "vitest";

import { ProofView } from "../src/prooftree.js";
import { CHAIN_PROOF, CHAIN_PROOF_KNOWN } from "./fixtures.js";
import { lcg, randomProof } from "./generators.js";

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="c"></div>';
  container = document.getElementById("c")!;
});

const axiomNodes = () => container.querySelectorAll("g.axiom-node");
const stepNodes = () => container.querySelectorAll("g.step-node");
const labels = () =>
  Array.from(container.querySelectorAll("text.axiom-label"),
             (t) => t.textContent);

describe("schema robustness", () => {
  it("renders 100 generated proofs without error, in every view state", () => {
    const rng = lcg(20240824);
    for (let i = 0; i < 100; i++) {
      const proof = randomProof(rng);
      const view = new ProofView(container, proof);
      view.expandAll();
      expect(axiomNodes().length).toBe(proof.vertices.length);
      expect(stepNodes().length).toBe(proof.steps.length);
      view.setVertical(true);
      expect(stepNodes().length).toBe(0);
      view.setVertical(false);
      view.collapseAll();
    }
  });
});

describe("tree layout on the chain proof", () => {
  it("starts collapsed at the goal with an expand affordance", () => {
    new ProofView(container, CHAIN_PROOF);
    expect(axiomNodes().length).toBe(1);
    expect(stepNodes().length).toBe(0);
    const root = axiomNodes()[0];
    expect(root.classList.contains("collapsed")).toBe(true);
    expect(root.querySelector(".ctl-reveal")).not.toBeNull();
  });

  it("expand-all shows 7 axiom and 3 step nodes with the stage labels", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    expect(axiomNodes().length).toBe(7);
    expect(stepNodes().length).toBe(3);
    const stepLabels = Array.from(
      container.querySelectorAll("text.step-label"), (t) => t.textContent);
    expect(new Set(stepLabels)).toEqual(
      new Set(["eliminate C2", "eliminate C1", "eliminate r, C3"]));
    for (const v of CHAIN_PROOF.vertices)
      expect(labels()).toContain(v.axiom);
  });

  it("marks asserted axioms bold-style and inferred ones not", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    const byLabel = (axiom: string) =>
      Array.from(axiomNodes()).find(
        (g) => g.querySelector(".axiom-label")!.textContent === axiom)!;
    expect(byLabel("A ⊑ ∀r.C1").classList.contains("asserted")).toBe(true);
    expect(byLabel("C1 ⊑ C3").classList.contains("asserted")).toBe(false);
  });

  it("reveal-one-step shows the premises still folded", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.revealStep(CHAIN_PROOF.root);
    expect(axiomNodes().length).toBe(3); // goal + two premises
    expect(stepNodes().length).toBe(1);
    const folded = container.querySelectorAll("g.axiom-node.collapsed");
    expect(folded.length).toBe(1); // A ⊑ ∀r.C3; the other premise is a leaf
  });

  it("collapsing at A ⊑ ∀r.C3 hides exactly its subtree", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    view.collapseAt(4);
    expect(axiomNodes().length).toBe(3); // goal, A⊑∀r.C3, ∀r.C3⊑B
    expect(stepNodes().length).toBe(1);
    expect(labels()).not.toContain("C1 ⊑ C3");
    const folded = container.querySelector("g.axiom-node.collapsed")!;
    expect(folded.querySelector(".axiom-label")!.textContent)
      .toBe("A ⊑ ∀r.C3");
    expect(folded.querySelector(".ctl-reveal")).not.toBeNull();
  });

  it("expand-all then collapse-all restores the initial state", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    const initial = view.stateSnapshot();
    const initialHtml = container.innerHTML;
    view.expandAll();
    expect(view.stateSnapshot()).toEqual([]);
    view.collapseAll();
    expect(view.stateSnapshot()).toEqual(initial);
    expect(container.innerHTML).toBe(initialHtml);
  });

  it("clicking a step shows its rule name and eliminated names", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    const step = Array.from(stepNodes()).find(
      (g) => g.querySelector(".step-label")!.textContent
             === "eliminate r, C3")!;
    step.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const detail = container.querySelector(".step-detail")!;
    expect(detail.textContent).toContain("eliminate r, C3");
    expect(detail.textContent).toContain("r, C3");
    expect(view.selectedStep!.eliminated).toEqual(["r", "C3"]);
  });
});

describe("known signature", () => {
  it("renders C1 ⊑ C3 as a dimmed known leaf without a subproof", () => {
    const view = new ProofView(container, CHAIN_PROOF_KNOWN);
    view.expandAll();
    expect(axiomNodes().length).toBe(5);
    expect(stepNodes().length).toBe(2);
    const known = container.querySelector("g.axiom-node.known")!;
    expect(known.querySelector(".axiom-label")!.textContent).toBe("C1 ⊑ C3");
    // a known leaf offers no collapse/reveal controls
    expect(known.querySelector(".ctl")).toBeNull();
  });
});

describe("vertical layout", () => {
  it("stacks 7 axiom rows with 3 side edges and no step vertices", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    view.setVertical(true);
    expect(container.querySelectorAll("g.axiom-row").length).toBe(7);
    expect(container.querySelectorAll(".side-edge").length).toBe(3);
    expect(stepNodes().length).toBe(0);
  });

  it("respects the collapse state", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.setVertical(true);
    expect(container.querySelectorAll("g.axiom-row").length).toBe(1);
    expect(container.querySelectorAll(".side-edge").length).toBe(0);
  });

  it("clicking a side edge selects the inference", () => {
    const view = new ProofView(container, CHAIN_PROOF);
    view.expandAll();
    view.setVertical(true);
    const edge = container.querySelector(".side-edge")!;
    edge.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(view.selectedStep).not.toBeNull();
  });
});
