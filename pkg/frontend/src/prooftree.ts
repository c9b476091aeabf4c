/** Collapsible SVG rendering of a proof.
 *
 * Two node kinds: axiom vertices (colored; asserted bold, known dimmed) and
 * gray step vertices labeled with the rule name. Each axiom with a subproof
 * carries controls to collapse its subtree, reveal one inference step, or
 * expand everything below it. A vertical layout hides the step vertices,
 * stacks the visible axioms, and draws one side edge per inference.
 */

import { Proof, ProofStep, ProofVertex } from "./proof.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const ROW_H = 64;
const CHAR_W = 7.5;
const PAD_X = 10;
const NODE_H = 26;
const GAP_X = 18;

interface LaidOutNode {
  kind: "axiom" | "step";
  x: number; // center
  y: number; // top
  width: number;
  vertex?: ProofVertex;
  step?: ProofStep;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

export class ProofView {
  private proof: Proof;
  private container: HTMLElement;
  private byId = new Map<number, ProofVertex>();
  private stepFor = new Map<number, ProofStep>();
  private collapsed = new Set<number>();
  private verticalLayout = false;
  selectedStep: ProofStep | null = null;
  onStepSelect?: (step: ProofStep) => void;

  constructor(container: HTMLElement, proof: Proof,
              onStepSelect?: (step: ProofStep) => void) {
    this.container = container;
    this.proof = proof;
    this.onStepSelect = onStepSelect;
    for (const v of proof.vertices) this.byId.set(v.id, v);
    for (const s of proof.steps) this.stepFor.set(s.conclusion, s);
    this.collapseAll(); // initial state: everything folded up to the goal
  }

  /** Ids currently collapsed, sorted — comparable snapshot of view state. */
  stateSnapshot(): number[] {
    return [...this.collapsed].sort((a, b) => a - b);
  }

  private hasSubproof(id: number): boolean {
    const v = this.byId.get(id);
    return this.stepFor.has(id) && !(v && v.known);
  }

  private subtreeIds(id: number, acc: number[] = []): number[] {
    acc.push(id);
    const s = this.stepFor.get(id);
    if (s) for (const p of s.premises) this.subtreeIds(p, acc);
    return acc;
  }

  collapseAt(id: number): void {
    for (const d of this.subtreeIds(id))
      if (this.hasSubproof(d)) this.collapsed.add(d);
    this.render();
  }

  collapseAll(): void {
    this.collapseAt(this.proof.root);
  }

  revealStep(id: number): void {
    this.collapsed.delete(id);
    this.render();
  }

  expandAllAt(id: number): void {
    for (const d of this.subtreeIds(id)) this.collapsed.delete(d);
    this.render();
  }

  expandAll(): void {
    this.expandAllAt(this.proof.root);
  }

  setVertical(on: boolean): void {
    this.verticalLayout = on;
    this.render();
  }

  private selectStep(step: ProofStep): void {
    this.selectedStep = step;
    this.render();
    if (this.onStepSelect) this.onStepSelect(step);
  }

  /** Axiom ids visible under the current collapse state, in premise order. */
  private visibleAxioms(id = this.proof.root, acc: number[] = []): number[] {
    const s = this.stepFor.get(id);
    if (s && !this.collapsed.has(id) && this.hasSubproof(id))
      for (const p of s.premises) this.visibleAxioms(p, acc);
    acc.push(id);
    return acc;
  }

  private nodeWidth(label: string): number {
    return Math.max(40, label.length * CHAR_W + 2 * PAD_X);
  }

  render(): void {
    this.container.textContent = "";
    const svg = this.verticalLayout ? this.renderVertical() : this.renderTree();
    this.container.appendChild(svg);
    this.container.appendChild(this.renderDetail());
  }

  // ---- tree layout -------------------------------------------------------

  private renderTree(): SVGSVGElement {
    const nodes: LaidOutNode[] = [];
    const edges: Array<[LaidOutNode, LaidOutNode]> = [];
    // bottom-up tidy layout: a subtree's width is the sum of its children's
    const layout = (id: number, depth: number, x0: number): LaidOutNode => {
      const v = this.byId.get(id)!;
      const ownW = this.nodeWidth(v.axiom) + GAP_X;
      const step = this.stepFor.get(id);
      const expanded = step && this.hasSubproof(id) && !this.collapsed.has(id);
      const node: LaidOutNode = {
        kind: "axiom", vertex: v, x: 0, y: depth * ROW_H,
        width: this.nodeWidth(v.axiom),
      };
      nodes.push(node);
      if (!expanded) {
        node.x = x0 + ownW / 2;
        (node as unknown as { spanW: number }).spanW = ownW;
        return node;
      }
      const stepNode: LaidOutNode = {
        kind: "step", step, x: 0, y: depth * ROW_H + ROW_H / 2,
        width: this.nodeWidth(step!.rule),
      };
      nodes.push(stepNode);
      let x = x0;
      const kids: LaidOutNode[] = [];
      for (const p of step!.premises) {
        const child = layout(p, depth + 1, x);
        x += (child as unknown as { spanW: number }).spanW;
        kids.push(child);
        edges.push([child, stepNode]);
      }
      const spanW = Math.max(x - x0, ownW);
      node.x = x0 + spanW / 2;
      stepNode.x = node.x;
      (node as unknown as { spanW: number }).spanW = spanW;
      edges.push([stepNode, node]);
      return node;
    };
    const root = layout(this.proof.root, 0, 0);
    const depthMax = Math.max(...nodes.map((n) => n.y));
    // conclusion at the bottom: flip vertically
    for (const n of nodes) n.y = depthMax - n.y;
    const width = (root as unknown as { spanW: number }).spanW + GAP_X;
    const height = depthMax + ROW_H;
    const svg = svgEl("svg", {
      width: String(Math.max(width, 200)), height: String(height),
      class: "proof-tree",
    });
    for (const [from, to] of edges) {
      svg.appendChild(svgEl("line", {
        x1: String(from.x), y1: String(from.y + NODE_H / 2),
        x2: String(to.x), y2: String(to.y + NODE_H / 2),
        class: "proof-edge",
      }));
    }
    for (const n of nodes)
      svg.appendChild(n.kind === "axiom"
        ? this.axiomNode(n.vertex!, n.x, n.y, n.width)
        : this.stepNode(n.step!, n.x, n.y, n.width));
    return svg;
  }

  // ---- vertical layout ---------------------------------------------------

  private renderVertical(): SVGSVGElement {
    const order = this.visibleAxioms();
    const rowOf = new Map<number, number>();
    order.forEach((id, i) => rowOf.set(id, i));
    const widths = order.map((id) => this.nodeWidth(this.byId.get(id)!.axiom));
    const colW = Math.max(...widths) + GAP_X;
    const svg = svgEl("svg", {
      width: String(colW + 120),
      height: String(order.length * (NODE_H + 14) + 10),
      class: "proof-tree vertical",
    });
    const rowY = (i: number) => 5 + i * (NODE_H + 14);
    for (const id of order) {
      const step = this.stepFor.get(id);
      if (!step || this.collapsed.has(id) || !this.hasSubproof(id)) continue;
      // one bracket per inference, on the right side of the column
      const ys = [...step.premises.map((p) => rowOf.get(p)!), rowOf.get(id)!]
        .map((i) => rowY(i) + NODE_H / 2);
      const xr = colW + 16;
      const edge = svgEl("polyline", {
        points: ys.map((y) => `${colW},${y} ${xr},${y}`).join(" "),
        class: "side-edge", fill: "none",
      });
      edge.addEventListener("click", () => this.selectStep(step));
      svg.appendChild(edge);
    }
    for (const id of order) {
      const v = this.byId.get(id)!;
      const g = this.axiomNode(v, colW / 2, rowY(rowOf.get(id)!),
                               this.nodeWidth(v.axiom));
      g.classList.add("axiom-row");
      svg.appendChild(g);
    }
    return svg;
  }

  // ---- nodes -------------------------------------------------------------

  private axiomNode(v: ProofVertex, cx: number, y: number,
                    width: number): SVGGElement {
    const cls = ["axiom-node"];
    if (v.asserted) cls.push("asserted");
    if (v.known) cls.push("known");
    const folded = this.hasSubproof(v.id) && this.collapsed.has(v.id);
    if (folded) cls.push("collapsed");
    const g = svgEl("g", { class: cls.join(" "), "data-id": String(v.id) });
    g.appendChild(svgEl("rect", {
      x: String(cx - width / 2), y: String(y),
      width: String(width), height: String(NODE_H), rx: "4",
    }));
    const label = svgEl("text", {
      x: String(cx), y: String(y + NODE_H / 2 + 4), "text-anchor": "middle",
      class: "axiom-label",
    });
    label.textContent = v.axiom;
    g.appendChild(label);
    if (this.hasSubproof(v.id)) {
      const ctl = (glyph: string, cls2: string, dx: number,
                   fn: () => void, title: string) => {
        const t = svgEl("text", {
          x: String(cx + width / 2 + dx), y: String(y + NODE_H / 2 + 4),
          class: `ctl ${cls2}`,
        });
        t.textContent = glyph;
        const tt = svgEl("title", {});
        tt.textContent = title;
        t.appendChild(tt);
        t.addEventListener("click", fn);
        g.appendChild(t);
      };
      if (folded) {
        ctl("⊞", "ctl-reveal", 4, () => this.revealStep(v.id),
            "reveal one step");
        ctl("⊕", "ctl-expand-all", 18, () => this.expandAllAt(v.id),
            "expand all");
      } else {
        ctl("⊟", "ctl-collapse", 4, () => this.collapseAt(v.id),
            "collapse subtree");
        ctl("⊕", "ctl-expand-all", 18, () => this.expandAllAt(v.id),
            "expand all");
      }
    }
    return g;
  }

  private stepNode(s: ProofStep, cx: number, y: number,
                   width: number): SVGGElement {
    const g = svgEl("g", { class: "step-node" });
    g.appendChild(svgEl("rect", {
      x: String(cx - width / 2), y: String(y),
      width: String(width), height: String(NODE_H - 6), rx: "10",
    }));
    const label = svgEl("text", {
      x: String(cx), y: String(y + NODE_H / 2), "text-anchor": "middle",
      class: "step-label",
    });
    label.textContent = s.rule;
    g.appendChild(label);
    g.addEventListener("click", () => this.selectStep(s));
    return g;
  }

  private renderDetail(): HTMLElement {
    const div = document.createElement("div");
    div.className = "step-detail";
    if (this.selectedStep) {
      const s = this.selectedStep;
      const rule = document.createElement("strong");
      rule.textContent = s.rule;
      div.appendChild(rule);
      if (s.eliminated.length) {
        const elim = document.createElement("span");
        elim.className = "eliminated";
        elim.textContent = ` — eliminated: ${s.eliminated.join(", ")}`;
        div.appendChild(elim);
      }
    }
    return div;
  }
}
