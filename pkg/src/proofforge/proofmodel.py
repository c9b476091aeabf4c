"""Proof hypergraphs, inference pools, recursive measures, serialization.

A proof is a tree-shaped acyclic hypergraph: axiom vertices plus inference
steps, each step connecting a tuple of premise vertices to one conclusion
vertex. Leaves are either asserted (ontology axioms) or known (user-declared
signature).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .syntax import (Axiom, Ontology, Signature, axiom_signature, axiom_size,
                     axiom_unicode, parse_axiom_unicode)
from . import tableau


@dataclass(frozen=True)
class Vertex:
    id: int
    axiom: Axiom
    asserted: bool = False
    known: bool = False


@dataclass(frozen=True)
class ProofStep:
    conclusion: int
    premises: tuple  # of vertex ids, ordered
    rule: str
    eliminated: tuple = ()  # of names


@dataclass
class Proof:
    vertices: list
    steps: list
    root: int
    suboptimal: bool = False

    def vertex(self, vid: int) -> Vertex:
        return self._by_id()[vid]

    def _by_id(self) -> dict:
        return {v.id: v for v in self.vertices}

    def step_concluding(self) -> dict:
        """Map vertex id -> the step concluding it (assumes validity)."""
        return {s.conclusion: s for s in self.steps}

    def leaves(self) -> list:
        concl = {s.conclusion for s in self.steps}
        return [v for v in self.vertices if v.id not in concl]

    @property
    def root_axiom(self) -> Axiom:
        return self.vertex(self.root).axiom


def single_vertex_proof(axiom: Axiom, asserted: bool = True, known: bool = False) -> Proof:
    return Proof([Vertex(0, axiom, asserted=asserted, known=known)], [], 0)


# ---------------------------------------------------------------------------
# Inference pools


@dataclass(frozen=True)
class PoolStep:
    conclusion: Axiom
    premises: tuple  # of Axiom, canonical order
    rule: str
    eliminated: tuple = ()

    @staticmethod
    def make(conclusion: Axiom, premises: Iterable[Axiom], rule: str,
             eliminated: Iterable[str] = ()) -> "PoolStep":
        prems = tuple(sorted(set(premises), key=axiom_unicode))
        return PoolStep(conclusion, prems, rule, tuple(eliminated))


class InferencePool:
    """Candidate inference steps over axioms; multiple steps may share a
    conclusion."""

    def __init__(self, steps: Iterable[PoolStep] = ()):
        self.steps: list = []
        self._seen: set = set()
        self._by_conclusion: dict = {}
        for s in steps:
            self.add(s)

    def add(self, step: PoolStep):
        key = (step.conclusion, step.premises, step.rule)
        if key in self._seen:
            return
        self._seen.add(key)
        self.steps.append(step)
        self._by_conclusion.setdefault(step.conclusion, []).append(step)

    @property
    def axioms(self) -> set:
        out = set()
        for s in self.steps:
            out.add(s.conclusion)
            out.update(s.premises)
        return out

    def concluding(self, axiom: Axiom) -> list:
        return self._by_conclusion.get(axiom, [])

    def __len__(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# Measures


@dataclass(frozen=True)
class Measure:
    name: str
    leaf_value: Callable[[Axiom], float]
    combine: Callable[[Axiom, tuple], float]  # monotone in every child value


SIZE = Measure("size", lambda a: 1, lambda a, vs: 1 + sum(vs))
DEPTH = Measure("depth", lambda a: 0, lambda a, vs: 1 + max(vs) if vs else 0)
WEIGHTED_SIZE = Measure("weightedSize", lambda a: axiom_size(a),
                        lambda a, vs: axiom_size(a) + sum(vs))

MEASURES = {m.name: m for m in (SIZE, DEPTH, WEIGHTED_SIZE)}


def measure_proof(p: Proof, m: Measure):
    concluding = p.step_concluding()

    def value(vid: int):
        v = p.vertex(vid)
        step = concluding.get(vid)
        if step is None:
            return m.leaf_value(v.axiom)
        return m.combine(v.axiom, tuple(value(q) for q in step.premises))

    return value(p.root)


# ---------------------------------------------------------------------------
# Validity checking


@dataclass
class ValidityReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)

    def __str__(self):
        return "valid" if self.valid else "; ".join(self.violations)


def check_proof(p: Proof, o: Ontology, goal: Axiom,
                known: Signature = Signature.empty(),
                cfg: tableau.TableauConfig = tableau.DEFAULT_CONFIG) -> ValidityReport:
    rep = ValidityReport()
    ids = [v.id for v in p.vertices]
    if len(set(ids)) != len(ids):
        rep.add("duplicate vertex ids")
        return rep
    byid = p._by_id()
    if p.root not in byid:
        rep.add(f"root id {p.root} missing")
        return rep

    for i, s in enumerate(p.steps):
        for vid in (s.conclusion, *s.premises):
            if vid not in byid:
                rep.add(f"step {i} references unknown vertex {vid}")
                return rep

    # tree property: each vertex premise of at most one step
    used = {}
    for i, s in enumerate(p.steps):
        for vid in s.premises:
            if vid in used:
                rep.add(f"vertex {vid} is a premise of steps {used[vid]} and {i}")
            used[vid] = i

    concl_count = {}
    for i, s in enumerate(p.steps):
        concl_count.setdefault(s.conclusion, []).append(i)
    for vid, idxs in concl_count.items():
        if len(idxs) > 1:
            rep.add(f"vertex {vid} concluded by multiple steps {idxs}")

    # acyclicity via DFS over premise -> conclusion edges
    succ = {}
    for s in p.steps:
        for vid in s.premises:
            succ.setdefault(vid, []).append(s.conclusion)
    state = {}
    def cyclic(v):
        state[v] = 1
        for w in succ.get(v, ()):
            st = state.get(w)
            if st == 1 or (st is None and cyclic(w)):
                return True
        state[v] = 2
        return False
    for v in byid:
        if state.get(v) is None and cyclic(v):
            rep.add(f"cycle through vertex {v}")
            return rep

    if byid[p.root].axiom != goal:
        rep.add(f"root axiom {axiom_unicode(byid[p.root].axiom)!r} differs from goal "
                f"{axiom_unicode(goal)!r}")

    # reachability from root (backwards over steps)
    reachable = set()
    stack = [p.root]
    concluding = {s.conclusion: s for s in p.steps}
    while stack:
        v = stack.pop()
        if v in reachable:
            continue
        reachable.add(v)
        s = concluding.get(v)
        if s:
            stack.extend(s.premises)
    for v in byid:
        if v not in reachable:
            rep.add(f"vertex {v} unreachable from root")

    for v in p.vertices:
        if v.id in concluding:
            continue
        if not (v.asserted or v.known):
            rep.add(f"leaf {v.id} ({axiom_unicode(v.axiom)}) neither asserted nor known")
        elif v.asserted and v.axiom not in o:
            rep.add(f"asserted leaf {v.id} ({axiom_unicode(v.axiom)}) not in the ontology")
        elif v.known and not v.asserted:
            if not axiom_signature(v.axiom).issubset(known):
                rep.add(f"known leaf {v.id} uses names outside the known signature")
            elif not tableau.is_entailed(o, v.axiom, cfg):
                rep.add(f"known leaf {v.id} ({axiom_unicode(v.axiom)}) not entailed")

    for i, s in enumerate(p.steps):
        premises = Ontology([byid[q].axiom for q in s.premises])
        if not tableau.is_entailed(premises, byid[s.conclusion].axiom, cfg):
            rep.add(f"step {i} unsound: premises do not entail "
                    f"{axiom_unicode(byid[s.conclusion].axiom)!r}")
    return rep


# ---------------------------------------------------------------------------
# JSON serialization


class SchemaError(ValueError):
    def __init__(self, message: str, pointer: str):
        self.pointer = pointer
        super().__init__(f"{message} at {pointer or '/'}")


def _topological_ids(p: Proof) -> list:
    """Vertex ids ordered premises-first, ties by printed axiom."""
    byid = p._by_id()
    indeg = {v.id: 0 for v in p.vertices}
    succ = {v.id: [] for v in p.vertices}
    for s in p.steps:
        indeg[s.conclusion] += len(s.premises)
        for q in s.premises:
            succ[q].append(s.conclusion)
    ready = sorted((v for v in indeg if indeg[v] == 0),
                   key=lambda v: axiom_unicode(byid[v].axiom))
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        changed = False
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                changed = True
        if changed:
            ready.sort(key=lambda x: axiom_unicode(byid[x].axiom))
    if len(order) != len(byid):
        raise ValueError("proof contains a cycle")
    return order


def proof_to_obj(p: Proof) -> dict:
    byid = p._by_id()
    order = _topological_ids(p)
    renum = {old: new for new, old in enumerate(order)}
    vertices = [{"id": renum[v], "axiom": axiom_unicode(byid[v].axiom),
                 "asserted": byid[v].asserted, "known": byid[v].known}
                for v in order]
    steps = sorted(
        ({"conclusion": renum[s.conclusion],
          "premises": sorted(renum[q] for q in s.premises),
          "rule": s.rule,
          "eliminated": list(s.eliminated)}
         for s in p.steps),
        key=lambda s: s["conclusion"])
    return {
        "goal": axiom_unicode(byid[p.root].axiom),
        "vertices": vertices,
        "steps": steps,
        "root": renum[p.root],
        "measures": {"size": int(measure_proof(p, SIZE)),
                     "depth": int(measure_proof(p, DEPTH)),
                     "weightedSize": int(measure_proof(p, WEIGHTED_SIZE))},
        "suboptimal": p.suboptimal,
    }


def write_json(p: Proof) -> str:
    return json.dumps(proof_to_obj(p), ensure_ascii=False, separators=(",", ":"))


_ROLE_TOKEN_RE = re.compile(r"[∃∀]([A-Za-z_][A-Za-z0-9_]*)\.")


def _require(cond, message, pointer):
    if not cond:
        raise SchemaError(message, pointer)


def read_json(text: str) -> Proof:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}", "") from e
    _require(isinstance(obj, dict), "expected object", "")
    for key in ("goal", "vertices", "steps", "root", "measures", "suboptimal"):
        _require(key in obj, f"missing field {key!r}", "")
    _require(isinstance(obj["vertices"], list), "expected array", "/vertices")
    _require(isinstance(obj["steps"], list), "expected array", "/steps")

    # role names must be collected document-wide before axiom strings can be
    # parsed: a bare "r ⊑ s" is a role inclusion only in role context
    role_names = set()
    for i, v in enumerate(obj["vertices"]):
        _require(isinstance(v, dict) and isinstance(v.get("axiom"), str),
                 "expected vertex object with string axiom", f"/vertices/{i}")
        role_names.update(_ROLE_TOKEN_RE.findall(v["axiom"]))

    vertices = []
    ids = set()
    for i, v in enumerate(obj["vertices"]):
        ptr = f"/vertices/{i}"
        _require(isinstance(v.get("id"), int), "expected integer id", ptr + "/id")
        _require(v["id"] not in ids, "duplicate id", ptr + "/id")
        ids.add(v["id"])
        for flag in ("asserted", "known"):
            _require(isinstance(v.get(flag), bool), f"expected boolean {flag}", f"{ptr}/{flag}")
        try:
            axiom = parse_axiom_unicode(v["axiom"], role_names)
        except ValueError as e:
            raise SchemaError(f"bad axiom: {e}", ptr + "/axiom") from e
        vertices.append(Vertex(v["id"], axiom, v["asserted"], v["known"]))

    steps = []
    for i, s in enumerate(obj["steps"]):
        ptr = f"/steps/{i}"
        _require(isinstance(s, dict), "expected object", ptr)
        _require(isinstance(s.get("conclusion"), int) and s["conclusion"] in ids,
                 "bad conclusion id", ptr + "/conclusion")
        _require(isinstance(s.get("premises"), list), "expected array", ptr + "/premises")
        for j, q in enumerate(s["premises"]):
            _require(isinstance(q, int) and q in ids, "bad premise id",
                     f"{ptr}/premises/{j}")
        _require(isinstance(s.get("rule"), str), "expected string rule", ptr + "/rule")
        _require(isinstance(s.get("eliminated"), list)
                 and all(isinstance(x, str) for x in s["eliminated"]),
                 "expected array of names", ptr + "/eliminated")
        steps.append(ProofStep(s["conclusion"], tuple(s["premises"]), s["rule"],
                               tuple(s["eliminated"])))

    _require(isinstance(obj["root"], int) and obj["root"] in ids, "bad root id", "/root")
    _require(isinstance(obj["suboptimal"], bool), "expected boolean", "/suboptimal")
    return Proof(vertices, steps, obj["root"], suboptimal=obj["suboptimal"])


# ---------------------------------------------------------------------------
# Graphviz


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def write_dot(p: Proof) -> str:
    byid = p._by_id()
    order = _topological_ids(p)
    lines = ["digraph proof {", "  rankdir=BT;"]
    for v in order:
        vx = byid[v]
        style = "rounded,bold" if vx.asserted else ("rounded,dashed" if vx.known else "rounded")
        lines.append(f'  v{v} [shape=box, style="{style}", '
                     f'label="{_dot_escape(axiom_unicode(vx.axiom))}"];')
    for i, s in enumerate(sorted(p.steps, key=lambda s: s.conclusion)):
        lines.append(f'  s{i} [shape=box, label="{_dot_escape(s.rule)}"];')
        for q in s.premises:
            lines.append(f"  v{q} -> s{i};")
        lines.append(f"  s{i} -> v{s.conclusion};")
    lines.append("}")
    return "\n".join(lines) + "\n"
