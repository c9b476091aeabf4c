"""Proofs organized as successive name eliminations.

Starting from a justification of the goal, names outside the goal's signature
are forgotten one after another; each ontology the process passes through
becomes a proof stage, and each new axiom is linked to the previous stage by a
step labelled with the names whose elimination produced it. Names whose
elimination cannot be expressed on its own (the clause set keeps definers)
stay pending and are folded into the next expressible stage, which yields
steps eliminating several names at once.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .syntax import (And, Axiom, Bottom, Concept, Equiv, Exists, Forall, GCI,
                     Name, Not, Ontology, Or, Role, RoleInclusion, Signature,
                     Top, axiom_signature, axiom_unicode)
from .normalform import (AvLit, Clause, DefinerPool, DenormalizeError, ExLit,
                         NegLit, PosLit, denormalize,
                         drop_dead_definer_clauses, has_definer_cycle,
                         is_definer, normalize)
from .forgetting import (Budget, BudgetExceeded, DEFAULT_BUDGET, ForgetState,
                         _mentions, eliminate_concept_name, eliminate_role_name)
from .proofmodel import (InferencePool, Measure, PoolStep, Proof, SIZE,
                         measure_proof, single_vertex_proof)
from .extract import (CancelToken, Cancelled, ExtractionRequest, NoProofError,
                      extract_optimal)
from .justify import NotEntailedError, compute_justification
from . import tableau


STRATEGIES = ("heuristic", "nameOptimized", "sizeOptimized")


@dataclass
class EliminationTask:
    ontology: Ontology
    goal: Axiom
    strategy: str = "heuristic"
    measure: Measure = SIZE
    budget: Budget = DEFAULT_BUDGET
    known: Signature = Signature.empty()
    cancel: Optional[CancelToken] = None
    step_delay: float = 0.0  # test hook: slows each search expansion

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


# ---------------------------------------------------------------------------
# Name eligibility


def _role_trivial_occurrences(c: Concept, role: Role) -> bool:
    """True when every use of the role in c is ∃role.⊤ or ∀role.⊥."""
    if isinstance(c, (Exists, Forall)):
        if c.role == role:
            trivial = (isinstance(c, Exists) and isinstance(c.filler, Top)) or \
                      (isinstance(c, Forall) and isinstance(c.filler, Bottom))
            if not trivial:
                return False
        return _role_trivial_occurrences(c.filler, role)
    if isinstance(c, Not):
        return _role_trivial_occurrences(c.arg, role)
    if isinstance(c, (And, Or)):
        return all(_role_trivial_occurrences(a, role) for a in c.args)
    return True


def eligible_names(o: Ontology, goal_sig: Signature) -> list:
    """Foreign names an elimination step may target next.

    Concept names only need to occur; a role is eligible only once every
    occurrence is ∃r.⊤ or ∀r.⊥, so that dropping it cannot lose successors'
    constraints.
    """
    sig = o.signature
    out = [n for n in sorted(sig.concept_names) if n not in goal_sig]
    for r in sorted(sig.role_names):
        if r in goal_sig:
            continue
        role = Role(r)
        if all(_role_trivial_occurrences(a.lhs, role) and
               _role_trivial_occurrences(a.rhs, role)
               for a in o if isinstance(a, (GCI, Equiv))):
            out.append(r)
    return out


def _clause_candidates(state: ForgetState, goal_sig: Signature,
                       excluded: set) -> list:
    """(score, name, kind) candidates from the live clause set, best first.

    The score counts occurrences, weighting occurrences under a role
    restriction (i.e. inside definer definitions) double so that names buried
    in fillers are eliminated late.
    """
    concept_occ: dict = {}
    role_occ: dict = {}
    role_blocked: set = set()
    memo: dict = {}
    for c in state.clauses:
        defining = bool(c.neg_definers())
        for l in c:
            if isinstance(l, (PosLit, NegLit)):
                if not is_definer(l.name):
                    concept_occ[l.name] = concept_occ.get(l.name, 0) + (2 if defining else 1)
            else:
                role_occ[l.role.name] = role_occ.get(l.role.name, 0) + 2
                if _mentions(state, l.definer, memo):
                    role_blocked.add(l.role.name)
    for a in state.role_axioms:
        for r in (a.sub.name, a.sup.name):
            role_occ.setdefault(r, 0)
    cands = []
    for n, occ in concept_occ.items():
        if n not in goal_sig and n not in excluded:
            cands.append((occ, n, "concept"))
    for n, occ in role_occ.items():
        if n not in goal_sig and n not in excluded and n not in role_blocked:
            cands.append((occ, n, "role"))
    return sorted(cands, key=lambda t: (t[0], t[1]))


# ---------------------------------------------------------------------------
# Single elimination attempts over a clause state


@dataclass
class _StageState:
    """Search node: clause set between denormalizable stages."""
    state: ForgetState
    stages: list          # of Ontology
    labels: list          # per stage > 0: names eliminated to reach it
    excluded: frozenset   # failed or already-eliminated names
    pending: tuple = ()

    def clone(self) -> "_StageState":
        st = ForgetState(self.state.clauses, self.state.role_axioms,
                         self.state.pool, self.state.log)
        return _StageState(st, list(self.stages), list(self.labels),
                           self.excluded, self.pending)

    def key(self):
        return (frozenset(self.state.clause_set), tuple(self.state.role_axioms),
                self.excluded, tuple(sorted(self.pending)))


def _attempt(node: _StageState, name: str, kind: str, budget: Budget):
    """Eliminate one name in place; returns "stage" | "pending" | "failed"."""
    state = node.state
    snap = state.snapshot()
    pre_cyclic = has_definer_cycle(drop_dead_definer_clauses(state.clauses))
    try:
        if kind == "concept":
            eliminate_concept_name(state, name, budget)
        else:
            eliminate_role_name(state, name, budget)
    except BudgetExceeded:
        state.restore(snap)
        node.excluded |= {name}
        return "failed"
    if has_definer_cycle(drop_dead_definer_clauses(state.clauses)) and not pre_cyclic:
        state.restore(snap)
        node.excluded |= {name}
        return "failed"
    node.excluded |= {name}
    try:
        stage = denormalize(state.clauses, state.role_axioms, state.pool)
    except DenormalizeError:
        node.pending = node.pending + (name,)
        return "pending"
    node.stages.append(stage)
    node.labels.append(list(node.pending) + [name])
    node.pending = ()
    return "stage"


def _run_heuristic(node: _StageState, goal_sig: Signature, budget: Budget,
                   cancel: Optional[CancelToken]) -> _StageState:
    """Greedy fold: cheapest candidate first, reverting dead pending groups."""
    last_good = node.clone()
    while True:
        if cancel is not None and cancel.cancelled:
            raise Cancelled(None)
        cands = _clause_candidates(node.state, goal_sig, set(node.excluded))
        if not cands:
            if node.pending:
                # the group never became expressible; put those names back
                failed = node.excluded
                node = last_good.clone()
                node.excluded = failed
                continue
            return node
        _, name, kind = cands[0]
        outcome = _attempt(node, name, kind, budget)
        if outcome == "stage":
            last_good = node.clone()


def _group_attempt(node: _StageState, name: str, kind: str, goal_sig: Signature,
                   budget: Budget) -> Optional[_StageState]:
    """Eliminate name on a copy, greedily extending to a full stage group."""
    child = node.clone()
    outcome = _attempt(child, name, kind, budget)
    while outcome == "pending":
        cands = _clause_candidates(child.state, goal_sig, set(child.excluded))
        if not cands:
            return None
        _, nxt, k = cands[0]
        outcome = _attempt(child, nxt, k, budget)
    if outcome == "failed":
        return child if not child.pending else None
    return child


# ---------------------------------------------------------------------------
# Steps between stages


def _step_label(names: Iterable[str], sig: Signature) -> tuple:
    """Eliminated names ordered roles first, each group sorted."""
    roles = sorted(n for n in names if n in sig.role_names)
    concepts = sorted(n for n in names if n not in sig.role_names)
    return tuple(roles + concepts)


def build_steps(stages: list, labels: list, goal: Axiom, full_sig: Signature) -> list:
    """Pool steps linking each stage's new axioms to the previous stage."""
    steps = []
    for i in range(1, len(stages)):
        prev, cur = stages[i - 1], stages[i]
        eliminated = _step_label(labels[i - 1], full_sig)
        for a in cur:
            if a in prev:
                continue
            just = compute_justification(prev, a)
            prem_sig = Signature.empty()
            for p in just:
                prem_sig = prem_sig.union(axiom_signature(p))
            used = tuple(n for n in eliminated if n in prem_sig)
            if used:
                rule = "eliminate " + ", ".join(used)
                steps.append(PoolStep.make(a, just.axioms, rule, used))
            else:
                steps.append(PoolStep.make(a, just.axioms, "normalization"))
    last = stages[-1]
    if goal not in last:
        just = compute_justification(last, goal)
        steps.append(PoolStep.make(goal, just.axioms, "normalization"))
    return steps


def merge_steps(steps: list, goal: Axiom) -> list:
    """Collapse chains: inline a premise's producing step whenever doing so
    does not increase the premise count, unioning the eliminated names."""
    steps = list(steps)
    changed = True
    while changed:
        changed = False
        producer = {}
        for s in steps:
            producer.setdefault(s.conclusion, s)
        for s in list(steps):
            for p in s.premises:
                t = producer.get(p)
                if t is None or t is s:
                    continue
                new_premises = (set(s.premises) - {p}) | set(t.premises)
                if len(new_premises) > max(len(s.premises), len(t.premises)):
                    continue
                eliminated = set(s.eliminated) | set(t.eliminated)
                sig = Signature.empty()
                for a in itertools.chain(new_premises, [s.conclusion]):
                    sig = sig.union(axiom_signature(a))
                names = _step_label(eliminated, sig)
                rule = ("eliminate " + ", ".join(names)) if names else "normalization"
                merged = PoolStep.make(s.conclusion, new_premises, rule, names)
                steps[steps.index(s)] = merged
                # drop the inlined step if nothing else consumes its conclusion
                still_used = any(p in q.premises for q in steps if q is not t) or p == goal
                if not still_used and t in steps:
                    steps.remove(t)
                changed = True
                break
            if changed:
                break
    return steps


# ---------------------------------------------------------------------------
# Proof generation


def _finish(task: EliminationTask, node: _StageState, just: Ontology) -> Proof:
    full_sig = task.ontology.signature
    steps = build_steps(node.stages, node.labels, task.goal, full_sig)
    steps = merge_steps(steps, task.goal)
    pool = InferencePool(steps)
    req = ExtractionRequest(
        pool, task.goal, set(just.axioms), task.measure, known=task.known,
        known_check=_known_checker(task), cancel=task.cancel)
    return extract_optimal(req)


def _known_checker(task: EliminationTask):
    if not task.known.names:
        return None
    cache: dict = {}

    def check(a: Axiom) -> bool:
        if a not in cache:
            cache[a] = tableau.is_entailed(task.ontology, a)
        return cache[a]

    return check


def _initial_node(just: Ontology) -> _StageState:
    clauses, role_axioms, pool, _ = normalize(just)
    state = ForgetState(clauses, role_axioms, pool)
    return _StageState(state, [just], [], frozenset())


def generate_elimination_proof(task: EliminationTask) -> Proof:
    just = compute_justification(task.ontology, task.goal)
    if task.goal in task.ontology:
        return single_vertex_proof(task.goal)
    goal_sig = axiom_signature(task.goal)
    node = _initial_node(just)
    if task.strategy == "heuristic":
        node = _run_heuristic(node, goal_sig, task.budget, task.cancel)
        return _finish(task, node, just)
    if task.strategy == "nameOptimized":
        node = _search_fewest_names(task, node, goal_sig)
        return _finish(task, node, just)
    return _search_smallest_proof(task, node, just, goal_sig)


def _open_candidates(node: _StageState, goal_sig: Signature) -> list:
    return _clause_candidates(node.state, goal_sig, set(node.excluded))


def _search_fewest_names(task: EliminationTask, root: _StageState,
                         goal_sig: Signature) -> _StageState:
    """A*: path cost counts eliminated names, remaining foreign names as the
    admissible estimate; finds a shortest grouping into stages."""
    counter = itertools.count()
    start_h = len(_open_candidates(root, goal_sig))
    heap = [(start_h, 0, next(counter), root)]
    seen: set = set()
    fallback = None
    while heap:
        if task.cancel is not None and task.cancel.cancelled:
            raise Cancelled(None)
        if task.step_delay:
            time.sleep(task.step_delay)
        f, cost, _, node = heapq.heappop(heap)
        key = node.key()
        if key in seen:
            continue
        seen.add(key)
        cands = _open_candidates(node, goal_sig)
        if not cands:
            return node
        fallback = node
        for _, name, kind in cands:
            child = _group_attempt(node, name, kind, goal_sig, task.budget)
            if child is None:
                continue
            ccost = len(child.excluded)
            h = len(_open_candidates(child, goal_sig))
            heapq.heappush(heap, (ccost + h, ccost, next(counter), child))
    return fallback if fallback is not None else root


def _partial_cost(task: EliminationTask, node: _StageState, just: Ontology) -> float:
    """Lower bound: best derivation values of the current stage's axioms."""
    full_sig = task.ontology.signature
    try:
        steps = merge_steps(build_steps(node.stages, node.labels,
                                        task.goal, full_sig), task.goal)
    except NotEntailedError:
        return float("inf")
    pool = InferencePool(s for s in steps if s.conclusion != task.goal)
    total = 0.0
    m = task.measure
    for a in node.stages[-1]:
        try:
            p = extract_optimal(ExtractionRequest(pool, a, set(just.axioms), m))
            v = measure_proof(p, m)
        except NoProofError:
            v = m.leaf_value(a)
        total = max(total, v) if m.name == "depth" else total + v
    return total


def _search_smallest_proof(task: EliminationTask, root: _StageState,
                           just: Ontology, goal_sig: Signature) -> Proof:
    """Best-first over stage sequences, scoring partial proofs by measure."""
    counter = itertools.count()
    heap = [(0.0, next(counter), root)]
    best_proof: Optional[Proof] = None
    best_value = float("inf")
    while heap:
        if task.cancel is not None and task.cancel.cancelled:
            if best_proof is not None:
                best_proof.suboptimal = True
                raise Cancelled(best_proof)
            raise Cancelled(None)
        if task.step_delay:
            time.sleep(task.step_delay)
        cost, _, node = heapq.heappop(heap)
        if cost >= best_value:
            break
        cands = _open_candidates(node, goal_sig)
        if not cands:
            try:
                proof = _finish(task, node, just)
            except NoProofError:
                continue
            value = measure_proof(proof, task.measure)
            if value < best_value:
                best_value, best_proof = value, proof
            continue
        for _, name, kind in cands:
            child = _group_attempt(node, name, kind, goal_sig, task.budget)
            if child is None:
                continue
            heapq.heappush(heap, (_partial_cost(task, child, just),
                                  next(counter), child))
    if best_proof is None:
        # no stage sequence terminated; fall back to the greedy fold
        node = _run_heuristic(root, goal_sig, task.budget, task.cancel)
        return _finish(task, node, just)
    return best_proof
