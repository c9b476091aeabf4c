"""Optimal proof extraction from inference pools.

Dijkstra-style search over the derivation hypergraph: each axiom gets a best
tentative value under a recursive measure; an inference step can be relaxed
once all of its premises are finalized. The result is unfolded into a tree,
duplicating shared subderivations.
"""

from __future__ import annotations

import heapq
import itertools
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .syntax import Axiom, Ontology, Signature, axiom_signature, axiom_unicode
from .proofmodel import (InferencePool, Measure, PoolStep, Proof, ProofStep,
                         Vertex, measure_proof)
from .tableau import ResourceLimitError


class NoProofError(RuntimeError):
    """The goal is not derivable from the admissible leaves."""


class Cancelled(RuntimeError):
    """Search was cancelled; carries the best proof found so far, if any."""

    def __init__(self, best: Optional[Proof] = None):
        self.best = best
        super().__init__("proof search cancelled")


class CancelToken:
    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()


@dataclass
class ExtractionRequest:
    pool: InferencePool
    goal: Axiom
    asserted: set  # axioms usable as asserted leaves
    measure: Measure
    known: Signature = Signature.empty()
    # entailment oracle for known leaves; called lazily and memoized
    known_check: Optional[Callable[[Axiom], bool]] = None
    cancel: Optional[CancelToken] = None


class _Best:
    __slots__ = ("value", "step", "final")

    def __init__(self, value, step):
        self.value = value
        self.step = step  # None for a leaf, else PoolStep
        self.final = False


def _leaf_kinds(req: ExtractionRequest, axiom: Axiom, memo: dict):
    """(asserted, known) flags for axiom as a leaf candidate."""
    asserted = axiom in req.asserted
    known = False
    if not asserted and req.known_check is not None:
        if axiom not in memo:
            memo[axiom] = (axiom_signature(axiom).issubset(req.known)
                           and req.known_check(axiom))
        known = memo[axiom]
    return asserted, known


def _step_priority(step: PoolStep):
    return (len(step.premises), tuple(axiom_unicode(p) for p in step.premises),
            step.rule)


def extract_optimal(req: ExtractionRequest) -> Proof:
    m = req.measure
    best: dict = {}
    known_memo: dict = {}
    counter = itertools.count()
    heap: list = []

    def push(axiom, value, step):
        cur = best.get(axiom)
        if cur is not None and cur.final:
            return
        if cur is None or value < cur.value or (
                value == cur.value and step is not None and cur.step is not None
                and _step_priority(step) < _step_priority(cur.step)) or (
                value == cur.value and step is None and cur.step is not None):
            best[axiom] = _Best(value, step)
            heapq.heappush(heap, (value, axiom_unicode(axiom), next(counter), axiom))

    universe = req.pool.axioms | set(req.asserted) | {req.goal}
    for a in universe:
        asserted, known = _leaf_kinds(req, a, known_memo)
        if asserted or known:
            push(a, m.leaf_value(a), None)

    waiting: dict = {}  # axiom -> steps with that axiom among unfinalized premises
    remaining: dict = {}  # step -> count of unfinalized premises
    for s in req.pool.steps:
        remaining[s] = len(s.premises)
        for p in s.premises:
            waiting.setdefault(p, []).append(s)
        if not s.premises:
            push(s.conclusion, m.combine(s.conclusion, ()), s)

    while heap:
        if req.cancel is not None and req.cancel.cancelled:
            raise Cancelled(_unfold_if_reached(req, best, suboptimal=True))
        value, _, _, axiom = heapq.heappop(heap)
        cur = best[axiom]
        if cur.final or value > cur.value:
            continue
        cur.final = True
        if axiom == req.goal:
            # goal settled optimally; nothing above it matters
            break
        for s in waiting.get(axiom, ()):
            remaining[s] -= 1
            if remaining[s] == 0:
                vals = tuple(best[p].value for p in s.premises)
                push(s.conclusion, m.combine(s.conclusion, vals), s)

    goal_best = best.get(req.goal)
    if goal_best is None:
        raise NoProofError(f"no proof of {axiom_unicode(req.goal)}")
    proof = _unfold(req, best, known_memo)
    return proof


def _unfold_if_reached(req, best, suboptimal: bool) -> Optional[Proof]:
    if req.goal not in best:
        return None
    # finalized values may be incomplete; unfold whatever the table holds
    proof = _unfold(req, best, {})
    proof.suboptimal = suboptimal
    return proof


def _unfold(req: ExtractionRequest, best: dict, known_memo: dict) -> Proof:
    vertices: list = []
    steps: list = []
    ids = itertools.count()

    def build(axiom: Axiom) -> int:
        vid = next(ids)
        entry = best[axiom]
        asserted, known = _leaf_kinds(req, axiom, known_memo)
        if entry.step is None:
            vertices.append(Vertex(vid, axiom, asserted=asserted, known=known))
            return vid
        vertices.append(Vertex(vid, axiom, asserted=False, known=False))
        child_ids = tuple(build(p) for p in entry.step.premises)
        steps.append(ProofStep(vid, child_ids, entry.step.rule, entry.step.eliminated))
        return vid

    root = build(req.goal)
    return Proof(vertices, steps, root)


# ---------------------------------------------------------------------------
# Brute-force enumeration oracle


def enumerate_all_proofs(pool: InferencePool, goal: Axiom, asserted: set,
                         max_vertices: int,
                         known: Signature = Signature.empty(),
                         known_check: Optional[Callable[[Axiom], bool]] = None,
                         limit: int = 200000) -> list:
    """All tree proofs of goal with at most max_vertices vertices.

    Exponential; only suitable as a test oracle on small pools.
    """
    known_memo: dict = {}
    spent = itertools.count()

    def leaf_flags(axiom):
        asserted_f = axiom in asserted
        known_f = False
        if not asserted_f and known_check is not None:
            if axiom not in known_memo:
                known_memo[axiom] = (axiom_signature(axiom).issubset(known)
                                     and known_check(axiom))
            known_f = known_memo[axiom]
        return asserted_f, known_f

    def derivations(axiom, budget):
        """Yield (vertex_count, tree); tree = (axiom, None) leaf or
        (axiom, (step, subtrees))."""
        if budget < 1:
            return
        if next(spent) > limit:
            raise ResourceLimitError("proof enumeration limit exceeded")
        a_f, k_f = leaf_flags(axiom)
        if a_f or k_f:
            yield 1, (axiom, None)
        for step in pool.concluding(axiom):
            for count, subs in _sequences(step.premises, budget - 1):
                yield 1 + count, (axiom, (step, subs))

    def _sequences(premises, budget):
        if not premises:
            yield 0, ()
            return
        head, rest = premises[0], premises[1:]
        for c1, t1 in derivations(head, budget - len(rest)):
            for c2, ts in _sequences(rest, budget - c1):
                yield c1 + c2, (t1,) + ts

    proofs = []
    for _count, tree in derivations(goal, max_vertices):
        vertices, steps = [], []
        ids = itertools.count()

        def build(node):
            axiom, inner = node
            vid = next(ids)
            if inner is None:
                a_f, k_f = leaf_flags(axiom)
                vertices.append(Vertex(vid, axiom, asserted=a_f, known=k_f))
            else:
                step, subs = inner
                vertices.append(Vertex(vid, axiom))
                child_ids = tuple(build(s) for s in subs)
                steps.append(ProofStep(vid, child_ids, step.rule, step.eliminated))
            return vid

        root = build(tree)
        proofs.append(Proof(vertices, steps, root))
    return proofs


def minimal_value(pool: InferencePool, goal: Axiom, asserted: set, measure: Measure,
                  max_vertices: int, **kw):
    """Oracle: minimum measure over every enumerated proof, or None."""
    proofs = enumerate_all_proofs(pool, goal, asserted, max_vertices, **kw)
    if not proofs:
        return None
    return min(measure_proof(p, measure) for p in proofs)
