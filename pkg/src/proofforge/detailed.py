"""Fine-grained proofs replaying the forgetting calculus step by step.

The goal's justification is normalized to clauses and every name outside the
goal is forgotten with inference logging on. Each logged clause becomes an
axiom vertex (tidied, definers substituted by the fillers they stand for) and
each rule application becomes a candidate step; extraction then picks the best
proof. Normalization leaves are linked back to the input axioms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .syntax import (Axiom, GCI, Name, Ontology, Signature, axiom_signature,
                     axiom_unicode, Bottom, Top)
from .normalform import (Clause, DefinerPool, NegLit, PosLit, beautify,
                         clause_axiom, is_definer, make_clause,
                         normalize_axiom, substitute_axiom)
from .forgetting import (Budget, DEFAULT_BUDGET, ForgetResult, InferenceLog,
                         forget_signature)
from .proofmodel import (InferencePool, Measure, PoolStep, Proof, SIZE,
                         single_vertex_proof)
from .extract import (CancelToken, ExtractionRequest, NoProofError,
                      extract_optimal)
from .justify import compute_justification
from . import tableau

logger = logging.getLogger(__name__)

SIGNATURE_WARNING_LIMIT = 18


class GoalNotDerivedError(RuntimeError):
    """Forgetting finished without producing the goal clause."""


def _goal_clause(goal: Axiom) -> Optional[Clause]:
    """The goal as a single definer-free clause, or None if it has none."""
    pool = DefinerPool()
    clauses = normalize_axiom(goal, pool)
    if len(clauses) != 1 or len(pool) != 0:
        return None
    return clauses[0]


def final_clause_to_goal(clauses, goal: Axiom, process=None) -> tuple:
    """(clause, step) closing the gap between the clause form and the goal.

    Syntactic subset matching covers atomic goals; goals that normalize into
    several clauses fall back to a semantic search over the processed axioms.
    """
    target = _goal_clause(goal)
    found = None
    if target is not None:
        for c in clauses:
            if c <= target and (found is None or len(c) < len(found)):
                found = c
    if found is None and process is not None:
        for c in clauses:
            a = process(c)
            if a is None:
                continue
            if tableau.is_entailed(Ontology([a]), goal) and \
                    (found is None or len(c) < len(found)):
                found = c
    if found is None:
        raise GoalNotDerivedError(f"no clause implies {axiom_unicode(goal)}")
    return found, PoolStep.make(goal, [clause_axiom(found)], "conclusion")


def _processor(pool: DefinerPool):
    subst = {d: c for d, c in pool.represents.items()}
    cache: dict = {}

    def process(clause: Clause) -> Optional[Axiom]:
        if clause not in cache:
            tidy = beautify(clause_axiom(clause))
            cache[clause] = None if tidy is None else substitute_axiom(tidy, subst)
        return cache[clause]

    return process


def build_detailed_pool(res: ForgetResult, just: Ontology, goal: Axiom) -> InferencePool:
    process = _processor(res.state.pool)
    pool = InferencePool()
    for entry in res.log.entries:
        concl = process(entry.conclusion)
        if concl is None:
            continue
        if entry.rule == "Normalize":
            if concl in just:
                continue  # the clause is an input axiom; it stays a leaf
            premises = compute_justification(just, concl).axioms
            pool.add(PoolStep.make(concl, premises, "Normalize"))
            continue
        premises = []
        identity = False
        for p in entry.premises + entry.witnesses:
            a = process(p)
            if a == concl:
                # the premise collapses onto the conclusion after definers
                # are substituted away: the whole step is an identity
                identity = True
                break
            if a is not None:
                premises.append(a)
        premises.extend(entry.role_premises)
        if identity or not premises:
            continue
        pool.add(PoolStep.make(concl, premises, entry.rule))
    found, closing = final_clause_to_goal(res.state.clauses, goal, process)
    final_axiom = process(found)
    if final_axiom is not None and final_axiom != goal:
        pool.add(PoolStep.make(goal, [final_axiom], "conclusion"))
    return pool


def generate_detailed_proof(o: Ontology, goal: Axiom, measure: Measure = SIZE,
                            known: Signature = Signature.empty(),
                            known_check=None,
                            cancel: Optional[CancelToken] = None,
                            budget: Budget = DEFAULT_BUDGET) -> Proof:
    if goal in o:
        return single_vertex_proof(goal)
    just = compute_justification(o, goal)
    sig = just.signature
    if len(sig.names) > SIGNATURE_WARNING_LIMIT:
        logger.warning("justification signature has %d names; the detailed "
                       "calculus may be slow", len(sig.names))
    keep = set(axiom_signature(goal).names)
    res = forget_signature(just, keep, logging=True, budget=budget)
    pool = build_detailed_pool(res, just, goal)
    req = ExtractionRequest(pool, goal, set(just.axioms), measure,
                            known=known, known_check=known_check, cancel=cancel)
    return extract_optimal(req)
