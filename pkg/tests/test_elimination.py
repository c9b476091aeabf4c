"""Proofs whose steps each eliminate a group of names from the signature."""

import threading
import time

import pytest

from proofforge.elimination import (EliminationTask, eligible_names,
                                    generate_elimination_proof, merge_steps)
from proofforge.extract import CancelToken, Cancelled
from proofforge.justify import NotEntailedError
from proofforge.proofmodel import (DEPTH, PoolStep, SIZE, check_proof,
                                   measure_proof)
from proofforge.syntax import (Signature, axiom_signature, parse_axiom,
                               parse_ontology)

CHAIN = parse_ontology(
    "sub(A, only(r, C1))\nsub(C1, or(C2, C3))\nsub(C2, C3)\n"
    "sub(only(r, C3), B)")
GOAL = parse_axiom("sub(A, B)")


def _labels(p):
    return [s.rule for s in sorted(p.steps, key=lambda s: s.conclusion)]


@pytest.mark.parametrize("strategy", ["heuristic", "nameOptimized"])
def test_stagewise_proof_shape(strategy):
    p = generate_elimination_proof(EliminationTask(CHAIN, GOAL,
                                                   strategy=strategy))
    assert check_proof(p, CHAIN, GOAL).valid
    assert measure_proof(p, SIZE) == 7
    assert measure_proof(p, DEPTH) == 3
    rules = {s.rule for s in p.steps}
    assert rules == {"eliminate C2", "eliminate C1", "eliminate r, C3"}


def test_size_optimized_beats_the_stagewise_shape():
    p = generate_elimination_proof(
        EliminationTask(CHAIN, GOAL, strategy="sizeOptimized"))
    assert check_proof(p, CHAIN, GOAL).valid
    assert measure_proof(p, SIZE) <= 7


def test_roles_listed_before_concepts_in_labels():
    p = generate_elimination_proof(EliminationTask(CHAIN, GOAL))
    assert any(s.rule.startswith("eliminate r, ") for s in p.steps)


def test_groups_merge_into_one_step():
    o = parse_ontology("sub(A, only(r, and(B1, and(B2, B3))))\n"
                       "sub(some(r, and(B1, and(B2, B3))), B)")
    goal = parse_axiom("sub(and(A, some(r, top)), B)")
    p = generate_elimination_proof(EliminationTask(o, goal))
    assert check_proof(p, o, goal).valid
    assert len(p.steps) == 1
    assert p.steps[0].rule == "eliminate B1, B2, B3"
    assert measure_proof(p, SIZE) == 3


def test_irrelevant_axioms_never_appear():
    o = parse_ontology("sub(A, X)\nsub(X, B)\nsub(Q, some(r, Q))")
    p = generate_elimination_proof(EliminationTask(o, parse_axiom("sub(A, B)")))
    axioms = {v.axiom for v in p.vertices}
    assert parse_axiom("sub(Q, some(r, Q))") not in axioms


def test_not_entailed():
    with pytest.raises(NotEntailedError):
        generate_elimination_proof(
            EliminationTask(CHAIN, parse_axiom("sub(B, A)")))


def test_asserted_goal_short_circuit():
    p = generate_elimination_proof(
        EliminationTask(CHAIN, parse_axiom("sub(C2, C3)")))
    assert len(p.vertices) == 1 and not p.steps


def test_eligible_names_excludes_goal_signature():
    names = eligible_names(CHAIN, axiom_signature(GOAL))
    assert "A" not in names and "B" not in names
    assert {"C1", "C2", "C3"} <= set(names)
    # r only guards non-trivial fillers, so it cannot be targeted up front
    assert "r" not in names


def test_name_optimized_eliminates_no_more_names_than_heuristic():
    def names_touched(p):
        out = set()
        for s in p.steps:
            if s.rule.startswith("eliminate "):
                out.update(s.rule[len("eliminate "):].split(", "))
        return out

    heur = generate_elimination_proof(
        EliminationTask(CHAIN, GOAL, strategy="heuristic"))
    opt = generate_elimination_proof(
        EliminationTask(CHAIN, GOAL, strategy="nameOptimized"))
    assert len(names_touched(opt)) <= len(names_touched(heur))


def test_size_optimized_never_larger_than_heuristic():
    o = parse_ontology("sub(A, and(X, Y))\nsub(X, P)\nsub(Y, Q)\n"
                       "sub(and(P, Q), B)")
    goal = parse_axiom("sub(A, B)")
    heur = generate_elimination_proof(EliminationTask(o, goal))
    opt = generate_elimination_proof(
        EliminationTask(o, goal, strategy="sizeOptimized"))
    assert check_proof(opt, o, goal).valid
    assert measure_proof(opt, SIZE) <= measure_proof(heur, SIZE)


def test_known_signature_marks_leaves():
    o = parse_ontology("sub(A, X)\nsub(X, B)\nsub(B, C)")
    goal = parse_axiom("sub(A, C)")
    known = Signature(frozenset({"X", "C"}), frozenset())
    p = generate_elimination_proof(EliminationTask(o, goal, known=known))
    assert check_proof(p, o, goal, known=known).valid
    assert any(v.known for v in p.vertices)


class CountingToken:
    """Duck-typed cancel token that fires after a fixed number of polls."""

    def __init__(self, fire_after=None):
        self.polls = 0
        self.fire_after = fire_after

    @property
    def cancelled(self):
        self.polls += 1
        return self.fire_after is not None and self.polls > self.fire_after


def test_cancel_size_optimized_returns_best_so_far():
    o = parse_ontology("sub(A, and(X, Y))\nsub(X, P)\nsub(Y, Q)\n"
                       "sub(and(P, Q), B)")
    goal = parse_axiom("sub(A, B)")
    # calibrate: count cancellation polls in an undisturbed run, then cancel
    # one poll before the end, when a first (possibly improvable) proof exists
    probe = CountingToken()
    generate_elimination_proof(EliminationTask(
        o, goal, strategy="sizeOptimized", cancel=probe))
    with pytest.raises(Cancelled) as e:
        generate_elimination_proof(EliminationTask(
            o, goal, strategy="sizeOptimized",
            cancel=CountingToken(fire_after=probe.polls - 1)))
    best = e.value.best
    assert best is not None
    assert best.suboptimal
    assert check_proof(best, o, goal).valid


def test_merge_keeps_steps_that_would_widen():
    a, b, c, d, e = (parse_axiom(t) for t in (
        "sub(A, B)", "sub(B, C)", "sub(C, D)", "sub(A, C)", "sub(A, D)"))
    steps = [PoolStep.make(d, [a, b], "eliminate B", eliminated=("B",)),
             PoolStep.make(e, [d, c], "eliminate C", eliminated=("C",))]
    merged = merge_steps(steps, e)
    # inlining B's step into C's would give 3 premises > max(2, 2): keep both
    assert len(merged) == 2
