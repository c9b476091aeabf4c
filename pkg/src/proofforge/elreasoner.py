"""Consequence-based saturation for the EL fragment with role hierarchies.

Derives all subsumptions X ⊑ C between subconcepts of the input and records
every rule application into an inference pool, keeping alternative derivations
of the same fact so that proof extraction can pick the best one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .syntax import (And, Axiom, Bottom, Concept, Equiv, Exists, Forall, GCI,
                     Name, Not, Ontology, Or, Role, RoleInclusion, TOP, Top,
                     axiom_unicode)
from .proofmodel import InferencePool, PoolStep, Proof, single_vertex_proof
from .extract import ExtractionRequest, NoProofError, extract_optimal


def _el_concept(c: Concept) -> bool:
    if isinstance(c, (Top, Name)):
        return True
    if isinstance(c, And):
        return all(_el_concept(a) for a in c.args)
    if isinstance(c, Exists):
        return _el_concept(c.filler)
    return False


def is_elh(o: Ontology) -> bool:
    for a in o:
        if isinstance(a, RoleInclusion):
            continue
        if isinstance(a, (GCI, Equiv)):
            if not (_el_concept(a.lhs) and _el_concept(a.rhs)):
                return False
        else:
            return False
    return True


def _subconcepts(c: Concept, out: set):
    out.add(c)
    if isinstance(c, And):
        for a in c.args:
            _subconcepts(a, out)
    elif isinstance(c, Exists):
        _subconcepts(c.filler, out)


@dataclass
class TracedDerivation:
    pool: InferencePool
    derived: set  # of GCI facts X ⊑ C over subconcepts
    goal_reached: bool = False


def _role_path(o: Ontology, r: Role, s: Role) -> list:
    """Shortest chain of declared role inclusions from r to s (r != s)."""
    if r == s:
        return []
    edges: dict = {}
    for a in o.role_inclusions():
        edges.setdefault(a.sub, []).append(a)
    prev: dict = {r: None}
    queue = deque([r])
    while queue:
        x = queue.popleft()
        if x == s:
            path = []
            while prev[x] is not None:
                path.append(prev[x])
                x = prev[x].sub
            return list(reversed(path))
        for a in sorted(edges.get(x, ()), key=axiom_unicode):
            if a.sup not in prev:
                prev[a.sup] = a
                queue.append(a.sup)
    raise ValueError(f"no declared path from {r.name} to {s.name}")


def saturate(o: Ontology, goal: Axiom = None) -> TracedDerivation:
    if not is_elh(o):
        raise ValueError("saturation requires an EL ontology with role hierarchies")

    # inclusions usable on the right of the cut rule, with their source axiom
    gcis: list = []
    universe: set = {TOP}
    for a in o:
        if isinstance(a, GCI):
            gcis.append((a.lhs, a.rhs, a))
        elif isinstance(a, Equiv):
            gcis.append((a.lhs, a.rhs, a))
            gcis.append((a.rhs, a.lhs, a))
        else:
            continue
        _subconcepts(a.lhs, universe)
        _subconcepts(a.rhs, universe)

    by_lhs: dict = {}
    for lhs, rhs, ax in gcis:
        by_lhs.setdefault(lhs, []).append((rhs, ax))
    conj_of: dict = {}  # concept -> conjunctions in the universe containing it
    exists_targets: dict = {}  # filler -> Exists concepts in the universe
    for c in universe:
        if isinstance(c, And):
            for arg in c.args:
                conj_of.setdefault(arg, []).append(c)
        elif isinstance(c, Exists):
            exists_targets.setdefault(c.filler, []).append(c)

    pool = InferencePool()
    inputs = set(o.axioms)
    facts: set = set()
    by_subject: dict = {}  # X -> set of C with (X, C) derived
    exists_facts: dict = {}  # Z -> list of (X, Exists(r, Z)) facts
    queue = deque()

    def record(x: Concept, c: Concept, premises, rule: str):
        concl = GCI(x, c)
        if concl not in inputs:
            pool.add(PoolStep.make(concl, premises, rule))
        if (x, c) in facts:
            return
        facts.add((x, c))
        by_subject.setdefault(x, set()).add(c)
        if isinstance(c, Exists):
            exists_facts.setdefault(c.filler, []).append((x, c))
        queue.append((x, c))

    for x in sorted(universe):
        record(x, x, (), "R0")
        if x != TOP:
            record(x, TOP, (), "RTop")

    def fire_exists(x: Concept, ex: Exists, z: Concept, y: Concept):
        """From X ⊑ ∃r.Z and Z ⊑ Y conclude X ⊑ ∃s.Y for matching ∃s.Y."""
        for target in exists_targets.get(y, ()):
            if not o.role_subsumes(ex.role, target.role):
                continue
            if target.role == ex.role and y == z:
                continue  # conclusion would equal the premise
            premises = [GCI(x, ex)]
            rule = "RExists"
            if y != z:
                premises.append(GCI(z, y))
            elif target.role != ex.role:
                rule = "RRole"
            if target.role != ex.role:
                premises.extend(_role_path(o, ex.role, target.role))
            record(x, target, premises, rule)

    while queue:
        x, c = queue.popleft()
        fact = GCI(x, c)
        for rhs, ax in by_lhs.get(c, ()):
            record(x, rhs, (fact, ax), "RGci")
        if isinstance(c, And):
            for arg in c.args:
                record(x, arg, (fact,), "RAndMinus")
        for m in conj_of.get(c, ()):
            if all(arg in by_subject.get(x, ()) for arg in m.args):
                record(x, m, tuple(GCI(x, arg) for arg in m.args), "RAndPlus")
        if isinstance(c, Exists):
            for y in sorted(by_subject.get(c.filler, ())):
                fire_exists(x, c, c.filler, y)
        # c is a new superconcept of x; revisit existentials pointing at x
        for x2, ex in list(exists_facts.get(x, ())):
            fire_exists(x2, ex, x, c)

    reached = goal is not None and (
        goal in inputs
        or (isinstance(goal, GCI) and (goal.lhs, goal.rhs) in facts))
    return TracedDerivation(pool, {GCI(a, b) for a, b in facts}, reached)


def classify(o: Ontology) -> list:
    """All entailed nontrivial atomic inclusions A ⊑ B between distinct
    concept names, plus A ⊑ ⊥ for unsatisfiable names."""
    from . import tableau

    names = sorted(o.signature.concept_names)
    out = []
    if is_elh(o):
        trace = saturate(o)
        for f in trace.derived:
            if (isinstance(f.lhs, Name) and isinstance(f.rhs, Name)
                    and f.lhs != f.rhs):
                out.append(f)
    else:
        for a in names:
            if not tableau.is_satisfiable(o, Name(a)):
                out.append(GCI(Name(a), Bottom()))
                continue
            for b in names:
                if a != b and tableau.is_entailed(o, GCI(Name(a), Name(b))):
                    out.append(GCI(Name(a), Name(b)))
    return sorted(out, key=axiom_unicode)


def generate_el_proof(o: Ontology, goal: Axiom, measure, known=None,
                      known_check=None, cancel=None) -> Proof:
    """Measure-optimal proof over the traced saturation of an EL ontology."""
    from .syntax import Signature

    if goal in o:
        return single_vertex_proof(goal)
    trace = saturate(o, goal)
    if not trace.goal_reached:
        raise NoProofError(f"{axiom_unicode(goal)} is not derivable")
    req = ExtractionRequest(trace.pool, goal, set(o.axioms), measure,
                            known=known or Signature.empty(),
                            known_check=known_check, cancel=cancel)
    return extract_optimal(req)
