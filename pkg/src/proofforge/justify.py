"""Minimal entailment justifications via expand-contract and a Reiter
hitting-set tree for enumerating alternatives."""

from __future__ import annotations

import logging
from collections import deque
from typing import Optional

from .syntax import Axiom, Ontology, Signature, axiom_signature, axiom_unicode
from . import tableau

logger = logging.getLogger(__name__)

DEFAULT_UNION_CAP = 64


class NotEntailedError(ValueError):
    pass


def compute_justification(o: Ontology, goal: Axiom,
                          cfg: tableau.TableauConfig = tableau.DEFAULT_CONFIG) -> Ontology:
    """One subset-minimal subset of o entailing goal.

    Expansion grows a working set by signature overlap starting from the
    goal's signature; contraction removes axioms in reverse insertion order.
    """
    if not tableau.is_entailed(o, goal, cfg):
        raise NotEntailedError(f"{axiom_unicode(goal)} is not entailed")

    working: list = []
    in_working: set = set()
    sig = axiom_signature(goal)
    while True:
        added = False
        for a in o:
            if a not in in_working:
                asig = axiom_signature(a)
                if asig.names & sig.names:
                    working.append(a)
                    in_working.add(a)
                    sig = sig.union(asig)
                    added = True
        if tableau.is_entailed(Ontology(working), goal, cfg):
            break
        if not added:
            # signature-disconnected entailment (e.g. via an inconsistency)
            working = list(o.axioms)
            break

    for a in reversed(list(working)):
        trial = [x for x in working if x != a]
        if tableau.is_entailed(Ontology(trial), goal, cfg):
            working = trial
    kept = set(working)
    return Ontology([a for a in o if a in kept])


def compute_all_justifications(o: Ontology, goal: Axiom, limit: int = 0,
                               cfg: tableau.TableauConfig = tableau.DEFAULT_CONFIG):
    """All subset-minimal justifications (breadth-first hitting-set tree).

    With limit > 0 enumeration stops early; returns (justifications, complete).
    """
    if not tableau.is_entailed(o, goal, cfg):
        raise NotEntailedError(f"{axiom_unicode(goal)} is not entailed")

    results: list = []
    result_sets: list = []
    seen_nodes: set = set()
    queue = deque([frozenset()])
    while queue:
        removed = queue.popleft()
        if removed in seen_nodes:
            continue
        seen_nodes.add(removed)
        sub = Ontology([a for a in o if a not in removed])
        if not tableau.is_entailed(sub, goal, cfg):
            continue
        # reuse a known justification avoiding the removed set if possible
        just = None
        for js in result_sets:
            if not (js & removed):
                just = js
                break
        if just is None:
            j = compute_justification(sub, goal, cfg)
            just = frozenset(j.axioms)
            if just not in result_sets:
                results.append(j)
                result_sets.append(just)
                if limit and len(results) >= limit:
                    return results, False
        for a in sorted(just, key=axiom_unicode):
            queue.append(removed | {a})
    return results, True


def justification_union(o: Ontology, goal: Axiom, cap: int = DEFAULT_UNION_CAP,
                        cfg: tableau.TableauConfig = tableau.DEFAULT_CONFIG) -> Ontology:
    """Union of all justifications, enumerated up to cap of them.

    The returned ontology keeps the axiom order of o; if the cap was hit the
    union may be partial and its cap_exceeded attribute is set.
    """
    justs, complete = compute_all_justifications(o, goal, limit=cap, cfg=cfg)
    union = set()
    for j in justs:
        union.update(j.axioms)
    result = Ontology([a for a in o if a in union])
    result.cap_exceeded = not complete
    if not complete:
        logger.warning("justification enumeration stopped at cap %d; union may be partial", cap)
    return result
