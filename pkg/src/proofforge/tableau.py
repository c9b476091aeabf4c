"""ALCH tableau satisfiability with anywhere subset blocking.

The TBox is internalized: every GCI C ⊑ D contributes the meta-constraint
nnf(¬C ⊔ D) asserted at every node. Expansion is depth-first with a
deterministic branch order (left disjunct first); universal restrictions
propagate along role edges through the role hierarchy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (And, Axiom, Bottom, Concept, Equiv, Exists, Forall, GCI,
                     Name, Not, Ontology, Or, RoleInclusion, Top, conj, disj,
                     neg, nnf)


class ResourceLimitError(RuntimeError):
    """Node budget exceeded; the test outcome is unknown, not unsat."""


@dataclass(frozen=True)
class TableauConfig:
    max_nodes: int = 100000

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1")


DEFAULT_CONFIG = TableauConfig()


def _meta_constraints(o: Ontology) -> tuple:
    cs = []
    for a in o:
        if isinstance(a, GCI):
            cs.append(nnf(disj([Not(a.lhs), a.rhs]))
                      if not isinstance(a.lhs, Top) else nnf(a.rhs))
        elif isinstance(a, Equiv):
            cs.append(nnf(disj([Not(a.lhs), a.rhs])))
            cs.append(nnf(disj([Not(a.rhs), a.lhs])))
    return tuple(cs)


class _Tableau:
    def __init__(self, o: Ontology, cfg: TableauConfig):
        self.o = o
        self.cfg = cfg
        self.meta = _meta_constraints(o)
        self.nodes = 0
        # labels already fully expanded and found satisfiable (anywhere blocking
        # doubles as a sound cache: subset of a satisfiable label is satisfiable)
        self.sat_labels: list[frozenset] = []

    def satisfiable(self, c: Concept) -> bool:
        return self._node(frozenset([nnf(c)]) | frozenset(self.meta), ())

    def _node(self, label: frozenset, ancestors: tuple) -> bool:
        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise ResourceLimitError(f"tableau exceeded {self.cfg.max_nodes} nodes")
        return self._expand(frozenset(), sorted(label), ancestors)

    def _expand(self, done: frozenset, todo: list, ancestors: tuple) -> bool:
        """Saturate non-generating rules; branch on disjunctions."""
        todo = list(todo)
        done = set(done)
        while todo:
            c = todo.pop(0)
            if c in done:
                continue
            if isinstance(c, Bottom):
                return False
            if isinstance(c, Top):
                continue
            if isinstance(c, Not) and nnf(c.arg) in done:
                return False
            if isinstance(c, Name) and Not(c) in done:
                return False
            if isinstance(c, And):
                done.add(c)
                todo = list(c.args) + todo
                continue
            if isinstance(c, Or):
                done.add(c)
                for arg in c.args:  # deterministic: canonical arg order
                    if arg in done:
                        # disjunction already satisfied
                        return self._expand(frozenset(done), todo, ancestors)
                for arg in c.args:
                    if self._expand(frozenset(done), [arg] + todo, ancestors):
                        return True
                return False
            done.add(c)
        return self._successors(frozenset(done), ancestors)

    def _successors(self, label: frozenset, ancestors: tuple) -> bool:
        existentials = sorted(c for c in label if isinstance(c, Exists))
        if existentials:
            # anywhere subset blocking against fully expanded labels
            for blocker in ancestors:
                if label <= blocker:
                    return True
            for cached in self.sat_labels:
                if label <= cached:
                    return True
        for ex in existentials:
            succ = {ex.filler}
            for c in label:
                if isinstance(c, Forall) and self.o.role_subsumes(ex.role, c.role):
                    succ.add(c.filler)
            succ.update(self.meta)
            if not self._node(frozenset(succ), ancestors + (label,)):
                return False
        if existentials:
            self.sat_labels.append(label)
        return True


def is_satisfiable(o: Ontology, c: Concept, cfg: TableauConfig = DEFAULT_CONFIG) -> bool:
    """True iff c is satisfiable w.r.t. the TBox of o."""
    return _Tableau(o, cfg).satisfiable(c)


def is_entailed(o: Ontology, a: Axiom, cfg: TableauConfig = DEFAULT_CONFIG) -> bool:
    if isinstance(a, GCI):
        return not is_satisfiable(o, conj([a.lhs, neg(a.rhs)]), cfg)
    if isinstance(a, Equiv):
        return (is_entailed(o, GCI(a.lhs, a.rhs), cfg)
                and is_entailed(o, GCI(a.rhs, a.lhs), cfg))
    if isinstance(a, RoleInclusion):
        return o.role_subsumes(a.sub, a.sup)
    raise TypeError(f"not an axiom: {a!r}")


def entails_all(o: Ontology, axioms, cfg: TableauConfig = DEFAULT_CONFIG) -> bool:
    return all(is_entailed(o, a, cfg) for a in axioms)
