"""Uniform interpolation: eliminating concept and role names from clause sets.

The engine saturates a clause set under resolution on the target name, role
propagation through combined definers, and existential cleanup, then deletes
every clause mentioning the target. An optional inference log records each
rule application so that proofs can later be reconstructed from it; logging
mode disables redundancy deletion so no derivation is lost.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import (Axiom, BOTTOM, GCI, Name, Ontology, Role, RoleInclusion,
                     axiom_unicode)
from .normalform import (AvLit, Clause, DefinerPool, ExLit, NegLit, PosLit,
                         clause_axiom, clauses_ontology, denormalize,
                         drop_dead_definer_clauses, has_definer_cycle,
                         is_definer, make_clause, normalize)
from . import tableau


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    time_secs: float = 10.0      # per eliminated name
    max_clauses: int = 20000
    max_definers: int = 1024

    def __post_init__(self):
        if self.time_secs <= 0 or self.max_clauses < 1 or self.max_definers < 1:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class LogEntry:
    rule: str
    premises: tuple            # of Clause
    conclusion: Clause
    role_premises: tuple = ()  # RoleInclusion axioms used as side premises
    witnesses: tuple = ()      # clauses certifying an ExistsElim side condition
    source_axiom: Optional[Axiom] = None  # for Normalize entries


class InferenceLog:
    def __init__(self):
        self.entries: list = []
        self._seen: set = set()

    def add(self, entry: LogEntry) -> None:
        key = (entry.rule, entry.premises, entry.conclusion, entry.role_premises)
        if key in self._seen:
            return
        self._seen.add(key)
        self.entries.append(entry)

    def __len__(self):
        return len(self.entries)

    def truncate(self, n: int) -> None:
        for e in self.entries[n:]:
            self._seen.discard((e.rule, e.premises, e.conclusion, e.role_premises))
        del self.entries[n:]


class ForgetState:
    """Mutable clause set plus role box shared by successive eliminations."""

    def __init__(self, clauses: Iterable[Clause], role_axioms: Iterable[RoleInclusion],
                 pool: DefinerPool, log: Optional[InferenceLog] = None):
        self.clauses: list = []
        self.clause_set: set = set()
        self.role_axioms: list = list(role_axioms)
        self.pool = pool
        self.log = log
        for c in clauses:
            self._admit(c)

    def _admit(self, c: Clause) -> bool:
        if c in self.clause_set:
            return False
        self.clause_set.add(c)
        self.clauses.append(c)
        return True

    def add(self, c: Optional[Clause], rule: str, premises: tuple,
            role_premises: tuple = (), witnesses: tuple = ()) -> bool:
        if c is None:  # tautologies are never stored
            return False
        fresh = self._admit(c)
        if self.log is not None and (fresh or rule != "DefinerIntro"):
            self.log.add(LogEntry(rule, premises, c, role_premises, witnesses))
        return fresh

    def remove_clauses(self, drop: set) -> None:
        self.clauses = [c for c in self.clauses if c not in drop]
        self.clause_set -= drop

    def snapshot(self):
        log_len = len(self.log) if self.log is not None else 0
        return (list(self.clauses), set(self.clause_set), list(self.role_axioms), log_len)

    def restore(self, snap) -> None:
        clauses, clause_set, role_axioms, log_len = snap
        self.clauses = list(clauses)
        self.clause_set = set(clause_set)
        self.role_axioms = list(role_axioms)
        if self.log is not None:
            self.log.truncate(log_len)

    def ontology_view(self) -> Ontology:
        return clauses_ontology(self.clauses, self.role_axioms)

    def role_subsumes(self, r: Role, s: Role) -> bool:
        return Ontology(self.role_axioms).role_subsumes(r, s)

    def roles(self) -> list:
        names = set()
        for c in self.clauses:
            for l in c:
                if isinstance(l, (ExLit, AvLit)):
                    names.add(l.role)
        for a in self.role_axioms:
            names.add(a.sub)
            names.add(a.sup)
        return sorted(names)


# ---------------------------------------------------------------------------
# Saturation helpers


def _mentions(state: ForgetState, definer: str, memo: dict, stack=frozenset()) -> set:
    """User concept names occurring in the recursive definition of definer."""
    if definer in memo:
        return memo[definer]
    if definer in stack:
        return set()
    out: set = set()
    for c in state.clauses:
        if NegLit(definer) not in c:
            continue
        for l in c:
            if isinstance(l, (PosLit, NegLit)):
                if l.name != definer:
                    if is_definer(l.name):
                        out |= _mentions(state, l.name, memo, stack | {definer})
                    else:
                        out.add(l.name)
            else:
                out |= _mentions(state, l.definer, memo, stack | {definer})
    memo[definer] = out
    return out


def _inherit_combined(state: ForgetState, deadline: float, budget: Budget) -> bool:
    """Defining clauses of a combined definer's parts carry over to it."""
    changed = False
    for d, parts in list(state.pool.parts.items()):
        for c in list(state.clauses):
            hit = [p for p in parts if NegLit(p) in c]
            if not hit:
                continue
            new = c.without(*(NegLit(p) for p in hit)).union([NegLit(d)])
            if state.add(new, "DefinerIntro", (c,)):
                changed = True
                _check_budget(state, deadline, budget)
    return changed


def _check_budget(state: ForgetState, deadline: float, budget: Budget) -> None:
    if time.monotonic() > deadline:
        raise BudgetExceeded("time budget exceeded")
    if len(state.clauses) > budget.max_clauses:
        raise BudgetExceeded("clause budget exceeded")
    if len(state.pool) > budget.max_definers:
        raise BudgetExceeded("definer budget exceeded")


def _resolve_on(state: ForgetState, name: str, deadline: float, budget: Budget) -> bool:
    changed = False
    pos = [c for c in state.clauses if PosLit(name) in c]
    negs = [c for c in state.clauses if NegLit(name) in c]
    for c1 in pos:
        for c2 in negs:
            resolvent = make_clause(itertools.chain(
                c1.without(PosLit(name)), c2.without(NegLit(name))))
            if state.add(resolvent, "Resolution", (c1, c2)):
                changed = True
                _check_budget(state, deadline, budget)
    return changed


def _role_path_axioms(state: ForgetState, r: Role, s: Role) -> tuple:
    if r == s:
        return ()
    from .elreasoner import _role_path
    return tuple(_role_path(Ontology(state.role_axioms), r, s))


def _combine(state: ForgetState, want_pair, deadline: float, budget: Budget) -> bool:
    """Apply ∃/∀ and ∀/∀ propagation for literal pairs selected by want_pair."""
    changed = False
    ex_occ = [(c, l) for c in state.clauses for l in c if isinstance(l, ExLit)]
    av_occ = [(c, l) for c in state.clauses for l in c if isinstance(l, AvLit)]
    for (c1, l1) in ex_occ:
        for (c2, l2) in av_occ:
            if l1.definer == l2.definer:
                continue
            if not state.role_subsumes(l1.role, l2.role):
                continue
            if not want_pair(l1, l2):
                continue
            d, _ = state.pool.combine(l1.definer, l2.definer)
            if d in (l1.definer, l2.definer):
                continue  # one context already subsumes the other
            concl = make_clause(itertools.chain(
                c1.without(l1), c2.without(l2), [ExLit(l1.role, d)]))
            if state.add(concl, "ExistsForallCombine", (c1, c2),
                         role_premises=_role_path_axioms(state, l1.role, l2.role)):
                changed = True
                _check_budget(state, deadline, budget)
    for (c1, l1), (c2, l2) in itertools.combinations(av_occ, 2):
        if l1.definer == l2.definer:
            continue
        if not want_pair(l1, l2):
            continue
        for s in state.roles():
            if not (state.role_subsumes(s, l1.role) and state.role_subsumes(s, l2.role)):
                continue
            d, _ = state.pool.combine(l1.definer, l2.definer)
            if d in (l1.definer, l2.definer):
                continue
            concl = make_clause(itertools.chain(
                c1.without(l1), c2.without(l2), [AvLit(s, d)]))
            if state.add(concl, "ForallForallCombine", (c1, c2),
                         role_premises=_role_path_axioms(state, s, l1.role)
                         + _role_path_axioms(state, s, l2.role)):
                changed = True
                _check_budget(state, deadline, budget)
    return changed


def _exists_elim(state: ForgetState, deadline: float, budget: Budget,
                 semantic_roles: frozenset = frozenset()) -> bool:
    """Drop ∃r.D literals whose definer is inconsistent.

    The check is syntactic (a unit clause ¬D) except for roles listed in
    semantic_roles, where the full clause set is consulted via the tableau.
    """
    changed = False
    semantic_cache: dict = {}
    for c in list(state.clauses):
        for l in list(c):
            if not isinstance(l, ExLit):
                continue
            unit = make_clause([NegLit(l.definer)])
            witnesses: tuple = ()
            if unit in state.clause_set:
                witnesses = (unit,)
            elif l.role.name in semantic_roles:
                if l.definer not in semantic_cache:
                    semantic_cache[l.definer] = _unsat_witnesses(state, l.definer)
                witnesses = semantic_cache[l.definer] or ()
                if not semantic_cache[l.definer]:
                    continue
            else:
                continue
            if state.add(c.without(l), "ExistsElim", (c,), witnesses=witnesses):
                changed = True
                _check_budget(state, deadline, budget)
    return changed


def _unsat_witnesses(state: ForgetState, definer: str) -> Optional[tuple]:
    """Minimal clause subset proving the definer inconsistent, or None."""
    from .justify import compute_justification, NotEntailedError

    goal = GCI(Name(definer), BOTTOM)
    view = state.ontology_view()
    try:
        just = compute_justification(view, goal)
    except NotEntailedError:
        return None
    except tableau.ResourceLimitError:
        return None
    axiom_to_clause = {clause_axiom(c): c for c in state.clauses}
    return tuple(axiom_to_clause[a] for a in just if a in axiom_to_clause)


def _delete_subsumed(state: ForgetState) -> None:
    """Redundancy elimination: drop strict supersets of other clauses."""
    keep: list = []
    for c in state.clauses:
        if any(d <= c and d != c for d in state.clauses):
            continue
        keep.append(c)
    dropped = set(state.clauses) - set(keep)
    if dropped:
        state.remove_clauses(dropped)


# ---------------------------------------------------------------------------
# Eliminating a single name


def eliminate_concept_name(state: ForgetState, name: str,
                           budget: Budget = DEFAULT_BUDGET) -> None:
    """Saturate and delete every clause mentioning the concept name.

    Raises BudgetExceeded; leaves the state mutated (callers snapshot).
    """
    deadline = time.monotonic() + budget.time_secs
    while True:
        changed = False
        changed |= _inherit_combined(state, deadline, budget)
        changed |= _resolve_on(state, name, deadline, budget)
        memo: dict = {}

        def want_pair(l1, l2):
            return (name in _mentions(state, l1.definer, memo)
                    and name in _mentions(state, l2.definer, memo))

        changed |= _combine(state, want_pair, deadline, budget)
        changed |= _exists_elim(state, deadline, budget)
        if not changed:
            break
    drop = {c for c in state.clauses
            if PosLit(name) in c or NegLit(name) in c}
    state.remove_clauses(drop)
    if state.log is None:
        _delete_subsumed(state)


def eliminate_role_name(state: ForgetState, role_name: str,
                        budget: Budget = DEFAULT_BUDGET) -> None:
    """Saturate and delete every clause using the role."""
    deadline = time.monotonic() + budget.time_secs
    role = Role(role_name)

    def on_role(l1, l2):
        return l1.role == role or l2.role == role

    while True:
        changed = False
        changed |= _inherit_combined(state, deadline, budget)
        # fold occurrences through the declared hierarchy before deletion
        for c in list(state.clauses):
            for l in list(c):
                if isinstance(l, ExLit) and l.role == role:
                    for sup in Ontology(state.role_axioms).super_roles(role):
                        if sup == role:
                            continue
                        concl = c.without(l).union([ExLit(sup, l.definer)])
                        if state.add(concl, "ExistsRoleHier", (c,),
                                     role_premises=_role_path_axioms(state, role, sup)):
                            changed = True
                            _check_budget(state, deadline, budget)
                elif isinstance(l, AvLit) and l.role == role:
                    for sub in _sub_roles(state, role):
                        concl = c.without(l).union([AvLit(sub, l.definer)])
                        if state.add(concl, "ForallRoleHier", (c,),
                                     role_premises=_role_path_axioms(state, sub, role)):
                            changed = True
                            _check_budget(state, deadline, budget)
        changed |= _combine(state, on_role, deadline, budget)
        changed |= _exists_elim(state, deadline, budget,
                                semantic_roles=frozenset({role_name}))
        if not changed:
            break
    drop = {c for c in state.clauses
            if any(isinstance(l, (ExLit, AvLit)) and l.role == role for l in c)}
    state.remove_clauses(drop)
    state.role_axioms = _role_axioms_without(state.role_axioms, role)
    if state.log is None:
        _delete_subsumed(state)


def _sub_roles(state: ForgetState, role: Role) -> list:
    o = Ontology(state.role_axioms)
    return [s for s in state.roles() if s != role and o.role_subsumes(s, role)]


def _role_axioms_without(role_axioms: list, role: Role) -> list:
    """Declared inclusions with the role removed, bridging through it."""
    o = Ontology(role_axioms)
    names = sorted(({a.sub for a in role_axioms} | {a.sup for a in role_axioms}) - {role})
    out = []
    for a in role_axioms:
        if role not in (a.sub, a.sup):
            out.append(a)
    direct = {(a.sub, a.sup) for a in out}
    for s in names:
        for t in names:
            if s != t and s != role and t != role and (s, t) not in direct:
                # keep s ⊑ t if it only held through the removed role
                if o.role_subsumes(s, role) and o.role_subsumes(role, t):
                    out.append(RoleInclusion(s, t))
                    direct.add((s, t))
    return out


# ---------------------------------------------------------------------------
# Signature-level interface


@dataclass
class ForgetResult:
    ontology: Ontology
    failed_names: list
    state: ForgetState
    log: Optional[InferenceLog]
    origins: dict  # clause -> source axiom for the initial normalization


def _name_order(o: Ontology, keep: set) -> list:
    sig = o.signature
    concepts = sorted(n for n in sig.concept_names if n not in keep)
    roles = sorted(n for n in sig.role_names if n not in keep)
    return [("concept", n) for n in concepts] + [("role", n) for n in roles]


def forget_signature(o: Ontology, keep: set, logging: bool = False,
                     budget: Budget = DEFAULT_BUDGET) -> ForgetResult:
    """Eliminate every name outside keep, concept names before roles.

    A name whose elimination exhausts the budget or creates a recursive
    definer is skipped and reported in failed_names. If the final clause set
    cannot be denormalized, the name that first made it so is retried as
    failed and the whole fold restarts.
    """
    failed: list = []
    order = _name_order(o, set(keep))
    for _attempt in range(len(order) + 1):
        log = InferenceLog() if logging else None
        clauses, role_axioms, pool, origins = normalize(o)
        if log is not None:
            for c in clauses:
                log.add(LogEntry("Normalize", (), c, source_axiom=origins[c]))
        state = ForgetState(clauses, role_axioms, pool, log)
        blame: Optional[str] = None
        for kind, name in order:
            if name in failed:
                continue
            snap = state.snapshot()
            pre_cyclic = has_definer_cycle(state.clauses)
            try:
                if kind == "concept":
                    eliminate_concept_name(state, name, budget)
                else:
                    eliminate_role_name(state, name, budget)
            except BudgetExceeded:
                state.restore(snap)
                failed.append(name)
                continue
            if has_definer_cycle(drop_dead_definer_clauses(state.clauses)) and not pre_cyclic:
                state.restore(snap)
                failed.append(name)
                continue
            if blame is None:
                try:
                    denormalize(state.clauses, state.role_axioms, state.pool)
                except Exception:
                    blame = name
        try:
            result = denormalize(state.clauses, state.role_axioms, state.pool)
            return ForgetResult(result, sorted(failed), state, log, origins)
        except Exception:
            if blame is None:
                raise
            failed.append(blame)
    raise RuntimeError("signature forgetting did not converge")  # pragma: no cover


def forget_concept_name(o: Ontology, name: str,
                        budget: Budget = DEFAULT_BUDGET) -> Ontology:
    clauses, role_axioms, pool, _ = normalize(o)
    state = ForgetState(clauses, role_axioms, pool)
    eliminate_concept_name(state, name, budget)
    return denormalize(state.clauses, state.role_axioms, state.pool)


def forget_role_name(o: Ontology, name: str,
                     budget: Budget = DEFAULT_BUDGET) -> Ontology:
    clauses, role_axioms, pool, _ = normalize(o)
    state = ForgetState(clauses, role_axioms, pool)
    eliminate_role_name(state, name, budget)
    return denormalize(state.clauses, state.role_axioms, state.pool)
