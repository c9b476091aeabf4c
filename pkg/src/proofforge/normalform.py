"""Clause normal form for ALCH TBoxes.

Axioms become clauses ⊤ ⊑ L₁ ⊔ … ⊔ Lₙ whose literals are (possibly negated)
concept names or role restrictions ∃r.D / ∀r.D over definer names. Definers
are fresh names standing for user-level fillers; each carries its defining
clauses ¬D ⊔ … alongside. Denormalization substitutes definers away and tidies
the resulting axioms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import (And, Axiom, BOTTOM, Bottom, Concept, Equiv, Exists,
                     Forall, GCI, Name, Not, Ontology, Or, Role, RoleInclusion,
                     TOP, Top, concept_ascii, conj, disj, neg, nnf)

DEFINER_PREFIX = "_D"


def is_definer(name: str) -> bool:
    return name.startswith(DEFINER_PREFIX)


# ---------------------------------------------------------------------------
# Literals and clauses


class Literal:
    __slots__ = ()

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True)
class PosLit(Literal):
    name: str

    def sort_key(self):
        return (0, self.name, "")


@dataclass(frozen=True)
class NegLit(Literal):
    name: str

    def sort_key(self):
        return (1, self.name, "")


@dataclass(frozen=True)
class ExLit(Literal):
    role: Role
    definer: str

    def sort_key(self):
        return (2, self.role.name, self.definer)


@dataclass(frozen=True)
class AvLit(Literal):
    role: Role
    definer: str

    def sort_key(self):
        return (3, self.role.name, self.definer)


@dataclass(frozen=True)
class Clause:
    literals: tuple  # sorted, no duplicates

    def __contains__(self, lit: Literal) -> bool:
        return lit in self.literals

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __le__(self, other: "Clause") -> bool:
        return set(self.literals) <= set(other.literals)

    def without(self, *lits) -> "Clause":
        drop = set(lits)
        return Clause(tuple(l for l in self.literals if l not in drop))

    def union(self, other: Iterable[Literal]) -> Optional["Clause"]:
        return make_clause(itertools.chain(self.literals, other))

    def definers(self) -> set:
        """Definer names in role literals."""
        return {l.definer for l in self.literals if isinstance(l, (ExLit, AvLit))}

    def neg_definers(self) -> set:
        return {l.name for l in self.literals
                if isinstance(l, NegLit) and is_definer(l.name)}

    def __repr__(self):
        return "Clause[" + " | ".join(map(_lit_str, self.literals)) + "]"


def _lit_str(l: Literal) -> str:
    if isinstance(l, PosLit):
        return l.name
    if isinstance(l, NegLit):
        return "¬" + l.name
    if isinstance(l, ExLit):
        return f"∃{l.role.name}.{l.definer}"
    return f"∀{l.role.name}.{l.definer}"


def make_clause(literals: Iterable[Literal]) -> Optional[Clause]:
    """Deduplicated sorted clause, or None if it is a tautology."""
    lits = sorted(set(literals))
    names = {l.name for l in lits if isinstance(l, PosLit)}
    for l in lits:
        if isinstance(l, NegLit) and l.name in names:
            return None
    return Clause(tuple(lits))


EMPTY_CLAUSE = Clause(())


# ---------------------------------------------------------------------------
# Definers


class DefinerPool:
    """Interns definers per user-level filler, and combined definers per
    unordered pair. represents() maps a definer back to a user concept."""

    def __init__(self):
        self._counter = itertools.count(1)
        self._by_filler: dict = {}
        self._by_pair: dict = {}
        self.represents: dict = {}
        self.parts: dict = {}  # combined definer -> frozenset of two definers

    def _fresh(self, represents: Concept) -> str:
        name = f"{DEFINER_PREFIX}{next(self._counter)}"
        self.represents[name] = represents
        return name

    def for_filler(self, filler: Concept):
        """(definer, created) for a user-level filler concept."""
        key = concept_ascii(filler)
        if key in self._by_filler:
            return self._by_filler[key], False
        d = self._fresh(filler)
        self._by_filler[key] = d
        return d, True

    def combine(self, d1: str, d2: str):
        """(combined definer, created) representing the conjunction.

        Interned by the set of base definers, so combining a definer with one
        of its own parts returns an existing definer instead of a fresh one.
        """
        key = self.base_parts(d1) | self.base_parts(d2)
        if key == self.base_parts(d1):
            return d1, False
        if key == self.base_parts(d2):
            return d2, False
        if key in self._by_pair:
            return self._by_pair[key], False
        d = self._fresh(conj([self.represents[p] for p in sorted(key)]))
        self._by_pair[key] = d
        self.parts[d] = key
        return d, True

    def combined_for(self, definers: Iterable[str]) -> Optional[str]:
        """The interned combined definer covering the given ones, if any."""
        key = frozenset()
        for d in definers:
            key |= self.base_parts(d)
        if len(key) == 1:
            return next(iter(key))
        return self._by_pair.get(key)

    def base_parts(self, d: str) -> frozenset:
        """The non-combined definers a combined definer stands for."""
        return self.parts.get(d, frozenset((d,)))

    def __len__(self):
        return len(self.represents)


# ---------------------------------------------------------------------------
# Normalization


def _cnf(c: Concept, pool: DefinerPool, aux: list):
    """Clause sets (lists of literal lists) for an NNF concept; fresh definer
    definitions are appended to aux as (definer, clause) pairs."""
    if isinstance(c, Top):
        return []
    if isinstance(c, Bottom):
        return [[]]
    if isinstance(c, Name):
        return [[PosLit(c.name)]]
    if isinstance(c, Not):
        return [[NegLit(c.arg.name)]]
    if isinstance(c, And):
        out = []
        for a in c.args:
            out.extend(_cnf(a, pool, aux))
        return out
    if isinstance(c, Or):
        parts = [_cnf(a, pool, aux) for a in c.args]
        out = [[]]
        for p in parts:
            out = [x + y for x in out for y in p]
        return out
    if isinstance(c, (Exists, Forall)):
        d, created = pool.for_filler(c.filler)
        if created:
            for body in _cnf(c.filler, pool, aux):
                cl = make_clause([NegLit(d)] + body)
                if cl is not None:
                    aux.append((d, cl))
        lit = ExLit(c.role, d) if isinstance(c, Exists) else AvLit(c.role, d)
        return [[lit]]
    raise TypeError(f"not an NNF concept: {c!r}")


def normalize_axiom(a: Axiom, pool: DefinerPool) -> list:
    """Clauses for one axiom (role inclusions yield none)."""
    if isinstance(a, RoleInclusion):
        return []
    sides = [(a.lhs, a.rhs)]
    if isinstance(a, Equiv):
        sides.append((a.rhs, a.lhs))
    clauses = []
    for lhs, rhs in sides:
        aux: list = []
        for body in _cnf(nnf(disj([Not(lhs), rhs])) if not isinstance(lhs, Top)
                         else nnf(rhs), pool, aux):
            cl = make_clause(body)
            if cl is not None:
                clauses.append(cl)
        clauses.extend(cl for _, cl in aux)
    return clauses


def normalize(o: Ontology, pool: Optional[DefinerPool] = None):
    """(clauses, role_axioms, pool, origins) for a whole ontology.

    origins maps each clause to the first axiom that produced it.
    """
    pool = pool or DefinerPool()
    clauses: list = []
    seen: set = set()
    origins: dict = {}
    for a in o:
        for cl in normalize_axiom(a, pool):
            if cl not in seen:
                seen.add(cl)
                clauses.append(cl)
                origins[cl] = a
    return clauses, list(o.role_inclusions()), pool, origins


# ---------------------------------------------------------------------------
# Clause <-> axiom views


def literal_concept(l: Literal, definer_map=None) -> Concept:
    """Concept for a literal; definer_map resolves definer names, defaulting
    to plain concept names."""
    if isinstance(l, PosLit):
        return Name(l.name)
    if isinstance(l, NegLit):
        return Not(Name(l.name))
    filler = definer_map(l.definer) if definer_map else Name(l.definer)
    if isinstance(l, ExLit):
        return Exists(l.role, filler)
    return Forall(l.role, filler)


def clause_axiom(cl: Clause) -> GCI:
    """The clause as ⊤ ⊑ disjunction, definers printed as names."""
    return GCI(TOP, disj([literal_concept(l) for l in cl]))


def clauses_ontology(clauses: Iterable[Clause], role_axioms: Iterable[RoleInclusion]) -> Ontology:
    """Clause set as an ontology (definers as concept names), for reasoning."""
    return Ontology([clause_axiom(c) for c in clauses] + list(role_axioms))


def substitute_names(c: Concept, mapping: dict) -> Concept:
    """Replace concept names per mapping (name -> Concept), bottom-up."""
    if isinstance(c, Name):
        return mapping.get(c.name, c)
    if isinstance(c, Not):
        inner = substitute_names(c.arg, mapping)
        return nnf(Not(inner))
    if isinstance(c, And):
        return conj([substitute_names(a, mapping) for a in c.args])
    if isinstance(c, Or):
        return disj([substitute_names(a, mapping) for a in c.args])
    if isinstance(c, Exists):
        return Exists(c.role, substitute_names(c.filler, mapping))
    if isinstance(c, Forall):
        return Forall(c.role, substitute_names(c.filler, mapping))
    return c


def substitute_axiom(a: Axiom, mapping: dict) -> Axiom:
    if isinstance(a, GCI):
        return GCI(substitute_names(a.lhs, mapping), substitute_names(a.rhs, mapping))
    if isinstance(a, Equiv):
        return Equiv(substitute_names(a.lhs, mapping), substitute_names(a.rhs, mapping))
    return a


# ---------------------------------------------------------------------------
# Simplification and beautification


def negativity(c: Concept) -> int:
    """Count of negations and ⊥ occurrences; the move heuristic minimizes it."""
    if isinstance(c, Bottom):
        return 1
    if isinstance(c, (Top, Name)):
        return 0
    if isinstance(c, Not):
        return 1 + negativity(c.arg)
    if isinstance(c, (And, Or)):
        return sum(negativity(a) for a in c.args)
    return negativity(c.filler)


def simplify(c: Concept, collapse: bool = True) -> Concept:
    """Bottom-up unit laws on an NNF concept.

    Complementary pairs collapse (A ⊓ ¬A becomes ⊥) only outside role
    restrictions: inside a filler the contradiction is kept verbatim so that
    staged rewrites stay visible until the step that resolves them.
    """
    if isinstance(c, (Top, Bottom, Name, Not)):
        return c
    if isinstance(c, (And, Or)):
        args = [simplify(a, collapse) for a in c.args]
        unit, absorb = (TOP, BOTTOM) if isinstance(c, And) else (BOTTOM, TOP)
        args = [a for a in args if a != unit]
        if any(a == absorb for a in args):
            return absorb
        if collapse:
            argset = set(args)
            if any(neg(a) in argset for a in args):
                return absorb
        return conj(args) if isinstance(c, And) else disj(args)
    if isinstance(c, Exists):
        f = simplify(c.filler, collapse=False)
        return BOTTOM if f == BOTTOM else Exists(c.role, f)
    if isinstance(c, Forall):
        f = simplify(c.filler, collapse=False)
        return TOP if f == TOP else Forall(c.role, f)
    raise TypeError(f"not a concept: {c!r}")


def beautify(a: Axiom) -> Optional[Axiom]:
    """Tidied equivalent of an axiom, or None if it became trivial.

    Simplifies both sides, then repeatedly moves a right-hand disjunct d to
    the left as a conjunct ¬d whenever that strictly lowers its negativity
    (so B ⊔ ∃r.¬C becomes ∀r.C on the left, but plain B stays put).
    """
    if isinstance(a, RoleInclusion):
        return None if a.sub == a.sup else a
    if isinstance(a, Equiv):
        lhs, rhs = simplify(nnf(a.lhs)), simplify(nnf(a.rhs))
        return None if lhs == rhs else Equiv(lhs, rhs)

    lhs, rhs = simplify(nnf(a.lhs)), simplify(nnf(a.rhs))
    seen = set()
    while (lhs, rhs) not in seen:
        seen.add((lhs, rhs))
        disjuncts = list(rhs.args) if isinstance(rhs, Or) else [rhs]
        keep, moved = [], []
        for d in disjuncts:
            nd = neg(d)
            if negativity(nd) < negativity(d):
                moved.append(nd)
            else:
                keep.append(d)
        if not moved:
            break
        lhs = simplify(conj([lhs] + moved))
        rhs = simplify(disj(keep))
    if isinstance(rhs, Top) or isinstance(lhs, Bottom) or lhs == rhs:
        return None
    return GCI(lhs, rhs)


# ---------------------------------------------------------------------------
# Denormalization


class DenormalizeError(RuntimeError):
    pass


class CyclicDefinerError(DenormalizeError):
    def __init__(self, definer: str):
        self.definer = definer
        super().__init__(f"definer {definer} is defined in terms of itself")


class DefinerRemainsError(DenormalizeError):
    def __init__(self, message: str):
        super().__init__(message)


def drop_dead_definer_clauses(clauses: list) -> list:
    """Remove clauses constraining definers that no role literal uses.

    A free definer can be taken as ⊥, which makes any clause containing its
    negative literal vacuous; dropping such clauses may free further definers.
    """
    kept = list(clauses)
    while True:
        live = set()
        for cl in kept:
            live |= cl.definers()
        dropped = [cl for cl in kept if cl.neg_definers() - live]
        if not dropped:
            return kept
        kept = [cl for cl in kept if not (cl.neg_definers() - live)]


def definer_dependencies(clauses: Iterable[Clause]) -> dict:
    """Definer -> definers its definition recurses into (role fillers only;
    a shared clause between two definers is entanglement, not recursion)."""
    deps: dict = {}
    for cl in clauses:
        refs = cl.definers()
        for d in cl.neg_definers():
            deps.setdefault(d, set()).update(refs)
    return deps


def has_definer_cycle(clauses: Iterable[Clause]) -> bool:
    deps = definer_dependencies(clauses)
    state: dict = {}

    def visit(d):
        state[d] = 1
        for e in deps.get(d, ()):
            st = state.get(e)
            if st == 1 or (st is None and visit(e)):
                return True
        state[d] = 2
        return False

    return any(state.get(d) is None and visit(d) for d in deps)


def denormalize(clauses: list, role_axioms: list,
                pool: Optional[DefinerPool] = None) -> Ontology:
    """Definer-free ontology equivalent to the clause set.

    Raises DefinerRemainsError when definers stay entangled (a clause relates
    two live definers and no combined definer inherited it) or when an
    existential's definer lost all defining clauses without being trivial,
    and CyclicDefinerError on recursive definitions.
    """
    kept = drop_dead_definer_clauses(clauses)
    while True:
        kept_set = set(kept)
        dropped = False
        for cl in list(kept):
            negs = cl.neg_definers()
            live = negs & {d for c in kept for d in c.definers()}
            if len(live) <= 1:
                continue
            # redundant if a combined definer inherited this clause
            combined = pool.combined_for(negs) if pool else None
            if combined is not None:
                image = cl.without(*(NegLit(d) for d in negs)).union([NegLit(combined)])
                if image in kept_set or image is None:
                    kept.remove(cl)
                    dropped = True
                    continue
            raise DefinerRemainsError(f"clause {cl!r} relates several definers")
        if not dropped:
            break
        kept = drop_dead_definer_clauses(kept)

    for cl in kept:
        for l in cl:
            if isinstance(l, PosLit) and is_definer(l.name):
                raise DefinerRemainsError(f"positive definer literal in {cl!r}")

    defining: dict = {}
    roots: list = []
    for cl in kept:
        negs = cl.neg_definers()
        if negs:
            d = next(iter(negs))
            defining.setdefault(d, []).append(cl.without(NegLit(d)))
        else:
            roots.append(cl)

    if pool is not None:
        for cl in kept:
            for l in cl:
                if (isinstance(l, ExLit) and l.definer not in defining
                        and pool.represents.get(l.definer, TOP) != TOP):
                    # the successor's constraints were forgotten outright, so
                    # the clause has no faithful form in the target signature
                    raise DefinerRemainsError(
                        f"existential definer {l.definer} lost its definition")

    def def_concept(d: str, stack: tuple) -> Concept:
        if d in stack:
            raise CyclicDefinerError(d)
        rests = defining.get(d, [])
        return conj([disj([literal_concept(l, lambda e: def_concept(e, stack + (d,)))
                           for l in rest]) for rest in rests])

    axioms: list = []
    for cl in roots:
        a = beautify(GCI(TOP, disj([literal_concept(l, lambda e: def_concept(e, ()))
                                    for l in cl])))
        if a is not None:
            axioms.append(a)
    axioms.extend(role_axioms)
    return Ontology(axioms)
