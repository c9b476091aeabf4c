"""ALCH syntax trees, ontologies, parsing and printing.

Concepts and axioms are immutable; And/Or argument lists are kept in a
canonical order (lexicographic on the ascii printed form) so structural
equality is order-insensitive and usable as a cache key.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union


class Concept:
    """Base class for concept expressions."""

    __slots__ = ()

    def __lt__(self, other: "Concept") -> bool:
        return concept_ascii(self) < concept_ascii(other)


@dataclass(frozen=True)
class Top(Concept):
    pass


@dataclass(frozen=True)
class Bottom(Concept):
    pass


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Name(Concept):
    name: str


@dataclass(frozen=True)
class Not(Concept):
    arg: Concept


@dataclass(frozen=True)
class And(Concept):
    args: tuple  # of Concept, canonical order, len >= 2

    def __post_init__(self):
        args = _canonical_args(self.args)
        if len(args) < 2:
            raise ValueError("And requires >= 2 distinct arguments; use conj()")
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Or(Concept):
    args: tuple  # of Concept, canonical order, len >= 2

    def __post_init__(self):
        args = _canonical_args(self.args)
        if len(args) < 2:
            raise ValueError("Or requires >= 2 distinct arguments; use disj()")
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Role:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("role name must be nonempty")

    def __lt__(self, other: "Role") -> bool:
        return self.name < other.name


@dataclass(frozen=True)
class Exists(Concept):
    role: Role
    filler: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: Role
    filler: Concept


def _canonical_args(args: Iterable[Concept]) -> tuple:
    seen = {}
    for a in args:
        seen.setdefault(concept_ascii(a), a)
    return tuple(seen[k] for k in sorted(seen))


def conj(args: Iterable[Concept]) -> Concept:
    """Canonical conjunction: flattens nested Ands, dedups, sorts."""
    flat: list[Concept] = []
    for a in args:
        if isinstance(a, And):
            flat.extend(a.args)
        else:
            flat.append(a)
    uniq = _canonical_args(flat)
    if not uniq:
        return TOP
    if len(uniq) == 1:
        return uniq[0]
    return And(uniq)


def disj(args: Iterable[Concept]) -> Concept:
    """Canonical disjunction: flattens nested Ors, dedups, sorts."""
    flat: list[Concept] = []
    for a in args:
        if isinstance(a, Or):
            flat.extend(a.args)
        else:
            flat.append(a)
    uniq = _canonical_args(flat)
    if not uniq:
        return BOTTOM
    if len(uniq) == 1:
        return uniq[0]
    return Or(uniq)


# ---------------------------------------------------------------------------
# Axioms


class Axiom:
    __slots__ = ()

    def __lt__(self, other: "Axiom") -> bool:
        return axiom_ascii(self) < axiom_ascii(other)


@dataclass(frozen=True)
class GCI(Axiom):
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class Equiv(Axiom):
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class RoleInclusion(Axiom):
    sub: Role
    sup: Role


@dataclass(frozen=True)
class Signature:
    concept_names: frozenset
    role_names: frozenset

    @staticmethod
    def empty() -> "Signature":
        return Signature(frozenset(), frozenset())

    def __contains__(self, name: str) -> bool:
        return name in self.concept_names or name in self.role_names

    def union(self, other: "Signature") -> "Signature":
        return Signature(self.concept_names | other.concept_names,
                         self.role_names | other.role_names)

    def issubset(self, other: "Signature") -> bool:
        return (self.concept_names <= other.concept_names
                and self.role_names <= other.role_names)

    @property
    def names(self) -> frozenset:
        return self.concept_names | self.role_names


def concept_signature(c: Concept) -> Signature:
    concepts, roles = set(), set()

    def walk(x: Concept):
        if isinstance(x, Name):
            concepts.add(x.name)
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, (And, Or)):
            for a in x.args:
                walk(a)
        elif isinstance(x, (Exists, Forall)):
            roles.add(x.role.name)
            walk(x.filler)

    walk(c)
    return Signature(frozenset(concepts), frozenset(roles))


def axiom_signature(a: Axiom) -> Signature:
    if isinstance(a, (GCI, Equiv)):
        return concept_signature(a.lhs).union(concept_signature(a.rhs))
    if isinstance(a, RoleInclusion):
        return Signature(frozenset(), frozenset({a.sub.name, a.sup.name}))
    raise TypeError(f"not an axiom: {a!r}")


def concept_size(c: Concept) -> int:
    if isinstance(c, (Top, Bottom, Name)):
        return 1
    if isinstance(c, Not):
        return 1 + concept_size(c.arg)
    if isinstance(c, (And, Or)):
        return 1 + sum(concept_size(a) for a in c.args)
    if isinstance(c, (Exists, Forall)):
        return 2 + concept_size(c.filler)  # constructor + role name
    raise TypeError(f"not a concept: {c!r}")


def axiom_size(a: Axiom) -> int:
    """Syntax-tree node count; the connective counts 1."""
    if isinstance(a, (GCI, Equiv)):
        return 1 + concept_size(a.lhs) + concept_size(a.rhs)
    if isinstance(a, RoleInclusion):
        return 3
    raise TypeError(f"not an axiom: {a!r}")


# ---------------------------------------------------------------------------
# Printing


def concept_ascii(c: Concept) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bottom):
        return "bot"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Not):
        return f"not({concept_ascii(c.arg)})"
    if isinstance(c, And):
        return "and(" + ", ".join(concept_ascii(a) for a in c.args) + ")"
    if isinstance(c, Or):
        return "or(" + ", ".join(concept_ascii(a) for a in c.args) + ")"
    if isinstance(c, Exists):
        return f"some({c.role.name}, {concept_ascii(c.filler)})"
    if isinstance(c, Forall):
        return f"only({c.role.name}, {concept_ascii(c.filler)})"
    raise TypeError(f"not a concept: {c!r}")


def concept_unicode(c: Concept) -> str:
    def paren(x: Concept) -> str:
        s = concept_unicode(x)
        if isinstance(x, (And, Or)):
            return f"({s})"
        return s

    if isinstance(c, Top):
        return "⊤"
    if isinstance(c, Bottom):
        return "⊥"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Not):
        return "¬" + paren(c.arg)
    if isinstance(c, And):
        return "⊓".join(paren(a) for a in c.args)
    if isinstance(c, Or):
        return "⊔".join(paren(a) for a in c.args)
    if isinstance(c, Exists):
        return f"∃{c.role.name}.{paren(c.filler)}"
    if isinstance(c, Forall):
        return f"∀{c.role.name}.{paren(c.filler)}"
    raise TypeError(f"not a concept: {c!r}")


def axiom_ascii(a: Axiom) -> str:
    if isinstance(a, GCI):
        return f"sub({concept_ascii(a.lhs)}, {concept_ascii(a.rhs)})"
    if isinstance(a, Equiv):
        return f"equiv({concept_ascii(a.lhs)}, {concept_ascii(a.rhs)})"
    if isinstance(a, RoleInclusion):
        return f"subrole({a.sub.name}, {a.sup.name})"
    raise TypeError(f"not an axiom: {a!r}")


def axiom_unicode(a: Axiom) -> str:
    if isinstance(a, GCI):
        return f"{concept_unicode(a.lhs)} ⊑ {concept_unicode(a.rhs)}"
    if isinstance(a, Equiv):
        return f"{concept_unicode(a.lhs)} ≡ {concept_unicode(a.rhs)}"
    if isinstance(a, RoleInclusion):
        return f"{a.sub.name} ⊑ {a.sup.name}"
    raise TypeError(f"not an axiom: {a!r}")


def print_axiom(a: Axiom, style: str = "unicode") -> str:
    if style == "ascii":
        return axiom_ascii(a)
    if style == "unicode":
        return axiom_unicode(a)
    raise ValueError(f"unknown style {style!r}")


# ---------------------------------------------------------------------------
# Negation normal form


def nnf(c: Concept) -> Concept:
    if isinstance(c, (Top, Bottom, Name)):
        return c
    if isinstance(c, And):
        return conj(nnf(a) for a in c.args)
    if isinstance(c, Or):
        return disj(nnf(a) for a in c.args)
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler))
    if isinstance(c, Forall):
        return Forall(c.role, nnf(c.filler))
    if isinstance(c, Not):
        x = c.arg
        if isinstance(x, Top):
            return BOTTOM
        if isinstance(x, Bottom):
            return TOP
        if isinstance(x, Name):
            return c
        if isinstance(x, Not):
            return nnf(x.arg)
        if isinstance(x, And):
            return disj(nnf(Not(a)) for a in x.args)
        if isinstance(x, Or):
            return conj(nnf(Not(a)) for a in x.args)
        if isinstance(x, Exists):
            return Forall(x.role, nnf(Not(x.filler)))
        if isinstance(x, Forall):
            return Exists(x.role, nnf(Not(x.filler)))
    raise TypeError(f"not a concept: {c!r}")


def neg(c: Concept) -> Concept:
    """NNF complement of c."""
    return nnf(Not(c))


# ---------------------------------------------------------------------------
# Ontology


class Ontology:
    """Finite ordered set of axioms with signature and role-hierarchy closure.

    Immutable after construction; iteration order is insertion order.
    """

    def __init__(self, axioms: Iterable[Axiom] = ()):
        self._axioms: list[Axiom] = []
        self._index: set = set()
        self.duplicate_warnings: list[str] = []
        for a in axioms:
            if a in self._index:
                self.duplicate_warnings.append(f"duplicate axiom ignored: {axiom_ascii(a)}")
                continue
            self._index.add(a)
            self._axioms.append(a)
        self._role_closure: Optional[dict] = None

    @property
    def axioms(self) -> tuple:
        return tuple(self._axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self._axioms)

    def __len__(self) -> int:
        return len(self._axioms)

    def __contains__(self, a: Axiom) -> bool:
        return a in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Ontology) and self._axioms == other._axioms

    def __hash__(self) -> int:
        return hash(tuple(self._axioms))

    def __repr__(self) -> str:
        return f"Ontology({len(self._axioms)} axioms)"

    @property
    def signature(self) -> Signature:
        sig = Signature.empty()
        for a in self._axioms:
            sig = sig.union(axiom_signature(a))
        return sig

    def role_inclusions(self) -> list:
        return [a for a in self._axioms if isinstance(a, RoleInclusion)]

    def _closure(self) -> dict:
        if self._role_closure is None:
            # reflexive-transitive closure over declared role inclusions
            edges: dict[str, set] = {}
            for a in self.role_inclusions():
                edges.setdefault(a.sub.name, set()).add(a.sup.name)
            closure: dict[str, set] = {}
            for r in list(edges):
                reached = set()
                stack = [r]
                while stack:
                    x = stack.pop()
                    for y in edges.get(x, ()):
                        if y not in reached:
                            reached.add(y)
                            stack.append(y)
                closure[r] = reached
            self._role_closure = closure
        return self._role_closure

    def role_subsumes(self, r: Role, s: Role) -> bool:
        """True iff (r, s) is in the reflexive-transitive closure."""
        if r == s:
            return True
        return s.name in self._closure().get(r.name, ())

    def super_roles(self, r: Role) -> list:
        """All s with role_subsumes(r, s), r itself included, sorted."""
        names = {r.name} | self._closure().get(r.name, set())
        return [Role(n) for n in sorted(names)]


def role_subsumes(o: Ontology, r: Role, s: Role) -> bool:
    return o.role_subsumes(r, s)


# ---------------------------------------------------------------------------
# Parser for the ascii ontology format


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: Optional[set] = None):
        self.line = line
        self.col = col
        self.expected = set(expected or ())
        detail = f"{message} at line {line}, column {col}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[(),]|#[^\n]*|\s+|.")


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(text):
        tok = m.group(0)
        if tok.startswith("#") or tok.isspace():
            pass
        else:
            tokens.append((tok, line, col))
        for ch in tok:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
    tokens.append(("<eof>", line, col))
    return tokens


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"top", "bot", "not", "and", "or", "some", "only", "sub", "equiv", "subrole"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        if t[0] != "<eof>":
            self.pos += 1
        return t

    def expect(self, tok: str):
        got, line, col = self.peek()
        if got != tok:
            raise ParseError(f"unexpected {got!r}", line, col, {tok})
        return self.next()

    def name(self, kind: str) -> str:
        got, line, col = self.peek()
        if not _NAME_RE.match(got):
            raise ParseError(f"unexpected {got!r}", line, col, {f"<{kind}>"})
        self.next()
        return got

    def concept(self) -> Concept:
        got, line, col = self.peek()
        if got == "top":
            self.next()
            return TOP
        if got == "bot":
            self.next()
            return BOTTOM
        if got == "not":
            self.next()
            self.expect("(")
            c = self.concept()
            self.expect(")")
            return Not(c)
        if got in ("and", "or"):
            self.next()
            self.expect("(")
            args = [self.concept()]
            while self.peek()[0] == ",":
                self.next()
                args.append(self.concept())
            self.expect(")")
            if len(args) < 2:
                raise ParseError(f"{got!r} needs at least 2 arguments", line, col)
            return conj(args) if got == "and" else disj(args)
        if got in ("some", "only"):
            self.next()
            self.expect("(")
            role = Role(self.name("role"))
            self.expect(",")
            filler = self.concept()
            self.expect(")")
            return Exists(role, filler) if got == "some" else Forall(role, filler)
        if _NAME_RE.match(got):
            self.next()
            return Name(got)
        raise ParseError(f"unexpected {got!r}", line, col,
                         {"top", "bot", "not", "and", "or", "some", "only", "<name>"})

    def axiom(self) -> Axiom:
        got, line, col = self.peek()
        if got == "sub" or got == "equiv":
            self.next()
            self.expect("(")
            lhs = self.concept()
            self.expect(",")
            rhs = self.concept()
            self.expect(")")
            return GCI(lhs, rhs) if got == "sub" else Equiv(lhs, rhs)
        if got == "subrole":
            self.next()
            self.expect("(")
            sub = Role(self.name("role"))
            self.expect(",")
            sup = Role(self.name("role"))
            self.expect(")")
            return RoleInclusion(sub, sup)
        raise ParseError(f"unexpected {got!r}", line, col, {"sub", "equiv", "subrole"})

    def ontology(self) -> Ontology:
        axioms = []
        while self.peek()[0] != "<eof>":
            axioms.append(self.axiom())
        return Ontology(axioms)


def parse_ontology(text: str) -> Ontology:
    return _Parser(text).ontology()


def parse_axiom(text: str) -> Axiom:
    p = _Parser(text)
    a = p.axiom()
    got, line, col = p.peek()
    if got != "<eof>":
        raise ParseError(f"trailing input {got!r}", line, col, {"<eof>"})
    return a


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    got, line, col = p.peek()
    if got != "<eof>":
        raise ParseError(f"trailing input {got!r}", line, col, {"<eof>"})
    return c


# ---------------------------------------------------------------------------
# Parser for the unicode display form (inverse of axiom_unicode)

_UNI_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[⊑≡⊓⊔¬∃∀⊤⊥().]|\s+|.")


class _UnicodeParser:
    """Parses axiom strings as produced by axiom_unicode.

    Whether "X ⊑ Y" over bare names is a role inclusion cannot be decided
    locally; callers pass the set of known role names (collected from the
    surrounding document) and bare inclusions over those parse as
    RoleInclusion.
    """

    def __init__(self, text: str, role_names: Optional[set] = None):
        self.tokens = [t for t in _UNI_TOKEN_RE.findall(text) if not t.isspace()]
        self.tokens.append("<eof>")
        self.pos = 0
        self.role_names = role_names or set()

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        if t != "<eof>":
            self.pos += 1
        return t

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")
        return got

    def atom(self) -> Concept:
        t = self.next()
        if t == "⊤":
            return TOP
        if t == "⊥":
            return BOTTOM
        if t == "¬":
            return Not(self.atom())
        if t in ("∃", "∀"):
            role = Role(self.next())
            self.expect(".")
            filler = self.atom()
            return Exists(role, filler) if t == "∃" else Forall(role, filler)
        if t == "(":
            c = self.concept()
            self.expect(")")
            return c
        if _NAME_RE.match(t):
            return Name(t)
        raise ValueError(f"unexpected token {t!r}")

    def concept(self) -> Concept:
        args = [self.atom()]
        op = None
        while self.peek() in ("⊓", "⊔"):
            t = self.next()
            if op is None:
                op = t
            elif t != op:
                raise ValueError("mixed ⊓/⊔ without parentheses")
            args.append(self.atom())
        if op == "⊓":
            return conj(args)
        if op == "⊔":
            return disj(args)
        return args[0]

    def axiom(self) -> Axiom:
        lhs = self.concept()
        t = self.next()
        if t not in ("⊑", "≡"):
            raise ValueError(f"expected ⊑ or ≡, got {t!r}")
        rhs = self.concept()
        if self.next() != "<eof>":
            raise ValueError("trailing input")
        if (t == "⊑" and isinstance(lhs, Name) and isinstance(rhs, Name)
                and lhs.name in self.role_names and rhs.name in self.role_names):
            return RoleInclusion(Role(lhs.name), Role(rhs.name))
        return GCI(lhs, rhs) if t == "⊑" else Equiv(lhs, rhs)


def parse_axiom_unicode(text: str, role_names: Optional[set] = None) -> Axiom:
    return _UnicodeParser(text, role_names).axiom()
