"""Shared random generators for the test suite.

Two flavours: hypothesis strategies for property tests, and plain
``random.Random``-driven builders for the larger seeded sweeps where we want
cheap bulk generation without shrinking.
"""

import random

from hypothesis import strategies as st

from proofforge.syntax import (BOTTOM, TOP, And, Axiom, Equiv, Exists, Forall,
                               GCI, Name, Not, Ontology, Or, Role,
                               RoleInclusion, conj, disj)
from proofforge.proofmodel import InferencePool, PoolStep

CONCEPT_NAMES = ["A", "B", "C", "D", "E", "F"]
ROLE_NAMES = ["r", "s", "t"]

st_name = st.sampled_from(CONCEPT_NAMES).map(Name)
st_role = st.sampled_from(ROLE_NAMES).map(Role)


def st_concept(max_depth: int = 3):
    base = st.one_of(st_name, st.just(TOP), st.just(BOTTOM))
    return st.recursive(
        base,
        lambda sub: st.one_of(
            sub.map(Not),
            st.lists(sub, min_size=2, max_size=3).map(conj),
            st.lists(sub, min_size=2, max_size=3).map(disj),
            st.tuples(st_role, sub).map(lambda t: Exists(*t)),
            st.tuples(st_role, sub).map(lambda t: Forall(*t)),
        ),
        max_leaves=6,
    )


def st_el_concept():
    base = st.one_of(st_name, st.just(TOP))
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.lists(sub, min_size=2, max_size=3).map(conj),
            st.tuples(st_role, sub).map(lambda t: Exists(*t)),
        ),
        max_leaves=5,
    )


st_gci = st.builds(GCI, st_concept(), st_concept())
st_role_inclusion = st.builds(RoleInclusion, st_role, st_role)
st_axiom = st.one_of(st_gci, st.builds(Equiv, st_concept(), st_concept()),
                     st_role_inclusion)
st_el_axiom = st.one_of(st.builds(GCI, st_el_concept(), st_el_concept()),
                        st_role_inclusion)

st_ontology = st.lists(st_axiom, min_size=0, max_size=6).map(Ontology)
st_el_ontology = st.lists(st_el_axiom, min_size=0, max_size=6).map(Ontology)


# ---------------------------------------------------------------------------
# seeded bulk builders


def random_el_concept(rng: random.Random, depth: int = 2):
    roll = rng.random()
    if depth == 0 or roll < 0.45:
        return Name(rng.choice(CONCEPT_NAMES))
    if roll < 0.5:
        return TOP
    if roll < 0.75:
        return Exists(Role(rng.choice(ROLE_NAMES)),
                      random_el_concept(rng, depth - 1))
    return conj(random_el_concept(rng, depth - 1) for _ in range(2))


def random_alch_concept(rng: random.Random, depth: int = 2):
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        return Name(rng.choice(CONCEPT_NAMES))
    if roll < 0.44:
        return TOP
    if roll < 0.48:
        return BOTTOM
    if roll < 0.58:
        return Not(random_alch_concept(rng, depth - 1))
    if roll < 0.72:
        return Exists(Role(rng.choice(ROLE_NAMES)),
                      random_alch_concept(rng, depth - 1))
    if roll < 0.82:
        return Forall(Role(rng.choice(ROLE_NAMES)),
                      random_alch_concept(rng, depth - 1))
    if roll < 0.91:
        return conj(random_alch_concept(rng, depth - 1) for _ in range(2))
    return disj(random_alch_concept(rng, depth - 1) for _ in range(2))


def random_elh_ontology(rng: random.Random, n_axioms: int) -> Ontology:
    axioms = []
    for _ in range(n_axioms):
        if rng.random() < 0.15:
            axioms.append(RoleInclusion(Role(rng.choice(ROLE_NAMES)),
                                        Role(rng.choice(ROLE_NAMES))))
        else:
            axioms.append(GCI(random_el_concept(rng), random_el_concept(rng)))
    return Ontology(axioms)


def random_alch_ontology(rng: random.Random, n_axioms: int) -> Ontology:
    axioms = []
    for _ in range(n_axioms):
        roll = rng.random()
        if roll < 0.12:
            axioms.append(RoleInclusion(Role(rng.choice(ROLE_NAMES)),
                                        Role(rng.choice(ROLE_NAMES))))
        elif roll < 0.2:
            axioms.append(Equiv(random_alch_concept(rng, 1),
                                random_alch_concept(rng, 1)))
        else:
            axioms.append(GCI(random_alch_concept(rng),
                              random_alch_concept(rng)))
    return Ontology(axioms)


def random_pool(rng: random.Random, n_axioms: int = 8, n_steps: int = 10,
                max_premises: int = 3):
    """A small inference pool over opaque atomic axioms.

    Returns (pool, goal, asserted). The goal may or may not be derivable,
    which is exactly what the enumeration-oracle comparison wants.
    """
    tokens = [GCI(Name(f"X{i}"), Name(f"Y{i}")) for i in range(n_axioms)]
    pool = InferencePool()
    for _ in range(n_steps):
        k = rng.randrange(1, n_axioms)
        n_prem = rng.randint(1, min(max_premises, k))
        premises = rng.sample(tokens[:k], n_prem)
        pool.add(PoolStep.make(tokens[k], premises, f"R{rng.randrange(4)}"))
    n_asserted = rng.randint(1, 3)
    asserted = set(rng.sample(tokens[: n_axioms // 2 + 1], n_asserted))
    return pool, tokens[-1], asserted


def atomic_goals(o: Ontology):
    names = sorted(o.signature.concept_names)
    for a in names:
        for b in names:
            if a != b:
                yield GCI(Name(a), Name(b))
