# Fixture knowledge bases and seeded random corpora shared by the tests.

import random

from dl_circumscription.oracle import enumeration_size
from dl_circumscription.syntax import (BOT, TOP, UNIVERSAL, Abox, And, AtLeast, AtMost, CircKB,
                                       CircPattern, ConceptAssertion, ConceptName, Exists, Forall,
                                       Inclusion, Inverse, Nominal, Not, Or, RoleAssertion,
                                       RoleName, concept_names, iter_concepts, nominals,
                                       query_individuals, role_names)


WHALE = '''
# whales are mammals that, unlike normal mammals, do not live on land
tbox {
    Mammal <= some habitat Land or Ab_Mammal;
    Whale <= Mammal and not (some habitat Land);
}
abox {
    flipper : Mammal and not Whale;
}
'''

WHALE_FIXED = WHALE + '''
circ {
    minimize Ab_Mammal;
    fix Mammal, Whale, habitat, Land;
}
'''

WHALE_VARYING = WHALE + '''
circ {
    minimize Ab_Mammal;
    fix Mammal, Whale;
    vary habitat, Land;
}
'''

WHALE_FREE = WHALE + '''
circ {
    minimize Ab_Mammal;
    fix Mammal;
    vary Whale, habitat, Land;
}
'''

MOBYDICK = '''
abox {
    mobydick : Whale;
}
'''

MOTHER = '''
tbox {
    Whale <= some mother (Whale and not Male);
}
abox {
    mobydick : Male;
}
circ {
    vary mother, Male;
}
'''

SITUS = '''
tbox {
    Human <= some has_heart some has_position {Left} or Ab_Human;
    Situs_Inversus <= some has_heart some has_position {Right};
    (some has_heart some has_position {Left}) and (some has_heart some has_position {Right})
        <= bot;
}
abox {
    # no unique name assumption: the two sides must be told apart
    Left : not {Right};
}
circ {
    minimize Ab_Human;
    fix Human;
    vary Situs_Inversus, has_heart, has_position;
}
'''

FRIEND = '''
abox {
    John : some has_friend Situs_Inversus;
}
circ {
    vary has_friend;
}
'''

STAFF = '''
tbox {
    User <= not some has_AccessTo {ConfidentialFile} or Ab_User;
    Staff <= User;
    Staff <= some has_AccessTo {ConfidentialFile} or Ab_Staff;
    BlacklistedStaff <= Staff and not some has_AccessTo {ConfidentialFile};
}
circ {
    minimize Ab_User, Ab_Staff;
    fix User, Staff, BlacklistedStaff;
    vary has_AccessTo;
}
'''

STAFF_PRIORITY = STAFF + '''
circ {
    prefer Ab_Staff < Ab_User;
}
'''

CONCEPTS = ('A', 'B', 'C', 'D')
ROLES = ('r', 's')
INDIVIDUALS = ('a', 'b')


# ***** Random concepts and KBs *****

def random_role(rng, roles, features=''):
    if 'U' in features and rng.random() < 0.1:
        return UNIVERSAL
    name = rng.choice(roles)
    if 'I' in features and rng.random() < 0.25:
        return Inverse(name)
    return RoleName(name)


def random_concept(rng, concepts, roles=(), depth=2, individuals=(), features=''):
    """ A random concept over the given names

    ``features`` may contain "Q", "I", "O" and "U" to allow number
    restrictions, inverse roles, nominals and the universal role.
    """
    if depth == 0 or rng.random() < 0.35:
        if individuals and 'O' in features and rng.random() < 0.15:
            return Nominal(rng.choice(individuals))
        if rng.random() < 0.08:
            return rng.choice((TOP, BOT))
        return ConceptName(rng.choice(concepts))
    ops = ['not', 'and', 'or']
    if roles:
        ops += ['some', 'all']
        if 'Q' in features:
            ops += ['atleast', 'atmost']
    op = rng.choice(ops)

    def sub():
        return random_concept(rng, concepts, roles, depth - 1, individuals, features)

    if op == 'not':
        return Not(sub())
    if op == 'and':
        return And(sub(), sub())
    if op == 'or':
        return Or(sub(), sub())
    role = random_role(rng, roles, features)
    if op == 'some':
        return Exists(role, sub())
    if op == 'all':
        return Forall(role, sub())
    if op == 'atleast':
        return AtLeast(rng.randint(1, 2), role, sub())
    return AtMost(rng.randint(0, 1), role, sub())


def random_pattern(rng, concepts, roles, kinds='MFV', role_kinds='V', prec=True):
    groups = {'M': set(), 'F': set(), 'V': set()}
    for name in concepts:
        groups[rng.choice(kinds)].add(name)
    for name in roles:
        groups[rng.choice(role_kinds)].add(name)
    pairs = set()
    minimized = sorted(groups['M'])
    if prec and len(minimized) >= 2 and rng.random() < 0.3:
        pairs.add(tuple(rng.sample(minimized, 2)))
    return CircPattern(frozenset(pairs), frozenset(groups['M']), frozenset(groups['F']),
                       frozenset(groups['V']))


def random_kb(rng, n_concepts=2, n_roles=1, n_individuals=1, n_axioms=2, features='',
              kinds='MFV', role_kinds='V', prec=True):
    """ A random cKB; roles vary unless ``role_kinds`` says otherwise """
    concepts = list(CONCEPTS[:n_concepts])
    roles = list(ROLES[:n_roles])
    individuals = list(INDIVIDUALS[:n_individuals])
    tbox = tuple(Inclusion(random_concept(rng, concepts, roles, 1, individuals, features),
                           random_concept(rng, concepts, roles, 2, individuals, features))
                 for _ in range(rng.randint(0, n_axioms)))
    concept_assertions, role_assertions = [], []
    for a in individuals:
        if rng.random() < 0.7:
            concept_assertions.append(ConceptAssertion(
                a, random_concept(rng, concepts, roles, 2, individuals, features)))
        if roles and rng.random() < 0.3:
            role_assertions.append(RoleAssertion(rng.choice(roles), a, rng.choice(individuals)))
    pattern = random_pattern(rng, concepts, roles, kinds, role_kinds, prec)
    return CircKB(tbox, Abox(tuple(concept_assertions), tuple(role_assertions)), pattern)


def seeded(seed):
    return random.Random(seed)


# ***** Oracle feasibility *****

def signature_counts(kbs, items=(), individuals=()):
    ''' Numbers of concept names, role names and individuals the oracle enumerates '''
    concepts, roles, named = set(), set(), set(individuals)
    for kb in kbs:
        concepts |= kb.concept_names()
        roles |= kb.role_names()
        named |= kb.individuals()
    for c in iter_concepts(items):
        concepts |= concept_names(c)
        roles |= role_names(c)
        named |= nominals(c)
    return len(concepts), len(roles), len(named)


def oracle_domain(kbs, items=(), individuals=(), limit=4096, cap=3):
    """ The largest domain size up to cap whose cumulative enumeration stays under limit

    Returns 0 when not even a single element fits.
    """
    counts = signature_counts(kbs, items, individuals)
    total, best = 0, 0
    for d in range(1, cap + 1):
        total += enumeration_size(d, *counts)
        if total > limit:
            break
        best = d
    return best


def query_domain(kb, query, limit=4096, cap=3):
    return oracle_domain([kb], [query], query_individuals(query), limit, cap)
