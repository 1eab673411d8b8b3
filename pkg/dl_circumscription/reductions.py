"""
Answer-preserving transformations between circumscribed KBs.

Each function returns the transformed KB, the transformed query where there
is one, and a ReductionCertificate recording which answers carry over and
which fresh names were introduced. Fresh names always start with "@g/", so
they can never clash with names read from a user file.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Mapping, Optional, Tuple

from dl_circumscription.exceptions import PreconditionError
from dl_circumscription.syntax import (RESERVED_PREFIX, Abox, And, Bot, CircKB, CircPattern,
                                       Concept, ConceptAssertion, ConceptName, Definition,
                                       Exists, Forall, Inclusion, Instance, Not, Or,
                                       RoleAssertion, RoleName, Sat, Subsumes, Top, concept_names,
                                       conj, iff, implies, nominals, rename, role_names,
                                       substitute, validate_kb)


log = logging.getLogger(__name__)


# ***** Bookkeeping *****

class FreshNames(object):
    """ Issues "@g/" names that are absent from the given signatures

    Parameters:
        *taken (iterable):
            Names that must not be issued
    """

    def __init__(self, *taken):
        self.taken = set()
        for names in taken:
            self.taken |= set(names)
        self.issued = []

    def __call__(self, base):
        if base.startswith(RESERVED_PREFIX):
            base = base[len(RESERVED_PREFIX):]
        name = RESERVED_PREFIX + base
        k = 1
        while name in self.taken:
            name = '{0}{1}_{2}'.format(RESERVED_PREFIX, base, k)
            k += 1
        self.taken.add(name)
        self.issued.append(name)
        return name


def describe(query):
    ''' Short text form of a query or concept '''
    if query is None:
        return '-'
    if isinstance(query, Concept):
        return 'sat({0})'.format(query)
    if isinstance(query, Sat):
        return 'sat({0})'.format(query.concept)
    if isinstance(query, Subsumes):
        return '{0} <= {1}'.format(query.lhs, query.rhs)
    return '{0} : {1}'.format(query.individual, query.concept)


@dataclass(frozen=True)
class ReductionCertificate:
    """ What a transformation preserves

    Attributes:
        step: the construction applied
        source: the query before (None for KB-only steps)
        target: the query after
        preservation: how the answers correspond
        fresh: names introduced, all "@g/" prefixed
        notes: caveats, e.g. a minimum model size
    """
    step: str
    source: object
    target: object
    preservation: str
    fresh: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    def lines(self):
        lines = ['step: {0}'.format(self.step),
                 'source: {0}'.format(describe(self.source)),
                 'target: {0}'.format(describe(self.target)),
                 'preservation: {0}'.format(self.preservation)]
        if self.fresh:
            lines.append('fresh: {0}'.format(', '.join(self.fresh)))
        lines.extend('note: {0}'.format(note) for note in self.notes)
        return lines

    def as_dict(self):
        return {'step': self.step, 'source': describe(self.source),
                'target': describe(self.target), 'preservation': self.preservation,
                'fresh': list(self.fresh), 'notes': list(self.notes)}


def _query_names(*concepts):
    names = set()
    for c in concepts:
        names |= concept_names(c) | role_names(c) | nominals(c)
    return names


# ***** Fixed concept names *****

def eliminate_fixed_concepts(kb):
    """ Replace fixed concept names by minimized ones with minimized complements

    Each fixed concept name A is moved to M together with a fresh A' defined
    as not A; fixed role names stay fixed. Satisfiability of every concept over
    the source signature is preserved.
    """
    kb, _ = validate_kb(kb)
    roles = kb.role_names()
    fixed = sorted(kb.pattern.fixed - roles)
    if not fixed:
        return kb, ReductionCertificate('fixed-concepts', None, None, 'identical KB')
    fresh = FreshNames(kb.signature())
    complements = [fresh(name + '_c') for name in fixed]
    tbox = kb.tbox + tuple(Definition(c, Not(ConceptName(a)))
                           for a, c in zip(fixed, complements))
    pattern = kb.pattern.with_sets(
        minimized=kb.pattern.minimized | set(fixed) | set(complements),
        fixed=kb.pattern.fixed - set(fixed))
    certificate = ReductionCertificate(
        'fixed-concepts', None, None,
        'sat(C) is preserved for every concept C over the source names',
        tuple(fresh.issued))
    log.debug('fixed-concepts: %d names moved to M', len(fixed))
    return kb.evolve(tbox=tbox, pattern=pattern), certificate


@dataclass(frozen=True)
class PathsTable:
    ''' Role words and subconcepts reachable from each individual's assertions '''
    pairs: Mapping[str, FrozenSet[Tuple[Tuple[str, ...], Concept]]]

    def paths(self, individual):
        ''' The role words of an individual; the empty word is always included '''
        return frozenset([()]) | frozenset(w for w, _ in self.pairs.get(individual, ()))

    def individuals(self):
        return sorted(self.pairs)


def concept_paths(concept):
    """ The pairs (role word, subconcept) of an ALC concept

    Raises:
        PreconditionError: on number restrictions, inverse or universal roles and nominals
    """
    here = ((), concept)
    if isinstance(concept, (ConceptName, Top, Bot)):
        return frozenset([here])
    if isinstance(concept, Not):
        return frozenset([here]) | concept_paths(concept.concept)
    if isinstance(concept, (And, Or)):
        return frozenset([here]) | concept_paths(concept.left) | concept_paths(concept.right)
    if isinstance(concept, (Exists, Forall)) and isinstance(concept.role, RoleName):
        r = concept.role.name
        return frozenset([here]) | frozenset(((r,) + w, e) for w, e in
                                             concept_paths(concept.concept))
    raise PreconditionError('{0} is not an ALC concept'.format(concept))


def compute_paths(assertions, individuals=()):
    """ Collect the paths table of a set of concept assertions

    Parameters:
        assertions (iterable):
            ConceptAssertion objects
        individuals (iterable):
            Further individuals, which get the empty word only
    """
    pairs = {a: set() for a in individuals}
    for assertion in assertions:
        pairs.setdefault(assertion.individual, set()).update(concept_paths(assertion.concept))
    return PathsTable({a: frozenset(p) for a, p in pairs.items()})


def forall_word(word, concept):
    ''' all r1 all r2 ... concept for the role word r1 r2 ... '''
    for r in reversed(word):
        concept = Forall(RoleName(r), concept)
    return concept


def _word_key(word):
    return (len(word), word)


def eliminate_fixed_concepts_empty_tbox(kb, query):
    """ Remove fixed concept names from an ABox-only KB for an instance query

    For every individual a, every role word w reachable from a's assertions
    (and the query), and every fixed name A, the assertion
    all w.(A' <-> not A)(a) is added, with A' fresh. A and A' become minimized
    and the fixed set becomes empty.

    Parameters:
        kb (CircKB):
            A KB with an empty TBox and no fixed role names
        query (Instance):
            The instance query

    Raises:
        PreconditionError: on a non-empty TBox, a fixed role name or a non-ALC concept
    """
    kb, _ = validate_kb(kb)
    if kb.tbox:
        raise PreconditionError('the TBox must be empty')
    roles = kb.role_names()
    if kb.pattern.fixed & roles:
        raise PreconditionError('fixed role name {0}'.format(
            sorted(kb.pattern.fixed & roles)[0]))
    fixed = sorted(kb.pattern.fixed)
    if not fixed:
        return kb, query, ReductionCertificate('fixed-concepts-abox', query, query, 'identical KB')
    seeds = kb.abox.concept_assertions + (ConceptAssertion(query.individual, query.concept),)
    table = compute_paths(seeds, kb.abox.individuals() | {query.individual})
    fresh = FreshNames(kb.signature(), _query_names(query.concept), [query.individual])
    complements = [fresh(name + '_c') for name in fixed]
    added = []
    for a in table.individuals():
        for word in sorted(table.paths(a), key=_word_key):
            for name, complement in zip(fixed, complements):
                added.append(ConceptAssertion(a, forall_word(word, iff(
                    ConceptName(complement), Not(ConceptName(name))))))
    pattern = kb.pattern.with_sets(
        minimized=kb.pattern.minimized | set(fixed) | set(complements), fixed=())
    certificate = ReductionCertificate(
        'fixed-concepts-abox', query, query, 'instance answer preserved', tuple(fresh.issued),
        ('{0} assertions added'.format(len(added)),))
    log.debug('fixed-concepts-abox: %d assertions over %d individuals', len(added),
              len(table.individuals()))
    return kb.evolve(abox=kb.abox.extended(added), pattern=pattern), query, certificate


# ***** General TBoxes *****

def fold_tbox(tbox):
    ''' The single concept C with top == C equivalent to the TBox; top for an empty TBox '''
    return conj(*[implies(i.lhs, i.rhs) for axiom in tbox for i in axiom.as_inclusions()])


def general_to_acyclic(kb, c0):
    """ Trade a general TBox for an acyclic one

    With C the folded TBox, the result has the definitions A == C,
    B == some u.not A, A' == not A and B' == not B over fresh names. A' and B'
    are minimized, A, B and u vary, and the query becomes c0 and B'.
    """
    kb, _ = validate_kb(kb)
    fresh = FreshNames(kb.signature(), _query_names(c0))
    a, b = fresh('A'), fresh('B')
    a_neg, b_neg = fresh('A_c'), fresh('B_c')
    u = fresh('u')
    tbox = (Definition(a, fold_tbox(kb.tbox)),
            Definition(b, Exists(RoleName(u), Not(ConceptName(a)))),
            Definition(a_neg, Not(ConceptName(a))),
            Definition(b_neg, Not(ConceptName(b))))
    pattern = kb.pattern.with_sets(minimized=kb.pattern.minimized | {a_neg, b_neg},
                                   varying=kb.pattern.varying | {a, b, u})
    target = And(c0, ConceptName(b_neg))
    certificate = ReductionCertificate('acyclic-tbox', Sat(c0), Sat(target),
                                       'sat answer preserved',
                                       tuple(fresh.issued))
    return kb.evolve(tbox=tbox, pattern=pattern), target, certificate


# ***** Simultaneous satisfiability *****

def _pattern_concepts(kb):
    return kb.concept_names() | (kb.pattern.declared() - kb.role_names())


def _rename_kb(kb, mapping):
    tbox = []
    for axiom in kb.tbox:
        if isinstance(axiom, Definition):
            name = mapping.get(axiom.name, axiom.name)
            tbox.append(Definition(name, rename(axiom.rhs, mapping)))
        else:
            tbox.append(Inclusion(rename(axiom.lhs, mapping), rename(axiom.rhs, mapping)))
    abox = Abox(tuple(ConceptAssertion(a.individual, rename(a.concept, mapping))
                      for a in kb.abox.concept_assertions),
                tuple(RoleAssertion(mapping.get(a.role, a.role), a.subject, a.object)
                      for a in kb.abox.role_assertions))
    p = kb.pattern

    def names(items):
        return frozenset(mapping.get(n, n) for n in items)

    pattern = CircPattern(frozenset((mapping.get(q, q), mapping.get(r, r)) for q, r in p.prec),
                          names(p.minimized), names(p.fixed), names(p.varying))
    return CircKB(tuple(tbox), abox, pattern)


def _all_individuals(kb):
    names = set(kb.individuals())
    for axiom in kb.tbox:
        for c in axiom.concepts():
            names |= nominals(c)
    return names


def merge_simultaneous(kbs, c0):
    """ Reduce simultaneous satisfiability of c0 w.r.t. several KBs to one instance query

    The KBs are folded left to right. Fold j primes the concept names KB_j
    shares with the KBs before it, adds axioms making a fresh P_j true
    wherever a shared name and its primed copy disagree, and links all
    individuals with a fresh role r0_j. P_j propagates along every role in
    both directions. c0 is simultaneously satisfiable iff a0 is not an
    instance of not(not P_2 and ... and not P_k and some r0_2.c0).

    Parameters:
        kbs (sequence):
            The KBs; no two may share a role name
        c0 (Concept):
            The query concept

    Returns:
        (kb, Instance query, certificate)

    Raises:
        PreconditionError: if two KBs share a role name
    """
    kbs = [validate_kb(kb)[0] for kb in kbs]
    if not kbs:
        raise PreconditionError('at least one KB is needed')
    seen_roles = {}
    for index, kb in enumerate(kbs):
        for r in sorted(kb.role_names()):
            if r in seen_roles:
                raise PreconditionError('role {0} is shared by KB {1} and KB {2}'.format(
                    r, seen_roles[r] + 1, index + 1))
            seen_roles[r] = index
    fresh = FreshNames(_query_names(c0), *[kb.signature() for kb in kbs])
    individuals = set()
    for kb in kbs:
        individuals |= _all_individuals(kb)
    merged = kbs[0]
    known = _pattern_concepts(merged)
    markers, links, disagreement = [], [], []
    for j, kb in enumerate(kbs[1:], start=2):
        shared = sorted(_pattern_concepts(kb) & known)
        mapping = {name: fresh('{0}_{1}'.format(name, j)) for name in shared}
        part = _rename_kb(kb, mapping)
        p, r0 = fresh('P'), fresh('r0')
        markers.append(p)
        links.append(r0)
        for name in shared:
            a, a2 = ConceptName(name), ConceptName(mapping[name])
            disagreement.append(Inclusion(And(a, Not(a2)), ConceptName(p)))
            disagreement.append(Inclusion(And(Not(a), a2), ConceptName(p)))
        merged = CircKB(merged.tbox + part.tbox,
                        merged.abox.extended(part.abox.concept_assertions,
                                             part.abox.role_assertions),
                        merged.pattern.with_sets(
                            prec=merged.pattern.prec | part.pattern.prec,
                            minimized=merged.pattern.minimized | part.pattern.minimized,
                            fixed=merged.pattern.fixed | part.pattern.fixed,
                            varying=merged.pattern.varying | part.pattern.varying | {p, r0}))
        known |= _pattern_concepts(part)
    if len(kbs) == 1:
        p, r0 = fresh('P'), fresh('r0')
        markers.append(p)
        links.append(r0)
        merged = merged.evolve(pattern=merged.pattern.with_sets(
            varying=merged.pattern.varying | {p, r0}))
    roles = sorted(set(seen_roles) | set(links))
    propagation = []
    for p in markers:
        for r in roles:
            propagation.append(Inclusion(ConceptName(p), Forall(RoleName(r), ConceptName(p))))
            propagation.append(Inclusion(Exists(RoleName(r), ConceptName(p)), ConceptName(p)))
    first = sorted(kbs[0].individuals())
    if first:
        a0 = first[0]
    elif individuals:
        a0 = sorted(individuals)[0]
    else:
        a0 = fresh('a0')
        individuals.add(a0)
    clique = [RoleAssertion(r0, b1, b2) for r0 in links
              for b1 in sorted(individuals) for b2 in sorted(individuals)]
    merged = merged.evolve(tbox=merged.tbox + tuple(disagreement) + tuple(propagation),
                           abox=merged.abox.extended((), clique))
    target = Instance(a0, Not(conj(*([Not(ConceptName(p)) for p in markers]
                                      + [Exists(RoleName(links[0]), c0)]))))
    certificate = ReductionCertificate(
        'simultaneous', Sat(c0), target,
        'c0 is simultaneously satisfiable iff the target instance does not hold',
        tuple(fresh.issued), ('{0} KBs folded left to right'.format(len(kbs)),))
    log.debug('simultaneous: %d KBs, %d clique edges', len(kbs), len(clique))
    return merged, target, certificate


# ***** Reasoning tasks *****

@dataclass(frozen=True)
class TaskReduction:
    """ A reasoning task recast as satisfiability of ``concept``

    ``entailment`` is True when the original task holds exactly when the
    concept is not satisfiable (subsumption and instance checking).
    """
    kb: CircKB
    concept: Concept
    entailment: bool
    certificate: Optional[ReductionCertificate] = None


def task_reduce(query, kb):
    """ Normalize Sat, Subsumes and Instance queries to circumscribed satisfiability

    Instance(a, C) asserts a fresh minimized name A of a, leaves the priority
    relation as it is, and tests A and not C.
    """
    if isinstance(query, Sat):
        return TaskReduction(kb, query.concept, False,
                             ReductionCertificate('task', query, query, 'identical'))
    if isinstance(query, Subsumes):
        target = And(query.lhs, Not(query.rhs))
        return TaskReduction(kb, target, True, ReductionCertificate(
            'task', query, Sat(target), 'holds iff the target is not satisfiable'))
    fresh = FreshNames(kb.signature(), _query_names(query.concept), [query.individual])
    a = fresh('A')
    abox = kb.abox.extended([ConceptAssertion(query.individual, ConceptName(a))])
    pattern = kb.pattern.with_sets(minimized=kb.pattern.minimized | {a})
    target = And(ConceptName(a), Not(query.concept))
    return TaskReduction(kb.evolve(abox=abox, pattern=pattern), target, True,
                         ReductionCertificate('task', query, Sat(target),
                                              'holds iff the target is not satisfiable',
                                              tuple(fresh.issued)))


def sat_to_instance(c, kb):
    ''' c is satisfiable iff a fresh individual is not an instance of not c '''
    fresh = FreshNames(kb.signature(), _query_names(c))
    target = Instance(fresh('a'), Not(c))
    return kb, target, ReductionCertificate(
        'sat-to-instance', Sat(c), target, 'sat iff the target instance does not hold',
        tuple(fresh.issued))


# ***** Shrinking the KB shape *****

# Preference pins every individual, so a preferred target model may place C0 (or relabel the
# C_i) where the source cannot follow. Only the direction target -> source holds in general.
ABOX_TO_TBOX = ('sat of the target implies sat of the source; the converse holds when the'
                ' assertion is Boolean and nothing is fixed')
SINGLE_ROLE = ('sat of the target implies sat of the source in a model of at least k elements;'
               ' the converse holds for k = 1')


def abox_to_acyclic_tbox(kb, c):
    """ Move a single-assertion ABox into an acyclic TBox

    For the ABox {C0(a0)} the result has the TBox {A <= some u.C0} and an
    empty ABox, with A fixed and u varying; c becomes A and c. A target
    model always yields a source model; a source model only yields a target
    model when moving a0 to another C0 element cannot shrink M, which is the
    case for a Boolean C0 without fixed names.

    Raises:
        PreconditionError: unless the TBox and priorities are empty and the ABox
            is one concept assertion
    """
    kb, _ = validate_kb(kb)
    if kb.tbox or kb.abox.role_assertions or len(kb.abox.concept_assertions) != 1:
        raise PreconditionError('expected an empty TBox and a single concept assertion')
    if kb.pattern.prec:
        raise PreconditionError('the priority relation must be empty')
    c0 = kb.abox.concept_assertions[0].concept
    fresh = FreshNames(kb.signature(), _query_names(c))
    a, u = fresh('A'), fresh('u')
    tbox = (Inclusion(ConceptName(a), Exists(RoleName(u), c0)),)
    pattern = kb.pattern.with_sets(fixed=kb.pattern.fixed | {a},
                                   varying=kb.pattern.varying | {u})
    target = And(ConceptName(a), c)
    certificate = ReductionCertificate('abox-to-tbox', Sat(c), Sat(target), ABOX_TO_TBOX,
                                       tuple(fresh.issued),
                                       ('compose with fixed-concepts or fixed-concepts-abox'
                                        ' to remove the fixed name',))
    return CircKB(tbox, Abox(), pattern), target, certificate


def min_concepts_to_min_role(c0, kb):
    """ Replace k minimized concept names by a single minimized role

    Every A_i becomes some r0.C_i, where the C_i are pairwise disjoint
    Boolean concepts over fresh B_1..B_k; the fresh individual "@g/a" gets
    some r1.C_i for each i. A target model yields a source model with at
    least k elements. The converse needs k = 1: with two or more names a
    preferred target model may move an r0 edge into another C_i.

    Returns:
        (kb, query concept, certificate)

    Raises:
        PreconditionError: unless the TBox, F and the priorities are empty and M
            holds concept names only
    """
    kb, _ = validate_kb(kb)
    pattern = kb.pattern
    if kb.tbox:
        raise PreconditionError('the TBox must be empty')
    if pattern.prec or pattern.fixed:
        raise PreconditionError('priorities and fixed predicates must be empty')
    if pattern.minimized & kb.role_names():
        raise PreconditionError('only concept names may be minimized')
    minimized = sorted(pattern.minimized & (kb.concept_names() | concept_names(c0)))
    k = len(minimized)
    fresh = FreshNames(kb.signature(), _query_names(c0))
    r0, r1 = fresh('r0'), fresh('r1')
    bs = [fresh('B{0}'.format(i + 1)) for i in range(k)]
    cs = [conj(*[Not(ConceptName(b)) if j == i else ConceptName(b) for j, b in enumerate(bs)])
          for i in range(k)]
    mapping = {name: Exists(RoleName(r0), c) for name, c in zip(minimized, cs)}
    a = fresh('a')
    assertions = [ConceptAssertion(x.individual, substitute(x.concept, mapping))
                  for x in kb.abox.concept_assertions]
    assertions += [ConceptAssertion(a, Exists(RoleName(r1), c)) for c in cs]
    abox = Abox(tuple(assertions), kb.abox.role_assertions)
    new_pattern = CircPattern(frozenset(), frozenset([r0]), frozenset(),
                              (pattern.varying - set(minimized)) | set(bs) | {r1})
    target = substitute(c0, mapping)
    certificate = ReductionCertificate(
        'single-role', Sat(c0), Sat(target), SINGLE_ROLE,
        tuple(fresh.issued), ('source models need at least {0} elements'.format(k),))
    return CircKB((), abox, new_pattern), target, certificate
