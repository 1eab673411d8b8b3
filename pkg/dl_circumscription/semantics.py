"""
Finite interpretations, evaluation, model checking and the preference
relation between interpretations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Mapping, Tuple

from dl_circumscription.exceptions import EvaluationError
from dl_circumscription.syntax import (And, AtLeast, AtMost, Bot, ConceptName, Definition, Exists,
                                       Forall, Inverse, Nominal, Not, Or, Top, UniversalRole)


def element_name(e):
    return 'd{0}'.format(e)


@dataclass(frozen=True, eq=True)
class Interpretation:
    """ A finite interpretation over the domain 0..size-1

    Empty extensions are dropped on construction, so two interpretations
    that agree on every predicate compare equal. Use :meth:`build` rather
    than the constructor.
    """
    size: int
    concepts: Mapping[str, FrozenSet[int]] = field(default_factory=dict)
    roles: Mapping[str, FrozenSet[Tuple[int, int]]] = field(default_factory=dict)
    individuals: Mapping[str, int] = field(default_factory=dict)

    __hash__ = None

    @classmethod
    def build(cls, size, concepts=None, roles=None, individuals=None):
        if size < 1:
            raise ValueError('an interpretation needs a non-empty domain')
        concepts = {k: frozenset(v) for k, v in (concepts or {}).items() if v}
        roles = {k: frozenset(tuple(p) for p in v) for k, v in (roles or {}).items() if v}
        for ext in concepts.values():
            if any(not 0 <= e < size for e in ext):
                raise ValueError('concept extension outside the domain')
        for ext in roles.values():
            if any(not (0 <= e < size and 0 <= f < size) for e, f in ext):
                raise ValueError('role extension outside the domain')
        return cls(size, concepts, roles, dict(individuals or {}))

    @property
    def domain(self):
        return tuple(range(self.size))

    def extension(self, predicate):
        ''' The extension of a concept or role name, empty when absent '''
        if predicate in self.concepts:
            return self.concepts[predicate]
        return self.roles.get(predicate, frozenset())

    def with_extensions(self, concepts=None, roles=None):
        ''' A copy with some concept or role extensions replaced '''
        merged_concepts = dict(self.concepts)
        merged_concepts.update(concepts or {})
        merged_roles = dict(self.roles)
        merged_roles.update(roles or {})
        return Interpretation.build(self.size, merged_concepts, merged_roles, self.individuals)

    def restrict(self, names):
        ''' Keep only the given predicate and individual names '''
        names = set(names)
        return Interpretation.build(
            self.size,
            {k: v for k, v in self.concepts.items() if k in names},
            {k: v for k, v in self.roles.items() if k in names},
            {k: v for k, v in self.individuals.items() if k in names})

    def to_dict(self):
        ''' Witness serialization, ordered by the element order '''
        return {
            'domain': [element_name(e) for e in self.domain],
            'concepts': {k: [element_name(e) for e in sorted(v)]
                         for k, v in sorted(self.concepts.items())},
            'roles': {k: [[element_name(e), element_name(f)] for e, f in sorted(v)]
                      for k, v in sorted(self.roles.items())},
            'individuals': {k: element_name(v) for k, v in sorted(self.individuals.items())},
        }

    @classmethod
    def from_dict(cls, data):
        index = {n: k for k, n in enumerate(data['domain'])}
        return cls.build(
            len(data['domain']),
            {k: [index[e] for e in v] for k, v in data.get('concepts', {}).items()},
            {k: [(index[e], index[f]) for e, f in v] for k, v in data.get('roles', {}).items()},
            {k: index[v] for k, v in data.get('individuals', {}).items()})


# ***** Evaluation *****

def eval_role(i, role):
    ''' The extension of a role: inverses swap pairs, the universal role is the full square '''
    if isinstance(role, UniversalRole):
        return frozenset((e, f) for e in i.domain for f in i.domain)
    pairs = i.roles.get(role.name, frozenset())
    if isinstance(role, Inverse):
        return frozenset((f, e) for e, f in pairs)
    return pairs


class _Evaluator(object):
    ''' Evaluates concepts against one interpretation, caching per node '''

    def __init__(self, i):
        self.i = i
        self.domain = frozenset(i.domain)
        self.cache = {}
        self.successors = {}

    def succ(self, role):
        key = str(role)
        if key not in self.successors:
            table = dict((e, set()) for e in self.i.domain)
            for e, f in eval_role(self.i, role):
                table[e].add(f)
            self.successors[key] = table
        return self.successors[key]

    def count(self, role, filler, e):
        return len(self.succ(role)[e] & filler)

    def __call__(self, c):
        key = id(c)
        if key in self.cache:
            return self.cache[key][1]
        result = self._eval(c)
        # keep c alive so its id is not reused inside this call tree
        self.cache[key] = (c, result)
        return result

    def _eval(self, c):
        i = self.i
        if isinstance(c, Top):
            return self.domain
        if isinstance(c, Bot):
            return frozenset()
        if isinstance(c, ConceptName):
            return i.concepts.get(c.name, frozenset())
        if isinstance(c, Nominal):
            if c.individual not in i.individuals:
                raise EvaluationError('individual {0} is not mapped'.format(c.individual))
            return frozenset([i.individuals[c.individual]])
        if isinstance(c, Not):
            return self.domain - self(c.concept)
        if isinstance(c, And):
            return self(c.left) & self(c.right)
        if isinstance(c, Or):
            return self(c.left) | self(c.right)
        filler = self(c.concept)
        if isinstance(c, Exists):
            return frozenset(e for e in i.domain if self.count(c.role, filler, e) >= 1)
        if isinstance(c, Forall):
            return frozenset(e for e in i.domain if self.succ(c.role)[e] <= filler)
        if isinstance(c, AtLeast):
            return frozenset(e for e in i.domain if self.count(c.role, filler, e) >= c.n)
        if isinstance(c, AtMost):
            return frozenset(e for e in i.domain if self.count(c.role, filler, e) <= c.n)
        raise TypeError('not a concept: {0!r}'.format(c))


def eval_concept(i, concept):
    """ Returns the extension of a concept as a frozenset of elements

    Raises:
        EvaluationError: if a nominal names an unmapped individual
    """
    return _Evaluator(i)(concept)


def evaluator(i):
    ''' A reusable evaluator for many concepts over the same interpretation '''
    return _Evaluator(i)


def individual_element(i, name):
    ''' The element an individual denotes in i '''
    if name not in i.individuals:
        raise EvaluationError('individual {0} is not mapped'.format(name))
    return i.individuals[name]


def is_model(i, tbox, abox):
    ''' True if i satisfies every axiom and assertion '''
    ev = _Evaluator(i)
    for axiom in tbox:
        if isinstance(axiom, Definition):
            if i.concepts.get(axiom.name, frozenset()) != ev(axiom.rhs):
                return False
        elif not ev(axiom.lhs) <= ev(axiom.rhs):
            return False
    for assertion in abox.concept_assertions:
        if individual_element(i, assertion.individual) not in ev(assertion.concept):
            return False
    for assertion in abox.role_assertions:
        pair = (individual_element(i, assertion.subject), individual_element(i, assertion.object))
        if pair not in i.roles.get(assertion.role, frozenset()):
            return False
    return True


# ***** Preference *****

@dataclass(frozen=True)
class PreferenceWitness:
    ''' The strictly smaller predicate and the compensations that justify a preference '''
    strict: str
    compensations: Tuple[Tuple[str, str], ...] = ()


def prefers_extensions(ext_i, ext_j, minimized, closure):
    """ The part of the preference relation that looks at minimized extensions

    Parameters:
        ext_i (dict):
            Extensions of the candidate preferred interpretation, by predicate
        ext_j (dict):
            Extensions of the interpretation it is compared against
        minimized (iterable):
            The minimized predicates
        closure (set):
            Transitively closed priority pairs (q, p), q has higher priority

    Returns:
        A PreferenceWitness or None
    """
    empty = frozenset()
    higher = {}
    for (q, p) in closure:
        higher.setdefault(p, []).append(q)
    compensations = []
    for p in sorted(minimized):
        if ext_i.get(p, empty) <= ext_j.get(p, empty):
            continue
        for q in sorted(higher.get(p, ())):
            if ext_i.get(q, empty) < ext_j.get(q, empty):
                compensations.append((p, q))
                break
        else:
            return None
    for p in sorted(minimized):
        if ext_i.get(p, empty) < ext_j.get(p, empty) and all(
                ext_i.get(q, empty) == ext_j.get(q, empty) for q in higher.get(p, ())):
            return PreferenceWitness(p, tuple(compensations))
    return None


def prefers(i, j, cp, individuals=None):
    """ Returns a PreferenceWitness if i is preferred to j under the pattern cp

    i and j must share the domain and agree on the individuals (all of them,
    or the given ``individuals``) and on every fixed predicate. Every
    minimized p that grows from j to i must be compensated by some q of
    higher priority that strictly shrinks, and some minimized p must
    strictly shrink while all predicates above it stay equal.
    """
    if i.size != j.size:
        return None
    names = set(individuals) if individuals is not None else (
        set(i.individuals) | set(j.individuals))
    for a in names:
        if i.individuals.get(a) != j.individuals.get(a):
            return None
    for p in cp.fixed:
        if i.extension(p) != j.extension(p):
            return None
    ext_i = {p: i.extension(p) for p in cp.minimized}
    ext_j = {p: j.extension(p) for p in cp.minimized}
    return prefers_extensions(ext_i, ext_j, cp.minimized, cp.closure())


def is_circ_model(i, kb):
    ''' True if i is a model of the KB and no same-domain model is preferred to it '''
    from dl_circumscription.engine import find_preferred
    return is_model(i, kb.tbox, kb.abox) and find_preferred(i, kb) is None
