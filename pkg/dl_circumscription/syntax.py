"""
Abstract syntax of circumscribed ALCQIO knowledge bases.

Concepts, roles, axioms and assertions are immutable dataclasses, so they can
be hashed, compared structurally and shared freely between threads. Calling
``str()`` on a concept gives its surface syntax, parenthesized so that
reading the text back produces the same tree::

    >>> c = And(ConceptName('Mammal'), Not(Exists(RoleName('habitat'), ConceptName('Land'))))
    >>> str(c)
    'Mammal and not some habitat Land'
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import FrozenSet, Tuple, Union


RESERVED_PREFIX = '@g/'

# binding strength of the rendered forms: unary and atoms > and > or
_ATOM, _AND, _OR = 3, 2, 1


# ***** Roles *****

class Role(object):
    ''' Base class of the three role forms '''

    @property
    def is_named(self):
        return isinstance(self, RoleName)


@dataclass(frozen=True)
class RoleName(Role):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Inverse(Role):
    ''' The inverse r^- of a named role; inverses of inverses are not representable '''
    name: str

    def __str__(self):
        return 'inv({0})'.format(self.name)


@dataclass(frozen=True)
class UniversalRole(Role):

    def __str__(self):
        return 'univ'


UNIVERSAL = UniversalRole()


def as_role(value):
    ''' Coerce a string to a RoleName, pass roles through '''
    return RoleName(value) if isinstance(value, str) else value


# ***** Concepts *****

class Concept(object):
    """ Base class of concept nodes

    Subclasses are frozen dataclasses. ``&``, ``|`` and ``~`` build
    conjunctions, disjunctions and negations.
    """
    precedence = _ATOM

    def children(self):
        return ()

    def walk(self):
        ''' Yield this node and every sub-node, pre-order '''
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return self.render()

    def render(self):
        raise NotImplementedError


def _wrap(concept, level):
    text = concept.render()
    return '({0})'.format(text) if concept.precedence < level else text


@dataclass(frozen=True)
class Top(Concept):

    def render(self):
        return 'top'


@dataclass(frozen=True)
class Bot(Concept):

    def render(self):
        return 'bot'


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class ConceptName(Concept):
    name: str

    def render(self):
        return self.name


@dataclass(frozen=True)
class Nominal(Concept):
    individual: str

    def render(self):
        return '{' + self.individual + '}'


@dataclass(frozen=True)
class Not(Concept):
    concept: Concept

    def children(self):
        return (self.concept,)

    def render(self):
        return 'not ' + _wrap(self.concept, _ATOM)


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept
    precedence = _AND

    def children(self):
        return (self.left, self.right)

    def render(self):
        return '{0} and {1}'.format(_wrap(self.left, _AND), _wrap(self.right, _ATOM))


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept
    precedence = _OR

    def children(self):
        return (self.left, self.right)

    def render(self):
        return '{0} or {1}'.format(_wrap(self.left, _OR), _wrap(self.right, _AND))


class Restriction(Concept):
    ''' Common base of the four role restrictions '''

    def children(self):
        return (self.concept,)


@dataclass(frozen=True)
class AtLeast(Restriction):
    n: int
    role: Role
    concept: Concept

    def render(self):
        return 'atleast {0} {1} {2}'.format(self.n, self.role, _wrap(self.concept, _ATOM))


@dataclass(frozen=True)
class AtMost(Restriction):
    n: int
    role: Role
    concept: Concept

    def render(self):
        return 'atmost {0} {1} {2}'.format(self.n, self.role, _wrap(self.concept, _ATOM))


@dataclass(frozen=True)
class Exists(Restriction):
    role: Role
    concept: Concept

    def render(self):
        return 'some {0} {1}'.format(self.role, _wrap(self.concept, _ATOM))


@dataclass(frozen=True)
class Forall(Restriction):
    role: Role
    concept: Concept

    def render(self):
        return 'all {0} {1}'.format(self.role, _wrap(self.concept, _ATOM))


def as_concept(value):
    ''' Coerce a string to a ConceptName, pass concepts through '''
    return ConceptName(value) if isinstance(value, str) else value


# ***** Concept builders *****

def conj(*concepts):
    ''' Left-nested conjunction; the empty conjunction is top '''
    concepts = [as_concept(c) for c in concepts]
    if not concepts:
        return TOP
    result = concepts[0]
    for concept in concepts[1:]:
        result = And(result, concept)
    return result


def disj(*concepts):
    ''' Left-nested disjunction; the empty disjunction is bot '''
    concepts = [as_concept(c) for c in concepts]
    if not concepts:
        return BOT
    result = concepts[0]
    for concept in concepts[1:]:
        result = Or(result, concept)
    return result


def implies(lhs, rhs):
    return Or(Not(as_concept(lhs)), as_concept(rhs))


def iff(lhs, rhs):
    ''' A <-> B expanded to (not A or B) and (not B or A) '''
    lhs, rhs = as_concept(lhs), as_concept(rhs)
    return And(Or(Not(lhs), rhs), Or(Not(rhs), lhs))


def forall_chain(r, depth, concept):
    ''' The depth-fold nesting of all r '''
    concept = as_concept(concept)
    for _ in range(depth):
        concept = Forall(as_role(r), concept)
    return concept


def exists_chain(r, depth, concept):
    concept = as_concept(concept)
    for _ in range(depth):
        concept = Exists(as_role(r), concept)
    return concept


def forall_one(roles, concept):
    ''' C and all r.C for each r of roles '''
    concept = as_concept(concept)
    return conj(concept, *[Forall(as_role(r), concept) for r in roles])


def forall_power(roles, m, concept):
    """ The m-step universal tower over a role set

    The zero step is the concept itself; step m conjoins step m-1 with
    ``all r.`` step m-1 for every role r.
    """
    concept = as_concept(concept)
    if m == 0:
        return concept
    inner = forall_power(roles, m - 1, concept)
    return conj(inner, *[Forall(as_role(r), inner) for r in roles])


# ***** Signature helpers *****

def concept_names(concept):
    return frozenset(n.name for n in concept.walk() if isinstance(n, ConceptName))


def role_names(concept):
    names = set()
    for node in concept.walk():
        if isinstance(node, Restriction) and not isinstance(node.role, UniversalRole):
            names.add(node.role.name)
    return frozenset(names)


def nominals(concept):
    return frozenset(n.individual for n in concept.walk() if isinstance(n, Nominal))


def rename(concept, mapping):
    ''' Rename concept and role names (not individuals) according to mapping '''
    if isinstance(concept, ConceptName):
        return ConceptName(mapping.get(concept.name, concept.name))
    if isinstance(concept, (Top, Bot, Nominal)):
        return concept
    if isinstance(concept, Not):
        return Not(rename(concept.concept, mapping))
    if isinstance(concept, (And, Or)):
        return type(concept)(rename(concept.left, mapping), rename(concept.right, mapping))
    r = concept.role
    if isinstance(r, (RoleName, Inverse)):
        r = type(r)(mapping.get(r.name, r.name))
    if isinstance(concept, (AtLeast, AtMost)):
        return type(concept)(concept.n, r, rename(concept.concept, mapping))
    return type(concept)(r, rename(concept.concept, mapping))


def substitute(concept, mapping):
    ''' Replace concept names by concepts '''
    if isinstance(concept, ConceptName):
        return mapping.get(concept.name, concept)
    if isinstance(concept, (Top, Bot, Nominal)):
        return concept
    if isinstance(concept, Not):
        return Not(substitute(concept.concept, mapping))
    if isinstance(concept, (And, Or)):
        return type(concept)(substitute(concept.left, mapping),
                             substitute(concept.right, mapping))
    if isinstance(concept, (AtLeast, AtMost)):
        return type(concept)(concept.n, concept.role, substitute(concept.concept, mapping))
    return type(concept)(concept.role, substitute(concept.concept, mapping))


# ***** Axioms and assertions *****

@dataclass(frozen=True)
class Inclusion:
    lhs: Concept
    rhs: Concept

    def as_inclusions(self):
        return (self,)

    def concepts(self):
        return (self.lhs, self.rhs)

    def __str__(self):
        return '{0} <= {1}'.format(self.lhs, self.rhs)


@dataclass(frozen=True)
class Definition:
    ''' A == C, shorthand for the two inclusions A <= C and C <= A '''
    name: str
    rhs: Concept

    def as_inclusions(self):
        lhs = ConceptName(self.name)
        return (Inclusion(lhs, self.rhs), Inclusion(self.rhs, lhs))

    def concepts(self):
        return (ConceptName(self.name), self.rhs)

    def __str__(self):
        return '{0} == {1}'.format(self.name, self.rhs)


Axiom = Union[Inclusion, Definition]


@dataclass(frozen=True)
class ConceptAssertion:
    individual: str
    concept: Concept

    def __str__(self):
        return '{0} : {1}'.format(self.individual, self.concept)


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def __str__(self):
        return '{0}({1}, {2})'.format(self.role, self.subject, self.object)


@dataclass(frozen=True)
class Abox:
    concept_assertions: Tuple[ConceptAssertion, ...] = ()
    role_assertions: Tuple[RoleAssertion, ...] = ()

    def __iter__(self):
        return iter(self.concept_assertions + self.role_assertions)

    def __len__(self):
        return len(self.concept_assertions) + len(self.role_assertions)

    def individuals(self):
        names = set(a.individual for a in self.concept_assertions)
        for a in self.role_assertions:
            names.update((a.subject, a.object))
        for a in self.concept_assertions:
            names.update(nominals(a.concept))
        return frozenset(names)

    def extended(self, concept_assertions=(), role_assertions=()):
        return Abox(self.concept_assertions + tuple(concept_assertions),
                    self.role_assertions + tuple(role_assertions))


# ***** Circumscription pattern and knowledge base *****

def transitive_closure(pairs):
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closure):
            for (c, d) in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return frozenset(closure)


@dataclass(frozen=True)
class CircPattern:
    """ A circumscription pattern (prec, M, F, V)

    ``prec`` holds the generator pairs as entered; ``(q, p)`` means q has
    higher priority than p. Validation works on its transitive closure.
    """
    prec: FrozenSet[Tuple[str, str]] = frozenset()
    minimized: FrozenSet[str] = frozenset()
    fixed: FrozenSet[str] = frozenset()
    varying: FrozenSet[str] = frozenset()

    def closure(self):
        return transitive_closure(self.prec)

    def higher(self, p):
        ''' Names q with q prec p in the closure '''
        return frozenset(q for (q, r) in self.closure() if r == p)

    def kind_of(self, predicate):
        ''' "M", "F" or "V"; names outside the pattern vary '''
        if predicate in self.minimized:
            return 'M'
        if predicate in self.fixed:
            return 'F'
        return 'V'

    def declared(self):
        return self.minimized | self.fixed | self.varying

    def with_sets(self, prec=None, minimized=None, fixed=None, varying=None):
        return CircPattern(
            frozenset(self.prec if prec is None else prec),
            frozenset(self.minimized if minimized is None else minimized),
            frozenset(self.fixed if fixed is None else fixed),
            frozenset(self.varying if varying is None else varying))


@dataclass(frozen=True)
class CircKB:
    tbox: Tuple[Axiom, ...] = ()
    abox: Abox = field(default_factory=Abox)
    pattern: CircPattern = field(default_factory=CircPattern)

    def concepts(self):
        ''' Every concept occurring in the TBox and ABox '''
        for axiom in self.tbox:
            for concept in axiom.concepts():
                yield concept
        for assertion in self.abox.concept_assertions:
            yield assertion.concept

    def concept_names(self):
        names = set()
        for concept in self.concepts():
            names |= concept_names(concept)
        return frozenset(names)

    def role_names(self):
        names = set(a.role for a in self.abox.role_assertions)
        for concept in self.concepts():
            names |= role_names(concept)
        return frozenset(names)

    def predicates(self):
        return self.concept_names() | self.role_names()

    def individuals(self):
        names = set(self.abox.individuals())
        for concept in self.concepts():
            names |= nominals(concept)
        return frozenset(names)

    def signature(self):
        ''' All concept names, role names and individuals, pattern declarations included '''
        return self.predicates() | self.individuals() | self.pattern.declared()

    def evolve(self, **changes):
        return replace(self, **changes)


# ***** Queries *****

@dataclass(frozen=True)
class Sat:
    concept: Concept

    def concepts(self):
        return (self.concept,)


@dataclass(frozen=True)
class Subsumes:
    lhs: Concept
    rhs: Concept

    def concepts(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Instance:
    individual: str
    concept: Concept

    def concepts(self):
        return (self.concept,)


Query = Union[Sat, Subsumes, Instance]


def query_individuals(query):
    names = set()
    for concept in query.concepts():
        names |= nominals(concept)
    if isinstance(query, Instance):
        names.add(query.individual)
    return frozenset(names)


def iter_concepts(items):
    for item in items:
        if isinstance(item, Concept):
            yield item
        else:
            for concept in item.concepts():
                yield concept


# ***** Validation *****

def _first(names):
    return sorted(names)[0]


def validate_kb(kb, strict=False):
    """ Check a KB against the pattern rules and fill in undeclared predicates

    Predicates that occur in the TBox or ABox but are not declared in the
    pattern are added to V, one warning each. With ``strict`` set they are
    rejected instead.

    Parameters:
        kb (CircKB):
            The knowledge base to check
        strict (bool):
            Reject undeclared predicates

    Returns:
        A tuple (kb, warnings) with the completed KB and the warning messages

    Raises:
        PatternError: on the first violation, naming the offending predicate
    """
    from dl_circumscription.exceptions import PatternError

    pattern = kb.pattern
    concepts, roles = kb.concept_names(), kb.role_names()
    clash = concepts & roles
    if clash:
        p = _first(clash)
        raise PatternError('{0} is used both as a concept name and as a role name'.format(p), p)
    for left, right in ((pattern.minimized, pattern.fixed), (pattern.minimized, pattern.varying),
                        (pattern.fixed, pattern.varying)):
        overlap = left & right
        if overlap:
            p = _first(overlap)
            raise PatternError('{0} is declared in more than one of minimize, fix and vary'
                               .format(p), p)
    declared = pattern.declared()
    if 'univ' in declared:
        raise PatternError('the universal role cannot be minimized, fixed or varied', 'univ')
    for (q, p) in sorted(pattern.prec):
        for x in (q, p):
            if x not in pattern.minimized:
                raise PatternError('prefer relates {0}, which is not minimized'.format(x), x)
    loops = [q for (q, p) in pattern.closure() if q == p]
    if loops:
        p = _first(loops)
        raise PatternError('prefer is not a strict partial order: {0} precedes itself'
                           .format(p), p)
    missing = kb.predicates() - declared
    warnings = []
    if missing and strict:
        p = _first(missing)
        raise PatternError('{0} occurs in the KB but not in the circ block'.format(p), p)
    for p in sorted(missing):
        warnings.append('{0} is not declared in the circ block; treated as varying'.format(p))
    if missing:
        kb = kb.evolve(pattern=pattern.with_sets(varying=pattern.varying | missing))
    return kb, warnings
