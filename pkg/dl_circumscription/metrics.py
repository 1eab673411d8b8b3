"""
Size and depth measures, acyclicity, fragment detection and the problem
classifier for circumscribed KBs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import networkx as nx

from dl_circumscription.syntax import (Abox, AtLeast, AtMost, CircKB, Concept, ConceptName,
                                       Definition, Inclusion, Inverse, Nominal, Not, Restriction,
                                       UniversalRole)


# ***** Sizes *****

def _role_size(role):
    return 2 if isinstance(role, Inverse) else 1


def _concept_size(concept):
    if isinstance(concept, Not):
        return 1 + _concept_size(concept.concept)
    if isinstance(concept, Restriction):
        # constructor, role, and the number of a number restriction
        extra = 1 if isinstance(concept, (AtLeast, AtMost)) else 0
        return 1 + extra + _role_size(concept.role) + _concept_size(concept.concept)
    children = concept.children()
    if children:
        return 1 + sum(_concept_size(c) for c in children)
    return 1


def size_of(x):
    """ Length of a concept, TBox or ABox

    A concept's length counts its symbol occurrences. A TBox sums the
    lengths of both sides of each axiom (a definition A == C counts |A| + |C|).
    An ABox sums |C| over concept assertions C(a) and 1 per role assertion.

    Parameters:
        x (Concept | Abox | sequence of axioms):
            The item to measure

    Returns:
        A non-negative integer
    """
    if isinstance(x, Concept):
        return _concept_size(x)
    if isinstance(x, Abox):
        return (sum(_concept_size(a.concept) for a in x.concept_assertions)
                + len(x.role_assertions))
    if isinstance(x, CircKB):
        return size_of(x.tbox) + size_of(x.abox)
    return sum(_concept_size(lhs) + _concept_size(rhs)
               for lhs, rhs in (axiom.concepts() for axiom in x))


def role_depth(concept):
    ''' Maximal nesting of number and quantifier restrictions '''
    if isinstance(concept, Restriction):
        return 1 + role_depth(concept.concept)
    return max([role_depth(c) for c in concept.children()] or [0])


def max_number(concepts):
    ''' Largest number-restriction parameter in the concepts, 0 if none '''
    numbers = [node.n for c in concepts for node in c.walk()
               if isinstance(node, (AtLeast, AtMost))]
    return max(numbers or [0])


# ***** TBox shape *****

def is_acyclic(tbox, primitive=True):
    """ Returns True if the TBox is acyclic

    Every axiom must be a definition A == C, left-hand names must be pairwise
    distinct, and the "uses" relation between defined names must have no cycle.
    Primitive definitions A <= C count as definitions of A unless
    ``primitive`` is False, in which case they make the TBox non-acyclic.
    """
    graph = nx.DiGraph()
    for axiom in tbox:
        if isinstance(axiom, Definition):
            lhs = axiom.name
        elif primitive and isinstance(axiom, Inclusion) and isinstance(axiom.lhs, ConceptName):
            lhs = axiom.lhs.name
        else:
            return False
        if lhs in graph and graph.nodes[lhs].get('defined'):
            return False
        graph.add_node(lhs, defined=True)
        for node in axiom.rhs.walk():
            if isinstance(node, ConceptName):
                graph.add_edge(lhs, node.name)
    return nx.is_directed_acyclic_graph(graph)


# ***** Fragments *****

def constructors(concepts):
    ''' The set of feature letters ("Q", "I", "O", "U") used by the concepts '''
    used = set()
    for concept in concepts:
        for node in concept.walk():
            if isinstance(node, (AtLeast, AtMost)):
                used.add('Q')
            elif isinstance(node, Nominal):
                used.add('O')
            if isinstance(node, Restriction):
                if isinstance(node.role, Inverse):
                    used.add('I')
                elif isinstance(node.role, UniversalRole):
                    used.add('U')
    return used


def detect_fragment(kb, query=None):
    """ Smallest fragment label covering the constructors of a KB and query

    Labels are "ALC" followed by Q, I and O as needed, then "+universal-role"
    if the universal role occurs, e.g. "ALCO" or "ALC+universal-role".
    """
    concepts = list(kb.concepts())
    if query is not None:
        concepts.extend(query.concepts())
    used = constructors(concepts)
    label = 'ALC' + ''.join(letter for letter in 'QIO' if letter in used)
    if 'U' in used:
        label += '+universal-role'
    return label


# ***** Problem classifier *****

class ProblemKind(Enum):
    CONCEPT_CIRC = 'concept-circ'
    CONCEPT_CIRC_BOUNDED = 'concept-circ-bounded'
    ROLE_MINIMIZING_EMPTY_TBOX = 'role-minimizing-empty-tbox'
    ROLE_MINIMIZING_EMPTY_TBOX_WITH_INVERSE = 'role-minimizing-empty-tbox-with-inverse'
    ROLE_MINIMIZING_WITH_TBOX = 'role-minimizing-with-tbox'
    ROLE_FIXING = 'role-fixing'


COMPLEXITY = {
    ProblemKind.CONCEPT_CIRC: 'NExpTime^NP-complete',
    ProblemKind.CONCEPT_CIRC_BOUNDED: 'NP^NExpTime-complete',
    ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX: 'NExpTime^NP-complete',
    ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX_WITH_INVERSE: 'undecidable',
    ProblemKind.ROLE_MINIMIZING_WITH_TBOX: 'undecidable',
    ProblemKind.ROLE_FIXING: 'highly undecidable',
}

DECIDABLE = (ProblemKind.CONCEPT_CIRC, ProblemKind.CONCEPT_CIRC_BOUNDED,
             ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX)


@dataclass(frozen=True)
class ProblemClass:
    kind: ProblemKind
    fragment: str
    c_bound: Optional[int] = None
    caveat: Optional[str] = None

    @property
    def complexity(self):
        return COMPLEXITY[self.kind]

    @property
    def decidable(self):
        return self.kind in DECIDABLE and self.caveat is None

    def __str__(self):
        return '{0}: {1}'.format(self.kind.value, self.complexity)


def classify_problem(kb, c_bound=None):
    """ Classify satisfiability w.r.t. a validated cKB by its complexity

    Role names in F make the problem highly undecidable; role names in M
    make it undecidable unless the TBox is empty and no inverse role occurs.
    Concept circumscription is NExpTime^NP-complete, and NP^NExpTime-complete
    when both #M and #F are at most ``c_bound``.

    Parameters:
        kb (CircKB):
            A validated knowledge base
        c_bound (int):
            Optional constant bounding the number of minimized and fixed names

    Returns:
        A ProblemClass
    """
    fragment = detect_fragment(kb)
    pattern = kb.pattern
    concepts = kb.concept_names() | (pattern.declared() - kb.role_names())
    roles = kb.role_names()
    if pattern.fixed & roles:
        return ProblemClass(ProblemKind.ROLE_FIXING, fragment)
    if pattern.minimized & roles:
        if kb.tbox:
            return ProblemClass(ProblemKind.ROLE_MINIMIZING_WITH_TBOX, fragment)
        if 'I' in fragment:
            return ProblemClass(ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX_WITH_INVERSE, fragment)
        return ProblemClass(ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX, fragment)
    caveat = None
    if 'Q' in fragment and 'I' in fragment and 'O' in fragment:
        caveat = 'ALCQIO lacks the finite model property; the bounds do not apply'
    minimized = len(pattern.minimized & concepts)
    fixed = len(pattern.fixed & concepts)
    if c_bound is not None and minimized <= c_bound and fixed <= c_bound:
        return ProblemClass(ProblemKind.CONCEPT_CIRC_BOUNDED, fragment, c_bound, caveat)
    return ProblemClass(ProblemKind.CONCEPT_CIRC, fragment, None, caveat)
