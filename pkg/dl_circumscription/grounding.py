"""
Grounding of concepts over a fixed finite domain into CNF, and an
incremental SAT search over the result.

An atom is ``('c', A, e)`` for "e is in A" or ``('r', r, e, f)`` for "(e, f)
is in r". The IDPool of a grounding numbers the atoms and the Tseitin
auxiliaries. A grounded formula is either a literal (a non-zero int) or a
Python bool; constants fold away during construction. Number restrictions
are reified sequential counters from ``pysat.card``.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict

from pysat.card import CardEnc, EncType
from pysat.formula import CNF, IDPool
from pysat.solvers import Glucose3

from dl_circumscription.semantics import Interpretation
from dl_circumscription.syntax import (And, AtLeast, AtMost, Bot, ConceptName, Definition, Exists,
                                       Forall, Inverse, Nominal, Not, Or, Top, UniversalRole)


log = logging.getLogger(__name__)

CARD_ENCODING = EncType.seqcounter


def concept_atom(name, e):
    return ('c', name, e)


def role_atom(name, e, f):
    return ('r', name, e, f)


def atom_key(atom):
    ''' Sort atoms by predicate name, then elements '''
    return (atom[1],) + atom[2:]


def neg(x):
    return (not x) if isinstance(x, bool) else -x


# ***** Grounding *****

class Grounding(object):
    """ Grounds concepts over the domain 0..size-1 under a fixed individual map

    Parameters:
        size (int):
            The domain size
        individuals (dict):
            Individual name to element
        concepts (iterable):
            The concept names of the signature
        roles (iterable):
            The role names of the signature
    """

    def __init__(self, size, individuals, concepts, roles):
        self.size = size
        self.individuals = dict(individuals)
        self.concepts = sorted(set(concepts))
        self.roles = sorted(set(roles))
        self.pool = IDPool()
        self.cnf = CNF()
        self.consistent = True
        self._cache = {}
        self._gates = {}
        self._aux = 0

    @property
    def domain(self):
        return range(self.size)

    def atom(self, atom):
        return self.pool.id(atom)

    def literal(self, atom, value):
        return self.atom(atom) if value else -self.atom(atom)

    def predicate_atoms(self, name):
        ''' All atoms of a concept or role name, in element order '''
        if name in self.roles:
            return [role_atom(name, e, f) for e in self.domain for f in self.domain]
        return [concept_atom(name, e) for e in self.domain]

    def all_atoms(self):
        atoms = []
        for name in self.concepts:
            atoms.extend(self.predicate_atoms(name))
        for name in self.roles:
            atoms.extend(self.predicate_atoms(name))
        return atoms

    def unnamed(self):
        ''' Elements no individual denotes '''
        named = set(self.individuals.values())
        return [e for e in self.domain if e not in named]

    # gates with constant folding

    def _fresh(self):
        self._aux += 1
        return self.pool.id(('aux', self._aux))

    def conj(self, items):
        kept = set()
        for item in items:
            if item is False:
                return False
            if item is not True:
                kept.add(item)
        if any(-x in kept for x in kept):
            return False
        if not kept:
            return True
        if len(kept) == 1:
            return next(iter(kept))
        key = ('and', frozenset(kept))
        if key not in self._gates:
            x = self._fresh()
            for item in sorted(kept):
                self.cnf.append([-x, item])
            self.cnf.append([x] + [-item for item in sorted(kept)])
            self._gates[key] = x
        return self._gates[key]

    def disj(self, items):
        return neg(self.conj([neg(item) for item in items]))

    def iff(self, x, y):
        return self.conj([self.disj([neg(x), y]), self.disj([x, neg(y)])])

    def count(self, items, lo, hi=None):
        ''' Between lo and hi (None for unbounded) of the items hold '''
        kept = []
        for item in items:
            if item is True:
                lo -= 1
                if hi is not None:
                    hi -= 1
            elif item is not False:
                kept.append(item)
        lo = max(lo, 0)
        if hi is not None and hi < 0:
            return False
        if lo > len(kept):
            return False
        if hi is not None and hi >= len(kept):
            hi = None
        parts = []
        if lo > 0:
            parts.append(self._at_least(kept, lo))
        if hi is not None:
            parts.append(neg(self._at_least(kept, hi + 1)))
        return self.conj(parts)

    def _at_least(self, lits, k):
        if k == 1:
            return self.disj(lits)
        if k == len(lits):
            return self.conj(lits)
        key = ('atleast', tuple(sorted(lits)), k)
        if key not in self._gates:
            x = self._fresh()
            for clause in CardEnc.atleast(lits, bound=k, vpool=self.pool,
                                          encoding=CARD_ENCODING).clauses:
                self.cnf.append(clause + [-x])
            for clause in CardEnc.atmost(lits, bound=k - 1, vpool=self.pool,
                                         encoding=CARD_ENCODING).clauses:
                self.cnf.append(clause + [x])
            self._gates[key] = x
        return self._gates[key]

    def require(self, items):
        ''' Add grounded formulas as hard constraints '''
        for item in items:
            if item is False:
                self.consistent = False
            elif item is not True:
                self.cnf.append([item])

    # concepts

    def role(self, role, e, f):
        if isinstance(role, UniversalRole):
            return True
        if isinstance(role, Inverse):
            return self.atom(role_atom(role.name, f, e))
        return self.atom(role_atom(role.name, e, f))

    def concept(self, c, e):
        ''' The grounded formula for "e is in c" '''
        key = (c, e)
        if key not in self._cache:
            self._cache[key] = self._ground(c, e)
        return self._cache[key]

    def _ground(self, c, e):
        if isinstance(c, Top):
            return True
        if isinstance(c, Bot):
            return False
        if isinstance(c, ConceptName):
            return self.atom(concept_atom(c.name, e))
        if isinstance(c, Nominal):
            return self.individuals[c.individual] == e
        if isinstance(c, Not):
            return neg(self.concept(c.concept, e))
        if isinstance(c, And):
            return self.conj([self.concept(c.left, e), self.concept(c.right, e)])
        if isinstance(c, Or):
            return self.disj([self.concept(c.left, e), self.concept(c.right, e)])
        edges = [self.conj([self.role(c.role, e, f), self.concept(c.concept, f)])
                 for f in self.domain]
        if isinstance(c, Exists):
            return self.disj(edges)
        if isinstance(c, Forall):
            return self.conj([self.disj([neg(self.role(c.role, e, f)), self.concept(c.concept, f)])
                              for f in self.domain])
        if isinstance(c, AtLeast):
            return self.count(edges, c.n)
        if isinstance(c, AtMost):
            return self.count(edges, 0, c.n)
        raise TypeError('not a concept: {0!r}'.format(c))

    def everywhere(self, c):
        return self.conj([self.concept(c, e) for e in self.domain])

    def nonempty(self, c):
        return self.disj([self.concept(c, e) for e in self.domain])

    def subsumed(self, lhs, rhs):
        return self.conj([self.disj([neg(self.concept(lhs, e)), self.concept(rhs, e)])
                          for e in self.domain])

    def assertion(self, individual, c):
        return self.concept(c, self.individuals[individual])

    def axiom(self, axiom):
        if isinstance(axiom, Definition):
            lhs = ConceptName(axiom.name)
            return self.conj([self.iff(self.concept(lhs, e), self.concept(axiom.rhs, e))
                              for e in self.domain])
        return self.subsumed(axiom.lhs, axiom.rhs)

    def kb_constraints(self, tbox, abox):
        ''' One grounded formula per axiom and assertion '''
        constraints = [self.axiom(axiom) for axiom in tbox]
        for a in abox.concept_assertions:
            constraints.append(self.assertion(a.individual, a.concept))
        for a in abox.role_assertions:
            constraints.append(self.atom(role_atom(
                a.role, self.individuals[a.subject], self.individuals[a.object])))
        return constraints

    def lex_leader(self, names):
        """ Order the unnamed elements by their rows over the concept names

        Each unnamed element's row of atoms must be lexicographically at
        least the row of the next unnamed element. Any model can be brought
        into this order by permuting unnamed elements, so satisfiability and
        circumscribed models are kept up to isomorphism.
        """
        names = [n for n in names if n not in self.roles]
        unnamed = self.unnamed()
        for e, f in zip(unnamed, unnamed[1:]):
            equal = True
            for name in names:
                x, y = self.atom(concept_atom(name, e)), self.atom(concept_atom(name, f))
                self.require([self.disj([neg(equal), x, -y])])
                equal = self.conj([equal, self.iff(x, y)])

    def values(self, model):
        ''' The atom assignment of a solver model; atoms the solver never saw are false '''
        true = set(lit for lit in model if lit > 0)
        ids = self.pool.obj2id
        return {atom: ids.get(atom) in true for atom in self.all_atoms()}

    def interpretation(self, values):
        ''' Read an Interpretation off a complete assignment '''
        concepts, roles = defaultdict(set), defaultdict(set)
        for atom, v in values.items():
            if not v:
                continue
            if atom[0] == 'c':
                concepts[atom[1]].add(atom[2])
            else:
                roles[atom[1]].add((atom[2], atom[3]))
        return Interpretation.build(self.size, concepts, roles, self.individuals)


def interpretation_values(i, grounding, names):
    ''' The atom assignment of an interpretation, restricted to some predicates '''
    values = {}
    for name in names:
        ext = i.extension(name)
        for atom in grounding.predicate_atoms(name):
            values[atom] = (atom[2] if atom[0] == 'c' else atom[2:]) in ext
    return values


def individual_maps(individuals, size, pinned=None, canonical=True):
    """ Enumerate the maps from individuals to the elements 0..size-1

    Individuals are taken in sorted order and elements ascending. With
    ``canonical`` set, a fresh element is only ever the smallest unused one,
    which yields one map per partition of the individuals (up to renaming).

    Parameters:
        individuals (iterable):
            The individual names
        size (int):
            The domain size
        pinned (dict):
            Individuals whose element is already fixed
        canonical (bool):
            Break element symmetry; only sound when nothing else is pinned
    """
    pinned = dict(pinned or {})
    free = sorted(set(individuals) - set(pinned))
    if canonical and not pinned:
        def extend(k, current, used):
            if k == len(free):
                yield dict(current)
                return
            for e in range(min(size, used + 1)):
                current[free[k]] = e
                for m in extend(k + 1, current, max(used, e + 1)):
                    yield m
            del current[free[k]]
        for m in extend(0, {}, 0):
            yield m
        return
    for elements in itertools.product(range(size), repeat=len(free)):
        m = dict(pinned)
        m.update(zip(free, elements))
        yield m


# ***** Search *****

class Search(object):
    """ Incremental SAT search over the clauses of a grounding

    Clauses added to the grounding after the search started, including
    blocking clauses, reach the solver before the next call.

    Parameters:
        grounding (Grounding):
            The grounding whose clauses must hold
        phases (list):
            Preferred literal polarities for the solver's decisions
    """

    def __init__(self, grounding, phases=None):
        self.g = grounding
        self.solver = Glucose3()
        if phases:
            self.solver.set_phases(phases)
        self.sent = 0
        self.calls = 0

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        self.solver.delete()

    def _sync(self):
        clauses = self.g.cnf.clauses
        for clause in clauses[self.sent:]:
            self.solver.add_clause(clause)
        self.sent = len(clauses)

    def solve(self, assumptions=()):
        """ A satisfying atom assignment, or None

        Parameters:
            assumptions (list):
                Literals that must hold for this call only
        """
        if not self.g.consistent:
            return None
        self._sync()
        self.calls += 1
        if self.calls == 1:
            log.debug('searching %d clauses over %d variables', len(self.g.cnf.clauses),
                      self.g.pool.top)
        if not self.solver.solve(assumptions=list(assumptions)):
            return None
        return self.g.values(self.solver.get_model())

    def block(self, clause):
        ''' Exclude every assignment falsifying the clause from later calls '''
        if not clause:
            self.g.consistent = False
        else:
            self.g.cnf.append(list(clause))


def first_model(grounding, assumptions=()):
    ''' One satisfying assignment of the grounding's clauses, or None '''
    with Search(grounding) as search:
        return search.solve(assumptions)
