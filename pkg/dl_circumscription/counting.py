"""
Counting formulas and the guess-and-check procedure for concept circumscription.

A counting formula is a Boolean combination of inclusions ``C <= D``,
assertions ``a : C`` and cardinality assertions ``card(C) = n``. The
procedure guesses how many elements fall into each combination of minimized
names, which combination every individual belongs to and which individuals
coincide. A guess succeeds when the KB has a model matching it (the first
formula) and no model preferred to such a model matches it (the second
formula, over primed copies of every name).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import FrozenSet, Tuple

import pyparsing as pp

from dl_circumscription.config import CountingConfig
from dl_circumscription.engine import ExhaustedBound, Satisfiable
from dl_circumscription.exceptions import EnumerationLimitError, PreconditionError
from dl_circumscription.grounding import Grounding, first_model, individual_maps, neg
from dl_circumscription.parser import GRAMMARS, LPAR, RPAR, parse_string
from dl_circumscription.semantics import eval_concept, individual_element
from dl_circumscription.syntax import (RESERVED_PREFIX, Concept, ConceptName, Exists, Nominal, Not,
                                       RoleName, concept_names, conj, nominals, rename,
                                       role_names, validate_kb)


log = logging.getLogger(__name__)


# ***** Formulas *****

class Formula(object):
    ''' Base class of counting formulas '''
    precedence = 4

    def __str__(self):
        return render_cf(self)


@dataclass(frozen=True)
class CFInclusion(Formula):
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class CFAssertion(Formula):
    concept: Concept
    individual: str


@dataclass(frozen=True)
class Cardinality(Formula):
    ''' card(C) = n; n is an unbounded integer '''
    concept: Concept
    n: int


@dataclass(frozen=True)
class CFNot(Formula):
    formula: Formula


@dataclass(frozen=True)
class CFAnd(Formula):
    ''' n-ary conjunction; the empty conjunction is true '''
    items: Tuple[Formula, ...]
    precedence = 3


@dataclass(frozen=True)
class CFOr(Formula):
    ''' n-ary disjunction; the empty disjunction is false '''
    items: Tuple[Formula, ...]
    precedence = 2


@dataclass(frozen=True)
class CFImplies(Formula):
    lhs: Formula
    rhs: Formula
    precedence = 1


def strict(c, d):
    ''' c is a strict subset of d '''
    return CFAnd((CFInclusion(c, d), CFNot(CFInclusion(d, c))))


def equivalent(c, d):
    return CFAnd((CFInclusion(c, d), CFInclusion(d, c)))


def walk_cf(formula):
    yield formula
    if isinstance(formula, CFNot):
        yield from walk_cf(formula.formula)
    elif isinstance(formula, (CFAnd, CFOr)):
        for item in formula.items:
            yield from walk_cf(item)
    elif isinstance(formula, CFImplies):
        yield from walk_cf(formula.lhs)
        yield from walk_cf(formula.rhs)


def cf_signature(formula):
    ''' (concept names, role names, individuals) of a counting formula '''
    concepts, roles, individuals = set(), set(), set()
    for node in walk_cf(formula):
        if isinstance(node, CFInclusion):
            parts = (node.lhs, node.rhs)
        elif isinstance(node, (CFAssertion, Cardinality)):
            parts = (node.concept,)
        else:
            continue
        if isinstance(node, CFAssertion):
            individuals.add(node.individual)
        for c in parts:
            concepts |= concept_names(c)
            roles |= role_names(c)
            individuals |= nominals(c)
    return concepts, roles, individuals


# ***** Text form *****

def _wrap(formula, level):
    text = render_cf(formula)
    return '({0})'.format(text) if formula.precedence < level else text


def render_cf(formula):
    ''' Text form read back by parse_cf '''
    if isinstance(formula, CFInclusion):
        return '{0} <= {1}'.format(formula.lhs, formula.rhs)
    if isinstance(formula, CFAssertion):
        return '{0} : {1}'.format(formula.individual, formula.concept)
    if isinstance(formula, Cardinality):
        return 'card({0}) = {1}'.format(formula.concept, formula.n)
    if isinstance(formula, CFNot):
        return '!({0})'.format(render_cf(formula.formula))
    if isinstance(formula, CFAnd):
        if not formula.items:
            return '(top <= top)'
        return ' & '.join(_wrap(item, 3) for item in formula.items)
    if isinstance(formula, CFOr):
        if not formula.items:
            return '(top <= bot)'
        return ' | '.join(_wrap(item, 2) for item in formula.items)
    return '{0} -> {1}'.format(_wrap(formula.lhs, 2), _wrap(formula.rhs, 1))


def _negate(tokens):
    return CFNot(tokens[0][1])


def _nary(cls):
    def action(tokens):
        return cls(tuple(t for t in tokens[0] if isinstance(t, Formula)))
    return action


def _implies(tokens):
    operands = [t for t in tokens[0] if isinstance(t, Formula)]
    result = operands[-1]
    for operand in reversed(operands[:-1]):
        result = CFImplies(operand, result)
    return result


class FormulaGrammar(object):
    ''' Counting formulas over the concept grammar of KB files '''

    def __init__(self, allow_reserved=False):
        base = GRAMMARS[allow_reserved]
        integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
        card = (pp.Keyword('card') + LPAR + base.concept + RPAR + pp.Suppress('=')
                + integer).set_parse_action(lambda t: Cardinality(t[1], t[2]))
        assertion = (base.name + pp.Suppress(':') + base.concept).set_parse_action(
            lambda t: CFAssertion(t[1], t[0]))
        inclusion = (base.concept + pp.Suppress('<=') + base.concept).set_parse_action(
            lambda t: CFInclusion(t[0], t[1]))
        atom = card | assertion | inclusion
        self.formula = pp.infix_notation(atom, [
            (pp.Literal('!'), 1, pp.OpAssoc.RIGHT, _negate),
            (pp.Literal('&'), 2, pp.OpAssoc.LEFT, _nary(CFAnd)),
            (pp.Literal('|'), 2, pp.OpAssoc.LEFT, _nary(CFOr)),
            (pp.Literal('->'), 2, pp.OpAssoc.RIGHT, _implies),
        ])
        self.formula.ignore(pp.python_style_comment)


FORMULA_GRAMMARS = {}


def parse_cf(text, allow_reserved=False):
    """ Parses a counting formula

    Parameters:
        text (str):
            e.g. "card(A) = 1 & !(a : B) -> A <= B"
        allow_reserved (bool):
            Accept reserved @g/ names

    Raises:
        KBSyntaxError: when the text does not conform to the grammar
    """
    if allow_reserved not in FORMULA_GRAMMARS:
        FORMULA_GRAMMARS[allow_reserved] = FormulaGrammar(allow_reserved)
    return parse_string(FORMULA_GRAMMARS[allow_reserved].formula, text)[0]


# ***** Evaluation *****

def eval_cf(i, formula):
    """ True if the interpretation satisfies the counting formula

    Raises:
        EvaluationError: if an assertion or nominal names an unmapped individual
    """
    if isinstance(formula, CFInclusion):
        return eval_concept(i, formula.lhs) <= eval_concept(i, formula.rhs)
    if isinstance(formula, CFAssertion):
        return individual_element(i, formula.individual) in eval_concept(i, formula.concept)
    if isinstance(formula, Cardinality):
        return len(eval_concept(i, formula.concept)) == formula.n
    if isinstance(formula, CFNot):
        return not eval_cf(i, formula.formula)
    if isinstance(formula, CFAnd):
        return all(eval_cf(i, item) for item in formula.items)
    if isinstance(formula, CFOr):
        return any(eval_cf(i, item) for item in formula.items)
    return not eval_cf(i, formula.lhs) or eval_cf(i, formula.rhs)


def ground_cf(g, formula):
    ''' Ground a counting formula with a Grounding '''
    if isinstance(formula, CFInclusion):
        return g.subsumed(formula.lhs, formula.rhs)
    if isinstance(formula, CFAssertion):
        return g.assertion(formula.individual, formula.concept)
    if isinstance(formula, Cardinality):
        return g.count([g.concept(formula.concept, e) for e in g.domain], formula.n, formula.n)
    if isinstance(formula, CFNot):
        return neg(ground_cf(g, formula.formula))
    if isinstance(formula, CFAnd):
        return g.conj([ground_cf(g, item) for item in formula.items])
    if isinstance(formula, CFOr):
        return g.disj([ground_cf(g, item) for item in formula.items])
    return g.disj([neg(ground_cf(g, formula.lhs)), ground_cf(g, formula.rhs)])


def cf_model_at(formula, d):
    ''' A model of the formula over exactly d elements, or None '''
    concepts, roles, individuals = cf_signature(formula)
    for indiv in individual_maps(individuals, d):
        g = Grounding(d, indiv, concepts, roles)
        g.require([ground_cf(g, formula)])
        g.lex_leader(g.concepts)
        values = first_model(g)
        if values is not None:
            return g.interpretation(values)
    return None


def cf_bounded_sat(formula, max_domain):
    ''' Search domains 1..max_domain for a model; never certified '''
    for d in range(1, max_domain + 1):
        witness = cf_model_at(formula, d)
        if witness is not None:
            return Satisfiable(witness, d)
    return ExhaustedBound(max_domain)


# ***** Guesses *****

def subset_concept(subset, minimized):
    ''' The conjunction of the minimized names in subset and the negations of the rest '''
    return conj(*[ConceptName(a) if a in subset else Not(ConceptName(a))
                  for a in sorted(minimized)])


@dataclass(frozen=True)
class Guess:
    """ A guessed cardinality profile

    Attributes:
        minimized: the minimized concept names, sorted
        counts: elements per subset of minimized, indexed by bit mask
        types: the subset each individual belongs to, as (individual, subset)
        equalities: the pairs of individuals mapped to the same element
    """
    minimized: Tuple[str, ...]
    counts: Tuple[int, ...]
    types: Tuple[Tuple[str, FrozenSet[str]], ...]
    equalities: FrozenSet[Tuple[str, str]]

    def subsets(self):
        return [frozenset(a for k, a in enumerate(self.minimized) if mask >> k & 1)
                for mask in range(2 ** len(self.minimized))]

    @property
    def total(self):
        return sum(self.counts)

    def count(self, subset):
        return self.counts[self.subsets().index(frozenset(subset))]

    def individuals(self):
        return [a for a, _ in self.types]

    def to_dict(self):
        ''' Non-zero counts keyed by "A+B" ("-" for the empty subset) '''
        counts = {}
        for subset, n in zip(self.subsets(), self.counts):
            if n:
                counts['+'.join(sorted(subset)) or '-'] = n
        return {'minimized': list(self.minimized), 'counts': counts,
                'types': {a: sorted(s) for a, s in self.types},
                'equalities': sorted([a, b] for a, b in self.equalities)}


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def set_partitions(items):
    ''' Every partition of a list, as lists of blocks '''
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[head]] + partition
        for k in range(len(partition)):
            yield partition[:k] + [[head] + partition[k]] + partition[k + 1:]


def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def guess_space(n_minimized, n_individuals, budget):
    ''' An upper estimate of the number of guesses '''
    parts = 2 ** n_minimized
    return comb(budget + parts, parts) * parts ** n_individuals * bell(n_individuals)


def enumerate_guesses(minimized, individuals, budget):
    """ Every guess with 1 <= total <= budget, smallest totals first

    Individual types only use subsets with a positive count, equalities are
    equivalence relations that respect types, and no type holds more
    distinct individuals than its count.
    """
    minimized = tuple(sorted(minimized))
    individuals = sorted(individuals)
    parts = 2 ** len(minimized)
    subsets = [frozenset(a for k, a in enumerate(minimized) if mask >> k & 1)
               for mask in range(parts)]
    partitions = list(set_partitions(individuals))
    for total in range(1, budget + 1):
        for counts in _compositions(total, parts):
            used = [mask for mask in range(parts) if counts[mask] > 0]
            for masks in itertools.product(used, repeat=len(individuals)):
                kind = dict(zip(individuals, masks))
                for partition in partitions:
                    if any(len(set(kind[a] for a in block)) > 1 for block in partition):
                        continue
                    blocks = [kind[block[0]] for block in partition]
                    if any(blocks.count(mask) > counts[mask] for mask in set(blocks)):
                        continue
                    equalities = frozenset((a, b) for block in partition
                                           for a in block for b in block)
                    yield Guess(minimized, counts,
                                tuple((a, subsets[kind[a]]) for a in individuals), equalities)


def guess_from_interpretation(i, minimized, individuals=None):
    ''' The cardinality profile of an interpretation '''
    minimized = tuple(sorted(minimized))
    individuals = sorted(i.individuals if individuals is None else individuals)
    subsets = [frozenset(a for k, a in enumerate(minimized) if mask >> k & 1)
               for mask in range(2 ** len(minimized))]
    counts = [0] * len(subsets)

    def kind(e):
        return frozenset(a for a in minimized if e in i.extension(a))

    for e in i.domain:
        counts[subsets.index(kind(e))] += 1
    types = tuple((a, kind(i.individuals[a])) for a in individuals)
    equalities = frozenset((a, b) for a in individuals for b in individuals
                           if i.individuals[a] == i.individuals[b])
    return Guess(minimized, tuple(counts), types, equalities)


# ***** The two formulas *****

def prime(name):
    base = name if name.startswith(RESERVED_PREFIX) else RESERVED_PREFIX + name
    return base + "'"


def prime_kb(kb, extra=()):
    ''' The priming map over every concept and role name of the KB '''
    names = kb.concept_names() | kb.role_names() | set(extra)
    return {name: prime(name) for name in sorted(names)}


def kb_formulas(kb, mapping=None):
    ''' The axioms and assertions of a KB as counting atoms, optionally renamed '''
    mapping = mapping or {}
    atoms = []
    for axiom in kb.tbox:
        for inclusion in axiom.as_inclusions():
            atoms.append(CFInclusion(rename(inclusion.lhs, mapping),
                                     rename(inclusion.rhs, mapping)))
    for a in kb.abox.concept_assertions:
        atoms.append(CFAssertion(rename(a.concept, mapping), a.individual))
    for a in kb.abox.role_assertions:
        role = RoleName(mapping.get(a.role, a.role))
        atoms.append(CFAssertion(Exists(role, Nominal(a.object)), a.subject))
    return atoms


def _profile_formulas(g):
    atoms = [Cardinality(subset_concept(s, g.minimized), n)
             for s, n in zip(g.subsets(), g.counts)]
    atoms.extend(CFAssertion(subset_concept(s, g.minimized), a) for a, s in g.types)
    return atoms


def _equality_formulas(g):
    atoms = []
    for a in g.individuals():
        for b in g.individuals():
            inclusion = CFInclusion(Nominal(a), Nominal(b))
            atoms.append(inclusion if (a, b) in g.equalities else CFNot(inclusion))
    return atoms


def _check_guess(kb, g):
    if kb.pattern.fixed:
        raise PreconditionError('fixed predicates must be eliminated first: {0}'
                                .format(', '.join(sorted(kb.pattern.fixed))))
    if kb.pattern.minimized & kb.role_names():
        raise PreconditionError('the KB minimizes role names')
    if not set(g.minimized) <= kb.pattern.minimized:
        raise PreconditionError('the guess ranges over names that are not minimized')


def build_phi1(kb, c0, g):
    """ The KB, a non-empty c0 and the guessed profile

    Parameters:
        kb (CircKB):
            A KB without fixed predicates
        c0 (Concept):
            The query concept
        g (Guess):
            The guess

    Raises:
        PreconditionError: if the KB has fixed predicates or minimized roles
    """
    _check_guess(kb, g)
    atoms = kb_formulas(kb) + [CFNot(Cardinality(c0, 0))]
    atoms += _profile_formulas(g) + _equality_formulas(g)
    return CFAnd(tuple(atoms))


def build_phi2(kb, g):
    """ A primed model of the KB that is preferred to any model matching the guess

    The unprimed minimized names carry the guessed profile; the primed copy
    of the KB must beat them under the priority relation.
    """
    _check_guess(kb, g)
    mapping = prime_kb(kb, g.minimized)
    closure = kb.pattern.closure()
    atoms = kb_formulas(kb, mapping) + _profile_formulas(g) + _equality_formulas(g)
    strict_somewhere = []
    for a in g.minimized:
        higher = sorted(q for (q, p) in closure if p == a)
        ca, pa = ConceptName(a), ConceptName(mapping[a])
        compensated = CFOr(tuple(strict(ConceptName(mapping[b]), ConceptName(b))
                                 for b in higher))
        atoms.append(CFImplies(CFNot(CFInclusion(pa, ca)), compensated))
        strict_somewhere.append(CFAnd((strict(pa, ca),) + tuple(
            equivalent(ConceptName(b), ConceptName(mapping[b])) for b in higher)))
    atoms.append(CFOr(tuple(strict_somewhere)))
    return CFAnd(tuple(atoms))


def counting_sat(c0, kb, budget=None, max_domain=None, cfg=None):
    """ Decide satisfiability of c0 w.r.t. a concept-circumscribed KB by guess and check

    Fixed concept names are eliminated first. Guesses are tried with the
    smallest total first; a guess wins when its first formula has a model of
    exactly that size and its second formula has none.

    Parameters:
        c0 (Concept):
            The query concept
        kb (CircKB):
            A KB with concept names only in M and F
        budget (int):
            Upper limit on the guessed domain size
        max_domain (int):
            Largest domain size searched
        cfg (CountingConfig):
            Defaults for budget, max_domain and the guess ceiling

    Returns:
        Satisfiable (with the winning guess) or ExhaustedBound

    Raises:
        PreconditionError: for a KB that minimizes or fixes role names
        EnumerationLimitError: when the guess space exceeds the ceiling
    """
    from dl_circumscription.reductions import eliminate_fixed_concepts

    cfg = cfg or CountingConfig()
    budget = cfg.budget if budget is None else budget
    max_domain = cfg.max_domain if max_domain is None else max_domain
    kb, _ = validate_kb(kb)
    roles = kb.role_names()
    if (kb.pattern.minimized | kb.pattern.fixed) & roles:
        raise PreconditionError('the KB is not concept-circumscribed')
    reduced, _ = eliminate_fixed_concepts(kb)
    minimized = sorted(reduced.pattern.minimized - roles)
    individuals = sorted(reduced.individuals() | nominals(c0))
    estimate = guess_space(len(minimized), len(individuals), budget)
    if estimate > cfg.guess_ceiling:
        raise EnumerationLimitError('guess space of {0} exceeds the ceiling of {1}'.format(
            estimate, cfg.guess_ceiling), estimate, cfg.guess_ceiling)
    names = kb.signature() | concept_names(c0) | role_names(c0) | nominals(c0)
    tried = 0
    for g in enumerate_guesses(minimized, individuals, budget):
        if g.total > max_domain:
            break
        tried += 1
        witness = cf_model_at(build_phi1(reduced, c0, g), g.total)
        if witness is None:
            continue
        if cf_model_at(build_phi2(reduced, g), g.total) is None:
            log.debug('guess %d succeeded at size %d', tried, g.total)
            return Satisfiable(witness.restrict(names), g.total, g)
    log.debug('no guess out of %d succeeded', tried)
    return ExhaustedBound(min(budget, max_domain))


theorem13_sat = counting_sat
