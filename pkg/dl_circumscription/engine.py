"""
Bounded circumscribed reasoning over grounded finite domains.

``circ_sat`` tries domain sizes 1..max_domain. At each size it enumerates
one classical model per profile (individual map, fixed extensions, minimized
extensions) in which the query concept is non-empty, and asks
``find_preferred`` for a same-domain model preferred to it. The first model
without one is a circumscribed model and is returned as the witness.

A ``Satisfiable`` verdict is sound at any bound, since preference only
compares interpretations over the same domain. Running out of sizes gives
``ExhaustedBound``, which is not an unsatisfiability claim; it is upgraded to
``UnsatCertified`` only when certification was requested and max_domain
reaches the completeness bound of the problem class.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, ClassVar, Optional

from dl_circumscription.config import SearchConfig
from dl_circumscription.exceptions import PreconditionError
from dl_circumscription.grounding import (Grounding, Search, atom_key, first_model,
                                          individual_maps, interpretation_values, neg)
from dl_circumscription.metrics import (ProblemKind, classify_problem, constructors, max_number,
                                        role_depth, size_of)
from dl_circumscription.semantics import Interpretation
from dl_circumscription.syntax import (And, Instance, Not, Sat, Subsumes, concept_names, nominals,
                                       role_names, validate_kb)


log = logging.getLogger(__name__)


# ***** Verdicts *****

@dataclass(frozen=True)
class Satisfiable:
    witness: Interpretation
    domain_size: int
    guess: Any = None
    tag: ClassVar[str] = 'sat'


@dataclass(frozen=True)
class ExhaustedBound:
    ''' No circumscribed model up to ``bound``; ``required`` is the unmet completeness bound '''
    bound: int
    required: Optional[int] = None
    tag: ClassVar[str] = 'exhausted'


@dataclass(frozen=True)
class UnsatCertified:
    bound_used: int
    tag: ClassVar[str] = 'unsat-certified'


@dataclass(frozen=True)
class Countermodel:
    witness: Interpretation
    domain_size: int
    tag: ClassVar[str] = 'countermodel'


@dataclass(frozen=True)
class HoldsUpTo:
    bound: int
    required: Optional[int] = None
    tag: ClassVar[str] = 'holds-up-to'


@dataclass(frozen=True)
class HoldsCertified:
    bound_used: int
    tag: ClassVar[str] = 'holds-certified'


def entailment(verdict, names=None):
    """ Map a satisfiability verdict of C and not D to the verdict of C <= D

    Parameters:
        verdict:
            A Satisfiable, ExhaustedBound or UnsatCertified
        names (iterable):
            If given, the countermodel is restricted to these names
    """
    if isinstance(verdict, Satisfiable):
        witness = verdict.witness if names is None else verdict.witness.restrict(names)
        return Countermodel(witness, verdict.domain_size)
    if isinstance(verdict, UnsatCertified):
        return HoldsCertified(verdict.bound_used)
    return HoldsUpTo(verdict.bound, verdict.required)


# ***** Completeness bounds *****

CONCEPT_CIRC_ALCIO = 'concept-circ-ALCIO'
CONCEPT_CIRC_ALCQO = 'concept-circ-ALCQO'
ROLE_MIN_EMPTY_TBOX = 'role-min-empty-tbox'
BOUND_MODES = (CONCEPT_CIRC_ALCIO, CONCEPT_CIRC_ALCQO, ROLE_MIN_EMPTY_TBOX)


def concept_circ_bound(n, m=None):
    ''' 2^(2n) without number restrictions, 2^(2n) * (m + 1) * n with them '''
    if m is None:
        return 2 ** (2 * n)
    return 2 ** (2 * n) * (m + 1) * n


def role_min_bound(depth, m0, size):
    ''' ((m0 + 1) * size)^(depth + 1), size being |A| + |C0| '''
    return ((m0 + 1) * size) ** (depth + 1)


def format_bound(n):
    ''' Decimal for small bounds, scientific notation for the rest '''
    if n < 10 ** 6:
        return str(n)
    exponent = int((n.bit_length() - 1) * math.log10(2))
    while 10 ** (exponent + 1) <= n:
        exponent += 1
    while 10 ** exponent > n:
        exponent -= 1
    mantissa = n * 1000 // 10 ** exponent
    return '{0}.{1:03d}e+{2}'.format(mantissa // 1000, mantissa % 1000, exponent)


def _concept_circumscribed(kb):
    roles = kb.role_names()
    return not (kb.pattern.minimized & roles or kb.pattern.fixed & roles)


def _admissible(kb, c0, mode):
    used = constructors(list(kb.concepts()) + [c0])
    if 'U' in used:
        return False
    if mode == CONCEPT_CIRC_ALCIO:
        return _concept_circumscribed(kb) and 'Q' not in used
    if mode == CONCEPT_CIRC_ALCQO:
        return _concept_circumscribed(kb) and 'I' not in used
    if mode == ROLE_MIN_EMPTY_TBOX:
        return not kb.tbox and not (kb.pattern.fixed & kb.role_names()) and 'I' not in used
    return False


def completeness_bound(kb, c0, mode):
    """ The domain size beyond which no new circumscribed model needs checking

    Parameters:
        kb (CircKB):
            The knowledge base
        c0 (Concept):
            The query concept
        mode (str):
            One of "concept-circ-ALCIO", "concept-circ-ALCQO", "role-min-empty-tbox"

    Returns:
        An integer bound

    Raises:
        PreconditionError: when the mode does not apply to the KB and query
    """
    if mode not in BOUND_MODES:
        raise PreconditionError('unknown bound mode {0!r}'.format(mode))
    if not _admissible(kb, c0, mode):
        raise PreconditionError('bound mode {0} does not apply to this KB'.format(mode))
    if mode == ROLE_MIN_EMPTY_TBOX:
        depth = max([role_depth(c) for c in kb.concepts()] + [role_depth(c0)])
        m0 = max_number(list(kb.concepts()) + [c0])
        return role_min_bound(depth, m0, size_of(kb.abox) + size_of(c0))
    n = size_of(c0) + size_of(kb.tbox) + size_of(kb.abox)
    if mode == CONCEPT_CIRC_ALCIO:
        return concept_circ_bound(n)
    return concept_circ_bound(n, max_number(list(kb.concepts()) + [c0]))


def certification_mode(kb, c0):
    ''' The bound mode that applies to a KB and query, or None '''
    problem = classify_problem(kb)
    if not problem.decidable:
        return None
    if problem.kind == ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX:
        mode = ROLE_MIN_EMPTY_TBOX
    elif 'Q' in constructors(list(kb.concepts()) + [c0]):
        mode = CONCEPT_CIRC_ALCQO
    else:
        mode = CONCEPT_CIRC_ALCIO
    return mode if _admissible(kb, c0, mode) else None


def _certify(kb, c0, cfg):
    ''' Returns (certified, required bound or None) '''
    mode = certification_mode(kb, c0)
    if mode is None:
        log.warning('cannot certify: the problem has no applicable completeness bound')
        return False, None
    bound = completeness_bound(kb, c0, mode)
    if cfg.max_domain >= bound:
        return True, bound
    log.warning('cannot certify: %s needs max_domain >= %s', mode, format_bound(bound))
    return False, bound


# ***** Classical search *****

def _signature(tbox, abox, concepts):
    cnames, rnames, individuals = set(), set(), set(abox.individuals())
    for a in abox.role_assertions:
        rnames.add(a.role)
    items = [c for axiom in tbox for c in axiom.concepts()]
    items += [a.concept for a in abox.concept_assertions] + list(concepts)
    for c in items:
        cnames |= concept_names(c)
        rnames |= role_names(c)
        individuals |= nominals(c)
    return cnames, rnames, individuals


def classical_model_search(tbox, abox, nonempty, d, pinned=None, pinned_names=None):
    """ Find a model over exactly d elements with every ``nonempty`` concept non-empty

    Parameters:
        tbox (sequence):
            The axioms
        abox (Abox):
            The assertions
        nonempty (list):
            Concepts that must have a non-empty extension
        d (int):
            The domain size
        pinned (Interpretation):
            Extensions and individual elements the model must keep
        pinned_names (iterable):
            The predicates of ``pinned`` that are kept; defaults to those with
            a non-empty extension in ``pinned``

    Returns:
        An Interpretation or None
    """
    cnames, rnames, individuals = _signature(tbox, abox, nonempty)
    fixed_individuals = {}
    names = ()
    if pinned is not None:
        if pinned.size != d:
            raise PreconditionError('pinned interpretation has {0} elements, not {1}'
                                    .format(pinned.size, d))
        names = sorted(set(pinned_names) if pinned_names is not None
                       else set(pinned.concepts) | set(pinned.roles))
        cnames |= set(pinned.concepts)
        rnames |= set(pinned.roles)
        cnames |= set(n for n in names if n not in rnames)
        fixed_individuals = pinned.individuals
        individuals |= set(fixed_individuals)
    for indiv in individual_maps(individuals, d, fixed_individuals, canonical=pinned is None):
        g = Grounding(d, indiv, cnames, rnames)
        g.require(g.kb_constraints(tbox, abox) + [g.nonempty(c) for c in nonempty])
        assumptions = []
        if pinned is None:
            g.lex_leader(g.concepts)
        else:
            assumptions = [g.literal(a, v)
                           for a, v in interpretation_values(pinned, g, names).items()]
        values = first_model(g, assumptions)
        if values is not None:
            return g.interpretation(values)
    return None


# ***** Minimality *****

def _split(names, pattern):
    groups = {'F': [], 'M': [], 'V': []}
    for name in sorted(names):
        groups[pattern.kind_of(name)].append(name)
    return groups


def _preference(g, current, minimized, closure):
    """ Grounded constraints for "the model is preferred to the one with ``current`` extensions"

    A minimized p may only grow when some q of higher priority strictly
    shrinks, and some p must strictly shrink while everything above it
    stays equal.
    """
    higher = {}
    for (q, p) in closure:
        higher.setdefault(p, []).append(q)
    below, equal, strict = {}, {}, {}
    for p in minimized:
        atoms = g.predicate_atoms(p)
        below[p] = g.conj([-g.atom(a) for a in atoms if not current[a]])
        equal[p] = g.conj([below[p]] + [g.atom(a) for a in atoms if current[a]])
        strict[p] = g.conj([below[p], neg(equal[p])])
    constraints = [g.disj([below[p]] + [strict[q] for q in higher.get(p, ())])
                   for p in minimized]
    constraints.append(g.disj([g.conj([strict[p]] + [equal[q] for q in higher.get(p, ())])
                               for p in minimized]))
    return constraints


def find_preferred(i, kb):
    """ Returns a model of the KB over i's domain that is preferred to i, or None

    The individual map and the fixed extensions of i are held as solver
    assumptions. With an empty priority relation the minimized atoms that
    are false in i stay false and at least one true one must flip; otherwise
    the preference relation itself is grounded.

    Parameters:
        i (Interpretation):
            A model of the KB
        kb (CircKB):
            The knowledge base

    Returns:
        An Interpretation or None
    """
    pattern = kb.pattern
    cnames = kb.concept_names() | set(i.concepts)
    rnames = kb.role_names() | set(i.roles)
    g = Grounding(i.size, i.individuals, cnames, rnames)
    groups = _split(cnames | rnames, pattern)
    g.require(g.kb_constraints(kb.tbox, kb.abox))
    assumptions = [g.literal(a, v) for a, v in interpretation_values(i, g, groups['F']).items()]
    current = interpretation_values(i, g, groups['M'])
    closure = pattern.closure()
    if not closure:
        shrinkable = [a for a in current if current[a]]
        if not shrinkable:
            return None
        assumptions += [g.literal(a, False) for a in current if not current[a]]
        g.require([g.disj([-g.atom(a) for a in shrinkable])])
    else:
        g.require(_preference(g, current, groups['M'], closure))
    values = first_model(g, assumptions)
    return None if values is None else g.interpretation(values)


def _minimal_below(i, kb):
    ''' Follow preferred models down to one without a preferred model '''
    while True:
        j = find_preferred(i, kb)
        if j is None:
            return i
        i = j


# ***** Circumscribed satisfiability *****

def _blocking_clause(g, values, f_atoms, m_atoms, minimal=None):
    """ A clause excluding the profile of ``values``

    With ``minimal`` given, every profile with the same fixed atoms whose
    minimized atoms strictly contain the true atoms of ``minimal`` is
    excluded as well.
    """
    clause = [g.literal(a, not values[a]) for a in f_atoms]
    if minimal is not None:
        grown = g.disj([g.atom(a) for a in m_atoms if not minimal[a]])
        if grown is not False:
            return clause + [-g.atom(a) for a in m_atoms if minimal[a]] + [neg(grown)]
    return clause + [g.literal(a, not values[a]) for a in m_atoms]


def _phases(g, rng):
    return [g.literal(a, rng.random() < 0.5) for a in sorted(g.all_atoms(), key=atom_key)]


def _circ_model_at(c, kb, d, cfg):
    ''' The first circumscribed model over d elements with c non-empty, or None '''
    pattern = kb.pattern
    cnames = kb.concept_names() | concept_names(c)
    rnames = kb.role_names() | role_names(c)
    individuals = kb.individuals() | nominals(c)
    groups = _split(cnames | rnames, pattern)
    rng = random.Random(cfg.seed) if cfg.seed is not None else None
    empty_prec = not pattern.closure()
    profiles = 0
    for indiv in individual_maps(individuals, d):
        g = Grounding(d, indiv, cnames, rnames)
        f_atoms = [a for n in groups['F'] for a in g.predicate_atoms(n)]
        m_atoms = [a for n in groups['M'] for a in g.predicate_atoms(n)]
        g.require(g.kb_constraints(kb.tbox, kb.abox) + [g.nonempty(c)])
        g.lex_leader(groups['F'] + groups['M'])
        with Search(g, _phases(g, rng) if rng is not None else None) as search:
            values = search.solve()
            while values is not None:
                profiles += 1
                i = g.interpretation(values)
                j = find_preferred(i, kb)
                if j is None:
                    log.debug('domain size %d: circumscribed model after %d profiles', d, profiles)
                    return i
                minimal = None
                if empty_prec:
                    minimal = interpretation_values(_minimal_below(j, kb), g, groups['M'])
                search.block(_blocking_clause(g, values, f_atoms, m_atoms, minimal))
                values = search.solve()
    log.debug('domain size %d: no circumscribed model in %d profiles', d, profiles)
    return None


def _bruteforce_at(c, kb, d):
    from dl_circumscription.oracle import first_circ_model
    return first_circ_model(kb, d, lambda i, ev: bool(ev(c)), extra=[c])


def circ_sat(c, kb, cfg=None):
    """ Decide whether c is satisfiable w.r.t. the circumscribed KB, up to a domain bound

    Parameters:
        c (Concept):
            The query concept
        kb (CircKB):
            The knowledge base; validated on entry
        cfg (SearchConfig):
            Search settings

    Returns:
        Satisfiable, ExhaustedBound or UnsatCertified

    Raises:
        PatternError: when the KB does not validate
    """
    cfg = cfg or SearchConfig()
    kb, _ = validate_kb(kb)
    if cfg.strategy == 'bruteforce':
        search = _bruteforce_at
    else:
        def search(c, kb, d):
            return _circ_model_at(c, kb, d, cfg)
    sizes = range(1, cfg.max_domain + 1)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            found = list(pool.map(lambda d: search(c, kb, d), sizes))
        for d, witness in zip(sizes, found):
            if witness is not None:
                return Satisfiable(witness, d)
    else:
        for d in sizes:
            witness = search(c, kb, d)
            if witness is not None:
                return Satisfiable(witness, d)
    required = None
    if cfg.certify:
        certified, required = _certify(kb, c, cfg)
        if certified:
            return UnsatCertified(cfg.max_domain)
    return ExhaustedBound(cfg.max_domain, required)


def circ_subsumes(c, d, kb, cfg=None):
    ''' Decide c <= d w.r.t. the circumscribed KB through satisfiability of c and not d '''
    verdict = circ_sat(And(c, Not(d)), kb, cfg)
    return entailment(verdict)


def circ_instance(a, c, kb, cfg=None):
    """ Decide whether individual a is an instance of c in every circumscribed model

    A fresh minimized name A is asserted of a, and A and not c is tested for
    satisfiability; the priority relation is left as it is.
    """
    from dl_circumscription.reductions import task_reduce
    reduction = task_reduce(Instance(a, c), kb)
    verdict = circ_sat(reduction.concept, reduction.kb, cfg)
    names = kb.signature() | concept_names(c) | role_names(c) | nominals(c) | {a}
    return entailment(verdict, names)


def decide(query, kb, cfg=None):
    ''' Dispatch a Sat, Subsumes or Instance query '''
    if isinstance(query, Sat):
        return circ_sat(query.concept, kb, cfg)
    if isinstance(query, Subsumes):
        return circ_subsumes(query.lhs, query.rhs, kb, cfg)
    return circ_instance(query.individual, query.concept, kb, cfg)
