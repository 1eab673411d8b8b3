"""
Brute-force reference reasoner.

Every interpretation over domains of the requested sizes is enumerated:
all individual maps and all extension combinations. Circumscribed models are
then picked out by comparing minimized profiles literally, without any of
the search machinery of the engine.
"""

from __future__ import annotations

import itertools
import logging

from dl_circumscription.config import OracleConfig
from dl_circumscription.engine import Countermodel, ExhaustedBound, HoldsUpTo, Satisfiable
from dl_circumscription.exceptions import EnumerationLimitError
from dl_circumscription.semantics import Interpretation, evaluator, is_model, prefers_extensions
from dl_circumscription.syntax import (Sat, Subsumes, concept_names, nominals, query_individuals,
                                       role_names, validate_kb)


log = logging.getLogger(__name__)


def _subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def enumeration_size(d, n_concepts, n_roles, n_individuals):
    return d ** n_individuals * 2 ** (n_concepts * d + n_roles * d * d)


def interpretations(d, concepts, roles, individuals):
    """ Every interpretation over d elements for the given signature

    Parameters:
        d (int):
            The domain size
        concepts, roles, individuals (iterable):
            The signature
    """
    concepts, roles, individuals = sorted(concepts), sorted(roles), sorted(individuals)
    domain = range(d)
    pairs = [(e, f) for e in domain for f in domain]
    choices = [list(_subsets(domain)) for _ in concepts] + [list(_subsets(pairs)) for _ in roles]
    for elements in itertools.product(domain, repeat=len(individuals)):
        indiv = dict(zip(individuals, elements))
        for extensions in itertools.product(*choices):
            yield Interpretation.build(
                d, dict(zip(concepts, extensions[:len(concepts)])),
                dict(zip(roles, extensions[len(concepts):])), indiv)


def _kb_signature(kb, extra=()):
    concepts, roles = set(kb.concept_names()), set(kb.role_names())
    individuals = set(kb.individuals())
    for c in extra:
        concepts |= concept_names(c)
        roles |= role_names(c)
        individuals |= nominals(c)
    return concepts, roles, individuals


def _check_ceiling(d_max, concepts, roles, individuals, ceiling, min_domain=1):
    estimate = sum(enumeration_size(d, len(concepts), len(roles), len(individuals))
                   for d in range(min_domain, d_max + 1))
    if estimate > ceiling:
        raise EnumerationLimitError(
            'enumeration of {0} interpretations exceeds the ceiling of {1}'.format(
                estimate, ceiling), estimate, ceiling)


def _profile_key(i, pattern, names):
    ''' The (individual map, fixed extensions) group an interpretation belongs to '''
    fixed = tuple((p, i.extension(p)) for p in sorted(names) if pattern.kind_of(p) == 'F')
    return (tuple(sorted(i.individuals.items())), fixed)


def circ_models(kb, d, extra=(), individuals=()):
    """ All circumscribed models of the KB over d elements, in enumeration order

    Models are grouped by individual map and fixed extensions; within a group
    a model is circumscribed when no other model's minimized profile is
    preferred to its own.

    Parameters:
        kb (CircKB):
            The knowledge base
        d (int):
            The domain size
        extra (iterable):
            Concepts whose names join the enumerated signature
        individuals (iterable):
            Individuals mapped in addition to those of the KB and extra
    """
    concepts, roles, named = _kb_signature(kb, extra)
    individuals = named | set(individuals)
    pattern = kb.pattern
    names = concepts | roles
    minimized = sorted(p for p in names if pattern.kind_of(p) == 'M')
    closure = pattern.closure()
    models = [i for i in interpretations(d, concepts, roles, individuals)
              if is_model(i, kb.tbox, kb.abox)]
    groups = {}
    for i in models:
        profile = tuple(i.extension(p) for p in minimized)
        groups.setdefault(_profile_key(i, pattern, names), set()).add(profile)
    minimal = {}
    for key, profiles in groups.items():
        for profile in profiles:
            ext = dict(zip(minimized, profile))
            minimal[(key, profile)] = not any(
                prefers_extensions(dict(zip(minimized, other)), ext, minimized, closure)
                for other in profiles if other != profile)
    for i in models:
        profile = tuple(i.extension(p) for p in minimized)
        if minimal[(_profile_key(i, pattern, names), profile)]:
            yield i


def first_circ_model(kb, d, condition, extra=(), individuals=()):
    ''' The first circumscribed model over d elements satisfying condition(i, evaluator) '''
    for i in circ_models(kb, d, extra, individuals):
        if condition(i, evaluator(i)):
            return i
    return None


def _condition(query):
    if isinstance(query, Sat):
        return lambda i, ev: bool(ev(query.concept))
    if isinstance(query, Subsumes):
        return lambda i, ev: bool(ev(query.lhs) - ev(query.rhs))
    return lambda i, ev: i.individuals[query.individual] not in ev(query.concept)


def brute_force_oracle(query, kb, d_max, min_domain=1, cfg=None):
    """ Decide a query by enumerating every interpretation up to d_max elements

    Parameters:
        query (Sat | Subsumes | Instance):
            The reasoning task
        kb (CircKB):
            The knowledge base
        d_max (int):
            Largest domain size enumerated
        min_domain (int):
            Smallest domain size enumerated
        cfg (OracleConfig):
            Holds the enumeration ceiling

    Returns:
        Satisfiable or ExhaustedBound for Sat, Countermodel or HoldsUpTo otherwise

    Raises:
        EnumerationLimitError: when the number of interpretations exceeds the ceiling
    """
    cfg = cfg or OracleConfig()
    kb, _ = validate_kb(kb)
    extra = list(query.concepts())
    concepts, roles, individuals = _kb_signature(kb, extra)
    individuals |= query_individuals(query)
    _check_ceiling(d_max, concepts, roles, individuals, cfg.ceiling, min_domain)
    condition = _condition(query)
    for d in range(min_domain, d_max + 1):
        witness = first_circ_model(kb, d, condition, extra, individuals)
        if witness is not None:
            log.debug('oracle: witness at domain size %d', d)
            if isinstance(query, Sat):
                return Satisfiable(witness, d)
            return Countermodel(witness, d)
    if isinstance(query, Sat):
        return ExhaustedBound(d_max)
    return HoldsUpTo(d_max)


def brute_force_simultaneous(kbs, c0, d_max, cfg=None):
    """ Decide whether c0 is non-empty in an interpretation that is a circumscribed
    model of every KB at once

    Each KB's circumscribed models are computed over its own signature, and
    a joint interpretation qualifies when each of its restrictions is one of
    them.
    """
    cfg = cfg or OracleConfig()
    kbs = [validate_kb(kb)[0] for kb in kbs]
    concepts, roles, individuals = set(), set(), set()
    for kb in kbs:
        sig = _kb_signature(kb)
        concepts |= sig[0]
        roles |= sig[1]
        individuals |= sig[2]
    concepts |= concept_names(c0)
    roles |= role_names(c0)
    individuals |= nominals(c0)
    _check_ceiling(d_max, concepts, roles, individuals, cfg.ceiling)
    for d in range(1, d_max + 1):
        accepted = []
        for kb in kbs:
            kc, kr, _ = _kb_signature(kb)
            keys = set()
            for i in circ_models(kb, d, individuals=individuals):
                keys.add(_projection(i, kc | kr))
            accepted.append((kc | kr, keys))
        for i in interpretations(d, concepts, roles, individuals):
            if not evaluator(i)(c0):
                continue
            if all(_projection(i, names) in keys for names, keys in accepted):
                return Satisfiable(i, d)
    return ExhaustedBound(d_max)


def _projection(i, names):
    return (tuple(sorted(i.individuals.items())),
            tuple((p, i.extension(p)) for p in sorted(names)))
