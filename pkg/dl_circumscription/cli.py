"""
Command line front end.

Every subcommand prints one JSON document on standard output; log records
and error messages go to standard error. The exit status is 0 whenever a
verdict was computed (an exhausted search included), 1 on usage, file and
syntax errors, and 2 on any other validation error::

    dlcirc sat --kb whale.kb --concept "Whale" --max-domain 4
    dlcirc reduce --kb a.kb --kb b.kb --step simultaneous --concept "C" -o merged.kb
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from dl_circumscription import __version__
from dl_circumscription.config import (STRATEGIES, CountingConfig, GadgetConfig, OracleConfig,
                                       SearchConfig)
from dl_circumscription.counting import cf_bounded_sat, counting_sat, parse_cf
from dl_circumscription.engine import (Countermodel, ExhaustedBound, HoldsCertified, HoldsUpTo,
                                       Satisfiable, UnsatCertified, decide, format_bound)
from dl_circumscription.exceptions import CircumscriptionException, KBSyntaxError
from dl_circumscription.gadgets import (gen_cert3col, gen_frame_consequence_alc,
                                        gen_frame_consequence_univ, gen_tiling_abox_alci,
                                        gen_tiling_tbox, load_succinct_graph, parse_tiling)
from dl_circumscription.metrics import classify_problem
from dl_circumscription.oracle import brute_force_oracle
from dl_circumscription.parser import parse_concept, parse_kb, render_kb
from dl_circumscription.reductions import (abox_to_acyclic_tbox, describe,
                                           eliminate_fixed_concepts,
                                           eliminate_fixed_concepts_empty_tbox,
                                           general_to_acyclic, merge_simultaneous,
                                           min_concepts_to_min_role)
from dl_circumscription.syntax import Instance, Sat, Subsumes


log = logging.getLogger(__name__)

STEPS = ('fixed-concepts', 'fixed-concepts-abox', 'acyclic-tbox', 'simultaneous',
         'abox-to-tbox', 'single-role')
# Alternative names accepted by --step
STEP_ALIASES = {'lemma4': 'fixed-concepts', 'lemma5': 'fixed-concepts-abox',
                'lemma6': 'acyclic-tbox', 'lemma8': 'simultaneous', 'cor16': 'abox-to-tbox',
                'thm25': 'single-role'}
GADGETS = ('tiling', 'tiling-alci', 'cert3col', 'mso-univ', 'mso-alc')


class UsageError(CircumscriptionException):
    pass


class _Parser(argparse.ArgumentParser):
    ''' Reports usage errors as exceptions so that run() can map them to exit status 1 '''

    def error(self, message):
        raise UsageError(message)


# ***** Arguments *****

def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for search details')
    common.add_argument('--timing', action='store_true',
                        help='add the wall-clock duration to the output document')
    common.add_argument('--ceiling', type=int, default=OracleConfig.ceiling,
                        help='enumeration ceiling of the brute-force oracle')
    return common


def _search_flags(parser, max_domain=True):
    if max_domain:
        parser.add_argument('--max-domain', type=int, default=SearchConfig.max_domain)
    parser.add_argument('--certify', action='store_true',
                        help='upgrade exhausted searches when the completeness bound is reached')
    parser.add_argument('--threads', type=int, default=1)
    parser.add_argument('--strategy', choices=STRATEGIES, default=SearchConfig.strategy)
    parser.add_argument('--seed', type=int, default=None)


def build_parser():
    """ The argparse parser of the dlcirc command """
    common = _common()
    parser = _Parser(prog='dlcirc', description='Reasoning with circumscribed DL knowledge bases')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    sat = commands.add_parser('sat', parents=[common], help='circumscribed satisfiability')
    sat.add_argument('--kb', required=True)
    sat.add_argument('--concept', required=True)
    sat.add_argument('--engine', choices=('direct', 'counting'), default='direct')
    sat.add_argument('--budget', type=int, default=None)
    _search_flags(sat)

    subsumes = commands.add_parser('subsumes', parents=[common], help='subsumption')
    subsumes.add_argument('--kb', required=True)
    subsumes.add_argument('--lhs', required=True)
    subsumes.add_argument('--rhs', required=True)
    _search_flags(subsumes)

    instance = commands.add_parser('instance', parents=[common], help='instance checking')
    instance.add_argument('--kb', required=True)
    instance.add_argument('--individual', required=True)
    instance.add_argument('--concept', required=True)
    _search_flags(instance)

    cfsat = commands.add_parser('cfsat', parents=[common], help='counting formula satisfiability')
    cfsat.add_argument('--formula', required=True)
    cfsat.add_argument('--max-domain', type=int, default=CountingConfig.max_domain)

    classify = commands.add_parser('classify', parents=[common], help='complexity class')
    classify.add_argument('--kb', required=True)
    classify.add_argument('--c-bound', type=int, default=None)

    reduce = commands.add_parser('reduce', parents=[common], help='apply a KB transformation')
    reduce.add_argument('--kb', required=True, action='append')
    reduce.add_argument('--kb2', default=None, help='second KB of a simultaneous step')
    reduce.add_argument('--step', required=True, choices=STEPS + tuple(STEP_ALIASES))
    reduce.add_argument('--concept', default=None)
    reduce.add_argument('--individual', default=None)
    reduce.add_argument('-o', '--output', required=True)

    gen = commands.add_parser('gen', parents=[common], help='generate a gadget KB')
    gen.add_argument('gadget', choices=GADGETS)
    gen.add_argument('--tiles', help='tiling problem file')
    gen.add_argument('--n', type=int, default=None)
    gen.add_argument('--circuits', help='directory of circuit netlists')
    gen.add_argument('--cap', type=int, default=GadgetConfig.cert3col_cap)
    gen.add_argument('--eliminate-fixed', action='store_true')
    gen.add_argument('--c', dest='c_concept')
    gen.add_argument('--d', dest='d_concept')
    gen.add_argument('-o', '--output', required=True)

    oracle = commands.add_parser('oracle', parents=[common], help='brute-force reference answer')
    oracle.add_argument('--kb', required=True)
    oracle.add_argument('--task', required=True, choices=('sat', 'subsumes', 'instance'))
    oracle.add_argument('--concept')
    oracle.add_argument('--lhs')
    oracle.add_argument('--rhs')
    oracle.add_argument('--individual')
    oracle.add_argument('--max-domain', type=int, default=2)
    oracle.add_argument('--min-domain', type=int, default=1)
    return parser


# ***** Documents *****

def verdict_document(verdict):
    """ The JSON-ready form of an engine verdict """
    doc = {'verdict': verdict.tag}
    if isinstance(verdict, (Satisfiable, Countermodel)):
        doc['domain_size'] = verdict.domain_size
        doc['witness'] = verdict.witness.to_dict()
        guess = getattr(verdict, 'guess', None)
        if guess is not None:
            doc['guess'] = guess.to_dict()
    elif isinstance(verdict, (ExhaustedBound, HoldsUpTo)):
        doc['bound'] = verdict.bound
        if verdict.required is not None:
            doc['required_bound'] = format_bound(verdict.required)
    elif isinstance(verdict, (UnsatCertified, HoldsCertified)):
        doc['bound'] = verdict.bound_used
    return doc


def _read(path):
    return Path(path).read_text()


def _kb(path, warnings):
    return parse_kb(_read(path), allow_reserved=True, warnings=warnings)


def _concept(text):
    return parse_concept(text, allow_reserved=True)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError('--{0} is required here'.format(name.replace('_', '-')))


def _search_config(args):
    try:
        return SearchConfig(max_domain=args.max_domain, certify=args.certify,
                            strategy=args.strategy, seed=args.seed, threads=args.threads)
    except ValueError as e:
        raise UsageError(str(e))


# ***** Commands *****

def _cmd_sat(args, doc):
    kb = _kb(args.kb, doc['warnings'])
    concept = _concept(args.concept)
    doc['task'] = {'task': 'sat', 'concept': str(concept), 'engine': args.engine,
                   'max_domain': args.max_domain}
    if args.engine == 'counting':
        budget = args.max_domain if args.budget is None else args.budget
        return counting_sat(concept, kb, budget=budget, max_domain=args.max_domain)
    return decide(Sat(concept), kb, _search_config(args))


def _cmd_subsumes(args, doc):
    kb = _kb(args.kb, doc['warnings'])
    query = Subsumes(_concept(args.lhs), _concept(args.rhs))
    doc['task'] = {'task': 'subsumes', 'lhs': str(query.lhs), 'rhs': str(query.rhs),
                   'max_domain': args.max_domain}
    return decide(query, kb, _search_config(args))


def _cmd_instance(args, doc):
    kb = _kb(args.kb, doc['warnings'])
    query = Instance(args.individual, _concept(args.concept))
    doc['task'] = {'task': 'instance', 'individual': query.individual,
                   'concept': str(query.concept), 'max_domain': args.max_domain}
    return decide(query, kb, _search_config(args))


def _cmd_cfsat(args, doc):
    formula = parse_cf(_read(args.formula), allow_reserved=True)
    doc['task'] = {'task': 'cfsat', 'max_domain': args.max_domain}
    return cf_bounded_sat(formula, args.max_domain)


def _cmd_classify(args, doc):
    kb = _kb(args.kb, doc['warnings'])
    problem = classify_problem(kb, args.c_bound)
    doc['task'] = {'task': 'classify', 'c_bound': args.c_bound}
    doc['class'] = str(problem)
    doc['kind'] = problem.kind.value
    doc['complexity'] = problem.complexity
    doc['decidable'] = problem.decidable
    doc['fragment'] = problem.fragment
    if problem.caveat:
        doc['caveat'] = problem.caveat
    return None


def _reduce(args, doc):
    paths = args.kb + ([args.kb2] if args.kb2 else [])
    kbs = [_kb(path, doc['warnings']) for path in paths]
    if args.step != 'simultaneous' and len(kbs) != 1:
        raise UsageError('--step {0} takes exactly one --kb'.format(args.step))
    kb = kbs[0]
    if args.step == 'fixed-concepts':
        result, certificate = eliminate_fixed_concepts(kb)
        return result, None, certificate
    if args.step == 'fixed-concepts-abox':
        _need(args, 'individual', 'concept')
        return eliminate_fixed_concepts_empty_tbox(
            kb, Instance(args.individual, _concept(args.concept)))
    _need(args, 'concept')
    concept = _concept(args.concept)
    if args.step == 'acyclic-tbox':
        return general_to_acyclic(kb, concept)
    if args.step == 'simultaneous':
        return merge_simultaneous(kbs, concept)
    if args.step == 'abox-to-tbox':
        return abox_to_acyclic_tbox(kb, concept)
    return min_concepts_to_min_role(concept, kb)


def _write_kb(path, kb, query, certificate):
    lines = ['# {0}'.format(line) for line in certificate.lines()]
    if query is not None:
        lines.append('# query: {0}'.format(describe(query)))
    Path(path).write_text('\n'.join(lines) + '\n' + render_kb(kb))


def _cmd_reduce(args, doc):
    args.step = STEP_ALIASES.get(args.step, args.step)
    kb, query, certificate = _reduce(args, doc)
    _write_kb(args.output, kb, query, certificate)
    doc['task'] = {'task': 'reduce', 'step': args.step}
    doc['output'] = args.output
    doc['query'] = describe(query)
    doc['certificate'] = certificate.as_dict()
    return None


def _generate(args):
    if args.gadget in ('tiling', 'tiling-alci'):
        _need(args, 'tiles')
        problem = parse_tiling(_read(args.tiles))
        return (gen_tiling_tbox if args.gadget == 'tiling' else gen_tiling_abox_alci)(problem)
    if args.gadget == 'cert3col':
        _need(args, 'circuits')
        graph = load_succinct_graph(args.circuits, args.n)
        return gen_cert3col(graph, cap=args.cap, eliminate_fixed=args.eliminate_fixed)
    _need(args, 'c_concept', 'd_concept')
    c, d = _concept(args.c_concept), _concept(args.d_concept)
    if args.gadget == 'mso-univ':
        return gen_frame_consequence_univ(c, d)
    return gen_frame_consequence_alc(c, d)


def _cmd_gen(args, doc):
    gadget = _generate(args)
    _write_kb(args.output, gadget.kb, gadget.query, gadget.certificate)
    doc['task'] = {'task': 'gen', 'gadget': args.gadget}
    doc['output'] = args.output
    doc['query'] = describe(gadget.query)
    doc['certificate'] = gadget.certificate.as_dict()
    return None


def _cmd_oracle(args, doc):
    kb = _kb(args.kb, doc['warnings'])
    if args.task == 'sat':
        _need(args, 'concept')
        query = Sat(_concept(args.concept))
    elif args.task == 'subsumes':
        _need(args, 'lhs', 'rhs')
        query = Subsumes(_concept(args.lhs), _concept(args.rhs))
    else:
        _need(args, 'individual', 'concept')
        query = Instance(args.individual, _concept(args.concept))
    doc['task'] = {'task': 'oracle', 'query': describe(query), 'max_domain': args.max_domain}
    return brute_force_oracle(query, kb, args.max_domain, args.min_domain,
                              OracleConfig(ceiling=args.ceiling))


COMMANDS = {'sat': _cmd_sat, 'subsumes': _cmd_subsumes, 'instance': _cmd_instance,
            'cfsat': _cmd_cfsat, 'classify': _cmd_classify, 'reduce': _cmd_reduce,
            'gen': _cmd_gen, 'oracle': _cmd_oracle}


def _configure_logging(verbose):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')


def run(argv=None):
    """ Execute one command

    Parameters:
        argv (list):
            The arguments without the program name

    Returns:
        A tuple (exit status, output document or None)
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        log.error('usage error: %s', e)
        return 1, None
    _configure_logging(args.verbose)
    doc = {'warnings': []}
    started = time.perf_counter()
    try:
        verdict = COMMANDS[args.command](args, doc)
    except (UsageError, KBSyntaxError, OSError) as e:
        log.error('%s', e)
        return 1, None
    except CircumscriptionException as e:
        log.error('%s: %s', type(e).__name__, e)
        return 2, None
    if verdict is not None:
        doc.update(verdict_document(verdict))
    if args.timing:
        doc['duration'] = round(time.perf_counter() - started, 6)
    return 0, doc


def main(argv=None):
    status, doc = run(argv)
    if doc is not None:
        print(json.dumps(doc, indent=2, sort_keys=True))
    return status


if __name__ == '__main__':
    sys.exit(main())
