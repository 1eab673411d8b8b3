"""
Textual format of circumscribed knowledge bases.

A KB file is a sequence of ``tbox``, ``abox`` and ``circ`` blocks::

    # the whale example
    tbox {
        Mammal <= some habitat Land or Ab_Mammal;
        Whale <= Mammal and not (some habitat Land);
    }
    abox {
        flipper : Mammal and not Whale;
    }
    circ {
        minimize Ab_Mammal;
        fix Mammal, Whale;
        vary habitat, Land;
    }

Concepts use ``not``, ``and``, ``or`` with precedence not > and > or, the
prefixes ``some r``, ``all r``, ``atleast n r`` and ``atmost n r`` (binding
one unary operand, like ``not``), nominals ``{a}``, ``top`` and ``bot``. Roles
are names, ``inv(r)`` or ``univ``.
"""

from __future__ import annotations

import logging

import pyparsing as pp
from pyparsing import ParseBaseException

from dl_circumscription.exceptions import KBSyntaxError
from dl_circumscription.syntax import (BOT, TOP, Abox, And, AtLeast, AtMost, CircKB, CircPattern,
                                       Concept, ConceptAssertion, ConceptName, Definition, Exists,
                                       Forall, Inclusion, Inverse, Nominal, Not, Or, RoleAssertion,
                                       RoleName, UNIVERSAL, validate_kb)


log = logging.getLogger(__name__)

# nested prefixes re-parse under infix_notation's lookahead without memoization
pp.ParserElement.enable_packrat(cache_size_limit=4096)

KEYWORDS = ('tbox', 'abox', 'circ', 'not', 'and', 'or', 'some', 'all', 'atleast', 'atmost',
            'top', 'bot', 'inv', 'univ', 'minimize', 'fix', 'vary', 'prefer')

MAX_NUMBER = 2 ** 63 - 1

LPAR = pp.Suppress('(')
RPAR = pp.Suppress(')')
LBRACE = pp.Suppress('{')
RBRACE = pp.Suppress('}')
SEMI = pp.Suppress(';')


def _number(s, loc, tokens):
    value = int(tokens[0])
    if value > MAX_NUMBER:
        raise pp.ParseFatalException(s, loc, 'number restriction {0} is out of range'
                                     .format(value))
    return value


def _unary(tokens):
    ''' Build a negation or a role restriction from a prefix group '''
    data = tokens[0]
    op = data[0]
    if op == 'not':
        return Not(data[1])
    if op == 'some':
        return Exists(data[1], data[2])
    if op == 'all':
        return Forall(data[1], data[2])
    if op == 'atleast':
        return AtLeast(data[1], data[2], data[3])
    return AtMost(data[1], data[2], data[3])


def _fold(cls):
    ''' Left-fold a flat operator group into binary nodes '''
    def action(tokens):
        operands = [t for t in tokens[0] if isinstance(t, Concept)]
        result = operands[0]
        for operand in operands[1:]:
            result = cls(result, operand)
        return result
    return action


class Grammar(object):
    """ The pyparsing elements of the KB language

    Two instances exist, one accepting the reserved ``@g/`` names that
    reductions generate and one rejecting them.

    Parameters:
        allow_reserved (bool):
            Accept ``@g/`` prefixed names
    """

    def __init__(self, allow_reserved=False):
        reserved_word = pp.MatchFirst([pp.Keyword(k) for k in KEYWORDS])
        identifier = pp.Combine(~reserved_word + pp.Word(pp.alphas + '_', pp.alphanums + '_'))
        if allow_reserved:
            identifier = pp.Regex(r"@g/[A-Za-z0-9_']+") | identifier
        self.name = identifier.set_name('name')
        integer = pp.Word(pp.nums).set_parse_action(_number).set_name('integer')

        role = ((pp.Keyword('inv') + LPAR + self.name + RPAR).set_parse_action(
                    lambda t: Inverse(t[1]))
                | pp.Keyword('univ').set_parse_action(lambda t: UNIVERSAL)
                | self.name.copy().set_parse_action(lambda t: RoleName(t[0])))
        self.role = role.set_name('role')

        operand = (pp.Keyword('top').set_parse_action(lambda t: TOP)
                   | pp.Keyword('bot').set_parse_action(lambda t: BOT)
                   | (LBRACE + self.name + RBRACE).set_parse_action(lambda t: Nominal(t[0]))
                   | self.name.copy().set_parse_action(lambda t: ConceptName(t[0])))

        prefix = (pp.Keyword('not')
                  | (pp.Keyword('some') | pp.Keyword('all')) + self.role
                  | (pp.Keyword('atleast') | pp.Keyword('atmost')) + integer + self.role)

        # precedence: not and the quantifier prefixes > and > or
        self.concept = pp.infix_notation(operand, [
            (prefix, 1, pp.OpAssoc.RIGHT, _unary),
            (pp.Keyword('and'), 2, pp.OpAssoc.LEFT, _fold(And)),
            (pp.Keyword('or'), 2, pp.OpAssoc.LEFT, _fold(Or)),
        ]).set_name('concept')

        definition = (self.name + pp.Suppress('==') + self.concept).set_parse_action(
            lambda t: Definition(t[0], t[1]))
        inclusion = (self.concept + pp.Suppress('<=') + self.concept).set_parse_action(
            lambda t: Inclusion(t[0], t[1]))
        axiom = definition | inclusion

        role_assertion = (self.name + LPAR + self.name + pp.Suppress(',') + self.name
                          + RPAR).set_parse_action(lambda t: RoleAssertion(t[0], t[1], t[2]))
        concept_assertion = (self.name + pp.Suppress(':') + self.concept).set_parse_action(
            lambda t: ConceptAssertion(t[0], t[1]))
        assertion = role_assertion | concept_assertion

        # univ is accepted here and rejected by validate_kb
        predicate = self.name | pp.Keyword('univ')
        names = pp.Group(pp.delimited_list(predicate))
        cdecl = (pp.Group((pp.Keyword('minimize') | pp.Keyword('fix') | pp.Keyword('vary'))
                          + names)
                 | pp.Group(pp.Keyword('prefer') + pp.Group(predicate + pp.Suppress('<')
                                                            + predicate)))

        def block(keyword, item):
            body = pp.Group(pp.ZeroOrMore(item + SEMI))
            return pp.Group(pp.Keyword(keyword) + LBRACE + body + RBRACE)

        self.kb = pp.ZeroOrMore(block('tbox', axiom) | block('abox', assertion)
                                | block('circ', cdecl)) + pp.StringEnd()
        self.kb.ignore(pp.python_style_comment)
        self.concept.ignore(pp.python_style_comment)


GRAMMARS = {False: Grammar(False), True: Grammar(True)}


def _syntax_error(e):
    return KBSyntaxError('Parsing syntax error ({0}) at line:{1}, col:{2}: {3}'.format(
        e.mark_input_line(), e.lineno, e.col, e.msg), e.lineno, e.col)


def parse_string(element, text):
    ''' Parse the whole text with a pyparsing element, raising KBSyntaxError '''
    try:
        return element.parse_string(text, parse_all=True)
    except ParseBaseException as e:
        raise _syntax_error(e)


def parse_concept(text, allow_reserved=False):
    """ Parses a single concept expression

    Parameters:
        text (str):
            The concept, e.g. "Mammal and not some habitat Land"
        allow_reserved (bool):
            Accept reserved @g/ names

    Returns:
        A Concept
    """
    return parse_string(GRAMMARS[allow_reserved].concept, text)[0]


def parse_kb(text, strict=False, allow_reserved=False, warnings=None):
    """ Parses a KB text into a validated CircKB

    Predicates not declared in the circ block are assigned to V with a
    warning, unless ``strict`` is set.

    Parameters:
        text (str):
            The KB text
        strict (bool):
            Reject undeclared predicates
        allow_reserved (bool):
            Accept reserved @g/ names (reduction outputs)
        warnings (list):
            If given, the warning messages are appended to it

    Returns:
        A CircKB

    Raises:
        KBSyntaxError: when the text does not conform to the grammar
        PatternError: on a circumscription pattern violation
    """
    blocks = parse_string(GRAMMARS[allow_reserved].kb, text)
    tbox, concept_assertions, role_assertions = [], [], []
    minimized, fixed, varying, prec = set(), set(), set(), set()
    for kind, body in blocks:
        if kind == 'tbox':
            tbox.extend(body)
        elif kind == 'abox':
            for assertion in body:
                if isinstance(assertion, RoleAssertion):
                    role_assertions.append(assertion)
                else:
                    concept_assertions.append(assertion)
        else:
            for decl in body:
                if decl[0] == 'prefer':
                    prec.add((decl[1][0], decl[1][1]))
                else:
                    {'minimize': minimized, 'fix': fixed, 'vary': varying}[decl[0]].update(decl[1])
    kb = CircKB(tuple(tbox), Abox(tuple(concept_assertions), tuple(role_assertions)),
                CircPattern(frozenset(prec), frozenset(minimized), frozenset(fixed),
                            frozenset(varying)))
    kb, messages = validate_kb(kb, strict=strict)
    for message in messages:
        log.warning(message)
    if warnings is not None:
        warnings.extend(messages)
    return kb


def _decl(keyword, names):
    return '  {0} {1};'.format(keyword, ', '.join(sorted(names)))


def render_kb(kb):
    ''' Render a CircKB in the textual format; parse_kb reads it back to an equal KB '''
    lines = ['tbox {']
    lines.extend('  {0};'.format(axiom) for axiom in kb.tbox)
    lines.append('}')
    lines.append('abox {')
    lines.extend('  {0};'.format(a) for a in kb.abox.concept_assertions)
    lines.extend('  {0};'.format(a) for a in kb.abox.role_assertions)
    lines.append('}')
    lines.append('circ {')
    pattern = kb.pattern
    for keyword, names in (('minimize', pattern.minimized), ('fix', pattern.fixed),
                           ('vary', pattern.varying)):
        if names:
            lines.append(_decl(keyword, names))
    lines.extend('  prefer {0} < {1};'.format(q, p) for (q, p) in sorted(pattern.prec))
    lines.append('}')
    return '\n'.join(lines) + '\n'
