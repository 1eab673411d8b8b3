import pytest

from dl_circumscription.exceptions import KBSyntaxError, PatternError
from dl_circumscription.parser import parse_concept, parse_kb, render_kb
from dl_circumscription.syntax import (BOT, TOP, UNIVERSAL, And, AtLeast, AtMost, ConceptName,
                                       Definition, Exists, Forall, Inclusion, Inverse, Nominal,
                                       Not, Or, RoleAssertion, RoleName)

from .corpus import FRIEND, MOBYDICK, MOTHER, SITUS, STAFF_PRIORITY, WHALE_FIXED, WHALE_VARYING


A, B, C, D = (ConceptName(x) for x in 'ABCD')
r = RoleName('r')


def test_concept_precedence():
    # not binds tighter than and, and tighter than or
    assert parse_concept('A or B and not C') == Or(A, And(B, Not(C)))
    assert parse_concept('A and B or C and D') == Or(And(A, B), And(C, D))
    assert parse_concept('A and B and C') == And(And(A, B), C)
    assert parse_concept('A or B or C') == Or(Or(A, B), C)

    # Test parentheses
    assert parse_concept('not (A or B)') == Not(Or(A, B))
    assert parse_concept('(A or B) and C') == And(Or(A, B), C)


def test_restrictions():
    # A prefix binds one unary operand, like not
    assert parse_concept('some r A and B') == And(Exists(r, A), B)
    assert parse_concept('some r (A and B)') == Exists(r, And(A, B))
    assert parse_concept('all r some r A') == Forall(r, Exists(r, A))
    assert parse_concept('not some r not A') == Not(Exists(r, Not(A)))
    assert parse_concept('atleast 2 inv(r) top') == AtLeast(2, Inverse('r'), TOP)
    assert parse_concept('atmost 0 univ bot') == AtMost(0, UNIVERSAL, BOT)
    assert parse_concept('some r {a}') == Exists(r, Nominal('a'))


def test_names_and_keywords():
    # Keywords only match whole words
    assert parse_concept('Land and sometime') == And(ConceptName('Land'), ConceptName('sometime'))
    assert parse_concept('Ab_Mammal2') == ConceptName('Ab_Mammal2')

    for text in ('and', 'some', 'A and', 'some r', '3A', 'A <= B', '@g/A'):
        with pytest.raises(KBSyntaxError):
            parse_concept(text)

    # Reserved names only when asked for
    assert parse_concept('@g/A and not @g/B_c', allow_reserved=True) == And(
        ConceptName('@g/A'), Not(ConceptName('@g/B_c')))


def test_whale():
    kb = parse_kb(WHALE_VARYING)
    assert kb.tbox == (
        Inclusion(ConceptName('Mammal'), Or(Exists(RoleName('habitat'), ConceptName('Land')),
                                            ConceptName('Ab_Mammal'))),
        Inclusion(ConceptName('Whale'), And(ConceptName('Mammal'),
                                            Not(Exists(RoleName('habitat'),
                                                       ConceptName('Land'))))))
    assert len(kb.abox.concept_assertions) == 1
    assert kb.abox.concept_assertions[0].individual == 'flipper'
    assert kb.pattern.minimized == {'Ab_Mammal'}
    assert kb.pattern.fixed == {'Mammal', 'Whale'}
    assert kb.pattern.varying == {'habitat', 'Land'}
    assert kb.pattern.prec == frozenset()


def test_blocks_merge():
    kb = parse_kb(WHALE_FIXED + MOBYDICK)
    assert kb.individuals() == {'flipper', 'mobydick'}

    kb = parse_kb(STAFF_PRIORITY)
    assert kb.pattern.prec == {('Ab_Staff', 'Ab_User')}
    assert kb.pattern.minimized == {'Ab_User', 'Ab_Staff'}
    assert kb.individuals() == {'ConfidentialFile'}


def test_definitions_and_role_assertions():
    kb = parse_kb('''
        tbox { A == B and some r C; }
        abox { r(a, b); a : A; }
        circ { minimize A; vary B, C, r; }
    ''')
    assert kb.tbox == (Definition('A', And(B, Exists(r, C))),)
    assert kb.abox.role_assertions == (RoleAssertion('r', 'a', 'b'),)
    assert kb.role_names() == {'r'}


def test_undeclared_predicates():
    warnings = []
    kb = parse_kb('tbox { A <= some r B; } circ { minimize A; }', warnings=warnings)
    assert kb.pattern.varying == {'B', 'r'}
    assert warnings == ['B is not declared in the circ block; treated as varying',
                        'r is not declared in the circ block; treated as varying']

    with pytest.raises(PatternError) as e:
        parse_kb('tbox { A <= some r B; } circ { minimize A; }', strict=True)
    assert e.value.predicate == 'B'

    # Test an empty KB
    kb = parse_kb('')
    assert kb.tbox == () and len(kb.abox) == 0


def test_pattern_errors():
    with pytest.raises(PatternError) as e:
        parse_kb('tbox { A <= B; } circ { minimize A; fix A; }')
    assert e.value.predicate == 'A'

    with pytest.raises(PatternError):
        parse_kb('tbox { A <= B; } circ { minimize A, B; prefer A < B; prefer B < A; }')

    with pytest.raises(PatternError):
        parse_kb('tbox { A <= B; } circ { minimize A; prefer A < B; }')

    # The universal role parses as a declared predicate and is then rejected
    for text in ('circ { minimize univ; }', 'tbox { A <= some univ B; } circ { fix univ; }'):
        with pytest.raises(PatternError) as e:
            parse_kb(text)
        assert e.value.predicate == 'univ'


def test_syntax_errors():
    # Test the reported position
    try:
        parse_kb('tbox {\n  A <= B;\n  A <= ;\n}')
        assert False        # An exception should have skipped this statement
    except KBSyntaxError as e:
        assert e.line is not None and e.col is not None
        assert 'line:' in str(e)

    for text in ('tbox { A <= B }', 'abox { a A; }', 'circ { minimize; }', 'rbox { }',
                 'tbox { A <= B; ', 'circ { prefer A B; }', 'abox { a : atleast x r A; }',
                 'abox { a : atleast 99999999999999999999 r A; }'):
        with pytest.raises(KBSyntaxError):
            parse_kb(text)


def test_comments():
    kb = parse_kb('''
        # leading comment
        tbox { A <= B; # trailing comment
        }
    ''')
    assert kb.tbox == (Inclusion(A, B),)


def test_render_round_trip():
    for text in (WHALE_FIXED, WHALE_VARYING + MOTHER, SITUS + FRIEND, STAFF_PRIORITY,
                 'tbox { A == not (B or C) and atmost 1 inv(r) {a}; } abox { r(a, b); }'):
        kb = parse_kb(text)
        assert parse_kb(render_kb(kb)) == kb

    # Reserved names survive when the reader accepts them
    kb = parse_kb('tbox { @g/A <= some @g/u B; }', allow_reserved=True)
    assert parse_kb(render_kb(kb), allow_reserved=True) == kb
