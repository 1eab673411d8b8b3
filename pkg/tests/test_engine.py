import pytest

from dl_circumscription.config import SearchConfig
from dl_circumscription.engine import (Countermodel, ExhaustedBound, HoldsCertified, HoldsUpTo,
                                       Satisfiable, UnsatCertified, certification_mode,
                                       circ_instance, circ_sat, circ_subsumes,
                                       classical_model_search, completeness_bound,
                                       concept_circ_bound, decide, entailment, find_preferred,
                                       format_bound, role_min_bound)
from dl_circumscription.exceptions import EnumerationLimitError, PatternError, PreconditionError
from dl_circumscription.oracle import brute_force_oracle
from dl_circumscription.parser import parse_concept, parse_kb
from dl_circumscription.semantics import Interpretation, is_circ_model, is_model
from dl_circumscription.syntax import (BOT, CircKB, CircPattern, Inclusion, Instance, Sat,
                                       Subsumes)


def concept(text):
    return parse_concept(text)


# ***** Worked examples *****

def test_whale_fixed_habitat(whale_fixed):
    # With habitat and Land fixed, flipper's habitat is left open either way
    cfg = SearchConfig(max_domain=3)
    for text in ('some habitat Land', 'not some habitat Land'):
        verdict = circ_instance('flipper', concept(text), whale_fixed, cfg)
        assert isinstance(verdict, Countermodel)
        assert verdict.tag == 'countermodel'
        assert verdict.domain_size <= 3
        assert is_model(verdict.witness, whale_fixed.tbox, whale_fixed.abox)


def test_whale_varying_habitat(whale_varying):
    cfg = SearchConfig(max_domain=4)
    for lhs, rhs in (('Whale', 'Ab_Mammal'),
                     ('Ab_Mammal', 'Mammal and not some habitat Land'),
                     ('Mammal and not some habitat Land', 'Ab_Mammal'),
                     ('Ab_Mammal', 'Whale')):
        verdict = circ_subsumes(concept(lhs), concept(rhs), whale_varying, cfg)
        assert verdict == HoldsUpTo(4)
        assert verdict.tag == 'holds-up-to'

    verdict = circ_instance('flipper', concept('some habitat Land'), whale_varying, cfg)
    assert verdict == HoldsUpTo(4)


def test_whale_varying_oracle(whale_varying):
    for query in (Subsumes(concept('Whale'), concept('Ab_Mammal')),
                  Subsumes(concept('Ab_Mammal'), concept('Whale')),
                  Instance('flipper', concept('some habitat Land'))):
        assert brute_force_oracle(query, whale_varying, 2) == HoldsUpTo(2)

    # Three elements are out of reach for enumeration: 3 * 2 ** 21 interpretations
    with pytest.raises(EnumerationLimitError) as e:
        brute_force_oracle(Subsumes(concept('Whale'), concept('Ab_Mammal')), whale_varying, 3)
    assert e.value.estimate > e.value.ceiling


def test_whale_free(whale_free, whale_mobydick):
    verdict = circ_sat(concept('Whale'), whale_free, SearchConfig(max_domain=4))
    assert verdict == ExhaustedBound(4)
    assert verdict.tag == 'exhausted'

    verdict = circ_sat(concept('Whale'), whale_mobydick, SearchConfig(max_domain=4))
    assert isinstance(verdict, Satisfiable)
    assert verdict.tag == 'sat'
    assert verdict.domain_size == 2
    witness = verdict.witness
    assert witness.extension('Whale') == {witness.individuals['mobydick']}
    assert witness.extension('Ab_Mammal') == {witness.individuals['mobydick']}
    assert is_circ_model(witness, whale_mobydick)


def test_whale_mother(whale_mother):
    # mobydick's mother is a female whale nobody names
    verdict = circ_sat(concept('Whale'), whale_mother, SearchConfig(max_domain=4))
    assert isinstance(verdict, Satisfiable)
    assert verdict.domain_size == 3
    whales = verdict.witness.extension('Whale')
    assert len(whales) == 2
    assert len(whales - set(verdict.witness.individuals.values())) == 1


def test_situs_inversus(situs, situs_friend):
    verdict = circ_subsumes(concept('Human and not Situs_Inversus'),
                            concept('some has_heart some has_position {Left}'), situs,
                            SearchConfig(max_domain=4))
    assert verdict == HoldsUpTo(4)

    verdict = circ_sat(concept('Situs_Inversus and Human'), situs_friend,
                       SearchConfig(max_domain=4))
    assert isinstance(verdict, Satisfiable)
    assert len(verdict.witness.extension('Ab_Human')) == 1


def test_staff_priorities(staff, staff_priority):
    query = Subsumes(concept('Staff and not BlacklistedStaff'),
                     concept('some has_AccessTo {ConfidentialFile}'))

    # Ab_Staff above Ab_User: staff members take the access and the user abnormality
    assert brute_force_oracle(query, staff_priority, 2) == HoldsUpTo(2)
    assert decide(query, staff_priority, SearchConfig(max_domain=3)) == HoldsUpTo(3)

    # Without priorities both options are minimal
    verdict = brute_force_oracle(query, staff, 2)
    assert isinstance(verdict, Countermodel) and verdict.domain_size == 1
    verdict = decide(query, staff, SearchConfig(max_domain=3))
    assert isinstance(verdict, Countermodel) and verdict.domain_size == 1


# ***** Building blocks *****

def test_classical_model_search(whale_varying):
    kb = whale_varying
    assert classical_model_search(kb.tbox, kb.abox, [concept('Whale')], 1) is None
    i = classical_model_search(kb.tbox, kb.abox, [concept('Whale')], 2)
    assert is_model(i, kb.tbox, kb.abox)
    assert i.extension('Whale')

    # Pinned extensions are kept
    pinned = Interpretation.build(2, {'Mammal': {0, 1}}, {}, {'flipper': 1})
    j = classical_model_search(kb.tbox, kb.abox, [], 2, pinned, ['Mammal', 'Whale'])
    assert j.extension('Mammal') == {0, 1}
    assert j.extension('Whale') == frozenset()
    assert j.individuals['flipper'] == 1

    with pytest.raises(PreconditionError):
        classical_model_search(kb.tbox, kb.abox, [], 3, pinned)


def test_find_preferred(whale_varying):
    abnormal = Interpretation.build(2, {'Mammal': {0}, 'Ab_Mammal': {0}}, {}, {'flipper': 0})
    j = find_preferred(abnormal, whale_varying)
    assert j is not None
    assert is_model(j, whale_varying.tbox, whale_varying.abox)
    assert j.extension('Ab_Mammal') == frozenset()
    assert j.extension('Mammal') == {0}
    assert j.individuals == abnormal.individuals
    assert find_preferred(j, whale_varying) is None


def test_find_preferred_with_priorities(staff_priority):
    # the staff member avoids Ab_Staff by taking Ab_User
    i = Interpretation.build(1, {'User': {0}, 'Staff': {0}, 'Ab_Staff': {0}}, {},
                             {'ConfidentialFile': 0})
    assert is_model(i, staff_priority.tbox, staff_priority.abox)
    j = find_preferred(i, staff_priority)
    assert j.extension('Ab_Staff') == frozenset()
    assert j.extension('Ab_User') == {0}
    assert find_preferred(j, staff_priority) is None


def test_bounds():
    assert concept_circ_bound(1) == 4
    assert concept_circ_bound(2, 1) == 16 * 2 * 2
    assert role_min_bound(1, 0, 4) == 16

    assert completeness_bound(CircKB(), BOT, 'concept-circ-ALCIO') == 4
    assert completeness_bound(CircKB(), concept('atmost 1 r A'), 'concept-circ-ALCQO') == 2048
    kb = parse_kb('abox { a : some r A; } circ { minimize r; }')
    assert completeness_bound(kb, concept('A'), 'role-min-empty-tbox') == 16

    # Bound modes outside their problem class
    with pytest.raises(PreconditionError):
        completeness_bound(CircKB(), concept('atmost 1 r A'), 'concept-circ-ALCIO')
    with pytest.raises(PreconditionError):
        completeness_bound(CircKB(), concept('some univ A'), 'concept-circ-ALCIO')
    with pytest.raises(PreconditionError):
        completeness_bound(kb, concept('A'), 'concept-circ-ALCIO')
    with pytest.raises(PreconditionError):
        completeness_bound(CircKB(), BOT, 'no-such-mode')

    assert certification_mode(CircKB(), BOT) == 'concept-circ-ALCIO'
    assert certification_mode(kb, concept('A')) == 'role-min-empty-tbox'
    assert certification_mode(parse_kb('tbox { A <= some r A; } circ { minimize r; }'),
                              concept('A')) is None


def test_format_bound():
    assert format_bound(4) == '4'
    assert format_bound(999999) == '999999'
    assert format_bound(10 ** 6) == '1.000e+6'
    assert format_bound(2 ** 40) == '1.099e+12'


def test_certification():
    cfg = SearchConfig(max_domain=4, certify=True)
    assert circ_sat(BOT, CircKB(), cfg) == UnsatCertified(4)

    # Too small a domain bound for the certificate
    cfg = SearchConfig(max_domain=3, certify=True)
    assert circ_sat(BOT, CircKB(), cfg) == ExhaustedBound(3, 4)
    verdict = circ_subsumes(concept('A'), concept('A'), CircKB(), cfg)
    assert verdict == HoldsUpTo(3, 256)

    # No certificate for undecidable classes
    kb = parse_kb('tbox { A <= some r A; } circ { minimize r; }')
    assert circ_sat(concept('A and not A'), kb, SearchConfig(max_domain=2, certify=True)) \
        == ExhaustedBound(2)


def test_entailment():
    i = Interpretation.build(1, {'A': {0}, 'X': {0}})
    assert entailment(Satisfiable(i, 1)) == Countermodel(i, 1)
    assert entailment(Satisfiable(i, 1), ['A']).witness.concepts == {'A': frozenset([0])}
    assert entailment(ExhaustedBound(3, 8)) == HoldsUpTo(3, 8)
    assert entailment(UnsatCertified(5)) == HoldsCertified(5)


def test_instance_countermodel_restricted(whale_fixed):
    verdict = circ_instance('flipper', concept('some habitat Land'), whale_fixed)
    # the fresh marker of the instance reduction stays internal
    assert all(not name.startswith('@g/') for name in verdict.witness.concepts)


def test_strategies_agree(whale_mobydick):
    query = concept('Whale')
    results = [circ_sat(query, whale_mobydick, cfg) for cfg in (
        SearchConfig(max_domain=2),
        SearchConfig(max_domain=2, strategy='bruteforce'),
        SearchConfig(max_domain=3, threads=3),
        SearchConfig(max_domain=2, seed=11))]
    assert [r.tag for r in results] == ['sat'] * 4
    assert [r.domain_size for r in results] == [2] * 4


def test_invalid_inputs():
    with pytest.raises(ValueError):
        SearchConfig(max_domain=0)
    with pytest.raises(ValueError):
        SearchConfig(strategy='random')
    with pytest.raises(ValueError):
        SearchConfig(threads=0)

    kb = CircKB((Inclusion(concept('A'), concept('B')),),
                pattern=CircPattern(minimized=frozenset(['A']), fixed=frozenset(['A'])))
    with pytest.raises(PatternError):
        circ_sat(concept('A'), kb)
    with pytest.raises(PatternError):
        decide(Sat(concept('A')), kb)
