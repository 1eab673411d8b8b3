import pytest

from dl_circumscription.config import SearchConfig
from dl_circumscription.engine import decide
from dl_circumscription.oracle import brute_force_oracle
from dl_circumscription.syntax import Instance, Sat, Subsumes

from .corpus import CONCEPTS, ROLES, query_domain, random_concept, random_kb, seeded


FEATURES = ('', 'I', 'O', 'Q', 'IO', 'U')


def random_query(rng, kind, features):
    def sub():
        return random_concept(rng, CONCEPTS[:2], ROLES[:1], 2, ('a',), features)

    if kind == 0:
        return Sat(sub())
    if kind == 1:
        return Subsumes(sub(), sub())
    return Instance('a', sub())


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(240))
def test_engine_agrees_with_oracle(seed):
    rng = seeded(7000 + seed)
    features = FEATURES[seed % len(FEATURES)]
    role_kinds = 'MFV' if seed % 4 == 0 else 'V'
    kb = random_kb(rng, n_concepts=2, n_roles=1, n_individuals=1, features=features,
                   role_kinds=role_kinds)
    query = random_query(rng, seed % 3, features)
    d = query_domain(kb, query)
    expected = brute_force_oracle(query, kb, d)
    actual = decide(query, kb, SearchConfig(max_domain=d))
    assert actual.tag == expected.tag
    if hasattr(expected, 'domain_size'):
        assert actual.domain_size == expected.domain_size
    else:
        assert actual.bound == expected.bound


def test_small_corpus_agrees():
    # A quick sample of the slow corpus
    rng = seeded(17)
    for k in range(12):
        kb = random_kb(rng, n_concepts=2, n_roles=1, n_individuals=1, n_axioms=1)
        query = random_query(rng, k % 3, '')
        d = min(query_domain(kb, query), 2)
        expected = brute_force_oracle(query, kb, d)
        actual = decide(query, kb, SearchConfig(max_domain=d))
        assert actual.tag == expected.tag
