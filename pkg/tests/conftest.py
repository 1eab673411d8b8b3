# Session-wide knowledge bases parsed once from the texts in corpus.py

import pytest

from dl_circumscription.parser import parse_kb

from .corpus import (FRIEND, MOBYDICK, MOTHER, SITUS, STAFF, STAFF_PRIORITY, WHALE_FIXED,
                     WHALE_FREE, WHALE_VARYING)


@pytest.fixture(scope='session')
def whale_fixed():
    return parse_kb(WHALE_FIXED)


@pytest.fixture(scope='session')
def whale_varying():
    return parse_kb(WHALE_VARYING)


@pytest.fixture(scope='session')
def whale_free():
    return parse_kb(WHALE_FREE)


@pytest.fixture(scope='session')
def whale_mobydick():
    return parse_kb(WHALE_FREE + MOBYDICK)


@pytest.fixture(scope='session')
def whale_mother():
    return parse_kb(WHALE_FREE + MOBYDICK + MOTHER)


@pytest.fixture(scope='session')
def situs():
    return parse_kb(SITUS)


@pytest.fixture(scope='session')
def situs_friend():
    return parse_kb(SITUS + FRIEND)


@pytest.fixture(scope='session')
def staff():
    return parse_kb(STAFF)


@pytest.fixture(scope='session')
def staff_priority():
    return parse_kb(STAFF_PRIORITY)
