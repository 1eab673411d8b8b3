# encoding: utf-8

"""
dl-circumscription
==================
Bounded reasoning with circumscribed description-logic knowledge bases::

    from dl_circumscription.parser import parse_concept, parse_kb
    from dl_circumscription.engine import circ_sat

    kb = parse_kb(open('whale.kb').read())
    verdict = circ_sat(parse_concept('Whale'), kb)
    print(verdict.tag)

Besides the engines the package holds answer-preserving KB transformations
(``reductions``), generators for encoding KBs (``gadgets``) and the ``dlcirc``
command (``cli``).
"""

__version__ = '0.1.0dev'
