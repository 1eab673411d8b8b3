"""
Default settings for the search engines and generators.

Every value here can be overridden per call, and the command line exposes each
of them as a flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


STRATEGIES = ('backtracking', 'bruteforce')


@dataclass(frozen=True)
class SearchConfig:
    ''' Settings of a bounded circumscribed search

    Parameters:
        max_domain (int):
            Largest domain size tried; sizes 1..max_domain are searched in order
        certify (bool):
            Upgrade an exhausted search to a certified one when max_domain reaches
            the completeness bound of the problem class
        strategy (str):
            "backtracking" (grounded search) or "bruteforce" (full enumeration)
        seed (int):
            Reserved for randomized atom orders; None keeps the lexicographic order
        threads (int):
            Number of domain sizes searched concurrently
    '''
    max_domain: int = 3
    certify: bool = False
    strategy: str = 'backtracking'
    seed: Optional[int] = None
    threads: int = 1

    def __post_init__(self):
        if self.max_domain < 1:
            raise ValueError('max_domain must be at least 1, got {0}'.format(self.max_domain))
        if self.strategy not in STRATEGIES:
            raise ValueError('unknown strategy {0!r}'.format(self.strategy))
        if self.threads < 1:
            raise ValueError('threads must be at least 1')


@dataclass(frozen=True)
class OracleConfig:
    ceiling: int = 2 ** 17


@dataclass(frozen=True)
class CountingConfig:
    budget: int = 3
    max_domain: int = 3
    guess_ceiling: int = 200000


@dataclass(frozen=True)
class GadgetConfig:
    cert3col_cap: int = 2
