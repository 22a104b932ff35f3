"""Shared helpers for the test suite."""

import numpy as np
import pytest

from isingqre import CompleteGraphGame, GameParams, GumbelNoise, ProbitNoise


def gumbel_game(beta=1.0, J=1.0, H=0.0) -> CompleteGraphGame:
    return CompleteGraphGame(params=GameParams(J=J, beta=beta, H=H),
                             noise=GumbelNoise())


def probit_game(beta=1.0, J=1.0, H=0.0) -> CompleteGraphGame:
    return CompleteGraphGame(params=GameParams(J=J, beta=beta, H=H),
                             noise=ProbitNoise())


def bisect_onset(predicate, lo, hi, iterations=40) -> float:
    """Smallest x in [lo, hi] with predicate(x) true, by bisection.

    predicate must be false at lo and true at hi (monotone transition).
    """
    assert not predicate(lo) and predicate(hi)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
