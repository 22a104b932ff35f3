"""Equilibria of the noisy binary-choice game on complete and random graphs.

Solves for maximum-likelihood mean choices at given expectations and for
self-consistent (quantal-response) expectations, on the complete graph and on
annealed configuration-model random graphs, with exact small-system
enumeration and seeded Monte Carlo verification alongside the solvers.
"""

from .complete import (
    CompleteGraphGame,
    EquilibriumRoot,
    LikelihoodProfile,
    MeanChoiceDistribution,
    bernoulli_entropy,
)
from .core import GameParams, choice_probability, half_log_odds, mean_choice
from .montecarlo import IterationTrace, SampleReport, iterate_to_qre, sample_mean_choice
from .noise import GumbelNoise, NoiseModel, ProbitNoise, TabulatedNoise
from .oracle import (
    MAX_ENUM_AGENTS,
    ClassEnumerationResult,
    ClassLaw,
    EnumerationResult,
    binomial_mode,
    enumerate_complete,
    enumerate_random_small,
)
from .randomgraph import (
    DegreeClassEquilibrium,
    DegreeClassResponse,
    DegreeDistribution,
    RandomGraphGame,
)

__all__ = [
    "GameParams",
    "NoiseModel",
    "GumbelNoise",
    "ProbitNoise",
    "TabulatedNoise",
    "choice_probability",
    "mean_choice",
    "half_log_odds",
    "bernoulli_entropy",
    "CompleteGraphGame",
    "MeanChoiceDistribution",
    "LikelihoodProfile",
    "EquilibriumRoot",
    "DegreeDistribution",
    "RandomGraphGame",
    "DegreeClassEquilibrium",
    "DegreeClassResponse",
    "MAX_ENUM_AGENTS",
    "EnumerationResult",
    "ClassLaw",
    "ClassEnumerationResult",
    "enumerate_complete",
    "enumerate_random_small",
    "binomial_mode",
    "SampleReport",
    "IterationTrace",
    "sample_mean_choice",
    "iterate_to_qre",
]

__version__ = "0.1.0"
