"""Degree-resolved equilibria on annealed configuration-model random graphs.

Heterogeneity enters only through the vertex degree: replacing the adjacency
matrix by its ensemble expectation, an agent of degree k feels the local
field H + J*k*m_w with the edge-weighted aggregate expectation

    m_w = sum_k (k pi_k / E[k]) m_k.

Each degree class responds with m_k = tanh(g(2*beta*(H + J*k*m_w))/2), so
the self-consistency condition closes in the single scalar m_w.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaln
from scipy.special import zeta as hurwitz_zeta

from .core import GameParams, half_log_odds, mean_choice
from .errors import DomainError, InvalidDistribution, LengthMismatch
from .noise import NoiseModel
from .rootfind import classify_stability, find_roots

__all__ = [
    "DegreeDistribution",
    "RandomGraphGame",
    "DegreeClassEquilibrium",
    "DegreeClassResponse",
]

_FD_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Finite-support vertex-degree law with its edge-weighted moments.

    probs are renormalised to sum to one; degree-k classes receive the edge
    weight w_k = k*pi_k / E[k] (zero for isolated vertices).  Laws truncated
    from unbounded families carry the discarded tail in truncation_mass.
    """

    degrees: np.ndarray
    probs: np.ndarray
    truncation_mass: float = 0.0
    mean_degree: float = field(init=False)
    second_moment: float = field(init=False)
    edge_weights: np.ndarray = field(init=False)

    def __post_init__(self):
        deg = np.asarray(self.degrees)
        if deg.ndim != 1 or deg.size == 0:
            raise InvalidDistribution("degree support must be a nonempty 1-d list")
        if not np.all(deg == np.floor(deg)) or np.any(deg < 0):
            raise InvalidDistribution("degrees must be nonnegative integers")
        deg = deg.astype(np.int64)
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != deg.shape:
            raise LengthMismatch("degrees and probs must align")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise InvalidDistribution("probabilities must be finite and nonnegative")
        order = np.argsort(deg)
        deg, probs = deg[order], probs[order]
        if np.any(np.diff(deg) == 0):
            raise InvalidDistribution("degree support must not repeat")
        total = float(probs.sum())
        if total <= 0:
            raise InvalidDistribution("probabilities must have positive mass")
        probs = probs / total
        mean_k = float(deg @ probs)
        if mean_k <= 0:
            raise InvalidDistribution(
                "a positive-degree class with positive probability is required")
        weights = deg * probs / mean_k
        for arr in (deg, probs, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "degrees", deg)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "mean_degree", mean_k)
        object.__setattr__(self, "second_moment", float((deg * deg) @ probs))
        object.__setattr__(self, "edge_weights", weights)

    @classmethod
    def regular(cls, z: int) -> "DegreeDistribution":
        """Point mass on degree z >= 1."""
        if z < 1:
            raise InvalidDistribution("regular graphs need z >= 1")
        return cls(degrees=[z], probs=[1.0])

    @classmethod
    def poisson(cls, lam: float, kmax: int) -> "DegreeDistribution":
        """Poisson(lam) truncated at kmax and renormalised."""
        if lam <= 0:
            raise InvalidDistribution("poisson rate must be positive")
        if kmax < 1:
            raise InvalidDistribution("poisson truncation needs kmax >= 1")
        k = np.arange(kmax + 1)
        raw = np.exp(k * np.log(lam) - lam - gammaln(k + 1))
        return cls(degrees=k, probs=raw,
                   truncation_mass=max(0.0, 1.0 - float(raw.sum())))

    @classmethod
    def powerlaw(cls, exponent: float, kmin: int, kmax: int) -> "DegreeDistribution":
        """pi_k proportional to k^-exponent on kmin..kmax, renormalised."""
        if exponent <= 1:
            raise InvalidDistribution("powerlaw exponent must exceed 1")
        if kmin < 1 or kmax < kmin:
            raise InvalidDistribution("powerlaw needs 1 <= kmin <= kmax")
        k = np.arange(kmin, kmax + 1)
        raw = k.astype(float) ** -exponent
        tail_total = float(hurwitz_zeta(exponent, kmin))
        return cls(degrees=k, probs=raw,
                   truncation_mass=max(0.0, 1.0 - float(raw.sum()) / tail_total))

    @classmethod
    def explicit(cls, degrees, probs) -> "DegreeDistribution":
        """Arbitrary finite law from parallel degree/probability lists."""
        return cls(degrees=degrees, probs=probs)

    @classmethod
    def from_json(cls, source) -> "DegreeDistribution":
        """Load {"degrees": [...], "probs": [...]} from a mapping or a path."""
        doc = source if isinstance(source, dict) else json.loads(Path(source).read_text())
        try:
            return cls(degrees=doc["degrees"], probs=doc["probs"])
        except KeyError as missing:
            raise InvalidDistribution(
                f"degree distribution document lacks key {missing}") from None

    def weighted_mean(self, values) -> float:
        """Edge-weighted aggregate sum_k w_k * values_k."""
        arr = np.asarray(values, dtype=float)
        if arr.shape != self.degrees.shape:
            raise LengthMismatch(
                f"expected {self.degrees.size} per-degree values, got {arr.size}")
        return float(self.edge_weights @ arr)


@dataclass(frozen=True, eq=False)
class DegreeClassEquilibrium:
    """One self-consistent m_w together with its per-degree responses."""

    m_w: float
    m_k: np.ndarray
    residual: float
    map_derivative: float
    stability: str


@dataclass(frozen=True, eq=False)
class DegreeClassResponse:
    """One-shot per-degree best responses to given (possibly inconsistent)
    expectations; m_w_response is the aggregate they induce."""

    m_w_exp: float
    m_k: np.ndarray
    m_w_response: float


def _check_aggregate(m_w_exp) -> None:
    arr = np.asarray(m_w_exp, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0):
        raise DomainError("aggregate expectation m_w must lie in [-1, 1]")


@dataclass(frozen=True)
class RandomGraphGame:
    """Binary-choice game on an annealed configuration-model graph."""

    params: GameParams
    noise: NoiseModel
    degree_dist: DegreeDistribution

    def degree_class_response(self, k: int, m_w_exp: float) -> float:
        """Best-response mean of a degree-k class: tanh(g(2b(H+J*k*m_w))/2)."""
        if k < 0:
            raise DomainError("degree must be nonnegative")
        _check_aggregate(m_w_exp)
        h = self.params.H + self.params.J * k * m_w_exp
        return mean_choice(self.noise, self.params, h)

    def class_responses(self, m_w_exp: float) -> np.ndarray:
        """Best-response means of every class in the support, in order."""
        _check_aggregate(m_w_exp)
        h = self.params.H + self.params.J * self.degree_dist.degrees * float(m_w_exp)
        return np.tanh(half_log_odds(self.noise, self.params, h))

    def weighted_response(self, m_w_exp):
        """Edge-weighted mean response: the scalar iteration map in m_w."""
        _check_aggregate(m_w_exp)
        m = np.asarray(m_w_exp, dtype=float)
        fields = self.params.H + self.params.J * np.multiply.outer(
            self.degree_dist.degrees.astype(float), m)
        t = np.tanh(half_log_odds(self.noise, self.params, fields))
        out = np.tensordot(self.degree_dist.edge_weights, t, axes=1)
        return float(out) if np.ndim(m_w_exp) == 0 else out

    def _map_derivative(self, m_w: float) -> float:
        # Central difference, clamped so tabulated noise is never queried
        # outside the expectation domain.
        lo = max(m_w - _FD_STEP, -1.0)
        hi = min(m_w + _FD_STEP, 1.0)
        return (self.weighted_response(hi) - self.weighted_response(lo)) / (hi - lo)

    def qre_fixed_point(self, scan_step: float = 1e-3,
                        tol: float = 1e-12) -> list[DegreeClassEquilibrium]:
        """All self-consistent aggregates m_w on [-1, 1], ascending.

        Each root is expanded into the per-degree responses m_k and
        classified from the slope of the scalar iteration map.
        """
        def residual(m):
            return self.weighted_response(m) - np.asarray(m, dtype=float)

        out = []
        for m_w in find_roots(residual, -1.0, 1.0, scan_step, tol):
            m_k = self.class_responses(m_w)
            deriv = self._map_derivative(m_w)
            out.append(DegreeClassEquilibrium(
                m_w=m_w,
                m_k=m_k,
                residual=abs(float(self.degree_dist.edge_weights @ m_k) - m_w),
                map_derivative=deriv,
                stability=classify_stability(deriv)))
        return out

    def expectation_consistent_solve(self, m_k_exp) -> DegreeClassResponse:
        """Per-degree likelihood maximisers for given per-degree expectations.

        Aggregates the inputs into m_w, responds class by class, and reports
        the aggregate the responses would induce; no self-consistency is
        imposed.
        """
        arr = np.asarray(m_k_exp, dtype=float)
        if arr.shape != self.degree_dist.degrees.shape:
            raise LengthMismatch(
                f"expected {self.degree_dist.degrees.size} per-degree "
                f"expectations, got {arr.size}")
        _check_aggregate(arr)
        m_w_exp = self.degree_dist.weighted_mean(arr)
        m_k = self.class_responses(m_w_exp)
        return DegreeClassResponse(
            m_w_exp=m_w_exp,
            m_k=m_k,
            m_w_response=float(self.degree_dist.edge_weights @ m_k))
