"""Exhaustive ground truth for small systems.

Enumerates every strategy configuration of up to 24 agents, multiplies the
per-agent choice probabilities and aggregates the law of the average choice
directly, without the binomial shortcut it exists to check.  Deliberately
dumb: no importance sampling, no clever counting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import log_expit, logsumexp

from .core import GameParams
from .errors import DomainError, TooLarge, UnknownDegreeLabel
from .noise import NoiseModel

__all__ = [
    "MAX_ENUM_AGENTS",
    "EnumerationResult",
    "ClassLaw",
    "ClassEnumerationResult",
    "enumerate_complete",
    "enumerate_random_small",
    "binomial_mode",
]

# 2^24 products run in seconds; beyond that the closed form is exact anyway.
MAX_ENUM_AGENTS = 24
_CHUNK = 1 << 18
_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)
# Grid values within this log-probability gap of the maximum count as tied.
_TIE_LOG_TOL = 1e-9


def _popcount(codes: np.ndarray) -> np.ndarray:
    return (_POP16[codes & 0xFFFF].astype(np.int64)
            + _POP16[(codes >> 16) & 0xFFFF])


def _config_tuple(code: int, n_agents: int) -> tuple[int, ...]:
    # Agent i sits on bit (n_agents-1-i), so integer order on codes equals
    # lexicographic order on (s_1..s_N) with -1 < +1; the first maximum of a
    # scan is then the lexicographically smallest maximiser.
    return tuple(+1 if (code >> (n_agents - 1 - i)) & 1 else -1
                 for i in range(n_agents))


def _check_size(n_agents: int) -> None:
    if n_agents > MAX_ENUM_AGENTS:
        raise TooLarge(
            f"enumeration supports at most {MAX_ENUM_AGENTS} agents, got {n_agents}")
    if n_agents < 1:
        raise DomainError("enumeration needs at least one agent")


def _tied_argmax(values: np.ndarray, grid: np.ndarray) -> tuple[float, ...]:
    top = float(np.max(values))
    return tuple(float(g) for g, v in zip(grid, values)
                 if top - v <= _TIE_LOG_TOL)


@dataclass(frozen=True, eq=False)
class EnumerationResult:
    """Enumerated law of the average choice of identically driven agents."""

    n_agents: int
    m_exp: float
    m_grid: np.ndarray
    log_probs: np.ndarray
    argmax_config: tuple[int, ...]
    argmax_m: tuple[float, ...]
    total_mass: float


@dataclass(frozen=True, eq=False)
class ClassLaw:
    """Enumerated marginal law of one degree class's average choice."""

    degree: int
    size: int
    m_grid: np.ndarray
    log_probs: np.ndarray
    argmax_m: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class ClassEnumerationResult:
    """Enumerated joint and marginal laws of per-class average choices.

    joint_log_probs has one axis per degree class, indexed by the number of
    +1 choices in that class.
    """

    degrees: tuple[int, ...]
    sizes: tuple[int, ...]
    m_w_exp: float
    classes: tuple[ClassLaw, ...]
    joint_log_probs: np.ndarray
    argmax_config: tuple[int, ...]
    total_mass: float


def enumerate_complete(noise: NoiseModel, params: GameParams, n_agents: int,
                       m_exp: float) -> EnumerationResult:
    """Enumerate all 2^N configurations under a common expectation m_exp.

    Every agent feels the field H + J*m_exp; per-configuration probabilities
    are accumulated by average choice in shifted log space.  The aggregated
    law equals the binomial closed form, and argmax_config is all-(+1)
    exactly when p(+1) > 1/2 (ties resolve lexicographically smallest).
    """
    _check_size(n_agents)
    if not np.isfinite(m_exp) or abs(m_exp) > 1.0:
        raise DomainError("expectation m_exp must lie in [-1, 1]")
    g_val = noise.g(2.0 * params.beta * (params.H + params.J * m_exp))
    lp, lm = float(log_expit(g_val)), float(log_expit(-g_val))

    shift = n_agents * max(lp, lm)
    mass = np.zeros(n_agents + 1)
    best_code, best_logp = 0, -np.inf
    for start in range(0, 1 << n_agents, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, 1 << n_agents),
                          dtype=np.int64)
        pops = _popcount(codes)
        logps = pops * lp + (n_agents - pops) * lm
        mass += np.bincount(pops, weights=np.exp(logps - shift),
                            minlength=n_agents + 1)
        local = int(np.argmax(logps))
        if logps[local] > best_logp:
            best_logp, best_code = float(logps[local]), int(codes[local])

    log_probs = np.log(mass) + shift
    m_grid = 2.0 * np.arange(n_agents + 1) / n_agents - 1.0
    return EnumerationResult(
        n_agents=n_agents,
        m_exp=float(m_exp),
        m_grid=m_grid,
        log_probs=log_probs,
        argmax_config=_config_tuple(best_code, n_agents),
        argmax_m=_tied_argmax(log_probs, m_grid),
        total_mass=float(np.exp(logsumexp(log_probs))),
    )


def enumerate_random_small(noise: NoiseModel, params: GameParams,
                           degree_labels, m_k_exp) -> ClassEnumerationResult:
    """Enumerate a small labelled instance of the annealed random-graph game.

    degree_labels assigns a degree to each agent; m_k_exp maps each degree in
    use to its expectation.  The aggregate m_w is formed with the instance's
    own empirical edge weights (w_k proportional to k times the class size),
    every degree-k agent then feels the field H + J*k*m_w, and the joint law
    over per-class average choices is accumulated configuration by
    configuration.  Independence across agents makes the joint law factorise
    over classes.
    """
    labels = [int(k) for k in degree_labels]
    n_agents = len(labels)
    _check_size(n_agents)
    if any(k < 0 for k in labels):
        raise DomainError("degree labels must be nonnegative")
    for k in labels:
        if k not in m_k_exp:
            raise UnknownDegreeLabel(k)

    degrees = sorted(set(labels))
    sizes = [labels.count(k) for k in degrees]
    total_degree = sum(labels)
    if total_degree > 0:
        m_w = sum(k * sizes[c] * float(m_k_exp[k]) / total_degree
                  for c, k in enumerate(degrees))
    else:
        m_w = 0.0  # all agents isolated: only the external field acts
    if abs(m_w) > 1.0 or any(abs(float(m_k_exp[k])) > 1.0 for k in degrees):
        raise DomainError("expectations must lie in [-1, 1]")

    lp, lm = [], []
    for k in degrees:
        g_val = noise.g(2.0 * params.beta * (params.H + params.J * k * m_w))
        lp.append(float(log_expit(g_val)))
        lm.append(float(log_expit(-g_val)))

    masks = []
    for k in degrees:
        mask = 0
        for i, label in enumerate(labels):
            if label == k:
                mask |= 1 << (n_agents - 1 - i)
        masks.append(mask)

    shape = tuple(s + 1 for s in sizes)
    strides = np.ones(len(shape), dtype=np.int64)
    for c in range(len(shape) - 2, -1, -1):
        strides[c] = strides[c + 1] * shape[c + 1]

    shift = sum(s * max(a, b) for s, a, b in zip(sizes, lp, lm))
    mass = np.zeros(int(np.prod(shape)))
    best_code, best_logp = 0, -np.inf
    for start in range(0, 1 << n_agents, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, 1 << n_agents),
                          dtype=np.int64)
        logps = np.zeros(codes.size)
        flat = np.zeros(codes.size, dtype=np.int64)
        for c in range(len(degrees)):
            pops = _popcount(codes & masks[c])
            logps += pops * lp[c] + (sizes[c] - pops) * lm[c]
            flat += pops * strides[c]
        mass += np.bincount(flat, weights=np.exp(logps - shift),
                            minlength=mass.size)
        local = int(np.argmax(logps))
        if logps[local] > best_logp:
            best_logp, best_code = float(logps[local]), int(codes[local])

    joint_log = (np.log(mass) + shift).reshape(shape)
    classes = []
    for c, (k, size) in enumerate(zip(degrees, sizes)):
        axes = tuple(a for a in range(len(shape)) if a != c)
        marginal = logsumexp(joint_log, axis=axes) if axes else joint_log
        m_grid = 2.0 * np.arange(size + 1) / size - 1.0
        classes.append(ClassLaw(degree=k, size=size, m_grid=m_grid,
                                log_probs=marginal,
                                argmax_m=_tied_argmax(marginal, m_grid)))

    return ClassEnumerationResult(
        degrees=tuple(degrees),
        sizes=tuple(sizes),
        m_w_exp=float(m_w),
        classes=tuple(classes),
        joint_log_probs=joint_log,
        argmax_config=_config_tuple(best_code, n_agents),
        total_mass=float(np.exp(logsumexp(joint_log))),
    )


def binomial_mode(n_agents: int, p: float) -> tuple[float, ...]:
    """Mode(s) of the mean-choice grid under Binomial(n_agents, p).

    Returns m = 2*n_plus/N - 1 for n_plus = floor((N+1)p); when (N+1)p is an
    exact integer strictly inside (0, N+1), both tied modes are returned in
    ascending order.
    """
    if n_agents < 1:
        raise DomainError("n_agents must be a positive integer")
    if not 0.0 <= p <= 1.0:
        raise DomainError("p must lie in [0, 1]")
    t = (n_agents + 1) * p
    n_plus = min(int(np.floor(t)), n_agents)
    modes = {n_plus}
    if t == np.floor(t) and 1 <= t <= n_agents:
        modes.add(n_plus - 1)
    return tuple(sorted(2.0 * n / n_agents - 1.0 for n in modes))
