"""Chunk availability, chunk selection weights and peer selection probabilities.

Profiles are passed as plain sequences (or arrays) of presence probabilities
``P[0..n-1]``; public functions take 1-based buffer positions, position 1 being
the newest chunk and position ``n`` the one played out in the current slot.
Only positions ``1..n-1`` can be requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..params import PeerSelectionKind, SelectionMode, StrategyKind

_PROB_SLACK = 1e-12


class InvalidProbability(ValueError):
    pass


class PositionOutOfRange(ValueError):
    pass


def check_probability(x: float, name: str = "probability") -> float:
    x = float(x)
    if not (-_PROB_SLACK <= x <= 1.0 + _PROB_SLACK):
        raise InvalidProbability(f"{name} must lie in [0, 1], got {x!r}")
    return min(max(x, 0.0), 1.0)


def as_probabilities(values, name: str = "probabilities") -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size and (np.isnan(arr).any() or arr.min() < -_PROB_SLACK or arr.max() > 1.0 + _PROB_SLACK):
        raise InvalidProbability(f"{name} must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def check_neighbor_count(v: int) -> int:
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise ValueError(f"neighbor count must be a positive integer, got {v!r}")
    return int(v)


def binomial_coefficients(m: int) -> np.ndarray:
    """C(m, 0..m) as floats, built by the multiplicative recurrence."""
    coef = np.empty(m + 1)
    coef[0] = 1.0
    for k in range(1, m + 1):
        coef[k] = coef[k - 1] * (m - k + 1) / k
    return coef


def binomial_pmf(m: int, p) -> np.ndarray:
    """Binomial(m, p) pmf over 0..m; ``p`` may be an array, giving one row per entry."""
    p = np.asarray(p, dtype=float)
    k = np.arange(m + 1)
    pk = p[..., None] ** k
    qk = (1.0 - p[..., None]) ** (m - k)
    return binomial_coefficients(m) * pk * qk


def availability(P_k, v: int):
    """Probability that a chunk is missing locally but held by at least one of ``v`` neighbors."""
    v = check_neighbor_count(v)
    if np.ndim(P_k) == 0:
        p = check_probability(P_k, "P_k")
        return (1.0 - p) * (1.0 - (1.0 - p) ** v)
    p = as_probabilities(P_k, "P_k")
    return (1.0 - p) * (1.0 - (1.0 - p) ** v)


@dataclass(frozen=True)
class MissingCountDistribution:
    """Distribution of how many independent candidate positions are selectable."""

    pmf: np.ndarray

    @classmethod
    def from_probabilities(cls, probs: Sequence[float]) -> "MissingCountDistribution":
        pmf = np.array([1.0])
        for p in as_probabilities(probs):
            nxt = np.zeros(pmf.size + 1)
            nxt[:-1] = pmf * (1.0 - p)
            nxt[1:] += pmf * p
            pmf = nxt
        return cls(pmf)

    def expected_inverse(self) -> float:
        return float(np.sum(self.pmf / np.arange(1, self.pmf.size + 1)))


def expected_inverse_count(probs: Sequence[float]) -> float:
    """E[1/(X+1)] where X counts successes over independent Bernoulli(probs)."""
    return MissingCountDistribution.from_probabilities(probs).expected_inverse()


@lru_cache(maxsize=None)
def _gauss_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes mapped to [0, 1], with the weights for [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(count)
    return (nodes + 1.0) / 2.0, weights


def _expected_inverse_excluding_each(s: np.ndarray) -> np.ndarray:
    """Row i: E[1/(X+1)] over all entries of ``s`` except entry i.

    E[1/(X+1)] is the integral over t in [0, 1] of prod_k (1 - p_k + p_k t), a
    polynomial of degree m - 1, so Gauss-Legendre with m//2 + 1 nodes is exact.
    Every factor is at least t > 0 at the nodes, so dropping entry i is a
    subtraction in log space.
    """
    m = s.size
    if m == 0:
        return np.zeros(0)
    t, weights = _gauss_nodes(m // 2 + 1)
    logs = np.log1p(np.outer(s, t - 1.0))  # (m, nodes)
    rest = np.exp(logs.sum(axis=0) - logs)
    return rest @ weights / 2.0


def selectable_probabilities(mode: SelectionMode, profile, v: int) -> np.ndarray:
    """Per-position probability that the chunk counts as a candidate under ``mode``."""
    P = as_probabilities(profile, "profile")
    mode = SelectionMode(mode)
    if mode is SelectionMode.ZERO_NEIGHBOR:
        return 1.0 - P
    if mode is SelectionMode.ONE_NEIGHBOR:
        return availability(P, 1)
    return availability(P, v)


def chunk_weights(mode: SelectionMode, strategy: StrategyKind, profile, v: int) -> np.ndarray:
    """Chunk weights ``c_i`` for every requestable position ``i = 1..n-1`` (array index i-1)."""
    v = check_neighbor_count(v)
    strategy = StrategyKind(strategy)
    s = selectable_probabilities(mode, profile, v)[:-1]
    m = s.size
    if strategy is StrategyKind.RANDOM:
        return _expected_inverse_excluding_each(s)
    blocked = 1.0 - s
    if strategy is StrategyKind.LATEST_FIRST:
        # weight of i = product over newer positions 1..i-1
        return np.concatenate(([1.0], np.cumprod(blocked[:-1]))) if m else np.zeros(0)
    # greedy: product over older requestable positions i+1..n-1
    tail = np.cumprod(blocked[::-1])[::-1]
    return np.concatenate((tail[1:], [1.0])) if m else np.zeros(0)


def chunk_weight(mode: SelectionMode, strategy: StrategyKind, profile, i: int, v: int) -> float:
    """Chunk weight of the single position ``i`` (1-based, ``1 <= i <= n-1``)."""
    P = as_probabilities(profile, "profile")
    n = P.size
    if not 1 <= i <= n - 1:
        raise PositionOutOfRange(f"position must satisfy 1 <= i <= n-1={n - 1}, got {i}")
    v = check_neighbor_count(v)
    strategy = StrategyKind(strategy)
    s = selectable_probabilities(mode, P, v)[:-1]
    if strategy is StrategyKind.RANDOM:
        return expected_inverse_count(np.delete(s, i - 1))
    if strategy is StrategyKind.LATEST_FIRST:
        others = s[: i - 1]
    else:
        others = s[i:]
    return float(np.prod(1.0 - others))


def random_useful_prob(x, v: int):
    """Chance a given useful neighbor is picked when each of the other ``v-1`` is useful w.p. ``x``.

    Sum over k of C(v-1, k) x^k (1-x)^(v-1-k) / (k+1).
    """
    v = check_neighbor_count(v)
    pmf = binomial_pmf(v - 1, np.asarray(x, dtype=float))
    out = pmf @ (1.0 / np.arange(1, v + 1))
    return float(out) if np.ndim(out) == 0 else out


def peer_prob_cf(kind: PeerSelectionKind, P_i, v: int):
    """Probability that a particular possessor of chunk i is the one asked for it."""
    v = check_neighbor_count(v)
    if PeerSelectionKind(kind) is PeerSelectionKind.RANDOM_PEER:
        return 1.0 / v if np.ndim(P_i) == 0 else np.full(np.shape(P_i), 1.0 / v)
    if np.ndim(P_i) == 0:
        return random_useful_prob(check_probability(P_i, "P_i"), v)
    return random_useful_prob(as_probabilities(P_i, "P_i"), v)


def useful_neighbor_prob(profile) -> float:
    """Probability that one neighbor holds at least one chunk the local peer lacks."""
    Q1 = availability(as_probabilities(profile, "profile"), 1)
    return float(1.0 - np.prod(1.0 - Q1))


def peer_prob_pf(kind: PeerSelectionKind, profile, v: int) -> tuple[float | None, float]:
    """``(u, p)`` for the peer-first scheme; ``u`` is ``None`` under random peer selection."""
    v = check_neighbor_count(v)
    if PeerSelectionKind(kind) is PeerSelectionKind.RANDOM_PEER:
        as_probabilities(profile, "profile")
        return None, 1.0 / v
    u = useful_neighbor_prob(profile)
    return u, random_useful_prob(u, v)
