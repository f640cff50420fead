"""Per-position success probabilities Z_i for the chunk-first, peer-first and epidemic schemes.

Each scheme has a vectorised form (``*_rates``) returning arrays over the
requestable positions ``1..n-1`` and a single-position form (``z_*``) returning
a :class:`PullRates` record. Exact binomial expressions are the default; the
large-``v`` exponential forms are opt-in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..params import ReplyMode, Scheme, SchemeSpec, SelectionMode, StrategyKind, SystemParams
from .selection import (
    PositionOutOfRange,
    as_probabilities,
    binomial_pmf,
    check_neighbor_count,
    chunk_weights,
    peer_prob_cf,
    peer_prob_pf,
)


@dataclass(frozen=True)
class PullRates:
    """Intermediate quantities behind Z at one buffer position.

    ``Z`` is a probability in single-reply mode and an expected number of served
    requests (at most ``U``) in multi-reply mode.
    """

    position: int
    chunk_weight: float
    peer_prob: float
    success: float
    request_prob: float | None = None
    choose_prob: float | None = None
    useful_prob: float | None = None


@dataclass(frozen=True)
class RateArrays:
    chunk_weight: np.ndarray
    peer_prob: np.ndarray
    success: np.ndarray
    request_prob: np.ndarray | None = None
    choose_prob: np.ndarray | None = None
    useful_prob: float | None = None

    def at(self, i: int) -> PullRates:
        k = i - 1
        pick = lambda a: None if a is None else float(a[k])
        return PullRates(
            position=i,
            chunk_weight=float(self.chunk_weight[k]),
            peer_prob=float(self.peer_prob[k]),
            success=float(self.success[k]),
            request_prob=pick(self.request_prob),
            choose_prob=pick(self.choose_prob),
            useful_prob=self.useful_prob,
        )

    def records(self) -> list[PullRates]:
        return [self.at(i) for i in range(1, self.success.size + 1)]


def multi_reply_served(r, v: int, U: int):
    """Expected served requests: sum over k of min(k, U) C(v, k) r^k (1-r)^(v-k)."""
    s = np.minimum(np.arange(v + 1), U)
    return binomial_pmf(v, np.asarray(r, dtype=float)) @ s


def single_reply_success(r, v: int):
    return 1.0 - (1.0 - np.asarray(r, dtype=float)) ** v


def peer_first_multi_success(w, p, v: int, U: int):
    """Sum over k of q_k C(v, k) p^k (1-p)^(v-k), q_k the expected served chunk-i requests."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    p = np.broadcast_to(np.asarray(p, dtype=float), w.shape)
    q = np.zeros(w.shape + (v + 1,))
    s_k = np.minimum(np.arange(v + 1), U)
    for s in range(1, min(U, v) + 1):
        q[..., s_k == s] = (binomial_pmf(s, w) @ np.arange(s + 1))[..., None]
    return np.sum(q * binomial_pmf(v, p), axis=-1)


def _split(profile):
    P = as_probabilities(profile, "profile")
    if P.size < 2:
        raise ValueError("profile must cover at least two buffer positions")
    return P, P[:-1]


def chunk_first_rates(profile, params: SystemParams, spec: SchemeSpec, approximate: bool = False) -> RateArrays:
    v = check_neighbor_count(params.v)
    P, head = _split(profile)
    c = chunk_weights(SelectionMode.V_NEIGHBOR, spec.strategy, P, v)
    p = peer_prob_cf(spec.peer_selection, head, v)
    r = p * c * (1.0 - head)
    if spec.reply_mode is ReplyMode.MULTI:
        if approximate:
            raise ValueError("the exponential approximation only applies to single reply")
        z = multi_reply_served(r, v, params.U)
    elif approximate:
        z = 1.0 - np.exp(-v * r)
    else:
        z = single_reply_success(r, v)
    return RateArrays(c, np.asarray(p, dtype=float), z, request_prob=r)


def peer_first_rates(
    profile,
    params: SystemParams,
    spec: SchemeSpec,
    approximate: bool = False,
    unlimited_replies: bool = False,
) -> RateArrays:
    """Peer-first rates.

    ``approximate`` uses w_i (1 - e^{-v p}) for single reply; ``unlimited_replies``
    uses the saturated form v p w_i. Both reduce to the textbook forms when p = 1/v.
    """
    v = check_neighbor_count(params.v)
    P, head = _split(profile)
    c = chunk_weights(SelectionMode.ONE_NEIGHBOR, spec.strategy, P, v)
    u, p = peer_prob_pf(spec.peer_selection, P, v)
    w = c * (1.0 - head)
    if unlimited_replies:
        z = v * p * w
    elif spec.reply_mode is ReplyMode.MULTI:
        if approximate:
            raise ValueError("the exponential approximation only applies to single reply")
        z = peer_first_multi_success(w, p, v, params.U)
    elif approximate:
        z = w * (1.0 - math.exp(-v * p))
    else:
        z = w * (1.0 - (1.0 - p) ** v)
    return RateArrays(c, np.full(w.shape, p), z, choose_prob=w, useful_prob=u)


def epidemic_rates(
    profile, params: SystemParams, strategy: StrategyKind = StrategyKind.LATEST_FIRST, approximate: bool = False
) -> RateArrays:
    v = check_neighbor_count(params.v)
    P, head = _split(profile)
    c = chunk_weights(SelectionMode.ZERO_NEIGHBOR, strategy, P, v)
    hit = 1.0 - math.exp(-1.0) if approximate else 1.0 - (1.0 - 1.0 / v) ** v
    z = c * (1.0 - head) * hit
    return RateArrays(c, np.full(z.shape, 1.0 / v), z, choose_prob=c * (1.0 - head))


def scheme_rates(profile, params: SystemParams, spec: SchemeSpec, **flags) -> RateArrays:
    if spec.scheme is Scheme.CHUNK_FIRST:
        return chunk_first_rates(profile, params, spec, **flags)
    if spec.scheme is Scheme.PEER_FIRST:
        return peer_first_rates(profile, params, spec, **flags)
    if spec.scheme is Scheme.EPIDEMIC:
        return epidemic_rates(profile, params, spec.strategy, **flags)
    raise ValueError(f"{spec.scheme.value} has no per-position pull rate; use push_pull_profile")


def _position(profile, i: int) -> None:
    n = np.size(profile)
    if not 1 <= i <= n - 1:
        raise PositionOutOfRange(f"position must satisfy 1 <= i <= n-1={n - 1}, got {i}")


def z_chunk_first(profile, i: int, params: SystemParams, spec: SchemeSpec, approximate: bool = False) -> PullRates:
    if spec.scheme is not Scheme.CHUNK_FIRST:
        raise ValueError("z_chunk_first needs a chunk-first scheme spec")
    _position(profile, i)
    return chunk_first_rates(profile, params, spec, approximate).at(i)


def z_peer_first(
    profile,
    i: int,
    params: SystemParams,
    spec: SchemeSpec,
    approximate: bool = False,
    unlimited_replies: bool = False,
) -> PullRates:
    if spec.scheme is not Scheme.PEER_FIRST:
        raise ValueError("z_peer_first needs a peer-first scheme spec")
    _position(profile, i)
    return peer_first_rates(profile, params, spec, approximate, unlimited_replies).at(i)


def z_epidemic(
    profile,
    i: int,
    params: SystemParams,
    strategy: StrategyKind = StrategyKind.LATEST_FIRST,
    approximate: bool = False,
) -> PullRates:
    _position(profile, i)
    return epidemic_rates(profile, params, strategy, approximate).at(i)
