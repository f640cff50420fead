"""Push-pull hybrid: latest-first blind push on positions 1..d, greedy blind pull beyond d."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..params import SystemParams
from .profile import ConvergenceError, DiffusionProfile

PULL_HIT = 1.0 - math.exp(-1.0)


@dataclass(frozen=True)
class PushPullRun:
    profile: DiffusionProfile
    iterations: int
    residual: float
    split_point: int


def _greedy_blind_weights(P: np.ndarray) -> np.ndarray:
    """c_{0,i} for greedy selection over the whole requestable buffer, positions 1..n-1."""
    held = P[:-1]
    tail = np.cumprod(held[::-1])[::-1]
    return np.concatenate((tail[1:], [1.0]))


def push_pull_sweep(P_prev: np.ndarray, first_pull: float, N: int, d: int) -> np.ndarray:
    """One forward pass for a given estimate of P_{d+1}.

    Greedy pull weights read downstream positions from ``P_prev``; with ``d = n``
    there is no pull region and the estimate is ignored.
    """
    n = P_prev.size
    no_pull_reply = 1.0 if d >= n else 1.0 - first_pull
    c0 = _greedy_blind_weights(P_prev)
    P = np.empty(n)
    P[0] = 1.0 / N
    missing_newer = 1.0
    for i in range(1, n):
        p = P[i - 1]
        if i <= d:
            c_push = no_pull_reply * missing_newer
            P[i] = p + (1.0 - p) * (1.0 - math.exp(-p * c_push))
            missing_newer *= 1.0 - p
        else:
            P[i] = p + p * c0[i - 1] * (1.0 - p) * PULL_HIT
    return P


def push_pull_profile(
    params: SystemParams,
    damping: float = 0.5,
    tol: float = 1e-10,
    max_iterations: int = 10_000,
) -> PushPullRun:
    """Solve the segmented push-pull recursion by damped fixed-point iteration on P_{d+1}.

    The push branch needs P_{d+1} before it is computed, so the estimate is
    relaxed as ``x <- (1-damping) x + damping * sweep(x)[d+1]`` starting from a
    pure-push pass. Iteration stops once both the estimate and the whole profile
    move by less than ``tol`` between iterations.
    """
    d = params.split_point
    n, N = params.n, params.N
    pure_push = push_pull_sweep(np.zeros(n), 0.0, N, n)
    P = pure_push
    x = pure_push[d] if d < n else 0.0
    residual = math.inf
    for it in range(1, max_iterations + 1):
        nxt = push_pull_sweep(P, x, N, d)
        x_new = (1.0 - damping) * x + damping * nxt[d] if d < n else 0.0
        residual = max(abs(x_new - x), float(np.max(np.abs(nxt - P))))
        P, x = nxt, x_new
        if residual < tol:
            return PushPullRun(DiffusionProfile(P), it, residual, d)
    raise ConvergenceError(
        f"push-pull with d={d} did not converge in {max_iterations} iterations (residual {residual:.3g})",
        residual,
        max_iterations,
    )
