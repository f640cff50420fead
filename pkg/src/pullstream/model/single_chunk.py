"""Diffusion of one isolated chunk over time, discrete and in closed form."""

from __future__ import annotations

import math

import numpy as np

from ..params import PeerSelectionKind
from .profile import DiffusionProfile
from .selection import check_neighbor_count, check_probability

RANDOM_PEER_RATE = 1.0 - math.exp(-1.0)


def single_chunk_profile(kind: PeerSelectionKind, N: int, v: int, T: int) -> DiffusionProfile:
    """P_t for t = 1..T when the only chunk in play starts at one of N peers."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    v = check_neighbor_count(v)
    kind = PeerSelectionKind(kind)
    P = np.empty(T)
    P[0] = 1.0 / N
    hit = 1.0 - (1.0 - 1.0 / v) ** v
    for t in range(1, T):
        p = P[t - 1]
        if kind is PeerSelectionKind.RANDOM_USEFUL_PEER:
            z = 1.0 - p**v
        else:
            z = (1.0 - p) * hit
        P[t] = p + min(p * z, 1.0 - p)
    return DiffusionProfile(P)


def useful_peer_curve(x: float, P1: float, v: int, form: str = "printed") -> float:
    """Continuous single-chunk curve under random useful peer selection.

    ``form="printed"`` is the logistic y = 1 - 1/(e^{vx+C} + 1) with
    C = ln(1/(1-P1) - 1) - v, which passes through (1, P1). ``form="ode"`` is the
    solution of y' = y(1 - y^v) through the same point,
    y = (1 + K e^{-vx})^{-1/v} with K = (P1^{-v} - 1) e^{v}.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    P1 = check_probability(P1, "P1")
    if not 0.0 < P1 < 1.0:
        raise ValueError("P1 must lie strictly inside (0, 1)")
    v = check_neighbor_count(v)
    if form == "printed":
        C = math.log(1.0 / (1.0 - P1) - 1.0) - v
        e = v * x + C
        # 1 - 1/(e^e + 1) written to stay finite for large e
        return 1.0 / (1.0 + math.exp(-e)) if e > -700 else 0.0
    if form == "ode":
        log_k = math.log(P1 ** (-v) - 1.0) + v
        e = log_k - v * x
        if e > 700:
            return 0.0
        return (1.0 + math.exp(e)) ** (-1.0 / v)
    raise ValueError(f"unknown form {form!r}; expected 'printed' or 'ode'")


def random_peer_position(y: float, P1: float, log_form: str = "difference") -> float:
    """Continuous slot x at which the random-peer single-chunk curve reaches ``y``.

    ``log_form="difference"`` inverts the logistic y' = (1 - e^{-1}) y (1 - y):
    x = [ln y - ln(1-y)] / (1 - e^{-1}) + C. ``log_form="sum"`` keeps the
    ``ln y + ln(1-y)`` variant, which is not monotone in y and does not track the
    discrete recursion past y = 0.5.
    """
    if not 0.0 < y < 1.0:
        raise ValueError(f"y must lie strictly inside (0, 1), got {y}")
    if not 0.0 < P1 < 1.0:
        raise ValueError(f"P1 must lie strictly inside (0, 1), got {P1}")
    sign = {"difference": -1.0, "sum": 1.0}.get(log_form)
    if sign is None:
        raise ValueError(f"unknown log_form {log_form!r}; expected 'difference' or 'sum'")
    C = 1.0 - (math.log(P1) + sign * math.log(1.0 - P1)) / RANDOM_PEER_RATE
    return (math.log(y) + sign * math.log(1.0 - y)) / RANDOM_PEER_RATE + C


def single_chunk_closed_form(kind: PeerSelectionKind, value: float, P1: float, v: int = 1, **options) -> float:
    """Useful peer: curve value y at slot ``value``. Random peer: slot x at which y = ``value``."""
    if PeerSelectionKind(kind) is PeerSelectionKind.RANDOM_USEFUL_PEER:
        return useful_peer_curve(value, P1, v, **options)
    return random_peer_position(value, P1, **options)


def curve_crossing_slot(curve, level: float = 0.5, max_slot: int = 10_000) -> int | None:
    """First integer slot x >= 1 with curve(x) >= level."""
    for x in range(1, max_slot + 1):
        if curve(x) >= level:
            return x
    return None
