import math

import numpy as np
import pytest

from pullstream.model import ConvergenceError, push_pull_profile
from pullstream.model.push_pull import PULL_HIT, push_pull_sweep
from pullstream.params import SystemParams

DESK = SystemParams(N=100, n=40, v=10)


def pure_push(N, n):
    """Latest-first blind push with no pull region, computed directly."""
    P = [1.0 / N]
    for i in range(1, n):
        c = math.prod(1.0 - p for p in P[:-1])
        p = P[-1]
        P.append(p + (1 - p) * (1 - math.exp(-p * c)))
    return np.array(P)


def test_split_at_buffer_end_is_pure_push():
    run = push_pull_profile(DESK.with_(d=DESK.n))
    assert np.abs(run.profile.values - pure_push(100, 40)).max() <= 1e-12


def test_split_at_one_is_pure_greedy_pull():
    P = push_pull_profile(DESK.with_(d=1)).profile.values
    n = P.size
    # position 1 -> 2 is still a push step; every later step is a pull step
    for i in range(2, n):
        c0 = math.prod(P[k] for k in range(i, n - 1))
        assert P[i] == pytest.approx(P[i - 1] + P[i - 1] * c0 * (1 - P[i - 1]) * PULL_HIT, abs=1e-9)


def test_push_pull_beats_push_at_twenty():
    push = push_pull_profile(DESK.with_(d=40)).profile.playout_probability
    hybrid = push_pull_profile(DESK.with_(d=20)).profile.playout_probability
    assert hybrid / push - 1 >= 0.10


@pytest.mark.parametrize("d", range(1, 41))
def test_every_split_converges(d):
    run = push_pull_profile(DESK.with_(d=d))
    assert run.residual < 1e-10 and run.iterations < 10_000
    P = run.profile.values
    assert np.all(np.diff(P) >= 0) and P.max() <= 1.0


@pytest.mark.parametrize("d", [5, 20, 33])
def test_solution_is_a_fixed_point(d):
    run = push_pull_profile(DESK.with_(d=d))
    P = run.profile.values
    again = push_pull_sweep(P, P[d], DESK.N, d)
    assert np.abs(again - P).max() < 1e-9


def test_default_split_is_half_buffer():
    assert push_pull_profile(DESK).split_point == 20


def test_iteration_cap_raises():
    with pytest.raises(ConvergenceError) as info:
        push_pull_profile(DESK.with_(d=20), max_iterations=2)
    assert info.value.iterations == 2
