import math

import numpy as np
import pytest

from pullstream.model import (
    curve_crossing_slot,
    random_peer_position,
    single_chunk_closed_form,
    single_chunk_profile,
    useful_peer_curve,
)
from pullstream.params import PeerSelectionKind

USEFUL, RANDOM = PeerSelectionKind.RANDOM_USEFUL_PEER, PeerSelectionKind.RANDOM_PEER


def discrete_crossing(kind, N, v, level=0.5):
    P = single_chunk_profile(kind, N, v, 200).values
    return int(np.argmax(P >= level)) + 1


def test_two_peers_one_neighbor():
    assert np.allclose(single_chunk_profile(USEFUL, 2, 1, 2).values, [0.5, 0.75], atol=1e-15)


def test_everyone_holds_it_is_absorbing():
    P = single_chunk_profile(USEFUL, 1, 1, 5).values
    assert np.all(P == 1.0)


@pytest.mark.parametrize("kind", [USEFUL, RANDOM])
@pytest.mark.parametrize("v", [2, 5, 10])
def test_monotone_convergence_to_one(kind, v):
    P = single_chunk_profile(kind, 100, v, 80).values
    assert np.all(np.diff(P) >= 0.0)
    assert P[-1] > 1.0 - 1e-6


def test_useful_peer_spreads_faster():
    u = single_chunk_profile(USEFUL, 100, 10, 20).values
    r = single_chunk_profile(RANDOM, 100, 10, 20).values
    assert np.all(u >= r)


@pytest.mark.parametrize("form", ["printed", "ode"])
@pytest.mark.parametrize("v", [1, 2, 5, 10])
def test_useful_curve_passes_through_first_slot(form, v):
    assert useful_peer_curve(1.0, 0.01, v, form=form) == pytest.approx(0.01, rel=1e-9)


@pytest.mark.parametrize("form", ["printed", "ode"])
def test_useful_curve_saturates(form):
    assert useful_peer_curve(200.0, 0.01, 5, form=form) == pytest.approx(1.0, abs=1e-12)


def test_ode_form_solves_its_equation():
    v, P1, h = 4, 0.01, 1e-6
    for x in (1.5, 3.0, 6.0):
        y = useful_peer_curve(x, P1, v, form="ode")
        slope = (useful_peer_curve(x + h, P1, v, form="ode") - useful_peer_curve(x - h, P1, v, form="ode")) / (2 * h)
        assert slope == pytest.approx(y * (1 - y**v), rel=1e-5)


@pytest.mark.parametrize("v", [2, 5, 10])
def test_ode_form_tracks_discrete_crossing(v):
    x = curve_crossing_slot(lambda s: useful_peer_curve(s, 0.01, v, form="ode"))
    assert abs(x - discrete_crossing(USEFUL, 100, v)) <= 2


class TestRandomPeerLogSign:
    """Which logarithm form of the implicit random-peer relation follows the recursion."""

    # large v so that 1 - (1 - 1/v)^v is close to the continuous rate 1 - e^-1
    P = single_chunk_profile(RANDOM, 100, 99, 40).values

    def positions(self, form):
        mask = (self.P > 1e-3) & (self.P < 1 - 1e-3)
        slots = np.arange(1, self.P.size + 1)[mask]
        x = np.array([random_peer_position(y, self.P[0], log_form=form) for y in self.P[mask]])
        return slots, x

    def test_both_forms_start_at_slot_one(self):
        for form in ("difference", "sum"):
            assert random_peer_position(self.P[0], self.P[0], log_form=form) == pytest.approx(1.0)

    def test_difference_form_tracks_recursion(self):
        slots, x = self.positions("difference")
        assert np.all(np.diff(x) > 0)
        assert np.abs(x - slots).max() <= 2.0

    def test_sum_form_does_not(self):
        slots, x = self.positions("sum")
        assert not np.all(np.diff(x) > 0)
        assert np.abs(x - slots).max() > 5.0

    def test_difference_form_inverts_logistic(self):
        # the logistic y' = a y (1 - y) through (1, P1), solved for y at x
        a, P1 = 1 - math.exp(-1), 0.01
        for x in (2.0, 5.0, 9.0):
            y = 1 / (1 + (1 / P1 - 1) * math.exp(-a * (x - 1)))
            assert random_peer_position(y, P1) == pytest.approx(x, rel=1e-10)


def test_dispatch_by_kind():
    assert single_chunk_closed_form(USEFUL, 3.0, 0.01, 5) == useful_peer_curve(3.0, 0.01, 5)
    assert single_chunk_closed_form(RANDOM, 0.3, 0.01) == random_peer_position(0.3, 0.01)


@pytest.mark.parametrize("bad", [dict(x=0.5), dict(P1=0.0), dict(form="other")])
def test_useful_curve_rejects_bad_input(bad):
    args = dict(x=2.0, P1=0.01, v=3) | bad
    with pytest.raises(ValueError):
        useful_peer_curve(**args)


def test_crossing_slot_none_when_never_reached():
    assert curve_crossing_slot(lambda x: 0.1, max_slot=10) is None
