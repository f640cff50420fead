from .profile import (
    ConvergenceError,
    DiffusionProfile,
    ModelRun,
    forward_profile,
    iterate_profile,
    playout_metrics,
)
from .schemes import (
    PullRates,
    epidemic_rates,
    chunk_first_rates,
    peer_first_rates,
    scheme_rates,
    z_chunk_first,
    z_epidemic,
    z_peer_first,
)
from .selection import (
    InvalidProbability,
    MissingCountDistribution,
    PositionOutOfRange,
    availability,
    chunk_weight,
    chunk_weights,
    expected_inverse_count,
    peer_prob_cf,
    peer_prob_pf,
    random_useful_prob,
)
from .push_pull import PushPullRun, push_pull_profile
from .single_chunk import (
    curve_crossing_slot,
    random_peer_position,
    single_chunk_closed_form,
    single_chunk_profile,
    useful_peer_curve,
)
