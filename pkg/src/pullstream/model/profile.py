"""Diffusion profiles and the steady-state solver for the pull schemes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..params import Scheme, SchemeSpec, SystemParams
from .schemes import PullRates, scheme_rates
from .selection import InvalidProbability

MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class DiffusionProfile:
    """Presence probabilities indexed by buffer position (or time slot); ``values[0]`` is index 1."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).reshape(-1)
        if arr.size == 0:
            raise ValueError("profile must not be empty")
        if np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0:
            raise InvalidProbability("profile values must lie in [0, 1]")
        if np.any(np.diff(arr) < -MONOTONE_SLACK):
            raise ValueError("profile values must be non-decreasing")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, i: int) -> float:
        """1-based access."""
        if not 1 <= i <= self.values.size:
            raise IndexError(f"position {i} outside 1..{self.values.size}")
        return float(self.values[i - 1])

    def __iter__(self):
        return iter(self.values.tolist())

    @property
    def playout_probability(self) -> float:
        return float(self.values[-1])

    def tolist(self) -> list[float]:
        return self.values.tolist()


@dataclass(frozen=True)
class ModelRun:
    profile: DiffusionProfile
    rates: list[PullRates]
    sweeps: int
    residual: float
    converged: bool = True
    extra: dict = field(default_factory=dict)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


def step(P: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Advance one slot: P_{i+1} = P_i + min(P_i Z_i, 1 - P_i) with P_1 kept fixed."""
    head = P[:-1]
    out = np.empty_like(P)
    out[0] = P[0]
    out[1:] = head + np.minimum(head * Z, 1.0 - head)
    return out


def iterate_profile(
    params: SystemParams,
    spec: SchemeSpec,
    *,
    tol: float = 1e-12,
    max_sweeps: int = 100_000,
    strict: bool = True,
    **flags,
) -> ModelRun:
    """Steady-state diffusion profile of a pull scheme.

    Chunk weights for greedy and random selection (and the peer-first usefulness
    term) depend on positions downstream of ``i``, so a single forward pass does
    not close the recursion. The profile is marched slot by slot from an empty
    buffer (``P_1 = 1/N``, everything else 0), each slot evaluating Z on the
    previous slot's profile, until successive profiles differ by less than
    ``tol``. For latest-first weights this reaches the one-pass forward solution
    after ``n`` slots.
    """
    if spec.scheme is Scheme.PUSH_PULL:
        raise ValueError("push-pull profiles come from push_pull_profile")
    n = params.n
    P = np.zeros(n)
    P[0] = 1.0 / params.N
    residual = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        rates = scheme_rates(P, params, spec, **flags)
        nxt = step(P, rates.success)
        residual = float(np.max(np.abs(nxt - P)))
        P = nxt
        if residual < tol:
            break
    converged = residual < tol
    if not converged and strict:
        raise ConvergenceError(
            f"{spec.label}: profile did not settle after {sweeps} slots (residual {residual:.3g})",
            residual,
            sweeps,
        )
    rates = scheme_rates(P, params, spec, **flags)
    return ModelRun(DiffusionProfile(P), rates.records(), sweeps, residual, converged)


def forward_profile(params: SystemParams, spec: SchemeSpec, **flags) -> DiffusionProfile:
    """One forward pass, i = 1..n-1, using weights from the partially built profile.

    Exact for latest-first weights with position-local peer probabilities; kept as
    a cross-check for the marching solver.
    """
    n = params.n
    P = np.zeros(n)
    P[0] = 1.0 / params.N
    for i in range(1, n):
        z = scheme_rates(P, params, spec, **flags).success[i - 1]
        P[i] = P[i - 1] + min(P[i - 1] * z, 1.0 - P[i - 1])
    return DiffusionProfile(P)


def playout_metrics(profile, target: float) -> tuple[float, int | None]:
    """(playout probability P_n, first 1-based position with P_i >= target or None)."""
    values = profile.values if isinstance(profile, DiffusionProfile) else np.asarray(profile, dtype=float)
    hits = np.nonzero(values >= target)[0]
    delay = int(hits[0]) + 1 if hits.size else None
    return float(values[-1]), delay
