"""Slot-synchronous simulation of the pull schemes on a random mesh.

Chunks are stored in a ring indexed by absolute sequence number modulo ``n``;
chunk ``s`` sits at buffer position ``t - s + 1`` during slot ``t``. Each slot:

1. chunk ``t - n`` leaves the window and the source hands chunk ``t`` to one
   uniformly random peer;
2. every peer snapshots its neighbors' buffers (fresh maps, synchronous);
3. every peer issues at most one request according to its scheme;
4. every peer serves up to ``U`` of the requests it can satisfy, picked at random
   (push-pull peers that served no pull push their newest chunk instead);
5. deliveries are written after all decisions, so they are usable from slot t+1.

Occupancy is sampled from the snapshot of step 2 once ``t > warmup``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..params import PeerSelectionKind, Scheme, SchemeSpec, StrategyKind, SystemParams
from .topology import Topology, build_topology

DEFAULT_WARMUP = 500
DEFAULT_MEASURED = 2000


@dataclass(frozen=True)
class SimConfig:
    params: SystemParams
    spec: SchemeSpec
    slots: int = DEFAULT_WARMUP + DEFAULT_MEASURED
    warmup: int = DEFAULT_WARMUP
    seed: int = 0

    def __post_init__(self):
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots}")
        if not 0 <= self.warmup < self.slots:
            raise ValueError(f"warmup must satisfy 0 <= warmup < slots, got {self.warmup} with slots={self.slots}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def measured_slots(self) -> int:
        return self.slots - self.warmup


@dataclass(frozen=True)
class EmpiricalProfile:
    """Per-position occupancy averaged over peers and measured slots.

    ``stddev`` is the spread of the per-slot occupancy fraction for a single run,
    or the spread across runs once several are pooled by :func:`pool_profiles`.
    """

    values: np.ndarray
    stddev: np.ndarray
    sample_count: int

    def __len__(self) -> int:
        return self.values.size

    @property
    def playout_probability(self) -> float:
        return float(self.values[-1])


@dataclass
class SlotRecord:
    """What happened in one slot; handed to the optional observer."""

    t: int
    granted_to: int
    snapshot: np.ndarray
    requests: np.ndarray  # rows (requester, target, position)
    deliveries: np.ndarray  # rows (receiver, sender, position)
    pushes: np.ndarray  # rows (receiver, sender, position), subset of deliveries' senders


@dataclass
class SimResult:
    profile: EmpiricalProfile
    config: SimConfig
    topology: Topology
    requests: int = 0
    deliveries: int = 0
    pushes: int = 0
    extra: dict = field(default_factory=dict)


def pool_profiles(profiles: list[EmpiricalProfile]) -> EmpiricalProfile:
    """Mean over replicated runs, with the across-run standard deviation."""
    values = np.stack([p.values for p in profiles])
    std = values.std(axis=0, ddof=1) if len(profiles) > 1 else np.zeros(values.shape[1])
    return EmpiricalProfile(values.mean(axis=0), std, sum(p.sample_count for p in profiles))


def _pick_masked(mask: np.ndarray, keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per row, the column of the largest key among True entries; plus a has-any flag."""
    has = mask.any(axis=1)
    return np.where(mask, keys, -1.0).argmax(axis=1), has


def _pick_chunk(cand: np.ndarray, strategy: StrategyKind, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Column index chosen from each row of candidate positions (0 = position 1)."""
    has = cand.any(axis=1)
    if strategy is StrategyKind.LATEST_FIRST:
        return cand.argmax(axis=1), has
    if strategy is StrategyKind.GREEDY:
        m = cand.shape[1]
        return m - 1 - cand[:, ::-1].argmax(axis=1), has
    return _pick_masked(cand, rng.random(cand.shape))


class Simulator:
    """One run's mutable state. Use :func:`run_simulation` unless stepping manually."""

    def __init__(self, config: SimConfig, topology: Topology | None = None):
        p = config.params
        self.config = config
        self.topology = topology if topology is not None else build_topology(p.N, p.v, config.seed)
        if self.topology.size != p.N:
            raise ValueError(f"topology has {self.topology.size} peers, params say N={p.N}")
        # topology and slot dynamics draw from independent streams of the same seed
        self.rng = np.random.default_rng([config.seed, 1])
        self.A = self.topology.matrix
        self.deg = self.topology.degrees
        self.own = np.zeros((p.N, p.n), dtype=bool)
        self.t = 0
        self.counts = np.zeros(p.n)
        self.sq = np.zeros(p.n)
        self.measured = 0
        self.totals = {"requests": 0, "deliveries": 0, "pushes": 0}

    def _columns(self, t: int) -> np.ndarray:
        n = self.config.params.n
        return (t - np.arange(n)) % n

    def _requests(self, view: np.ndarray) -> np.ndarray:
        p, spec, rng = self.config.params, self.config.spec, self.rng
        N, n = p.N, p.n
        held = view[:, : n - 1]
        missing = ~held
        keys = rng.random((N, N))
        any_neighbor, has_nbr = _pick_masked(self.A, keys)
        scheme = spec.scheme

        if scheme is Scheme.CHUNK_FIRST:
            nbr_holders = self.A.astype(np.int32) @ held.astype(np.int32)
            chunk, ok = _pick_chunk(missing & (nbr_holders > 0), spec.strategy, rng)
            if spec.peer_selection is PeerSelectionKind.RANDOM_USEFUL_PEER:
                holders = self.A & held[:, chunk].T
                target, ok2 = _pick_masked(holders, keys)
                ok &= ok2
            else:
                target = any_neighbor
        elif scheme is Scheme.PEER_FIRST:
            if spec.peer_selection is PeerSelectionKind.RANDOM_USEFUL_PEER:
                useful = (held.astype(np.int32) @ missing.T.astype(np.int32)).T > 0
                target, ok = _pick_masked(self.A & useful, keys)
            else:
                target, ok = any_neighbor, has_nbr
            chunk, ok2 = _pick_chunk(held[target] & missing, spec.strategy, rng)
            ok &= ok2
        elif scheme is Scheme.EPIDEMIC:
            chunk, ok = _pick_chunk(missing, spec.strategy, rng)
            target = any_neighbor
        else:
            d = p.split_point
            cand = missing.copy()
            cand[:, : min(d, n - 1)] = False
            chunk, ok = _pick_chunk(cand, StrategyKind.GREEDY, rng)
            target = any_neighbor
        ok &= has_nbr
        who = np.nonzero(ok)[0]
        return np.column_stack((who, target[who], chunk[who])).astype(np.int64)

    def _serve(self, view: np.ndarray, requests: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        U = self.config.params.U
        if requests.size == 0:
            return np.zeros((0, 3), dtype=np.int64), np.zeros(self.config.params.N, dtype=int)
        servable = view[requests[:, 1], requests[:, 2]]
        reqs = requests[servable]
        prio = self.rng.random(len(reqs))
        if self.config.spec.scheme is Scheme.PUSH_PULL:
            # oldest requested chunk first, random among equals
            order = np.lexsort((prio, -reqs[:, 2], reqs[:, 1]))
        else:
            order = np.lexsort((prio, reqs[:, 1]))
        reqs = reqs[order]
        tgt = reqs[:, 1]
        first = np.searchsorted(tgt, tgt, side="left")
        keep = (np.arange(len(reqs)) - first) < U
        served = reqs[keep]
        uploads = np.bincount(served[:, 1], minlength=self.config.params.N)
        return np.column_stack((served[:, 0], served[:, 1], served[:, 2])), uploads

    def _push(self, view: np.ndarray, uploads: np.ndarray) -> np.ndarray:
        p = self.config.params
        limit = min(p.split_point, p.n - 1)
        region = view[:, :limit]
        sender_ok = (uploads == 0) & region.any(axis=1) & (self.deg > 0)
        chunk = region.argmax(axis=1)
        target, _ = _pick_masked(self.A, self.rng.random((p.N, p.N)))
        who = np.nonzero(sender_ok)[0]
        return np.column_stack((target[who], who, chunk[who])).astype(np.int64)

    def step(self, observer: Callable[[SlotRecord], None] | None = None) -> None:
        p = self.config.params
        self.t += 1
        t = self.t
        n = p.n
        self.own[:, t % n] = False
        granted = int(self.rng.integers(p.N))
        self.own[granted, t % n] = True
        cols = self._columns(t)
        view = self.own[:, cols]

        if t > self.config.warmup:
            frac = view.mean(axis=0)
            self.counts += frac
            self.sq += frac * frac
            self.measured += 1

        requests = self._requests(view)
        deliveries, uploads = self._serve(view, requests)
        pushes = np.zeros((0, 3), dtype=np.int64)
        if self.config.spec.scheme is Scheme.PUSH_PULL:
            pushes = self._push(view, uploads)
            deliveries = np.vstack((deliveries, pushes))
        if deliveries.size:
            self.own[deliveries[:, 0], cols[deliveries[:, 2]]] = True

        self.totals["requests"] += len(requests)
        self.totals["deliveries"] += len(deliveries)
        self.totals["pushes"] += len(pushes)
        if observer is not None:
            observer(SlotRecord(t, granted, view, requests, deliveries, pushes))

    def profile(self) -> EmpiricalProfile:
        m = max(self.measured, 1)
        mean = self.counts / m
        var = np.maximum(self.sq / m - mean * mean, 0.0)
        return EmpiricalProfile(mean, np.sqrt(var), self.config.params.N * self.measured)


def run_simulation(
    config: SimConfig,
    topology: Topology | None = None,
    observer: Callable[[SlotRecord], None] | None = None,
) -> SimResult:
    sim = Simulator(config, topology)
    for _ in range(config.slots):
        sim.step(observer)
    return SimResult(sim.profile(), config, sim.topology, **sim.totals)
