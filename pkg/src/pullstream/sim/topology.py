from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Topology:
    """Undirected mesh as per-peer sorted neighbor tuples."""

    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for peer, nbrs in enumerate(self.adjacency):
            if peer in nbrs:
                raise ValueError(f"self-loop at peer {peer}")
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate edge at peer {peer}")
            for q in nbrs:
                if peer not in self.adjacency[q]:
                    raise ValueError(f"edge {peer}-{q} is not symmetric")

    @classmethod
    def empty(cls, N: int) -> "Topology":
        return cls(tuple(() for _ in range(N)))

    @property
    def size(self) -> int:
        return len(self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(n) for n in self.adjacency], dtype=int)

    @property
    def mean_degree(self) -> float:
        return float(self.degrees.mean()) if self.size else 0.0

    @cached_property
    def matrix(self) -> np.ndarray:
        A = np.zeros((self.size, self.size), dtype=bool)
        for peer, nbrs in enumerate(self.adjacency):
            A[peer, list(nbrs)] = True
        return A

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, nbrs in enumerate(self.adjacency) for b in nbrs if a < b]


def build_topology(N: int, v: int, seed: int, retry_budget: int | None = None) -> Topology:
    """Random graph in which every peer aims for ``v`` neighbors.

    Two distinct degree-deficient peers are paired at random until nobody is
    deficient or ``retry_budget`` draws have hit an existing edge; whoever is still
    short of ``v`` keeps the lower degree.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if v < 0 or (v > 0 and v >= N):
        raise ValueError(f"infeasible topology: need 0 <= v <= N-1, got v={v}, N={N}")
    rng = np.random.default_rng(seed)
    budget = retry_budget if retry_budget is not None else 20 * N * max(v, 1)
    nbrs: list[set[int]] = [set() for _ in range(N)]
    deficient = list(range(N)) if v > 0 else []
    misses = 0
    while len(deficient) >= 2 and misses < budget:
        a, b = rng.choice(len(deficient), size=2, replace=False)
        pa, pb = deficient[a], deficient[b]
        if pb in nbrs[pa]:
            misses += 1
            if all(q in nbrs[p] for i, p in enumerate(deficient) for q in deficient[i + 1:]):
                break
            continue
        nbrs[pa].add(pb)
        nbrs[pb].add(pa)
        deficient = [p for p in deficient if len(nbrs[p]) < v]
    return Topology(tuple(tuple(sorted(s)) for s in nbrs))
