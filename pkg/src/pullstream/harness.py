"""Model and simulation sweeps, model-vs-simulation errors and figure presets."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .model import DiffusionProfile, iterate_profile, playout_metrics, push_pull_profile
from .params import PeerSelectionKind, Scheme, SchemeSpec, StrategyKind, SystemParams
from .sim import EmpiricalProfile, SimConfig, pool_profiles, run_simulation

DESK_PARAMS = SystemParams(N=100, n=40, v=10, U=1)
REPLICATIONS = 5
DEFAULT_TARGET = 0.9
STRATEGIES = (StrategyKind.LATEST_FIRST, StrategyKind.GREEDY, StrategyKind.RANDOM)


@dataclass(frozen=True)
class ErrorSummary:
    mae: float
    max_abs_error: float
    residuals: np.ndarray


@dataclass
class RunReport:
    params: SystemParams
    spec: SchemeSpec
    seeds: tuple[int, ...] = ()
    slots: int | None = None
    warmup: int | None = None
    target: float = DEFAULT_TARGET
    model: DiffusionProfile | None = None
    empirical: EmpiricalProfile | None = None
    playout_probability: float | None = None
    playout_delay: int | None = None
    sim_playout_probability: float | None = None
    errors: ErrorSummary | None = None
    convergence: dict | None = None
    label: str = ""

    def config_echo(self) -> dict:
        p = self.params
        echo = {"N": p.N, "n": p.n, "v": p.v, "U": p.U, "d": p.d, "scheme": self.spec.scheme.value,
                "strategy": self.spec.strategy.value, "peer_selection": self.spec.peer_selection.value,
                "reply_mode": self.spec.reply_mode.value, "target": self.target}
        if self.seeds:
            echo.update(seeds=list(self.seeds), slots=self.slots, warmup=self.warmup)
        return echo


def _values(profile) -> np.ndarray:
    if isinstance(profile, (DiffusionProfile, EmpiricalProfile)):
        return np.asarray(profile.values, dtype=float)
    return np.asarray(profile, dtype=float)


def compare(model, empirical) -> ErrorSummary:
    a, b = _values(model), _values(empirical)
    if a.shape != b.shape:
        raise ValueError(f"profile lengths differ: {a.size} vs {b.size}")
    res = a - b
    return ErrorSummary(float(np.mean(np.abs(res))), float(np.max(np.abs(res))), res)


def model_profile(params: SystemParams, spec: SchemeSpec) -> tuple[DiffusionProfile, dict]:
    if spec.scheme is Scheme.PUSH_PULL:
        run = push_pull_profile(params)
        return run.profile, {"iterations": run.iterations, "residual": run.residual, "d": run.split_point}
    run = iterate_profile(params, spec)
    return run.profile, {"sweeps": run.sweeps, "residual": run.residual}


def simulate(params: SystemParams, spec: SchemeSpec, seeds: Sequence[int], slots: int, warmup: int) -> EmpiricalProfile:
    runs = [run_simulation(SimConfig(params, spec, slots, warmup, s)).profile for s in seeds]
    return pool_profiles(runs)


def run_point(
    params: SystemParams,
    spec: SchemeSpec,
    *,
    model: bool = True,
    seeds: Sequence[int] = (),
    slots: int = 2500,
    warmup: int = 500,
    target: float = DEFAULT_TARGET,
    label: str = "",
) -> RunReport:
    """Model and/or pooled simulation at one parameter point; simulation runs iff ``seeds``."""
    report = RunReport(params, spec, tuple(seeds), slots if seeds else None, warmup if seeds else None, target,
                       label=label or spec.label)
    if model:
        report.model, report.convergence = model_profile(params, spec)
        report.playout_probability, report.playout_delay = playout_metrics(report.model, target)
    if seeds:
        report.empirical = simulate(params, spec, seeds, slots, warmup)
        report.sim_playout_probability = report.empirical.playout_probability
        if not model:
            report.playout_probability, report.playout_delay = playout_metrics(report.empirical.values, target)
    if report.model is not None and report.empirical is not None:
        report.errors = compare(report.model, report.empirical)
    return report


class SweepParameter(str, Enum):
    NEIGHBOR_COUNT = "neighbor_count"
    REPLY_NUMBER = "reply_number"
    SPLIT_POINT = "split_point"
    PLAYOUT_DELAY_TARGET = "playout_delay_target"


@dataclass(frozen=True)
class SweepSpec:
    parameter: SweepParameter
    values: tuple
    base: SimConfig
    run_model: bool = True
    seeds: tuple[int, ...] = ()
    target: float = DEFAULT_TARGET

    def __post_init__(self):
        object.__setattr__(self, "parameter", SweepParameter(self.parameter))
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("sweep needs at least one value")
        for v in self.values:
            self.point(v)

    def point(self, value) -> tuple[SystemParams, SchemeSpec, float]:
        params, spec, target = self.base.params, self.base.spec, self.target
        if self.parameter is SweepParameter.NEIGHBOR_COUNT:
            params = params.with_(v=int(value))
        elif self.parameter is SweepParameter.REPLY_NUMBER:
            params = params.with_(U=int(value))
            spec = SchemeSpec.for_reply_number(spec.scheme, spec.strategy, spec.peer_selection, int(value))
        elif self.parameter is SweepParameter.SPLIT_POINT:
            params = params.with_(d=int(value))
        else:
            target = float(value)
            if not 0.0 <= target <= 1.0:
                raise ValueError(f"playout delay target must lie in [0, 1], got {value}")
        return params, spec, target


def _sweep_point(args):
    sweep_spec, value = args
    params, spec, target = sweep_spec.point(value)
    base = sweep_spec.base
    return run_point(params, spec, model=sweep_spec.run_model, seeds=sweep_spec.seeds, slots=base.slots,
                     warmup=base.warmup, target=target, label=f"{sweep_spec.parameter.value}={value}")


def sweep(spec: SweepSpec, workers: int = 1) -> list[RunReport]:
    """One report per swept value, in the order given."""
    jobs = [(spec, v) for v in spec.values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


PRESETS = ("fig3", "fig4a", "fig4b", "fig5", "fig6", "fig7a", "fig7b")
NEIGHBOR_SWEEP = tuple(range(4, 31, 2))
REPLY_SWEEP = tuple(range(1, 7))


def _peer_selection(scheme: Scheme) -> PeerSelectionKind:
    return PeerSelectionKind.RANDOM_PEER if scheme is Scheme.EPIDEMIC else PeerSelectionKind.RANDOM_USEFUL_PEER


def preset_seeds(name: str, replications: int = REPLICATIONS) -> tuple[int, ...]:
    return tuple(PRESETS.index(name) * 100 + k for k in range(replications))


def figure_preset(
    name: str,
    *,
    simulate_runs: bool = True,
    replications: int = REPLICATIONS,
    slots: int = 2500,
    warmup: int = 500,
    params: SystemParams = DESK_PARAMS,
) -> list[RunReport]:
    """Reports reproducing one figure. CF/PF use random useful peer selection, EP random peer."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    seeds = preset_seeds(name, replications) if simulate_runs else ()
    point = dict(slots=slots, warmup=warmup)
    reports: list[RunReport] = []

    def spec_for(scheme, strategy, U=1):
        return SchemeSpec.for_reply_number(scheme, strategy, _peer_selection(Scheme(scheme)), U)

    if name in ("fig3", "fig5"):
        U = 1 if name == "fig3" else 4
        schemes = (Scheme.PEER_FIRST, Scheme.CHUNK_FIRST, Scheme.EPIDEMIC) if U == 1 else (Scheme.PEER_FIRST, Scheme.CHUNK_FIRST)
        for strategy in STRATEGIES:
            for scheme in schemes:
                reports.append(run_point(params.with_(U=U), spec_for(scheme, strategy, U), seeds=seeds, **point))
    elif name == "fig4a":
        for scheme in (Scheme.CHUNK_FIRST, Scheme.PEER_FIRST):
            for strategy in STRATEGIES:
                reports.append(run_point(params, spec_for(scheme, strategy)))
    elif name in ("fig4b", "fig6"):
        parameter = SweepParameter.NEIGHBOR_COUNT if name == "fig4b" else SweepParameter.REPLY_NUMBER
        values = NEIGHBOR_SWEEP if name == "fig4b" else REPLY_SWEEP
        for scheme in (Scheme.CHUNK_FIRST, Scheme.PEER_FIRST):
            for strategy in STRATEGIES:
                base = SimConfig(params, spec_for(scheme, strategy), slots, warmup)
                for r in sweep(SweepSpec(parameter, values, base)):
                    r.label = f"{r.spec.scheme.value}-{strategy.value} {r.label}"
                    reports.append(r)
    elif name == "fig7a":
        base = SimConfig(params.with_(d=1), SchemeSpec(Scheme.PUSH_PULL), slots, warmup)
        reports.extend(sweep(SweepSpec(SweepParameter.SPLIT_POINT, tuple(range(1, params.n + 1)), base)))
    else:
        for d, label in ((params.n, "push"), (min(20, params.n), "pushpull d=20")):
            reports.append(run_point(params.with_(d=d), SchemeSpec(Scheme.PUSH_PULL), seeds=seeds, label=label, **point))
    return reports


def relative_gain(reports: list[RunReport]) -> float:
    """Relative playout gain of the second report over the first (fig7b: push-pull over push)."""
    base, other = reports[0].playout_probability, reports[1].playout_probability
    return other / base - 1.0
