"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 runtime failure (e.g. a solver that
does not converge).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import csvio
from .harness import (
    DEFAULT_TARGET,
    PRESETS,
    REPLICATIONS,
    RunReport,
    SweepParameter,
    SweepSpec,
    figure_preset,
    relative_gain,
    run_point,
    sweep,
)
from .model import ConvergenceError
from .params import SchemeSpec, SystemParams, parse_reply_mode
from .sim import SimConfig

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

# key -> (type, default); keys double as config-file keys
SETTINGS = {
    "N": (int, 100),
    "n": (int, 40),
    "v": (int, 10),
    "U": (int, 1),
    "d": (int, None),
    "scheme": (str, "pf"),
    "strategy": (str, "latest"),
    "peer_selection": (str, "random"),
    "reply_mode": (str, None),
    "slots": (int, 2500),
    "warmup": (int, 500),
    "seed": (int, 0),
    "replications": (int, REPLICATIONS),
    "target": (float, DEFAULT_TARGET),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def read_config_file(path) -> dict:
    """Flat ``key = value`` pairs, one per line, ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in SETTINGS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _add_settings(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value settings file; flags override it")
    p.add_argument("-N", dest="N", help="overlay size")
    p.add_argument("-n", dest="n", help="buffer size")
    p.add_argument("-v", dest="v", help="neighbor count")
    p.add_argument("-U", dest="U", help="reply number")
    p.add_argument("-d", dest="d", help="push-pull split point")
    p.add_argument("--scheme", help="cf|pf|ep|pushpull")
    p.add_argument("--strategy", help="latest|greedy|random")
    p.add_argument("--peer-selection", dest="peer_selection", help="random|useful")
    p.add_argument("--reply-mode", dest="reply_mode", help="single|multi (default: single iff U=1)")
    p.add_argument("--slots", help="simulated slots including warmup")
    p.add_argument("--warmup", help="slots discarded before sampling")
    p.add_argument("--seed", help="first simulation seed")
    p.add_argument("--replications", help="simulation seeds per point")
    p.add_argument("--target", help="presence probability defining the playout delay")
    p.add_argument("--out", default="out", help="output directory (created if absent)")
    p.add_argument("--force", action="store_true", help="overwrite existing files")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pullstream", description="Pull-based P2P live streaming models and simulator.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, text in (("model", "iterate the diffusion model"), ("sim", "run the slot simulator"),
                       ("compare", "run model and simulator and compare them")):
        _add_settings(sub.add_parser(name, help=text))
    sw = sub.add_parser("sweep", help="sweep one parameter")
    _add_settings(sw)
    sw.add_argument("--param", required=True, choices=[p.value for p in SweepParameter])
    sw.add_argument("--values", required=True, help="comma-separated values")
    sw.add_argument("--simulate", action="store_true", help="also simulate each point")
    pr = sub.add_parser("preset", help="reproduce a figure")
    pr.add_argument("name", choices=PRESETS)
    pr.add_argument("--no-sim", action="store_true", help="skip simulation runs")
    pr.add_argument("--replications", type=int, default=REPLICATIONS)
    pr.add_argument("--slots", type=int, default=2500)
    pr.add_argument("--warmup", type=int, default=500)
    pr.add_argument("--out", default="out")
    pr.add_argument("--force", action="store_true")
    return parser


def resolve_settings(args: argparse.Namespace) -> dict:
    raw = {key: default for key, (_, default) in SETTINGS.items()}
    if args.config:
        try:
            raw.update(read_config_file(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
    for key in SETTINGS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    out = {}
    for key, (typ, _) in SETTINGS.items():
        value = raw[key]
        if value is None or value == "":
            out[key] = None
            continue
        try:
            out[key] = typ(value)
        except ValueError:
            raise UsageError(f"{key} must be {typ.__name__}, got {value!r}") from None
    return out


def build_inputs(s: dict) -> tuple[SystemParams, SchemeSpec]:
    try:
        params = SystemParams(N=s["N"], n=s["n"], v=s["v"], U=s["U"], d=s["d"])
        if s["reply_mode"] is None:
            spec = SchemeSpec.for_reply_number(s["scheme"], s["strategy"], s["peer_selection"], params.U)
        else:
            spec = SchemeSpec(s["scheme"], s["strategy"], s["peer_selection"], parse_reply_mode(s["reply_mode"]))
        SimConfig(params, spec, s["slots"], s["warmup"], s["seed"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if s["replications"] < 1:
        raise UsageError("replications must be >= 1")
    if not 0.0 <= s["target"] <= 1.0:
        raise UsageError("target must lie in [0, 1]")
    return params, spec


def _seeds(s: dict) -> tuple[int, ...]:
    return tuple(s["seed"] + k for k in range(s["replications"]))


def write_report(report: RunReport, out: Path, stem: str, force: bool) -> list[Path]:
    written = []
    if report.model is not None:
        written.append(csvio.write_text(out / f"{stem}model.csv", csvio.model_csv(report.model.values), force))
    if report.empirical is not None:
        e = report.empirical
        written.append(csvio.write_text(out / f"{stem}sim.csv", csvio.sim_csv(e.values, e.stddev, e.sample_count), force))
    if report.errors is not None:
        text = csvio.errors_csv(report.errors.mae, report.errors.max_abs_error)
        written.append(csvio.write_text(out / f"{stem}errors.csv", text, force))
    return written


def summary_line(report: RunReport) -> str:
    parts = [report.label or report.spec.label]
    if report.playout_probability is not None:
        parts.append(f"playout={report.playout_probability:.6f}")
        parts.append(f"delay@{report.target:g}={report.playout_delay if report.playout_delay is not None else 'never'}")
    if report.sim_playout_probability is not None:
        parts.append(f"sim_playout={report.sim_playout_probability:.6f}")
    if report.errors is not None:
        parts.append(f"mae={report.errors.mae:.6f} max={report.errors.max_abs_error:.6f}")
    if report.convergence and "iterations" in report.convergence:
        parts.append(f"iterations={report.convergence['iterations']} residual={report.convergence['residual']:.3g}")
    return "  ".join(parts)


INDEX_HEADER = ["point", "label", "value", "playout_probability", "playout_delay", "sim_playout_probability",
                "mae", "model_csv", "sim_csv"]


def _index_row(k: int, report: RunReport, value, stem: str) -> list:
    return [k, report.label, value, report.playout_probability, report.playout_delay,
            report.sim_playout_probability, report.errors.mae if report.errors else None,
            f"{stem}model.csv" if report.model is not None else None,
            f"{stem}sim.csv" if report.empirical is not None else None]


def _check_free(paths: list[Path], force: bool) -> None:
    if force:
        return
    for p in paths:
        if p.exists():
            raise FileExistsError(f"{p} exists; pass --force to overwrite")


def _run(args) -> int:
    if args.command == "preset":
        out = Path(args.out)
        _check_free([out / f"{args.name}_index.csv"], args.force)
        reports = figure_preset(args.name, simulate_runs=not args.no_sim, replications=args.replications,
                                slots=args.slots, warmup=args.warmup)
        rows = []
        for k, r in enumerate(reports):
            stem = f"{args.name}_{k:02d}_"
            write_report(r, out, stem, args.force)
            rows.append(_index_row(k, r, r.label, stem))
            print(summary_line(r))
        csvio.write_text(out / f"{args.name}_index.csv", csvio.table_csv(INDEX_HEADER, rows), args.force)
        if args.name == "fig7b":
            print(f"push-pull relative improvement over push: {100 * relative_gain(reports):.2f}%")
        return EXIT_OK

    s = resolve_settings(args)
    params, spec = build_inputs(s)
    if args.command != "sim" and params.v < 1:
        raise UsageError("the model needs neighbor count v >= 1")
    out = Path(args.out)
    if args.command == "sweep":
        try:
            values = [float(x) if args.param == "playout_delay_target" else int(x) for x in args.values.split(",")]
            sweep_spec = SweepSpec(args.param, values, SimConfig(params, spec, s["slots"], s["warmup"], s["seed"]),
                                   seeds=_seeds(s) if args.simulate else (), target=s["target"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _check_free([out / "index.csv"], args.force)
        rows = []
        for k, (value, r) in enumerate(zip(values, sweep(sweep_spec))):
            stem = f"point_{k:02d}_"
            write_report(r, out, stem, args.force)
            rows.append(_index_row(k, r, value, stem))
            print(summary_line(r))
        csvio.write_text(out / "index.csv", csvio.table_csv(INDEX_HEADER, rows), args.force)
        return EXIT_OK

    want_model = args.command in ("model", "compare")
    seeds = _seeds(s) if args.command in ("sim", "compare") else ()
    names = (["model.csv"] if want_model else []) + (["sim.csv"] if seeds else [])
    if want_model and seeds:
        names.append("errors.csv")
    _check_free([out / f for f in names], args.force)
    report = run_point(params, spec, model=want_model, seeds=seeds, slots=s["slots"], warmup=s["warmup"],
                       target=s["target"])
    for path in write_report(report, out, "", args.force):
        print(f"wrote {path}")
    print(summary_line(report))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage() + "pullstream: error: a subcommand is required")
        return _run(args)
    except (UsageError, FileExistsError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


dispatch = main

if __name__ == "__main__":
    sys.exit(main())
