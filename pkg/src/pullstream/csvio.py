"""CSV writers/readers: 6 decimals, LF line endings, UTF-8."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

PRECISION = 6


def _fmt(x: float) -> str:
    return f"{x:.{PRECISION}f}"


def _render(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def model_csv(values) -> str:
    return _render(["position", "probability"], ([i, _fmt(p)] for i, p in enumerate(values, 1)))


def sim_csv(values, stddev, samples: int) -> str:
    return _render(
        ["position", "probability", "stddev", "samples"],
        ([i, _fmt(p), _fmt(s), samples] for i, (p, s) in enumerate(zip(values, stddev), 1)),
    )


def errors_csv(mae: float, max_abs_error: float) -> str:
    return _render(["metric", "value"], [["mae", _fmt(mae)], ["max_abs_error", _fmt(max_abs_error)]])


def table_csv(header: list[str], rows) -> str:
    return _render(header, ([_fmt(x) if isinstance(x, float) else ("" if x is None else x) for x in r] for r in rows))


def write_text(path: Path, text: str, force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_profile_csv(path) -> dict[str, np.ndarray]:
    """Columns of a model or simulation profile CSV, keyed by header name."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return {}
    return {key: np.array([float(r[key]) for r in rows]) for key in rows[0]}
