"""CSV schemas and atomic writers for experiment outputs.

Floats are written with ``repr`` (shortest round-trip form, '.' decimal,
scientific notation permitted), so identical trajectories serialize to
byte-identical files.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

from ..agd import TrajectoryRecord

TRAJECTORY_COLUMNS = (
    "iter", "f", "rel_loss",
    "sigma1_x", "sigmar_x", "sigma1_y", "sigmar_y",
    "grad_norm_x", "grad_norm_y",
    "balance", "colspan_leak", "envelope",
)

SUMMARY_COLUMNS = (
    "experiment", "scheme", "sigma_r", "seed", "eta", "beta",
    "iters_to_target", "final_rel_loss", "monitor_violations",
)


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    os.replace(tmp, path)
    return path


def trajectory_csv_text(record: TrajectoryRecord, beta: float | None = None) -> str:
    """Serialize a trajectory; the envelope column is 2 f0 exp(-beta t / 4),
    empty when beta is unavailable."""
    f0 = record.f0
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for row in record.stats:
        envelope = (
            2.0 * f0 * math.exp(-beta * row.t / 4.0) if beta is not None else None
        )
        lines.append(",".join((
            str(row.t),
            fmt(row.f), fmt(row.rel_loss),
            fmt(row.sigma1_x), fmt(row.sigmar_x), fmt(row.sigma1_y), fmt(row.sigmar_y),
            fmt(row.grad_norm_x), fmt(row.grad_norm_y),
            fmt(row.balance), fmt(row.colspan_leak),
            fmt(envelope),
        )))
    return "\n".join(lines) + "\n"


def write_trajectory(path: str | Path, record: TrajectoryRecord,
                     beta: float | None = None) -> Path:
    return atomic_write_text(path, trajectory_csv_text(record, beta))


def summary_row(experiment: str, scheme: str, sigma_r: float, seed: int,
                eta: float, beta: float | None, record: TrajectoryRecord) -> str:
    iters = record.iters_to_target()
    return ",".join((
        experiment, scheme, fmt(sigma_r), str(seed), fmt(eta), fmt(beta),
        "" if iters is None else str(iters),
        fmt(record.final.rel_loss),
        str(len(record.violations)),
    ))


def write_summary(path: str | Path, rows: list[str]) -> Path:
    return atomic_write_text(path, "\n".join([",".join(SUMMARY_COLUMNS), *rows]) + "\n")
