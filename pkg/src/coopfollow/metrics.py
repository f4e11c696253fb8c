"""Run metrics and their CSV serialization.

RMSE is computed over the true (ungated) errors of every recorded tick,
so excursions during gaps and operator takeovers count against the run.
The CSV column set and order are fixed; floats serialize with the
shortest round-trip repr for byte-stable output.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .recording import Row, atomic_write_text

CSV_COLUMNS = ("seed", "mode", "rmse_e2", "rmse_e3", "completion_time",
               "path_lost_fraction", "saturation_fraction")


@dataclass(frozen=True)
class Metrics:
    seed: int
    mode: str
    rmse_e2: float
    rmse_e3: float
    completion_time: float
    path_lost_fraction: float
    saturation_fraction: float


def compute_metrics(rows: list[Row], seed: int, mode: str, completion_time: float) -> Metrics:
    if not rows:
        raise ValueError("cannot compute metrics of an empty run record")
    n = len(rows)
    rmse_e2 = math.sqrt(sum(r.e2 * r.e2 for r in rows) / n)
    rmse_e3 = math.sqrt(sum(r.e3 * r.e3 for r in rows) / n)
    lost = sum(1 for r in rows if not r.detected) / n
    sat = sum(1 for r in rows if r.u_saturated or r.cmd_saturated) / n
    return Metrics(seed, mode, rmse_e2, rmse_e3, completion_time, lost, sat)


def summarize_pairs(rows: list[Metrics]) -> dict:
    """Paired MC/CC summary over a batch result.

    Returns per-metric means/medians by mode and the count of seeds
    where CC beat MC (strictly lower RMSE). Raises if any seed is
    missing one of the two modes.
    """
    by_seed: dict[int, dict[str, Metrics]] = {}
    for m in rows:
        by_seed.setdefault(m.seed, {})[m.mode] = m
    pairs = []
    for seed in sorted(by_seed):
        modes = by_seed[seed]
        if set(modes) != {"MC", "CC"}:
            raise ValueError(f"seed {seed} is missing a mode; have {sorted(modes)}")
        pairs.append((modes["CC"], modes["MC"]))
    if not pairs:
        raise ValueError("no paired rows to summarize")
    out: dict = {"pairs": len(pairs)}
    for metric in ("rmse_e2", "rmse_e3"):
        cc = sorted(getattr(p[0], metric) for p in pairs)
        mc = sorted(getattr(p[1], metric) for p in pairs)
        wins = sum(1 for c, m in pairs if getattr(c, metric) < getattr(m, metric))
        out[metric] = {
            "cc_mean": sum(cc) / len(cc),
            "cc_median": statistics.median(cc),
            "mc_mean": sum(mc) / len(mc),
            "mc_median": statistics.median(mc),
            "cc_wins": wins,
            "cc_win_fraction": wins / len(pairs),
        }
    return out


def _cell(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def metrics_csv(rows: list[Metrics]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for m in rows:
        lines.append(",".join(_cell(getattr(m, c)) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def write_metrics_csv(path: str, rows: list[Metrics]) -> None:
    atomic_write_text(path, metrics_csv(rows))
