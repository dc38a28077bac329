"""Per-step measurements and run-level scores."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from statistics import median
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

STEP_HEADER = ("t", "population", "mean_altitude", "best_value", "captured", "epoch")
SUMMARY_HEADER = ("run_id", "seed", "preset", "param", "success_rate", "median_reaction", "final_population")
DEFAULT_EPS = 0.05


@dataclass(frozen=True)
class StepRecord:
    t: int
    population: int
    mean_altitude: float | None
    best_value: float | None
    captured: bool
    epoch: int


@dataclass
class RunSummary:
    success_rate: float
    reaction_times: list[int | None]
    records: list[StepRecord] = field(repr=False)

    @property
    def uncensored_reactions(self) -> list[int]:
        return [r for r in self.reaction_times if r is not None]

    @property
    def censored_count(self) -> int:
        return sum(r is None for r in self.reaction_times)

    @property
    def median_reaction(self) -> float | None:
        done = self.uncensored_reactions
        return float(median(done)) if done else None


def record_step(
    altitudes: NDArray[np.float64],
    t: int,
    optimum_value: float,
    maximize: bool,
    epoch: int = 0,
    eps: float = DEFAULT_EPS,
) -> StepRecord:
    """Summarise the altitudes under the live ants after step ``t``."""
    if len(altitudes) == 0:
        return StepRecord(t, 0, None, None, False, epoch)
    best = float(np.max(altitudes) if maximize else np.min(altitudes))
    captured = bool(abs(best - optimum_value) <= eps)
    return StepRecord(t, len(altitudes), float(np.mean(altitudes)), best, captured, epoch)


def success_rate(records: Sequence[StepRecord]) -> float:
    if not records:
        raise ValueError("success rate of an empty record series is undefined")
    return sum(r.captured for r in records) / len(records)


def reaction_times(records: Sequence[StepRecord], change_steps: Iterable[int]) -> list[int | None]:
    """Steps from each change to the first capture before the next change.

    ``None`` marks a change that was never recaptured (censored).
    """
    changes = sorted(change_steps)
    by_t = {r.t: r for r in records}
    end = max(by_t) + 1 if by_t else 0
    out: list[int | None] = []
    for i, c in enumerate(changes):
        stop = changes[i + 1] if i + 1 < len(changes) else end
        out.append(next((t - c for t in range(c, stop) if t in by_t and by_t[t].captured), None))
    return out


def summarize(records: Sequence[StepRecord], change_steps: Iterable[int]) -> RunSummary:
    return RunSummary(success_rate(records), reaction_times(records, change_steps), list(records))


def _fmt(v: float | None) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{v:.9g}"


def records_to_csv(records: Sequence[StepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STEP_HEADER)
    for r in records:
        w.writerow([r.t, r.population, _fmt(r.mean_altitude), _fmt(r.best_value), int(r.captured), r.epoch])
    return buf.getvalue()


def records_from_csv(text: str) -> list[StepRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != STEP_HEADER:
        raise ValueError(f"unexpected step CSV header {rows.fieldnames}")
    return [
        StepRecord(
            t=int(row["t"]),
            population=int(row["population"]),
            mean_altitude=float(row["mean_altitude"]) if row["mean_altitude"] else None,
            best_value=float(row["best_value"]) if row["best_value"] else None,
            captured=row["captured"] == "1",
            epoch=int(row["epoch"]),
        )
        for row in rows
    ]


def summary_row(run_id: str, seed: int, preset: str, param: float | str, summary: RunSummary) -> list[str]:
    final = summary.records[-1].population if summary.records else 0
    param_s = _fmt(param) if isinstance(param, float) else str(param)
    return [run_id, str(seed), preset, param_s, _fmt(summary.success_rate), _fmt(summary.median_reaction), str(final)]


def summary_to_csv(rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    w.writerows(rows)
    return buf.getvalue()
