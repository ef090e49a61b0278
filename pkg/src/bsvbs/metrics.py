"""Regret curves, bound ratios, hyper-slot power, and savings percentages."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapabilityError, ShapeError, UndefinedSavingsError
from .learner import regret_bound

log = logging.getLogger(__name__)


@dataclass
class RunLog:
    """Per-slot records of one run, stored column-wise.

    ``rows`` is the (T, |X|) counterfactual reward table, kept only when
    regret is requested.
    """

    arms: np.ndarray
    reward: np.ndarray
    raw_reward: np.ndarray
    r_dl: np.ndarray
    r_ul: np.ndarray
    total_w: np.ndarray
    cpu_w: np.ndarray
    rows: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.arms)

    def check(self) -> None:
        if not ((self.reward >= 0.0) & (self.reward <= 1.0)).all():
            raise ShapeError("normalized rewards must lie in [0, 1]")
        if self.rows is not None:
            if self.rows.shape[0] != len(self):
                raise ShapeError("counterfactual rows do not match the run length")
            if not np.array_equal(self.rows[np.arange(len(self)), self.arms], self.reward):
                raise ShapeError("row entry at the chosen arm differs from the delivered reward")


@dataclass
class RegretCurve:
    mean: np.ndarray  # R_t for t = 1..T
    ci: np.ndarray  # 95% normal half-width
    seeds: int

    @property
    def horizon(self) -> int:
        return len(self.mean)

    def at(self, t: int) -> float:
        return float(self.mean[t - 1])


def run_regret(run: RunLog) -> np.ndarray:
    """Prefix-hindsight regret R_t of one run."""
    if run.rows is None:
        raise CapabilityError("regret needs counterfactual reward rows; rerun with rows recorded")
    best = np.cumsum(run.rows, axis=0).max(axis=1)
    return best - np.cumsum(run.reward)


def regret_curve(runs) -> RegretCurve:
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one run")
    curves = np.array([run_regret(r) for r in runs]) if len({len(r) for r in runs}) == 1 else None
    if curves is None:
        raise ShapeError("runs have different horizons")
    n = len(runs)
    mean = curves.mean(axis=0)
    ci = 1.96 * curves.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(mean)
    return RegretCurve(mean, ci, n)


def average_regret(curve: RegretCurve, t: int) -> float:
    if not 1 <= t <= curve.horizon:
        raise ValueError(f"t must lie in [1, {curve.horizon}]")
    return curve.at(t) / t


def bound_ratio(curve: RegretCurve, arm_count: int, horizon: int | None = None) -> float:
    horizon = curve.horizon if horizon is None else horizon
    return curve.at(horizon) / regret_bound(arm_count, horizon)


def hyperslot_power(values, width: int = 200) -> np.ndarray:
    """Mean of ``values`` over consecutive windows; a trailing partial window is dropped."""
    if width < 1:
        raise ValueError("hyper-slot width must be at least 1")
    values = np.asarray(values, dtype=np.float64)
    n = len(values) // width
    if n * width != len(values):
        log.warning("dropping %d trailing slots that do not fill a hyper-slot", len(values) - n * width)
    return values[: n * width].reshape(n, width).mean(axis=1)


def savings_percent(alg_kw: float, ref_kw: float, min_kw: float) -> float:
    """Share of the reference's gap to the minimum that the algorithm closes, in percent."""
    if ref_kw == min_kw:
        raise UndefinedSavingsError("reference equals the minimum; savings undefined")
    return 100.0 * (ref_kw - alg_kw) / (ref_kw - min_kw)


def per_slot_optimal_fraction(run: RunLog, tol: float = 1e-12) -> float:
    """Fraction of slots whose chosen arm attains the row maximum (ties within ``tol`` count)."""
    if run.rows is None:
        raise CapabilityError("needs counterfactual reward rows")
    return float(np.mean(run.reward >= run.rows.max(axis=1) - tol))


def min_fixed_power_kw(rows_power: list) -> float:
    """Lowest cumulative power any single fixed arm would have drawn, averaged over seeds, in kW."""
    return float(np.mean([p.sum(axis=0).min() for p in rows_power])) / 1000.0


# ---------------------------------------------------------------------------
# CSV output

REGRET_HEADER = ["t", "regret_mean", "regret_ci"]
POWER_HEADER = ["hyperslot", "mean_total_w", "mean_cpu_w"]
SUMMARY_HEADER = ["learner", "T", "seeds", "R_T", "R_T_over_T", "bound", "percent_below_bound", "total_kw", "cpu_kw"]
SAVINGS_HEADER = ["min_total_kw", "min_cpu_kw", "saving_total_pct", "saving_cpu_pct"]
RECORD_HEADER = ["t", "arm", "reward", "raw_reward", "r_dl", "r_ul", "total_w", "cpu_w"]


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_regret(path, curve: RegretCurve) -> None:
    write_csv(path, REGRET_HEADER, ((t + 1, m, c) for t, (m, c) in enumerate(zip(curve.mean, curve.ci))))


def write_power(path, total_w, cpu_w, width: int) -> None:
    tot = hyperslot_power(total_w, width)
    cpu = hyperslot_power(cpu_w, width)
    write_csv(path, POWER_HEADER, ((i + 1, a, b) for i, (a, b) in enumerate(zip(tot, cpu))))


def write_records(path, run: RunLog) -> None:
    cols = (run.arms, run.reward, run.raw_reward, run.r_dl, run.r_ul, run.total_w, run.cpu_w)
    write_csv(path, RECORD_HEADER, ((t + 1, int(a), *vals) for t, (a, *vals) in enumerate(zip(*cols))))
