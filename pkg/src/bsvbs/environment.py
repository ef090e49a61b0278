"""Slot contexts, the surrogate vBS model, and measurement traces.

The surrogate stands in for the testbed: delivered data is the demand
capped by an airtime- and MCS-limited capacity, and CPU power grows with
delivered load, more steeply at poor channel quality. Coefficients are
desk-calibrated, not measured.
"""

from __future__ import annotations

import csv
import itertools
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import ConfigError, IncompleteTraceError, TraceParseError
from .reward import UTILITY_MAX, PowerReading, RewardScaler, TrafficOutcome, normalize_array, raw_reward
from .rng import ENV_STREAM, NOISE_STREAM, SplitMix64
from .space import ConfigurationSpace, RadioPolicy

log = logging.getLogger(__name__)

TRACE_HEADER = ["bucket", "arm", "r_dl_mbit", "r_ul_mbit", "p_total_w", "p_cpu_w"]
BUCKETINGS = ("regime", "cqi")


class SlotContext(NamedTuple):
    d_dl: float
    d_ul: float
    cqi_dl: int
    cqi_ul: int


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str = "B"
    high_demand_dl: tuple = (29.0, 32.0)
    high_demand_ul: tuple = (20.0, 23.0)
    low_demand: tuple = (0.01, 1.0)
    high_cqi: tuple = (13, 15)
    low_cqi: tuple = (1, 3)

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ConfigError(f"scenario must be 'A' or 'B', got {self.kind!r}")
        for name in ("high_demand_dl", "high_demand_ul", "low_demand", "high_cqi", "low_cqi"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigError(f"{name} bounds out of order: {(lo, hi)}")
        if self.low_demand[1] >= min(self.high_demand_dl[0], self.high_demand_ul[0]):
            raise ConfigError("low demand range overlaps the high ranges")
        if self.low_cqi[1] >= self.high_cqi[0]:
            raise ConfigError("low CQI range overlaps the high range")

    def regime(self, t: int) -> str:
        if self.kind == "A":
            return "high"
        return "high" if t % 2 == 1 else "low"

    def midpoint(self, regime: str) -> SlotContext:
        if regime == "high":
            d_dl = sum(self.high_demand_dl) / 2
            d_ul = sum(self.high_demand_ul) / 2
            cqi = self.high_cqi
        else:
            d_dl = d_ul = sum(self.low_demand) / 2
            cqi = self.low_cqi
        c = (cqi[0] + cqi[1]) // 2
        return SlotContext(d_dl, d_ul, c, c)

    def classify(self, ctx: SlotContext) -> str:
        """Regime label of a context (CQI threshold halfway between the boxes)."""
        return "high" if 2 * ctx.cqi_dl > self.low_cqi[1] + self.high_cqi[0] else "low"


def next_context(spec: ScenarioSpec, t: int, rng: SplitMix64) -> SlotContext:
    if t < 1:
        raise ValueError("slots are numbered from 1")
    if spec.regime(t) == "high":
        d_dl = rng.uniform(*spec.high_demand_dl)
        d_ul = rng.uniform(*spec.high_demand_ul)
        cqi = spec.high_cqi
    else:
        d_dl = rng.uniform(*spec.low_demand)
        d_ul = rng.uniform(*spec.low_demand)
        cqi = spec.low_cqi
    return SlotContext(d_dl, d_ul, rng.integers(*cqi), rng.integers(*cqi))


def draw_contexts(spec: ScenarioSpec, horizon: int, seed: int, midpoint: bool = False) -> np.ndarray:
    """Contexts for slots 1..horizon as a (T, 4) float array."""
    out = np.empty((horizon, 4))
    if midpoint:
        mids = {r: spec.midpoint(r) for r in ("high", "low")}
        for i in range(horizon):
            out[i] = mids[spec.regime(i + 1)]
        return out
    rng = SplitMix64.for_stream(seed, ENV_STREAM)
    for i in range(horizon):
        out[i] = next_context(spec, i + 1, rng)
    return out


@dataclass(frozen=True)
class SurrogateModel:
    cap_dl: float = 32.0
    cap_ul: float = 23.0
    p0_cpu: float = 4.0
    kappa_dl: float = 0.1
    kappa_ul: float = 8.0
    eta: float = 0.5
    p0_rf: float = 7.0
    beta_tx: float = 0.3
    tx_max: float = 20.0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f"surrogate coefficient {f.name} must be non-negative")
        if self.cap_dl <= 0 or self.cap_ul <= 0 or self.tx_max <= 0:
            raise ConfigError("capacities and tx_max must be positive")

    @classmethod
    def from_mapping(cls, data, space: ConfigurationSpace | None = None) -> "SurrogateModel":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown env.model keys: {sorted(unknown)}")
        kw = {k: float(v) for k, v in data.items()}
        if space is not None and "tx_max" not in kw:
            kw["tx_max"] = space.tx_max
        return cls(**kw)

    def coeffs(self) -> np.ndarray:
        return np.array([self.cap_dl, self.cap_ul, self.p0_cpu, self.kappa_dl,
                         self.kappa_ul, self.eta, self.p0_rf, self.beta_tx])


def _tables(model: SurrogateModel, contexts: np.ndarray, policies: np.ndarray):
    return kernels.surrogate_table(
        np.ascontiguousarray(contexts, dtype=np.float64),
        np.ascontiguousarray(policies, dtype=np.float64),
        model.coeffs(),
        model.tx_max,
    )


def evaluate(model: SurrogateModel, ctx: SlotContext, policy: RadioPolicy) -> tuple[TrafficOutcome, PowerReading]:
    _, r_dl, r_ul, total, cpu = _tables(model, np.array([ctx], dtype=np.float64), np.array([policy], dtype=np.float64))
    outcome = TrafficOutcome(float(r_dl[0, 0]), float(r_ul[0, 0]), float(ctx.d_dl), float(ctx.d_ul))
    return outcome, PowerReading(float(total[0, 0]), float(cpu[0, 0]))


def reachable_regimes(spec: ScenarioSpec) -> tuple:
    return ("high",) if spec.kind == "A" else ("high", "low")


def power_extrema(model: SurrogateModel, spec: ScenarioSpec, space: ConfigurationSpace,
                  midpoint: bool = False) -> dict:
    """Exact min/max power over every arm and every context the scenario can draw.

    Power is non-decreasing in delivered data, which is non-decreasing in
    demand, so the demand-range endpoints with every CQI pair suffice. With
    ``midpoint`` only the regime-midpoint contexts are considered.
    """
    corners = []
    for regime in reachable_regimes(spec):
        if midpoint:
            corners.append(spec.midpoint(regime))
            continue
        if regime == "high":
            dls, uls, cqi = spec.high_demand_dl, spec.high_demand_ul, spec.high_cqi
        else:
            dls, uls, cqi = spec.low_demand, spec.low_demand, spec.low_cqi
        cqis = range(cqi[0], cqi[1] + 1)
        corners += itertools.product(dls, uls, cqis, cqis)
    _, _, _, total, cpu = _tables(model, np.array(corners, dtype=np.float64), space.policy_matrix())
    return {"total": (float(total.min()), float(total.max())), "cpu": (float(cpu.min()), float(cpu.max()))}


# ---------------------------------------------------------------------------
# traces


@dataclass
class TraceTable:
    rows: dict  # (bucket, arm) -> (r_dl, r_ul, total_w, cpu_w)
    bucketing: str = "regime"
    duplicates: int = 0

    @property
    def buckets(self) -> list:
        return sorted({b for b, _ in self.rows})

    def __len__(self) -> int:
        return len(self.rows)

    def check_complete(self, arm_count: int, buckets=None) -> None:
        buckets = self.buckets if buckets is None else buckets
        missing = [(b, a) for b in buckets for a in range(arm_count) if (b, a) not in self.rows]
        if missing:
            raise IncompleteTraceError(missing)

    def power_range(self, source: str, buckets=None) -> tuple[float, float]:
        col = 2 if source == "total" else 3
        vals = [v[col] for (b, _), v in self.rows.items() if buckets is None or b in buckets]
        if not vals:
            raise IncompleteTraceError([(b, 0) for b in buckets])
        return min(vals), max(vals)


def bucket_label(ctx, spec: ScenarioSpec, bucketing: str) -> str:
    if bucketing == "regime":
        return spec.classify(SlotContext(*ctx))
    return f"c{int(ctx[2])}-{int(ctx[3])}"


def load_trace(path, arm_count: int | None = None, bucketing: str = "regime") -> TraceTable:
    """Read and validate a trace CSV.

    Duplicate keys keep the last row and are counted in ``duplicates``.
    With ``arm_count`` given, every (bucket, arm) pair must be present.
    """
    path = Path(path)
    rows = {}
    dupes = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TRACE_HEADER:
            raise TraceParseError(path, 1, f"expected header {','.join(TRACE_HEADER)}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(TRACE_HEADER):
                raise TraceParseError(path, lineno, f"expected {len(TRACE_HEADER)} fields, got {len(rec)}")
            bucket = rec[0].strip()
            if not bucket:
                raise TraceParseError(path, lineno, "empty bucket label")
            try:
                arm = int(rec[1])
                vals = tuple(float(c) for c in rec[2:])
            except ValueError as exc:
                raise TraceParseError(path, lineno, str(exc)) from None
            if arm < 0 or any(not np.isfinite(v) or v < 0 for v in vals):
                raise TraceParseError(path, lineno, "arm and measurements must be non-negative")
            if vals[3] > vals[2]:
                raise TraceParseError(path, lineno, "CPU power exceeds total power")
            if (bucket, arm) in rows:
                dupes += 1
                log.warning("%s:%d: duplicate (%s, %d), keeping the later row", path, lineno, bucket, arm)
            rows[(bucket, arm)] = vals
    table = TraceTable(rows, bucketing, dupes)
    if arm_count is not None:
        table.check_complete(arm_count)
    return table


def write_trace(path, rows) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for bucket, arm, r_dl, r_ul, total, cpu in rows:
            w.writerow([bucket, arm, repr(r_dl), repr(r_ul), repr(total), repr(cpu)])


def surrogate_trace_rows(model: SurrogateModel, spec: ScenarioSpec, space: ConfigurationSpace, bucketing: str = "regime"):
    """Trace rows for every (bucket, arm), evaluated at bucket-midpoint contexts."""
    policies = space.policy_matrix()
    if bucketing == "regime":
        mids = [(r, spec.midpoint(r)) for r in ("high", "low")]
    else:
        mids = []
        for regime in ("high", "low"):
            mid = spec.midpoint(regime)
            cqi = spec.high_cqi if regime == "high" else spec.low_cqi
            for cd, cu in itertools.product(range(cqi[0], cqi[1] + 1), repeat=2):
                ctx = SlotContext(mid.d_dl, mid.d_ul, cd, cu)
                mids.append((bucket_label(ctx, spec, "cqi"), ctx))
    out = []
    for label, ctx in mids:
        _, r_dl, r_ul, total, cpu = _tables(model, np.array([ctx], dtype=np.float64), policies)
        for arm in range(len(policies)):
            out.append((label, arm, float(r_dl[0, arm]), float(r_ul[0, arm]), float(total[0, arm]), float(cpu[0, arm])))
    return out


# ---------------------------------------------------------------------------
# environment facade used by the harness


@dataclass
class Outcomes:
    """Per-slot, per-arm evaluation of a context sequence; all arrays (T, |X|)."""

    utility: np.ndarray
    r_dl: np.ndarray
    r_ul: np.ndarray
    total_w: np.ndarray
    cpu_w: np.ndarray

    def power(self, source: str) -> np.ndarray:
        return self.total_w if source == "total" else self.cpu_w


@dataclass
class Environment:
    space: ConfigurationSpace
    spec: ScenarioSpec = field(default_factory=ScenarioSpec)
    model: SurrogateModel | None = None
    trace: TraceTable | None = None
    noise: float = 0.0
    midpoint_contexts: bool = False

    def __post_init__(self):
        if (self.model is None) == (self.trace is None):
            raise ConfigError("environment needs exactly one of a surrogate model or a trace")
        if not 0.0 <= self.noise < 1.0:
            raise ConfigError("noise amplitude must lie in [0, 1)")
        if self.trace is not None:
            self.trace.check_complete(len(self.space))

    @property
    def mode(self) -> str:
        return "surrogate" if self.model is not None else "trace"

    def contexts(self, horizon: int, seed: int) -> np.ndarray:
        return draw_contexts(self.spec, horizon, seed, self.midpoint_contexts)

    def reachable_buckets(self) -> list:
        """Trace buckets the scenario can visit."""
        regimes = reachable_regimes(self.spec)
        if self.trace.bucketing == "regime":
            return [b for b in self.trace.buckets if b in regimes]
        out = []
        for b in self.trace.buckets:
            cqi_dl, cqi_ul = (int(c) for c in b[1:].split("-"))
            if self.spec.classify(SlotContext(1.0, 1.0, cqi_dl, cqi_ul)) in regimes:
                out.append(b)
        return out

    def outcomes(self, contexts: np.ndarray, seed: int = 0) -> Outcomes:
        if self.model is not None:
            out = Outcomes(*_tables(self.model, contexts, self.space.policy_matrix()))
        else:
            out = self._trace_outcomes(contexts)
        if self.noise > 0.0:
            out = self._add_noise(out, contexts, seed)
        return out

    def _trace_outcomes(self, contexts: np.ndarray) -> Outcomes:
        import math

        T, K = contexts.shape[0], len(self.space)
        arrays = [np.empty((T, K)) for _ in range(5)]
        util, r_dl_a, r_ul_a, tot_a, cpu_a = arrays
        rows = self.trace.rows
        for i, ctx in enumerate(contexts.tolist()):
            bucket = bucket_label(ctx, self.spec, self.trace.bucketing)
            d_dl, d_ul = ctx[0], ctx[1]
            for arm in range(K):
                try:
                    r_dl, r_ul, tot, cpu = rows[(bucket, arm)]
                except KeyError:
                    raise IncompleteTraceError([(bucket, arm)]) from None
                r_dl = min(d_dl, r_dl)
                r_ul = min(d_ul, r_ul)
                if d_dl > 0.0 and d_ul > 0.0:
                    u = math.log(1.0 + r_dl / d_dl) + math.log(1.0 + r_ul / d_ul)
                else:
                    u = 0.0
                util[i, arm] = u
                r_dl_a[i, arm] = r_dl
                r_ul_a[i, arm] = r_ul
                tot_a[i, arm] = tot
                cpu_a[i, arm] = cpu
        return Outcomes(*arrays)

    def _add_noise(self, out: Outcomes, contexts: np.ndarray, seed: int) -> Outcomes:
        # zero-mean uniform multiplicative noise, one factor per (slot, arm, quantity)
        rng = SplitMix64.for_stream(seed, NOISE_STREAM)
        T, K = out.r_dl.shape
        u = np.array([rng.random() for _ in range(T * K * 3)]).reshape(3, T, K)
        fac = 1.0 + self.noise * (2.0 * u - 1.0)
        d_dl = contexts[:, :1]
        d_ul = contexts[:, 1:2]
        r_dl = np.minimum(out.r_dl * fac[0], d_dl)
        r_ul = np.minimum(out.r_ul * fac[1], d_ul)
        cpu = out.cpu_w * fac[2]
        total = out.total_w - out.cpu_w + cpu
        with np.errstate(divide="ignore", invalid="ignore"):
            util = np.where((d_dl > 0) & (d_ul > 0), np.log1p(r_dl / d_dl) + np.log1p(r_ul / d_ul), 0.0)
        return Outcomes(util, r_dl, r_ul, total, cpu)

    def power_range(self, source: str) -> tuple[float, float]:
        if self.trace is not None:
            lo, hi = self.trace.power_range(source, self.reachable_buckets())
            cpu_hi = self.trace.power_range("cpu", self.reachable_buckets())[1]
        else:
            ext = power_extrema(self.model, self.spec, self.space, self.midpoint_contexts)
            lo, hi = ext[source]
            cpu_hi = ext["cpu"][1]
        if self.noise > 0.0:
            # the noisy CPU share can swing either way by the noise amplitude
            lo -= self.noise * cpu_hi
            hi += self.noise * cpu_hi
            lo = max(lo, 0.0)
        return lo, hi

    def scaler(self, delta: float, power_source: str = "total", f_min=None, f_max=None) -> RewardScaler:
        from .reward import scaler_bounds

        if f_min is None or f_max is None:
            p_min, p_max = self.power_range(power_source)
            lo, hi = scaler_bounds(delta, UTILITY_MAX, p_min, p_max)
            f_min = lo if f_min is None else f_min
            f_max = hi if f_max is None else f_max
        return RewardScaler(delta, f_min, f_max, power_source)


def reward_table(out: Outcomes, scaler: RewardScaler) -> tuple[np.ndarray, np.ndarray]:
    """Raw and normalized rewards for every (slot, arm)."""
    raw = out.utility - scaler.delta * out.power(scaler.power_source)
    return raw, normalize_array(raw, scaler)


def counterfactual_row(env: Environment, ctx: SlotContext, scaler: RewardScaler) -> np.ndarray:
    """Normalized reward of every arm under one context (hindsight only)."""
    out = env.outcomes(np.array([ctx], dtype=np.float64))
    return reward_table(out, scaler)[1][0]


def scalar_reward(model: SurrogateModel, ctx: SlotContext, policy: RadioPolicy, scaler: RewardScaler) -> float:
    """Normalized reward of one policy through the scalar path (for consistency checks)."""
    from .reward import normalize, utility

    outcome, power = evaluate(model, ctx, policy)
    return normalize(raw_reward(utility(outcome), power, scaler), scaler)
