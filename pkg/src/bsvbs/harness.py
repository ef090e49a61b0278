"""Experiment orchestration: slot loops per seed, result merging, CSV output.

Every seed draws its own environment and learner randomness from separate
generator streams, so all learners run on identical environment draws
(common random numbers) and results do not depend on worker scheduling.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .baselines import make_learner
from .config import RunConfig
from .environment import Environment, reward_table, surrogate_trace_rows, write_trace
from .errors import ConfigError
from .learner import BSvBS, regret_bound

log = logging.getLogger(__name__)

METADATA_NOTE = (
    "each seed re-draws both environment and learner randomness; "
    "regret and power are averaged over seeds jointly"
)


@dataclass
class SeedResult:
    seed: int
    log: metrics.RunLog
    clamp_count: int
    # per-slot power of every fixed arm, for the minimum-power column
    arm_total_w: np.ndarray | None = None
    arm_cpu_w: np.ndarray | None = None
    dist_sum_err: float = 0.0
    dist_floor_gap: float = 0.0
    gamma: float = float("nan")
    extra: dict = field(default_factory=dict)


def simulate(cfg: RunConfig, seed: int, learner: str | None = None, delta: float | None = None,
             env: Environment | None = None, fused: bool = True) -> SeedResult:
    """Run one seed of one learner and return its slot log.

    BSvBS uses the fused kernel loop unless ``fused`` is false; every other
    learner steps through ``select`` / ``feedback`` one slot at a time.
    """
    learner = learner or cfg.learner
    delta = cfg.delta if delta is None else delta
    env = env or cfg.environment()
    T = cfg.horizon
    contexts = env.contexts(T, seed)
    out = env.outcomes(contexts, seed)
    scaler = env.scaler(delta, cfg.power_source, cfg.f_min, cfg.f_max)
    raw, F = reward_table(out, scaler)

    agent = make_learner(learner, len(cfg.space), T, seed, cfg.baseline, cfg.anytime,
                         bucket_of=lambda ctx: env.spec.classify(ctx))
    extra = {}
    if isinstance(agent, BSvBS) and fused:
        gamma0 = agent.state.gamma
        arms, _, sums, mins = agent.play(F)
        extra = {"dist_sum_err": float(np.max(np.abs(sums - 1.0))), "gamma": gamma0}
        if not cfg.anytime:
            extra["dist_floor_gap"] = float(np.min(mins - gamma0 / len(cfg.space)))
    else:
        arms = np.empty(T, dtype=np.int64)
        ctx_rows = [tuple(r) for r in contexts.tolist()]
        for i in range(T):
            a = agent.select(i + 1)
            arms[i] = a
            agent.feedback(a, float(F[i, a]), _as_context(ctx_rows[i]))
    idx = np.arange(T)
    run = metrics.RunLog(
        arms=np.asarray(arms, dtype=np.int64),
        reward=F[idx, arms],
        raw_reward=raw[idx, arms],
        r_dl=out.r_dl[idx, arms],
        r_ul=out.r_ul[idx, arms],
        total_w=out.total_w[idx, arms],
        cpu_w=out.cpu_w[idx, arms],
        rows=F if cfg.record_rows else None,
    )
    res = SeedResult(seed, run, scaler.clamp_count, out.total_w, out.cpu_w)
    res.dist_sum_err = extra.get("dist_sum_err", 0.0)
    res.dist_floor_gap = extra.get("dist_floor_gap", 0.0)
    res.gamma = extra.get("gamma", float("nan"))
    return res


def _as_context(row):
    from .environment import SlotContext

    d_dl, d_ul, c_dl, c_ul = row
    return SlotContext(d_dl, d_ul, int(c_dl), int(c_ul))


def _simulate_job(args):
    cfg, seed, learner, delta = args
    return simulate(cfg, seed, learner, delta)


def simulate_seeds(cfg: RunConfig, learner: str | None = None, delta: float | None = None,
                   jobs: int = 1) -> list[SeedResult]:
    """All configured seeds, in seed order, optionally across worker processes."""
    tasks = [(cfg, s, learner, delta) for s in cfg.seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            return list(pool.map(_simulate_job, tasks))
    env = cfg.environment()
    return [simulate(cfg, s, learner, delta, env=env) for s in cfg.seeds]


# ---------------------------------------------------------------------------
# aggregation


@dataclass
class LearnerSummary:
    learner: str
    horizon: int
    seeds: int
    regret: metrics.RegretCurve | None
    bound: float
    total_kw: float
    cpu_kw: float
    min_total_kw: float
    min_cpu_kw: float
    clamp_count: int

    @property
    def R_T(self) -> float:
        return float("nan") if self.regret is None else self.regret.at(self.horizon)

    def row(self) -> list:
        r = self.R_T
        return [self.learner, self.horizon, self.seeds, r, r / self.horizon, self.bound,
                100.0 * (1.0 - r / self.bound), self.total_kw, self.cpu_kw]


def summarize(learner: str, results: list[SeedResult], arm_count: int) -> LearnerSummary:
    T = len(results[0].log)
    have_rows = all(r.log.rows is not None for r in results)
    curve = metrics.regret_curve([r.log for r in results]) if have_rows else None
    return LearnerSummary(
        learner=learner,
        horizon=T,
        seeds=len(results),
        regret=curve,
        bound=regret_bound(arm_count, T),
        total_kw=float(np.mean([r.log.total_w.sum() for r in results])) / 1000.0,
        cpu_kw=float(np.mean([r.log.cpu_w.sum() for r in results])) / 1000.0,
        min_total_kw=metrics.min_fixed_power_kw([r.arm_total_w for r in results]),
        min_cpu_kw=metrics.min_fixed_power_kw([r.arm_cpu_w for r in results]),
        clamp_count=sum(r.clamp_count for r in results),
    )


def _mean_power(results: list[SeedResult]):
    tot = np.mean([r.log.total_w for r in results], axis=0)
    cpu = np.mean([r.log.cpu_w for r in results], axis=0)
    return tot, cpu


# ---------------------------------------------------------------------------
# output


def resolve_out_dir(cfg: RunConfig, override=None) -> Path:
    if override is not None:
        return Path(override)
    if cfg.out_dir is not None:
        return Path(cfg.out_dir)
    env = os.environ.get("BSVBS_OUT_DIR")
    if env:
        return Path(env)
    raise ConfigError("no output directory: pass --out-dir, set run.out_dir, or set BSVBS_OUT_DIR")


def _write_metadata(path: Path, cfg: RunConfig, extra: dict) -> None:
    meta = {"config": cfg.to_dict(), "prng": "splitmix64 (streams: env=1, learner=2, noise=3)",
            "note": METADATA_NOTE, **extra}
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_learner_outputs(out: Path, cfg: RunConfig, results: list[SeedResult], summary: LearnerSummary) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for r in results:
        metrics.write_records(out / f"records_seed{r.seed}.csv", r.log)
    if summary.regret is not None:
        metrics.write_regret(out / "regret.csv", summary.regret)
    tot, cpu = _mean_power(results)
    metrics.write_power(out / "power.csv", tot, cpu, cfg.hyperslot)


def run(cfg: RunConfig, out_dir=None, jobs: int = 1, plots: bool = False) -> LearnerSummary:
    out = resolve_out_dir(cfg, out_dir)
    results = simulate_seeds(cfg, jobs=jobs)
    summary = summarize(cfg.learner, results, len(cfg.space))
    _write_learner_outputs(out, cfg, results, summary)
    metrics.write_csv(out / "summary.csv", metrics.SUMMARY_HEADER, [summary.row()])
    _write_metadata(out / "metadata.json", cfg, {"command": "run", "clamp_count": summary.clamp_count})
    if plots:
        _plots(out, {cfg.learner: summary}, {cfg.learner: results}, cfg)
    return summary


def compare(cfg: RunConfig, learners: list[str], out_dir=None, jobs: int = 1, plots: bool = False,
            reference: str | None = None) -> list[LearnerSummary]:
    """Run several learners on identical environment draws and tabulate them.

    With more than one distinct learner, savings columns report how much of
    the reference learner's gap to the best fixed arm each learner closes.
    The reference defaults to the first listed learner that is not BSvBS.
    """
    if not learners:
        raise ConfigError("compare needs at least one learner")
    for name in learners:
        cfg.replace(learner=name)  # validates the name
    out = resolve_out_dir(cfg, out_dir)
    summaries, all_results = [], {}
    for name in learners:
        if name not in all_results:
            all_results[name] = simulate_seeds(cfg, learner=name, jobs=jobs)
        res = all_results[name]
        summaries.append(summarize(name, res, len(cfg.space)))
    distinct = list(dict.fromkeys(learners))
    for name in distinct:
        s = summaries[learners.index(name)]
        _write_learner_outputs(out / name, cfg, all_results[name], s)

    header = list(metrics.SUMMARY_HEADER)
    rows = [s.row() for s in summaries]
    if len(distinct) > 1:
        ref_name = reference or next((n for n in distinct if n != "bsvbs"), distinct[0])
        if ref_name not in distinct:
            raise ConfigError(f"reference learner {ref_name!r} is not among the compared learners")
        ref = summaries[learners.index(ref_name)]
        header += metrics.SAVINGS_HEADER
        for s, row in zip(summaries, rows):
            row += [s.min_total_kw, s.min_cpu_kw,
                    _safe_savings(s.total_kw, ref.total_kw, s.min_total_kw),
                    _safe_savings(s.cpu_kw, ref.cpu_kw, s.min_cpu_kw)]
    metrics.write_csv(out / "summary.csv", header, rows)
    _write_metadata(out / "metadata.json", cfg, {"command": "compare", "learners": learners})
    if plots:
        _plots(out, {s.learner: s for s in summaries}, all_results, cfg)
    return summaries


def _safe_savings(alg, ref, lo):
    try:
        return metrics.savings_percent(alg, ref, lo)
    except metrics.UndefinedSavingsError:
        return float("nan")


@dataclass
class DeltaSeries:
    delta: float
    total_w: np.ndarray  # per hyper-slot, seed-averaged
    cpu_w: np.ndarray


def sweep_delta(cfg: RunConfig, deltas: list[float], out_dir=None, jobs: int = 1,
                plots: bool = False, write: bool = True) -> list[DeltaSeries]:
    if not deltas:
        raise ConfigError("sweep needs at least one delta")
    if any(not d > 0 for d in deltas):
        raise ConfigError("every delta must be positive")
    out = resolve_out_dir(cfg, out_dir) if write else None
    cfg = cfg.replace(record_rows=False)
    series, rows = [], []
    for d in deltas:
        results = simulate_seeds(cfg, delta=d, jobs=jobs)
        tot, cpu = _mean_power(results)
        s = DeltaSeries(d, metrics.hyperslot_power(tot, cfg.hyperslot), metrics.hyperslot_power(cpu, cfg.hyperslot))
        series.append(s)
        rows += [(d, i + 1, a, b) for i, (a, b) in enumerate(zip(s.total_w, s.cpu_w))]
    if write:
        metrics.write_csv(out / "sweep_delta.csv", ["delta", *metrics.POWER_HEADER], rows)
        _write_metadata(out / "metadata.json", cfg, {"command": "sweep-delta", "deltas": list(deltas)})
        if plots:
            from .svg import line_chart

            for field_name in ("total_w", "cpu_w"):
                line_chart(out / f"sweep_{field_name}.svg",
                           {f"delta={s.delta:g}": getattr(s, field_name) for s in series},
                           title=f"mean {field_name} per hyper-slot", xlabel="hyper-slot", ylabel="W")
    return series


def bound(arm_count: int, horizon: int) -> float:
    return regret_bound(arm_count, horizon)


def gen_trace(cfg: RunConfig, path) -> int:
    """Export the surrogate at bucket-midpoint contexts as a trace CSV; returns the row count."""
    if cfg.env_mode != "surrogate":
        raise ConfigError("gen-trace needs a surrogate-mode configuration")
    rows = surrogate_trace_rows(cfg.model, cfg.scenario, cfg.space, cfg.bucketing)
    write_trace(path, rows)
    return len(rows)


def _plots(out: Path, summaries: dict, results: dict, cfg: RunConfig) -> None:
    from .svg import line_chart

    curves = {n: s.regret.mean / np.arange(1, s.horizon + 1) for n, s in summaries.items() if s.regret is not None}
    if curves:
        line_chart(out / "regret.svg", curves, title="average regret R_t / t", xlabel="slot", ylabel="R_t / t")
    power = {}
    for n, res in results.items():
        tot, _ = _mean_power(res)
        power[n] = metrics.hyperslot_power(tot, cfg.hyperslot)
    line_chart(out / "power.svg", power, title="mean total power per hyper-slot", xlabel="hyper-slot", ylabel="W")
