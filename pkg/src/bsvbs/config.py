"""Run configuration: TOML (or JSON) file to a validated :class:`RunConfig`.

Example::

    [space]
    m_d = [16, 27]

    [env]
    mode = "surrogate"      # or "trace" with trace_path
    scenario = "B"

    [env.model]
    p0_cpu = 4.0

    [reward]
    delta = 1.0
    power_source = "total"

    [run]
    learner = "bsvbs"
    horizon = 10000
    seeds = [0, 1, 2]
"""

from __future__ import annotations

import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import LEARNERS
from .environment import BUCKETINGS, Environment, ScenarioSpec, SurrogateModel, load_trace
from .errors import ConfigError
from .reward import POWER_SOURCES
from .space import ConfigurationSpace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SECTIONS = {
    "space": {"p_d", "m_d", "a_d", "m_u", "a_u"},
    "env": {"mode", "trace_path", "scenario", "model", "bucketing", "noise", "midpoint_contexts"},
    "reward": {"delta", "power_source", "f_min", "f_max"},
    "run": {"learner", "horizon", "seeds", "out_dir", "hyperslot", "anytime", "record_rows"},
    "baseline": {"epsilon", "ucb_c", "stale_multiplier"},
}


@dataclass
class RunConfig:
    space: ConfigurationSpace = field(default_factory=ConfigurationSpace.default)
    env_mode: str = "surrogate"
    trace_path: Path | None = None
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    model: SurrogateModel = field(default_factory=SurrogateModel)
    bucketing: str = "regime"
    noise: float = 0.0
    midpoint_contexts: bool = False
    delta: float = 1.0
    power_source: str = "total"
    f_min: float | None = None
    f_max: float | None = None
    learner: str = "bsvbs"
    horizon: int = 10000
    seeds: tuple = (0,)
    out_dir: Path | None = None
    hyperslot: int = 200
    anytime: bool = False
    record_rows: bool = True
    baseline: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.env_mode not in ("surrogate", "trace"):
            raise ConfigError(f"env.mode must be 'surrogate' or 'trace', got {self.env_mode!r}")
        if self.env_mode == "trace":
            if self.trace_path is None:
                raise ConfigError("env.trace_path is required in trace mode")
            if not Path(self.trace_path).is_file():
                raise ConfigError(f"trace file not found: {self.trace_path}")
        if self.bucketing not in BUCKETINGS:
            raise ConfigError(f"env.bucketing must be one of {BUCKETINGS}")
        if not self.delta > 0:
            raise ConfigError(f"reward.delta must be positive, got {self.delta}")
        if self.power_source not in POWER_SOURCES:
            raise ConfigError(f"reward.power_source must be one of {POWER_SOURCES}")
        if self.learner not in LEARNERS:
            raise ConfigError(f"run.learner must be one of {LEARNERS}")
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise ConfigError("run.horizon must be a positive integer")
        if not self.seeds:
            raise ConfigError("run.seeds must list at least one seed")
        if any(not isinstance(s, int) or s < 0 for s in self.seeds):
            raise ConfigError("seeds must be non-negative integers")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if not isinstance(self.hyperslot, int) or self.hyperslot < 1:
            raise ConfigError("run.hyperslot must be a positive integer")
        if len(self.space) < 2:
            raise ConfigError("the policy space needs at least two arms to learn over")
        if (self.f_min is None) != (self.f_max is None):
            raise ConfigError("give both reward.f_min and reward.f_max, or neither")
        if self.f_min is not None and not self.f_max > self.f_min:
            raise ConfigError("reward.f_max must exceed reward.f_min")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def environment(self) -> Environment:
        if self.env_mode == "surrogate":
            return Environment(self.space, self.scenario, model=self.model, noise=self.noise,
                               midpoint_contexts=self.midpoint_contexts)
        trace = load_trace(self.trace_path, len(self.space), self.bucketing)
        return Environment(self.space, self.scenario, trace=trace, noise=self.noise,
                           midpoint_contexts=self.midpoint_contexts)

    def to_dict(self) -> dict:
        """Plain, JSON-serializable view for run metadata."""
        return {
            "space": {name: list(v) for name, v in zip(("p_d", "m_d", "a_d", "m_u", "a_u"), self.space.axes)},
            "env": {
                "mode": self.env_mode,
                "trace_path": None if self.trace_path is None else str(self.trace_path),
                "scenario": self.scenario.kind,
                "model": dataclasses.asdict(self.model),
                "bucketing": self.bucketing,
                "noise": self.noise,
                "midpoint_contexts": self.midpoint_contexts,
            },
            "reward": {"delta": self.delta, "power_source": self.power_source,
                       "f_min": self.f_min, "f_max": self.f_max},
            "run": {"learner": self.learner, "horizon": self.horizon, "seeds": list(self.seeds),
                    "hyperslot": self.hyperslot, "anytime": self.anytime, "record_rows": self.record_rows},
            "baseline": dict(self.baseline),
        }


def _check_keys(data: dict) -> None:
    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for section, keys in SECTIONS.items():
        body = data.get(section, {})
        if not isinstance(body, dict):
            raise ConfigError(f"[{section}] must be a table")
        extra = set(body) - keys
        if extra:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")


def from_mapping(data: dict, base_dir: Path | None = None) -> RunConfig:
    _check_keys(data)
    space_d = data.get("space", {})
    env = data.get("env", {})
    reward = data.get("reward", {})
    run = data.get("run", {})
    try:
        space = ConfigurationSpace.from_mapping(space_d)
        scenario = ScenarioSpec(kind=str(env.get("scenario", "B")))
        model = SurrogateModel.from_mapping(env.get("model", {}), space)
        trace_path = env.get("trace_path")
        if trace_path is not None:
            trace_path = Path(trace_path)
            if base_dir is not None and not trace_path.is_absolute():
                trace_path = base_dir / trace_path
        seeds = run.get("seeds", [0])
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        out_dir = run.get("out_dir")
        return RunConfig(
            space=space,
            env_mode=str(env.get("mode", "surrogate")),
            trace_path=trace_path,
            scenario=scenario,
            model=model,
            bucketing=str(env.get("bucketing", "regime")),
            noise=float(env.get("noise", 0.0)),
            midpoint_contexts=bool(env.get("midpoint_contexts", False)),
            delta=float(reward.get("delta", 1.0)),
            power_source=str(reward.get("power_source", "total")),
            f_min=None if reward.get("f_min") is None else float(reward["f_min"]),
            f_max=None if reward.get("f_max") is None else float(reward["f_max"]),
            learner=str(run.get("learner", "bsvbs")),
            horizon=run.get("horizon", 10000),
            seeds=tuple(seeds),
            out_dir=None if out_dir is None else Path(out_dir),
            hyperslot=run.get("hyperslot", 200),
            anytime=bool(run.get("anytime", False)),
            record_rows=bool(run.get("record_rows", True)),
            baseline={k: float(v) for k, v in data.get("baseline", {}).items()},
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(raw.decode("utf-8"))
        else:
            data = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a table")
    return from_mapping(data, base_dir=path.parent)
