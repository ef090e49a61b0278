"""Utility, power-penalized reward, and its [0, 1] scaling.

Logarithms are natural. The base only rescales utility, which the
priority weight ``delta`` and the scaling absorb anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError

POWER_SOURCES = ("total", "cpu")

# delivered data never exceeds demand, so each direction contributes at most ln 2
UTILITY_MAX = 2.0 * math.log(2.0)


class TrafficOutcome(NamedTuple):
    r_dl: float
    r_ul: float
    d_dl: float
    d_ul: float


class PowerReading(NamedTuple):
    total_w: float
    cpu_w: float


@dataclass
class RewardScaler:
    delta: float
    f_min: float
    f_max: float
    power_source: str = "total"
    clamp_count: int = 0

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if not self.f_max > self.f_min:
            raise ConfigError(f"degenerate reward range [{self.f_min}, {self.f_max}]")
        if self.power_source not in POWER_SOURCES:
            raise ConfigError(f"power_source must be one of {POWER_SOURCES}")

    def power(self, reading: PowerReading) -> float:
        return reading.total_w if self.power_source == "total" else reading.cpu_w


def utility(outcome: TrafficOutcome) -> float:
    if outcome.d_dl <= 0.0 or outcome.d_ul <= 0.0:
        return 0.0
    return math.log(1.0 + outcome.r_dl / outcome.d_dl) + math.log(1.0 + outcome.r_ul / outcome.d_ul)


def raw_reward(u: float, power: PowerReading, scaler: RewardScaler) -> float:
    return u - scaler.delta * scaler.power(power)


def scaler_bounds(delta: float, u_max: float, p_min: float, p_max: float) -> tuple[float, float]:
    """Reward range from utility and power extremes (utility is never negative)."""
    if not p_max >= p_min >= 0.0:
        raise ConfigError(f"need p_max >= p_min >= 0, got p_min={p_min}, p_max={p_max}")
    if not u_max > 0.0:
        raise ConfigError("u_max must be positive")
    f_max = u_max - delta * p_min
    f_min = 0.0 - delta * p_max
    if not f_max > f_min:
        raise ConfigError(f"degenerate reward range [{f_min}, {f_max}]")
    return f_min, f_max


def normalize(f_raw: float, scaler: RewardScaler) -> float:
    f = (f_raw - scaler.f_min) / (scaler.f_max - scaler.f_min)
    if f < 0.0:
        scaler.clamp_count += 1
        return 0.0
    if f > 1.0:
        scaler.clamp_count += 1
        return 1.0
    return f


def normalize_array(f_raw: np.ndarray, scaler: RewardScaler) -> np.ndarray:
    """Vectorized :func:`normalize`; elementwise results match it exactly."""
    f = (f_raw - scaler.f_min) / (scaler.f_max - scaler.f_min)
    out_of_range = (f < 0.0) | (f > 1.0)
    scaler.clamp_count += int(np.count_nonzero(out_of_range))
    return np.clip(f, 0.0, 1.0)
