"""Comparison policies sharing the ``select(t)`` / ``feedback(arm, reward, context)`` interface.

Only the hindsight oracle sees full reward rows; every online learner here
observes the reward of the arm it played and, after the slot, its context.
"""

from __future__ import annotations

import math
from typing import Callable, Protocol

import numpy as np

from .errors import ConfigError, ShapeError
from .rng import LEARNER_STREAM, SplitMix64


class LearnerInterface(Protocol):
    name: str
    arm_count: int

    def select(self, t: int) -> int: ...

    def feedback(self, arm: int, reward: float, context=None) -> None: ...


def oracle_best_fixed(reward_rows) -> tuple[int, float]:
    """Best single arm in hindsight and its cumulative reward (lowest index on ties)."""
    try:
        rows = np.asarray(reward_rows, dtype=np.float64)
    except ValueError:
        raise ShapeError("reward rows have inconsistent arm dimension") from None
    if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] == 0:
        raise ShapeError(f"reward rows must form a non-empty (T, |X|) table, got shape {rows.shape}")
    sums = np.zeros(rows.shape[1])
    for row in rows:  # sequential sums keep the result independent of numpy's summation order
        sums += row
    arm = int(np.argmax(sums))
    return arm, float(sums[arm])


def _argmax_first(values) -> int:
    return int(np.argmax(values))


class EpsilonGreedy:
    """Sweep every arm once, then explore uniformly with probability ``epsilon``."""

    name = "epsilon_greedy"

    def __init__(self, arm_count: int, seed: int = 0, epsilon: float = 0.1):
        if not 0.0 <= epsilon <= 1.0:
            raise ConfigError(f"epsilon must lie in [0, 1], got {epsilon}")
        self.arm_count = arm_count
        self.epsilon = epsilon
        self.counts = np.zeros(arm_count, dtype=np.int64)
        self.means = np.zeros(arm_count)
        self.rng = SplitMix64.for_stream(seed, LEARNER_STREAM)

    def select(self, t: int) -> int:
        if t <= self.arm_count:
            return t - 1
        if self.rng.random() < self.epsilon:
            return self.rng.integers(0, self.arm_count - 1)
        return _argmax_first(self.means)

    def feedback(self, arm: int, reward: float, context=None) -> None:
        self.counts[arm] += 1
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm]


class UCB1:
    """Optimism under uncertainty: each arm once, then mean + c*sqrt(ln t / n)."""

    name = "ucb1"

    def __init__(self, arm_count: int, seed: int = 0, c: float = math.sqrt(2.0)):
        if c < 0:
            raise ConfigError("UCB confidence multiplier must be non-negative")
        self.arm_count = arm_count
        self.c = c
        self.counts = np.zeros(arm_count, dtype=np.int64)
        self.means = np.zeros(arm_count)

    def select(self, t: int) -> int:
        unplayed = np.flatnonzero(self.counts == 0)
        if unplayed.size:
            return int(unplayed[0])
        return _argmax_first(self.means + self.c * np.sqrt(math.log(t) / self.counts))

    def feedback(self, arm: int, reward: float, context=None) -> None:
        self.counts[arm] += 1
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm]


class StaleContextUCB:
    """Contextual UCB that decides on the previous slot's context.

    One table of counts and means per context bucket. The arm for slot t is
    the UCB choice of the bucket observed at t-1; the reward is filed under
    the bucket the slot actually had, once its context is reported. When
    contexts alternate every slot, decisions always consult the statistics
    of the wrong regime.
    """

    name = "stale_ctx_ucb"

    def __init__(
        self,
        arm_count: int,
        seed: int = 0,
        multiplier: float = 1.0,
        bucket_of: Callable | None = None,
        initial_bucket: str = "low",
    ):
        if multiplier < 0:
            raise ConfigError("confidence multiplier must be non-negative")
        self.arm_count = arm_count
        self.multiplier = multiplier
        self.bucket_of = bucket_of or _default_bucketer()
        self.counts: dict = {}
        self.means: dict = {}
        self.last_bucket = initial_bucket
        self.decision_buckets: list = []

    def _tables(self, bucket):
        if bucket not in self.counts:
            self.counts[bucket] = np.zeros(self.arm_count, dtype=np.int64)
            self.means[bucket] = np.zeros(self.arm_count)
        return self.counts[bucket], self.means[bucket]

    def select(self, t: int) -> int:
        bucket = self.last_bucket
        self.decision_buckets.append(bucket)
        # fixed sweep (two plays per arm) so that alternating buckets all get seeded
        if t <= 2 * self.arm_count:
            return (t - 1) // 2
        n, m = self._tables(bucket)
        total = n.sum()
        if total == 0 or (n == 0).any():
            unplayed = np.flatnonzero(n == 0)
            return int(unplayed[0])
        bonus = self.multiplier * np.sqrt(2.0 * math.log(total) / n)
        return _argmax_first(m + bonus)

    def feedback(self, arm: int, reward: float, context=None) -> None:
        bucket = self.last_bucket if context is None else self.bucket_of(context)
        n, m = self._tables(bucket)
        n[arm] += 1
        m[arm] += (reward - m[arm]) / n[arm]
        self.last_bucket = bucket


def _default_bucketer():
    from .environment import ScenarioSpec

    spec = ScenarioSpec()
    return lambda ctx: spec.classify(ctx)


LEARNERS = ("bsvbs", "epsilon_greedy", "ucb1", "stale_ctx_ucb")


def make_learner(name: str, arm_count: int, horizon: int, seed: int, params: dict | None = None,
                 anytime: bool = False, bucket_of: Callable | None = None):
    from .learner import BSvBS

    params = params or {}
    if name == "bsvbs":
        return BSvBS(arm_count, horizon, seed, anytime=anytime)
    if name == "epsilon_greedy":
        return EpsilonGreedy(arm_count, seed, epsilon=float(params.get("epsilon", 0.1)))
    if name == "ucb1":
        return UCB1(arm_count, seed, c=float(params.get("ucb_c", math.sqrt(2.0))))
    if name == "stale_ctx_ucb":
        return StaleContextUCB(arm_count, seed, multiplier=float(params.get("stale_multiplier", 1.0)),
                               bucket_of=bucket_of)
    raise ConfigError(f"unknown learner {name!r}; choose from {LEARNERS}")
