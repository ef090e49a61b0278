"""BSvBS: Exp3 with uniform exploration over the radio-policy arms.

Weights are kept as natural logarithms. The exponential update adds
``gamma * estimate / |X|`` to one log-weight per slot, and the mixing rule
is evaluated after subtracting the largest log-weight, so no weight ever
overflows no matter how long the run.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegenerateSpaceError, NormalizationError
from .rng import LEARNER_STREAM, SplitMix64


def fixed_gamma(arm_count: int, horizon: int) -> float:
    """Exploration rate tuned for a known horizon."""
    g = math.sqrt(arm_count * math.log(arm_count) / ((math.e - 1.0) * horizon))
    return min(1.0, g)


def adaptive_gamma(arm_count: int, t: int) -> float:
    """Fixed-horizon rate with the horizon replaced by the current slot."""
    if t < 1:
        raise ValueError("slot index starts at 1")
    return kernels.anytime_gamma(arm_count, t)


def regret_bound(arm_count: int, horizon: int) -> float:
    """Worst-case expected regret after ``horizon`` slots."""
    if arm_count < 2:
        raise DegenerateSpaceError("regret bound needs at least two arms")
    return 2.0 * math.sqrt(math.e - 1.0) * math.sqrt(horizon * arm_count * math.log(arm_count))


@dataclass
class LearnerState:
    log_weights: np.ndarray
    gamma: float
    arm_count: int
    t: int = 1
    horizon: int = 0  # 0: anytime mode
    rng: SplitMix64 = field(default_factory=SplitMix64)

    @property
    def anytime(self) -> bool:
        return self.horizon == 0

    def copy(self) -> "LearnerState":
        return copy.deepcopy(self)


def init(arm_count: int, horizon: int, seed: int = 0) -> LearnerState:
    """Fresh state with all weights equal to one.

    ``horizon=0`` selects anytime mode, where gamma follows
    :func:`adaptive_gamma` slot by slot.
    """
    if arm_count < 2:
        raise DegenerateSpaceError(f"need at least two arms, got {arm_count}")
    if horizon < 0:
        raise ValueError("horizon must be positive (or 0 for anytime mode)")
    gamma = adaptive_gamma(arm_count, 1) if horizon == 0 else fixed_gamma(arm_count, horizon)
    return LearnerState(
        log_weights=np.zeros(arm_count),
        gamma=gamma,
        arm_count=arm_count,
        t=1,
        horizon=horizon,
        rng=SplitMix64.for_stream(seed, LEARNER_STREAM),
    )


def distribution(state: LearnerState) -> np.ndarray:
    out = np.empty(state.arm_count)
    kernels.mix_distribution(state.log_weights, state.gamma, out)
    return out


def sample(state: LearnerState, dist: np.ndarray) -> int:
    return kernels.inverse_cdf(dist, state.rng.random())


def _check_reward(reward: float) -> None:
    if not 0.0 <= reward <= 1.0:
        raise NormalizationError(f"reward {reward!r} outside [0, 1]")


def estimate(reward: float, dist: np.ndarray, chosen: int, arm: int) -> float:
    """Importance-weighted reward estimate for ``arm`` after playing ``chosen``."""
    _check_reward(reward)
    if arm != chosen:
        return 0.0
    return reward / dist[chosen]


def update(state: LearnerState, chosen: int, reward: float, dist: np.ndarray | None = None) -> LearnerState:
    """Apply one slot of feedback in place and return the state.

    ``dist`` must be the distribution the arm was sampled from; it is
    recomputed from the (not yet updated) weights when omitted.
    """
    _check_reward(reward)
    if dist is None:
        dist = distribution(state)
    phi = reward / dist[chosen]
    state.log_weights[chosen] += state.gamma * phi / state.arm_count
    state.t += 1
    if state.anytime:
        state.gamma = adaptive_gamma(state.arm_count, state.t)
    return state


class BSvBS:
    """Learner-interface wrapper around :class:`LearnerState`."""

    name = "bsvbs"

    def __init__(self, arm_count: int, horizon: int, seed: int = 0, anytime: bool = False):
        self.state = init(arm_count, 0 if anytime else horizon, seed)
        self._dist = None

    @property
    def arm_count(self) -> int:
        return self.state.arm_count

    def select(self, t: int) -> int:
        self._dist = distribution(self.state)
        return sample(self.state, self._dist)

    def feedback(self, arm: int, reward: float, context=None) -> None:
        update(self.state, arm, reward, self._dist)
        self._dist = None

    def play(self, rewards: np.ndarray):
        """Fused slot loop over a (T, |X|) reward table.

        Equivalent to calling :meth:`select` / :meth:`feedback` once per row;
        only ``rewards[t, arm_t]`` is ever read. Returns ``(arms,
        chosen_probs, dist_sums, dist_mins)``.
        """
        s = self.state
        rewards = np.ascontiguousarray(rewards, dtype=np.float64)
        arms, probs, sums, mins, gamma, rng_state = kernels.exp3_play(
            rewards, s.log_weights, s.gamma, s.anytime, s.t, s.rng.state
        )
        s.gamma = gamma
        s.rng.state = rng_state
        s.t += rewards.shape[0]
        return arms, probs, sums, mins
