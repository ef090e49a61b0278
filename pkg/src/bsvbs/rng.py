"""SplitMix64 pseudo-random generator.

Every random draw in the package (environment contexts, learner sampling,
baseline exploration) goes through this generator so that a run is fully
determined by its integer seed, independently of numpy's bit generators.

Algorithm (Steele, Lea & Flood 2014), all arithmetic modulo 2**64::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

Floats in [0, 1) take the top 53 bits: ``(z >> 11) * 2**-53``.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
STREAM_SALT = 0xD1B54A32D192ED03
TWO_POW_M53 = 1.0 / 9007199254740992.0

# stream ids; environment and learner never share a stream so that
# every learner sees the same contexts for a given seed
ENV_STREAM = 1
LEARNER_STREAM = 2
NOISE_STREAM = 3


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def stream_state(seed: int, stream: int) -> int:
    """Initial state for substream ``stream`` of ``seed``."""
    return mix64((seed * GOLDEN_GAMMA + stream * STREAM_SALT) & MASK64)


@dataclass
class SplitMix64:
    state: int = 0

    @classmethod
    def for_stream(cls, seed: int, stream: int) -> "SplitMix64":
        return cls(stream_state(seed, stream))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * TWO_POW_M53

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in the closed range [low, high]."""
        return low + int(self.random() * (high - low + 1))

    def copy(self) -> "SplitMix64":
        return SplitMix64(self.state)
