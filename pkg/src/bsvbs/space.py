"""Finite radio-policy space and its arm indexing.

Arms are numbered lexicographically over the axes in declaration order
(``p_d`` outermost, ``a_u`` innermost), each axis ascending, which is the
order ``itertools.product`` produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, MembershipError

AXES = ("p_d", "m_d", "a_d", "m_u", "a_u")


class RadioPolicy(NamedTuple):
    tx_power_dl: float
    mcs_dl: int
    airtime_dl: float
    mcs_ul: int
    airtime_ul: float


def _check_axis(name: str, values: Sequence[float]) -> tuple:
    vals = tuple(values)
    if not vals:
        raise ConfigError(f"axis {name} is empty")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"axis {name} must be strictly increasing: {vals}")
    if name in ("m_d", "m_u"):
        if any(int(v) != v or not 0 <= v <= 28 for v in vals):
            raise ConfigError(f"axis {name} must hold integer MCS indices in 0..28")
        vals = tuple(int(v) for v in vals)
    elif name in ("a_d", "a_u"):
        if any(not 0.0 < v <= 1.0 for v in vals):
            raise ConfigError(f"axis {name} must hold airtime fractions in (0, 1]")
        vals = tuple(float(v) for v in vals)
    else:
        vals = tuple(float(v) for v in vals)
    return vals


@dataclass(frozen=True)
class ConfigurationSpace:
    p_d: tuple
    m_d: tuple
    a_d: tuple
    m_u: tuple
    a_u: tuple

    def __post_init__(self):
        for name in AXES:
            object.__setattr__(self, name, _check_axis(name, getattr(self, name)))

    @classmethod
    def default(cls) -> "ConfigurationSpace":
        """The 16-arm space used by the desk-scale experiments."""
        return cls(p_d=(20.0,), m_d=(16, 27), a_d=(0.5, 1.0), m_u=(16, 27), a_u=(0.25, 1.0))

    @classmethod
    def from_mapping(cls, data) -> "ConfigurationSpace":
        base = cls.default()
        return cls(**{name: data.get(name, getattr(base, name)) for name in AXES})

    @property
    def axes(self) -> tuple:
        return tuple(getattr(self, name) for name in AXES)

    @property
    def shape(self) -> tuple:
        return tuple(len(axis) for axis in self.axes)

    def __len__(self) -> int:
        return cardinality(self)

    def __iter__(self) -> Iterator[RadioPolicy]:
        for i in range(len(self)):
            yield policy_at(self, i)

    def policy_matrix(self) -> np.ndarray:
        """All policies as a float array of shape (|X|, 5), arm order."""
        return np.array([tuple(p) for p in self], dtype=np.float64).reshape(len(self), 5)

    @property
    def tx_max(self) -> float:
        return self.p_d[-1]


def cardinality(space: ConfigurationSpace) -> int:
    return math.prod(space.shape)


def policy_at(space: ConfigurationSpace, index: int) -> RadioPolicy:
    n = cardinality(space)
    if not 0 <= index < n:
        raise IndexError(f"arm index {index} outside [0, {n})")
    digits = []
    for size in reversed(space.shape):
        index, digit = divmod(index, size)
        digits.append(digit)
    digits.reverse()
    return RadioPolicy(*(axis[d] for axis, d in zip(space.axes, digits)))


def index_of(space: ConfigurationSpace, policy: RadioPolicy) -> int:
    index = 0
    for name, axis, value in zip(AXES, space.axes, policy):
        try:
            digit = axis.index(value)
        except ValueError:
            raise MembershipError(f"{name} value {value!r} not on axis {axis}") from None
        index = index * len(axis) + digit
    return index
