import itertools

import pytest
from hypothesis import given, strategies as st

from bsvbs.errors import ConfigError, MembershipError
from bsvbs.space import AXES, ConfigurationSpace, RadioPolicy, cardinality, index_of, policy_at


def test_default_has_sixteen_arms(space16):
    assert space16.shape == (1, 2, 2, 2, 2)
    assert cardinality(space16) == 16 == len(space16)


def test_singleton_space():
    s = ConfigurationSpace((20.0,), (27,), (1.0,), (27,), (1.0,))
    assert cardinality(s) == 1
    assert policy_at(s, 0) == RadioPolicy(20.0, 27, 1.0, 27, 1.0)


def test_full_dataset_cardinality():
    # one decomposition with product 1080: 5 power levels, 6 MCS and 6 airtime values DL, 6 MCS UL, 1 airtime UL
    s = ConfigurationSpace(
        p_d=(0.0, 5.0, 10.0, 15.0, 20.0),
        m_d=(0, 5, 10, 16, 22, 27),
        a_d=(0.1, 0.2, 0.4, 0.6, 0.8, 1.0),
        m_u=(0, 5, 10, 16, 22, 27),
        a_u=(1.0,),
    )
    assert cardinality(s) == 1080


def test_first_and_last(space16):
    assert policy_at(space16, 0) == RadioPolicy(*(axis[0] for axis in space16.axes))
    assert policy_at(space16, 15) == RadioPolicy(*(axis[-1] for axis in space16.axes))


def test_index_one_advances_innermost_axis(space16):
    p = policy_at(space16, 1)
    assert p == RadioPolicy(20.0, 16, 0.5, 16, space16.a_u[1])


def test_order_matches_cartesian_product(space16):
    assert list(space16) == [RadioPolicy(*p) for p in itertools.product(*space16.axes)]


def test_round_trip_exhaustive(space16):
    for i in range(len(space16)):
        assert index_of(space16, policy_at(space16, i)) == i
    assert len(set(space16)) == len(space16)


def test_round_trip_example(space16):
    assert index_of(space16, policy_at(space16, 7)) == 7
    assert index_of(space16, policy_at(space16, 0)) == 0


def test_off_axis_value(space16):
    with pytest.raises(MembershipError):
        index_of(space16, RadioPolicy(20.0, 17, 0.5, 16, 0.25))


def test_index_out_of_range(space16):
    with pytest.raises(IndexError):
        policy_at(space16, 16)
    with pytest.raises(IndexError):
        policy_at(space16, -1)


@pytest.mark.parametrize(
    "axes",
    [
        {"m_d": ()},
        {"m_d": (27, 16)},
        {"m_d": (16, 16)},
        {"m_d": (16, 29)},
        {"m_u": (16.5,)},
        {"a_d": (0.0, 1.0)},
        {"a_u": (0.5, 1.5)},
    ],
)
def test_invalid_axes(axes):
    with pytest.raises(ConfigError):
        ConfigurationSpace.from_mapping(axes)


def test_policy_matrix(space16):
    m = space16.policy_matrix()
    assert m.shape == (16, 5)
    assert tuple(m[5]) == tuple(policy_at(space16, 5))
    assert space16.tx_max == 20.0


@given(
    st.lists(st.integers(1, 4), min_size=5, max_size=5),
    st.data(),
)
def test_round_trip_random_shapes(sizes, data):
    s = ConfigurationSpace(
        p_d=tuple(float(10 + i) for i in range(sizes[0])),
        m_d=tuple(range(sizes[1])),
        a_d=tuple((i + 1) / sizes[2] for i in range(sizes[2])),
        m_u=tuple(range(0, 2 * sizes[3], 2)),
        a_u=tuple((i + 1) / sizes[4] for i in range(sizes[4])),
    )
    i = data.draw(st.integers(0, len(s) - 1))
    assert index_of(s, policy_at(s, i)) == i
    assert AXES == ("p_d", "m_d", "a_d", "m_u", "a_u")
