import json

import pytest

from bsvbs.config import RunConfig, from_mapping, load_config
from bsvbs.errors import ConfigError

TOML = """
[space]
m_d = [16, 27]
a_u = [0.25, 1.0]

[env]
scenario = "A"

[env.model]
kappa_ul = 6.0

[reward]
delta = 100.0
power_source = "cpu"

[run]
learner = "ucb1"
horizon = 500
seeds = [3, 4]
hyperslot = 100

[baseline]
ucb_c = 1.0
"""


def test_load_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text(TOML)
    cfg = load_config(p)
    assert cfg.scenario.kind == "A" and cfg.model.kappa_ul == 6.0
    assert cfg.delta == 100.0 and cfg.power_source == "cpu"
    assert cfg.learner == "ucb1" and cfg.horizon == 500 and cfg.seeds == (3, 4)
    assert cfg.baseline == {"ucb_c": 1.0}
    assert len(cfg.space) == 16


def test_load_json_equivalent(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"run": {"horizon": 50, "seeds": 3}, "env": {"scenario": "B"}}))
    cfg = load_config(p)
    assert cfg.horizon == 50 and cfg.seeds == (0, 1, 2)


def test_shipped_configs_load():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "configs"
    for name in ("scenario_a.toml", "scenario_b.toml", "scenario_b_trace.json"):
        cfg = load_config(root / name)
        assert cfg.horizon == 10000


@pytest.mark.parametrize(
    "data",
    [
        {"bogus": {}},
        {"run": {"horizon": 0}},
        {"run": {"horizon": 1.5}},
        {"run": {"seeds": []}},
        {"run": {"seeds": [1, 1]}},
        {"run": {"learner": "gp"}},
        {"run": {"unknown": 1}},
        {"reward": {"delta": 0}},
        {"reward": {"delta": -1}},
        {"reward": {"power_source": "rf"}},
        {"reward": {"f_min": 0.0}},
        {"reward": {"f_min": 1.0, "f_max": 0.0}},
        {"env": {"mode": "live"}},
        {"env": {"mode": "trace"}},
        {"env": {"mode": "trace", "trace_path": "/nonexistent.csv"}},
        {"env": {"scenario": "C"}},
        {"env": {"model": {"eta": -1}}},
        {"space": {"m_d": [27, 16]}},
        {"space": {"m_d": [16], "a_d": [1.0], "m_u": [16], "a_u": [1.0]}},
        {"env": "flat"},
    ],
)
def test_validation_errors(data):
    with pytest.raises(ConfigError):
        from_mapping(data)


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    p = tmp_path / "bad.toml"
    p.write_text("[run\nhorizon = ")
    with pytest.raises(ConfigError):
        load_config(p)


def test_relative_trace_path(tmp_path):
    (tmp_path / "t.csv").write_text("bucket,arm,r_dl_mbit,r_ul_mbit,p_total_w,p_cpu_w\n")
    p = tmp_path / "c.toml"
    p.write_text('[env]\nmode = "trace"\ntrace_path = "t.csv"\n')
    assert load_config(p).trace_path == tmp_path / "t.csv"


def test_to_dict_is_json():
    json.dumps(RunConfig().to_dict())
