import logging

import numpy as np
import pytest

from bsvbs import metrics
from bsvbs.errors import CapabilityError, ShapeError, UndefinedSavingsError
from bsvbs.learner import regret_bound


def log_for(rows, arms):
    rows = np.asarray(rows, dtype=float)
    arms = np.asarray(arms)
    idx = np.arange(len(arms))
    z = np.zeros(len(arms))
    return metrics.RunLog(arms, rows[idx, arms], z, z, z, z, z, rows)


def test_oracle_play_has_zero_regret():
    rows = np.tile([0.2, 0.8], (50, 1))
    c = metrics.regret_curve([log_for(rows, [1] * 50)])
    assert np.all(c.mean == 0)


def test_linear_regret():
    rows = np.tile([0.2, 0.8], (40, 1))
    c = metrics.regret_curve([log_for(rows, [0] * 40)])
    assert c.mean == pytest.approx(0.6 * np.arange(1, 41))
    assert metrics.average_regret(c, 17) == pytest.approx(0.6)
    assert metrics.average_regret(c, 40) == pytest.approx(0.6)


def test_single_seed_is_its_own_average():
    r = np.random.default_rng(0)
    rows = r.random((30, 4))
    run = log_for(rows, r.integers(0, 4, 30))
    assert np.array_equal(metrics.regret_curve([run]).mean, metrics.run_regret(run))
    assert np.all(metrics.regret_curve([run]).ci == 0)


def test_prefix_hindsight_matches_oracle_at_horizon():
    from bsvbs.baselines import oracle_best_fixed

    r = np.random.default_rng(1)
    rows = r.random((100, 5))
    run = log_for(rows, r.integers(0, 5, 100))
    _, best = oracle_best_fixed(rows)
    assert metrics.run_regret(run)[-1] == pytest.approx(best - run.reward.sum(), abs=1e-9)


def test_regret_is_bit_stable():
    r = np.random.default_rng(2)
    runs = [log_for(r.random((60, 3)), r.integers(0, 3, 60)) for _ in range(3)]
    a = metrics.regret_curve(runs)
    b = metrics.regret_curve(runs)
    assert np.array_equal(a.mean, b.mean) and np.array_equal(a.ci, b.ci)


def test_missing_rows():
    run = log_for(np.ones((3, 2)), [0, 1, 0])
    run.rows = None
    with pytest.raises(CapabilityError):
        metrics.regret_curve([run])


def test_unequal_horizons():
    with pytest.raises(ShapeError):
        metrics.regret_curve([log_for(np.ones((3, 2)), [0] * 3), log_for(np.ones((4, 2)), [0] * 4)])


def test_runlog_check():
    run = log_for(np.ones((3, 2)) * 0.5, [0, 1, 0])
    run.check()
    run.reward = run.reward.copy()
    run.reward[1] = 0.4
    with pytest.raises(ShapeError):
        run.check()


def test_bound_ratio():
    c = metrics.RegretCurve(np.array([regret_bound(16, 1), regret_bound(16, 2)]), np.zeros(2), 1)
    assert metrics.bound_ratio(c, 16) == pytest.approx(1.0)
    c0 = metrics.RegretCurve(np.zeros(5), np.zeros(5), 1)
    assert metrics.bound_ratio(c0, 16) == 0.0


def test_hyperslot_power(caplog):
    assert np.all(metrics.hyperslot_power(np.full(1000, 10.0)) == 10.0)
    assert metrics.hyperslot_power([1, 3, 5, 7], 2).tolist() == [2.0, 6.0]
    assert len(metrics.hyperslot_power(np.zeros(100_000), 200)) == 500
    with caplog.at_level(logging.WARNING):
        assert metrics.hyperslot_power([1, 3, 5], 2).tolist() == [2.0]
    assert "trailing" in caplog.text
    with pytest.raises(ValueError):
        metrics.hyperslot_power([1.0], 0)


def test_savings_examples():
    assert metrics.savings_percent(992.1, 1052.6, 955.1) == pytest.approx(62.1, abs=0.05)
    assert metrics.savings_percent(2609.8, 2735.6, 2566.2) == pytest.approx(74.3, abs=0.05)
    assert metrics.savings_percent(10.0, 20.0, 10.0) == 100.0
    with pytest.raises(UndefinedSavingsError):
        metrics.savings_percent(5.0, 10.0, 10.0)


def test_per_slot_optimal_fraction():
    rows = np.array([[0.1, 0.9], [0.5, 0.5], [0.7, 0.2]])
    run = log_for(rows, [1, 1, 1])
    assert metrics.per_slot_optimal_fraction(run) == pytest.approx(2 / 3)


def test_csv_writers(tmp_path):
    c = metrics.RegretCurve(np.array([0.5, 1.0]), np.array([0.1, 0.2]), 2)
    metrics.write_regret(tmp_path / "r.csv", c)
    assert (tmp_path / "r.csv").read_text() == "t,regret_mean,regret_ci\n1,0.5,0.1\n2,1.0,0.2\n"
    metrics.write_power(tmp_path / "p.csv", [1.0, 3.0], [0.5, 0.5], 2)
    assert (tmp_path / "p.csv").read_text().splitlines() == ["hyperslot,mean_total_w,mean_cpu_w", "1,2.0,0.5"]
