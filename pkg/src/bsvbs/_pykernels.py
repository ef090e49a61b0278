"""Pure-Python hot kernels.

Reference twin of ``_kernels.pyx``. Both evaluate every floating-point
expression in the same order with libm ``exp``/``log``/``sqrt``, so the two
backends produce bit-identical results; ``tests/test_kernels.py`` holds
them to that.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NormalizationError
from .rng import GOLDEN_GAMMA, MASK64, TWO_POW_M53, mix64

E_MINUS_1 = math.e - 1.0


def anytime_gamma(arm_count: int, t: int) -> float:
    g = math.sqrt(arm_count * math.log(arm_count) / (E_MINUS_1 * t))
    return 1.0 if g > 1.0 else g


def mix_distribution(log_weights, gamma: float, out) -> None:
    k = len(log_weights)
    lw = log_weights.tolist() if isinstance(log_weights, np.ndarray) else list(log_weights)
    m = max(lw)
    e = [math.exp(v - m) for v in lw]
    s = 0.0
    for v in e:
        s += v
    floor = gamma / k
    keep = 1.0 - gamma
    for i in range(k):
        out[i] = floor + keep * (e[i] / s)


def inverse_cdf(probs, u: float) -> int:
    c = 0.0
    last = 0
    for i, p in enumerate(probs):
        if p > 0.0:
            last = i
        c += p
        if u < c:
            return i
    return last


def exp3_play(rewards, log_weights, gamma: float, anytime: bool, t0: int, rng_state: int):
    """Run Exp3 over ``rewards`` reading only ``rewards[t, arm_t]``.

    ``log_weights`` is updated in place. Returns per-slot arms, chosen-arm
    probabilities, distribution sums and minima, plus the final gamma and
    generator state.
    """
    T, k = rewards.shape
    arms = np.empty(T, dtype=np.int64)
    chosen_p = np.empty(T, dtype=np.float64)
    sums = np.empty(T, dtype=np.float64)
    mins = np.empty(T, dtype=np.float64)
    lw = log_weights.tolist()
    state = rng_state
    t = t0
    for step in range(T):
        m = max(lw)
        e = [math.exp(v - m) for v in lw]
        s = 0.0
        for v in e:
            s += v
        floor = gamma / k
        keep = 1.0 - gamma
        y = [floor + keep * (v / s) for v in e]

        state = (state + GOLDEN_GAMMA) & MASK64
        u = (mix64(state) >> 11) * TWO_POW_M53
        arm = inverse_cdf(y, u)

        total = 0.0
        low = y[0]
        for v in y:
            total += v
            if v < low:
                low = v

        f = float(rewards[step, arm])
        if not 0.0 <= f <= 1.0:
            raise NormalizationError(f"reward {f!r} at slot {t} outside [0, 1]")
        phi = f / y[arm]
        lw[arm] += gamma * phi / k

        arms[step] = arm
        chosen_p[step] = y[arm]
        sums[step] = total
        mins[step] = low
        t += 1
        if anytime:
            gamma = anytime_gamma(k, t)
    log_weights[:] = lw
    return arms, chosen_p, sums, mins, gamma, state


def surrogate_table(contexts, policies, coeffs, tx_max: float):
    """Evaluate the surrogate vBS for every (context, policy) pair.

    ``contexts`` rows are (d_dl, d_ul, cqi_dl, cqi_ul); ``policies`` rows
    are RadioPolicy tuples; ``coeffs`` is (cap_dl, cap_ul, p0_cpu,
    kappa_dl, kappa_ul, eta, p0_rf, beta_tx). Returns utility, r_dl, r_ul,
    total_w and cpu_w arrays of shape (T, K).
    """
    cap_dl, cap_ul, p0_cpu, kappa_dl, kappa_ul, eta, p0_rf, beta_tx = (float(c) for c in coeffs)
    T = contexts.shape[0]
    K = policies.shape[0]
    util = np.empty((T, K))
    r_dl_out = np.empty((T, K))
    r_ul_out = np.empty((T, K))
    total_out = np.empty((T, K))
    cpu_out = np.empty((T, K))
    pols = policies.tolist()
    for i, (d_dl, d_ul, c_dl, c_ul) in enumerate(contexts.tolist()):
        cap_m_dl = min(max(2.0 * c_dl - 2.0, 0.0), 28.0)
        cap_m_ul = min(max(2.0 * c_ul - 2.0, 0.0), 28.0)
        pen_dl = 1.0 + eta * (15.0 - c_dl) / 14.0
        pen_ul = 1.0 + eta * (15.0 - c_ul) / 14.0
        both = d_dl > 0.0 and d_ul > 0.0
        for j, (tx, m_dl, a_dl, m_ul, a_ul) in enumerate(pols):
            nu_dl = (min(m_dl, cap_m_dl) + 1.0) / 29.0
            nu_ul = (min(m_ul, cap_m_ul) + 1.0) / 29.0
            r_dl = min(d_dl, cap_dl * nu_dl * a_dl)
            r_ul = min(d_ul, cap_ul * nu_ul * a_ul)
            cpu = p0_cpu + kappa_dl * (r_dl / cap_dl) * pen_dl + kappa_ul * (r_ul / cap_ul) * pen_ul
            total = cpu + p0_rf + beta_tx * (tx / tx_max) * a_dl
            if both:
                u = math.log(1.0 + r_dl / d_dl) + math.log(1.0 + r_ul / d_ul)
            else:
                u = 0.0
            util[i, j] = u
            r_dl_out[i, j] = r_dl
            r_ul_out[i, j] = r_ul
            total_out[i, j] = total
            cpu_out[i, j] = cpu
    return util, r_dl_out, r_ul_out, total_out, cpu_out
