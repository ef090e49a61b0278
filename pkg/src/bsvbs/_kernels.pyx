# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see _pykernels.py for the reference semantics."""

import math

import numpy as np

from libc.math cimport exp, log, sqrt
from libc.stdint cimport int64_t, uint64_t

from .errors import NormalizationError

cdef double E_MINUS_1 = math.e - 1.0
cdef double TWO_POW_M53 = 1.0 / 9007199254740992.0
cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double _anytime_gamma(Py_ssize_t k, int64_t t) noexcept nogil:
    cdef double g = sqrt(k * log(<double>k) / (E_MINUS_1 * t))
    return 1.0 if g > 1.0 else g


def anytime_gamma(Py_ssize_t arm_count, int64_t t):
    return _anytime_gamma(arm_count, t)


cdef void _mix(const double[::1] lw, double gamma, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, k = lw.shape[0]
    cdef double m = lw[0], s = 0.0, floor, keep
    for i in range(1, k):
        if lw[i] > m:
            m = lw[i]
    for i in range(k):
        out[i] = exp(lw[i] - m)
    for i in range(k):
        s += out[i]
    floor = gamma / k
    keep = 1.0 - gamma
    for i in range(k):
        out[i] = floor + keep * (out[i] / s)


cdef Py_ssize_t _inverse_cdf(const double[::1] probs, double u) noexcept nogil:
    cdef Py_ssize_t i, last = 0, k = probs.shape[0]
    cdef double c = 0.0
    for i in range(k):
        if probs[i] > 0.0:
            last = i
        c += probs[i]
        if u < c:
            return i
    return last


def mix_distribution(const double[::1] log_weights, double gamma, double[::1] out):
    _mix(log_weights, gamma, out)


def inverse_cdf(const double[::1] probs, double u):
    return _inverse_cdf(probs, u)


def exp3_play(const double[:, ::1] rewards, double[::1] log_weights, double gamma,
              bint anytime, int64_t t0, rng_state):
    cdef Py_ssize_t T = rewards.shape[0], k = rewards.shape[1]
    cdef Py_ssize_t step, i, arm
    cdef uint64_t state = rng_state
    cdef int64_t t = t0
    cdef double u, f, total, low
    y_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] y = y_arr
    arms_arr = np.empty(T, dtype=np.int64)
    chosen_arr = np.empty(T, dtype=np.float64)
    sums_arr = np.empty(T, dtype=np.float64)
    mins_arr = np.empty(T, dtype=np.float64)
    cdef int64_t[::1] arms = arms_arr
    cdef double[::1] chosen_p = chosen_arr
    cdef double[::1] sums = sums_arr
    cdef double[::1] mins = mins_arr
    for step in range(T):
        _mix(log_weights, gamma, y)
        state = state + GOLDEN_GAMMA
        u = (_mix64(state) >> 11) * TWO_POW_M53
        arm = _inverse_cdf(y, u)
        total = 0.0
        low = y[0]
        for i in range(k):
            total += y[i]
            if y[i] < low:
                low = y[i]
        f = rewards[step, arm]
        if not (0.0 <= f <= 1.0):
            raise NormalizationError(f"reward {f!r} at slot {t} outside [0, 1]")
        log_weights[arm] += gamma * (f / y[arm]) / k
        arms[step] = arm
        chosen_p[step] = y[arm]
        sums[step] = total
        mins[step] = low
        t += 1
        if anytime:
            gamma = _anytime_gamma(k, t)
    return arms_arr, chosen_arr, sums_arr, mins_arr, gamma, int(state)


def surrogate_table(const double[:, ::1] contexts, const double[:, ::1] policies,
                    coeffs, double tx_max):
    cdef double cap_dl, cap_ul, p0_cpu, kappa_dl, kappa_ul, eta, p0_rf, beta_tx
    cap_dl, cap_ul, p0_cpu, kappa_dl, kappa_ul, eta, p0_rf, beta_tx = [float(c) for c in coeffs]
    cdef Py_ssize_t T = contexts.shape[0], K = policies.shape[0], i, j
    util_arr = np.empty((T, K))
    rdl_arr = np.empty((T, K))
    rul_arr = np.empty((T, K))
    tot_arr = np.empty((T, K))
    cpu_arr = np.empty((T, K))
    cdef double[:, ::1] util = util_arr
    cdef double[:, ::1] rdl = rdl_arr
    cdef double[:, ::1] rul = rul_arr
    cdef double[:, ::1] tot = tot_arr
    cdef double[:, ::1] cpuw = cpu_arr
    cdef double d_dl, d_ul, c_dl, c_ul, cap_m_dl, cap_m_ul, pen_dl, pen_ul
    cdef double nu_dl, nu_ul, m, r_dl, r_ul, cpu, x
    cdef bint both
    with nogil:
        for i in range(T):
            d_dl = contexts[i, 0]
            d_ul = contexts[i, 1]
            c_dl = contexts[i, 2]
            c_ul = contexts[i, 3]
            cap_m_dl = 2.0 * c_dl - 2.0
            if cap_m_dl < 0.0:
                cap_m_dl = 0.0
            if cap_m_dl > 28.0:
                cap_m_dl = 28.0
            cap_m_ul = 2.0 * c_ul - 2.0
            if cap_m_ul < 0.0:
                cap_m_ul = 0.0
            if cap_m_ul > 28.0:
                cap_m_ul = 28.0
            pen_dl = 1.0 + eta * (15.0 - c_dl) / 14.0
            pen_ul = 1.0 + eta * (15.0 - c_ul) / 14.0
            both = d_dl > 0.0 and d_ul > 0.0
            for j in range(K):
                m = policies[j, 1]
                if cap_m_dl < m:
                    m = cap_m_dl
                nu_dl = (m + 1.0) / 29.0
                m = policies[j, 3]
                if cap_m_ul < m:
                    m = cap_m_ul
                nu_ul = (m + 1.0) / 29.0
                x = cap_dl * nu_dl * policies[j, 2]
                r_dl = x if x < d_dl else d_dl
                x = cap_ul * nu_ul * policies[j, 4]
                r_ul = x if x < d_ul else d_ul
                cpu = p0_cpu + kappa_dl * (r_dl / cap_dl) * pen_dl + kappa_ul * (r_ul / cap_ul) * pen_ul
                tot[i, j] = cpu + p0_rf + beta_tx * (policies[j, 0] / tx_max) * policies[j, 2]
                cpuw[i, j] = cpu
                rdl[i, j] = r_dl
                rul[i, j] = r_ul
                if both:
                    util[i, j] = log(1.0 + r_dl / d_dl) + log(1.0 + r_ul / d_ul)
                else:
                    util[i, j] = 0.0
    return util_arr, rdl_arr, rul_arr, tot_arr, cpu_arr
