# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled path kernel; mirrors ``_pykernel`` statement for statement."""
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport cos, exp, log, sqrt, ceil, fabs
from numpy.random cimport bitgen_t

import numpy as np

cdef double TWO_PI = 2.0 * 3.141592653589793


cdef inline double _uni(bitgen_t *bg) noexcept nogil:
    return bg.next_double(bg.state)


cdef inline double _normal(bitgen_t *bg) noexcept nogil:
    cdef double u1 = 1.0 - _uni(bg)
    cdef double u2 = _uni(bg)
    return sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)


cdef inline double _expo(bitgen_t *bg) noexcept nogil:
    return -log(1.0 - _uni(bg))


cdef inline Py_ssize_t _first_above(const double[:] cum, double u, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t k = 0
    while k < n - 1 and u >= cum[k]:
        k += 1
    return k


cdef inline double _wald(bitgen_t *bg, double mu, double lam) noexcept nogil:
    cdef double nv = _normal(bg)
    cdef double y = nv * nv
    cdef double muy = mu * y
    cdef double x = mu - 2.0 * mu * muy / (muy + sqrt(muy * muy + 4.0 * mu * lam * y))
    if _uni(bg) <= mu / (mu + x):
        return x
    return mu * mu / x


cdef inline double _crossing_time(bitgen_t *bg, double x0, double x1, double h, double sigma) noexcept nogil:
    cdef double a = x0 / sigma
    cdef double b = fabs(x1) / sigma
    cdef double s
    if b == 0.0:
        return h
    s = _wald(bg, a * h / b, a * a)
    return s * h / (h + s)


cdef inline Py_ssize_t _search_right(const double[:] cdf, double u) noexcept nogil:
    # first index j with cdf[j] > u, as numpy.searchsorted(side="right")
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _claim(bitgen_t *bg, int mode, const double[:] mix_cum, const double[:] mix_rate,
                          const long[:] mix_shape, const double[:] tab_x, const double[:] tab_cdf) noexcept nogil:
    cdef Py_ssize_t k, j, r
    cdef double z, rate, u, w
    if mode == 0:
        k = _first_above(mix_cum, _uni(bg), mix_cum.shape[0])
        rate = mix_rate[k]
        z = 0.0
        for r in range(mix_shape[k]):
            z += _expo(bg) / rate
        return z
    u = _uni(bg)
    j = _search_right(tab_cdf, u)
    if j >= tab_cdf.shape[0]:
        return tab_x[tab_x.shape[0] - 1]
    if j == 0:
        return tab_x[0]
    w = (u - tab_cdf[j - 1]) / (tab_cdf[j] - tab_cdf[j - 1])
    return tab_x[j - 1] + w * (tab_x[j] - tab_x[j - 1])


def run_block(rng, Py_ssize_t n_paths, double u, dict p,
              signed char[:] code, double[:] T, double[:] xb, double[:] yd):
    """Same contract as the pure-Python ``run_block``."""
    cdef double c = p["c"], sigma = p["sigma"]
    cdef double t_max = p["t_max"], cap = p["level_cap"], step = p["grid_step"]
    cdef Py_ssize_t start = p["start_phase"]
    cdef const double[:] alpha_cum = p["alpha_cum"]
    cdef const double[:] rates = p["rates"]
    cdef const double[:, :] jump = p["jump_cum"]
    cdef int mode = p["claim_mode"]
    cdef const double[:] mix_cum = p["mix_cum"]
    cdef const double[:] mix_rate = p["mix_rate"]
    cdef const long[:] mix_shape = p["mix_shape"]
    cdef const double[:] tab_x = p["tab_x"]
    cdef const double[:] tab_cdf = p["tab_cdf"]
    cdef Py_ssize_t n = rates.shape[0]
    cdef double s2 = sigma * sigma
    cdef Py_ssize_t k, i, j, nseg, g
    cdef double x, t, v, h, sh, x1, z
    cdef bint horizon, hit, first

    capsule = rng.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid bit generator capsule")
    cdef bitgen_t *bg = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")

    with rng.bit_generator.lock, nogil:
        for k in range(n_paths):
            code[k] = 0
            T[k] = 0.0
            xb[k] = 0.0
            yd[k] = 0.0
            x = u
            t = 0.0
            if x <= 0.0:
                code[k] = 2
                continue
            first = True
            while True:
                if first and start >= 0:
                    i = start
                else:
                    i = _first_above(alpha_cum, _uni(bg), n)
                first = False
                v = 0.0
                while True:
                    v += _expo(bg) / rates[i]
                    j = _first_above(jump[i], _uni(bg), n + 1)
                    if j >= n:
                        break
                    i = j
                horizon = False
                if t + v >= t_max:
                    v = t_max - t
                    horizon = True
                if step <= 0.0:
                    nseg = 1
                else:
                    nseg = <Py_ssize_t> ceil(v / step)
                    if nseg < 1:
                        nseg = 1
                h = v / nseg
                if h <= 0.0:
                    nseg = 0
                sh = sqrt(h)
                hit = False
                for g in range(nseg):
                    x1 = x + c * h + sigma * sh * _normal(bg)
                    if x1 <= 0.0:
                        hit = True
                    elif _uni(bg) < exp(-2.0 * x * x1 / (s2 * h)):
                        hit = True
                    if hit:
                        T[k] = t + _crossing_time(bg, x, x1, h, sigma)
                        code[k] = 2
                        break
                    x = x1
                    t += h
                if hit:
                    break
                if horizon:
                    T[k] = t
                    break
                z = _claim(bg, mode, mix_cum, mix_rate, mix_shape, tab_x, tab_cdf)
                x1 = x - z
                if x1 <= 0.0:
                    if x1 < 0.0:
                        code[k] = 1
                    else:
                        code[k] = 2
                    T[k] = t
                    xb[k] = x
                    yd[k] = -x1
                    break
                x = x1
                if x >= cap:
                    T[k] = t
                    break
