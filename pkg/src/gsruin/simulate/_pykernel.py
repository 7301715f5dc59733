"""Pure-Python path kernel; the reference the compiled kernel must match bit for bit.

Every random quantity is built from ``rng.random()`` (the bit generator's
``next_double``) with the same expression order as the compiled kernel.
"""
from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def _normal(rng) -> float:
    u1 = 1.0 - rng.random()
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)


def _expo(rng) -> float:
    return -math.log(1.0 - rng.random())


def _first_above(cum, u: float, n: int) -> int:
    k = 0
    while k < n - 1 and u >= cum[k]:
        k += 1
    return k


def _wald(rng, mu: float, lam: float) -> float:
    nv = _normal(rng)
    y = nv * nv
    muy = mu * y
    x = mu - 2.0 * mu * muy / (muy + math.sqrt(muy * muy + 4.0 * mu * lam * y))
    if rng.random() <= mu / (mu + x):
        return x
    return mu * mu / x


def _crossing_time(rng, x0: float, x1: float, h: float, sigma: float) -> float:
    """First zero of a Brownian bridge from ``x0 > 0`` to ``x1`` over ``h``,
    given that it hits zero."""
    a = x0 / sigma
    b = abs(x1) / sigma
    if b == 0.0:
        return h
    s = _wald(rng, a * h / b, a * a)
    return s * h / (h + s)


def _claim(rng, p) -> float:
    if p["claim_mode"] == 0:
        cum = p["mix_cum"]
        k = _first_above(cum, rng.random(), len(cum))
        rate = p["mix_rate"][k]
        z = 0.0
        for _ in range(int(p["mix_shape"][k])):
            z += _expo(rng) / rate
        return z
    xs, cdf = p["tab_x"], p["tab_cdf"]
    u = rng.random()
    j = int(np.searchsorted(cdf, u, side="right"))
    if j >= len(cdf):
        return float(xs[-1])
    if j == 0:
        return float(xs[0])
    w = (u - cdf[j - 1]) / (cdf[j] - cdf[j - 1])
    return float(xs[j - 1] + w * (xs[j] - xs[j - 1]))


def run_block(rng, n_paths: int, u: float, p: dict, code, T, xb, yd) -> None:
    """Simulate ``n_paths`` paths from level ``u``; fill the output arrays in place.

    codes: 0 survived (level cap or horizon), 1 ruin by a claim, 2 ruin by oscillation.
    """
    c, sigma = p["c"], p["sigma"]
    t_max, cap, step = p["t_max"], p["level_cap"], p["grid_step"]
    start = p["start_phase"]
    alpha_cum, rates, jump = p["alpha_cum"], p["rates"], p["jump_cum"]
    n = len(rates)
    s2 = sigma * sigma
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
            # a forced start phase only conditions the first interclaim time
            i = start if first and start >= 0 else _first_above(alpha_cum, rng.random(), n)
            first = False
            v = 0.0
            while True:
                v += _expo(rng) / rates[i]
                j = _first_above(jump[i], rng.random(), n + 1)
                if j >= n:
                    break
                i = j
            horizon = False
            if t + v >= t_max:
                v = t_max - t
                horizon = True
            nseg = 1 if step <= 0.0 else max(1, int(math.ceil(v / step)))
            h = v / nseg
            if h <= 0.0:
                nseg = 0
            sh = math.sqrt(h)
            hit = False
            for _ in range(nseg):
                x1 = x + c * h + sigma * sh * _normal(rng)
                if x1 <= 0.0:
                    hit = True
                elif rng.random() < math.exp(-2.0 * x * x1 / (s2 * h)):
                    hit = True
                if hit:
                    T[k] = t + _crossing_time(rng, x, x1, h, sigma)
                    code[k] = 2
                    break
                x = x1
                t += h
            if hit:
                break
            if horizon:
                T[k] = t
                break
            z = _claim(rng, p)
            x1 = x - z
            if x1 <= 0.0:
                code[k] = 1 if x1 < 0.0 else 2
                T[k] = t
                xb[k] = x
                yd[k] = -x1
                break
            x = x1
            if x >= cap:
                T[k] = t
                break
