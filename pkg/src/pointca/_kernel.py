"""Compiled inner loop: one batch of micro time-steps with immediate writes."""

import numpy as np
from numba import njit

_CENTER_BIT = 4


@njit(cache=True, inline="always")
def _window_code(cells, x, y, n):
    code = 0
    bit = 0
    for dy in (-1, 0, 1):
        yy = (y + dy + n) % n
        for dx in (-1, 0, 1):
            code |= np.int64(cells[yy, (x + dx + n) % n]) << bit
            bit += 1
    return code


@njit(cache=True, inline="always")
def _bernoulli(rng, p):
    if p <= 0.0:
        return False
    if p >= 1.0:
        return True
    return rng.random() < p


@njit(cache=True)
def sweep(cells, sites, rule_a, hits, counts, use_b, use_c1, use_c2,
          pi0, pi1, pi2, hit_pre_adjust, rng, tau0):
    """Update ``sites`` (flat ``y * n + x`` indices) in order.

    Mirrors :func:`pointca.rules.apply_pipeline`, including the order and
    number of random draws. Returns the absolute micro-step index of the last
    state change (``tau0 + i + 1`` for site ``i``), or -1 if nothing changed.
    """
    n = cells.shape[0]
    last = -1
    for i in range(sites.shape[0]):
        y = sites[i] // n
        x = sites[i] % n
        code = _window_code(cells, x, y, n)
        old = cells[y, x]
        s = rule_a[code]
        if hit_pre_adjust:
            hit = hits[code]
        code = (code & ~(1 << _CENTER_BIT)) | (np.int64(s) << _CENTER_BIT)
        if not hit_pre_adjust:
            hit = hits[code]
        if use_b and hit == 0 and _bernoulli(rng, pi0):
            s = 1 if rng.random() < 0.5 else 0
        if use_c1 and hit == 1 and s == 0 and _bernoulli(rng, pi1):
            s = 1
        if use_c2 and hit == 2 and counts[code] == 1 and _bernoulli(rng, pi2):
            s = 1
        if s != old:
            cells[y, x] = s
            last = tau0 + i + 1
    return last
