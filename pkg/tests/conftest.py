"""Shared oracles and small builders for the test suite."""

import numpy as np
import pytest

from spectradown import make_field


def random_field(h, w, seed=0, channels=("q",), dx=1.0):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((len(channels), h, w))
    return make_field(values, h, w, dx, channels)


def box_blur(values, size=3):
    """Periodic box filter along the last two axes."""
    out = np.zeros_like(values)
    c = size // 2
    for dy in range(-c, c + 1):
        for dx_ in range(-c, c + 1):
            out += np.roll(values, (dy, dx_), axis=(-2, -1))
    return out / size**2


def central_difference(objective, x, h_rel=1e-5):
    """Central finite differences of a scalar objective over a flat array."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    flat = x.ravel()
    for k in range(flat.size):
        h = h_rel * max(abs(flat[k]), 1.0)
        plus = flat.copy()
        plus[k] += h
        minus = flat.copy()
        minus[k] -= h
        grad.ravel()[k] = (objective(plus.reshape(x.shape)) - objective(minus.reshape(x.shape))) / (2 * h)
    return grad


def crps_quadrature(members, truth):
    """Integral oracle for the empirical-CDF CRPS.

    Integrates (F(t) - 1{t >= y})^2 exactly over the breakpoint intervals:
    the integrand is piecewise constant, so summing value * width over
    consecutive breakpoints is the limit of any dense Riemann grid.
    """
    members = np.asarray(members, dtype=float)
    pts = np.sort(np.unique(np.append(members, truth)))
    total = 0.0
    for left, right in zip(pts[:-1], pts[1:]):
        cdf = np.mean(members <= left)
        step = 1.0 if left >= truth else 0.0
        total += (cdf - step) ** 2 * (right - left)
    return total


def fair_crps_quadrature(members, truth):
    """Integral oracle for the fair estimator.

    fair = integral (F - H)^2 dt - 1/(M-1) * integral F(1-F) dt, the
    unbiasedness correction of the empirical-CDF score.
    """
    members = np.asarray(members, dtype=float)
    m = members.size
    pts = np.sort(members)
    spread = 0.0
    for left, right in zip(pts[:-1], pts[1:]):
        cdf = np.mean(members <= left)
        spread += cdf * (1.0 - cdf) * (right - left)
    return crps_quadrature(members, truth) - spread / (m - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
