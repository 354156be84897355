"""Small fitting helpers for entropy time series."""

from __future__ import annotations

import numpy as np


def linear_fit(x, y):
    """Least-squares line ``y = slope x + intercept``; returns ``(slope, intercept, r2)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


def loglog_slope(t, y, window):
    """Slope of ``ln y`` against ``ln t`` for ``window[0] <= t <= window[1]``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = (t >= window[0]) & (t <= window[1])
    if mask.sum() < 2 or np.any(y[mask] <= 0):
        raise ValueError("log-log fit needs at least two positive points in the window")
    return linear_fit(np.log(t[mask]), np.log(y[mask]))[0]


def window_fit(t, y, window):
    t = np.asarray(t, dtype=float)
    mask = (t >= window[0]) & (t <= window[1])
    return linear_fit(t[mask], np.asarray(y, dtype=float)[mask])


def saturation(series, fraction: float = 0.25):
    """Late-time plateau of an ensemble.

    Each trajectory is averaged over the last ``fraction`` of its time steps;
    returns the mean of those averages and its standard error.
    """
    series = np.atleast_2d(np.asarray(series, dtype=float))
    n_t = series.shape[1]
    start = n_t - max(1, int(round(fraction * (n_t - 1))))
    per_traj = series[:, start:].mean(axis=1)
    n = per_traj.size
    err = per_traj.std(ddof=1) / np.sqrt(n) if n > 1 else 0.0
    return float(per_traj.mean()), float(err)


def agree(a, b, n_sigma: float = 3.0) -> bool:
    """``|a - b| <= n_sigma * sqrt(err_a^2 + err_b^2)`` for ``(value, err)`` pairs."""
    return abs(a[0] - b[0]) <= n_sigma * np.hypot(a[1], b[1])
