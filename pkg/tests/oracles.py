"""Independent reference computations used by several test modules."""

import math

import numpy as np
from scipy import integrate, stats


def bisect_zero_centered_bound(draws, alpha, tol=1e-12, max_iter=200):
    """Smallest c with ECDF mass of (-c, c] >= 1 - alpha, by bisection on the signed draws."""
    d = np.sort(np.asarray(draws, dtype=float))
    k = d.size
    target = 1.0 - alpha

    def mass(c):
        return (np.searchsorted(d, c, side="right") - np.searchsorted(d, -c, side="right")) / k

    lo, hi = 0.0, float(np.max(np.abs(d))) * (1 + 1e-12) + 1e-300
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mass(mid) >= target - 1e-12:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    return hi


def order_statistic_gap(draws, rank):
    """Distance from the rank-th smallest |d| to its neighbours."""
    a = np.sort(np.abs(np.asarray(draws, dtype=float)))
    i = rank - 1
    below = a[i] - a[i - 1] if i > 0 else 0.0
    above = a[i + 1] - a[i] if i + 1 < a.size else 0.0
    return max(below, above)


def welch_textbook(x, y):
    """Welch t-test from summaries, written out longhand."""
    vx = x.sd**2 / x.n
    vy = y.sd**2 / y.n
    t = (y.mean - x.mean) / math.sqrt(vx + vy)
    df = (vx + vy) ** 2 / (vx**2 / (x.n - 1) + vy**2 / (y.n - 1))
    return t, df, 2 * stats.t.sf(abs(t), df)


def exact_sample(mean, sd, n, seed):
    """n observations rescaled to have exactly the given mean and sd."""
    z = np.random.default_rng(seed).standard_normal(n)
    z = (z - z.mean()) / z.std(ddof=1)
    return mean + sd * z


def posterior_inside_mass(x, y, lo, hi):
    """P(lo <= mu_Y - mu_X <= hi) for independent scaled-t posteriors, by quadrature."""
    px = stats.t(x.n - 1, loc=x.mean, scale=x.se)
    py = stats.t(y.n - 1, loc=y.mean, scale=y.se)

    def integrand(u):
        return px.pdf(u) * (py.cdf(u + hi) - py.cdf(u + lo))

    span = 60 * max(x.se, y.se)
    val, _ = integrate.quad(integrand, x.mean - span, x.mean + span, limit=400, points=[x.mean])
    return val
