"""numpy implementations of the Monte Carlo kernels.

Reference backend, used when the compiled extension is unavailable.  Draw
streams consume the generator exactly as ``_ckernels`` does, so both
backends produce the same variates from the same seed, up to about one
ulp of rounding in the transcendental functions.
"""

import numpy as np

# Expected acceptance of the polar method is pi/4; oversample a little.
_OVERSAMPLE = 1.3


def standard_t(rng, df, k):
    """Draw ``k`` Student-t variates with ``df`` degrees of freedom.

    Bailey's polar method: for (U, V) uniform on the unit disc with
    W = U**2 + V**2, U * sqrt(df * (W**(-2/df) - 1) / W) is t-distributed.
    ``expm1(-2/df * log(W))`` keeps the bracket accurate at large ``df``.
    Pairs are consumed in stream order until ``k`` are accepted.
    """
    out = np.empty(k, dtype=np.float64)
    expo = -2.0 / df
    filled = 0
    while filled < k:
        need = k - filled
        u = rng.random(2 * (int(need * _OVERSAMPLE) + 16))
        uu = 2.0 * u[0::2] - 1.0
        vv = 2.0 * u[1::2] - 1.0
        w = uu * uu + vv * vv
        keep = (w <= 1.0) & (w > 0.0)
        uu = uu[keep][:need]
        w = w[keep][:need]
        out[filled:filled + uu.size] = uu * np.sqrt(df * np.expm1(expo * np.log(w)) / w)
        filled += uu.size
    return out


def _abs_diff(mu_x, mu_y, relative):
    d = np.subtract(mu_y, mu_x)
    if relative:
        d /= mu_x
    return np.abs(d, out=d)


def abs_kth(values, rank):
    """The ``rank``-th smallest (1-based) absolute value."""
    a = np.abs(np.asarray(values, dtype=np.float64))
    return float(np.partition(a, rank - 1)[rank - 1])


def diff_abs_kth(mu_x, mu_y, rank, relative):
    """The ``rank``-th smallest of ``|mu_y - mu_x|`` (or ``|(mu_y - mu_x) / mu_x|``)."""
    a = _abs_diff(mu_x, mu_y, relative)
    return float(np.partition(a, rank - 1)[rank - 1])


def count_abs_within(mu_x, mu_y, bound, relative):
    """Number of draws with ``|difference| <= bound``."""
    return int(np.count_nonzero(_abs_diff(mu_x, mu_y, relative) <= bound))
