"""Shared helpers for the test suite."""

import numpy as np


def ks_bound(stats, law, nodes: int = 4096) -> float:
    """Upper bound on the Kolmogorov–Smirnov distance between a sample and
    an analytic law.

    The exact KS statistic needs the cdf at every sample point; evaluating
    it on a subsample of order statistics and adding the largest cdf gap
    between adjacent probed nodes bounds the supremum from above, which is
    the conservative side for `< threshold` assertions.
    """
    x = np.sort(np.asarray(stats, dtype=float))
    idx = np.unique(np.linspace(0, x.size - 1, min(nodes, x.size)).astype(int))
    cdf = np.atleast_1d(np.asarray(law.cdf(x[idx]), dtype=float))
    upper = (idx + 1) / x.size
    lower = idx / x.size
    d = max(float(np.max(upper - cdf)), float(np.max(cdf - lower)))
    gap = float(np.max(np.diff(cdf))) if cdf.size > 1 else 1.0
    return d + gap
