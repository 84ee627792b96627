"""Ascending-series evaluation of 1F2 and the two-anyon normalization sum."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import ResourceError

TERM_CAP = 100_000
REL_STOP = 1e-16


def hyp1f2(a, b1, b2, x, *, term_cap=TERM_CAP, rel_stop=REL_STOP):
    """Generalized hypergeometric 1F2(a; b1, b2; x) for real x >= 0.

    Direct ascending series; terms are generated by their ratio and summed
    with ``math.fsum``. Summation stops once the sequence has turned down
    and a term falls below ``rel_stop`` times the partial sum.

    Raises
    ------
    ResourceError
        If ``term_cap`` terms are not enough; ``partial`` holds the sum so far.
    """
    if x < 0:
        raise ValueError("series implemented for x >= 0 only")
    term = 1.0
    terms = [term]
    for m in range(term_cap):
        ratio = (a + m) * x / ((b1 + m) * (b2 + m) * (m + 1))
        term *= ratio
        terms.append(term)
        if ratio < 1.0 and abs(term) < rel_stop * abs(math.fsum(terms)):
            return math.fsum(terms)
    raise ResourceError(
        f"1F2 series did not converge in {term_cap} terms", partial=math.fsum(terms)
    )


def _series_length(s_max):
    # terms peak near m = s/2 and decay like a Gaussian of width ~ sqrt(s)
    half = 0.5 * s_max
    return int(half + 12.0 * math.sqrt(half + 1.0) + 40)


def anyon_series(s, nu, *, term_cap=TERM_CAP, rel_stop=REL_STOP):
    """Log of F(s) = sum_m s^(2m) / (4^m Gamma(2m+1+nu)) with its moments.

    ``s = |z|^2`` for the relative coordinate. The normalized weights
    w_m = c_m s^(2m) / F form a distribution over m; the first two moments
    of 2m give the derivatives of L = ln F needed for the metric::

        s dL/ds          = <2m>
        d/ds (s dL/ds)   = Var(2m) / s

    Returns
    -------
    log_f, mean, var_over_s : ndarray
        ``ln F(s)``, ``<2m>`` and ``Var(2m)/s`` evaluated elementwise.
    """
    s = np.asarray(s, dtype=float)
    flat = np.atleast_1d(s).ravel()
    if np.any(flat < 0):
        raise ValueError("s = |z|^2 must be nonnegative")
    n_terms = _series_length(float(flat.max(initial=0.0)))
    if n_terms > term_cap:
        raise ResourceError(f"anyon series needs {n_terms} terms > cap {term_cap}")
    m = np.arange(n_terms)
    log_c = -m * math.log(4.0) - gammaln(2 * m + 1 + nu)

    log_f = np.empty_like(flat)
    mean = np.empty_like(flat)
    var_s = np.empty_like(flat)

    tiny = flat < 1e-150
    # c_0 term only; Var(2m)/s -> 4 c_1 s / c_0
    log_f[tiny] = log_c[0]
    mean[tiny] = 0.0
    var_s[tiny] = 4.0 * math.exp(log_c[1] - log_c[0]) * flat[tiny]

    big = ~tiny
    if np.any(big):
        ls = np.log(flat[big])[:, None]
        log_t = log_c[None, :] + 2.0 * m[None, :] * ls
        peak = log_t.max(axis=1, keepdims=True)
        w = np.exp(log_t - peak)
        total = w.sum(axis=1)
        if np.any(w[:, -1] > rel_stop * total):
            raise ResourceError("anyon series truncated before convergence")
        w /= total[:, None]
        two_m = 2.0 * m[None, :]
        mu = (w * two_m).sum(axis=1)
        var = (w * (two_m - mu[:, None]) ** 2).sum(axis=1)
        log_f[big] = peak[:, 0] + np.log(total)
        mean[big] = mu
        var_s[big] = var / flat[big]

    shape = s.shape
    return log_f.reshape(shape), mean.reshape(shape), var_s.reshape(shape)
