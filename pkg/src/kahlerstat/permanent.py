"""Permanents and determinants of small dense matrices.

The permanent uses Ryser's inclusion-exclusion formula with Gray-code
ordering of the column subsets. Subsets are split into a high block,
walked one column flip at a time, and a low block of at most
``2**LOW_BITS`` subsets whose row sums are tabulated once and applied
with vectorised numpy arithmetic.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import ResourceError

MAX_ORDER = 20
LOW_BITS = 10


def permutation_parity(perm):
    """Parity (0 even, 1 odd) of a permutation given as a sequence of indices."""
    perm = list(perm)
    seen = [False] * len(perm)
    parity = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def _fsum_complex(values):
    values = np.asarray(values, dtype=complex)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _exact_sum(a, fermionic):
    # floats are dyadic rationals: over a common power-of-two denominator the
    # products and the sum are exact integer arithmetic
    n = a.shape[0]
    ratios = [[x.as_integer_ratio() for x in map(float, row)] for part in (a.real, a.imag)
              for row in part]
    denom = max(d for row in ratios for _, d in row)
    ints = [[num * (denom // d) for num, d in row] for row in ratios]
    re, im = ints[:n], ints[n:]
    total_re = total_im = 0
    for perm in itertools.permutations(range(n)):
        pr, pi = 1, 0
        for i, k in enumerate(perm):
            pr, pi = pr * re[i][k] - pi * im[i][k], pr * im[i][k] + pi * re[i][k]
        if fermionic and permutation_parity(perm):
            pr, pi = -pr, -pi
        total_re += pr
        total_im += pi
    scale = denom ** n
    return complex(float(Fraction(total_re, scale)), float(Fraction(total_im, scale)))


def signed_permutation_sum(matrix, fermionic=False, exact=False):
    """Explicit N!-term sum of prod_i a[i, P(i)] weighted by eta_P.

    Brute-force oracle; practical for N <= 8. With ``exact`` the sum is
    carried out in rational arithmetic on the given float entries, so the
    only rounding is the final conversion. This matters for determinants
    with heavy cancellation, where float products lose many digits.
    """
    a = np.asarray(matrix, dtype=complex)
    if exact:
        return _exact_sum(a, fermionic)
    n = a.shape[0]
    rows = np.arange(n)
    terms = []
    for perm in itertools.permutations(range(n)):
        term = np.prod(a[rows, perm])
        if fermionic and permutation_parity(perm):
            term = -term
        terms.append(term)
    return _fsum_complex(terms)


def _gray_table(cols):
    """Row sums for every subset of ``cols`` (shape (n_rows, k)), Gray ordered.

    Returns (sums, signs) with sums[s] the row-sum vector of subset s and
    signs[s] = (-1)**|s|.
    """
    n_rows, k = cols.shape
    size = 1 << k
    sums = np.zeros((size, n_rows), dtype=cols.dtype)
    signs = np.ones(size)
    current = np.zeros(n_rows, dtype=cols.dtype)
    gray_prev = 0
    for step in range(1, size):
        gray = step ^ (step >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        if gray & (1 << bit):
            current = current + cols[:, bit]
        else:
            current = current - cols[:, bit]
        sums[step] = current
        signs[step] = -1.0 if bin(gray).count("1") & 1 else 1.0
        gray_prev = gray
    return sums, signs


def _balance(a, sweeps=8):
    """Power-of-two row/column exponents that even out |a| (Sinkhorn-style).

    Scaling by powers of two is exact, and Ryser's alternating sum loses
    far less to cancellation on a balanced matrix.
    """
    mag = np.abs(a)
    n = a.shape[0]
    er = np.zeros(n, dtype=int)
    ec = np.zeros(n, dtype=int)
    for _ in range(sweeps):
        scaled = np.ldexp(mag, er[:, None] + ec[None, :])
        rs = scaled.sum(axis=1)
        if np.any(rs == 0):
            break
        er -= np.frexp(rs)[1]
        scaled = np.ldexp(mag, er[:, None] + ec[None, :])
        cs = scaled.sum(axis=0)
        if np.any(cs == 0):
            break
        ec -= np.frexp(cs)[1]
    return er, ec


def permanent_ryser(matrix):
    """Permanent of a square matrix by Ryser's formula with Gray-code updates.

    Rows and columns are first balanced by exact powers of two.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("permanent needs a square matrix")
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n > MAX_ORDER:
        raise ResourceError(f"permanent of order {n} exceeds cap {MAX_ORDER}")
    dtype = np.result_type(a.dtype, float)
    a = a.astype(dtype)
    er, ec = _balance(a)
    a = np.ldexp(a.real, er[:, None] + ec[None, :]) if not np.iscomplexobj(a) else (
        np.ldexp(a.real, er[:, None] + ec[None, :])
        + 1j * np.ldexp(a.imag, er[:, None] + ec[None, :]))
    unscale = -int(er.sum() + ec.sum())

    low = min(n, LOW_BITS)
    low_sums, low_signs = _gray_table(a[:, :low])
    high_cols = a[:, low:]
    n_high = n - low

    partials = []
    current = np.zeros(n, dtype=dtype)
    gray_prev = 0
    high_sign = 1.0
    for step in range(1 << n_high):
        if step:
            gray = step ^ (step >> 1)
            bit = (gray ^ gray_prev).bit_length() - 1
            if gray & (1 << bit):
                current = current + high_cols[:, bit]
            else:
                current = current - high_cols[:, bit]
            high_sign = -high_sign
            gray_prev = gray
        prods = np.prod(low_sums + current, axis=1)
        partials.extend(high_sign * low_signs * prods)
    total = _fsum_complex(partials) if np.iscomplexobj(a) else math.fsum(partials)
    return (-1) ** n * total * 2.0 ** unscale


def permanent(matrix, method="auto"):
    """Permanent of a square matrix.

    ``method`` is 'ryser', 'brute', 'exact' or 'auto' (brute force for
    N <= 6, Ryser otherwise). The brute-force sums, 'exact' in rational
    arithmetic, exist as independent cross-checks.
    """
    a = np.asarray(matrix)
    n = a.shape[0]
    if method == "auto":
        method = "brute" if n <= 6 else "ryser"
    if method in ("brute", "exact"):
        value = signed_permutation_sum(a, exact=method == "exact")
        return value if np.iscomplexobj(a) else value.real
    if method == "ryser":
        return permanent_ryser(a)
    raise ValueError(f"unknown method {method!r}")


def log_permanent(log_entries, method="ryser"):
    """Permanent of ``exp(log_entries)`` in log form.

    Each row is rescaled by its largest modulus before the permanent is
    taken, so entries far beyond the float range are handled.
    Returns ``(phase, log_abs)`` with permanent = phase * exp(log_abs).
    """
    log_entries = np.asarray(log_entries, dtype=complex)
    shift = log_entries.real.max(axis=1, keepdims=True)
    scaled = np.exp(log_entries - shift)
    value = complex(permanent(scaled, method=method))
    if value == 0:
        return 0.0 + 0.0j, -np.inf
    return value / abs(value), float(np.log(abs(value)) + shift.sum())


def log_determinant(log_entries):
    """Determinant of ``exp(log_entries)`` in log form, via LU (numpy slogdet)."""
    log_entries = np.asarray(log_entries, dtype=complex)
    shift = log_entries.real.max(axis=1, keepdims=True)
    scaled = np.exp(log_entries - shift)
    sign, logabs = np.linalg.slogdet(scaled)
    if sign == 0:
        return 0.0 + 0.0j, -np.inf
    return complex(sign), float(logabs + shift.sum())
