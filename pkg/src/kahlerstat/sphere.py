"""SU(2) coherent states on a sphere threaded by 2j flux quanta.

The stereographic chart z = -tan(θ/2) e^{-iφ} is used throughout; the
rescaled chart z -> z/sqrt(2j) connects to the plane as j -> ∞. The
single-particle phase-space area is A = 2j h, one less than the 2j + 1
states of the lowest Landau level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np

from . import permanent as perm
from .errors import DomainError, FitError, ResourceError, SaturationError
from .geometry import KahlerField
from .particles import Statistics


def _two_j(j):
    two_j = 2 * j
    if two_j <= 0 or abs(two_j - round(two_j)) > 1e-12:
        raise DomainError(f"j must be a positive half-integer, got {j}")
    return int(round(two_j))


def su2_overlap(z, w, j, rescale=False):
    """<z|w> = [(1+z̄z)(1+w̄w)]^{-j} (1+z̄w)^{2j}.

    With ``rescale`` the arguments are first mapped z -> z/sqrt(2j), which
    turns the overlap into the planar one as j -> ∞.
    """
    two_j = _two_j(j)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if rescale:
        z = z / math.sqrt(two_j)
        w = w / math.sqrt(two_j)
    log = (-0.5 * two_j * (np.log1p(np.abs(z) ** 2) + np.log1p(np.abs(w) ** 2))
           + two_j * np.log(1.0 + np.conj(z) * w))
    return np.exp(log)


def _log_matrix(z, two_j):
    return two_j * np.log(1.0 + np.conj(z)[:, None] * z[None, :])


def _check(z, statistics, two_j):
    kind = statistics.permutation_kind
    if kind is None:
        raise DomainError("anyon normalization on the sphere is not available")
    if z.size > perm.MAX_ORDER:
        raise ResourceError(f"N={z.size} exceeds cap {perm.MAX_ORDER}")
    if kind == "fermion" and z.size > two_j + 1:
        raise DomainError(f"{z.size} fermions do not fit in {two_j + 1} states")
    return kind


def sphere_log_norm_sq_inverse(coords, statistics: Statistics, j):
    """ln |N|^-2 for N particles on the sphere; -inf for coincident fermions."""
    two_j = _two_j(j)
    z = np.atleast_1d(np.asarray(coords, dtype=complex))
    kind = _check(z, statistics, two_j)
    logs = _log_matrix(z, two_j)
    if kind == "boson":
        return perm.log_permanent(logs)[1]
    phase, value = perm.log_determinant(logs)
    if value > -np.inf and phase.real < 0:
        return -np.inf
    return value


def sphere_norm_sq_inverse(coords, statistics: Statistics, j, method="auto"):
    """|N|^-2 = Σ_P η_P Π_i (1 + z̄_{P(i)} z_i)^{2j}.

    Permanent (bosons) or determinant (fermions) of [(1 + z̄_i z_j)^{2j}].
    ``method`` 'auto' uses Ryser or LU; 'ryser' forces Ryser for bosons;
    'brute' and 'exact' evaluate the N!-term sum (float or exact arithmetic).
    """
    two_j = _two_j(j)
    z = np.atleast_1d(np.asarray(coords, dtype=complex))
    kind = _check(z, statistics, two_j)
    logs = _log_matrix(z, two_j)
    if np.max(logs.real) * z.size > 700:
        raise ResourceError("normalization exceeds the float range; use the log form")
    mat = np.exp(logs)
    if kind == "boson":
        value = perm.permanent(mat, method=method)
    elif method in ("brute", "exact"):
        value = perm.signed_permutation_sum(mat, fermionic=True, exact=method == "exact")
    else:
        value = np.linalg.det(mat)
    return float(np.real(value))


@dataclass
class SphereNParticleState:
    coords: np.ndarray
    statistics: Statistics
    j: float

    def __post_init__(self):
        self.coords = np.atleast_1d(np.asarray(self.coords, dtype=complex))
        _check(self.coords, self.statistics, _two_j(self.j))

    @property
    def n(self):
        return self.coords.size

    @cached_property
    def log_norm_sq_inverse(self):
        return sphere_log_norm_sq_inverse(self.coords, self.statistics, self.j)

    @property
    def single_particle_area(self):
        """A/h = 2j."""
        return 2 * self.j


def coinciding_kahler(z, j, N, nu=0.0, hbar=1.0):
    """K = ħ N (2j - ν(N-1)) ln(1 + z̄z/2j) at coinciding points (rescaled chart)."""
    z = np.asarray(z, dtype=complex)
    two_j = 2.0 * j
    return hbar * N * (two_j - nu * (N - 1)) * np.log1p(np.abs(z) ** 2 / two_j)


def coinciding_boson_kahler(z, j, N, hbar=1.0):
    """K = ħ N 2j ln(1 + z̄z/2j); N times the single-particle sphere potential."""
    return coinciding_kahler(z, j, N, 0.0, hbar)


def coinciding_field(j, N, nu=0.0, hbar=1.0):
    """KahlerField of the common coordinate of N coinciding particles."""
    two_j = 2.0 * j
    c = N * (two_j - nu * (N - 1))

    def potential(z):
        return c * np.log1p(np.abs(z[..., 0]) ** 2 / two_j)

    def hessian(z):
        s = np.abs(z) ** 2
        return (c * two_j / (two_j + s) ** 2)[..., None]

    def gradient(z):
        return c * np.conj(z) / (two_j + np.abs(z) ** 2)

    return KahlerField(potential, 1, hbar, hessian=hessian, gradient=gradient,
                       name=f"sphere j={j} N={N} nu={nu}")


def sphere_metric(z, j, hbar=1.0):
    """Round-sphere metric coefficient 2ħ (2j)² / (2j + z̄z)² in the rescaled chart."""
    two_j = 2.0 * j
    return 2.0 * hbar * two_j ** 2 / (two_j + np.abs(np.asarray(z)) ** 2) ** 2


@dataclass
class ReductionFit:
    slope: float
    intercept: float
    residual: float
    grid: np.ndarray
    values: np.ndarray


def fermion_reduction_exponent(j, N, z_grid=None, deltas=None, *, dps=None,
                               max_residual=1e-6):
    """Fitted coefficient of ln(1 + z̄z/2j) in the coincident fermion normalization.

    Fermions sit at z + δ_i with small fixed offsets. Near coincidence

        |N|^-2 ≈ Π_{i<j} |δ_i - δ_j|² C (1 + z̄z)^{c},

    in the unrescaled chart, where C does not depend on z. The offset
    factor is divided out and c is read off by least squares against
    ln(1 + z̄z), which equals ln(1 + z̄'z'/2j) in the rescaled chart z'.
    Determinants are taken in extended precision because they are
    suppressed by |δ|^{N(N-1)}.
    """
    two_j = _two_j(j)
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > two_j + 1:
        raise DomainError(f"{N} fermions exceed the {two_j + 1} available states")
    if z_grid is None:
        z_grid = np.linspace(0.1, 2.0, 8)
    if deltas is None:
        deltas = 1e-5 * np.exp(2j * np.pi * np.arange(N) / N) if N > 1 else np.zeros(1)
    z_grid = np.asarray(z_grid, dtype=complex)
    deltas = np.asarray(deltas, dtype=complex)
    if deltas.size != N or np.max(np.abs(deltas)) > 1e-2:
        raise DomainError("need N offsets with |δ| <= 1e-2")
    if N > 1 and min(abs(a - b) for i, a in enumerate(deltas) for b in deltas[i + 1:]) == 0:
        raise DomainError("offsets must be distinct")

    if dps is None:
        small = -math.log10(max(np.min(np.abs(deltas[:, None] - deltas[None, :])
                                       + np.eye(N)), 1e-300)) if N > 1 else 0.0
        dps = int(40 + N * (N - 1) * (small + 1) + 2 * two_j)

    x = np.empty(z_grid.size)
    y = np.empty(z_grid.size)
    with mpmath.workdps(dps):
        d = [mpmath.mpc(c.real, c.imag) for c in deltas]
        vandermonde = mpmath.mpf(1)
        for a in range(N):
            for b in range(a + 1, N):
                vandermonde *= abs(d[a] - d[b]) ** 2
        for k, zc in enumerate(z_grid):
            zs = [mpmath.mpc(zc.real, zc.imag) + dk for dk in d]
            mat = mpmath.matrix(N, N)
            for a in range(N):
                for b in range(N):
                    mat[a, b] = (1 + mpmath.conj(zs[a]) * zs[b]) ** two_j
            det = mpmath.re(mpmath.det(mat))
            if det <= 0:
                raise FitError("determinant lost to cancellation; raise dps", residual=np.inf)
            y[k] = float(mpmath.log(det / vandermonde))
            x[k] = float(mpmath.log(1 + abs(mpmath.mpc(zc.real, zc.imag)) ** 2))

    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    rms = math.sqrt(res[0] / x.size) if len(res) else 0.0
    if rms > max_residual:
        raise FitError(f"reduction fit residual {rms:.3g} above {max_residual}", residual=rms)
    return ReductionFit(float(coef[0]), float(coef[1]), rms, z_grid.real.copy(), y)


def expected_reduction_exponent(j, N, nu=1.0):
    """2jN(1 - ν(N-1)/2j)."""
    return N * (2 * j - nu * (N - 1))


def nparticle_volume(A, N, nu, h=1.0):
    """V = (A - ν(N-1)h)^N / N!.

    Exact for ``fractions.Fraction`` or integer inputs. A vanishing base
    (a filled level) gives 0; a negative base raises SaturationError.
    """
    if N < 0 or int(N) != N:
        raise DomainError("N must be a nonnegative integer")
    N = int(N)
    base = A - nu * (N - 1) * h
    if base < 0:
        raise SaturationError(
            f"over-filled: A - nu(N-1)h = {base} < 0", value=0
        )
    try:
        return base ** N / math.factorial(N)
    except OverflowError as exc:
        raise ResourceError("volume exceeds the float range; use log_nparticle_volume") from exc


def log_nparticle_volume(A, N, nu, h=1.0):
    """ln V for large N; -inf for a filled level."""
    base = A - nu * (N - 1) * h
    if base < 0:
        raise SaturationError(f"over-filled: A - nu(N-1)h = {base} < 0", value=0)
    if base == 0:
        return -math.inf
    return N * math.log(base) - math.lgamma(N + 1)


def is_saturated(A, N, nu, h=1.0):
    """True when the excluded volume uses up the available area."""
    return A - nu * (N - 1) * h <= 0
