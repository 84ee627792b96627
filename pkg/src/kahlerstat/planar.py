"""Coherent states of identical particles in the plane.

Coordinates are dimensionless. For two particles the centre of mass
Z = (z1 + z2)/2 and relative coordinate z = z1 - z2 separate the
normalization as

    |N|^-2 = e^{2 Z̄Z} (e^{z̄z/2} ± e^{-z̄z/2}),

so the relative part carries all the statistics. Radial relative
potentials are written as L(s) with s = z̄z, u(s) = s L'(s) and
M(s) = u'(s) = ∂_z̄ ∂_z L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import gammaln

from . import permanent as perm
from .errors import ConvergenceError, DomainError, FitError
from .geometry import KahlerField, fd_hessian
from .hypergeometric import anyon_series
from .particles import Statistics

MAX_PARTICLES = perm.MAX_ORDER
_SERIES_X = 0.1


def coherent_overlap(z1, z2):
    """<z1|z2> = exp(-(|z1|² + |z2|²)/2 + z̄1 z2)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    return np.exp(-0.5 * (np.abs(z1) ** 2 + np.abs(z2) ** 2) + np.conj(z1) * z2)


def _kind(statistics):
    kind = statistics.permutation_kind
    if kind is None:
        raise DomainError(
            "no closed normalization for planar anyons beyond the two-body sector"
        )
    return kind


def _log_matrix(z):
    return np.conj(z)[:, None] * z[None, :]


def norm_sq_inverse(coords, statistics: Statistics, method="auto"):
    """|N|^-2 = Σ_P η_P Π_i exp(z̄_{P(i)} z_i).

    Permanent (bosons) or determinant (fermions) of exp(z̄_i z_j).
    ``method`` 'auto' uses Ryser or LU; 'ryser' forces Ryser for bosons;
    'brute' and 'exact' evaluate the N!-term sum (float or exact arithmetic).
    """
    z = np.atleast_1d(np.asarray(coords, dtype=complex))
    kind = _kind(statistics)
    if z.size > MAX_PARTICLES:
        raise perm.ResourceError(f"N={z.size} exceeds cap {MAX_PARTICLES}")
    mat = np.exp(_log_matrix(z))
    if kind == "boson":
        value = perm.permanent(mat, method=method)
    elif method in ("brute", "exact"):
        value = perm.signed_permutation_sum(mat, fermionic=True, exact=method == "exact")
    else:
        value = np.linalg.det(mat)
    return float(np.real(value))


def log_norm_sq_inverse(coords, statistics: Statistics):
    """ln |N|^-2 evaluated with row scaling; -inf when fermions coincide."""
    z = np.atleast_1d(np.asarray(coords, dtype=complex))
    kind = _kind(statistics)
    if z.size > MAX_PARTICLES:
        raise perm.ResourceError(f"N={z.size} exceeds cap {MAX_PARTICLES}")
    logs = _log_matrix(z)
    if kind == "boson":
        _, value = perm.log_permanent(logs)
    else:
        phase, value = perm.log_determinant(logs)
        if value > -np.inf and phase.real < 0:
            # roundoff can flip the sign of a vanishing determinant
            return -np.inf
    return value


@dataclass
class PlanarNParticleState:
    """N planar coherent coordinates with a statistics tag."""

    coords: np.ndarray
    statistics: Statistics

    def __post_init__(self):
        self.coords = np.atleast_1d(np.asarray(self.coords, dtype=complex))

    @property
    def n(self):
        return self.coords.size

    @cached_property
    def norm_sq_inverse(self):
        return norm_sq_inverse(self.coords, self.statistics)

    @cached_property
    def log_norm_sq_inverse(self):
        return log_norm_sq_inverse(self.coords, self.statistics)

    def center_of_mass(self):
        return self.coords.mean()

    def relative(self):
        if self.n != 2:
            raise DomainError("relative coordinate defined for N = 2 only")
        return self.coords[0] - self.coords[1]


def coincident_pair(z, tol=0.0):
    """First pair (i, j) with |z_i - z_j| <= tol, searching all leading indices."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    for i in range(n):
        for j in range(i + 1, n):
            if np.any(np.abs(z[..., i] - z[..., j]) <= tol):
                return (i, j)
    return None


def nparticle_field(n, statistics: Statistics, hbar=1.0):
    """KahlerField with L = ln|N|^-2 for N planar particles (finite-difference path)."""
    kind = _kind(statistics)

    def potential(z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1, n)
        out = np.array([log_norm_sq_inverse(row, statistics) for row in flat])
        return out.reshape(z.shape[:-1])

    singular = None
    if kind == "fermion":
        def singular(z):
            pair = coincident_pair(z)
            return None if pair is None else f"coincident fermions {pair}"

    return KahlerField(potential, n, hbar, singular=singular, name=f"{kind}-{n}")


# radial building blocks, x = s/2

def _tanh_term(x):
    """tanh x + x / cosh² x."""
    x = np.asarray(x, dtype=float)
    e = np.exp(-2.0 * x)
    return np.tanh(x) + 4.0 * x * e / (1.0 + e) ** 2


def _coth_term(x):
    """coth x - x / sinh² x, regular at 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_X
    xs = x[small]
    x2 = xs * xs
    out[small] = xs * (2 / 3 + x2 * (-4 / 45 + x2 * (4 / 315 + x2 * (-8 / 4725 + x2 * 4 / 18711))))
    xl = x[~small]
    e = np.exp(-2.0 * xl)
    out[~small] = 1.0 / np.tanh(xl) - 4.0 * xl * e / (1.0 - e) ** 2
    return out


def _xcoth_minus_one(x):
    """x coth x - 1, regular at 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_X
    x2 = x[small] ** 2
    out[small] = x2 * (1 / 3 + x2 * (-1 / 45 + x2 * (2 / 945 + x2 * (-1 / 4725 + x2 * 2 / 93555))))
    xl = x[~small]
    out[~small] = xl / np.tanh(xl) - 1.0
    return out


def _log_sinhc(x):
    """ln(sinh x / x)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_X
    x2 = x[small] ** 2
    out[small] = np.log1p(x2 * (1 / 6 + x2 * (1 / 120 + x2 * (1 / 5040 + x2 / 362880))))
    xl = x[~small]
    out[~small] = xl + np.log1p(-np.exp(-2.0 * xl)) - np.log(2.0 * xl)
    return out


def relative_potential(s, statistics: Statistics, reduced=True):
    """Dimensionless relative potential L(s), s = z̄z.

    Bosons: ln(2 cosh(s/2)). Fermions: ln(2 sinh(s/2)), minus ln s when
    ``reduced`` (a Kähler gauge change that removes the singularity at
    s = 0). Anyons: ln F(s) - ln π with the hypergeometric sum F.
    """
    s = np.asarray(s, dtype=float)
    if statistics.kind == "anyon":
        return anyon_series(s, statistics.nu)[0] - math.log(math.pi)
    x = 0.5 * s
    if statistics.kind == "boson":
        return x + np.log1p(np.exp(-2.0 * x))
    if reduced:
        return _log_sinhc(x)
    with np.errstate(divide="ignore"):
        return x + np.log1p(-np.exp(-2.0 * x))


def relative_moment(s, statistics: Statistics, reduced=True):
    """u(s) = s dL/ds."""
    s = np.asarray(s, dtype=float)
    if statistics.kind == "anyon":
        return anyon_series(s, statistics.nu)[1]
    x = 0.5 * s
    if statistics.kind == "boson":
        return x * np.tanh(x)
    if reduced:
        return _xcoth_minus_one(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        return x / np.tanh(x)


def relative_hessian(s, statistics: Statistics):
    """M(s) = ∂_z̄∂_z L; gauge independent."""
    s = np.asarray(s, dtype=float)
    if statistics.kind == "anyon":
        return anyon_series(s, statistics.nu)[2]
    x = 0.5 * s
    if statistics.kind == "boson":
        return 0.5 * _tanh_term(x)
    return 0.5 * _coth_term(x)


def two_body_kahler(Z, z, statistics: Statistics, hbar=1.0, reduced=False):
    """K = ħ[2 Z̄Z + ln(e^{z̄z/2} ± e^{-z̄z/2})] for a boson or fermion pair."""
    kind = _kind(statistics)
    s = np.abs(np.asarray(z, dtype=complex)) ** 2
    if kind == "fermion" and not reduced and np.any(s == 0):
        raise DomainError("fermion pair potential is singular at z = 0")
    stats = Statistics.boson() if kind == "boson" else Statistics.fermion()
    rel = relative_potential(s, stats, reduced=reduced)
    return hbar * (2.0 * np.abs(Z) ** 2 + rel)


def two_body_symplectic(r, statistics: Statistics, hbar=1.0):
    """f_{z̄z} of the relative coordinate at |z| = r; tends to iħ/2."""
    r = np.asarray(r, dtype=float)
    return 1j * hbar * relative_hessian(r * r, statistics)


def relative_field(statistics: Statistics, hbar=1.0, reduced=True):
    """KahlerField of the two-body relative coordinate (one complex dof)."""
    stats = statistics

    def potential(z):
        return relative_potential(np.abs(z[..., 0]) ** 2, stats, reduced)

    def hessian(z):
        return relative_hessian(np.abs(z) ** 2, stats)[..., None]

    def gradient(z):
        s = np.abs(z) ** 2
        u = relative_moment(s, stats, reduced)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(s > 0, u / np.where(s > 0, z, 1.0), 0.0)
        return g

    singular = None
    if stats.kind == "fermion" and not reduced:
        def singular(z):
            return "coincident fermions (0, 1)" if np.any(z == 0) else None

    tag = "reduced" if reduced and stats.kind == "fermion" else ""
    name = f"{stats.kind}{stats.nu if stats.kind == 'anyon' else ''} relative {tag}".strip()
    return KahlerField(potential, 1, hbar, hessian=hessian, gradient=gradient,
                       singular=singular, name=name)


def anyon_two_body_kahler(r, nu, hbar=1.0):
    """K = ħ ln[1F2(1; ½+ν/2, 1+ν/2; r⁴/16) / (π Γ(1+ν))] for the anyon pair."""
    r = np.asarray(r, dtype=float)
    return hbar * relative_potential(r * r, Statistics.anyon(nu))


def anyon_basis_amplitude(m, z, nu):
    """S_m(z) = z^{2m+ν} / sqrt(π 4^m Γ(2m+1+ν)), principal branch of z^ν."""
    if m < 0:
        raise DomainError("m must be >= 0")
    z = np.asarray(z, dtype=complex)
    log_norm = 0.5 * (math.log(math.pi) + m * math.log(4.0) + gammaln(2 * m + 1 + nu))
    with np.errstate(divide="ignore"):
        return np.where(z == 0, 1.0 if (2 * m + nu) == 0 else 0.0,
                        np.exp((2 * m + nu) * np.log(np.where(z == 0, 1, z)) - log_norm))


def small_r_metric_coefficient(statistics: Statistics, hbar=1.0):
    """Coefficient of ρ²dθ² + dρ² (ρ = r²/2, θ = 2φ) near coincidence."""
    nu = statistics.nu
    return 2.0 * hbar / ((1.0 + nu) * (2.0 + nu))


def fit_small_r_metric(statistics: Statistics, hbar=1.0, r_max=0.5, points=40,
                       degree=4, max_residual=1e-10):
    """Fit the metric coefficient from g(r)/r² sampled on (0, r_max].

    Near r = 0 we have ds² = g |dz|² with g/r² an even series in r⁴; its
    intercept is the coefficient of ρ²dθ² + dρ².
    Returns (coefficient, rms residual).
    """
    r = np.linspace(r_max / points, r_max, points)
    g = 2.0 * hbar * relative_hessian(r * r, statistics)
    y = g / r ** 2
    coef, res, *_ = np.polyfit(r ** 4, y, degree, full=True)
    rms = math.sqrt(res[0] / points) if len(res) else 0.0
    if rms > max_residual * max(1.0, abs(coef[-1])):
        raise FitError("small-r metric fit is poor", residual=rms)
    return float(coef[-1]), rms


def cm_kahler_check(N, Z, hbar=1.0):
    """Centre-of-mass potential NħZ̄Z of a translation invariant N-particle state."""
    return N * hbar * np.abs(Z) ** 2


@dataclass
class Trajectory:
    t: np.ndarray
    z: np.ndarray
    exact: np.ndarray

    @property
    def max_error(self):
        return float(np.max(np.abs(self.z - self.exact)))


def two_body_eom_check(z0, statistics: Statistics, omega, T, hbar=1.0, *,
                       samples=201, rtol=1e-11, atol=1e-12):
    """Integrate f ż = ∂_z̄ V for V = ω z ∂_z K in the relative coordinate.

    ∂_z̄ V is taken by central differences of V, f from the analytic Kähler
    hessian; the result is compared with the harmonic orbit z0 e^{-iωt}.
    """
    z0 = complex(z0)
    t = np.linspace(0.0, T, samples)
    exact = z0 * np.exp(-1j * omega * t)
    if z0 == 0:
        if statistics.kind == "fermion":
            raise DomainError("fermion relative orbit needs z0 != 0")
        return Trajectory(t, np.zeros_like(exact), exact)
    field = relative_field(statistics, hbar)

    def energy(z):
        return np.real(hbar * omega * z * field.gradient(z[..., None])[..., 0])

    def rhs(_, y):
        z = complex(y[0], y[1])
        h = 1e-5 * max(1.0, abs(z))
        dx = (energy(np.array(z + h)) - energy(np.array(z - h))) / (2 * h)
        dy = (energy(np.array(z + 1j * h)) - energy(np.array(z - 1j * h))) / (2 * h)
        dv = 0.5 * (dx + 1j * dy)
        f = 1j * hbar * float(relative_hessian(abs(z) ** 2, statistics))
        zdot = dv / f
        return [zdot.real, zdot.imag]

    sol = solve_ivp(rhs, (0.0, T), [z0.real, z0.imag], t_eval=t, method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"orbit integration failed: {sol.message}")
    return Trajectory(t, sol.y[0] + 1j * sol.y[1], exact)


def fd_relative_hessian(statistics: Statistics, r, reduced=True, h_fd=None):
    """Finite-difference M at real radius r; used to cross-check closed forms."""
    field = relative_field(statistics, reduced=reduced)
    return fd_hessian(field.potential, np.array([complex(r)]), h_fd)[0, 0].real
