"""Self-dual Chern-Simons Ginzburg-Landau vortices.

At the self-dual coupling the static field equations reduce to
B = ½(1 - ρ) and D_+φ = 0. For an axially symmetric winding-N vortex
u = ln ρ then obeys

    u'' + u'/r = e^u - 1,    u ~ 2N ln r (r -> 0),    u -> 0 (r -> ∞).

The solver works with t = ln r and u = 2Nt + v, where v is regular:

    v_tt = e^{2t} (e^{2Nt + v} - 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import solve_banded

from .errors import ConvergenceError, DomainError
from .export import to_csv
from .sphere import nparticle_volume


@dataclass
class VortexParams:
    """Coupling μ, winding N and the radial mesh of the solver."""

    mu: float = 1.0 / (4.0 * math.pi)
    N: int = 1
    lam: float = 1.0
    r_min: float = 1e-3
    r_max: float = 20.0
    points: int = 2000
    tol: float = 1e-10
    max_iter: int = 200
    damping: float = 0.5
    edge_tol: float = 1e-6

    def __post_init__(self):
        if self.mu <= 0:
            raise DomainError("mu must be positive")
        if self.N < 1 or int(self.N) != self.N:
            raise DomainError("winding N must be a positive integer")
        if self.lam != 1.0:
            raise DomainError("radial solver is valid at the self-dual point lam = 1 only")
        if not 0 < self.r_min < self.r_max:
            raise DomainError("need 0 < r_min < r_max")
        if self.points < 10:
            raise DomainError("need at least 10 mesh points")


@dataclass
class RadialProfile:
    r: np.ndarray
    rho: np.ndarray
    B: np.ndarray
    u: np.ndarray
    N: int
    flux: float
    energy: float
    history: list = field(default_factory=list)

    def constraint_residual(self):
        """max |B + ½(ρ - 1)|."""
        return float(np.max(np.abs(self.B + 0.5 * (self.rho - 1.0))))

    def core_exponent(self, points=20):
        """Slope of ln ρ against ln r over the innermost mesh points."""
        slope, _ = np.polyfit(np.log(self.r[:points]), np.log(self.rho[:points]), 1)
        return float(slope)

    def to_csv(self, config=None):
        rows = zip(self.r, self.rho, self.B)
        return to_csv(["r", "rho", "B"], rows, config)


def _residual(v, t, dt, N):
    r2 = np.exp(2.0 * t)
    src = r2 * (np.exp(2.0 * N * t + v) - 1.0)
    dsrc = r2 * np.exp(2.0 * N * t + v)
    # regular-core slope v_t(t0) from integrating the equation at fixed v0
    r0 = r2[0]
    g = -0.5 * r0 + r0 ** (N + 1) * np.exp(v[0]) / (2 * N + 2)
    dg = r0 ** (N + 1) * np.exp(v[0]) / (2 * N + 2)

    n = v.size - 1  # last node is Dirichlet
    res = np.empty(n)
    res[0] = (2.0 * v[1] - 2.0 * v[0] - 2.0 * dt * g) / dt ** 2 - src[0]
    res[1:] = (v[2:n + 1] - 2.0 * v[1:n] + v[0:n - 1]) / dt ** 2 - src[1:n]

    bands = np.zeros((3, n))
    bands[1, :] = -2.0 / dt ** 2 - dsrc[:n]
    bands[1, 0] -= 2.0 * dg / dt
    bands[0, 1:] = 1.0 / dt ** 2
    bands[0, 1] = 2.0 / dt ** 2
    bands[2, :-1] = 1.0 / dt ** 2
    return res, bands


def solve_radial_vortex(p: VortexParams) -> RadialProfile:
    """Newton relaxation of the radial self-dual vortex equation on a log mesh.

    Raises
    ------
    ConvergenceError
        If damped Newton stalls; ``history`` holds the max|Δv| sequence.
    DomainError
        If the profile has not flattened out by ``r_max``.
    """
    N = int(p.N)
    t = np.linspace(math.log(p.r_min), math.log(p.r_max), p.points)
    dt = t[1] - t[0]
    r = np.exp(t)
    v = -N * np.log1p(r * r)
    v[-1] = -2.0 * N * t[-1]  # u(r_max) = 0

    damping = p.damping
    history = []
    for _ in range(p.max_iter):
        res, bands = _residual(v, t, dt, N)
        step = solve_banded((1, 1), bands, -res)
        size = float(np.max(np.abs(step)))
        history.append(size)
        if not np.isfinite(size):
            break
        v[:-1] += damping * step
        if size < p.tol:
            break
        damping = min(1.0, 2.0 * damping)
    else:
        raise ConvergenceError("vortex Newton iteration did not converge", history=history)
    if not history or not np.isfinite(history[-1]) or history[-1] >= p.tol:
        raise ConvergenceError("vortex Newton iteration diverged", history=history)

    u = 2.0 * N * t + v
    u_t_edge = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * dt)
    if abs(u_t_edge / r[-1]) > p.edge_tol:
        raise DomainError(
            f"r_max={p.r_max} too small: u'(r_max) = {u_t_edge / r[-1]:.3g}"
        )
    rho = np.exp(u)
    B = 0.5 * (1.0 - rho)
    flux, energy = _flux_and_energy(t, r, rho, B, u, dt, N)
    return RadialProfile(r, rho, B, u, N, flux, energy, history)


def _flux_and_energy(t, r, rho, B, u, dt, N):
    r2 = r * r
    # the core r < r_min carries B ≈ ½
    inner = 0.25 * r2[0]
    flux = 2.0 * math.pi * (inner + trapezoid(B * r2, dx=dt))

    # a(r) = ∫_0^r B r' dr', the angular vector potential times r
    a = inner + np.concatenate(([0.0], np.cumsum(0.5 * dt * (B[1:] * r2[1:] + B[:-1] * r2[:-1]))))
    u_t = np.gradient(u, dt, edge_order=2)
    # ½|Dφ|² r² = ½ ρ (u_t²/4 + (N - a)²), plus the potential term B² r²
    dens = 0.5 * rho * (0.25 * u_t ** 2 + (N - a) ** 2) + B ** 2 * r2
    # core: ρ ∝ r^{2N}, u_t = 2N, a ≈ 0 gives dens ≈ N²ρ + r²/4
    core = 0.5 * N * rho[0] + 0.125 * r2[0]
    energy = 2.0 * math.pi * (core + trapezoid(dens, dx=dt))
    return float(flux), float(energy)


def statistics_parameter(mu, h=1.0):
    """(α, g) = (4πμh, 4πμ)."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    g = 4.0 * math.pi * mu
    return g * h, g


def laughlin_mu(k):
    """Coupling μ = 1/(4π(2k+1)) of the k-th Laughlin plateau."""
    return 1.0 / (4.0 * math.pi * (2 * k + 1))


def vortex_volume(A, N, mu, h=1.0):
    """Moduli-space volume (A - 4πμh(N-1))^N / N! of N vortices.

    Identical to the sphere volume law with statistics parameter g = 4πμ.
    """
    _, g = statistics_parameter(mu, h)
    return nparticle_volume(A, N, g, h)


def vortex_volume_dimensionless(A, N):
    """(A - 8π²(N-1))^N / N!, the μħ = 1 form."""
    return nparticle_volume(A, N, 8.0 * math.pi ** 2, 1.0)


_DIMENSIONS = ("length", "time", "field", "vector_potential", "scalar_potential",
               "lagrangian", "area", "volume")


def _factor(kind, rho0, mu, m, hbar, N):
    if min(rho0, mu, m, hbar) <= 0:
        raise DomainError("rho0, mu, m and hbar must be positive")
    if kind == "length":
        return math.sqrt(mu / rho0)
    if kind == "time":
        return mu * m / (hbar * rho0)
    if kind == "field":
        return math.sqrt(rho0)
    if kind == "vector_potential":
        return math.sqrt(rho0 / mu)
    if kind == "scalar_potential":
        return hbar * rho0 / (mu * m)
    if kind == "lagrangian":
        return hbar ** 2 * rho0 / m
    if kind == "area":
        return mu * hbar
    if kind == "volume":
        if N is None:
            raise DomainError("volume rescaling needs N")
        return (mu * hbar) ** N
    raise DomainError(f"unknown quantity {kind!r}; expected one of {_DIMENSIONS}")


def rescale_to_physical(value, kind, rho0=1.0, mu=1.0, m=1.0, hbar=1.0, N=None):
    """Dimensionless value of the given kind to physical units."""
    return value * _factor(kind, rho0, mu, m, hbar, N)


def rescale_to_dimensionless(value, kind, rho0=1.0, mu=1.0, m=1.0, hbar=1.0, N=None):
    """Inverse of rescale_to_physical."""
    return value / _factor(kind, rho0, mu, m, hbar, N)
