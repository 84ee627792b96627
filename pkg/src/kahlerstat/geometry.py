"""Kähler potentials to connections, symplectic forms, metrics and volumes.

Conventions
-----------
A field stores the dimensionless potential L(z, z̄) = K/ħ. For N complex
coordinates we use

    M_ij = ∂_{z̄i} ∂_{zj} L                      (hermitian, PSD)
    f_{z̄i zj} = i ħ M_ij                        (symplectic tensor)
    g_ij = 2 ħ M_ij,  ds² = g_ij dz̄_i dz_j       (Kähler metric)
    A_z = (i/2) ħ ∂_z L,  A_z̄ = conj(A_z)         (Berry connection, real gauge)

With these, the phase-space volume of a one-dimensional region D is

    V = -∫ f dz̄∧dz = 2ħ ∫_D M d²x = -2 Re ∮_{∂D} A_z dz,

positive for positively oriented boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError, DomainError
from .particles import ParticleConfig

# stand-in for the antipode of the stereographic chart: tan(θ/2) at θ -> π
_ANTIPODE_SCALE = 1e8


def _as_coords(z):
    if isinstance(z, ParticleConfig):
        return z.coords
    return np.asarray(z, dtype=complex)


class KahlerField:
    """Kähler potential together with optional analytic derivatives.

    Parameters
    ----------
    potential : callable
        Maps complex arrays of shape (..., N) to the real dimensionless
        potential L = K/ħ of shape (...).
    dimension : int
        Number of complex coordinates N.
    hbar : float
    hessian : callable, optional
        Analytic M_ij = ∂_{z̄i}∂_{zj}L, shape (..., N, N).
    gradient : callable, optional
        Analytic ∂_{zi} L, shape (..., N).
    singular : callable, optional
        Returns a description of the singularity at z (e.g. an offending
        pair of indices) or None when z is a regular point.
    """

    def __init__(self, potential: Callable, dimension: int, hbar: float = 1.0, *,
                 hessian: Callable | None = None, gradient: Callable | None = None,
                 singular: Callable | None = None, name: str = ""):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if hbar <= 0:
            raise DomainError("hbar must be positive")
        self.potential = potential
        self.dimension = int(dimension)
        self.hbar = float(hbar)
        self.hessian = hessian
        self.gradient = gradient
        self.singular = singular
        self.name = name

    def __repr__(self):
        return f"KahlerField({self.name or 'anonymous'}, N={self.dimension}, hbar={self.hbar})"

    def kahler(self, z):
        """K = ħ L at z."""
        return self.hbar * np.asarray(self.potential(_as_coords(z)), dtype=float)

    def with_hbar(self, hbar):
        return KahlerField(self.potential, self.dimension, hbar, hessian=self.hessian,
                           gradient=self.gradient, singular=self.singular, name=self.name)

    def check_point(self, z):
        z = _as_coords(z)
        if z.shape[-1] != self.dimension:
            raise DomainError(f"expected {self.dimension} coordinates, got {z.shape[-1]}")
        if self.singular is not None:
            bad = self.singular(z)
            if bad is not None:
                raise DomainError(f"{self!r} is singular at {bad}")
        return z


def _real_steps(z, h_fd):
    # one step per particle, shared by its x and y directions
    if h_fd is None:
        return 1e-4 * np.maximum(1.0, np.abs(z))
    return np.broadcast_to(np.asarray(h_fd, dtype=float), z.shape).copy()


def _fd_hessian(potential, z, h_fd=None):
    """Central-difference M_ij for z of shape (..., N)."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    h = _real_steps(z, h_fd)
    # real directions: index 2k -> x_k, 2k+1 -> y_k
    dirs = np.zeros((2 * n,) + z.shape, dtype=complex)
    for k in range(n):
        dirs[2 * k, ..., k] = h[..., k]
        dirs[2 * k + 1, ..., k] = 1j * h[..., k]
    step = np.repeat(h, 2, axis=-1)  # (..., 2N)
    step = np.moveaxis(step, -1, 0)  # (2N, ...)

    base = potential(z)
    hess = np.empty((2 * n, 2 * n) + base.shape)
    for a in range(2 * n):
        plus = potential(z + dirs[a])
        minus = potential(z - dirs[a])
        hess[a, a] = (plus - 2.0 * base + minus) / step[a] ** 2
        for b in range(a + 1, 2 * n):
            pp = potential(z + dirs[a] + dirs[b])
            pm = potential(z + dirs[a] - dirs[b])
            mp = potential(z - dirs[a] + dirs[b])
            mm = potential(z - dirs[a] - dirs[b])
            hess[a, b] = hess[b, a] = (pp - pm - mp + mm) / (4.0 * step[a] * step[b])
    hxx = hess[0::2, 0::2]
    hyy = hess[1::2, 1::2]
    hxy = hess[0::2, 1::2]  # ∂x_i ∂y_j
    hyx = hess[1::2, 0::2]  # ∂y_i ∂x_j
    m = 0.25 * (hxx + hyy + 1j * (hyx - hxy))
    return np.moveaxis(np.moveaxis(m, 0, -1), 0, -1)


def fd_hessian(potential, z, h_fd=None, richardson=False):
    """Finite-difference ∂_{z̄i}∂_{zj}L; one Richardson level on request."""
    m = _fd_hessian(potential, z, h_fd)
    if richardson:
        h = _real_steps(np.asarray(z, dtype=complex), h_fd)
        m_half = _fd_hessian(potential, z, 0.5 * h)
        m = (4.0 * m_half - m) / 3.0
    return m


def fd_gradient(potential, z, h_fd=None):
    """Central-difference ∂_{zi}L = ½(∂x − i∂y)L for z of shape (..., N)."""
    z = np.asarray(z, dtype=complex)
    h = _real_steps(z, h_fd)
    grad = np.empty(z.shape, dtype=complex)
    for k in range(z.shape[-1]):
        e = np.zeros(z.shape, dtype=complex)
        e[..., k] = h[..., k]
        dx = (potential(z + e) - potential(z - e)) / (2 * h[..., k])
        dy = (potential(z + 1j * e) - potential(z - 1j * e)) / (2 * h[..., k])
        grad[..., k] = 0.5 * (dx - 1j * dy)
    return grad


@dataclass
class SymplecticTensor:
    """f_{z̄i zj} after hermitization, with the defect found before it."""

    f: np.ndarray
    defect: float
    hbar: float = 1.0

    @property
    def kahler_hessian(self):
        """M = -i f / ħ, the hermitian matrix behind f."""
        return -1j * self.f / self.hbar


def mixed_hessian(field: KahlerField, z, mode="auto", h_fd=None, richardson=False):
    z = field.check_point(z)
    if mode == "auto":
        mode = "analytic" if field.hessian is not None else "finite_diff"
    if mode == "analytic":
        if field.hessian is None:
            raise ValueError(f"{field!r} has no analytic hessian")
        m = np.asarray(field.hessian(z), dtype=complex)
    elif mode == "finite_diff":
        m = fd_hessian(field.potential, z, h_fd, richardson)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"non-finite Kähler hessian for {field!r}")
    return m


def symplectic_tensor(field: KahlerField, z, mode="auto", h_fd=None, richardson=False):
    """Symplectic tensor f_{z̄i zj} = iħ ∂_{z̄i}∂_{zj}L.

    The underlying M is symmetrized to (M + M^H)/2; the largest entry of
    |M - M^H| found before symmetrizing is returned as ``defect``.
    """
    m = mixed_hessian(field, z, mode, h_fd, richardson)
    mh = np.conj(np.swapaxes(m, -1, -2))
    defect = float(np.max(np.abs(m - mh))) if m.size else 0.0
    m = 0.5 * (m + mh)
    return SymplecticTensor(1j * field.hbar * m, defect, field.hbar)


def metric_tensor(field: KahlerField, z, mode="auto", **kw):
    """Hermitian metric g_ij = 2ħ M_ij (ds² = g_ij dz̄_i dz_j)."""
    st = symplectic_tensor(field, z, mode, **kw)
    return 2.0 * st.f / 1j


def berry_connection(field: KahlerField, z, mode="auto", h_fd=None):
    """Return (A_z, A_z̄) with A_z = (i/2)ħ∂_z L and A_z̄ = conj(A_z)."""
    z = field.check_point(z)
    val = np.asarray(field.potential(z), dtype=float)
    if not np.all(np.isfinite(val)):
        raise DomainError("normalization vanishes at this configuration")
    if mode == "auto":
        mode = "analytic" if field.gradient is not None else "finite_diff"
    if mode == "analytic":
        grad = np.asarray(field.gradient(z), dtype=complex)
    else:
        grad = fd_gradient(field.potential, z, h_fd)
    a = 0.5j * field.hbar * grad
    return a, np.conj(a)


def with_gauge(field: KahlerField, g, g_prime=None):
    """Field with L -> L + Re g(z) for g holomorphic (a Kähler gauge term).

    ``g`` maps (..., N) complex arrays to complex values of shape (...).
    The analytic hessian is shared since ∂∂̄ Re g = 0.
    """
    def potential(z):
        return field.potential(z) + np.real(g(z))

    gradient = None
    if g_prime is not None and field.gradient is not None:
        def gradient(z):
            return field.gradient(z) + 0.5 * g_prime(z)

    return KahlerField(potential, field.dimension, field.hbar, hessian=field.hessian,
                       gradient=gradient, singular=field.singular,
                       name=f"{field.name}+gauge")


def gaussian_field(n=1, hbar=1.0):
    """L = Σ z̄_i z_i: free coherent states, f = iħ δ_ij."""
    def potential(z):
        return np.sum(np.abs(z) ** 2, axis=-1)

    def hessian(z):
        return np.broadcast_to(np.eye(n, dtype=complex), z.shape[:-1] + (n, n))

    def gradient(z):
        return np.conj(z)

    return KahlerField(potential, n, hbar, hessian=hessian, gradient=gradient,
                       name="gaussian")


@dataclass(frozen=True)
class Region2D:
    """Integration domain for one complex coordinate.

    ``relative`` restricts the angle to [0, π), the fundamental domain of
    a relative coordinate z ~ -z.
    """

    kind: str
    R: float | None = None
    r0: float = 0.0
    j: float | None = None
    resolution: int = 16
    relative: bool = False

    def __post_init__(self):
        if self.kind not in ("disk", "annulus", "full_sphere"):
            raise DomainError(f"unknown region kind {self.kind!r}")
        if self.resolution < 16:
            raise DomainError("resolution must be >= 16")
        if self.kind == "full_sphere":
            if self.j is None or self.j <= 0:
                raise DomainError("full_sphere needs j > 0")
        elif self.R is None or not self.R > self.r0 >= 0:
            raise DomainError(f"need R > r0 >= 0, got R={self.R}, r0={self.r0}")

    @classmethod
    def disk(cls, R, *, resolution=16, relative=False):
        return cls("disk", R=float(R), resolution=resolution, relative=relative)

    @classmethod
    def annulus(cls, r0, R, *, resolution=16, relative=False):
        return cls("annulus", R=float(R), r0=float(r0), resolution=resolution,
                   relative=relative)

    @classmethod
    def full_sphere(cls, j, *, resolution=16):
        return cls("full_sphere", j=float(j), resolution=resolution)

    @property
    def angle(self):
        return np.pi if self.relative else 2.0 * np.pi

    @property
    def outer_radius(self):
        if self.kind == "full_sphere":
            return np.sqrt(2.0 * self.j) * _ANTIPODE_SCALE
        return self.R


@dataclass
class VolumeEstimate:
    value: float
    error: float
    levels: int = 0
    history: list = dc_field(default_factory=list)

    def __float__(self):
        return float(self.value)


def _composite_gl(a, b, panels, order):
    x, w = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _refine(estimate, rtol, atol, max_levels):
    history = []
    prev = None
    # at least two levels, so a failure always carries two refinement values
    for level in range(max(2, max_levels)):
        value = estimate(2 ** level)
        history.append(value)
        if prev is not None and abs(value - prev) <= rtol * abs(value) + atol:
            return VolumeEstimate(value, abs(value - prev), level, history)
        prev = value
    raise ConvergenceError("volume quadrature did not converge", history=history[-2:])


def _one_dim(field):
    if field.dimension != 1:
        raise DomainError("volume integrals need a single complex coordinate")


def volume_area_integral(field: KahlerField, region: Region2D, *, mode="auto",
                         rtol=1e-12, atol=1e-14, max_levels=10):
    """V = 2ħ ∫ M d²x by adaptive tensor-product Gauss-Legendre in (r, φ)."""
    _one_dim(field)
    q = region.resolution
    phi_max = region.angle

    if region.kind == "full_sphere":
        # r = sqrt(2j) tan(θ/2): maps [0, π) onto the whole chart
        scale = np.sqrt(2.0 * region.j)

        def radial(panels):
            t, wt = _composite_gl(0.0, np.pi, panels, q)
            r = scale * np.tan(0.5 * t)
            return r, wt * scale * 0.5 / np.cos(0.5 * t) ** 2
    else:
        def radial(panels):
            return _composite_gl(region.r0, region.R, panels, q)

    def estimate(panels):
        r, wr = radial(panels)
        phi, wp = _composite_gl(0.0, phi_max, panels, q)
        z = (r[:, None] * np.exp(1j * phi[None, :]))[..., None]
        m = mixed_hessian(field, z, mode)[..., 0, 0].real
        return 2.0 * field.hbar * float(np.einsum("i,j,ij->", wr * r, wp, m))

    return _refine(estimate, rtol, atol, max_levels)


def _boundary_pieces(region):
    """Oriented boundary curves as callables t in [0,1] -> (z, dz/dt)."""
    phi_max = region.angle
    R = region.outer_radius
    r0 = region.r0 if region.kind != "full_sphere" else 0.0
    pieces = []

    def arc(radius, forward):
        def curve(t):
            phi = phi_max * (t if forward else 1.0 - t)
            z = radius * np.exp(1j * phi)
            return z, (1j * z * phi_max) * (1.0 if forward else -1.0)
        return curve

    def ray(phi, a, b):
        u = np.exp(1j * phi)

        def curve(t):
            return (a + (b - a) * t) * u, (b - a) * u * np.ones_like(t)
        return curve

    pieces.append(arc(R, True))
    if phi_max < 2 * np.pi:
        pieces.append(ray(phi_max, R, r0))
        pieces.append(ray(0.0, r0, R))
    if r0 > 0:
        pieces.append(arc(r0, False))
    return pieces


def volume_boundary_integral(field: KahlerField, region: Region2D, *, mode="auto",
                             rtol=1e-12, atol=1e-14, max_levels=12):
    """V = -2 Re ∮ A_z dz around the positively oriented boundary.

    Radial edges of a relative-coordinate sector are included; they vanish
    for rotation-invariant potentials. A connection singular at the origin
    (an unreduced fermion potential, say) needs an annulus, otherwise the
    point charge at z = 0 is missed.
    """
    _one_dim(field)
    q = region.resolution
    pieces = _boundary_pieces(region)

    def estimate(panels):
        total = 0.0
        t, wt = _composite_gl(0.0, 1.0, panels, q)
        for curve in pieces:
            z, dz = curve(t)
            a, _ = berry_connection(field, z[:, None], mode)
            total += -2.0 * float(np.sum(wt * np.real(a[:, 0] * dz)))
        return total

    return _refine(estimate, rtol, atol, max_levels)
