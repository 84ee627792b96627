"""Particles in the lowest Landau level with an extra harmonic confinement.

The Hamiltonian acting on the anti-analytic part of the wave function is
H = ħω Σ z̄_i ∂_{z̄_i} + V⁰_N with ω_t = sqrt(ω_c² + ω_0²), ω = ω_t - ω_c
and ground energy V⁰_N = ħω_t[νN(N-1)/2 + N/2]. With x = βħω,

    Z_classical = e^{-βV⁰} / (x^N N!)
    Z_quantum   = e^{-βV⁰} Π_{n=1..N} (1 - e^{-nx})^{-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PrecisionError
from .particles import Statistics
from .planar import relative_hessian, relative_moment


@dataclass(frozen=True)
class OscillatorSystem:
    N: int
    nu: float = 0.0
    omega_c: float = 0.0
    omega_0: float = 1.0
    beta: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.N < 0 or int(self.N) != self.N:
            raise DomainError("N must be a nonnegative integer")
        if self.omega_c < 0 or self.omega_0 < 0:
            raise DomainError("frequencies must be >= 0")
        if self.beta <= 0 or self.hbar <= 0:
            raise DomainError("beta and hbar must be positive")
        if self.nu < 0:
            raise DomainError("nu must be >= 0")

    @property
    def omega_t(self):
        return math.hypot(self.omega_c, self.omega_0)

    @property
    def omega(self):
        # ω_t - ω_c without cancellation for ω_0 << ω_c
        wt = self.omega_t
        return self.omega_0 ** 2 / (wt + self.omega_c) if wt > 0 else 0.0

    @property
    def x(self):
        """βħω."""
        return self.beta * self.hbar * self.omega

    @property
    def h(self):
        return 2.0 * math.pi * self.hbar

    def replace(self, **kw):
        params = dict(N=self.N, nu=self.nu, omega_c=self.omega_c, omega_0=self.omega_0,
                      beta=self.beta, hbar=self.hbar)
        params.update(kw)
        return OscillatorSystem(**params)


def ground_energy(sys: OscillatorSystem):
    """V⁰_N = ħω_t [νN(N-1)/2 + N/2]."""
    N = sys.N
    return sys.hbar * sys.omega_t * (0.5 * sys.nu * N * (N - 1) + 0.5 * N)


def _x(sys):
    x = sys.x
    if not x > 0:
        raise DomainError("need beta*hbar*omega > 0 (omega_0 > 0)")
    return x


def log_classical_partition(sys: OscillatorSystem):
    x = _x(sys)
    return -sys.beta * ground_energy(sys) - sys.N * math.log(x) - math.lgamma(sys.N + 1)


def classical_partition(sys: OscillatorSystem):
    """Z = e^{-βV⁰} / ((βħω)^N N!)."""
    return math.exp(log_classical_partition(sys))


def log_quantum_partition(sys: OscillatorSystem):
    x = _x(sys)
    n = np.arange(1, sys.N + 1)
    return -sys.beta * ground_energy(sys) - float(np.sum(np.log(-np.expm1(-n * x))))


def quantum_partition(sys: OscillatorSystem):
    """Z = e^{-βV⁰} Π_{n=1..N} (1 - e^{-nβħω})^{-1}."""
    return math.exp(log_quantum_partition(sys))


def partition_ratio(sys: OscillatorSystem):
    """Z_quantum / Z_classical; independent of the ground energy."""
    x = _x(sys)
    n = np.arange(1, sys.N + 1)
    # x^N N! / Π(1-e^{-nx}) = Π nx / (1 - e^{-nx})
    return float(np.prod(n * x / -np.expm1(-n * x)))


def ratio_expansion(sys: OscillatorSystem):
    """Leading behaviour 1 + N(N+1)x/4 of the partition ratio."""
    return 1.0 + sys.N * (sys.N + 1) * sys.x / 4.0


@dataclass
class LimitTable:
    hbar: np.ndarray
    nu: np.ndarray
    x: np.ndarray
    ratio: np.ndarray

    columns = ("hbar", "nu", "x", "ratio", "gap")

    @property
    def gap(self):
        return self.ratio - 1.0

    def orders(self):
        return np.log(self.gap[:-1] / self.gap[1:]) / np.log(self.x[:-1] / self.x[1:])

    def rows(self):
        return list(zip(self.hbar, self.nu, self.x, self.ratio, self.gap))


def classical_limit_ratio(sys: OscillatorSystem, hbar_seq):
    """Quantum/classical ratio along ħ -> 0 with ħν held at its initial value."""
    hbar_seq = np.asarray(hbar_seq, dtype=float)
    if np.any(hbar_seq <= 0) or np.any(np.diff(hbar_seq) >= 0):
        raise DomainError("hbar sequence must be positive and strictly decreasing")
    hnu = sys.hbar * sys.nu
    rows = []
    for hb in hbar_seq:
        s = sys.replace(hbar=hb, nu=hnu / hb)
        rows.append((hb, s.nu, s.x, partition_ratio(s)))
    arr = np.array(rows)
    return LimitTable(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


@dataclass
class MCResult:
    estimate: float
    stderr: float
    batch_means: np.ndarray
    samples: int


def _statistics_for(sys, statistics):
    if statistics is None:
        if sys.nu == 0:
            return Statistics.boson()
        if sys.nu == 1:
            return Statistics.fermion()
        return Statistics.anyon(sys.nu)
    if statistics.nu != sys.nu:
        raise DomainError(f"{statistics} disagrees with system nu={sys.nu}")
    return statistics


def _batch_weights(rng, n, x, size, stats):
    # proposal: independent complex Gaussians (x/π) e^{-x|z|²} per particle
    z = rng.normal(scale=math.sqrt(0.5 / x), size=(size, n, 2))
    z = z[..., 0] + 1j * z[..., 1]
    if n == 1:
        return np.full(size, 1.0 / x)
    s = np.abs(z[:, 0] - z[:, 1]) ** 2
    # Z = e^{-βV⁰}/(π² 2!) ∫ det M e^{-x(2|Z|² + u(s))} d²z1 d²z2 with det M = 2 M(s);
    # dividing by the proposal density leaves M(s) e^{-x(u(s) - s/2)} / x²
    u = relative_moment(s, stats)
    m = relative_hessian(s, stats)
    return m * np.exp(-x * (u - 0.5 * s)) / x ** 2


def mc_partition_oracle(sys: OscillatorSystem, statistics: Statistics | None = None,
                        samples=10 ** 6, seed=0, batch=10 ** 4, max_stderr=None):
    """Importance-sampled classical partition function for N ∈ {1, 2}.

    Integrates (1/(π^N N!)) ∫ det M e^{-βV} d^{2N}x with
    V = ħω Σ z_i ∂_{z_i} L + V⁰ and L the (gauge-reduced) Kähler potential.
    Batches draw from generators spawned off ``seed``; the standard error
    comes from the spread of batch means, combined with a floating-point
    rounding floor of eps·|Z|·log2(samples).
    """
    stats = _statistics_for(sys, statistics)
    if sys.N not in (1, 2):
        raise DomainError("the sampling oracle covers N = 1 and N = 2")
    x = _x(sys)
    n_batches = max(2, -(-int(samples) // int(batch)))
    children = np.random.SeedSequence(seed).spawn(n_batches)
    means = np.array([
        _batch_weights(np.random.default_rng(c), sys.N, x, batch, stats).mean()
        for c in children
    ])
    scale = math.exp(-sys.beta * ground_energy(sys))
    means *= scale
    est = float(np.mean(means))
    err = float(np.std(means, ddof=1) / math.sqrt(n_batches))
    # constant weights (N = 1) leave only summation rounding in the spread
    rounding = np.finfo(float).eps * abs(est) * math.log2(n_batches * int(batch))
    err = math.hypot(err, rounding)
    if max_stderr is not None and err > max_stderr:
        raise PrecisionError(
            f"stderr {err:.3g} above budget {max_stderr:.3g}", history=list(means)
        )
    return MCResult(est, err, means, n_batches * int(batch))


def oscillator_entropy(sys: OscillatorSystem):
    """Canonical classical entropy S = ln Z + βE = -N ln x - ln N! + N."""
    x = _x(sys)
    return -sys.N * math.log(x) - math.lgamma(sys.N + 1) + sys.N


def effective_area(sys: OscillatorSystem):
    """Single-particle area A with (A - α(N-1))/h = 1/x, α = νh.

    With this A the configurational part of Z equals V_N(A)/h^N exactly.
    """
    return sys.h / _x(sys) + sys.nu * sys.h * (sys.N - 1)


def matched_area(sys: OscillatorSystem):
    """Area 2h/x at which a uniform density equals the cloud's mean density.

    The classical one-particle density is Gaussian with peak Nx/h per unit
    symplectic area; its density-weighted mean is half the peak.
    """
    return 2.0 * sys.h / _x(sys)


def regulator_comparison(sys: OscillatorSystem):
    """(S_oscillator, S_sphere, relative difference) at matched mean density.

    The per-particle gap is about (1 - ln 2)/(1 + ln(2/(xN))), so the two
    regulators agree as ω_0 -> 0 at fixed N.
    """
    from .statmech import ThermoState, classical_thermo

    A = matched_area(sys)
    state = ThermoState(N=sys.N, A=A, alpha=sys.nu * sys.h, h=sys.h)
    s_sphere = classical_thermo(state).S
    s_osc = oscillator_entropy(sys)
    return s_osc, s_sphere, abs(s_osc - s_sphere) / abs(s_sphere)
