"""Classical statistical mechanics of degenerate particles and exclusion statistics.

The classical side uses the phase-space volume V_N = (A - α(N-1))^N/N!
and ρ = N/A. The quantum side uses Haldane's counting with G single
particle states and exclusion parameter g. The classical limit is the
double limit h -> 0, g -> ∞ with g h^D -> α fixed, with n = ρ h^D.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, IncompressibilityError, SaturationError
from .sphere import log_nparticle_volume


@dataclass(frozen=True)
class ThermoState:
    """N particles sharing single-particle volume A, statistics parameter α."""

    N: float
    A: float
    alpha: float = 0.0
    beta: float = 1.0
    E: float = 0.0
    h: float = 1.0

    def __post_init__(self):
        if self.N < 0 or self.A <= 0 or self.beta <= 0 or self.h <= 0 or self.alpha < 0:
            raise DomainError("need N >= 0, A > 0, beta > 0, h > 0, alpha >= 0")

    @property
    def rho(self):
        return self.N / self.A

    @property
    def packing(self):
        """αρ; 1 is the incompressible limit."""
        return self.alpha * self.rho


@dataclass
class ThermoResult:
    F: float
    S: float
    P: float
    betaP: float
    log_Z: float


def _check_packing(packing):
    if np.any(np.asarray(packing) >= 1.0):
        raise IncompressibilityError(
            f"density at or beyond the maximum 1/alpha (alpha*rho = {np.max(packing)})"
        )


def _limit_entropy(N, A, alpha, h):
    # complex-step friendly: only +, *, / and log of A
    return N * np.log(1.0 - alpha * N / A) + N * np.log(A / h) - N * math.log(N) + N


def classical_thermo(state: ThermoState) -> ThermoResult:
    """Thermodynamic-limit F, S and P (N - 1 replaced by N).

    S = N ln(1 - αρ) + N ln(A/h) - N ln N + N,  βP = ρ/(1 - αρ).
    """
    _check_packing(state.packing)
    T = 1.0 / state.beta
    if state.N == 0:
        S = 0.0
    else:
        S = float(_limit_entropy(state.N, state.A, state.alpha, state.h))
    betaP = state.rho / (1.0 - state.packing)
    return ThermoResult(state.E - T * S, S, T * betaP, betaP, S - state.beta * state.E)


def classical_thermo_exact(state: ThermoState) -> ThermoResult:
    """F, S and P from the exact volume, keeping N - 1.

    S = ln(V_N/h^N), βP = ∂S/∂A = N/(A - α(N-1)).
    """
    _check_packing(state.packing)
    T = 1.0 / state.beta
    N = int(round(state.N))
    if N != state.N:
        raise DomainError("exact volume needs integer N")
    S = log_nparticle_volume(state.A, N, state.alpha / state.h, state.h) - N * math.log(state.h)
    betaP = N / (state.A - state.alpha * (N - 1)) if N else 0.0
    return ThermoResult(state.E - T * S, S, T * betaP, betaP, S - state.beta * state.E)


def pressure_from_free_energy(state: ThermoState, step=1e-20):
    """P = -∂F/∂A of the thermodynamic-limit free energy, by complex step."""
    _check_packing(state.packing)
    A = complex(state.A, step)
    S = _limit_entropy(state.N, A, state.alpha, state.h)
    return float(S.imag / step) / state.beta


def _exact_arg(x):
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else None
    if isinstance(x, float) and x.is_integer():
        return None
    return None


def exclusion_log_weight(G, N, g):
    """ln W_N = ln Γ(G+(1-g)(N-1)+1) - ln Γ(N+1) - ln Γ(G-gN-(1-g)+1)."""
    top = G + (1 - g) * (N - 1)
    bottom = G - g * N - (1 - g)
    if N < 0 or top < 0 or bottom < 0:
        raise SaturationError(
            f"over-exclusion: factorial arguments {top}, {N}, {bottom} must be >= 0", value=0
        )
    return math.lgamma(top + 1) - math.lgamma(N + 1) - math.lgamma(bottom + 1)


def exclusion_weight(G, N, g, log=False):
    """Haldane statistical weight W_N = (G+(1-g)(N-1))! / (N! (G-gN-(1-g))!).

    With integer G, N and a rational g (int or Fraction) that makes the
    arguments integral the result is an exact int; otherwise it is
    evaluated through log-Gamma. g = 0 gives C(G+N-1, N), g = 1 gives C(G, N).
    """
    if log:
        return exclusion_log_weight(G, N, g)
    top = G + (1 - g) * (N - 1)
    bottom = G - g * N - (1 - g)
    if N < 0 or top < 0 or bottom < 0:
        raise SaturationError(
            f"over-exclusion: factorial arguments {top}, {N}, {bottom} must be >= 0", value=0
        )
    if isinstance(N, int) and isinstance(G, int) and isinstance(g, (int, Fraction)):
        t = _exact_arg(top)
        if t is not None:
            # top - bottom = N identically
            return math.comb(t, N)
    return math.exp(exclusion_log_weight(G, N, g))


@dataclass(frozen=True)
class ExclusionLevel:
    """A level of D states with occupation n per state and exclusion g."""

    D: float
    n: float
    g: float

    def __post_init__(self):
        if self.D < 0 or self.g < 0:
            raise DomainError("need D >= 0 and g >= 0")
        if self.n < 0 or self.g * self.n > 1.0:
            raise DomainError(f"occupation n={self.n} outside [0, 1/g] for g={self.g}")

    @property
    def total_states(self):
        return self.D


def level_entropy(n, g):
    """Entropy per state of a level with occupation n and exclusion g.

    s = [1+(1-g)n]ln[1+(1-g)n] - (1-gn)ln(1-gn) - n ln n, evaluated in
    the grouped form n ln(a/n) + b ln(1 + n/b), a = 1+(1-g)n, b = 1-gn,
    with log1p throughout, which avoids cancelling the large a ln a and
    n ln n terms.
    """
    n = np.asarray(n, dtype=float)
    b = 1.0 - g * n
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        big = n > 1.0
        ns = np.where(n > 0, n, 1.0)
        # ln(a/n) = log1p(1/n - g) for large n, log1p((1-g)n) - ln n otherwise
        ratio = np.where(big, np.log1p(1.0 / ns - g), np.log1p((1.0 - g) * ns) - np.log(ns))
        first = np.where(n > 0, n * ratio, 0.0)
        bs = np.where(b > 0, b, 1.0)
        second = np.where(b > 0, b * np.log1p(n / bs), 0.0)
    return first + second


def level_entropy_expanded(n, g):
    """The same entropy as the literal sum of three x ln x terms (reference form)."""
    n = np.asarray(n, dtype=float)
    a = 1.0 + (1.0 - g) * n
    b = 1.0 - g * n
    return xlogy(a, a) - xlogy(b, b) - xlogy(n, n)


def exclusion_entropy(levels):
    """S = Σ_k D_k s(n_k, g) over a list of ExclusionLevel."""
    return float(sum(lv.D * level_entropy(lv.n, lv.g) for lv in levels))


def classical_limit_entropy(rho, cell_volumes, alpha, h=1.0):
    """S = Σ_k V_k [ρ_k ln(1-αρ_k) - ρ_k ln(ρ_k h) + ρ_k], V_k = D_k h^D."""
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    vol = np.broadcast_to(np.asarray(cell_volumes, dtype=float), rho.shape)
    if np.any(rho < 0):
        raise DomainError("densities must be nonnegative")
    _check_packing(alpha * rho)
    terms = xlogy(rho, 1.0 - alpha * rho) - xlogy(rho, rho * h) + rho
    return float(np.sum(vol * terms))


def exclusion_eos(G, V, n, g):
    """βP = (G/V) ln(1 + n/(1 - gn)) for a degenerate level of G states."""
    if n < 0 or V <= 0:
        raise DomainError("need n >= 0 and V > 0")
    _check_packing(g * n)
    return G / V * math.log1p(n / (1.0 - g * n))


def empirical_orders(h, gaps):
    """log(gap_k/gap_{k+1}) / log(h_k/h_{k+1}) for consecutive sweep entries."""
    h = np.asarray(h, dtype=float)
    gaps = np.abs(np.asarray(gaps, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(gaps[:-1] / gaps[1:]) / np.log(h[:-1] / h[1:])


@dataclass
class SweepResult:
    h: np.ndarray
    g: np.ndarray
    S_quantum: np.ndarray
    S_classical: np.ndarray
    betaP_quantum: np.ndarray
    betaP_classical: np.ndarray
    config: dict = field(default_factory=dict)

    columns = ("h", "g", "S_quantum", "S_classical", "gap", "betaP_quantum",
               "betaP_classical", "entropy_rel_gap", "betaP_rel_gap")

    @property
    def gap(self):
        return self.S_quantum - self.S_classical

    @property
    def entropy_rel_gap(self):
        return np.abs(self.gap) / np.abs(self.S_classical)

    @property
    def betaP_rel_gap(self):
        return np.abs(self.betaP_quantum - self.betaP_classical) / np.abs(self.betaP_classical)

    def entropy_orders(self, relative=True):
        return empirical_orders(self.h, self.entropy_rel_gap if relative else self.gap)

    def betaP_orders(self):
        return empirical_orders(self.h, self.betaP_rel_gap)

    def rows(self):
        return list(zip(self.h, self.g, self.S_quantum, self.S_classical, self.gap,
                        self.betaP_quantum, self.betaP_classical,
                        self.entropy_rel_gap, self.betaP_rel_gap))


def double_limit_sweep(alpha, rho, h_seq, A=1.0, D=1, volume_unit=1.0):
    """Quantum exclusion entropy and pressure against their classical limits.

    For each h: G = A/h^D states, g = α/h^D, n = ρh^D. The real-space
    volume is 𝒱 = volume_unit·A.
    """
    h_seq = np.asarray(h_seq, dtype=float)
    if np.any(h_seq <= 0) or np.any(np.diff(h_seq) >= 0):
        raise DomainError("h sequence must be positive and strictly decreasing")
    if rho <= 0:
        raise DomainError("rho must be positive")
    _check_packing(alpha * rho)
    V = volume_unit * A
    cell = h_seq ** D
    G = A / cell
    g = alpha / cell
    n = rho * cell
    S_q = G * level_entropy(n, g)
    S_c = np.array([classical_limit_entropy(rho, A, alpha, hk ** D) for hk in h_seq])
    bp_q = np.array([exclusion_eos(Gk, V, nk, gk) for Gk, nk, gk in zip(G, n, g)])
    rho_t = rho * A / V
    bp_c = np.full_like(h_seq, rho_t / (1.0 - alpha * rho_t * V / A))
    config = {"alpha": alpha, "rho": rho, "A": A, "D": D, "volume_unit": volume_unit}
    return SweepResult(h_seq, g, S_q, S_c, bp_q, bp_c, config)
