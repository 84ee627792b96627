import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlerstat.errors import DomainError, IncompressibilityError, SaturationError
from kahlerstat.sphere import log_nparticle_volume
from kahlerstat.statmech import (ExclusionLevel, ThermoState, classical_limit_entropy,
                                 classical_thermo, classical_thermo_exact, double_limit_sweep,
                                 empirical_orders, exclusion_entropy, exclusion_eos,
                                 exclusion_log_weight, exclusion_weight, level_entropy,
                                 level_entropy_expanded, pressure_from_free_energy)


def test_eos_examples():
    st_ = ThermoState(N=50, A=100.0)
    assert classical_thermo(st_).betaP == pytest.approx(0.5)
    st_ = ThermoState(N=50, A=100.0, alpha=1.0)  # αρ = ½
    assert classical_thermo(st_).betaP == pytest.approx(1.0)
    assert classical_thermo(ThermoState(N=50, A=100.0, beta=2.0)).P == pytest.approx(0.25)


def test_free_energy_relations():
    st_ = ThermoState(N=40, A=90.0, alpha=0.8, beta=0.7, E=3.0, h=0.5)
    r = classical_thermo(st_)
    assert r.F == pytest.approx(st_.E - r.S / st_.beta)
    assert r.log_Z == pytest.approx(-st_.beta * r.F)


@settings(max_examples=60, deadline=None)
@given(st.floats(1.0, 100.0), st.floats(10.0, 1e4), st.floats(0.0, 0.99), st.floats(0.1, 5.0))
def test_maxwell_consistency(N, A, packing, beta):
    alpha = packing * A / N
    st_ = ThermoState(N=N, A=A, alpha=alpha, beta=beta)
    assert pressure_from_free_energy(st_) == pytest.approx(classical_thermo(st_).P, rel=1e-8)


def test_stirling_gap():
    for N in (100, 400, 1000):
        st_ = ThermoState(N=N, A=3.0 * N, alpha=1.0, h=0.2)
        exact = classical_thermo_exact(st_).S
        limit = classical_thermo(st_).S
        assert abs(exact - limit) / abs(exact) < 2 / N
        assert classical_thermo_exact(st_).betaP == pytest.approx(N / (st_.A - (N - 1)))
    with pytest.raises(DomainError):
        classical_thermo_exact(ThermoState(N=2.5, A=10.0))


def test_thermo_state_validation():
    for bad in (dict(N=-1, A=1.0), dict(N=1, A=0.0), dict(N=1, A=1.0, beta=0),
                dict(N=1, A=1.0, alpha=-1)):
        with pytest.raises(DomainError):
            ThermoState(**bad)
    assert classical_thermo(ThermoState(N=0, A=1.0)).S == 0


def test_weight_examples():
    assert exclusion_weight(4, 2, 0) == 10
    assert exclusion_weight(4, 2, 1) == 6
    half = exclusion_weight(4, 2, Fraction(1, 2))
    # Γ(G+(1-g)(N-1)+1)/(Γ(N+1)Γ(G-gN-(1-g)+1)) with G=4, N=2, g=½: Γ(5.5)/(Γ(3)Γ(3.5))
    ref = math.exp(math.lgamma(5.5) - math.lgamma(3) - math.lgamma(3.5))
    assert half == pytest.approx(ref, rel=1e-14)
    assert exclusion_weight(6, 2, Fraction(1, 2), log=True) == pytest.approx(math.log(exclusion_weight(6, 2, Fraction(1, 2))))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 30), st.data())
def test_endpoint_counting(G, data):
    N = data.draw(st.integers(0, G))
    b = exclusion_weight(G, N, 0)
    f = exclusion_weight(G, N, 1)
    assert isinstance(b, int) and isinstance(f, int)
    assert b == math.comb(G + N - 1, N)
    assert f == math.comb(G, N)


def test_integer_exclusion_exact():
    # g = 2: W = C(G - N + 1, N), integers throughout
    assert exclusion_weight(10, 3, 2) == math.comb(8, 3)
    with pytest.raises(SaturationError):
        exclusion_weight(3, 3, 2)
    with pytest.raises(SaturationError):
        exclusion_log_weight(3, 3, 2)


def test_counting_bridge_converges():
    A, N, alpha = 1.0, 100, 0.005
    gaps = []
    for G in (500, 1000, 2000, 10000):
        h = A / G
        g = alpha / h
        lw = exclusion_weight(G, N, g, log=True)
        lv = log_nparticle_volume(A, N, g, h) - N * math.log(h)
        gaps.append(abs(lw - lv) / abs(lv))
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 1e-2


def test_level_entropy_examples():
    assert exclusion_entropy([ExclusionLevel(5, 0.0, 0.5)]) == 0
    assert exclusion_entropy([ExclusionLevel(5, 1.0, 1.0)]) == 0
    lv = ExclusionLevel(1, 1.0, 0.5)
    assert exclusion_entropy([lv]) == pytest.approx(level_entropy_expanded(1.0, 0.5), rel=1e-14)
    # g = 0 is Bose-Einstein, g = 1 Fermi-Dirac
    n = 0.3
    be = (1 + n) * math.log(1 + n) - n * math.log(n)
    fd = -(1 - n) * math.log(1 - n) - n * math.log(n)
    assert level_entropy(n, 0.0) == pytest.approx(be)
    assert level_entropy(n, 1.0) == pytest.approx(fd)


@settings(max_examples=100, deadline=None)
@given(st.one_of(st.just(0.0), st.floats(1e-12, 5.0)), st.floats(0.0, 1.0))
def test_entropy_nonnegative(g, t):
    n = t / g if g > 0 else 10 * t
    assert float(level_entropy(n, g)) >= 0


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 5.0), st.floats(0.0, 1.0))
def test_entropy_grouped_matches_expanded(g, t):
    # moderate occupations, where the expanded form has no cancellation problem
    n = t / max(g, 1.0)
    assert float(level_entropy(n, g)) == pytest.approx(float(level_entropy_expanded(n, g)),
                                                       rel=1e-12, abs=1e-14)


def test_entropy_large_occupation_is_stable():
    g, n = 1e-12, 0.5e12
    # a ≈ n: the expanded form cancels to about four digits here
    import mpmath
    with mpmath.workdps(50):
        G, N = mpmath.mpf(g), mpmath.mpf(n)
        a = 1 + (1 - G) * N
        b = 1 - G * N
        ref = a * mpmath.log(a) - b * mpmath.log(b) - N * mpmath.log(N)
    assert float(level_entropy(n, g)) == pytest.approx(float(ref), rel=1e-12)


def test_level_validation():
    with pytest.raises(DomainError):
        ExclusionLevel(1, 0.8, 2.0)
    with pytest.raises(DomainError):
        ExclusionLevel(-1, 0.1, 0.5)
    assert ExclusionLevel(7, 0.1, 0.5).total_states == 7


def test_classical_limit_entropy_boltzmann_and_degenerate():
    # α = 0: Σ V ρ(1 - ln ρh)
    rho = np.array([0.5, 1.5])
    vol = np.array([2.0, 3.0])
    ref = float(np.sum(vol * rho * (1 - np.log(rho * 0.1))))
    assert classical_limit_entropy(rho, vol, 0.0, 0.1) == pytest.approx(ref)
    # one degenerate cell reproduces the thermodynamic-limit entropy
    rng = np.random.default_rng(2)
    for _ in range(10):
        A, N = rng.uniform(10, 100), rng.uniform(1, 50)
        alpha = rng.uniform(0, 0.99) * A / N
        h = rng.uniform(0.1, 2)
        ref = classical_thermo(ThermoState(N=N, A=A, alpha=alpha, h=h)).S
        assert classical_limit_entropy(N / A, A, alpha, h) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(DomainError):
        classical_limit_entropy([-1.0], [1.0], 0.1)


def test_exclusion_eos_examples():
    G, V = 100, 10.0
    n = 1e-6
    assert exclusion_eos(G, V, n, 0.0) == pytest.approx(G / V * n, rel=1e-5)
    assert exclusion_eos(G, V, 0.999999, 1.0) > exclusion_eos(G, V, 0.99, 1.0)
    with pytest.raises(IncompressibilityError):
        exclusion_eos(G, V, 1.0, 1.0)
    with pytest.raises(DomainError):
        exclusion_eos(G, V, -0.1, 1.0)


def test_pressure_diverges_toward_incompressibility():
    prev = 0.0
    for packing in (0.9, 0.99, 0.999, 0.9999):
        p = classical_thermo(ThermoState(N=10, A=10.0, alpha=packing)).betaP
        assert p > prev
        prev = p
    assert prev > 1e4


def test_sweep_examples():
    hs = 2.0 ** -np.arange(10)
    sweep = double_limit_sweep(1.0, 0.5, hs)
    assert np.all(np.diff(np.abs(sweep.gap)) < 0)
    assert np.all(np.diff(sweep.betaP_rel_gap) < 0)
    assert sweep.betaP_rel_gap[-1] < 1e-3
    assert np.all(sweep.g == 1.0 / hs)
    # α = 0: the gap closes as well
    free = double_limit_sweep(0.0, 0.5, hs)
    assert np.all(np.diff(np.abs(free.gap)) < 0)
    rows = sweep.rows()
    assert len(rows) == len(hs) and len(rows[0]) == len(sweep.columns)


def test_sweep_validation():
    with pytest.raises(DomainError):
        double_limit_sweep(1.0, 0.5, [0.5, 1.0])
    with pytest.raises(DomainError):
        double_limit_sweep(1.0, 0.0, [1.0, 0.5])


def test_empirical_orders():
    h = np.array([1.0, 0.5, 0.25])
    assert np.allclose(empirical_orders(h, 3 * h ** 2), 2.0)
