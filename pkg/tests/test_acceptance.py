"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import math
from fractions import Fraction

import numpy as np
import pytest

from kahlerstat import (BOSON, FERMION, Region2D, Statistics, ThermoState,
                        classical_limit_entropy, classical_thermo, double_limit_sweep,
                        exclusion_entropy, exclusion_eos, exclusion_weight, fit_small_r_metric,
                        norm_sq_inverse, nparticle_volume, relative_field,
                        sphere_norm_sq_inverse, volume_area_integral,
                        volume_boundary_integral, vortex_volume)
from kahlerstat.cli import main
from kahlerstat.errors import DomainError, IncompressibilityError, SaturationError
from kahlerstat.oscillator import (OscillatorSystem, classical_limit_ratio, classical_partition,
                                   mc_partition_oracle)
from kahlerstat.planar import relative_hessian
from kahlerstat.sphere import (expected_reduction_exponent, fermion_reduction_exponent,
                               log_nparticle_volume)
from kahlerstat.statmech import (ExclusionLevel, classical_thermo_exact,
                                 pressure_from_free_energy)
from kahlerstat.vortex import VortexParams, solve_radial_vortex

ANYON_NUS = (0.25, 0.5, 0.75)


def _volumes(stats, R, hbar=1.0):
    field = relative_field(stats, hbar)
    region = Region2D.disk(R, relative=True)
    return volume_area_integral(field, region).value, volume_boundary_integral(field, region).value


def test_criterion_01_two_particle_volumes(report):
    worst = 0.0
    lines = []
    for hbar in (1.0, 0.5):
        for R in (2.0, 4.0, 8.0):
            for stats, shift in ((BOSON, 0.0), (FERMION, 2 * math.pi)):
                exact = 0.5 * hbar * (math.pi * R * R - shift)
                for v in _volumes(stats, R, hbar):
                    err = abs(v - exact) / exact
                    worst = max(worst, err)
                    if err >= 1e-6:
                        lines.append(f"{stats.kind} R={R} hbar={hbar} rel={err:.2e}")
    ok = worst < 1e-6
    report(1, "two-particle disk volumes", ok,
           f"worst rel err {worst:.2e}; " + ("; ".join(sorted(set(lines))) or "all < 1e-6"))
    assert ok


def test_criterion_02_stokes_equivalence(report):
    cases = [BOSON, FERMION] + [Statistics.anyon(nu) for nu in ANYON_NUS]
    worst = 0.0
    for stats in cases:
        for R in (0.5, 1.0, 2.0, 4.0, 8.0):
            area, boundary = _volumes(stats, R)
            worst = max(worst, abs(area - boundary) / abs(area))
    ok = worst < 1e-6
    report(2, "Stokes: area vs boundary integral", ok, f"max rel diff {worst:.2e}")
    assert ok


def test_criterion_03_small_r_metric(report):
    worst = 0.0
    for hbar in (1.0, 0.7):
        expected = [(BOSON, hbar), (FERMION, hbar / 3.0)]
        expected += [(Statistics.anyon(nu), 2 * hbar / ((1 + nu) * (2 + nu))) for nu in ANYON_NUS]
        for stats, want in expected:
            coef, _ = fit_small_r_metric(stats, hbar)
            worst = max(worst, abs(coef - want))
    ok = worst < 1e-4
    report(3, "small-r metric coefficient", ok, f"max abs err {worst:.2e}")
    assert ok


def test_criterion_04_anyon_endpoints(report):
    r = np.linspace(0.1, 5.0, 200)
    s = r * r
    gap0 = np.max(np.abs(2 * relative_hessian(s, Statistics.anyon(0.0))
                         - 2 * relative_hessian(s, BOSON)))
    gap1 = np.max(np.abs(2 * relative_hessian(s, Statistics.anyon(1.0))
                         - 2 * relative_hessian(s, FERMION)))
    ok = max(gap0, gap1) < 1e-8
    report(4, "hypergeometric metric at nu=0,1", ok, f"gap nu=0 {gap0:.1e}, nu=1 {gap1:.1e}")
    assert ok


def _separated_points(rng, n, radius=2.5, sep=0.6):
    # well separated points keep the fermion determinant well conditioned,
    # so that both float evaluations can be compared at 1e-12
    while True:
        z = radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
        d = np.abs(z[:, None] - z[None, :]) + 10 * np.eye(n)
        if d.min() >= sep:
            return z


def test_criterion_05_normalization_oracles(report):
    rng = np.random.default_rng(20240)
    worst = 0.0
    for n in range(1, 7):
        for _ in range(50):
            z = _separated_points(rng, n)
            # brute-force sums are taken in exact arithmetic on the same float matrix
            pairs = [
                (norm_sq_inverse(z, BOSON, method="ryser"), norm_sq_inverse(z, BOSON, method="exact")),
                (norm_sq_inverse(z, FERMION), norm_sq_inverse(z, FERMION, method="exact")),
            ]
            for j in (3, 5):
                pairs.append((sphere_norm_sq_inverse(z, BOSON, j, method="ryser"),
                              sphere_norm_sq_inverse(z, BOSON, j, method="exact")))
                pairs.append((sphere_norm_sq_inverse(z, FERMION, j),
                              sphere_norm_sq_inverse(z, FERMION, j, method="exact")))
            for fast, brute in pairs:
                worst = max(worst, abs(fast - brute) / abs(brute))
    ok = worst < 1e-12
    report(5, "Ryser/determinant vs permutation sums", ok, f"max rel diff {worst:.2e}")
    assert ok


def test_criterion_06_sphere_fermion_reduction(report):
    worst = 0.0
    for j in (3, 5, 10):
        for n in (1, 2, 3, 4):
            fit = fermion_reduction_exponent(j, n)
            assert expected_reduction_exponent(j, n) == pytest.approx(2 * j * n * (1 - (n - 1) / (2 * j)))
            worst = max(worst, abs(fit.slope - expected_reduction_exponent(j, n)))
    filled = max(abs(fermion_reduction_exponent(j, 2 * j + 1).slope) for j in (3, 5, 10))
    ok = worst < 1e-3 and filled < 1e-3
    report(6, "sphere fermion Kähler coefficient", ok,
           f"max err {worst:.1e}; |coef| at N=2j+1 {filled:.1e}")
    assert ok


def test_criterion_07_volume_law(report):
    ok = True
    for A in (Fraction(7), Fraction(31, 3), Fraction(100)):
        for h in (Fraction(1), Fraction(1, 4)):
            for n in range(1, 6):
                fact = math.factorial(n)
                ok &= nparticle_volume(A, n, 0, h) == A ** n / fact
                ok &= nparticle_volume(A, n, 1, h) == (A - (n - 1) * h) ** n / fact
                for nu in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                    ok &= nparticle_volume(A, n, nu, h) == (A - nu * (n - 1) * h) ** n / fact
    for A, n, mu, h in ((40.0, 3, 1 / (4 * math.pi), 1.0), (500.0, 4, 0.3, 2 * math.pi),
                        (12.5, 2, 0.05, 0.5)):
        ok &= vortex_volume(A, n, mu, h) == nparticle_volume(A, n, 4.0 * math.pi * mu, h)
    report(7, "volume law exact (boson, fermion, anyon, vortex)", ok)
    assert ok


def test_criterion_08_vortex_solver(report):
    worst_flux = worst_energy = 0.0
    for n in (1, 2, 3, 4):
        p = solve_radial_vortex(VortexParams(N=n))
        worst_flux = max(worst_flux, abs(p.flux - 2 * math.pi * n) / (2 * math.pi * n))
        worst_energy = max(worst_energy, abs(p.energy - math.pi * n) / (math.pi * n))
    # second order: the energy error and the profile self-difference drop ~4x per halving
    ratios = []
    for n in (1, 2, 3, 4):
        profs = [solve_radial_vortex(VortexParams(N=n, r_max=30.0, points=1000 * 2 ** k + 1))
                 for k in range(4)]
        err = [abs(p.energy - math.pi * n) for p in profs]
        diff = [np.max(np.abs(profs[k].rho - profs[k + 1].rho[::2])) for k in range(3)]
        ratios += [err[k] / err[k + 1] for k in range(3)]
        ratios += [diff[k] / diff[k + 1] for k in range(2)]
    second_order = all(3.5 <= q <= 4.5 for q in ratios)
    ok = worst_flux < 1e-4 and worst_energy < 1e-3 and second_order
    report(8, "vortex flux, energy, second-order mesh convergence", ok,
           f"flux rel {worst_flux:.1e}, energy rel {worst_energy:.1e}, "
           f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]")
    assert ok


def test_criterion_09_exclusion_counting(report):
    exact = all(
        exclusion_weight(G, n, 0) == math.comb(G + n - 1, n)
        and exclusion_weight(G, n, 1) == math.comb(G, n)
        for G in range(1, 31) for n in range(0, G + 1)
    )
    A, n, G = 1.0, 100, 10 ** 4
    h = A / G
    gaps = []
    for packing in (0.0, 0.25, 0.5):
        alpha = packing * A / n
        g = alpha / h
        log_w = exclusion_weight(G, n, g, log=True)
        log_v = log_nparticle_volume(A, n, g, h) - n * math.log(h)
        gaps.append(abs(log_w - log_v) / abs(log_v))
    ok = exact and max(gaps) < 1e-2
    report(9, "exclusion counting and classical bridge", ok,
           f"exact={exact}, rel gaps at G=1e4 {', '.join(f'{x:.1e}' for x in gaps)}")
    assert ok


def test_criterion_10_classical_double_limit(report):
    hs = 2.0 ** -np.arange(12)
    sweep = double_limit_sweep(1.0, 0.5, hs)
    s_gap = sweep.entropy_rel_gap
    p_gap = sweep.betaP_rel_gap
    s_ord = sweep.entropy_orders()
    p_ord = sweep.betaP_orders()
    mono = bool(np.all(np.diff(s_gap) < 0) and np.all(np.diff(p_gap) < 0))
    ok = mono and np.all(s_ord >= 1) and np.all(p_ord >= 1) and p_gap[-1] < 1e-3
    report(10, "classical double limit", ok,
           f"monotone={mono}, entropy orders [{s_ord.min():.3f}, {s_ord.max():.3f}], "
           f"betaP orders [{p_ord.min():.5f}, {p_ord.max():.5f}], final betaP gap {p_gap[-1]:.1e}")
    assert ok


def test_criterion_11_oscillator_correspondence(report):
    base = OscillatorSystem(N=3, nu=0.5, omega_0=1.0, beta=1.0, hbar=1e-2)
    table = classical_limit_ratio(base, [1e-2, 5e-3, 2.5e-3])
    assert np.allclose(table.x, [1e-2, 5e-3, 2.5e-3], rtol=1e-12)
    assert np.allclose(table.nu * table.hbar, 0.5e-2, rtol=1e-12)
    orders = table.orders()
    linear = bool(np.all(np.abs(orders - 1) < 0.05))
    pulls = []
    for n in (1, 2):
        for nu in (0.0, 1.0):
            osc = OscillatorSystem(N=n, nu=nu)
            mc = mc_partition_oracle(osc, samples=10 ** 6, seed=7)
            pulls.append(abs(mc.estimate - classical_partition(osc)) / mc.stderr)
    ok = linear and max(pulls) <= 3
    report(11, "oscillator limit and MC oracle", ok,
           f"orders {', '.join(f'{o:.4f}' for o in orders)}; MC pulls "
           f"{', '.join(f'{p:.2f}' for p in pulls)} sigma")
    assert ok


def _raises(fn, exc):
    try:
        fn()
    except exc:
        return True
    return False


def test_criterion_12_incompressibility(report):
    A, N, h = 10.0, 20.0, 0.1
    checks = {}
    for packing in (1.0, 1.5):
        alpha = packing * A / N
        rho = N / A
        st = ThermoState(N=N, A=A, alpha=alpha, h=h)
        g = packing  # exclusion level with g n = packing
        checks[f"classical_thermo@{packing}"] = _raises(lambda: classical_thermo(st), IncompressibilityError)
        checks[f"classical_thermo_exact@{packing}"] = _raises(lambda: classical_thermo_exact(st), IncompressibilityError)
        checks[f"pressure@{packing}"] = _raises(lambda: pressure_from_free_energy(st), IncompressibilityError)
        checks[f"limit_entropy@{packing}"] = _raises(
            lambda: classical_limit_entropy(rho, A, alpha, h), IncompressibilityError)
        checks[f"exclusion_eos@{packing}"] = _raises(lambda: exclusion_eos(100, 1.0, 1.0, g), IncompressibilityError)
        checks[f"sweep@{packing}"] = _raises(
            lambda: double_limit_sweep(alpha, rho, [1.0, 0.5]), IncompressibilityError)
        checks[f"cli thermo@{packing}"] = main(
            ["thermo", "--n", str(N), "--area", str(A), "--alpha", str(alpha)]) == 3
    # a filled exclusion level is a legitimate zero-entropy state; beyond it is an error
    checks["exclusion_entropy beyond"] = _raises(
        lambda: exclusion_entropy([ExclusionLevel(10, 0.75, 2.0)]), DomainError)
    checks["volume beyond"] = _raises(lambda: nparticle_volume(1.0, 3, 1.0, 0.6), SaturationError)
    # just below the limit everything is finite
    st = ThermoState(N=N, A=A, alpha=(1 - 1e-9) * A / N, h=h)
    checks["below finite"] = all(math.isfinite(v) for v in (
        classical_thermo(st).P, classical_thermo_exact(st).P, pressure_from_free_energy(st),
        exclusion_eos(100, 1.0, 1.0, 1 - 1e-9)))
    failed = [k for k, v in checks.items() if not v]
    ok = not failed
    report(12, "incompressibility errors at and beyond rho = 1/alpha", ok,
           f"{len(checks)} checks" + (f"; failed: {failed}" if failed else ""))
    assert ok
