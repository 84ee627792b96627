"""Harmonic confinement instead of a sphere.

The classical partition function is Z = e^{-βV⁰}/(x^N N!) with x = βħω;
the quantum one replaces x^N N! by Π(1 - e^{-nx}). Their ratio tends to 1
as ħ -> 0 at fixed ħν, and a Monte Carlo integral over the two-particle
phase space reproduces the classical value.
"""
import numpy as np

from kahlerstat import OscillatorSystem, classical_limit_ratio, classical_partition
from kahlerstat import mc_partition_oracle
from kahlerstat.oscillator import regulator_comparison

tab = classical_limit_ratio(OscillatorSystem(N=3, nu=1.0), 2.0 ** -np.arange(10))
print(f"{'ħ':>10} {'ν':>8} {'Z_q/Z_cl - 1':>14}")
for hb, nu, gap in zip(tab.hbar, tab.nu, tab.gap):
    print(f"{hb:10.6f} {nu:8.1f} {gap:14.6e}")

print("\nMonte Carlo check, N = 2, β = 0.7")
for nu in (0.0, 0.5, 1.0):
    s = OscillatorSystem(N=2, nu=nu, beta=0.7)
    mc = mc_partition_oracle(s, samples=10 ** 6, seed=7)
    exact = classical_partition(s)
    print(f"  ν = {nu}: MC {mc.estimate:.6f} ± {mc.stderr:.6f}, exact {exact:.6f}, "
          f"pull {(mc.estimate - exact) / mc.stderr:+.2f}")

print("\nentropy: oscillator vs sphere regulator at matched mean density (N = 50)")
for omega_0 in (1e-1, 1e-2, 1e-3, 1e-4):
    s_osc, s_sph, rel = regulator_comparison(OscillatorSystem(N=50, omega_c=1.0, omega_0=omega_0))
    print(f"  ω_0 = {omega_0:.0e}: S_osc = {s_osc:9.3f}, S_sphere = {s_sph:9.3f}, rel {rel:.3f}")
