"""Self-dual vortices: solve the radial profile, then count their moduli.

Each vortex carries flux 2π and energy π (dimensionless units, μħ = 1).
Its moduli-space volume on area A is (A - 4πμh(N-1))^N / N!, i.e. the
sphere formula with g = 4πμ: vortices obey exclusion statistics.
"""
import math

from kahlerstat import VortexParams, solve_radial_vortex, statistics_parameter, vortex_volume
from kahlerstat.sphere import nparticle_volume

print(f"{'N':>2} {'flux/2πN':>12} {'energy/πN':>12} {'core exp':>9} {'iters':>5}")
for N in (1, 2, 3, 4):
    p = solve_radial_vortex(VortexParams(N=N))
    print(f"{N:2d} {p.flux / (2 * math.pi * N):12.9f} {p.energy / (math.pi * N):12.9f} "
          f"{p.core_exponent():9.4f} {len(p.history):5d}")

h = 2 * math.pi
for mu in (1 / (4 * math.pi), 1 / (12 * math.pi)):
    alpha, g = statistics_parameter(mu, h)
    A = 10 * h
    v = vortex_volume(A, 3, mu, h)
    print(f"\nμ = {mu:.5f}: g = {g:.4f}, α = {alpha:.4f}")
    print(f"  V_3 = {v:.6e}, sphere volume with the same g = {nparticle_volume(A, 3, g, h):.6e}")
