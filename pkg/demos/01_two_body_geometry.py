"""Two identical particles in the plane: how statistics bends phase space.

The relative coordinate z = z1 - z2 carries the symplectic form
f = iħ M(|z|²) dz∧dz̄. Far apart, M -> ½ for every statistics; near
coincidence the form flattens to zero for bosons, and the small-r metric
coefficient drops from 1 (bosons) to 1/3 (fermions) as ν runs over [0, 1].
The missing area shows up in the finite-disk volume as ½ħ(πR² - 2πν).
"""
import math

import numpy as np

from kahlerstat import BOSON, FERMION, Region2D, Statistics, relative_field
from kahlerstat import small_r_metric_coefficient, volume_boundary_integral
from kahlerstat.planar import relative_hessian

print("M(r) for the relative coordinate")
print(f"{'r':>6} {'boson':>12} {'fermion':>12} {'anyon 0.5':>12}")
for r in (0.1, 0.5, 1.0, 2.0, 4.0):
    s = r * r
    vals = [float(relative_hessian(s, st)) for st in (BOSON, FERMION, Statistics.anyon(0.5))]
    print(f"{r:6.2f} " + " ".join(f"{v:12.6f}" for v in vals))

print("\nsmall-r metric coefficient c(ν) in g ≈ c·ħ r²:")
for nu in np.linspace(0, 1, 5):
    print(f"  ν = {nu:.2f}: c = {small_r_metric_coefficient(Statistics.anyon(nu)):.6f}")

print("\nrelative-disk volume against ½ħ(πR² - 2πν), ħ = 1")
for nu in (0.0, 0.5, 1.0):
    for R in (2.0, 4.0, 8.0):
        v = volume_boundary_integral(relative_field(Statistics.anyon(nu)),
                                     Region2D.disk(R, relative=True)).value
        ref = 0.5 * (math.pi * R * R - 2 * math.pi * nu)
        print(f"  ν = {nu:.1f}, R = {R:3.0f}: V = {v:12.8f}  formula {ref:12.8f}  rel {abs(v / ref - 1):.1e}")
print("\nthe deficit 2πν·½ħ appears once R is a few magnetic lengths")
