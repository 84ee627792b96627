"""N particles on a sphere of area A = 2j·h: volumes and the filled level.

The coinciding-particle volume is V_N = (A - ν(N-1)h)^N / N!. For fermions
(ν = 1) it vanishes exactly when N = 2j + 1, the number of states in the
lowest level, and is undefined beyond. Each extra particle removes νh of
area, which is exclusion statistics with g = ν.
"""
from fractions import Fraction

from kahlerstat import SaturationError, nparticle_volume
from kahlerstat.sphere import is_saturated

h = Fraction(1)
two_j = 4
A = two_j * h
print(f"A = {A}h (2j + 1 = {two_j + 1} states)")
print(f"{'N':>3} {'boson':>14} {'ν=1/2':>14} {'fermion':>14}")
for N in range(1, two_j + 3):
    cells = []
    for nu in (0, Fraction(1, 2), 1):
        try:
            cells.append(str(nparticle_volume(A, N, nu, h)))
        except SaturationError:
            cells.append("over-filled")
    print(f"{N:3d} " + " ".join(f"{c:>14}" for c in cells))
print("\nfermions fill the level at N = 5:", is_saturated(A, 5, 1, h))
