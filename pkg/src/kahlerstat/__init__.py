"""Classical phase-space geometry of identical particles and its statistical mechanics.

Coherent-state Kähler potentials give symplectic forms, metrics and phase
space volumes for bosons, fermions, anyons and self-dual vortices; the
volumes feed a classical statistical mechanics that reproduces exclusion
statistics in the limit h -> 0 with gh fixed.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, FitError, IncompressibilityError,
                     KahlerStatError, PrecisionError, ResourceError, SaturationError)
from .geometry import (KahlerField, Region2D, SymplecticTensor, VolumeEstimate,
                       berry_connection, gaussian_field, metric_tensor, symplectic_tensor,
                       volume_area_integral, volume_boundary_integral, with_gauge)
from .particles import BOSON, FERMION, ParticleConfig, Statistics
from .planar import (PlanarNParticleState, anyon_basis_amplitude, anyon_two_body_kahler,
                     cm_kahler_check, coherent_overlap, fit_small_r_metric, norm_sq_inverse,
                     relative_field, small_r_metric_coefficient, two_body_eom_check,
                     two_body_kahler, two_body_symplectic)
from .sphere import (SphereNParticleState, coinciding_boson_kahler, coinciding_field,
                     fermion_reduction_exponent, nparticle_volume, sphere_norm_sq_inverse,
                     su2_overlap)
from .statmech import (ExclusionLevel, ThermoState, classical_limit_entropy,
                       classical_thermo, double_limit_sweep, exclusion_entropy,
                       exclusion_eos, exclusion_weight)
from .vortex import (RadialProfile, VortexParams, rescale_to_dimensionless,
                     rescale_to_physical, solve_radial_vortex, statistics_parameter,
                     vortex_volume)
from .oscillator import (OscillatorSystem, classical_limit_ratio, classical_partition,
                         ground_energy, mc_partition_oracle, quantum_partition)
