"""Self-similar axisymmetric MHD fields: spherical operators, Landau jets,
the angular profile system, shooting for its boundary-value problems and
grid-based verification."""
from .errors import *  # noqa: F401,F403
from .geometry import (CartesianVec, SphericalField, SphericalPoint, SphericalVec, basis_vectors,
                       covariant_derivative, to_cartesian, to_spherical)
from .landau import (ForceVector, LandauParam, a_from_beta, beta_from_a, force_flux, landau_cartesian,
                     landau_field, landau_profiles, rotate_to_b)
from .operators import (Channel, Profile, cartesian_fields, cartesian_oracle, convective, divergence_u,
                        laplacian_u, pressure_gradient)
from .profiles import (boundary_residuals, closed_form_chain, conserved_q, h_transport, navier_slip_equivalence,
                       ode_residuals, pressure_recover, reduction_quantities)
from .shooting import (AxisParams, ScanRange, ShootingConfig, ShootingState, axis_series_init, fit_landau_a,
                       integrate_profile, mismatch, newton_refine, shoot, trajectory)
from .verify import GridRegion, ResidualReport, boundary_check, mhd_residual_grid, scaling_invariance_check

__version__ = "0.1.0"
