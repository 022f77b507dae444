"""Phase-space coherence of neutron wavepackets under fluctuating shifts."""

from .coherence import (CoherenceReport, OverlapKernel, averaged_wigner,
                        averaged_wigner_field, coherence_report,
                        epsilon_analytic, momentum_marginal, norm_analytic,
                        overlap_kernel_eval, position_marginal)
from .errors import (CausticPoint, ConvergenceError, DegenerateDelta,
                     DomainError, OutOfSupport, PoleAtOne, ResolutionWarning,
                     SupportEscape)
from .quadrature import (PeriodicAverageSpec, PhaseSpaceGrid, default_grid,
                         grid_nodes, integrate_2d, periodic_average,
                         periodic_average_2d)
from .shiftmodels import (GOLDEN_MEAN, GaussianShift, GoldenMean, ShiftModel,
                          TrajectoryWindow, TwoTone, arcsine_density,
                          caustic_asymptote_check, critical_points, density,
                          entropy, fibonacci, fibonacci_ratio,
                          frequency_ratio, golden_mean_density_convolution,
                          integrate_against_density, is_degenerate, shift_at,
                          support_interval, theta_period)
from .specfun import EllipticArgs, ellipf, ellipf_from_complement, elliptic_f
from .wavepacket import (FieldSetup, GaussianPacket, StateCase,
                         field_to_shift, momentum_amplitude,
                         position_amplitude, postselected_amplitude,
                         pure_wigner, shear_free_evolution, state_norm)

__version__ = "0.1.0"

__all__ = [
    "CausticPoint", "CoherenceReport", "ConvergenceError", "DegenerateDelta",
    "DomainError", "EllipticArgs", "FieldSetup", "GOLDEN_MEAN",
    "GaussianPacket", "GaussianShift", "GoldenMean", "OutOfSupport",
    "OverlapKernel", "PeriodicAverageSpec", "PhaseSpaceGrid", "PoleAtOne",
    "ResolutionWarning", "ShiftModel", "StateCase", "SupportEscape",
    "TrajectoryWindow", "TwoTone", "arcsine_density", "averaged_wigner",
    "averaged_wigner_field", "caustic_asymptote_check", "coherence_report",
    "critical_points", "default_grid", "density", "ellipf",
    "ellipf_from_complement", "elliptic_f", "entropy", "epsilon_analytic",
    "fibonacci", "fibonacci_ratio", "field_to_shift", "frequency_ratio",
    "golden_mean_density_convolution", "grid_nodes", "integrate_2d",
    "integrate_against_density", "is_degenerate", "momentum_amplitude",
    "momentum_marginal", "norm_analytic", "overlap_kernel_eval",
    "periodic_average", "periodic_average_2d", "position_amplitude",
    "position_marginal", "postselected_amplitude", "pure_wigner",
    "shear_free_evolution", "shift_at", "state_norm", "support_interval",
    "theta_period",
]
