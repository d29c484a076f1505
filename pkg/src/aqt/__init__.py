"""Numerical laboratory for the adiabatic limit of driven quantum systems.

Instantaneous spectral frames, the slow-dynamics kernel and its Volterra
solution, adiabatic-approximation fidelity audits, Berry phases by discrete
holonomy, sufficient-condition classifiers on a T-grid, and a
Riemann-Lebesgue workbench, all on small dense Hermitian families.
"""

__version__ = "0.1.0"

from .adiabatic import (AdiabaticState, PhaseReport, adiabatic_state,
                        berry_phase, connection_diagonal, infidelity)
from .conditions import (DEFAULT_T_GRID, AppendixChainReport, ConditionCReport,
                         ConvergenceSeries, FormalismGapReport,
                         RiemannLebesgueReport, StepFunction,
                         UniformFamilyReport, appendix_chain,
                         check_condition_b, check_condition_c,
                         check_condition_d, condition_d_integral, fit_series,
                         formalism_gap, riemann_lebesgue_check,
                         step_approximate, uniform_family_check)
from .errors import (AqtError, DegenerateSpectrum, DimensionMismatch,
                     GridMismatch, HypothesisAViolated, InvalidParameter,
                     NoConvergence, NonUnitaryOracle, NormDrift, NotClosedLoop,
                     NotHermitian, NotNormalized, Overflow, PairEqual,
                     SolverDivergence, SpecError, StepSizeTooLarge)
from .evolution import (KernelSample, KernelTrajectory, Trajectory,
                        adiabatic_transform, adiabatic_transform_operator,
                        build_kernel, integrate_schrodinger, kernel_trajectory,
                        ordinary_exponential_diagnostic, propagator,
                        propagator_oracle, resolve_grid, solve_phi_ode,
                        solve_volterra, solve_w_ode)
from .hamiltonians import (BUILTIN_KINDS, SIGMA_X, SIGMA_Y, SIGMA_Z,
                           FamilySpec, HamiltonianFamily, build_dual_family,
                           constant, custom_polynomial, landau_zener,
                           list_builtin_kinds, parse_family, rotating_cone)
from .numerics import (EPS_GAP, MAX_DIM, cumulative_simpson, hermitian_eig,
                       loglog_slope, matrix_exp)
from .pipelines import RunResult, Scenario, run_scenario
from .spectral import (FrameTrajectory, SpectralFrame, coupling_matrix,
                       coupling_trajectory, frame_trajectory, spectral_frame)
