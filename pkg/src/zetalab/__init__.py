"""Desk-scale numerical laboratory for the Riemann zeta function, its zeros,
primes, moments, pair correlation and random-matrix models."""
from .errors import (ArgumentTrackingError, BranchCutError, BudgetExhausted, ConvergenceError,
                     DomainError, PoleError, ZeroOfZetaError, ZeroTableError, ZetaLabError)
from .specfun import DEFAULT_BUDGET, PrecisionBudget, exp_integral_e1, lngamma, riemann_siegel_theta
from .zeta import (completed_zeta, functional_equation_defect, hardy_z, zeta, zeta_derivative,
                   zeta_log_deriv)
from .zeros import (ZeroTable, littlewood_balance, load_zero_table, n_main_term, save_zero_table,
                    scan_zeros, zero_counts_report)
from .primes import build_tables, explicit_formula_psi, prime_gap_scan, summatory
from .moments import (DirichletPolynomial, MollifierSpec, arithmetic_factor_ak, conjectured_moment,
                      dirichlet_poly_mean, gk_exact, mollified_moment, moment_integral)
from .paircorr import (KernelSpec, fejer_simple_zero_bound, kernel_pair_sum,
                       montgomery_dirichlet_mean, montgomery_F, n_level_form_factor,
                       pair_histogram, sine_kernel_integral)
from .rmt import (SplitMix64, char_poly_Z, cue_moment_mc, eigen_hermitian, eigen_pair_correlation,
                  eigenangles_unitary, jacobi_eigvalsh, sample_cue, sample_gue)
from .hybrid import (HybridConfig, approx_form, hybrid_compare, prime_factor, splitting_experiment,
                     zero_factor)

__version__ = "0.1.0"
