"""Quasi-periodic waves of the completely resonant cubic wave equation.

The package calibrates the elliptic profile underlying the two-frequency
kernel solution, builds the Green operator of the linearized profile
equation and verifies its identity suite, certifies the non-degeneracy of
the kernel linearization, constructs the badly-approximable parameter pairs
that keep the small divisors away from zero, and runs the Lyapunov-Schmidt
solve (range contraction plus kernel Newton) for both the co-propagating
and counter-propagating wave forms.
"""

from .elliptic import (EllipticPair, EllipticProfile, beta_eval, complete_E,
                       complete_K, find_m_bar, jacobi_am_cn_sn_dn, psi)
from .errors import ConvergenceError, DomainError, UsageError
from .fourier_field import (FourierField2, PeriodicProfile1, SpaceWeights,
                            algebra_constant, algebra_constant_upper, decompose,
                            norm_sigma, product, project, recompose)
from .diophantine import (BadNumber, CounterParams, DivisorParams, cf_bad_number,
                          eigen_D_ae, eigen_D_be, in_Btilde, make_counter_params,
                          make_params, min_divisor_scan, omega_to_be)
from .bifurcation import (GreenBasis, Lemma3Report, build_green_basis, dZG_matrix,
                          green_L, kernel_triviality_report, verify_green_identities)
from .ls_solver import (LSConfig, LSSolution, Nonlinearity, rescale_f,
                        sample_solution, solve_bifurcation, solve_full,
                        solve_range)

__version__ = "0.1.0"
