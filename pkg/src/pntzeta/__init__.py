"""Numerical checks of the Prime Number Theorem and its link to zeta zeros.

Modules:

- ``arith``: von Mangoldt sieve, psi, the smoothed sum G(x), Ramanujan's phi.
- ``gamma``: complex log-gamma in log-magnitude form.
- ``zeta_eval``: Euler-Maclaurin zeta, theta, Hardy's Z, Dirichlet series.
- ``zeros``: zero tables, sign-change verification and counting.
- ``zerosum``: the sum over zeros, the analytic residual, the Mellin check.
- ``apf``: finite almost-periodic series, mean values, witnesses.
- ``tauber``: convergence tables, Karamata moments, the psi integral.
- ``cli``: batch command line.
"""

from .apf import FrequencySeries, counterfactual_coefficients, eval_F, mean_value_I, non_decay_witness
from .arith import LambdaTable, chebyshev_psi, oscillation_probe, ramanujan_phi, sieve_lambda, smoothed_lambda_sum
from .errors import PntZetaError
from .gamma import ComplexLogValue, log_gamma, loggamma
from .zeros import ZeroTable, embedded_zeros, load_zero_file, verify_zero
from .zerosum import mellin_line_integral, verify_analytic_residual, zero_sum
from .zeta_eval import hardy_z, log_deriv_zeta_series, riemann_siegel_theta, zeta_em

__all__ = [
    "ComplexLogValue",
    "FrequencySeries",
    "LambdaTable",
    "PntZetaError",
    "ZeroTable",
    "chebyshev_psi",
    "counterfactual_coefficients",
    "embedded_zeros",
    "eval_F",
    "hardy_z",
    "load_zero_file",
    "log_deriv_zeta_series",
    "log_gamma",
    "loggamma",
    "mean_value_I",
    "mellin_line_integral",
    "non_decay_witness",
    "oscillation_probe",
    "ramanujan_phi",
    "riemann_siegel_theta",
    "sieve_lambda",
    "smoothed_lambda_sum",
    "verify_analytic_residual",
    "verify_zero",
    "zero_sum",
    "zeta_em",
]
