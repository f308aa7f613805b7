"""Zeta-function evaluations used as oracles.

Euler-Maclaurin zeta(s) with a certified remainder, the Riemann-Siegel
theta function, Hardy's Z(t), and the Dirichlet series for -zeta'/zeta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import factorial

import numpy as np

from .arith import DEFAULT_MAX_TERMS, iter_prime_powers
from .errors import AccuracyError, ConsistencyError, InvalidArgument, PoleError, ResourceLimitError
from .gamma import bernoulli_numbers, log_gamma, loggamma

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class ZetaEvalConfig:
    """Euler-Maclaurin parameters.

    ``em_bernoulli_order`` is the index 2m of the last Bernoulli number
    kept; the remainder bound uses B_{2m+2}.  The defaults certify 1e-12
    up to |Im s| of roughly 260 on the critical line.
    """

    em_terms: int = 100
    em_bernoulli_order: int = 30
    target_abs_err: float = 1e-12

    def __post_init__(self):
        if self.em_terms < 10:
            raise InvalidArgument("em_terms must be at least 10")
        if self.em_bernoulli_order % 2 or not 2 <= self.em_bernoulli_order <= 30:
            raise InvalidArgument("em_bernoulli_order must be even and at most 30")
        if not self.target_abs_err > 0:
            raise InvalidArgument("target_abs_err must be positive")


DEFAULT_CONFIG = ZetaEvalConfig()

_BERN = bernoulli_numbers(32)
# B_{2k} / (2k)! as floats, k = 0..16
_EM_COEFFS = [float(_BERN[2 * k] / factorial(2 * k)) for k in range(17)]


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _em_parts(s: complex, cfg: ZetaEvalConfig):
    """Euler-Maclaurin value, its s-derivative, and the remainder bound."""
    N = cfg.em_terms
    m = cfg.em_bernoulli_order // 2
    n = np.arange(1, N, dtype=np.float64)
    logn = np.log(n)
    pw = np.exp(-s * logn)
    head = _fsum_complex(pw)
    dhead = -_fsum_complex(logn * pw)
    logN = math.log(N)
    Ns = cmath.exp(-s * logN)
    value = head + N * Ns / (s - 1) + Ns / 2
    deriv = dhead - logN * N * Ns / (s - 1) - N * Ns / (s - 1) ** 2 - logN * Ns / 2
    # Bernoulli corrections: c_k P_k(s) N^{-s-2k+1}, P_k = s (s+1) ... (s+2k-2)
    P = s
    dP = 1.0 + 0j
    Npow = Ns / N  # N^{-s-1}
    for k in range(1, m + 1):
        term_scale = _EM_COEFFS[k] * Npow  # N^{-s-2k+1}
        value += term_scale * P
        deriv += term_scale * (dP - logN * P)
        # extend P by (s+2k-1)(s+2k)
        a, b = s + 2 * k - 1, s + 2 * k
        dP = dP * a * b + P * (a + b)
        P = P * a * b
        Npow /= N * N
    return value, deriv, P


def _em_remainder_bound(s: complex, cfg: ZetaEvalConfig) -> float:
    N = cfg.em_terms
    m = cfg.em_bernoulli_order // 2
    sigma = s.real
    denom = sigma + 2 * m + 1
    if denom <= 0:
        return math.inf
    log_abs_P = sum(math.log(abs(s + j)) if s + j != 0 else -math.inf for j in range(2 * m + 1))
    if log_abs_P == -math.inf:
        return 0.0
    log_term = (
        math.log(abs(_EM_COEFFS[m + 1]))
        + log_abs_P
        - (sigma + 2 * m + 1) * math.log(N)
        + math.log(abs(s + 2 * m + 1) / denom)
    )
    return 2.0 * math.exp(log_term)


def zeta_em_with_bound(s: complex, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> tuple[complex, float]:
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1", pole=1)
    if s.real <= -1:
        raise InvalidArgument("zeta_em requires Re s > -1")
    bound = _em_remainder_bound(s, cfg)
    if bound > cfg.target_abs_err:
        raise AccuracyError(
            f"Euler-Maclaurin remainder {bound:.3g} at s={s} exceeds target {cfg.target_abs_err:.3g}",
            achievable=bound,
        )
    value, _, _ = _em_parts(s, cfg)
    return value, bound


def zeta_em(s: complex, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s) by Euler-Maclaurin summation, remainder below cfg.target_abs_err."""
    return zeta_em_with_bound(s, cfg)[0]


def zeta_em_derivative(s: complex, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> tuple[complex, float]:
    """zeta'(s) from the term-wise derivative of the Euler-Maclaurin formula.

    The remainder is analytic in s, so its derivative is bounded by the
    Cauchy estimate max_{|w-s|=r} |R(w)| / r, taken over 32 circle points
    and doubled.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1", pole=1)
    r = min(0.25, 0.5 * abs(s - 1))
    circle = max(_em_remainder_bound(s + r * cmath.exp(2j * math.pi * k / 32), cfg) for k in range(32))
    bound = 2.0 * circle / r
    if bound > cfg.target_abs_err * 1e3:
        raise AccuracyError(f"derivative remainder {bound:.3g} too large at s={s}", achievable=bound)
    _, deriv, _ = _em_parts(s, cfg)
    return deriv, bound


def log_deriv_zeta_em(s: complex, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> tuple[complex, float]:
    """-zeta'/zeta(s) from Euler-Maclaurin, with a first-order error bound."""
    z, ez = zeta_em_with_bound(s, cfg)
    d, ed = zeta_em_derivative(s, cfg)
    if abs(z) <= 2 * ez:
        raise AccuracyError(f"|zeta(s)| too small to divide at s={s}")
    q = -d / z
    err = (ed + abs(q) * ez) / (abs(z) - ez)
    return q, err


def numerical_log_deriv_zeta(s: complex, cfg: ZetaEvalConfig = DEFAULT_CONFIG, h: float = 1e-5) -> complex:
    """-zeta'/zeta(s) with zeta' by central differences (cross-checks only)."""
    s = complex(s)
    d = (zeta_em(s + h, cfg) - zeta_em(s - h, cfg)) / (2 * h)
    return -d / zeta_em(s, cfg)


# ---------------------------------------------------------------------------
# theta and Z


def riemann_siegel_theta(t: float) -> float:
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi on the continuous branch."""
    if not t > 0:
        raise InvalidArgument(f"theta needs t > 0, got {t!r}")
    return loggamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * LOG_PI


def riemann_siegel_theta_tracked(t: float, max_step: float = 0.5) -> float:
    """theta(t) by unwrapping principal arguments along steps <= max_step from t = 0."""
    if not t > 0:
        raise InvalidArgument(f"theta needs t > 0, got {t!r}")
    steps = max(1, math.ceil(t / max_step))
    prev = log_gamma(0.25).arg
    total = prev
    for k in range(1, steps + 1):
        cur = log_gamma(complex(0.25, 0.5 * t * k / steps)).arg
        total += math.remainder(cur - prev, 2 * math.pi)
        prev = cur
    return total - 0.5 * t * LOG_PI


def hardy_z_complex(t: float, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> complex:
    """e^{i theta(t)} zeta(1/2 + it) before the realness check."""
    return cmath.exp(1j * riemann_siegel_theta(t)) * zeta_em(complex(0.5, t), cfg)


def hardy_z(t: float, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> float:
    """Hardy's Z(t), real for real t."""
    if not t >= 2:
        raise InvalidArgument(f"hardy_z needs t >= 2, got {t!r}")
    w = hardy_z_complex(t, cfg)
    if abs(w.imag) >= 10 * cfg.target_abs_err:
        raise ConsistencyError(f"Z({t}) has imaginary residue {w.imag:.3g}")
    return w.real


# ---------------------------------------------------------------------------
# Dirichlet series for -zeta'/zeta


def dirichlet_log_tail_bound(M: int, sigma: float) -> float:
    """Upper bound for sum_{n>M} (log n) n^{-sigma}, sigma > 1, M >= 3.

    (log t) t^{-sigma} decreases for t > e^{1/sigma}, so the sum is at most
    int_M^inf log t t^{-sigma} dt = M^{1-sigma} (log M/(sigma-1) + 1/(sigma-1)^2).
    """
    a = sigma - 1
    return M ** (-a) * (math.log(M) / a + 1 / a**2)


def dirichlet_truncation(sigma: float, abs_tol: float) -> int:
    """Smallest M >= 3 with dirichlet_log_tail_bound(M, sigma) <= abs_tol."""
    lo = 3
    if dirichlet_log_tail_bound(lo, sigma) <= abs_tol:
        return lo
    hi = lo
    while dirichlet_log_tail_bound(hi, sigma) > abs_tol:
        lo, hi = hi, 2 * hi
        if hi > 1 << 62:
            return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if dirichlet_log_tail_bound(mid, sigma) <= abs_tol:
            hi = mid
        else:
            lo = mid
    return hi


def dirichlet_polynomial(s: complex, M: int) -> complex:
    """sum_{n<=M} Lambda(n) n^{-s}, compensated."""
    s = complex(s)
    re, im = [], []
    for n, logs in iter_prime_powers(M):
        logn = np.log(n.astype(np.float64))
        if s.imag == 0:
            re.append(math.fsum(logs * np.exp(-s.real * logn)))
        else:
            w = logs * np.exp(-s * logn)
            re.append(math.fsum(w.real))
            im.append(math.fsum(w.imag))
    value = complex(math.fsum(re), math.fsum(im))
    return value


def log_deriv_zeta_series_with_bound(
    s: complex, abs_tol: float = 1e-8, max_terms: int = DEFAULT_MAX_TERMS
) -> tuple[complex, float, int]:
    """-zeta'/zeta(s) = sum Lambda(n) n^{-s} with certified tail; returns (value, tail, M)."""
    s = complex(s)
    if not s.real >= 1.05:
        raise InvalidArgument(f"Dirichlet series needs Re s >= 1.05, got {s}")
    if not abs_tol > 0:
        raise InvalidArgument("abs_tol must be positive")
    M = dirichlet_truncation(s.real, abs_tol)
    if M > max_terms:
        raise ResourceLimitError(
            f"Re s = {s.real:g} with tolerance {abs_tol:g} needs M = {M} terms (cap {max_terms})", needed=M
        )
    value = dirichlet_polynomial(s, M)
    if s.imag == 0:
        value = complex(value.real, 0.0)
    return value, dirichlet_log_tail_bound(M, s.real), M


def log_deriv_zeta_series(s: complex, abs_tol: float = 1e-8, max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """-zeta'/zeta(s) via its Dirichlet series, accurate to abs_tol."""
    return log_deriv_zeta_series_with_bound(s, abs_tol, max_terms)[0]
