"""Tauberian-side checks: G(x) -> 1, Karamata moments, and the psi integral for -zeta'/zeta."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import DEFAULT_MAX_TERMS, LambdaTable, smoothed_lambda_sum
from .errors import InvalidArgument
from .zeta_eval import DEFAULT_CONFIG, ZetaEvalConfig, log_deriv_zeta_em

MAX_KARAMATA_DEGREE = 20


@dataclass(frozen=True)
class ConvergenceRow:
    x: float
    value: float
    deviation_from_limit: float
    tail_bound: float = 0.0

    def row(self) -> dict:
        return {"x": self.x, "value": self.value, "deviation": self.deviation_from_limit, "tail_bound": self.tail_bound}


def tauber_convergence_table(x_list, rel_tol: float = 1e-12, max_terms: int = DEFAULT_MAX_TERMS) -> list[ConvergenceRow]:
    """Rows (x, G(x), G(x) - 1) for a decreasing list of x in [1e-5, 1]."""
    xs = [float(x) for x in x_list]
    if not xs:
        raise InvalidArgument("x_list is empty")
    if any(not 1e-5 <= x <= 1 for x in xs):
        raise InvalidArgument("x values must lie in [1e-5, 1]")
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise InvalidArgument("x_list must be strictly decreasing")
    rows = []
    for x in xs:
        g = smoothed_lambda_sum(x, rel_tol, max_terms)
        rows.append(ConvergenceRow(x=x, value=g.value, deviation_from_limit=g.value - 1.0, tail_bound=g.tail_bound))
    return rows


def deviations_shrink(rows) -> bool:
    devs = [abs(r.deviation_from_limit) for r in rows]
    return all(b < a for a, b in zip(devs, devs[1:]))


# ---------------------------------------------------------------------------
# Karamata moments


@dataclass(frozen=True)
class KaramataMoment:
    x: float
    value: float
    limit: float
    moments: tuple[float, ...]

    def row(self) -> dict:
        return {"x": self.x, "value": self.value, "limit": self.limit, "deviation": self.value - self.limit}


def _moment(k: int, x: float, rel_tol: float) -> float:
    """x sum Lambda(n) e^{-n(k+1)x} = G((k+1) x) / (k+1)."""
    return smoothed_lambda_sum((k + 1) * x, rel_tol).value / (k + 1)


def karamata_moment(poly_coeffs, x: float, rel_tol: float = 1e-12) -> KaramataMoment:
    """x sum Lambda(n) e^{-nx} g(e^{-nx}) for g(t) = sum c_k t^k, with limit int_0^1 g."""
    c = [float(v) for v in poly_coeffs]
    if not c:
        raise InvalidArgument("polynomial has no coefficients")
    if len(c) - 1 > MAX_KARAMATA_DEGREE:
        raise InvalidArgument(f"degree {len(c) - 1} exceeds {MAX_KARAMATA_DEGREE}")
    if not 1e-4 <= x <= 1:
        raise InvalidArgument(f"x must lie in [1e-4, 1], got {x}")
    moments = tuple(_moment(k, x, rel_tol) if ck != 0 else 0.0 for k, ck in enumerate(c))
    value = math.fsum(ck * m for ck, m in zip(c, moments))
    limit = math.fsum(ck / (k + 1) for k, ck in enumerate(c))
    return KaramataMoment(x=x, value=value, limit=limit, moments=moments)


# ---------------------------------------------------------------------------
# psi integral


@dataclass(frozen=True)
class ConverseResult:
    s: float
    X_max: float
    lhs: float
    rhs: float
    tail_bound: float
    lhs_error: float
    pieces: int

    @property
    def difference(self) -> float:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return abs(self.difference) <= self.tail_bound + self.lhs_error

    def row(self) -> dict:
        return {
            "s": self.s,
            "X_max": self.X_max,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "difference": self.difference,
            "tail_bound": self.tail_bound,
            "lhs_error": self.lhs_error,
        }


def _power_gap(u: np.ndarray, v: np.ndarray, s: float) -> np.ndarray:
    """u^{-s} - v^{-s} without cancellation for close u < v."""
    return -np.exp(-s * np.log(u)) * np.expm1(-s * np.log1p((v - u) / u))


def psi_weighted_integral(s: float, X: float, table: LambdaTable, subdivisions: int = 1) -> tuple[float, int]:
    """int_1^X psi(t) t^{-s-1} dt, exactly on each step of psi.

    psi is constant on [p_j, p_{j+1}) for consecutive prime powers, so each
    step contributes psi_j (p_j^{-s} - p_{j+1}^{-s}) / s.  ``subdivisions``
    splits every step into equal parts (the result must not move).
    """
    nodes = table.prime_powers()
    nodes = nodes[nodes <= X].astype(np.float64)
    if nodes.size == 0:
        return 0.0, 0
    levels = np.asarray(table.psi, dtype=np.float64)[nodes.astype(np.int64)]
    right = np.append(nodes[1:], float(X))
    if subdivisions > 1:
        frac = np.arange(subdivisions + 1) / subdivisions
        grid = nodes[:, None] + (right - nodes)[:, None] * frac[None, :]
        u, v = grid[:, :-1].ravel(), grid[:, 1:].ravel()
        levels = np.repeat(levels, subdivisions)
    else:
        u, v = nodes, right
    keep = v > u
    pieces = levels[keep] * _power_gap(u[keep], v[keep], s)
    return math.fsum(pieces.tolist()) / s, int(np.count_nonzero(keep))


def corridor_tail_bound(s: float, X: float) -> float:
    """s int_X^inf |psi(t) - t| t^{-s-1} dt assuming |psi(t) - t| <= 2 sqrt(t) log(t)^2.

    The corridor is an empirical bound (checked numerically up to the sieve
    limit), not a theorem.  With a = s - 1/2 the integral is
    X^{-a} (L^2/a + 2L/a^2 + 2/a^3), L = log X.
    """
    a = s - 0.5
    L = math.log(X)
    return 2 * s * X ** (-a) * (L * L / a + 2 * L / a**2 + 2 / a**3)


def converse_integral_check(
    s: float, X_max: float, table: LambdaTable, cfg: ZetaEvalConfig = DEFAULT_CONFIG, subdivisions: int = 1
) -> ConverseResult:
    """Compare -zeta'/zeta(s) - s/(s-1) with s int_1^X (psi(t) - t) t^{-s-1} dt.

    The left side comes from the Euler-Maclaurin derivative, the right side
    from the sieve table; only the tail beyond X_max is estimated.
    """
    if not 1.2 <= s <= 5:
        raise InvalidArgument(f"s must lie in [1.2, 5], got {s}")
    if not 2 <= X_max <= table.limit:
        raise InvalidArgument(f"X_max must lie in [2, {table.limit}], got {X_max}")
    q, err = log_deriv_zeta_em(complex(s), cfg)
    lhs = q.real - s / (s - 1)
    weighted, pieces = psi_weighted_integral(s, X_max, table, subdivisions)
    # int_1^X t^{-s} dt
    linear = -math.expm1((1 - s) * math.log(X_max)) / (s - 1)
    rhs = s * weighted - s * linear
    return ConverseResult(
        s=s,
        X_max=float(X_max),
        lhs=lhs,
        rhs=rhs,
        tail_bound=corridor_tail_bound(s, X_max),
        lhs_error=err,
        pieces=pieces,
    )
