"""Von Mangoldt sieve, Chebyshev psi, Abel-smoothed Lambda sums and Ramanujan's phi.

All long sums are accumulated with :func:`math.fsum` per chunk, and chunk
partials are combined with another ``fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import InvalidArgument, OutOfRange, ResourceLimitError

LOG2 = math.log(2.0)

#: Default cap on the truncation index of smoothed sums.
DEFAULT_MAX_TERMS = 10**9

# Prime-power arrays up to this limit are materialized and cached; above it
# they are streamed segment by segment.
_CACHE_LIMIT = 1 << 25
_SEGMENT = 1 << 22

# exp() underflows to zero below this argument.
PHI2_CUTOFF = 700.0


@dataclass(frozen=True)
class LambdaTable:
    """Dense table of Lambda(0..N); index 0 is a placeholder equal to 0.

    ``psi`` holds the prefix sums, accumulated in extended precision.
    """

    limit: int
    values: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)
        self.psi.setflags(write=False)

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.limit:
            raise OutOfRange(f"index {n} outside 1..{self.limit}")
        return float(self.values[n])

    def prime_powers(self) -> np.ndarray:
        """Ascending array of the n <= limit with Lambda(n) > 0."""
        return np.flatnonzero(self.values)


@dataclass(frozen=True)
class SmoothedSumResult:
    x: float
    value: float
    truncation_index: int
    tail_bound: float


def _prime_mask(n: int) -> np.ndarray:
    """Boolean array ``is_prime[0..n]`` by the sieve of Eratosthenes."""
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return is_prime


def sieve_lambda(N: int) -> LambdaTable:
    """Tabulate Lambda(n) for 1 <= n <= N."""
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidArgument(f"sieve limit must be a positive integer, got {N!r}")
    N = int(N)
    values = np.zeros(N + 1)
    is_prime = _prime_mask(N)
    primes = np.flatnonzero(is_prime)
    values[primes] = np.log(primes)
    for p in primes[: np.searchsorted(primes, math.isqrt(N), side="right")]:
        logp = math.log(p)
        q = int(p) * int(p)
        while q <= N:
            values[q] = logp
            q *= int(p)
    psi = np.cumsum(values.astype(np.longdouble)).astype(np.float64)
    return LambdaTable(limit=N, values=values, psi=psi)


def trial_division_lambda(n: int) -> float:
    """Lambda(n) by factoring n directly; independent of the sieve."""
    if n < 2:
        return 0.0
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
        p += 1
    return math.log(n)


def chebyshev_psi(x: float, table: LambdaTable) -> float:
    """psi(x) = sum of Lambda(n) over n <= x."""
    if not x > 0:
        raise InvalidArgument(f"psi needs x > 0, got {x!r}")
    n = math.floor(x)
    if n > table.limit:
        raise OutOfRange(f"psi({x}) needs a table up to {n}, have {table.limit}")
    return float(table.psi[n])


# ---------------------------------------------------------------------------
# prime-power streams


def _all_prime_powers(limit: int, small_primes: np.ndarray):
    """Prime powers p^k (k >= 2) <= limit for the given primes p."""
    ns, logs = [], []
    for p in small_primes.tolist():
        q = p * p
        lp = math.log(p)
        while q <= limit:
            ns.append(q)
            logs.append(lp)
            q *= p
    return np.array(ns, dtype=np.int64), np.array(logs)


def prime_power_chunks(limit: int, segment: int = _SEGMENT) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(n, log p)`` arrays covering every prime power n <= limit.

    Chunks follow increasing segments of [1, limit]; the order is fixed, so
    reductions over the stream are deterministic.
    """
    if limit < 2:
        return
    root = math.isqrt(limit)
    base = np.flatnonzero(_prime_mask(max(root, 2)))
    pp_n, pp_log = _all_prime_powers(limit, base)
    lo = 0
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        mask = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            mask[: min(2, hi)] = False
        for p in base.tolist():
            start = max(p * p, -(-lo // p) * p)
            if start >= hi:
                if p * p >= hi:
                    break
                continue
            mask[start - lo :: p] = False
        primes = np.flatnonzero(mask).astype(np.int64) + lo
        sel = (pp_n >= lo) & (pp_n < hi)
        n = np.concatenate([primes, pp_n[sel]])
        logs = np.concatenate([np.log(primes.astype(np.float64)), pp_log[sel]])
        yield n, logs
        lo = hi


@lru_cache(maxsize=4)
def _cached_prime_powers(limit: int) -> tuple[np.ndarray, np.ndarray]:
    parts = list(prime_power_chunks(limit))
    n = np.concatenate([p[0] for p in parts])
    logs = np.concatenate([p[1] for p in parts])
    order = np.argsort(n, kind="stable")
    n, logs = n[order], logs[order]
    n.setflags(write=False)
    logs.setflags(write=False)
    return n, logs


def iter_prime_powers(limit: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Prime powers <= limit as chunks, served from cache when small."""
    if limit <= _CACHE_LIMIT:
        # round up so that nearby limits share one cache entry
        cap = min(1 << max(16, (limit - 1).bit_length()), _CACHE_LIMIT)
        n, logs = _cached_prime_powers(cap)
        k = int(np.searchsorted(n, limit, side="right"))
        yield n[:k], logs[:k]
    else:
        yield from prime_power_chunks(limit)


# ---------------------------------------------------------------------------
# Abel-smoothed sums


def _log_selection_majorant(M: int, x: float) -> float:
    """log of (log M) e^{-Mx} (M + 1/x), the truncation selection criterion."""
    return math.log(math.log(M)) - M * x + math.log(M + 1.0 / x)


def smoothed_tail_bound(M: int, x: float) -> float:
    """Upper bound for x * sum_{n>M} (log n) e^{-nx}.

    Integral comparison, valid once (log t) e^{-xt} decreases on [M, inf),
    which holds for M >= 3 and M x >= 1:
        x int_M^inf log t e^{-xt} dt <= e^{-xM} (log M + 1/(xM)).
    """
    if M < 3 or M * x < 1:
        raise InvalidArgument("tail bound needs M >= 3 and M*x >= 1")
    return math.exp(-x * M) * (math.log(M) + 1.0 / (x * M))


def _truncation_index(x: float, target: float) -> int:
    """Smallest M >= max(3, 2/x) with selection majorant below ``target``."""
    log_target = math.log(target)
    lo = max(3, math.ceil(2.0 / x))
    if _log_selection_majorant(lo, x) < log_target:
        return lo
    hi = lo
    while _log_selection_majorant(hi, x) >= log_target:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _log_selection_majorant(mid, x) < log_target:
            hi = mid
        else:
            lo = mid
    return hi


def _lambda_exp_sum(x: float, M: int) -> float:
    """sum_{n<=M} Lambda(n) e^{-nx}, compensated."""
    partials = []
    for n, logs in iter_prime_powers(M):
        if n.size:
            partials.append(math.fsum(logs * np.exp(-x * n.astype(np.float64))))
    return math.fsum(partials)


def lambda_exp_sum_truncated(x: float, M: int) -> float:
    """x * sum_{n<=M} Lambda(n) e^{-nx} at a caller-chosen truncation."""
    return x * _lambda_exp_sum(x, M)


def smoothed_lambda_sum(x: float, rel_tol: float = 1e-12, max_terms: int = DEFAULT_MAX_TERMS) -> SmoothedSumResult:
    """G(x) = x * sum_{n>=1} Lambda(n) e^{-nx} with a certified truncation."""
    if not x > 0 or not math.isfinite(x):
        raise InvalidArgument(f"x must be positive, got {x!r}")
    if not 0 < rel_tol < 1:
        raise InvalidArgument(f"rel_tol must lie in (0, 1), got {rel_tol!r}")
    # G(x) >= x log2 e^{-2x}; below x = 1 the sum is near 1 so start there
    estimate = 0.5 if x < 1 else x * LOG2 * math.exp(-2 * x)
    while True:
        M = _truncation_index(x, rel_tol * estimate)
        if M > max_terms:
            raise ResourceLimitError(
                f"x={x:g} needs truncation index M={M}, above the cap {max_terms}", needed=M
            )
        value = x * _lambda_exp_sum(x, M)
        if _log_selection_majorant(M, x) < math.log(rel_tol * value):
            return SmoothedSumResult(x=x, value=value, truncation_index=M, tail_bound=smoothed_tail_bound(M, x))
        estimate = value


# ---------------------------------------------------------------------------
# Ramanujan's phi


def phi2(x: float) -> float:
    """log 2 * sum_{n>=1} 2^n e^{-2^n x}, terms built in log domain."""
    if not x > 0:
        raise InvalidArgument(f"x must be positive, got {x!r}")
    terms = []
    n = 1
    while True:
        u = math.ldexp(x, n)
        if u > PHI2_CUTOFF and n > 1:
            break
        terms.append(math.exp(n * LOG2 - u))
        n += 1
    return LOG2 * math.fsum(terms)


def ramanujan_phi(x: float, which: str = "phi", rel_tol: float = 1e-12) -> float:
    """Ramanujan's phi1, phi2 or phi = phi1 - phi2."""
    if which not in ("phi1", "phi2", "phi"):
        raise InvalidArgument(f"unknown selector {which!r}")
    if not x > 0:
        raise InvalidArgument(f"x must be positive, got {x!r}")
    if which == "phi2":
        return phi2(x)
    p1 = smoothed_lambda_sum(x, rel_tol).value / x
    if which == "phi1":
        return p1
    return p1 - phi2(x)


@dataclass
class OscillationReport:
    points: list[float]
    values: list[float]
    shifted_values: list[float]
    gaps: list[float]
    max_gap: float
    threshold: float
    non_convergent: bool

    def rows(self):
        for x, v, w, g in zip(self.points, self.values, self.shifted_values, self.gaps):
            yield {"x": x, "xf": v, "xf_shifted": w, "gap": g}


def oscillation_probe(
    f: Callable[[float], float],
    scale_points: Sequence[float],
    threshold: float = 1e-3,
    shift: float = 1.5,
) -> OscillationReport:
    """Compare x f(x) against its value at ``shift * x`` along scales tending to 0.

    The probe is flagged non-convergent when the gap stays above
    ``threshold`` at each of the three smallest scales.
    """
    pts = [float(p) for p in scale_points]
    if len(pts) < 4:
        raise InvalidArgument("oscillation probe needs at least 4 scale points")
    if any(p <= 0 for p in pts) or any(b >= a for a, b in zip(pts, pts[1:])):
        raise InvalidArgument("scale points must be positive and strictly decreasing")
    values = [x * f(x) for x in pts]
    shifted = [shift * x * f(shift * x) for x in pts]
    gaps = [abs(a - b) for a, b in zip(values, shifted)]
    return OscillationReport(
        points=pts,
        values=values,
        shifted_values=shifted,
        gaps=gaps,
        max_gap=max(gaps),
        threshold=threshold,
        non_convergent=all(g > threshold for g in gaps[-3:]),
    )
