"""Finite almost-periodic series F(x) = sum a_n exp(i gamma_n x).

Mean values recover coefficients, a scan finds points where |F| stays
large, and a grid search finds epsilon-translation numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidArgument, SearchFailure
from .gamma import log_gamma

# samples per vectorised block in scans
_BLOCK = 1 << 15


@dataclass(frozen=True)
class FrequencySeries:
    """Entries (n, gamma_n, a_n) over a symmetric index set.

    For every index j > 0 the index -j is present with gamma_{-j} = -gamma_j.
    Equal ordinates must carry equal coefficients.
    """

    indices: np.ndarray
    gammas: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        gam = np.asarray(self.gammas, dtype=np.float64)
        a = np.asarray(self.coeffs, dtype=np.complex128)
        if not (idx.shape == gam.shape == a.shape) or idx.ndim != 1:
            raise InvalidArgument("indices, gammas and coeffs must be 1-d arrays of equal length")
        if np.any(idx == 0):
            raise InvalidArgument("index 0 is not allowed")
        if np.unique(idx).size != idx.size:
            raise InvalidArgument("indices must be distinct")
        if not np.all(np.isfinite(gam)) or not np.all(np.isfinite(a)):
            raise InvalidArgument("ordinates and coefficients must be finite")
        if np.any(gam[idx > 0] <= 0):
            raise InvalidArgument("positive indices need positive ordinates")
        pos = dict(zip(idx.tolist(), gam.tolist()))
        for n, g in pos.items():
            if -n not in pos or pos[-n] != -g:
                raise InvalidArgument(f"index {n} lacks its mirror -{n} with ordinate {-g}")
        by_gamma = {}
        for g, c in zip(gam.tolist(), a.tolist()):
            if by_gamma.setdefault(g, c) != c:
                raise InvalidArgument(f"equal ordinates {g} carry different coefficients")
        for arr in (idx, gam, a):
            arr.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "gammas", gam)
        object.__setattr__(self, "coeffs", a)

    @classmethod
    def from_entries(cls, entries) -> "FrequencySeries":
        entries = list(entries)
        if not entries:
            return cls(np.zeros(0, np.int64), np.zeros(0), np.zeros(0, complex))
        n, g, a = zip(*entries)
        return cls(np.array(n), np.array(g, dtype=float), np.array(a, dtype=complex))

    @classmethod
    def symmetric(cls, gammas, coeffs, mirror_coeffs=None) -> "FrequencySeries":
        """Indices 1..k at ``gammas`` and -1..-k at their negatives.

        Mirror coefficients default to the conjugates, which makes F real.
        """
        g = np.asarray(gammas, dtype=float)
        a = np.asarray(coeffs, dtype=complex)
        b = np.conj(a) if mirror_coeffs is None else np.asarray(mirror_coeffs, dtype=complex)
        k = np.arange(1, g.size + 1)
        return cls(np.concatenate([k, -k]), np.concatenate([g, -g]), np.concatenate([a, b]))

    @classmethod
    def from_records(cls, records) -> "FrequencySeries":
        return cls.from_entries((int(r["n"]), float(r["gamma"]), complex(r["re_a"], r["im_a"])) for r in records)

    def to_records(self) -> list[dict]:
        return [
            {"n": int(n), "gamma": float(g), "re_a": float(a.real), "im_a": float(a.imag)}
            for n, g, a in zip(self.indices, self.gammas, self.coeffs)
        ]

    def __len__(self) -> int:
        return int(self.indices.size)

    def __add__(self, other: "FrequencySeries") -> "FrequencySeries":
        """Sum of two series; indices of ``other`` are shifted past those of ``self``."""
        shift = int(np.max(np.abs(self.indices), initial=0))
        oidx = other.indices + np.sign(other.indices) * shift
        return FrequencySeries(
            np.concatenate([self.indices, oidx]),
            np.concatenate([self.gammas, other.gammas]),
            np.concatenate([self.coeffs, other.coeffs]),
        )

    @cached_property
    def abs_sum(self) -> float:
        return math.fsum(np.abs(self.coeffs).tolist())

    @cached_property
    def max_abs_gamma(self) -> float:
        return float(np.max(np.abs(self.gammas), initial=0.0))

    def position(self, n0: int) -> int:
        hits = np.flatnonzero(self.indices == n0)
        if hits.size == 0:
            raise InvalidArgument(f"index {n0} is not in the series")
        return int(hits[0])

    def group(self, n0: int) -> np.ndarray:
        """Boolean mask of S_0, the indices sharing the ordinate of n0."""
        return self.gammas == self.gammas[self.position(n0)]

    def separation(self, n0: int) -> float:
        """Minimal distance from gamma_{n0} to the other distinct ordinates."""
        mask = self.group(n0)
        if mask.all():
            return math.inf
        g0 = self.gammas[self.position(n0)]
        return float(np.min(np.abs(self.gammas[~mask] - g0)))

    def is_conjugate_symmetric(self) -> bool:
        lookup = dict(zip(self.indices.tolist(), self.coeffs.tolist()))
        return all(lookup[-n] == complex(a).conjugate() for n, a in lookup.items())


def eval_F(x, series: FrequencySeries):
    """F(x) = sum a_n e^{i gamma_n x}; scalar or array x."""
    xs = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xs).ravel()
    out = np.empty(flat.size, dtype=complex)
    for lo in range(0, flat.size, _BLOCK):
        chunk = flat[lo : lo + _BLOCK]
        out[lo : lo + _BLOCK] = np.exp(1j * np.outer(chunk, series.gammas)) @ series.coeffs
    if xs.ndim == 0:
        return complex(out[0])
    return out.reshape(xs.shape)


# ---------------------------------------------------------------------------
# mean values


@dataclass(frozen=True)
class MeanValueResult:
    n0: int
    X: float
    i_of_x: complex
    s0_size: int
    recovered_a: complex
    error_bound: float
    separation: float


def _mean_kernel(delta: np.ndarray, X: float) -> np.ndarray:
    """(e^{i delta X} - 1) / (i delta X), written as e^{i u/2} sin(u/2)/(u/2)."""
    u = delta * X
    return np.exp(0.5j * u) * np.sinc(u / (2 * np.pi))


def mean_value_I(series: FrequencySeries, n0: int, X: float) -> MeanValueResult:
    """I(X) = (1/X) int_0^X F(x) e^{-i gamma_{n0} x} dx in closed form.

    The S_0 block contributes |S_0| a_{n0} exactly; every other entry
    contributes a_n (e^{i(gamma_n - gamma_{n0})X} - 1) / (i (gamma_n - gamma_{n0}) X).
    """
    if not X > 0:
        raise InvalidArgument(f"X must be positive, got {X!r}")
    k = series.position(n0)
    mask = series.group(n0)
    s0 = int(np.count_nonzero(mask))
    a0 = complex(series.coeffs[k])
    delta = series.gammas[~mask] - series.gammas[k]
    rest = series.coeffs[~mask] * _mean_kernel(delta, X)
    value = s0 * a0 + complex(math.fsum(rest.real.tolist()), math.fsum(rest.imag.tolist()))
    d = series.separation(n0)
    bound = 0.0 if math.isinf(d) else 2.0 * series.abs_sum / (d * X)
    return MeanValueResult(
        n0=n0, X=X, i_of_x=value, s0_size=s0, recovered_a=value / s0, error_bound=bound, separation=d
    )


def remainder_R(series: FrequencySeries, n0: int, X: float) -> complex:
    """R(X) = sum_{n not in S_0} a_n (e^{i(gamma_n - gamma_{n0})X} - 1) / (gamma_n - gamma_{n0})."""
    k = series.position(n0)
    mask = series.group(n0)
    delta = series.gammas[~mask] - series.gammas[k]
    terms = series.coeffs[~mask] * np.expm1(1j * delta * X) / delta
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def max_quadrature_step(series: FrequencySeries) -> float:
    g = series.max_abs_gamma
    return 1.0 if g == 0 else min(1.0, math.pi / (4 * g))


def quadrature_mean_value(series: FrequencySeries, n0: int, X: float, step: float) -> complex:
    """Composite Simpson estimate of I(X)."""
    if not X > 0:
        raise InvalidArgument(f"X must be positive, got {X!r}")
    if not 0 < step <= max_quadrature_step(series):
        raise InvalidArgument(f"step {step} exceeds min(1, pi/(4 max|gamma|)) = {max_quadrature_step(series)}")
    g0 = series.gammas[series.position(n0)]
    n = max(2, math.ceil(X / step))
    n += n % 2
    h = X / n
    re, im = [], []
    for lo in range(0, n + 1, _BLOCK):
        j = np.arange(lo, min(lo + _BLOCK, n + 1))
        x = j * h
        w = np.where(j % 2 == 1, 4.0, 2.0)
        w[(j == 0) | (j == n)] = 1.0
        f = eval_F(x, series) * np.exp(-1j * g0 * x)
        re.append(math.fsum((w * f.real).tolist()))
        im.append(math.fsum((w * f.imag).tolist()))
    return complex(math.fsum(re), math.fsum(im)) * h / 3 / X


def simpson_envelope(series: FrequencySeries, X: float, step: float) -> float:
    """Allowed |Simpson - closed form| gap: 10 step^4 X sum|a_n| max|gamma|^4."""
    return 10 * step**4 * X * series.abs_sum * series.max_abs_gamma**4


# ---------------------------------------------------------------------------
# counterfactual series


def counterfactual_coefficients(ordinates) -> FrequencySeries:
    """Series with a_j = Gamma(1 + i gamma_j) and a_{-j} = conj(a_j)."""
    g = np.asarray(ordinates, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidArgument("need a non-empty list of ordinates")
    if np.any(g <= 0):
        raise InvalidArgument("ordinates must be positive")
    if np.unique(g).size != g.size:
        raise InvalidArgument("duplicate ordinates; multiplicity belongs in S_0, not in repeated entries")
    a = np.array([log_gamma(complex(1.0, v)).to_complex() for v in g.tolist()])
    return FrequencySeries.symmetric(g, a)


# ---------------------------------------------------------------------------
# non-decay witness


@dataclass(frozen=True)
class Witness:
    x: float
    value: complex
    threshold: float
    windows: int
    samples: int


def non_decay_witness(
    series: FrequencySeries, n0: int, x_floor: float, cap_factor: float = 2.0**40
) -> Witness:
    """First grid point x > x_floor with |F(x)| >= |S_0| |a_{n0}| / 2.

    Windows (X, 2X] are scanned at step pi/(4 max|gamma|), X doubling from
    x_floor.  The mean of F e^{-i gamma_{n0} x} tends to |S_0| a_{n0}, so
    |F| cannot stay below the threshold on long windows.
    """
    if len(series) == 0 or not np.any(series.coeffs != 0):
        raise InvalidArgument("series is identically zero")
    k = series.position(n0)
    a0 = complex(series.coeffs[k])
    if a0 == 0:
        raise InvalidArgument(f"coefficient a_{n0} is zero")
    if not x_floor >= 1:
        raise InvalidArgument("x_floor must be at least 1")
    s0 = int(np.count_nonzero(series.group(n0)))
    threshold = s0 * abs(a0) / 2
    step = math.pi / (4 * series.max_abs_gamma)
    X = float(x_floor)
    windows = samples = 0
    while X <= cap_factor * x_floor:
        windows += 1
        count = math.floor(X / step)
        for lo in range(1, count + 1, _BLOCK):
            j = np.arange(lo, min(lo + _BLOCK, count + 1))
            xs = X + j * step
            vals = np.abs(eval_F(xs, series))
            samples += j.size
            for pos in np.flatnonzero(vals >= threshold).tolist():
                x = float(xs[pos])
                v = eval_F(x, series)
                if abs(v) >= threshold:
                    return Witness(x=x, value=v, threshold=threshold, windows=windows, samples=samples)
        X *= 2
    raise SearchFailure(f"no x in ({x_floor}, {cap_factor * x_floor}] with |F(x)| >= {threshold:.3g}")


# ---------------------------------------------------------------------------
# translation numbers


@dataclass
class AlmostPeriodResult:
    taus: list[float]
    sups: list[float]
    epsilon: float
    test_window: tuple[float, float]
    test_step: float
    candidates: int = 0
    bohr_bounds: list[float] = field(default_factory=list)

    def rows(self):
        for t, s, b in zip(self.taus, self.sups, self.bohr_bounds):
            yield {"tau": t, "certified_sup": s, "bohr_bound": b}


def translation_sup_bound(series: FrequencySeries, tau: float) -> float:
    """sum |a_n| |e^{i gamma_n tau} - 1|, an upper bound of |F(x+tau) - F(x)| over all x."""
    return math.fsum((np.abs(series.coeffs) * np.abs(np.expm1(1j * series.gammas * tau))).tolist())


def epsilon_almost_period(
    series: FrequencySeries,
    epsilon: float,
    tau_range: tuple[float, float],
    grid_step: float,
    test_window: tuple[float, float] | None = None,
    test_step: float | None = None,
) -> AlmostPeriodResult:
    """Grid points tau with sup_x |F(x+tau) - F(x)| < epsilon on the test window.

    The sup is the maximum over test points plus the Lipschitz slack
    L(tau) h / 2, where L(tau) = sum |a_n gamma_n| |e^{i gamma_n tau} - 1|
    bounds the x-derivative of the difference and h is the test step.
    """
    if not epsilon > 0:
        raise InvalidArgument("epsilon must be positive")
    limit = max_quadrature_step(series)
    if not 0 < grid_step <= limit:
        raise InvalidArgument(f"grid_step {grid_step} exceeds pi/(4 max|gamma|) = {limit}")
    lo, hi = tau_range
    if hi < lo:
        raise InvalidArgument("empty tau range")
    if test_step is None:
        test_step = limit
    if test_window is None:
        g = np.abs(series.gammas)
        slowest = float(np.min(g[g > 0], initial=1.0))
        test_window = (0.0, 8 * math.pi / slowest)
    w0, w1 = test_window
    nx = max(1, math.ceil((w1 - w0) / test_step))
    xs = np.linspace(w0, w1, nx + 1)
    h = (w1 - w0) / nx
    basis = np.exp(1j * np.outer(xs, series.gammas)) * series.coeffs
    absa = np.abs(series.coeffs)
    absag = absa * np.abs(series.gammas)
    k_lo, k_hi = math.ceil(lo / grid_step), math.floor(hi / grid_step)
    taus, sups, bohr = [], [], []
    for start in range(k_lo, k_hi + 1, 4096):
        ks = np.arange(start, min(start + 4096, k_hi + 1))
        tt = ks * grid_step
        shift = np.expm1(1j * np.outer(series.gammas, tt))
        diff = np.abs(basis @ shift).max(axis=0)
        slack = 0.5 * h * (absag @ np.abs(shift))
        certified = diff + slack
        bb = absa @ np.abs(shift)
        for i in np.flatnonzero(certified < epsilon).tolist():
            taus.append(float(tt[i]))
            sups.append(float(certified[i]))
            bohr.append(float(bb[i]))
    return AlmostPeriodResult(
        taus=taus,
        sups=sups,
        epsilon=epsilon,
        test_window=(w0, w1),
        test_step=h,
        candidates=max(0, k_hi - k_lo + 1),
        bohr_bounds=bohr,
    )
