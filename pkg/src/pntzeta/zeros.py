"""Tables of nontrivial-zero ordinates: embedded data, zero files, verification, counting.

Every tabulated zero is taken as rho = 1/2 + i*gamma; the table stores only
the positive ordinates, the mirrored ones being implicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InvalidArgument, ResolutionError, VerificationError, ZeroFileError
from .zeta_eval import DEFAULT_CONFIG, ZetaEvalConfig, hardy_z

#: Lower end of the scanned interval for zero counting.
SCAN_START = 2.0
SCAN_STEP = 0.05
SMALL_Z = 0.1
MAX_HEIGHT = 260.0

_EMBEDDED_FILE = "zeros100.txt"


@dataclass(frozen=True)
class ZeroTable:
    ordinates: np.ndarray = field(repr=False)
    source: str = "file"
    verified_upto: int = 0

    def __post_init__(self):
        ords = np.asarray(self.ordinates, dtype=np.float64)
        if ords.ndim != 1:
            raise InvalidArgument("ordinates must be one-dimensional")
        if ords.size and (ords[0] < 14.13 or np.any(np.diff(ords) <= 0)):
            raise InvalidArgument("ordinates must be strictly increasing and start at gamma_1 > 14.13")
        if self.source not in ("embedded", "file"):
            raise InvalidArgument(f"unknown source {self.source!r}")
        if not 0 <= self.verified_upto <= ords.size:
            raise InvalidArgument("verified_upto out of range")
        ords.setflags(write=False)
        object.__setattr__(self, "ordinates", ords)

    def __len__(self) -> int:
        return int(self.ordinates.size)

    @property
    def verified(self) -> np.ndarray:
        return self.ordinates[: self.verified_upto]

    def head(self, count: int) -> "ZeroTable":
        count = min(count, len(self))
        return replace(self, ordinates=self.ordinates[:count], verified_upto=min(self.verified_upto, count))


@dataclass(frozen=True)
class ZeroVerification:
    gamma: float
    half_width: float
    refined: float
    z_left: float
    z_right: float
    verified: bool = True


@dataclass
class ZeroCountReport:
    T: float
    counted: int
    rvm_estimate: float
    allowance: float
    flagged: bool
    sign_changes: list[float]

    def rows(self):
        yield {
            "T": self.T,
            "counted": self.counted,
            "rvm_estimate": self.rvm_estimate,
            "allowance": self.allowance,
            "flagged": self.flagged,
        }


# ---------------------------------------------------------------------------
# files


def parse_zero_lines(lines, max_count: int | None = None, name: str = "<data>") -> np.ndarray:
    values = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text)
        except ValueError:
            raise ZeroFileError(f"{name}: line {lineno}: cannot parse {text!r} as a number", line=lineno) from None
        if not math.isfinite(value) or value <= 0:
            raise ZeroFileError(f"{name}: line {lineno}: ordinate must be positive and finite", line=lineno)
        if values and value <= values[-1]:
            raise ZeroFileError(f"{name}: line {lineno}: ordinates are not ascending", line=lineno)
        values.append(value)
        if max_count is not None and len(values) >= max_count:
            break
    if not values:
        raise ZeroFileError(f"{name}: no ordinates found")
    return np.array(values)


def load_zero_file(
    path, max_count: int | None = None, verify: bool = False, cfg: ZetaEvalConfig = DEFAULT_CONFIG
) -> ZeroTable:
    """Read a plain-text zero table: one ordinate per line, '#' comments."""
    if max_count is not None and max_count < 1:
        raise InvalidArgument("max_count must be positive")
    path = Path(path)
    with path.open(encoding="utf-8", newline=None) as fh:
        ords = parse_zero_lines(fh, max_count, name=str(path))
    try:
        table = ZeroTable(ords, source="file")
    except InvalidArgument as exc:
        raise ZeroFileError(f"{path}: {exc}") from None
    return verify_table(table, cfg) if verify else table


def write_zero_file(path, ordinates, header: str | None = None, digits: int = 12) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for g in ordinates:
            fh.write(f"{g:.{digits}f}\n")


def embedded_zeros() -> ZeroTable:
    """The first 100 ordinates, generated by :func:`compute_zeros` and stored in package data."""
    text = resources.files("pntzeta").joinpath("data").joinpath(_EMBEDDED_FILE).read_text(encoding="utf-8")
    ords = parse_zero_lines(text.splitlines(), name=_EMBEDDED_FILE)
    return ZeroTable(ords, source="embedded", verified_upto=ords.size)


# ---------------------------------------------------------------------------
# verification


def _bisect(f, a: float, b: float, fa: float, fb: float, tol: float) -> float:
    while b - a > tol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def verify_zero(
    gamma: float, half_width: float = 0.05, cfg: ZetaEvalConfig = DEFAULT_CONFIG, tol: float = 1e-8
) -> ZeroVerification:
    """Confirm a sign change of Z across [gamma - w, gamma + w] and bisect it to ``tol``."""
    if not 5 <= gamma <= MAX_HEIGHT:
        raise InvalidArgument(f"gamma must lie in [5, {MAX_HEIGHT}], got {gamma}")
    if not 0 < half_width <= 0.5:
        raise InvalidArgument("half_width must lie in (0, 0.5]")
    a, b = gamma - half_width, gamma + half_width
    za, zb = hardy_z(a, cfg), hardy_z(b, cfg)
    if za == 0 or zb == 0 or (za > 0) == (zb > 0):
        raise VerificationError(f"no sign change of Z on [{a:.6f}, {b:.6f}]")
    refined = _bisect(lambda t: hardy_z(t, cfg), a, b, za, zb, tol)
    return ZeroVerification(gamma=gamma, half_width=half_width, refined=refined, z_left=za, z_right=zb)


def verify_table(
    table: ZeroTable, cfg: ZetaEvalConfig = DEFAULT_CONFIG, half_width: float = 0.05, tol: float = 1e-6
) -> ZeroTable:
    """Return the table with ``verified_upto`` set to the verified prefix length.

    An entry counts as verified when Z changes sign within ``half_width``
    and the bisected zero lies within ``tol`` of the stored value.
    """
    count = 0
    for g in table.ordinates.tolist():
        if g > MAX_HEIGHT:
            break
        w = min(half_width, 0.5 * _neighbour_gap(table.ordinates, count))
        try:
            v = verify_zero(g, w, cfg)
        except VerificationError:
            break
        if abs(v.refined - g) > tol:
            break
        count += 1
    return replace(table, verified_upto=count)


def _neighbour_gap(ords: np.ndarray, i: int) -> float:
    gaps = []
    if i > 0:
        gaps.append(ords[i] - ords[i - 1])
    if i + 1 < ords.size:
        gaps.append(ords[i + 1] - ords[i])
    return min(gaps) if gaps else 1.0


# ---------------------------------------------------------------------------
# counting


def scan_sign_changes(
    t_start: float, t_end: float, cfg: ZetaEvalConfig = DEFAULT_CONFIG, step: float = SCAN_STEP,
    max_depth: int = 4, max_evals: int = 200_000,
) -> list[tuple[float, float]]:
    """Brackets (a, b) in (t_start, t_end] on which Z changes sign.

    Base step ``step``; any interval touching |Z| < SMALL_Z is re-sampled at
    half the step, down to ``max_depth`` halvings.
    """
    if t_end <= t_start:
        return []
    n = max(1, math.ceil((t_end - t_start) / step))
    grid = np.linspace(t_start, t_end, n + 1)
    evals = 0

    def z(t):
        nonlocal evals
        evals += 1
        if evals > max_evals:
            raise ResolutionError(f"sign-change scan exceeded {max_evals} evaluations")
        v = hardy_z(t, cfg)
        if v == 0.0:
            v = hardy_z(t + 1e-9, cfg)
        return v

    def refine(a, b, za, zb, depth):
        if depth >= max_depth or min(abs(za), abs(zb)) >= SMALL_Z:
            return [(a, b, za, zb)]
        m = 0.5 * (a + b)
        zm = z(m)
        return refine(a, m, za, zm, depth + 1) + refine(m, b, zm, zb, depth + 1)

    brackets = []
    za = z(float(grid[0]))
    for a, b in zip(grid[:-1].tolist(), grid[1:].tolist()):
        zb = z(b)
        for (u, v, zu, zv) in refine(a, b, za, zb, 0):
            if (zu > 0) != (zv > 0):
                brackets.append((u, v))
        za = zb
    return brackets


def rvm_estimate(T: float) -> float:
    """Riemann-von Mangoldt main terms (T/2pi) log(T/2pi e) + 7/8."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7 / 8


def count_zeros_check(T: float, cfg: ZetaEvalConfig = DEFAULT_CONFIG) -> ZeroCountReport:
    """Count sign changes of Z on (2, T] and compare with the Riemann-von Mangoldt estimate."""
    if not 10 <= T <= MAX_HEIGHT:
        raise InvalidArgument(f"T must lie in [10, {MAX_HEIGHT}], got {T}")
    brackets = scan_sign_changes(SCAN_START, T, cfg)
    counted = len(brackets)
    est = rvm_estimate(T)
    allowance = 1 + 0.5 * math.log(T)
    return ZeroCountReport(
        T=T,
        counted=counted,
        rvm_estimate=est,
        allowance=allowance,
        flagged=abs(counted - est) > allowance,
        sign_changes=[0.5 * (a + b) for a, b in brackets],
    )


def compute_zeros(count: int, cfg: ZetaEvalConfig = DEFAULT_CONFIG, tol: float = 1e-12) -> np.ndarray:
    """First ``count`` ordinates by scanning Z and bisecting each sign change."""
    found = []
    lo = SCAN_START
    while len(found) < count:
        if lo >= MAX_HEIGHT:
            raise ResolutionError(f"only {len(found)} zeros found below {MAX_HEIGHT}")
        hi = min(lo + 25.0, MAX_HEIGHT)
        for a, b in scan_sign_changes(lo, hi, cfg):
            f = lambda t: hardy_z(t, cfg)  # noqa: E731
            found.append(_bisect(f, a, b, f(a), f(b), tol))
        lo = hi
    return np.array(found[:count])
