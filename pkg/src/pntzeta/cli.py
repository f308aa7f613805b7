"""Batch command line: ``pntzeta <command> --key=value ...``.

Every command writes a report (CSV by default, or JSON) and exits with
0 on success, 2 when a verification fails, and 1 on usage errors.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import apf, arith, gamma, tauber, zeros, zerosum
from .errors import PntZetaError, VerificationError

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

REQUIRED = object()


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Param:
    kind: str  # float, int, floats, path, bool, choice
    default: Any = REQUIRED
    lo: float | None = None
    hi: float | None = None
    choices: tuple[str, ...] = ()

    def convert(self, key: str, text: str):
        try:
            if self.kind == "float":
                value = float(text)
            elif self.kind == "int":
                # accept 1e6 style as long as the value is integral
                number = float(text)
                if not number.is_integer():
                    raise ValueError
                value = int(number)
            elif self.kind == "floats":
                value = [float(v) for v in text.split(",") if v.strip()]
                if not value:
                    raise ValueError
            elif self.kind == "bool":
                low = text.strip().lower()
                if low not in ("1", "0", "true", "false", "yes", "no"):
                    raise ValueError
                value = low in ("1", "true", "yes")
            elif self.kind == "choice":
                if text not in self.choices:
                    raise ValueError
                value = text
            else:
                value = text
        except ValueError:
            raise UsageError(f"--{key}: cannot parse {text!r} as {self._describe()}") from None
        self.check(key, value)
        return value

    def check(self, key: str, value) -> None:
        items = value if isinstance(value, list) else [value]
        if self.kind in ("float", "int", "floats"):
            for v in items:
                if not math.isfinite(v):
                    raise UsageError(f"--{key}: value must be finite")
                if self.lo is not None and v < self.lo or self.hi is not None and v > self.hi:
                    raise UsageError(f"--{key}: {v!r} outside [{self.lo}, {self.hi}]")

    def _describe(self) -> str:
        if self.kind == "choice":
            return "one of " + ", ".join(self.choices)
        return {"floats": "comma-separated numbers", "bool": "a boolean (0/1)"}.get(self.kind, self.kind)


@dataclass
class Report:
    rows: list[dict]
    verdict: str
    failed: bool = False
    summary: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Command:
    params: dict[str, Param]
    handler: Callable[[dict], Report]
    help: str


@dataclass
class RunConfig:
    command: str
    parameters: dict
    output_format: str = "csv"
    output_path: Path | None = None


# ---------------------------------------------------------------------------
# handlers


def _zero_table(p: dict) -> zeros.ZeroTable:
    path = p.get("zeros")
    if path:
        return zeros.load_zero_file(path, verify=True)
    return zeros.embedded_zeros()


def _series(p: dict) -> apf.FrequencySeries:
    if p.get("series") and p.get("count") is not None:
        raise UsageError("--series and --count are mutually exclusive")
    if p.get("series"):
        with Path(p["series"]).open(encoding="utf-8") as fh:
            return apf.FrequencySeries.from_records(json.load(fh))
    count = p.get("count") or 10
    return apf.counterfactual_coefficients(zeros.embedded_zeros().ordinates[:count])


def _cmd_sieve(p):
    table = arith.sieve_lambda(p["N"])
    limit = min(p["check"], p["N"])
    mismatches = [n for n in range(1, limit + 1) if table[n] != arith.trial_division_lambda(n)]
    pp = table.prime_powers()[: p["max_rows"]]
    rows = [{"n": int(n), "lambda": float(table.values[n]), "psi": float(table.psi[n])} for n in pp]
    return Report(
        rows,
        "pass" if not mismatches else "mismatch",
        failed=bool(mismatches),
        summary={"psi_N": float(table.psi[p["N"]]), "checked_upto": limit, "mismatches": mismatches[:10]},
    )


def _cmd_psi(p):
    x = p["x"]
    table = arith.sieve_lambda(math.floor(x))
    value = arith.chebyshev_psi(x, table)
    corridor = 2 * math.sqrt(x) * math.log(x) ** 2
    row = {"x": x, "psi": value, "deviation": value - x, "corridor": corridor}
    if x < 100:
        return Report([row], "computed")
    inside = abs(value - x) < corridor
    return Report([row], "pass" if inside else "outside corridor", failed=not inside)


def _decreasing(key, xs):
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise UsageError(f"--{key}: values must be strictly decreasing")


def _cmd_tauber_table(p):
    _decreasing("x_list", p["x_list"])
    rows = tauber.tauber_convergence_table(p["x_list"])
    ok = tauber.deviations_shrink(rows)
    return Report([r.row() for r in rows], "pass" if ok else "not monotone", failed=not ok)


def _cmd_karamata(p):
    _decreasing("x_list", p["x_list"])
    res = [tauber.karamata_moment(p["coeffs"], x) for x in p["x_list"]]
    devs = [abs(r.value - r.limit) for r in res]
    ok = all(b < a for a, b in zip(devs, devs[1:]))
    return Report([r.row() for r in res], "pass" if ok else "not monotone", failed=not ok)


def _cmd_converse(p):
    table = arith.sieve_lambda(math.ceil(p["X_max"]))
    r = tauber.converse_integral_check(p["s"], p["X_max"], table)
    return Report([r.row()], "pass" if r.holds else "fail", failed=not r.holds)


def _cmd_zeros_verify(p):
    if p.get("gamma") is not None:
        if p.get("zeros"):
            raise UsageError("--gamma and --zeros are mutually exclusive")
        try:
            v = zeros.verify_zero(p["gamma"], p["half_width"])
        except VerificationError as exc:
            row = {"gamma": p["gamma"], "half_width": p["half_width"], "refined": None, "verified": False}
            return Report([row], "no sign change", failed=True, summary={"detail": str(exc)})
        row = {"gamma": v.gamma, "half_width": v.half_width, "refined": v.refined, "verified": True}
        return Report([row], "pass")
    table = _zero_table(p)
    checked = zeros.verify_table(zeros.ZeroTable(table.ordinates, source=table.source), half_width=p["half_width"])
    rows = [
        {"index": i + 1, "gamma": float(g), "verified": i < checked.verified_upto}
        for i, g in enumerate(table.ordinates.tolist())
    ]
    ok = checked.verified_upto == len(table)
    return Report(rows, "pass" if ok else "no sign change", failed=not ok, summary={"verified": checked.verified_upto})


def _cmd_zeros_count(p):
    r = zeros.count_zeros_check(p["T"])
    return Report(list(r.rows()), "pass" if not r.flagged else "count off estimate", failed=r.flagged)


def _cmd_zero_sum(p):
    table = _zero_table(p)
    r = zerosum.zero_sum(p["x"], table)
    row = {"x": r.x, "value": r.value, "pairs_used": r.pairs_used, "tail_bound": r.tail_bound}
    return Report([row], "computed")


def _cmd_verify_analytic(p):
    _decreasing("x_list", p["x_list"])
    res = zerosum.verify_analytic_residual(p["x_list"], _zero_table(p), constant_term=p["constant_term"])
    return Report(list(res.rows()), res.verdict, failed=res.verdict != "pass", summary={"slope": res.slope})


def _cmd_mellin_check(p):
    rows, ok = [], True
    for x in p["x_list"]:
        m = zerosum.mellin_line_integral_report(x, p["height_cut"], p["step"])
        g = arith.smoothed_lambda_sum(x).value
        diff = m.value - g
        ok &= abs(diff) <= p["tol"]
        rows.append({"x": x, "mellin": m.value, "direct": g, "difference": diff, "truncation_bound": m.truncation_bound})
    return Report(rows, "pass" if ok else "fail", failed=not ok)


def _cmd_apf_recover(p):
    series = _series(p)
    r = apf.mean_value_I(series, p["n0"], p["X"])
    a0 = complex(series.coeffs[series.position(p["n0"])])
    gap = abs(r.i_of_x - r.s0_size * a0)
    row = {
        "n0": r.n0,
        "X": r.X,
        "re_I": r.i_of_x.real,
        "im_I": r.i_of_x.imag,
        "s0_size": r.s0_size,
        "re_a": r.recovered_a.real,
        "im_a": r.recovered_a.imag,
        "gap": gap,
        "error_bound": r.error_bound,
    }
    ok = gap <= r.error_bound
    return Report([row], "pass" if ok else "fail", failed=not ok)


def _cmd_apf_witness(p):
    series = _series(p)
    w = apf.non_decay_witness(series, p["n0"], p["x_floor"])
    row = {"x": w.x, "abs_F": abs(w.value), "threshold": w.threshold, "windows": w.windows}
    return Report([row], "pass")


def _cmd_apf_period(p):
    if p.get("series") or p.get("count") is not None:
        series = _series(p)
    else:
        series = apf.FrequencySeries.symmetric([1.0], [1.0])
    if p["tau_max"] < p["tau_min"]:
        raise UsageError("--tau_max must not be below --tau_min")
    r = apf.epsilon_almost_period(series, p["epsilon"], (p["tau_min"], p["tau_max"]), p["grid_step"])
    return Report(list(r.rows()), "found" if r.taus else "none", summary={"candidates": r.candidates})


def _cmd_phi_oscillation(p):
    if p["k_max"] - p["k_min"] < 3:
        raise UsageError("need at least 4 scales: k_max - k_min >= 3")
    pts = [2.0**-k for k in range(p["k_min"], p["k_max"] + 1)]
    f = lambda x: arith.ramanujan_phi(x, p["which"])  # noqa: E731
    r = arith.oscillation_probe(f, pts, threshold=p["threshold"])
    return Report(
        list(r.rows()),
        "non-convergent" if r.non_convergent else "convergent",
        summary={"max_gap": r.max_gap},
    )


def _cmd_gamma_bound(p):
    r = gamma.gamma_decay_bound_check((p["x_min"], p["x_max"]), (p["y_min"], p["y_max"]), p["step"], p["rate"])
    return Report(list(r.rows()), "computed")


_ZEROS = Param("path", None)
_SERIES = {"series": Param("path", None), "count": Param("int", None, 1, 100)}

COMMANDS: dict[str, Command] = {
    "sieve": Command(
        {"N": Param("int", 100, 1, 10**8), "check": Param("int", 1000, 0, 10**5), "max_rows": Param("int", 1000, 0, 10**7)},
        _cmd_sieve,
        "Lambda(n) and psi(n) for prime powers n <= N, checked against trial division",
    ),
    "psi": Command({"x": Param("float", REQUIRED, 1, 10**8)}, _cmd_psi, "psi(x) against the corridor 2 sqrt(x) log(x)^2"),
    "tauber-table": Command(
        {"x_list": Param("floats", [0.1, 0.01, 0.001, 0.0001], 1e-5, 1)}, _cmd_tauber_table, "G(x) - 1 along x -> 0"
    ),
    "karamata": Command(
        {"coeffs": Param("floats", [0.0, 1.0, -1.0], -1e12, 1e12), "x_list": Param("floats", [0.1, 0.01, 0.001], 1e-4, 1)},
        _cmd_karamata,
        "Karamata moments x sum Lambda(n) e^{-nx} g(e^{-nx})",
    ),
    "converse": Command(
        {"s": Param("float", 2.0, 1.2, 5), "X_max": Param("float", 1e6, 2, 10**8)},
        _cmd_converse,
        "-zeta'/zeta(s) - s/(s-1) against s int (psi(t) - t) t^{-s-1} dt",
    ),
    "zeros-verify": Command(
        {"gamma": Param("float", None, 5, zeros.MAX_HEIGHT), "half_width": Param("float", 0.05, 1e-6, 0.5), "zeros": _ZEROS},
        _cmd_zeros_verify,
        "sign change of Z around one ordinate, or every ordinate of a table",
    ),
    "zeros-count": Command({"T": Param("float", 100.0, 10, zeros.MAX_HEIGHT)}, _cmd_zeros_count, "count sign changes of Z on (2, T]"),
    "zero-sum": Command({"x": Param("float", 0.01, 1e-300, 1), "zeros": _ZEROS}, _cmd_zero_sum, "S(x) over the zero table"),
    "verify-analytic": Command(
        {
            "x_list": Param("floats", [10**-1, 10**-1.5, 10**-2, 10**-2.5, 10**-3], 1e-4, 0.2),
            "zeros": _ZEROS,
            "constant_term": Param("bool", True),
        },
        _cmd_verify_analytic,
        "residual G(x) + S(x) - 1 + x log(2 pi) = O(x^{3/2})",
    ),
    "mellin-check": Command(
        {
            "x_list": Param("floats", [0.2, 0.5, 1.0], 0.1, 2),
            "height_cut": Param("float", 50.0, 30, 1000),
            "step": Param("float", 0.01, 1e-5, 0.05),
            "tol": Param("float", 1e-6, 0, 1),
        },
        _cmd_mellin_check,
        "line integral along Re s = 2 against the direct smoothed sum",
    ),
    "apf-recover": Command(
        {**_SERIES, "n0": Param("int", 1, -10**9, 10**9), "X": Param("float", 1e4, 1e-300, 1e300)},
        _cmd_apf_recover,
        "mean value I(X) and the recovered coefficient",
    ),
    "apf-witness": Command(
        {**_SERIES, "n0": Param("int", 1, -10**9, 10**9), "x_floor": Param("float", 1e6, 1, 1e15)},
        _cmd_apf_witness,
        "first x past x_floor with |F(x)| >= |S_0| |a_n0| / 2",
    ),
    "apf-period": Command(
        {
            **_SERIES,
            "epsilon": Param("float", 1e-3, 0, 1e300),
            "tau_min": Param("float", 6.0),
            "tau_max": Param("float", 7.0),
            "grid_step": Param("float", 1e-4, 1e-12, 1e6),
        },
        _cmd_apf_period,
        "grid translation numbers tau with sup |F(x + tau) - F(x)| < epsilon",
    ),
    "phi-oscillation": Command(
        {
            "which": Param("choice", "phi2", choices=("phi1", "phi2", "phi")),
            "k_min": Param("int", 10, 0, 40),
            "k_max": Param("int", 20, 3, 40),
            "threshold": Param("float", 1e-3, 0, 1e300),
        },
        _cmd_phi_oscillation,
        "x phi(x) against 1.5x phi(1.5x) on the scales 2^-k",
    ),
    "gamma-bound": Command(
        {
            "x_min": Param("float", -0.5, -1e6, 2),
            "x_max": Param("float", 2.0, -1e6, 2),
            "y_min": Param("float", 5.0, 5, 1e6),
            "y_max": Param("float", 50.0, 5, 1e6),
            "step": Param("float", 0.1, 1e-4, 1e6),
            "rate": Param("float", 1.0, 0, 1e6),
        },
        _cmd_gamma_bound,
        "C = max |Gamma(x + iy)| e^{rate |y|} on a grid",
    ),
}

GLOBAL_KEYS = ("config", "format", "output")


def usage() -> str:
    lines = ["usage: pntzeta <command> [--key=value ...] [--config=FILE] [--format=csv|json] [--output=FILE]", "", "commands:"]
    for name, cmd in COMMANDS.items():
        keys = " ".join(f"--{k}" for k in cmd.params)
        lines.append(f"  {name:16s} {cmd.help}")
        if keys:
            lines.append(f"  {'':16s} keys: {keys}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# parsing


def _split_flag(arg: str) -> tuple[str, str]:
    if not arg.startswith("--") or "=" not in arg:
        raise UsageError(f"malformed flag {arg!r}; expected --key=value")
    key, _, value = arg[2:].partition("=")
    if not key:
        raise UsageError(f"malformed flag {arg!r}; empty key")
    return key, value


def read_config_file(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}: line {lineno}: expected key=value")
        out[key.strip()] = value.strip()
    return out


def parse_args(argv: list[str]) -> RunConfig:
    if not argv:
        raise UsageError("missing command")
    command, *rest = argv
    if command.startswith("--"):
        key, _ = _split_flag(command)
        raise UsageError(f"missing command before flag --{key}")
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    entry = COMMANDS[command]
    flags: dict[str, str] = {}
    for arg in rest:
        key, value = _split_flag(arg)
        if key in flags:
            raise UsageError(f"--{key} given twice with conflicting values" if flags[key] != value else f"--{key} given twice")
        flags[key] = value
    fmt = flags.pop("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"--format: expected csv or json, got {fmt!r}")
    output = flags.pop("output", None)
    raw = read_config_file(flags.pop("config")) if "config" in flags else {}
    raw.update(flags)
    params = {}
    for key, text in raw.items():
        if key not in entry.params:
            raise UsageError(f"unknown key --{key} for command {command}")
        params[key] = entry.params[key].convert(key, text)
    for key, par in entry.params.items():
        if key not in params:
            if par.default is REQUIRED:
                raise UsageError(f"missing required parameter --{key}")
            params[key] = par.default
    return RunConfig(command, params, fmt, Path(output) if output else None)


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(config: RunConfig, report: Report) -> str:
    if config.output_format == "json":
        doc = {
            "command": config.command,
            "parameters": _jsonable(config.parameters),
            "rows": _jsonable(report.rows),
            "verdict": report.verdict,
        }
        if report.summary:
            doc["summary"] = _jsonable(report.summary)
        return json.dumps(doc, indent=2) + "\n"
    header: list[str] = []
    for row in report.rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in report.rows:
        w.writerow([_fmt(row.get(k)) for k in header])
    return buf.getvalue()


def run(config: RunConfig) -> int:
    cmd = COMMANDS.get(config.command)
    if cmd is None:
        print(f"error: unknown command {config.command!r}\n\n{usage()}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = cmd.handler(config.parameters)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PntZetaError, OSError) as exc:
        print(f"error: {config.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, (ValueError, OSError)) else EXIT_FAILED
    text = render(config, report)
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        config.output_path.write_text(text, encoding="utf-8")
    if report.failed:
        print(f"{config.command}: {report.verdict}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] in ("-h", "--help", "help"):
        print(usage())
        return EXIT_OK
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}\n\n{usage()}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
