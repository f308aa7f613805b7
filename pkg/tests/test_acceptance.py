"""One test per acceptance criterion, each printing a PASS/FAIL line."""

import math
import time

import numpy as np

from pntzeta.apf import (
    FrequencySeries,
    counterfactual_coefficients,
    eval_F,
    mean_value_I,
    non_decay_witness,
    quadrature_mean_value,
    simpson_envelope,
)
from pntzeta.arith import oscillation_probe, ramanujan_phi, sieve_lambda, smoothed_lambda_sum, trial_division_lambda
from pntzeta.gamma import log_gamma, loggamma
from pntzeta.tauber import converse_integral_check, tauber_convergence_table
from pntzeta.zeros import MAX_HEIGHT, count_zeros_check, rvm_estimate, verify_zero
from pntzeta.zerosum import mellin_line_integral, verify_analytic_residual
from pntzeta.zeta_eval import log_deriv_zeta_series


def test_criterion_01_sieve_oracle(acceptance):
    t0 = time.perf_counter()
    table = sieve_lambda(10**5)
    bad = [n for n in range(1, 10**5 + 1) if table[n] != trial_division_lambda(n)]
    elapsed = time.perf_counter() - t0
    acceptance(1, not bad and elapsed < 5, f"{len(bad)} mismatches for n <= 1e5, {elapsed:.2f} s (limit 5 s)")


def test_criterion_02_gamma_identities(acceptance):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst_mod = 0.0
    for t in rng.uniform(0, 50, 200).tolist():
        half = 2 * log_gamma(complex(0.5, t)).log_mag - math.log(math.pi / math.cosh(math.pi * t))
        one = 2 * log_gamma(complex(1.0, t)).log_mag - math.log(math.pi * t / math.sinh(math.pi * t))
        # a log difference d means a relative error of expm1(d)
        worst_mod = max(worst_mod, abs(math.expm1(half)), abs(math.expm1(one)))
    worst_rec = worst_ref = 0.0
    for _ in range(200):
        z = complex(rng.uniform(-2, 3), rng.uniform(-100, 100))
        d = loggamma(z + 1) - loggamma(z) - np.log(z)
        worst_rec = max(worst_rec, abs(d.real), abs(math.remainder(d.imag, 2 * math.pi)))
        w = complex(rng.uniform(0.05, 0.95), rng.uniform(-20, 20))
        refl = np.exp(loggamma(w) + loggamma(1 - w)) * np.sin(math.pi * w) / math.pi
        worst_ref = max(worst_ref, abs(refl - 1))
    elapsed = time.perf_counter() - t0
    ok = worst_mod <= 1e-10 and worst_rec <= 1e-11 and worst_ref <= 1e-10 and elapsed < 1
    acceptance(
        2,
        ok,
        f"modulus rel err {worst_mod:.2e} (1e-10), recurrence {worst_rec:.2e} (1e-11), "
        f"reflection {worst_ref:.2e} (1e-10), {elapsed:.2f} s (limit 1 s)",
    )


def test_criterion_03_zero_verification(acceptance, zero_table):
    t0 = time.perf_counter()
    refined_ok = 0
    for g in zero_table.ordinates.tolist():
        v = verify_zero(g, 0.05, tol=1e-10)
        refined_ok += abs(v.refined - g) <= 1e-8
    n100 = count_zeros_check(100).counted
    reports = [count_zeros_check(T) for T in (30, 60, 100)]
    within = all(abs(r.counted - rvm_estimate(r.T)) <= 1 + 0.5 * math.log(r.T) for r in reports)
    elapsed = time.perf_counter() - t0
    ok = refined_ok == 100 and n100 == 29 and within and elapsed < 60 and zero_table.ordinates[-1] <= MAX_HEIGHT
    acceptance(
        3,
        ok,
        f"{refined_ok}/100 zeros refined within 1e-8, N(100) = {n100}, "
        f"counts {[r.counted for r in reports]} vs RvM {[round(rvm_estimate(r.T), 2) for r in reports]}, "
        f"{elapsed:.2f} s (limit 60 s)",
    )


def test_criterion_04_tauber_table(acceptance):
    t0 = time.perf_counter()
    rows = tauber_convergence_table([1e-1, 1e-2, 1e-3, 1e-4])
    devs = [abs(r.deviation_from_limit) for r in rows]
    limits = [0.2, 0.05, 5e-3, 5e-4]
    elapsed = time.perf_counter() - t0
    ok = all(d < lim for d, lim in zip(devs, limits)) and all(b < a for a, b in zip(devs, devs[1:])) and elapsed < 30
    acceptance(4, ok, f"|G - 1| = {[f'{d:.3e}' for d in devs]} vs {limits}, {elapsed:.2f} s (limit 30 s)")


def test_criterion_05_analytic_residual(acceptance, zero_table):
    xs = [10**-1, 10**-1.5, 10**-2, 10**-2.5, 10**-3]
    t0 = time.perf_counter()
    res = verify_analytic_residual(xs, zero_table.head(100))
    ablated = verify_analytic_residual(xs, zero_table.head(100), constant_term=False)
    elapsed = time.perf_counter() - t0
    pointwise = all(abs(r.residual) <= 10 * r.x**1.5 for r in res.reports)
    ok = pointwise and res.slope >= 1.4 and ablated.slope < 1.2 and elapsed < 60
    acceptance(
        5,
        ok,
        f"|r|/x^1.5 max {max(abs(r.residual) / r.x**1.5 for r in res.reports):.3f} (10), "
        f"slope {res.slope:.3f} (>= 1.4), ablated slope {ablated.slope:.3f} (< 1.2), {elapsed:.2f} s (limit 60 s)",
    )


def test_criterion_06_mellin(acceptance):
    t0 = time.perf_counter()
    diffs = [abs(mellin_line_integral(x, height_cut=50) - smoothed_lambda_sum(x).value) for x in (0.2, 0.5, 1.0)]
    elapsed = time.perf_counter() - t0
    ok = max(diffs) <= 1e-6 and elapsed < 60
    acceptance(6, ok, f"max |Mellin - G| = {max(diffs):.2e} (1e-6), {elapsed:.2f} s (limit 60 s)")


def _random_symmetric_series(rng):
    pairs = int(rng.integers(1, 21))
    gammas = np.cumsum(0.1 + rng.exponential(1.0, pairs))
    coeffs = rng.normal(size=pairs) + 1j * rng.normal(size=pairs)
    return FrequencySeries.symmetric(gammas, coeffs)


def test_criterion_07_mean_value(acceptance):
    rng = np.random.default_rng(7)
    holds = quad_ok = 0
    for _ in range(100):
        s = _random_symmetric_series(rng)
        assert len(s) <= 40 and s.separation(1) >= 0.1
        trial = True
        for X in (1e2, 1e4, 1e6):
            r = mean_value_I(s, 1, X)
            trial &= abs(r.i_of_x - r.s0_size * s.coeffs[0]) <= 2 / (r.separation * X) * s.abs_sum
        holds += trial
        h = min(1.0, math.pi / (4 * s.max_abs_gamma))
        q = quadrature_mean_value(s, 1, 1e2, h)
        quad_ok += abs(q - mean_value_I(s, 1, 1e2).i_of_x) <= simpson_envelope(s, 1e2, h)
    ok = holds == 100 and quad_ok == 100
    acceptance(7, ok, f"remainder bound held in {holds}/100 trials, Simpson within envelope in {quad_ok}/100")


def test_criterion_08_counterfactual_witness(acceptance, zero_table):
    s = counterfactual_coefficients(zero_table.ordinates[:10])
    target = abs(s.coeffs[0]) / 2
    found = []
    for floor in (1e6, 1e9):
        w = non_decay_witness(s, 1, floor)
        found.append((w.x, abs(eval_F(w.x, s))))
    ok = all(x > floor and v >= target for (x, v), floor in zip(found, (1e6, 1e9)))
    acceptance(
        8,
        ok,
        f"threshold {target:.3e}; witnesses "
        + ", ".join(f"x = {x:.6g} with |F| = {v:.3e}" for x, v in found),
    )


def test_criterion_09_converse(acceptance, lambda_table):
    t0 = time.perf_counter()
    results = [converse_integral_check(s, 1e6, lambda_table) for s in (1.5, 2.0, 3.0)]
    series = log_deriv_zeta_series(2.0, abs_tol=1e-6).real - 2
    elapsed = time.perf_counter() - t0
    within = all(abs(r.difference) <= r.tail_bound for r in results)
    at_two = abs(results[1].lhs - series)
    ok = within and at_two <= 1e-5 and elapsed < 30
    acceptance(
        9,
        ok,
        "; ".join(f"s={r.s:g}: |lhs-rhs| {abs(r.difference):.2e} <= {r.tail_bound:.2e}" for r in results)
        + f"; s=2 lhs vs series {at_two:.2e} (1e-5), {elapsed:.2f} s (limit 30 s)",
    )


def test_criterion_10_ramanujan_phi(acceptance):
    scales = [2.0**-k for k in range(10, 25)]
    phi2 = oscillation_probe(lambda x: ramanujan_phi(x, "phi2"), scales, threshold=1e-3)
    phi1 = oscillation_probe(lambda x: ramanujan_phi(x, "phi1"), scales, threshold=1e-3)
    ok = phi2.non_convergent and not phi1.non_convergent
    acceptance(
        10,
        ok,
        f"x phi2 gaps at the three smallest scales {[f'{g:.3e}' for g in phi2.gaps[-3:]]} "
        f"(flag needs > 1e-3: {'flagged' if phi2.non_convergent else 'not flagged'}); "
        f"x phi1 gaps {[f'{g:.3e}' for g in phi1.gaps[-3:]]} ({'flagged' if phi1.non_convergent else 'not flagged'})",
    )
