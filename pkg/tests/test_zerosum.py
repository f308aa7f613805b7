import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pntzeta.arith import smoothed_lambda_sum
from pntzeta.errors import AccuracyError, InvalidArgument
from pntzeta.zerosum import (
    mellin_line_integral,
    mellin_line_integral_report,
    verify_analytic_residual,
    zero_sum,
    zero_sum_tail_bound,
    zero_sum_terms,
    zero_sum_unfolded,
)

X_LIST = [10**-1, 10**-1.5, 10**-2, 10**-2.5, 10**-3]


def _mp_zero_sum(x, gammas):
    mpmath.mp.dps = 30
    try:
        total = mpmath.mpf(0)
        for g in gammas:
            rho = mpmath.mpc(0.5, g)
            total += 2 * mpmath.re(mpmath.power(x, 1 - rho) * mpmath.gamma(rho))
        return float(total)
    finally:
        mpmath.mp.dps = 15


def test_zero_sum_against_mpmath(zero_table):
    g = zero_table.ordinates[:10].tolist()
    head = zero_table.head(10)
    for x in (1.0, 0.1, 0.01):
        assert zero_sum(x, head).value == pytest.approx(_mp_zero_sum(x, g), abs=1e-22, rel=1e-11)


def test_zero_sum_is_real_and_matches_unfolded(zero_table):
    for x in (1.0, 0.1, 0.01):
        folded = zero_sum(x, zero_table).value
        unfolded = zero_sum_unfolded(x, zero_table)
        assert abs(unfolded.imag) < 1e-20
        assert unfolded.real == pytest.approx(folded, rel=1e-12, abs=1e-24)


def test_first_term_dominates(zero_table):
    terms, log_mag = zero_sum_terms(0.5, zero_table)
    assert abs(terms[0]) > 1e3 * max(abs(t) for t in terms[1:])
    assert all(b < a for a, b in zip(log_mag, log_mag[1:]))


def test_tail_bound_shrinks_and_dominates(zero_table):
    x = 1.0
    head = zero_table.head(40)
    T = float(head.ordinates[-1])
    rest = zero_sum(x, zero_table).value - zero_sum(x, head).value
    assert abs(rest) <= zero_sum_tail_bound(T, x)
    assert zero_sum_tail_bound(100.0, x) < zero_sum_tail_bound(50.0, x)
    with pytest.raises(InvalidArgument):
        zero_sum_tail_bound(10.0, x)


def test_zero_sum_domain(zero_table):
    with pytest.raises(InvalidArgument):
        zero_sum(2.0, zero_table)


def test_residual_pass_and_ablation(zero_table):
    res = verify_analytic_residual(X_LIST, zero_table)
    assert res.verdict == "pass"
    assert res.slope >= 1.4
    for r in res.reports:
        assert abs(r.residual) <= 10 * r.x**1.5
    ablated = verify_analytic_residual(X_LIST, zero_table, constant_term=False)
    assert ablated.slope < 1.2
    assert ablated.verdict == "fail"


def test_residual_preconditions(zero_table):
    with pytest.raises(InvalidArgument):
        verify_analytic_residual([0.01, 0.1], zero_table)
    with pytest.raises(InvalidArgument):
        verify_analytic_residual([0.5, 0.1], zero_table)


def test_mellin_matches_direct_sum():
    for x in (0.2, 0.5, 1.0):
        assert abs(mellin_line_integral(x) - smoothed_lambda_sum(x).value) < 1e-12


def test_mellin_reports_bounds():
    r = mellin_line_integral_report(0.5)
    assert r.truncation_bound < 1e-15
    assert r.dirichlet_terms >= 3


def test_mellin_preconditions():
    with pytest.raises(InvalidArgument):
        mellin_line_integral(0.05)
    with pytest.raises(InvalidArgument):
        mellin_line_integral(0.5, height_cut=10)
    with pytest.raises(AccuracyError):
        mellin_line_integral(0.1, height_cut=500, step=0.05)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1.0))
def test_zero_sum_folding_property(x):
    from pntzeta.zeros import embedded_zeros

    table = embedded_zeros().head(30)
    folded = zero_sum(x, table).value
    unfolded = zero_sum_unfolded(x, table)
    scale = math.sqrt(x) * 1e-8
    assert abs(unfolded.real - folded) <= 1e-12 * scale
    assert abs(unfolded.imag) <= 1e-12 * scale
