import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pntzeta.arith import sieve_lambda, smoothed_lambda_sum
from pntzeta.errors import InvalidArgument
from pntzeta.tauber import (
    converse_integral_check,
    corridor_tail_bound,
    deviations_shrink,
    karamata_moment,
    psi_weighted_integral,
    tauber_convergence_table,
)
from pntzeta.zeta_eval import log_deriv_zeta_series


def test_convergence_table():
    rows = tauber_convergence_table([1e-1, 1e-2, 1e-3, 1e-4])
    assert abs(rows[1].deviation_from_limit) < 0.05
    assert abs(rows[3].deviation_from_limit) < 5e-4
    assert deviations_shrink(rows)
    for r in rows:
        assert r.deviation_from_limit == r.value - 1.0


def test_convergence_table_preconditions():
    with pytest.raises(InvalidArgument):
        tauber_convergence_table([1e-6])
    with pytest.raises(InvalidArgument):
        tauber_convergence_table([1e-3, 1e-2])


def test_karamata_constant_is_G():
    for x in (0.1, 1e-3):
        m = karamata_moment([1.0], x)
        assert m.value == smoothed_lambda_sum(x).value
        assert m.limit == 1.0


def test_karamata_identity_polynomial():
    m = karamata_moment([0.0, 1.0], 1e-3)
    assert m.limit == 0.5
    assert abs(m.value - 0.5) < 2e-2
    assert m.value == pytest.approx(smoothed_lambda_sum(2e-3).value / 2, rel=1e-15)


def test_karamata_t_minus_t2_converges():
    devs = [abs(karamata_moment([0.0, 1.0, -1.0], x).value - 1 / 6) for x in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert devs[-1] < 1e-6


def test_karamata_degree_cap():
    with pytest.raises(InvalidArgument):
        karamata_moment([1.0] * 22, 0.1)
    with pytest.raises(InvalidArgument):
        karamata_moment([1.0], 1e-5)


def test_converse_at_two(lambda_table):
    r = converse_integral_check(2.0, 1e6, lambda_table)
    assert abs(r.lhs - r.rhs) <= r.tail_bound
    assert r.lhs == pytest.approx(0.5699609930945328 - 2, abs=1e-13)
    assert abs(r.lhs - (log_deriv_zeta_series(2, 1e-6).real - 2)) < 1e-5


def test_converse_identity(lambda_table):
    for s in (1.5, 2.0, 3.0):
        r = converse_integral_check(s, 1e6, lambda_table)
        assert abs(r.difference) <= r.tail_bound


def test_converse_refinement_is_exact(lambda_table):
    a = converse_integral_check(2.0, 1e5, lambda_table)
    b = converse_integral_check(2.0, 1e5, lambda_table, subdivisions=2)
    assert abs(a.rhs - b.rhs) < 1e-14


def test_converse_preconditions(lambda_table):
    with pytest.raises(InvalidArgument):
        converse_integral_check(1.1, 1e6, lambda_table)
    with pytest.raises(InvalidArgument):
        converse_integral_check(2.0, 2e6, lambda_table)


def test_psi_integral_small_case():
    # psi = log 2 on [2, 3), so int_2^3 psi t^{-3} dt = log 2 (1/8 - 1/18)
    value, pieces = psi_weighted_integral(2.0, 3.0, sieve_lambda(10))
    assert pieces == 1
    assert value == pytest.approx(math.log(2) * (1 / 8 - 1 / 18), rel=1e-15)


def test_corridor_tail_bound_decreases():
    assert corridor_tail_bound(2.0, 1e6) < corridor_tail_bound(2.0, 1e5)
    assert corridor_tail_bound(3.0, 1e6) < corridor_tail_bound(2.0, 1e6)


@settings(max_examples=20, deadline=None)
@given(
    st.lists(st.floats(min_value=-5, max_value=5), min_size=1, max_size=5),
    st.lists(st.floats(min_value=-5, max_value=5), min_size=1, max_size=5),
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
)
def test_karamata_linearity(g1, g2, c1, c2):
    n = max(len(g1), len(g2))
    g1 = g1 + [0.0] * (n - len(g1))
    g2 = g2 + [0.0] * (n - len(g2))
    x = 0.05
    m1, m2 = karamata_moment(g1, x), karamata_moment(g2, x)
    combo = karamata_moment([c1 * a + c2 * b for a, b in zip(g1, g2)], x)
    expect = c1 * m1.value + c2 * m2.value
    scale = sum(abs(c1 * a) + abs(c2 * b) for a, b in zip(g1, g2)) + 1
    assert combo.value == pytest.approx(expect, abs=1e-14 * scale)
    assert combo.limit == pytest.approx(c1 * m1.limit + c2 * m2.limit, abs=1e-14 * scale)
