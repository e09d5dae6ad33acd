import math

import pytest
from hypothesis import given, strategies as st

from hyc.consts import (
    ExponentPair,
    a1_bound,
    a2_bound,
    babenko_constant,
    babenko_power,
    conjugate_exponent,
    constants_table,
    hardy_constant,
    interpolation_objective,
    m_bound,
    marcinkiewicz_optimum,
    titchmarsh_constant,
)
from hyc.errors import DomainError

# 30-digit evaluations of the closed forms, computed before the build
B_ORACLE = {
    4 / 3: 1.482994343071657,
    1.25: 1.344320986146816,
    1.5: 1.758882522023610,
    2.0: 2.5066282746310002,
}


def test_conjugate_examples():
    assert conjugate_exponent(2) == 2
    assert conjugate_exponent(1.5) == pytest.approx(3.0, rel=1e-15)
    assert conjugate_exponent(4 / 3) == pytest.approx(4.0, rel=1e-14)


@pytest.mark.parametrize("p", [1.0, 0.5, -2.0, float("nan"), float("inf")])
def test_conjugate_domain(p):
    with pytest.raises(DomainError):
        conjugate_exponent(p)


@given(st.floats(min_value=1.001, max_value=100.0))
def test_conjugate_involution(p):
    assert conjugate_exponent(conjugate_exponent(p)) == pytest.approx(p, rel=1e-12)


@given(st.floats(min_value=1.001, max_value=100.0))
def test_exponent_pair_reciprocals(p):
    e = ExponentPair.from_p(p)
    assert abs(1 / e.p + 1 / e.p_conj - 1) <= 1e-14


@pytest.mark.parametrize("p,expected", sorted(B_ORACLE.items()))
def test_babenko_oracle(p, expected):
    assert babenko_constant(p) == pytest.approx(expected, rel=1e-13)


def test_babenko_endpoints():
    assert babenko_constant(1.0) == 1.0
    assert babenko_constant(2.0) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)
    with pytest.raises(DomainError):
        babenko_constant(2.5)


@given(st.floats(min_value=1.0, max_value=2.0))
def test_babenko_below_titchmarsh(p):
    assert babenko_constant(p) <= titchmarsh_constant(p) * (1 + 1e-14)


@given(st.floats(min_value=1.01, max_value=2.0))
def test_babenko_power_matches_closed_form(p):
    q = conjugate_exponent(p)
    assert babenko_power(p) == pytest.approx(babenko_constant(p) ** q, rel=1e-11)


def test_babenko_power_at_two():
    assert babenko_power(2.0) == pytest.approx(2 * math.pi, rel=1e-15)


def test_hardy_constant_values():
    assert hardy_constant(2.0) == pytest.approx(1.772453850905516, rel=1e-14)
    # (2 pi / 3)^{1/3}
    assert hardy_constant(1.5) == pytest.approx(1.279438861785009, rel=1e-14)


def test_marcinkiewicz_optimum():
    r0, m = marcinkiewicz_optimum()
    assert r0 == pytest.approx(1.8010361412693205, abs=1e-13)
    assert m == pytest.approx(7.834949806577477, abs=1e-12)
    assert abs(r0 * (r0 - 1) * math.log(2) - 1) < 1e-12
    assert m == pytest.approx(interpolation_objective(r0), rel=1e-15)


def test_marcinkiewicz_is_minimum():
    r0, m = marcinkiewicz_optimum()
    for r in (1.5, 1.7, 1.79, 1.81, 1.9, 2.2):
        assert interpolation_objective(r) > m


def test_m_bound_branches():
    assert m_bound(1.5) == pytest.approx(120.0)
    assert m_bound(2.0) == 79.0
    assert m_bound(4.0) == 79.0
    assert m_bound(10.0) == 79.0
    with pytest.raises(DomainError):
        m_bound(1.0)


def test_a_bounds():
    assert a1_bound(2.0) == pytest.approx(5.656854249492380, rel=1e-15)
    assert a2_bound(2.0) == pytest.approx(586.0060482697904, rel=1e-14)
    for p in (1.1, 1.5, 2.0):
        assert a1_bound(p) / conjugate_exponent(p) == pytest.approx(2 ** 1.5, rel=1e-15)


def test_constants_table_keys():
    t = constants_table(2.0)
    assert t["r0"] == pytest.approx(1.80104, abs=1e-5)
    assert t["m"] == pytest.approx(7.83495, abs=1e-5)
    assert t["babenko_power"] == pytest.approx(2 * math.pi)
