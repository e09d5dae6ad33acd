import math

import numpy as np
import pytest

from hyc.carleson import carleson_norm
from hyc.consts import conjugate_exponent
from hyc.errors import DomainError, NotApplicableError
from hyc.hy import (
    hardy_line_check,
    hy_line_check,
    hy_lower_bound,
    hy_ratio,
    verify_eqnorm,
    witness_from_square,
    witness_yield,
)
from hyc.measure import Atom, BoundaryDensity, CarlesonSquare, DensityPiece, HalfPlaneMeasure, HorizontalDensity
from hyc.stepfun import box, gaussian_steps, lp_norm, modulate, random_steps


def dirac(x, y=0.0, w=1.0):
    return HalfPlaneMeasure((Atom(x, y, w),))


def test_hy_ratio_dirac_box():
    # |Lu(1/2)|^2 for the box of width sqrt2/2, height (sqrt2/2)^{-1/2}
    val = hy_ratio(dirac(0.5), box(math.sqrt(2) / 2, 2.0), 2.0)
    assert val == pytest.approx(0.5017159563555204, rel=1e-12)


def test_hy_ratio_domain():
    with pytest.raises(DomainError):
        hy_ratio(dirac(0.5), box(1.0, 3.0), 3.0)


def test_witness_shape():
    Q = CarlesonSquare(2.0, 0.5)
    u = witness_from_square(Q, 1.5)
    assert lp_norm(u, 1.5) == pytest.approx(1.0)
    assert u.modulation == 2.0
    assert u.breakpoints[-1] == pytest.approx(math.sqrt(2) / 3 / 0.5)


@pytest.mark.parametrize("p", [1.25, 1.5, 2.0])
def test_witness_yield_for_dirac(p):
    q = conjugate_exponent(p)
    mu = dirac(1 / q, 0.3)
    res = carleson_norm(mu)
    Q = res.witness
    r = hy_ratio(mu, witness_from_square(Q, p), p)
    assert r >= res.norm * witness_yield(p) - 1e-9


def test_modulation_covariance(rng):
    mu = HalfPlaneMeasure((Atom(0.4, 0.2, 1.0), Atom(1.0, -1.0, 0.5)))
    u = random_steps(rng)
    base = hy_ratio(mu, u, 1.5)
    assert hy_ratio(mu.shifted(2.5), modulate(u, 2.5), 1.5) == pytest.approx(base, rel=1e-10)


def test_lower_bound_prefix_monotone():
    mu = dirac(0.5, 0.0)
    small = hy_lower_bound(mu, 2.0, 30, seed=4)
    big = hy_lower_bound(mu, 2.0, 90, seed=4)
    assert big.history[:30] == small.history
    assert big.lower_bound >= small.lower_bound
    assert big.budget_used == 90


def test_lower_bound_deterministic():
    mu = dirac(0.5, 1.0)
    a = hy_lower_bound(mu, 1.5, 40, seed=9)
    b = hy_lower_bound(mu, 1.5, 40, seed=9)
    assert a.history == b.history


def test_dirac_lower_bound_at_most_one():
    for p in (1.25, 2.0):
        est = hy_lower_bound(dirac(1 / conjugate_exponent(p)), p, 300, seed=1)
        assert est.lower_bound <= 1.0 + 1e-9
        assert est.lower_bound > 0.5


def test_gaussian_on_dy_near_two_pi():
    mu = HalfPlaneMeasure((BoundaryDensity((DensityPiece(-50.0, 50.0, 1.0),)),))
    r = hy_ratio(mu, gaussian_steps(30.0, 1.0, 6.0, 200), 2.0)
    assert 0.99 * 2 * math.pi <= r <= 2 * math.pi * (1 + 1e-6)


def test_verify_eqnorm():
    rep = verify_eqnorm(dirac(1 / 3), 1.5, 30, seed=0)
    assert rep.passed
    assert rep.params["carleson_norm"] == pytest.approx(3.0)


def test_verify_eqnorm_infinite():
    with pytest.raises(NotApplicableError):
        verify_eqnorm(dirac(0.0), 1.5, 10, seed=0)


def test_line_checks(rng):
    mu_dx = HalfPlaneMeasure((HorizontalDensity(0.0, 0.0, 1e6, 1.0),))
    for p in (1.5, 2.0):
        u = random_steps(rng)
        assert hy_line_check(u, p).passed
        assert hardy_line_check(u, p, mu_dx).passed


def test_hardy_box_value():
    # Lu(x) = (1 - e^{-x})/x for the unit box; int_0^inf of its square is 2 ln 2
    mu_dx = HalfPlaneMeasure((HorizontalDensity(0.0, 0.0, 1e6, 1.0),))
    rep = hardy_line_check(box(1.0, 2.0), 2.0, mu_dx)
    lhs2 = rep.checks[0].lhs ** 2
    # the analytic tail beyond X is an over-estimate, so lhs is bracketed
    assert 2 * math.log(2) - 1e-10 <= lhs2 <= 2 * math.log(2) + rep.params["tail_bound"] + 1e-10


def test_dirac_holder_bound(rng):
    for p in (1.25, 1.5, 2.0):
        mu = dirac(1 / conjugate_exponent(p))
        for _ in range(20):
            assert hy_ratio(mu, random_steps(rng), p) <= 1 + 1e-12


def test_unit_square_witness_epsilon():
    u = witness_from_square(CarlesonSquare(0.0, 1.0), 2.0)
    assert u.breakpoints.tolist() == pytest.approx([0.0, math.sqrt(2) / 2])
