import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyc.carleson import CarlesonLimit, carleson_norm, rn_bound_check, square_ratio, witness_square
from hyc.measure import (
    Atom,
    BoundaryDensity,
    BoxDensity,
    DensityPiece,
    HalfPlaneMeasure,
    HorizontalDensity,
    measure_square,
)

from .oracles.grid_carleson import grid_carleson_norm


def atoms(*triples):
    return HalfPlaneMeasure(tuple(Atom(*t) for t in triples))


def test_dirac():
    res = carleson_norm(atoms((0.5, 0.0, 1.0)))
    assert res.norm == pytest.approx(2.0, rel=1e-14)
    assert res.witness.h == pytest.approx(0.5)


@pytest.mark.parametrize("p", [1.25, 1.5, 2.0])
def test_dirac_over_pprime(p):
    q = p / (p - 1)
    assert carleson_norm(atoms((1 / q, 0.0, 1.0))).norm == pytest.approx(q, rel=1e-12)


def test_boundary_atom_is_infinite():
    res = carleson_norm(atoms((0.0, 1.0, 1.0)))
    assert math.isinf(res.norm)
    assert isinstance(res.witness, CarlesonLimit)


def test_truncated_dy():
    mu = HalfPlaneMeasure((BoundaryDensity((DensityPiece(-50.0, 50.0, 1.0),)),))
    assert carleson_norm(mu).norm == pytest.approx(1.0, abs=1e-12)


def test_two_far_atoms():
    res = carleson_norm(atoms((1.0, 0.0, 1.0), (1.0, 10.0, 1.0)))
    assert res.norm == pytest.approx(1.0)


def test_two_close_atoms():
    # both fit in a square of side 1 at height 0..1
    res = carleson_norm(atoms((1.0, 0.0, 1.0), (1.0, 1.0, 1.0)))
    assert res.norm == pytest.approx(2.0)


def test_box_density_half_plane_strip():
    # density 1 on [0,1]^2: ratio h for h <= 1, 1/h for h >= 1
    mu = HalfPlaneMeasure((BoxDensity(0.0, 1.0, 0.0, 1.0, 1.0),))
    res = carleson_norm(mu)
    assert res.norm == pytest.approx(1.0, abs=res.tol + 1e-12)


def test_horizontal_segment():
    mu = HalfPlaneMeasure((HorizontalDensity(0.0, 1.0, 3.0, 2.0),))
    # square of side h >= 3 catches mass 4 -> 4/3; larger squares do worse
    res = carleson_norm(mu)
    assert res.norm == pytest.approx(4 / 3, abs=res.tol + 1e-12)


def test_witness_attains_norm(rng):
    for _ in range(5):
        mu = atoms(*[(rng.uniform(0.1, 2), rng.uniform(-2, 2), rng.uniform(0.1, 1)) for _ in range(6)])
        res = carleson_norm(mu)
        Q = witness_square(res, mu)
        assert measure_square(mu, Q) / Q.h == pytest.approx(res.norm, rel=1e-12)


def test_square_ratio_vectorised():
    mu = atoms((0.5, 0.0, 1.0))
    r = square_ratio(mu, np.array([0.0, -0.25]), np.array([0.5, 1.0]))
    assert r.tolist() == [2.0, 1.0]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exact_matches_grid_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    xs, ys, ws = rng.uniform(0.1, 2, n), rng.uniform(-2, 2, n), rng.uniform(0.1, 1, n)
    exact = carleson_norm(atoms(*zip(xs, ys, ws))).norm
    grid = grid_carleson_norm(xs, ys, ws, dh=0.01, da=0.005)
    assert grid <= exact * (1 + 1e-12)
    assert grid >= exact * 0.95


def test_branch_and_bound_agrees_with_exact_on_atoms(rng):
    mu = atoms(*[(rng.uniform(0.1, 2), rng.uniform(-2, 2), rng.uniform(0.1, 1)) for _ in range(5)])
    exact = carleson_norm(mu, method="exact").norm
    bb = carleson_norm(mu, method="branch_and_bound")
    assert bb.norm == pytest.approx(exact, abs=bb.tol + 1e-12)


def test_rn_bound():
    mu = HalfPlaneMeasure((BoundaryDensity((DensityPiece(0.0, 1.0, 3.0), DensityPiece(1.0, 2.0, 0.5))),
                           Atom(1.0, 0.0, 0.1)))
    rep = rn_bound_check(mu)
    assert rep.passed


def test_empty_measure():
    assert carleson_norm(HalfPlaneMeasure(())).norm == 0.0


def test_dy_density_bound():
    mu = HalfPlaneMeasure((BoundaryDensity((DensityPiece(-50.0, 50.0, 1.0),)),))
    rep = rn_bound_check(mu)
    assert rep.passed
    assert rep.checks[0].lhs == pytest.approx(1.0)


@pytest.mark.parametrize("p", [1.25, 2.0])
def test_dirac_witness_side(p):
    q = p / (p - 1)
    res = carleson_norm(atoms((1 / q, 0.0, 1.0)))
    assert res.witness.h == pytest.approx(1 / q, rel=1e-14)
