"""Acceptance criteria 1-14, each at its stated tolerance.

Every test appends one PASS/FAIL line to RESULTS; conftest prints them in
the terminal summary, and running this file as a script prints them too.
"""
import math
import time

import numpy as np
import pytest

from hyc.carleson import carleson_norm
from hyc.cli import load_fixture
from hyc.consts import babenko_constant, conjugate_exponent, marcinkiewicz_optimum
from hyc.hy import hardy_line_check, hy_line_check, hy_lower_bound, hy_ratio, verify_eqnorm
from hyc.laplace import laplace_eval, taylor_bound_check, vertical_line_norm
from hyc.measure import Atom, HalfPlaneMeasure, random_measure
from hyc.poisson_cz import (
    RealStepFunction,
    UHPMeasure,
    coverage_check,
    cz_decompose,
    cz_invariants_check,
    random_real_steps,
    shadow_sidelength,
    shadow_squares,
    strong_type_check,
    weak_type_check,
)
from hyc.stepfun import gaussian_steps, lp_norm, modulate, random_steps, scale

from .oracles.grid_carleson import grid_carleson_norm

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def eqnorm_suite():
    rng = np.random.default_rng(404)
    return [random_measure(rng, max_atoms=8, max_boxes=2) for _ in range(20)]


_EQNORM_CACHE: dict = {}


def eqnorm_reports():
    if not _EQNORM_CACHE:
        for i, mu in enumerate(eqnorm_suite()):
            for p in (1.25, 1.5, 2.0):
                _EQNORM_CACHE[(i, p)] = verify_eqnorm(mu, p, 60, seed=1000 + i, tol=1e-6)
    return _EQNORM_CACHE


def random_uhp_atoms(rng, k_max=6):
    k = int(rng.integers(1, k_max + 1))
    return UHPMeasure(atoms=tuple((float(rng.uniform(-5, 5)), float(rng.uniform(0.05, 3)), float(rng.uniform(0.1, 2)))
                                  for _ in range(k)))


def test_c01_marcinkiewicz_optimum():
    r0, m = marcinkiewicz_optimum()
    res = abs(r0 * (r0 - 1) * math.log(2) - 1)
    ok = abs(r0 - 1.80104) <= 1e-4 and abs(m - 7.83495) <= 1e-4 and res < 1e-12
    record(1, "Marcinkiewicz optimum", ok, f"r0={r0:.10f} m={m:.10f} residual={res:.1e}")


def test_c02_dirac_sharpness():
    ok, parts = True, []
    for p in (1.25, 1.5, 2.0):
        q = conjugate_exponent(p)
        mu = load_fixture("dirac_over_pprime.json", p)
        carl = carleson_norm(mu)
        est = hy_lower_bound(mu, p, 10_000, seed=2, carleson=carl)
        good = abs(carl.norm - q) <= 1e-12 * q and est.max_ratio <= 1 + 1e-6
        ok &= good
        parts.append(f"p={p}: C={carl.norm:.15g} best={est.lower_bound:.6f}")
    record(2, "Dirac sharpness", ok, "; ".join(parts))


def test_c03_dy_sharpness():
    t0 = time.perf_counter()
    mu = load_fixture("truncated_dy.json")
    C = carleson_norm(mu).norm
    ratios = []
    for sigma in np.geomspace(0.5, 4.0, 5):
        u = gaussian_steps(30.0, float(sigma), 6.0 * float(sigma), 400)
        ratios.append(hy_ratio(mu, u, 2.0))
    elapsed = time.perf_counter() - t0
    two_pi = 2 * math.pi
    ok = abs(C - 1) <= 1e-12 and max(ratios) >= 0.8 * two_pi and max(ratios) <= two_pi * (1 + 1e-3) and elapsed <= 60
    record(3, "dy sharpness", ok,
           f"C={C:.15g} best/2pi={max(ratios) / two_pi:.6f} min/2pi={min(ratios) / two_pi:.6f} time={elapsed:.1f}s")


def test_c04_two_sided_equivalence():
    reps = eqnorm_reports()
    bad = [k for k, r in reps.items()
           if not all(c.passed for c in r.checks if c.name != "witness_yield")]
    worst_left = min(r.params["lower_bound"] / (r.params["carleson_norm"] / r.params["a1_bound"]) for r in reps.values())
    worst_right = max(r.max_observed_ratio / r.params["a2_bound"] for r in reps.values())
    record(4, "two-sided equivalence", not bad,
           f"{len(reps)} cases, failures={len(bad)}, min L/(C/A1)={worst_left:.3f}, max ratio/(A2 C)={worst_right:.2e}")


def test_c05_witness_yield():
    reps = eqnorm_reports()
    checks = [c for r in reps.values() for c in r.checks if c.name == "witness_yield"]
    bad = [c for c in checks if not c.passed]
    slack = min(c.lhs - c.rhs for c in checks)
    record(5, "witness yield", len(checks) == len(reps) and not bad,
           f"{len(checks)} witnesses, failures={len(bad)}, min(yield - bound)={slack:.3e}")


def test_c06_weak_type():
    rng = np.random.default_rng(606)
    worst_literal, worst_scaled, fails = 0.0, 0.0, 0
    for _ in range(50):
        f = random_real_steps(rng)
        mu = random_uhp_atoms(rng)
        lam = float(f.sup() * rng.uniform(0.05, 1.0))
        rep = weak_type_check(f, mu, lam)
        lit = rep.checks[0]
        fails += not lit.passed
        C = rep.params["carleson_norm"]
        worst_literal = max(worst_literal, lit.lhs / (C * f.l1()))
        worst_scaled = max(worst_scaled, rep.max_observed_ratio or 0.0)
    record(6, "weak type", fails == 0,
           f"50 triples, failures={fails}, max mu(E)/(C|f|_1)={worst_literal:.3f}, "
           f"max lambda mu(E)/(C|f|_1)={worst_scaled:.3f} (bound 10)")


def test_c07_strong_type():
    rng = np.random.default_rng(707)
    ps = (1.5, 2.0, 4.0)
    fails, worst = 0, 0.0
    for i in range(50):
        f = random_real_steps(rng)
        mu = random_uhp_atoms(rng)
        if i % 5 == 0:
            x0, y0 = float(rng.uniform(-3, 3)), float(rng.uniform(0, 1))
            mu = UHPMeasure(mu.atoms, ((x0, x0 + float(rng.uniform(0.2, 1.5)), y0, y0 + float(rng.uniform(0.2, 1.5)),
                                        float(rng.uniform(0.1, 1))),))
        rep = strong_type_check(f, mu, ps[i % 3], tol=1e-9)
        fails += not rep.passed
        worst = max(worst, rep.max_observed_ratio or 0.0)
    record(7, "strong type", fails == 0, f"50 triples, failures={fails}, max lhs/rhs={worst:.3e}")


def test_c08_cz_invariants():
    rng = np.random.default_rng(808)
    inv_fail, side_fail, worst_side = 0, 0, 0.0
    for _ in range(100):
        f = random_real_steps(rng)
        alpha = float(rng.uniform(0.05, 3.0))
        inv_fail += not cz_invariants_check(f, alpha).passed
        lam = 7 * alpha
        side = shadow_sidelength(shadow_squares(cz_decompose(f, alpha)))
        ratio = side / (f.l1() / lam)
        worst_side = max(worst_side, ratio)
        side_fail += not ratio < 10
    record(8, "CZ invariants", inv_fail == 0 and side_fail == 0,
           f"100 pairs, invariant failures={inv_fail}, "
           f"sidelength >= 10|f|_1/lambda in {side_fail} pairs (max ratio {worst_side:.3f}; the covering gives 21)")


def test_c09_coverage():
    rng = np.random.default_rng(909)
    fails, worst = 0, 0.0
    for i in range(20):
        f = random_real_steps(rng)
        lam = float(f.sup() * rng.uniform(0.3, 10.0))
        rep = coverage_check(f, lam, 10_000, seed=9000 + i)
        fails += not rep.passed
        worst = max(worst, rep.max_observed_ratio)
    record(9, "coverage", fails == 0, f"20 cases x 1e4 points, failures={fails}, max |g|/alpha={worst:.3f} (bound 6.5)")


def test_c10_hardy():
    rng = np.random.default_rng(1010)
    mu_dx = load_fixture("dx_on_axis.json")
    fails, worst = 0, 0.0
    for i in range(100):
        u = random_steps(rng)
        rep = hardy_line_check(u, (1.5, 2.0)[i % 2], mu_dx, tol=1e-6)
        fails += not rep.passed
        worst = max(worst, rep.max_observed_ratio)
    record(10, "Hardy inequality", fails == 0, f"100 functions, failures={fails}, max ratio={worst:.4f}")


def test_c11_hausdorff_young_line():
    rng = np.random.default_rng(1111)
    fails, worst, plancherel = 0, 0.0, 0.0
    for i in range(100):
        u = random_steps(rng)
        p = (1.25, 1.5, 2.0)[i % 3]
        rep = hy_line_check(u, p, tol=1e-6)
        fails += not rep.passed
        if p == 2.0:
            plancherel = max(plancherel, abs(rep.max_observed_ratio - 1.0))
        else:
            worst = max(worst, rep.max_observed_ratio)
    record(11, "Hausdorff-Young line", fails == 0 and plancherel <= 1e-6,
           f"100 functions, failures={fails}, max ratio (p<2)={worst:.4f}, max Plancherel rel err={plancherel:.1e}")


def test_c12_oracle_equivalence():
    rng = np.random.default_rng(1212)
    worst = 0.0
    ok = True
    for _ in range(20):
        n = int(rng.integers(1, 9))
        xs, ys, ws = rng.uniform(0.1, 2, n), rng.uniform(-2, 2, n), rng.uniform(0.1, 1, n)
        exact = carleson_norm(HalfPlaneMeasure(tuple(Atom(*t) for t in zip(xs, ys, ws)))).norm
        grid = grid_carleson_norm(xs, ys, ws)
        rel = abs(exact - grid) / exact
        worst = max(worst, rel)
        ok &= rel <= 0.02
    record(12, "oracle equivalence", ok, f"20 measures, max relative gap={worst:.2e}")


def test_c13_exact_identities():
    rng = np.random.default_rng(1313)
    worst = 0.0
    for _ in range(200):
        u = random_steps(rng, modulation_scale=1.0)
        p = float(rng.choice([1.25, 1.5, 2.0]))
        q = conjugate_exponent(p)
        h = float(np.exp(rng.uniform(-3, 3)))
        a = float(rng.uniform(-10, 10))
        z = rng.uniform(0, 3, 4) + 1j * rng.uniform(-10, 10, 4)
        v = laplace_eval(scale(u, h, p), z)
        ref = h ** (-1 / q) * laplace_eval(u, z / h)
        worst = max(worst, float(np.max(np.abs(v - ref) / np.maximum(1, np.abs(ref)))))
        w = laplace_eval(modulate(u, a), z)
        ref = laplace_eval(u, z - 1j * a)
        worst = max(worst, float(np.max(np.abs(w - ref) / np.maximum(1, np.abs(ref)))))
        n = lp_norm(u, p)
        worst = max(worst, abs(lp_norm(scale(u, h, p), p) - n) / n, abs(lp_norm(modulate(u, a), p) - n) / n)
    record(13, "exact identities", worst <= 1e-10, f"200 cases, max relative deviation={worst:.1e}")


def test_c14_taylor_bound():
    rep = taylor_bound_check(100_000, seed=14)
    record(14, "Taylor bound", rep.passed,
           f"1e5 samples, violations={rep.params['violations']}, max ratio={rep.max_observed_ratio:.6f}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
