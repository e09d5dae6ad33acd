"""Empirical Hausdorff-Young norms of measures on the closed right half-plane.

``N_HY(mu)`` is the p'-th power of the best constant in
``||Lu||_{L^{p'}(mu)} <= C ||u||_p``. It is not computable exactly; what is
computed here are ratios ``||Lu||^{p'}_{L^{p'}(mu)} / ||u||_p^{p'}`` for
explicit u (each one a certified lower bound for N_HY), a search over such
u, and the two-sided comparison with the Carleson norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .carleson import CarlesonResult, carleson_norm, witness_square
from .consts import a1_bound, a2_bound, babenko_constant, conjugate_exponent, hardy_constant
from .errors import DomainError, NotApplicableError
from .laplace import laplace_eval, panel_width, vertical_line_norm
from .measure import (
    CarlesonSquare,
    HalfPlaneMeasure,
    HorizontalDensity,
    integrate_power,
    measure_square,
)
from .report import VerificationReport
from .stepfun import StepFunction, box, gaussian_steps, lp_norm, modulate, random_steps, scale

SQRT2 = math.sqrt(2.0)


def _check_p(p: float) -> float:
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise DomainError(f"Hausdorff-Young norms are defined here for 1 < p <= 2, got {p}")
    return p


def quadrature_scale(u: StepFunction) -> float:
    """Initial panel size for integrating |Lu|^q against densities."""
    return min(panel_width(u), 4.0 / float(u.breakpoints[-1]))


def hy_ratio(mu: HalfPlaneMeasure, u: StepFunction, p: float, tol: float = 1e-9) -> float:
    """||Lu||_{L^{p'}(mu)}^{p'} / ||u||_p^{p'}."""
    p = _check_p(p)
    if u.is_null():
        raise DomainError("hy_ratio needs a non-null test function")
    q = conjugate_exponent(p)
    norm_q = lp_norm(u, p) ** q
    integral = integrate_power(mu, lambda z: laplace_eval(u, z), q, tol * norm_q, quadrature_scale(u))
    return integral / norm_q


def witness_from_square(Q: CarlesonSquare, p: float) -> StepFunction:
    """Normalised box of width sqrt(2)/(p' h), modulated by the square's offset.

    Its transform has modulus >= h^{-1/p'} b on all of Q, with
    b^{p'} >= sqrt(2)/(4 p').
    """
    p = _check_p(p)
    q = conjugate_exponent(p)
    eps = SQRT2 / q
    return modulate(scale(box(eps, p), Q.h, p), Q.a)


def witness_yield(p: float) -> float:
    """Guaranteed value sqrt(2)/(4 p') of hy_ratio * h / mu(Q) for the witness of Q."""
    return SQRT2 / (4.0 * conjugate_exponent(_check_p(p)))


@dataclass
class HYEstimate:
    p: float
    lower_bound: float
    witness: Optional[StepFunction]
    budget_used: int
    seed: int
    max_ratio: float = 0.0
    source: str = ""
    history: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "lower_bound": self.lower_bound,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "budget_used": self.budget_used,
            "seed": self.seed,
            "max_ratio": self.max_ratio,
            "source": self.source,
        }


def _length_scale(mu: HalfPlaneMeasure, carl: CarlesonResult) -> float:
    if isinstance(carl.witness, CarlesonSquare):
        return carl.witness.h
    x0, x1, y0, y1 = mu.bounds()
    return max(x1, y1 - y0, 1e-3)


def _structured_candidates(mu: HalfPlaneMeasure, p: float, carl: CarlesonResult) -> Iterator[tuple[str, StepFunction]]:
    x0, x1, y0, y1 = mu.bounds()
    diam = max(x1, y1 - y0)
    L = _length_scale(mu, carl)
    Q = witness_square(carl, mu)
    yield "carleson_witness", witness_from_square(Q, p)
    # log-spaced squares centred on the measure's ordinates
    centres = [0.5 * (y0 + y1), Q.a + 0.5 * Q.h]
    centres += [a.y for a in mu.atoms[:8]]
    centres = sorted(set(round(c, 12) for c in centres))
    h_grid = np.geomspace(L / 16.0, max(diam, L) * 2.0, 9)
    for h in h_grid:
        for c in centres:
            yield "square_grid", witness_from_square(CarlesonSquare(c - 0.5 * h, float(h)), p)
    # Gaussian bumps translated along R+ and modulated to the centres
    for sigma in np.geomspace(0.1 / L, 10.0 / L, 7):
        for shift in (6.0, 12.0):
            g = gaussian_steps(shift * sigma, sigma, 6.0 * sigma, 32)
            for c in centres[:3]:
                yield "gaussian", modulate(g, c)


def _perturbations(u: StepFunction) -> Iterator[StepFunction]:
    """Deterministic coordinate moves: scale one value or one width by 2, 1/2, 1.1, 0.9."""
    factors = (2.0, 0.5, 1.1, 0.9)
    widths = u.widths
    for k in range(u.n):
        for f in factors:
            c = u.values.copy()
            c[k] *= f
            yield StepFunction(u.breakpoints, c, u.modulation)
    for k in range(u.n):
        for f in factors:
            w = widths.copy()
            w[k] *= f
            t = u.breakpoints[0] + np.concatenate(([0.0], np.cumsum(w)))
            if np.all(np.diff(t) > 0.0) and np.all(np.isfinite(t)):
                yield StepFunction(t, u.values, u.modulation)


def hy_lower_bound(
    mu: HalfPlaneMeasure,
    p: float,
    budget: int,
    seed: int,
    tol: float = 1e-9,
    carleson: Optional[CarlesonResult] = None,
) -> HYEstimate:
    """Largest hy_ratio found within ``budget`` evaluations.

    Candidates come in a fixed order: the box witness of the Carleson
    square, witnesses of a log-spaced grid of squares, translated and
    modulated Gaussian bumps, then seeded random step functions improved by
    coordinate ascent. The evaluation sequence for a budget is a prefix of
    the sequence for any larger budget, so the bound is monotone in it.
    """
    p = _check_p(p)
    if budget < 1:
        raise DomainError("budget must be >= 1")
    if mu.is_empty():
        return HYEstimate(p, 0.0, None, 0, seed, 0.0, "empty")
    carl = carleson if carleson is not None else carleson_norm(mu)
    rng = np.random.default_rng(seed)
    L = _length_scale(mu, carl)
    x0, x1, y0, y1 = mu.bounds()

    best, best_u, best_src = -1.0, None, ""
    history: list[float] = []

    def evaluate(src: str, u: StepFunction) -> float:
        nonlocal best, best_u, best_src
        r = hy_ratio(mu, u, p, tol)
        history.append(r)
        if r > best:
            best, best_u, best_src = r, u, src
        return r

    for src, u in _structured_candidates(mu, p, carl):
        if len(history) >= budget:
            break
        evaluate(src, u)

    while len(history) < budget:
        u = random_steps(rng, max_pieces=5, t_scale=1.0 / L, complex_values=True)
        u = modulate(u, float(rng.uniform(y0, y1)) if y1 > y0 else y0)
        cur = evaluate("coordinate_ascent", u)
        improved = True
        while improved and len(history) < budget:
            improved = False
            for v in _perturbations(u):
                if len(history) >= budget:
                    break
                r = evaluate("coordinate_ascent", v)
                if r > cur:
                    u, cur, improved = v, r, True
                    break

    return HYEstimate(p, best, best_u, len(history), seed, max(history), best_src, history)


def verify_eqnorm(
    mu: HalfPlaneMeasure,
    p: float,
    budget: int,
    seed: int,
    tol: float = 1e-6,
) -> VerificationReport:
    """Both sides of ||mu||_C / A1(p) <= N_HY(mu) <= A2(p) ||mu||_C on sampled evidence.

    Left side: the found lower bound must reach ||mu||_C / (2^{3/2} p').
    Right side: no evaluated ratio may exceed 160 pi sqrt(e/p') ||mu||_C.
    """
    p = _check_p(p)
    carl = carleson_norm(mu)
    if math.isinf(carl.norm):
        raise NotApplicableError("measure has infinite Carleson norm")
    C = carl.norm
    est = hy_lower_bound(mu, p, budget, seed, carleson=carl)
    rep = VerificationReport("eqnorm", seed, {"p": p, "budget": budget, "carleson_norm": C,
                                              "carleson_method": carl.method, "carleson_gap": carl.gap,
                                              "lower_bound": est.lower_bound,
                                              "a1_bound": a1_bound(p), "a2_bound": a2_bound(p)})
    rep.add_ge("left_lower_bound_ge_C_over_A1", est.lower_bound, C / a1_bound(p), tol)
    rep.add("right_max_ratio_le_A2_C", est.max_ratio, a2_bound(p) * C, tol)
    if C > 0.0:
        rep.observe_ratio(est.max_ratio / C)
        Q = witness_square(carl, mu)
        r = hy_ratio(mu, witness_from_square(Q, p), p)
        rep.add_ge("witness_yield", r, measure_square(mu, Q) / Q.h * witness_yield(p), tol)
    return rep


def hardy_line_check(u: StepFunction, p: float, mu_dx: HalfPlaneMeasure, tol: float = 1e-6) -> VerificationReport:
    """||Lu||_{L^{p'}(R+)} <= (2 pi / p')^{1/p'} ||u||_p along the positive real axis.

    ``mu_dx`` is a truncation dx on [0, X] of the real half-axis; the rest of
    the axis is closed with |Lu(x)| <= K/x, added to the left-hand side.
    """
    p = _check_p(p)
    comps = mu_dx.components
    if len(comps) != 1 or not isinstance(comps[0], HorizontalDensity):
        raise DomainError("expected a single horizontal density along the real axis")
    seg = comps[0]
    if seg.y != 0.0 or seg.x0 != 0.0 or seg.rho != 1.0:
        raise DomainError("expected dx on [0, X] at y = 0 with unit density")
    q = conjugate_exponent(p)
    X = seg.x1
    K = float(np.sum(np.abs(u.jumps())))
    integral = integrate_power(mu_dx, lambda z: laplace_eval(u, z), q, 1e-12, quadrature_scale(u))
    tail = K ** q * X ** (1.0 - q) / (q - 1.0)
    lhs = (integral + tail) ** (1.0 / q)
    rhs = hardy_constant(p) * lp_norm(u, p)
    rep = VerificationReport("hardy", None, {"p": p, "X": X, "tail_bound": tail})
    rep.add("hardy_inequality", lhs, rhs, tol)
    rep.observe_ratio(lhs / rhs)
    return rep


def hy_line_check(u: StepFunction, p: float, tol: float = 1e-6) -> VerificationReport:
    """||Lu(i.)||_{L^{p'}(R)} <= B(p) ||u||_p on the imaginary axis."""
    p = _check_p(p)
    q = conjugate_exponent(p)
    lhs = vertical_line_norm(u, 0.0, q, tol)
    rhs = babenko_constant(p) * lp_norm(u, p)
    rep = VerificationReport("hy_line", None, {"p": p})
    rep.add("hausdorff_young_line", lhs, rhs, tol)
    rep.observe_ratio(lhs / rhs)
    return rep
