"""Closed-form constants: conjugate exponents, the Babenko-Beckner and Hardy
constants, the interpolation bound M(p) and the two-sided envelope A1/A2."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ExponentPair:
    p: float
    p_conj: float

    @classmethod
    def from_p(cls, p: float) -> "ExponentPair":
        return cls(float(p), conjugate_exponent(p))


def _check_finite(p: float) -> float:
    p = float(p)
    if not math.isfinite(p):
        raise DomainError(f"exponent must be finite, got {p!r}")
    return p


def conjugate_exponent(p: float) -> float:
    """Return p' = p/(p-1) for 1 < p < inf."""
    p = _check_finite(p)
    if p <= 1.0:
        raise DomainError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1.0)


def babenko_constant(p: float) -> float:
    """Sharp Hausdorff-Young constant for the transform u -> int u(t) e^{-it xi} dt.

    B(p) = (2 pi)^{1/p'} (p^{1/p} / p'^{1/p'})^{1/2}, with B(1) = 1 as the
    p' -> inf limit.
    """
    p = _check_finite(p)
    if not 1.0 <= p <= 2.0:
        raise DomainError(f"babenko_constant needs 1 <= p <= 2, got {p}")
    if p == 1.0:
        return 1.0
    q = conjugate_exponent(p)
    log_b = math.log(2.0 * math.pi) / q + 0.5 * (math.log(p) / p - math.log(q) / q)
    return math.exp(log_b)


def babenko_power(p: float) -> float:
    """B(p)^{p'} = 2 pi p^{p'/(2p)} p'^{-1/2}; the value of N_HY for Lebesgue measure dy."""
    q = conjugate_exponent(p)
    if not p <= 2.0:
        raise DomainError(f"babenko_power needs 1 < p <= 2, got {p}")
    return 2.0 * math.pi * math.exp(q / (2.0 * p) * math.log(p)) / math.sqrt(q)


def titchmarsh_constant(p: float) -> float:
    """The interpolation bound (2 pi)^{1/p'} >= B(p)."""
    p = _check_finite(p)
    if not 1.0 <= p <= 2.0:
        raise DomainError(f"titchmarsh_constant needs 1 <= p <= 2, got {p}")
    if p == 1.0:
        return 1.0
    return (2.0 * math.pi) ** (1.0 / conjugate_exponent(p))


def hardy_constant(p: float) -> float:
    """Norm bound (2 pi / p')^{1/p'} of the Laplace transform L^p(R+) -> L^{p'}(R+)."""
    p = _check_finite(p)
    if not 1.0 < p <= 2.0:
        raise DomainError(f"hardy_constant needs 1 < p <= 2, got {p}")
    q = conjugate_exponent(p)
    return (2.0 * math.pi / q) ** (1.0 / q)


def _interp_objective(r: float) -> float:
    return r * (r - 1.0) * LN2 - 1.0


def marcinkiewicz_optimum(tol: float = 1e-15, max_iter: int = 100) -> tuple[float, float]:
    """Minimise r -> 2^r r/(r-1) over r > 1.

    The stationarity condition is r(r-1) ln 2 = 1; it is solved by Newton's
    method safeguarded by bisection on the bracket [1.5, 2.5]. Returns
    ``(r0, m)`` with ``m = 2^{r0} r0 / (r0 - 1)``.
    """
    lo, hi = 1.5, 2.5
    f_lo, f_hi = _interp_objective(lo), _interp_objective(hi)
    assert f_lo < 0.0 < f_hi
    r = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = _interp_objective(r)
        if f == 0.0:
            break
        if f < 0.0:
            lo = r
        else:
            hi = r
        step = f / ((2.0 * r - 1.0) * LN2)
        r_new = r - step
        if not lo < r_new < hi:
            r_new = 0.5 * (lo + hi)
        if abs(r_new - r) <= tol * r:
            r = r_new
            break
        r = r_new
    m = 2.0 ** r * r / (r - 1.0)
    return r, m


def interpolation_objective(r: float) -> float:
    """2^r r/(r-1), the quantity minimised by :func:`marcinkiewicz_optimum`."""
    r = _check_finite(r)
    if r <= 1.0:
        raise DomainError(f"needs r > 1, got {r}")
    return 2.0 ** r * r / (r - 1.0)


def m_bound(p: float) -> float:
    """Rounded strong-type constant: 40 p' for 1 < p < 2 and 79 for p >= 2."""
    p = _check_finite(p)
    if p <= 1.0:
        raise DomainError(f"m_bound needs p > 1, got {p}")
    if p < 2.0:
        return 40.0 * conjugate_exponent(p)
    return 79.0


def _check_hy_range(p: float) -> float:
    p = _check_finite(p)
    if not 1.0 < p <= 2.0:
        raise DomainError(f"needs 1 < p <= 2, got {p}")
    return p


def a1_bound(p: float) -> float:
    """Upper bound 2^{3/2} p' for A1(p) in ||mu||_C / A1 <= N_HY."""
    p = _check_hy_range(p)
    return 2.0 ** 1.5 * conjugate_exponent(p)


def a2_bound(p: float) -> float:
    """Upper bound 160 pi sqrt(e/p') for A2(p) in N_HY <= A2 ||mu||_C."""
    p = _check_hy_range(p)
    return 160.0 * math.pi * math.sqrt(math.e / conjugate_exponent(p))


def constants_table(p: float) -> dict[str, float]:
    """Every named constant at exponent p (used by the CLI)."""
    r0, m = marcinkiewicz_optimum()
    q = conjugate_exponent(p)
    return {
        "p": float(p),
        "p_conj": q,
        "babenko": babenko_constant(p),
        "babenko_power": babenko_power(p),
        "hardy": hardy_constant(p),
        "m_bound_p": m_bound(p),
        "m_bound_p_conj": m_bound(q),
        "a1_bound": a1_bound(p),
        "a2_bound": a2_bound(p),
        "r0": r0,
        "m": m,
    }
