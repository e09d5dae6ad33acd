"""Laplace transform of step functions on the closed right half-plane.

Every transform is assembled from the entire kernel ``phi(w) = (1 - e^{-w})/w``,
evaluated by a short Taylor series near its removable singularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import sici

from .errors import DomainError, TailDivergenceError
from .quadrature import integrate_1d, uniform_edges
from .report import VerificationReport
from .stepfun import StepFunction

PHI_SERIES_RADIUS = 1e-3
# 1 - w/2 + w^2/6 - w^3/24 + w^4/120
_PHI_COEFFS = (1.0, -1.0 / 2.0, 1.0 / 6.0, -1.0 / 24.0, 1.0 / 120.0)
_MAX_BLOCK = 1 << 21


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("half-plane point must be finite")
        if self.x < 0.0:
            raise DomainError(f"Re z must be >= 0, got {self.x}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


Point = Union[complex, float, HalfPlanePoint, np.ndarray]


def _as_complex(z: Point) -> np.ndarray:
    if isinstance(z, HalfPlanePoint):
        return np.asarray(z.z)
    return np.asarray(z, dtype=complex)


def phi(w):
    """(1 - e^{-w})/w, with phi(0) = 1."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < PHI_SERIES_RADIUS
    ws = w[small]
    acc = np.full(ws.shape, _PHI_COEFFS[-1], dtype=complex)
    for c in _PHI_COEFFS[-2::-1]:
        acc = acc * ws + c
    out[small] = acc
    wb = w[~small]
    out[~small] = -np.expm1(-wb) / wb
    return out if out.ndim else complex(out)


def taylor_remainder(w):
    """e^{-w} - 1 + w, free of cancellation for small |w|."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 0.5
    ws = w[small]
    # sum_{k>=2} (-w)^k / k!, 24 terms reach double precision for |w| < 0.5
    term = ws * ws / 2.0
    acc = term.copy()
    for k in range(3, 27):
        term = term * (-ws) / k
        acc = acc + term
    out[small] = acc
    wb = w[~small]
    out[~small] = np.expm1(-wb) + wb
    return out if out.ndim else complex(out)


def laplace_eval(u: StepFunction, z: Point):
    """Lu(z) = int_0^inf u(t) e^{-zt} dt for Re z >= 0 (scalar or array z)."""
    zc = _as_complex(z)
    if np.any(zc.real < 0.0):
        raise DomainError("Laplace transform is only evaluated on Re z >= 0")
    scalar = zc.ndim == 0
    w = (zc - 1j * u.modulation).ravel()
    t0 = u.breakpoints[:-1]
    dt = u.widths
    c = u.values
    out = np.empty(w.shape, dtype=complex)
    block = max(1, _MAX_BLOCK // max(1, u.n))
    for s in range(0, w.size, block):
        wb = w[s:s + block, None]
        terms = c * dt * np.exp(-wb * t0) * phi(wb * dt)
        out[s:s + block] = terms.sum(axis=1)
    if scalar:
        return complex(out[0])
    return out.reshape(zc.shape)


def laplace_modulus_power(u: StepFunction, s: float):
    """Vectorised ``z -> |Lu(z)|^s`` for use as a quadrature integrand."""
    def f(z: np.ndarray) -> np.ndarray:
        return np.abs(laplace_eval(u, z)) ** s
    return f


def panel_width(u: StepFunction) -> float:
    """One period of the fastest oscillation of |Lu| along a vertical line."""
    return 2.0 * math.pi / u.support_width


def line_tail_constant(u: StepFunction, x: float) -> float:
    """K with |Lu(x + iy)| <= K / |y - a| for all y (a = modulation)."""
    return float(np.sum(np.abs(u.jumps()) * np.exp(-x * u.breakpoints)))


def _exact_square_tail(u: StepFunction, Y: float) -> float:
    """int_{|y - a| >= Y} |Lu(iy)|^2 dy in closed form (Re z = 0 only)."""
    d = u.jumps()
    t = u.breakpoints
    tau = np.abs(t[:, None] - t[None, :])
    coef = (d[:, None] * np.conj(d[None, :])).real
    si, _ = sici(Y * tau)
    c_int = np.cos(Y * tau) / Y - tau * (0.5 * math.pi - si)
    return float(2.0 * np.sum(coef * c_int))


def _line_integral(u: StepFunction, x: float, s: float, lo: float, hi: float, tol) -> float:
    f_abs = laplace_modulus_power(u, s)

    def f(y: np.ndarray) -> np.ndarray:
        return f_abs(x + 1j * y)

    return integrate_1d(f, uniform_edges(lo, hi, panel_width(u)), tol).value


def vertical_line_norm(
    u: StepFunction,
    x: float,
    s: float,
    tol: float = 1e-8,
    window: tuple[float, float] | None = None,
    max_half_window: float = 1e7,
) -> float:
    """(int |Lu(x + iy)|^s dy)^{1/s}, absolute error about ``tol``.

    The integral over a window around the modulation frequency is computed by
    adaptive quadrature. Beyond it the transform is bounded by K/|y - a|,
    whose integral closes the estimate; at x = 0, s = 2 the tail is instead
    summed exactly from the jump representation of Lu. With ``window`` the
    integral is restricted to ``[window[0], window[1]]`` and no tail is added.
    """
    x, s = float(x), float(s)
    if not x >= 0.0:
        raise DomainError(f"x must be >= 0, got {x}")
    if not s >= 1.0:
        raise DomainError(f"s must be >= 1, got {s}")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    if u.is_null():
        return 0.0

    def target(frac: float):
        # error in I = N^s that moves N by at most frac * tol
        return lambda I: frac * s * tol * max(I, 1e-300) ** ((s - 1.0) / s)

    if window is not None:
        lo, hi = map(float, window)
        return max(_line_integral(u, x, s, lo, hi, target(1.0)), 0.0) ** (1.0 / s)

    a = u.modulation
    K = line_tail_constant(u, x)
    exact_tail = s == 2.0 and x == 0.0
    if s == 1.0 and K > 0.0:
        raise TailDivergenceError("the K/|y| tail bound is not integrable for s = 1")
    width = panel_width(u)
    Y = 32.0 * width
    I_w = _line_integral(u, x, s, a - Y, a + Y, target(0.5))
    if exact_tail:
        return max(I_w + _exact_square_tail(u, Y), 0.0) ** (1.0 / s)
    while True:
        T = 2.0 * K ** s * Y ** (1.0 - s) / (s - 1.0)
        allowed = 0.5 * s * tol * max(I_w, 1e-300) ** ((s - 1.0) / s)
        if T / 2.0 <= allowed:
            return (I_w + T / 2.0) ** (1.0 / s)
        Y_need = 1.05 * (K ** s / ((s - 1.0) * allowed)) ** (1.0 / (s - 1.0))
        Y_new = max(2.0 * Y, Y_need)
        if Y_new > max_half_window * width:
            raise TailDivergenceError(
                f"window half-width {Y_new:.3g} needed for tol={tol:g} exceeds the cap"
            )
        band_tol = 0.125 * s * tol * max(I_w, 1e-300) ** ((s - 1.0) / s)
        I_w += _line_integral(u, x, s, a - Y_new, a - Y, band_tol)
        I_w += _line_integral(u, x, s, a + Y, a + Y_new, band_tol)
        Y = Y_new


def taylor_bound_check(n_samples: int, seed: int, radius: float = 10.0) -> VerificationReport:
    """Check |e^{-w} + w - 1| <= |w|^2 / 2 on sampled w with Re w >= 0, |w| <= radius."""
    if n_samples <= 0:
        raise DomainError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n_samples))
    theta = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, n_samples)
    w = r * np.exp(1j * theta)
    w = np.concatenate(([0.0, 2.0, 1j * radius, -1j * radius], w))
    lhs = np.abs(taylor_remainder(w))
    rhs = 0.5 * np.abs(w) ** 2
    violations = int(np.count_nonzero(lhs > rhs))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs, 0.0)
    rep = VerificationReport("taylor", seed, {"n_samples": int(n_samples), "radius": radius, "violations": violations})
    rep.add("taylor_remainder_max_ratio", float(ratio.max()), 1.0, passed=violations == 0)
    rep.observe_ratio(float(ratio.max()))
    return rep
