"""Modulated complex step functions on the positive half-line.

A :class:`StepFunction` is ``u(t) = c_k e^{iat}`` on ``[t_k, t_{k+1})`` and
zero beyond the last breakpoint. Norms and Laplace transforms of such
functions have closed forms, which is why they are the only test-function
class used by the toolkit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DomainError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StepFunction:
    breakpoints: np.ndarray
    values: np.ndarray
    modulation: float = 0.0

    def __post_init__(self) -> None:
        t = np.array(self.breakpoints, dtype=float).ravel()
        c = np.array(self.values, dtype=complex).ravel()
        if t.size != c.size + 1 or c.size < 1:
            raise DomainError("need n >= 1 values and n + 1 breakpoints")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(c)):
            raise DomainError("breakpoints and values must be finite")
        if t[0] < 0.0:
            raise DomainError("step functions live on t >= 0")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("breakpoints must be strictly increasing")
        if not math.isfinite(self.modulation):
            raise DomainError("modulation must be finite")
        object.__setattr__(self, "breakpoints", _frozen(t))
        object.__setattr__(self, "values", _frozen(c))
        object.__setattr__(self, "modulation", float(self.modulation))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def support_width(self) -> float:
        return float(self.breakpoints[-1] - self.breakpoints[0])

    def is_null(self) -> bool:
        return not np.any(self.values != 0)

    def jumps(self) -> np.ndarray:
        """Jumps ``d_j`` at each breakpoint (``d_0 = c_0``, ``d_n = -c_{n-1}``)."""
        c = self.values
        return np.concatenate(([c[0]], np.diff(c), [-c[-1]]))

    def jump_variation(self) -> float:
        """Sum of |jumps|; ``|Lu(w)| <= jump_variation / |w|`` on Re w >= 0."""
        return float(np.abs(self.jumps()).sum())

    def __call__(self, t: Any) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k = np.searchsorted(self.breakpoints, t, side="right") - 1
        inside = (k >= 0) & (k < self.n)
        out = np.zeros(t.shape, dtype=complex)
        out[inside] = self.values[k[inside]] * np.exp(1j * self.modulation * t[inside])
        return out

    def allclose(self, other: "StepFunction", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return (
            self.n == other.n
            and np.allclose(self.breakpoints, other.breakpoints, rtol=rtol, atol=atol)
            and np.allclose(self.values, other.values, rtol=rtol, atol=atol)
            and math.isclose(self.modulation, other.modulation, rel_tol=rtol, abs_tol=atol)
        )

    def to_json(self) -> dict:
        return {
            "breakpoints": [float(x) for x in self.breakpoints],
            "values": [[float(v.real), float(v.imag)] for v in self.values],
            "modulation": self.modulation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "StepFunction":
        try:
            bps = data["breakpoints"]
            vals = data["values"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"step function JSON is missing field {exc}") from None
        values = []
        for i, v in enumerate(vals):
            if isinstance(v, (int, float)):
                values.append(complex(v))
            elif isinstance(v, (list, tuple)) and len(v) == 2:
                values.append(complex(float(v[0]), float(v[1])))
            else:
                raise DomainError(f"values[{i}]: expected [re, im] pair, got {v!r}")
        if len(bps) != len(values) + 1:
            raise DomainError(
                f"breakpoints: expected {len(values) + 1} entries for {len(values)} values, got {len(bps)}"
            )
        return cls(np.asarray(bps, dtype=float), np.asarray(values), float(data.get("modulation", 0.0)))


def lp_norm(u: StepFunction, p: float) -> float:
    """L^p(R+) norm; ``p = inf`` gives the max modulus."""
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"lp_norm needs p >= 1, got {p}")
    mod = np.abs(u.values)
    if math.isinf(p):
        return float(mod.max())
    return float(np.sum(mod ** p * u.widths) ** (1.0 / p))


def box(eps: float, p: float) -> StepFunction:
    """The normalised box eps^{-1/p} on (0, eps)."""
    if not eps > 0.0:
        raise DomainError(f"box width must be positive, got {eps}")
    if not p >= 1.0:
        raise DomainError(f"box needs p >= 1, got {p}")
    return StepFunction(np.array([0.0, eps]), np.array([eps ** (-1.0 / p)]), 0.0)


def scale(u: StepFunction, h: float, p: float) -> StepFunction:
    """u_h(t) = h^{1/p} u(h t); preserves the L^p norm."""
    if not h > 0.0:
        raise DomainError(f"scale factor must be positive, got {h}")
    return StepFunction(u.breakpoints / h, u.values * h ** (1.0 / p), u.modulation * h)


def modulate(u: StepFunction, a: float) -> StepFunction:
    """Multiply by e^{iat}."""
    return StepFunction(u.breakpoints, u.values, u.modulation + a)


def translate(u: StepFunction, t0: float) -> StepFunction:
    """Shift the support right by t0 >= 0, keeping the modulation frequency."""
    if t0 < 0.0:
        raise DomainError("translation must keep the support in t >= 0")
    # u(t - t0) e^{ia t} picks up the constant phase e^{ia t0}
    return StepFunction(u.breakpoints + t0, u.values * np.exp(1j * u.modulation * t0), u.modulation)


def gaussian_steps(center: float, sigma: float, half_width: float, n: int) -> StepFunction:
    """Midpoint samples of exp(-(t - center)^2 / (2 sigma^2)) on n equal pieces."""
    if not sigma > 0.0:
        raise DomainError("sigma must be positive")
    if n < 2:
        raise DomainError("need n >= 2 pieces")
    if not half_width > 0.0:
        raise DomainError("half_width must be positive")
    if center - half_width < 0.0:
        raise DomainError("support would reach t < 0")
    t = np.linspace(center - half_width, center + half_width, n + 1)
    mid = 0.5 * (t[:-1] + t[1:])
    return StepFunction(t, np.exp(-0.5 * ((mid - center) / sigma) ** 2), 0.0)


def random_steps(
    rng: np.random.Generator,
    max_pieces: int = 6,
    t_scale: float = 1.0,
    complex_values: bool = True,
    modulation_scale: float = 0.0,
) -> StepFunction:
    """A random non-null step function, for seeded property suites and searches."""
    n = int(rng.integers(1, max_pieces + 1))
    start = t_scale * rng.uniform(0.0, 0.5) if rng.random() < 0.5 else 0.0
    widths = t_scale * rng.uniform(0.05, 1.0, size=n)
    t = start + np.concatenate(([0.0], np.cumsum(widths)))
    re = rng.uniform(-2.0, 2.0, size=n)
    im = rng.uniform(-2.0, 2.0, size=n) if complex_values else np.zeros(n)
    c = re + 1j * im
    if not np.any(c != 0):
        c[0] = 1.0
    a = modulation_scale * rng.standard_normal() if modulation_scale else 0.0
    return StepFunction(t, c, a)
