"""Upper half-plane machinery: Poisson extension of step functions, dyadic
Calderon-Zygmund decomposition, shadow squares and the weak/strong-type
Carleson embedding checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .carleson import CarlesonResult, carleson_norm
from .consts import m_bound
from .errors import DomainError, UnsupportedMeasureError
from .measure import Atom, BoxDensity, HalfPlaneMeasure, integrate_pnorm
from .report import VerificationReport

_MAX_CZ_DEPTH = 2200


@dataclass(frozen=True, eq=False)
class RealStepFunction:
    """f = f_k on [s_k, s_{k+1}), zero outside [s_0, s_n]."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        s = np.array(self.breakpoints, dtype=float).ravel()
        v = np.array(self.values, dtype=float).ravel()
        if s.size != v.size + 1 or v.size < 1:
            raise DomainError("need n >= 1 values and n + 1 breakpoints")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v))):
            raise DomainError("breakpoints and values must be finite")
        if np.any(np.diff(s) <= 0.0):
            raise DomainError("breakpoints must be strictly increasing")
        s.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", s)
        object.__setattr__(self, "values", v)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def l1(self) -> float:
        return math.fsum((np.abs(self.values) * self.widths).tolist())

    def lp(self, p: float) -> float:
        if math.isinf(p):
            return float(np.abs(self.values).max())
        return math.fsum((np.abs(self.values) ** p * self.widths).tolist()) ** (1.0 / p)

    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (k >= 0) & (k < self.values.size)
        out = np.zeros(x.shape)
        out[inside] = self.values[k[inside]]
        return out

    def to_json(self) -> dict:
        return {"breakpoints": [float(v) for v in self.breakpoints], "values": [float(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "RealStepFunction":
        if not isinstance(data, dict):
            raise DomainError("function JSON: expected an object")
        for key in ("breakpoints", "values"):
            if key not in data:
                raise DomainError(f"function JSON: missing field '{key}'")
        vals = data["values"]
        for i, v in enumerate(vals):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise DomainError(f"values[{i}]: expected a real number, got {v!r}")
        if len(data["breakpoints"]) != len(vals) + 1:
            raise DomainError("breakpoints: expected len(values) + 1 entries")
        return cls(np.asarray(data["breakpoints"], dtype=float), np.asarray(vals, dtype=float))


def random_real_steps(rng: np.random.Generator, max_pieces: int = 8, span: float = 4.0) -> RealStepFunction:
    n = int(rng.integers(1, max_pieces + 1))
    start = rng.uniform(-span, span)
    widths = rng.uniform(0.05, 1.0, size=n) * span / 4.0
    s = start + np.concatenate(([0.0], np.cumsum(widths)))
    v = rng.uniform(-3.0, 3.0, size=n)
    v[rng.random(n) < 0.2] = 0.0
    if not np.any(v != 0):
        v[0] = 1.0
    return RealStepFunction(s, v)


@dataclass(frozen=True)
class UHPMeasure:
    """Measure in {Im z > 0}: atoms (x, y, w) and box densities (x0, x1, y0, y1, rho)."""

    atoms: tuple[tuple[float, float, float], ...] = ()
    boxes: tuple[tuple[float, float, float, float, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(tuple(map(float, a)) for a in self.atoms))
        object.__setattr__(self, "boxes", tuple(tuple(map(float, b)) for b in self.boxes))
        for x, y, w in self.atoms:
            if not y > 0.0:
                raise DomainError(f"atom at ({x}, {y}) touches Im z = 0")
        for x0, x1, y0, y1, rho in self.boxes:
            if y0 < 0.0:
                raise DomainError("box density must lie in Im z >= 0")

    def is_atomic(self) -> bool:
        return not self.boxes

    @property
    def rhp(self) -> HalfPlaneMeasure:
        """The same measure after the swap x + iy -> y + ix (R_{a,h} becomes Q_{a,h})."""
        comps = [Atom(y, x, w) for x, y, w in self.atoms]
        comps += [BoxDensity(y0, y1, x0, x1, rho) for x0, x1, y0, y1, rho in self.boxes]
        return HalfPlaneMeasure(tuple(comps))

    def to_json(self) -> dict:
        comps = [{"type": "atom", "x": x, "y": y, "w": w} for x, y, w in self.atoms]
        comps += [{"type": "box_density", "x0": a, "x1": b, "y0": c, "y1": d, "rho": r}
                  for a, b, c, d, r in self.boxes]
        return {"components": comps}

    @classmethod
    def from_json(cls, data: dict) -> "UHPMeasure":
        atoms, boxes = [], []
        for i, c in enumerate(data.get("components", [])):
            kind = c.get("type")
            try:
                if kind == "atom":
                    atoms.append((c["x"], c["y"], c["w"]))
                elif kind == "box_density":
                    boxes.append((c["x0"], c["x1"], c["y0"], c["y1"], c["rho"]))
                else:
                    raise DomainError(f"components[{i}]: type {kind!r} is not supported in the upper half-plane")
            except KeyError as exc:
                raise DomainError(f"components[{i}]: missing field {exc}") from None
        return cls(tuple(atoms), tuple(boxes))


def uhp_carleson_norm(mu: UHPMeasure, tol: Optional[float] = None) -> CarlesonResult:
    """Carleson norm over the squares R_{a,h} = {a < x < a + h, 0 < y < h}."""
    return carleson_norm(mu.rhp, tol)


def poisson_kernel(a, t):
    """P_a(t) = a / (pi (a^2 + t^2))."""
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    return a / (math.pi * (a * a + t * t))


def poisson_eval(f: RealStepFunction, x, y):
    """Poisson extension g(x + iy) = int P_y(x - t) f(t) dt in closed form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise DomainError("Poisson extension needs y > 0")
    scalar = x.ndim == 0 and y.ndim == 0
    x, y = np.broadcast_arrays(x, y)
    s = f.breakpoints
    xf, yf = x.ravel()[:, None], y.ravel()[:, None]
    ang = np.arctan((xf - s) / yf)
    g = (f.values * (ang[:, :-1] - ang[:, 1:])).sum(axis=1) / math.pi
    g = g.reshape(x.shape)
    return float(g) if scalar else g


# --- Calderon-Zygmund ------------------------------------------------------

@dataclass
class CZResult:
    alpha: float
    intervals: list[tuple[float, float]]
    averages: list[float]
    root: Optional[tuple[float, float]]
    exact_averages: list[Fraction] = field(default_factory=list, repr=False)

    def total_length(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "intervals": [[a, b] for a, b in self.intervals],
            "averages": self.averages,
            "root": list(self.root) if self.root else None,
        }


class _ExactSteps:
    def __init__(self, f: RealStepFunction):
        self.s = [Fraction(float(v)) for v in f.breakpoints]
        self.v = [abs(Fraction(float(v))) for v in f.values]

    def _pieces(self, lo: Fraction, hi: Fraction):
        for k, val in enumerate(self.v):
            a, b = max(lo, self.s[k]), min(hi, self.s[k + 1])
            if b > a:
                yield val, b - a

    def integral(self, lo: Fraction, hi: Fraction) -> Fraction:
        return sum((val * ln for val, ln in self._pieces(lo, hi)), Fraction(0))

    def sup(self, lo: Fraction, hi: Fraction) -> Fraction:
        return max((val for val, _ in self._pieces(lo, hi)), default=Fraction(0))


def _dyadic_root(ex: _ExactSteps, alpha: Fraction) -> tuple[Fraction, Fraction]:
    lo, hi = ex.s[0], ex.s[-1]
    mid = (lo + hi) / 2
    width = hi - lo
    L = Fraction(1)
    while L < width:
        L *= 2
    while L / 2 >= width:
        L /= 2
    while True:
        half = L / 2
        m = math.floor(mid / half + Fraction(1, 2)) * half
        a, b = m - half, m + half
        if a <= lo and hi <= b and ex.integral(a, b) <= alpha * L:
            return a, b
        L *= 2


def cz_decompose(f: RealStepFunction, alpha: float) -> CZResult:
    """Dyadic Calderon-Zygmund decomposition of |f| at height alpha.

    The root is the first interval of length 2^k, centred on the support
    midpoint snapped to the grid of spacing 2^{k-1}, that contains the
    support and carries average <= alpha. Halves with average > alpha are
    selected (their average is then <= 2 alpha); other halves are bisected
    further while |f| exceeds alpha somewhere on them. All arithmetic is
    exact, and breakpoints are dyadic rationals, so the recursion ends.
    """
    if not alpha > 0.0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive, got {alpha}")
    if f.l1() == 0.0:
        return CZResult(float(alpha), [], [], None)
    A = Fraction(float(alpha))
    ex = _ExactSteps(f)
    root = _dyadic_root(ex, A)
    selected: list[tuple[Fraction, Fraction, Fraction]] = []
    stack = [(root[0], root[1], 0)]
    while stack:
        lo, hi, depth = stack.pop()
        if depth > _MAX_CZ_DEPTH:
            raise RuntimeError("Calderon-Zygmund recursion did not terminate")
        mid = (lo + hi) / 2
        # push right first so intervals come out left to right
        for a, b in ((mid, hi), (lo, mid)):
            avg = ex.integral(a, b) / (b - a)
            if avg > A:
                selected.append((a, b, avg))
            elif ex.sup(a, b) > A:
                stack.append((a, b, depth + 1))
    selected.sort()
    return CZResult(
        float(alpha),
        [(float(a), float(b)) for a, b, _ in selected],
        [float(m) for _, _, m in selected],
        (float(root[0]), float(root[1])),
        [m for _, _, m in selected],
    )


@dataclass(frozen=True)
class ShadowSquare:
    """{x0 <= x <= x0 + side, 0 < y <= side}."""

    x0: float
    side: float

    def contains(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        return (x >= self.x0) & (x <= self.x0 + self.side) & (y > 0) & (y <= self.side)


def shadow_squares(cz: CZResult) -> list[ShadowSquare]:
    """Squares over the tripled intervals [a - |I|, b + |I|], side 3|I|."""
    return [ShadowSquare(a - (b - a), 3.0 * (b - a)) for a, b in cz.intervals]


def shadow_sidelength(squares: Sequence[ShadowSquare]) -> float:
    return math.fsum(q.side for q in squares)


def _in_any(squares: Sequence[ShadowSquare], x: np.ndarray, y: np.ndarray) -> np.ndarray:
    inside = np.zeros(x.shape, dtype=bool)
    for sq in squares:
        inside |= sq.contains(x, y)
    return inside


def coverage_check(f: RealStepFunction, lam: float, n_samples: int, seed: int) -> VerificationReport:
    """Sample points outside the shadow squares and check |g| <= (13/2)(lam/7) there."""
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    rng = np.random.default_rng(seed)
    alpha = lam / 7.0
    cz = cz_decompose(f, alpha)
    squares = shadow_squares(cz)
    l1 = f.l1()
    pad = 10.0 * l1 / lam
    s0, s1 = float(f.breakpoints[0]), float(f.breakpoints[-1])
    xlo, xhi = s0 - pad - 1.0, s1 + pad + 1.0
    ymax = max(pad, s1 - s0, max((q.side for q in squares), default=0.0)) * 2.0 + 1.0

    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    n_near = n_samples // 10 if squares else 0
    n_axis = n_samples // 10
    n_far = min(16, n_samples)
    n_uniform = n_samples - n_near - n_axis - n_far

    def collect(n: int, draw) -> None:
        got = 0
        for _ in range(1000):
            if got >= n:
                break
            x, y = draw(max(64, 2 * (n - got)))
            keep = (y > 0) & ~_in_any(squares, x, y)
            x, y = x[keep][: n - got], y[keep][: n - got]
            xs.append(x)
            ys.append(y)
            got += x.size

    collect(n_uniform, lambda m: (rng.uniform(xlo, xhi, m), rng.uniform(0.0, ymax, m)))
    collect(n_axis, lambda m: (rng.uniform(xlo, xhi, m), np.exp(rng.uniform(math.log(1e-6), math.log(ymax), m))))
    if n_near:
        def near(m):
            j = rng.integers(0, len(squares), m)
            x0 = np.array([squares[k].x0 for k in j])
            side = np.array([squares[k].side for k in j])
            d = rng.uniform(0.0, 0.01, m) * side / 3.0
            edge = rng.integers(0, 3, m)
            t = rng.uniform(0.0, 1.0, m)
            x = np.where(edge == 0, x0 - d, np.where(edge == 1, x0 + side + d, x0 + t * side))
            y = np.where(edge == 2, side + d, np.maximum(t * side, 1e-12))
            return x, y
        collect(n_near, near)
    far_r = (ymax + xhi - xlo) * np.geomspace(1.0, 1e3, n_far)
    far_t = np.linspace(0.05, math.pi - 0.05, n_far)
    collect(n_far, lambda m: ((s0 + s1) / 2 + far_r * np.cos(far_t), far_r * np.sin(far_t)))

    x = np.concatenate(xs)
    y = np.concatenate(ys)
    g = np.abs(poisson_eval(f, x, y))
    gmax = float(g.max()) if g.size else 0.0
    rep = VerificationReport("coverage", seed, {
        "lambda": lam, "alpha": alpha, "n_intervals": len(cz.intervals), "n_points": int(x.size),
        "l1": l1,
    })
    rep.add("g_le_13_over_2_alpha_off_squares", gmax, 6.5 * alpha)
    rep.add("g_lt_lambda_off_squares", gmax, lam, passed=gmax < lam)
    side_total = shadow_sidelength(squares)
    rep.add("shadow_sidelength_le_3_l1_over_alpha", side_total, 3.0 * l1 / alpha)
    rep.observe_ratio(gmax / alpha)
    return rep


def weak_type_check(f: RealStepFunction, mu: UHPMeasure, lam: float) -> VerificationReport:
    """mu(E_g(lam)) against 10 ||mu||_C ||f||_1, and against the same over lam.

    Both forms are recorded; see the README for why they differ.
    """
    if not mu.is_atomic():
        raise UnsupportedMeasureError("weak-type check needs an atomic measure")
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    C = uhp_carleson_norm(mu).norm
    l1 = f.l1()
    if mu.atoms:
        ax = np.array([a[0] for a in mu.atoms])
        ay = np.array([a[1] for a in mu.atoms])
        aw = np.array([a[2] for a in mu.atoms])
        big = np.abs(poisson_eval(f, ax, ay)) > lam
        mass = math.fsum(aw[big].tolist())
    else:
        mass = 0.0
    rep = VerificationReport("weak_type", None, {"lambda": lam, "carleson_norm": C, "l1": l1,
                                                 "level_set_mass": mass})
    rep.add("weak_type_10_C_l1", mass, 10.0 * C * l1)
    rep.add("weak_type_10_C_l1_over_lambda", mass, 10.0 * C * l1 / lam)
    if C * l1 > 0.0:
        rep.observe_ratio(mass * lam / (C * l1))
    return rep


def strong_type_check(f: RealStepFunction, mu: UHPMeasure, p: float, tol: float = 1e-9) -> VerificationReport:
    """||g||_{L^p(mu)} <= (M(p) ||mu||_C)^{1/p} ||f||_p."""
    p = float(p)
    if not 1.0 < p < math.inf:
        raise DomainError(f"strong-type check needs 1 < p < inf, got {p}")
    C = uhp_carleson_norm(mu).norm
    rhp = mu.rhp

    def g(z: np.ndarray) -> np.ndarray:
        # rhp point X + iY is the upper half-plane point Y + iX
        return poisson_eval(f, z.imag, z.real)

    lhs = integrate_pnorm(rhp, g, p, tol) if rhp.components else 0.0
    rhs = (m_bound(p) * C) ** (1.0 / p) * f.lp(p)
    rep = VerificationReport("strong_type", None, {"p": p, "carleson_norm": C, "m_bound": m_bound(p)})
    rep.add("strong_type", lhs, rhs, tol ** (1.0 / p))
    if rhs > 0.0:
        rep.observe_ratio(lhs / rhs)
    return rep


def uncovered_excess(f: RealStepFunction, cz: CZResult) -> float:
    """Length of {|f| > alpha} not covered by the selected intervals (exact)."""
    A = Fraction(cz.alpha)
    ivs = [(Fraction(a), Fraction(b)) for a, b in cz.intervals]
    s = [Fraction(float(v)) for v in f.breakpoints]
    out = Fraction(0)
    for k, v in enumerate(f.values):
        if abs(Fraction(float(v))) <= A:
            continue
        lo, hi = s[k], s[k + 1]
        covered = sum((max(Fraction(0), min(hi, b) - max(lo, a)) for a, b in ivs), Fraction(0))
        out += (hi - lo) - covered
    return float(out)


def cz_invariants_check(f: RealStepFunction, alpha: float) -> VerificationReport:
    """Disjointness, alpha < M_j <= 2 alpha, total length and the good-set bound."""
    cz = cz_decompose(f, alpha)
    A = Fraction(float(alpha))
    l1 = f.l1()
    rep = VerificationReport("cz", None, {"alpha": alpha, "n_intervals": len(cz.intervals), "l1": l1})
    ivs = [(Fraction(a), Fraction(b)) for a, b in cz.intervals]
    overlap = sum((max(Fraction(0), b0 - a1) for (a0, b0), (a1, b1) in zip(ivs, ivs[1:])), Fraction(0))
    rep.add("intervals_disjoint", float(overlap), 0.0, passed=overlap == 0)
    if cz.exact_averages:
        lo_ok = all(m > A for m in cz.exact_averages)
        hi_ok = all(m <= 2 * A for m in cz.exact_averages)
        rep.add_ge("min_average_gt_alpha", min(cz.averages), alpha)
        rep.checks[-1].passed = lo_ok
        rep.add("max_average_le_2alpha", max(cz.averages), 2.0 * alpha, passed=hi_ok)
    total = sum((b - a for a, b in ivs), Fraction(0))
    exact_l1 = sum((abs(Fraction(float(v))) * (Fraction(float(t1)) - Fraction(float(t0)))
                    for v, t0, t1 in zip(f.values, f.breakpoints[:-1], f.breakpoints[1:])), Fraction(0))
    rep.add("total_length_le_l1_over_alpha", float(total), l1 / alpha, passed=total <= exact_l1 / A)
    excess = uncovered_excess(f, cz)
    rep.add("f_le_alpha_off_intervals", excess, 0.0, passed=excess == 0.0)
    return rep
