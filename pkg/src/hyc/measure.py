"""A finite parametric family of non-negative measures on {Re z >= 0}.

Components are point masses, piecewise-constant densities on the boundary
line Re z = 0, constant densities on horizontal segments, and constant
densities on axis-parallel boxes. The mass of any closed axis-parallel
rectangle is available in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError
from .quadrature import geometric_edges, integrate_1d, integrate_2d, uniform_edges


def _finite(*xs: float) -> None:
    for v in xs:
        if not math.isfinite(v):
            raise DomainError("measure parameters must be finite")


@dataclass(frozen=True)
class Atom:
    x: float
    y: float
    w: float

    def __post_init__(self) -> None:
        _finite(self.x, self.y, self.w)
        if self.x < 0.0:
            raise DomainError("atom must lie in Re z >= 0")
        if not self.w > 0.0:
            raise DomainError("atom weight must be positive")


@dataclass(frozen=True)
class DensityPiece:
    y0: float
    y1: float
    rho: float

    def __post_init__(self) -> None:
        _finite(self.y0, self.y1, self.rho)
        if not self.y0 < self.y1:
            raise DomainError("density piece needs y0 < y1")
        if self.rho < 0.0:
            raise DomainError("density must be non-negative")


@dataclass(frozen=True)
class BoundaryDensity:
    pieces: tuple[DensityPiece, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))


@dataclass(frozen=True)
class HorizontalDensity:
    y: float
    x0: float
    x1: float
    rho: float

    def __post_init__(self) -> None:
        _finite(self.y, self.x0, self.x1, self.rho)
        if self.x0 < 0.0 or not self.x1 > self.x0:
            raise DomainError("horizontal density needs 0 <= x0 < x1")
        if self.rho < 0.0:
            raise DomainError("density must be non-negative")


@dataclass(frozen=True)
class BoxDensity:
    x0: float
    x1: float
    y0: float
    y1: float
    rho: float

    def __post_init__(self) -> None:
        _finite(self.x0, self.x1, self.y0, self.y1, self.rho)
        if self.x0 < 0.0 or not self.x1 > self.x0 or not self.y1 > self.y0:
            raise DomainError("box density needs 0 <= x0 < x1 and y0 < y1")
        if self.rho < 0.0:
            raise DomainError("density must be non-negative")


Component = Union[Atom, BoundaryDensity, HorizontalDensity, BoxDensity]


@dataclass(frozen=True)
class CarlesonSquare:
    """Closed square Im z in [a, a + h], Re z in [0, h]."""

    a: float
    h: float

    def __post_init__(self) -> None:
        _finite(self.a, self.h)
        if not self.h > 0.0:
            raise DomainError("square side must be positive")


@dataclass(frozen=True)
class HalfPlaneMeasure:
    components: tuple[Component, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))

    # component views
    @property
    def atoms(self) -> list[Atom]:
        return [c for c in self.components if isinstance(c, Atom)]

    @property
    def boundary_pieces(self) -> list[DensityPiece]:
        return [p for c in self.components if isinstance(c, BoundaryDensity) for p in c.pieces]

    @property
    def horizontals(self) -> list[HorizontalDensity]:
        return [c for c in self.components if isinstance(c, HorizontalDensity)]

    @property
    def boxes(self) -> list[BoxDensity]:
        return [c for c in self.components if isinstance(c, BoxDensity)]

    def is_empty(self) -> bool:
        return self.total_mass() == 0.0

    def is_atomic(self) -> bool:
        return all(isinstance(c, Atom) for c in self.components)

    def total_mass(self) -> float:
        m = [a.w for a in self.atoms]
        m += [p.rho * (p.y1 - p.y0) for p in self.boundary_pieces]
        m += [c.rho * (c.x1 - c.x0) for c in self.horizontals]
        m += [b.rho * (b.x1 - b.x0) * (b.y1 - b.y0) for b in self.boxes]
        return math.fsum(m)

    def bounds(self) -> tuple[float, float, float, float]:
        """(x_min, x_max, y_min, y_max) of the support; zeros for the empty measure."""
        xs: list[float] = []
        ys: list[float] = []
        for c in self.components:
            if isinstance(c, Atom):
                xs.append(c.x)
                ys.append(c.y)
            elif isinstance(c, BoundaryDensity):
                for p in c.pieces:
                    xs.append(0.0)
                    ys += [p.y0, p.y1]
            elif isinstance(c, HorizontalDensity):
                xs += [c.x0, c.x1]
                ys.append(c.y)
            else:
                xs += [c.x0, c.x1]
                ys += [c.y0, c.y1]
        if not xs:
            return 0.0, 0.0, 0.0, 0.0
        return min(xs), max(xs), min(ys), max(ys)

    def shifted(self, dy: float) -> "HalfPlaneMeasure":
        """Translate the measure by i*dy."""
        out: list[Component] = []
        for c in self.components:
            if isinstance(c, Atom):
                out.append(Atom(c.x, c.y + dy, c.w))
            elif isinstance(c, BoundaryDensity):
                out.append(BoundaryDensity(tuple(DensityPiece(p.y0 + dy, p.y1 + dy, p.rho) for p in c.pieces)))
            elif isinstance(c, HorizontalDensity):
                out.append(HorizontalDensity(c.y + dy, c.x0, c.x1, c.rho))
            else:
                out.append(BoxDensity(c.x0, c.x1, c.y0 + dy, c.y1 + dy, c.rho))
        return HalfPlaneMeasure(tuple(out))

    def dilated(self, lam: float) -> "HalfPlaneMeasure":
        """Push forward under z -> lam z (masses unchanged)."""
        out: list[Component] = []
        for c in self.components:
            if isinstance(c, Atom):
                out.append(Atom(lam * c.x, lam * c.y, c.w))
            elif isinstance(c, BoundaryDensity):
                out.append(BoundaryDensity(tuple(DensityPiece(lam * p.y0, lam * p.y1, p.rho / lam) for p in c.pieces)))
            elif isinstance(c, HorizontalDensity):
                out.append(HorizontalDensity(lam * c.y, lam * c.x0, lam * c.x1, c.rho / lam))
            else:
                out.append(BoxDensity(lam * c.x0, lam * c.x1, lam * c.y0, lam * c.y1, c.rho / lam ** 2))
        return HalfPlaneMeasure(tuple(out))

    def scaled(self, factor: float) -> "HalfPlaneMeasure":
        """Multiply every weight and density by ``factor`` > 0."""
        out: list[Component] = []
        for c in self.components:
            if isinstance(c, Atom):
                out.append(Atom(c.x, c.y, factor * c.w))
            elif isinstance(c, BoundaryDensity):
                out.append(BoundaryDensity(tuple(DensityPiece(p.y0, p.y1, factor * p.rho) for p in c.pieces)))
            elif isinstance(c, HorizontalDensity):
                out.append(HorizontalDensity(c.y, c.x0, c.x1, factor * c.rho))
            else:
                out.append(BoxDensity(c.x0, c.x1, c.y0, c.y1, factor * c.rho))
        return HalfPlaneMeasure(tuple(out))

    # JSON
    def to_json(self) -> dict:
        comps = []
        for c in self.components:
            if isinstance(c, Atom):
                comps.append({"type": "atom", "x": c.x, "y": c.y, "w": c.w})
            elif isinstance(c, BoundaryDensity):
                comps.append({"type": "boundary_density",
                              "pieces": [{"y0": p.y0, "y1": p.y1, "rho": p.rho} for p in c.pieces]})
            elif isinstance(c, HorizontalDensity):
                comps.append({"type": "horizontal_density", "y": c.y, "x0": c.x0, "x1": c.x1, "rho": c.rho})
            else:
                comps.append({"type": "box_density", "x0": c.x0, "x1": c.x1, "y0": c.y0, "y1": c.y1,
                              "rho": c.rho})
        return {"components": comps}

    @classmethod
    def from_json(cls, data: dict, p: float | None = None) -> "HalfPlaneMeasure":
        """Parse the JSON schema. Numeric fields may be the strings "p", "p'",
        "1/p" or "1/p'", resolved against the exponent ``p``."""
        if not isinstance(data, dict) or "components" not in data:
            raise DomainError("measure JSON: expected an object with a 'components' list")
        comps: list[Component] = []
        for i, raw in enumerate(data["components"]):
            where = f"components[{i}]"
            if not isinstance(raw, dict) or "type" not in raw:
                raise DomainError(f"{where}: expected an object with a 'type' field")
            kind = raw["type"]

            def num(obj: dict, key: str, where: str = where) -> float:
                if key not in obj:
                    raise DomainError(f"{where}: missing field '{key}'")
                return _resolve(obj[key], p, f"{where}.{key}")

            try:
                if kind == "atom":
                    comps.append(Atom(num(raw, "x"), num(raw, "y"), num(raw, "w")))
                elif kind == "boundary_density":
                    pieces = []
                    for j, pc in enumerate(raw.get("pieces", [])):
                        w2 = f"{where}.pieces[{j}]"
                        pieces.append(DensityPiece(num(pc, "y0", w2), num(pc, "y1", w2), num(pc, "rho", w2)))
                    comps.append(BoundaryDensity(tuple(pieces)))
                elif kind == "horizontal_density":
                    comps.append(HorizontalDensity(num(raw, "y"), num(raw, "x0"), num(raw, "x1"), num(raw, "rho")))
                elif kind == "box_density":
                    comps.append(BoxDensity(num(raw, "x0"), num(raw, "x1"), num(raw, "y0"), num(raw, "y1"),
                                            num(raw, "rho")))
                else:
                    raise DomainError(f"{where}: unknown component type {kind!r}")
            except DomainError as exc:
                msg = str(exc)
                raise DomainError(msg if msg.startswith("components[") else f"{where}: {msg}") from None
        return cls(tuple(comps))


def _resolve(v, p: float | None, where: str) -> float:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if isinstance(v, str) and v in ("p", "p'", "1/p", "1/p'"):
        if p is None:
            raise DomainError(f"{where}: value {v!r} needs an exponent p")
        q = p / (p - 1.0)
        return {"p": p, "p'": q, "1/p": 1.0 / p, "1/p'": 1.0 / q}[v]
    raise DomainError(f"{where}: expected a number, got {v!r}")


def _overlap(lo0, hi0, lo1, hi1):
    return np.maximum(0.0, np.minimum(hi0, hi1) - np.maximum(lo0, lo1))


def measure_rect(mu: HalfPlaneMeasure, x_lo, x_hi, y_lo, y_hi) -> np.ndarray:
    """Mass of the closed rectangles [x_lo, x_hi] x [y_lo, y_hi] (broadcast arrays)."""
    x_lo, x_hi, y_lo, y_hi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x_lo, x_hi, y_lo, y_hi)))
    total = np.zeros(x_lo.shape)
    atoms = mu.atoms
    if atoms:
        ax = np.array([a.x for a in atoms])
        ay = np.array([a.y for a in atoms])
        aw = np.array([a.w for a in atoms])
        inside = ((ax >= x_lo[..., None]) & (ax <= x_hi[..., None])
                  & (ay >= y_lo[..., None]) & (ay <= y_hi[..., None]))
        total = total + inside @ aw
    pieces = mu.boundary_pieces
    if pieces:
        y0 = np.array([p.y0 for p in pieces])
        y1 = np.array([p.y1 for p in pieces])
        rho = np.array([p.rho for p in pieces])
        on_line = (x_lo <= 0.0) & (x_hi >= 0.0)
        total = total + on_line * (_overlap(y0, y1, y_lo[..., None], y_hi[..., None]) @ rho)
    for c in mu.horizontals:
        hit = (c.y >= y_lo) & (c.y <= y_hi)
        total = total + hit * c.rho * _overlap(c.x0, c.x1, x_lo, x_hi)
    for b in mu.boxes:
        total = total + b.rho * _overlap(b.x0, b.x1, x_lo, x_hi) * _overlap(b.y0, b.y1, y_lo, y_hi)
    return total


def measure_square(mu: HalfPlaneMeasure, Q: CarlesonSquare) -> float:
    """mu(Q_{a,h}) for the closed square Q."""
    return float(measure_rect(mu, 0.0, Q.h, Q.a, Q.a + Q.h))


def split_boundary(mu: HalfPlaneMeasure) -> tuple[HalfPlaneMeasure, HalfPlaneMeasure]:
    """Split into the part on Re z = 0 and the part in Re z > 0.

    Horizontal segments and boxes touching the boundary put no mass on it and
    go to the interior part.
    """
    on, off = [], []
    for c in mu.components:
        if isinstance(c, BoundaryDensity) or (isinstance(c, Atom) and c.x == 0.0):
            on.append(c)
        else:
            off.append(c)
    return HalfPlaneMeasure(tuple(on)), HalfPlaneMeasure(tuple(off))


Evaluator = Callable[[np.ndarray], np.ndarray]


def integrate_power(
    mu: HalfPlaneMeasure,
    v: Evaluator,
    q: float,
    tol: float = 1e-9,
    scale: float | None = None,
) -> float:
    """int |v|^q dmu. ``tol`` bounds the absolute error of the integral.

    Atoms are summed exactly; each density component is integrated to
    ``tol / (number of density components)``. ``scale`` is the length over
    which v varies appreciably (initial panel width); defaults to 1/16 of the
    support extent.
    """
    if not q >= 1.0:
        raise DomainError(f"q must be >= 1, got {q}")
    if not tol > 0.0:
        raise DomainError("tol must be positive")

    def fq(z: np.ndarray) -> np.ndarray:
        return np.abs(v(z)) ** q

    parts: list[float] = []
    atoms = mu.atoms
    if atoms:
        z = np.array([complex(a.x, a.y) for a in atoms])
        w = np.array([a.w for a in atoms])
        parts += (w * fq(z)).tolist()
    densities = [c for c in mu.components if not isinstance(c, Atom)]
    n_dens = sum(len(c.pieces) if isinstance(c, BoundaryDensity) else 1 for c in densities)
    if n_dens == 0:
        return math.fsum(parts)
    ctol = tol / n_dens
    for c in densities:
        if isinstance(c, BoundaryDensity):
            for p in c.pieces:
                if p.rho == 0.0:
                    continue
                width = scale or (p.y1 - p.y0) / 16.0
                res = integrate_1d(lambda y: fq(1j * y), uniform_edges(p.y0, p.y1, width), ctol / p.rho)
                parts.append(p.rho * res.value)
        elif isinstance(c, HorizontalDensity):
            if c.rho == 0.0:
                continue
            first = scale or (c.x1 - c.x0) / 16.0
            edges = geometric_edges(c.x0, c.x1, first)
            res = integrate_1d(lambda x, y=c.y: fq(x + 1j * y), edges, ctol / c.rho)
            parts.append(c.rho * res.value)
        else:
            if c.rho == 0.0:
                continue
            sx = scale or (c.x1 - c.x0) / 4.0
            sy = scale or (c.y1 - c.y0) / 4.0
            res = integrate_2d(fq, uniform_edges(c.x0, c.x1, sx, 64),
                               uniform_edges(c.y0, c.y1, sy, 64), ctol / c.rho)
            parts.append(c.rho * res.value)
    return math.fsum(parts)


def integrate_pnorm(
    mu: HalfPlaneMeasure,
    v: Evaluator,
    q: float,
    tol: float = 1e-9,
    scale: float | None = None,
) -> float:
    """(int |v|^q dmu)^{1/q}; ``tol`` is the absolute tolerance on the inner integral."""
    return integrate_power(mu, v, q, tol, scale) ** (1.0 / q)


def random_measure(rng: np.random.Generator, max_atoms: int = 8, max_boxes: int = 2) -> HalfPlaneMeasure:
    """Seeded interior atoms plus a few constant-density boxes (at least one component)."""
    n_atoms = int(rng.integers(0, max_atoms + 1))
    n_boxes = int(rng.integers(0, max_boxes + 1))
    if n_atoms + n_boxes == 0:
        n_atoms = 1
    comps: list = []
    for _ in range(n_atoms):
        comps.append(Atom(float(rng.uniform(0.05, 3.0)), float(rng.uniform(-3.0, 3.0)), float(rng.uniform(0.1, 2.0))))
    for _ in range(n_boxes):
        x0 = float(rng.uniform(0.0, 2.0))
        y0 = float(rng.uniform(-3.0, 2.0))
        comps.append(BoxDensity(x0, x0 + float(rng.uniform(0.2, 1.5)), y0, y0 + float(rng.uniform(0.2, 1.5)),
                                float(rng.uniform(0.1, 1.0))))
    return HalfPlaneMeasure(tuple(comps))
