"""Carleson norm sup_{a,h} mu(Q_{a,h}) / h of a measure on the closed right half-plane.

For atoms and boundary densities the ratio is a piecewise linear-fractional
function of (a, h) whose cells are cut out by the lines a = y_i, a + h = y_i
and h = x_i. On every cell the supremum is reached at a vertex, so it suffices
to enumerate h over the positive atom abscissae and the pairwise differences
of the event ordinates, and a over {y_i, y_i - h}. Squares are closed, so the
atom counts are upper semicontinuous and every vertex value is attained.

Measures with horizontal or box densities fall back to a branch-and-bound
search over (a, log h) boxes. Small sides h < h_min are excluded from the
search and bounded analytically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, NotApplicableError
from .measure import Atom, CarlesonSquare, HalfPlaneMeasure, measure_rect, split_boundary
from .report import VerificationReport


@dataclass(frozen=True)
class CarlesonLimit:
    """The ratio is unbounded (or maximal) only as h -> 0 at ordinate y."""

    y: float


Witness = Union[CarlesonSquare, CarlesonLimit, None]


@dataclass(frozen=True)
class CarlesonResult:
    norm: float
    witness: Witness
    method: str
    tol: float
    gap: float = 0.0
    n_boxes: int = 0

    def to_json(self) -> dict:
        if isinstance(self.witness, CarlesonSquare):
            w = {"a": self.witness.a, "h": self.witness.h}
        elif isinstance(self.witness, CarlesonLimit):
            w = {"limit_h_to_0_at_y": self.witness.y}
        else:
            w = None
        return {"norm": self.norm, "witness": w, "method": self.method, "tol": self.tol, "gap": self.gap}


def square_ratio(mu: HalfPlaneMeasure, a, h) -> np.ndarray:
    """mu(Q_{a,h}) / h, vectorised."""
    a = np.asarray(a, dtype=float)
    h = np.asarray(h, dtype=float)
    return measure_rect(mu, 0.0, h, a, a + h) / h


def boundary_density_profile(mu: HalfPlaneMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints and summed density of the boundary part on each elementary interval."""
    pieces = mu.boundary_pieces
    if not pieces:
        return np.array([]), np.array([])
    bps = np.unique(np.array([v for p in pieces for v in (p.y0, p.y1)]))
    mids = 0.5 * (bps[:-1] + bps[1:])
    dens = np.zeros(mids.size)
    for p in pieces:
        dens += p.rho * ((mids > p.y0) & (mids < p.y1))
    return bps, dens


def _event_ordinates(mu: HalfPlaneMeasure) -> np.ndarray:
    ys = [a.y for a in mu.atoms]
    ys += [v for p in mu.boundary_pieces for v in (p.y0, p.y1)]
    ys += [c.y for c in mu.horizontals]
    ys += [v for b in mu.boxes for v in (b.y0, b.y1)]
    return np.unique(np.array(ys, dtype=float))


def _candidate_squares(mu: HalfPlaneMeasure) -> tuple[np.ndarray, np.ndarray]:
    ys = _event_ordinates(mu)
    hs = [a.x for a in mu.atoms if a.x > 0.0]
    hs += [v for c in mu.horizontals for v in (c.x0, c.x1) if v > 0.0]
    hs += [v for b in mu.boxes for v in (b.x0, b.x1) if v > 0.0]
    diff = (ys[None, :] - ys[:, None]).ravel()
    hs = np.unique(np.concatenate((np.array(hs, dtype=float), diff[diff > 0.0])))
    if hs.size == 0 or ys.size == 0:
        return np.array([]), np.array([])
    A = np.concatenate((np.broadcast_to(ys, (hs.size, ys.size)), ys[None, :] - hs[:, None]), axis=1)
    H = np.broadcast_to(hs[:, None], A.shape)
    return A.ravel(), H.ravel()


def _best_of(mu: HalfPlaneMeasure, a: np.ndarray, h: np.ndarray, block: int = 200_000):
    best, best_a, best_h = -1.0, math.nan, math.nan
    for s in range(0, a.size, block):
        r = square_ratio(mu, a[s:s + block], h[s:s + block])
        k = int(np.argmax(r))
        if r[k] > best:
            best, best_a, best_h = float(r[k]), float(a[s + k]), float(h[s + k])
    return best, best_a, best_h


def _default_tol(mu: HalfPlaneMeasure) -> float:
    x0, x1, y0, y1 = mu.bounds()
    diam = max(x1, y1 - y0)
    if diam <= 0.0:
        return 1e-12
    return 1e-6 * mu.total_mass() / diam


def carleson_norm(
    mu: HalfPlaneMeasure,
    tol: Optional[float] = None,
    method: str = "auto",
    max_boxes: int = 20_000_000,
    seed_candidates: bool = True,
) -> CarlesonResult:
    """Carleson norm with a witness square.

    ``method`` is ``"auto"`` (exact when the measure has only atoms and
    boundary densities), ``"exact"`` or ``"branch_and_bound"``. With
    ``seed_candidates=False`` the search starts from the single square
    spanning the support instead of the enumerated vertex squares.
    """
    if tol is None:
        tol = _default_tol(mu)
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    for at in mu.atoms:
        if at.x == 0.0:
            return CarlesonResult(math.inf, CarlesonLimit(at.y), "exact", tol)
    if mu.is_empty():
        return CarlesonResult(0.0, None, "exact", tol)
    exact_ok = not mu.horizontals and not mu.boxes
    if method == "auto":
        method = "exact" if exact_ok else "branch_and_bound"
    if method == "exact" and not exact_ok:
        raise DomainError("exact path needs a measure made of atoms and boundary densities only")

    if method not in ("exact", "branch_and_bound"):
        raise DomainError(f"unknown method {method!r}")
    A, H = _candidate_squares(mu)
    if method == "branch_and_bound" and not seed_candidates:
        A = H = np.array([])
    best, ba, bh = _best_of(mu, A, H) if A.size else (-1.0, math.nan, math.nan)
    # the square spanning the whole support attains total / diameter
    x0, x1, y0, y1 = mu.bounds()
    diam = max(x1, y1 - y0)
    r_full = float(square_ratio(mu, y0, diam))
    if r_full > best:
        best, ba, bh = r_full, y0, diam
    if method == "exact":
        return CarlesonResult(best, CarlesonSquare(ba, bh), "exact", tol)
    return _branch_and_bound(mu, tol, best, ba, bh, max_boxes)


def _small_side_bound(mu: HalfPlaneMeasure, tol: float) -> tuple[float, float, list[tuple[float, float]]]:
    """Choose h_min and return (h_min, upper bound of the ratio for h < h_min, seed squares)."""
    feats = [a.x for a in mu.atoms]
    feats += [c.x0 for c in mu.horizontals if c.x0 > 0.0]
    feats += [b.x0 for b in mu.boxes if b.x0 > 0.0]
    ev = np.unique(np.concatenate((
        np.array([v for p in mu.boundary_pieces for v in (p.y0, p.y1)]),
        np.array([c.y for c in mu.horizontals]),
    )))
    if ev.size > 1:
        feats.append(float(np.min(np.diff(ev))))
    x0, x1, y0, y1 = mu.bounds()
    diam = max(x1, y1 - y0)
    feats.append(diam)
    box_rho = sum(b.rho for b in mu.boxes if b.x0 == 0.0)
    if box_rho > 0.0:
        feats.append(tol / box_rho)
    h_min = 0.5 * min(f for f in feats if f > 0.0)

    bps, dens = boundary_density_profile(mu)

    def side_density(y: float) -> float:
        if bps.size == 0:
            return 0.0
        k = np.searchsorted(bps, y)
        left = dens[k - 1] if 1 <= k <= dens.size else 0.0
        kr = np.searchsorted(bps, y, side="right")
        right = dens[kr - 1] if 1 <= kr <= dens.size else 0.0
        return float(max(left, right))

    limit = float(dens.max()) if dens.size else 0.0
    seeds: list[tuple[float, float]] = []
    hor_at: dict[float, float] = {}
    for c in mu.horizontals:
        if c.x0 == 0.0:
            hor_at[c.y] = hor_at.get(c.y, 0.0) + c.rho
    for y, r in hor_at.items():
        limit = max(limit, r + side_density(y))
        hs = 0.5 * min(h_min, min(c.x1 for c in mu.horizontals if c.y == y))
        seeds += [(y, hs), (y - hs, hs)]
    return h_min, limit + box_rho * h_min, seeds


def _box_upper_bounds(mu: HalfPlaneMeasure, alo, ahi, hlo, hhi, atom_data, profile) -> np.ndarray:
    """Upper bound of mu(Q_{a,h})/h over each (a, h) box, summed per component."""
    ylo, yhi = alo, ahi + hhi
    ub = np.zeros(alo.shape)
    if atom_data is not None:
        ax, ay, aw = atom_data  # sorted by x
        inside = (ax <= hhi[:, None]) & (ay >= ylo[:, None]) & (ay <= yhi[:, None])
        # a square holding atoms S has h >= max(h_lo, max_S x); scan S by abscissa
        csum = np.cumsum(inside * aw, axis=1)
        ub += np.max(csum / np.maximum(hlo[:, None], ax), axis=1)
    bps, dens = profile
    if dens.size:
        best = np.zeros(alo.shape)
        for k in range(dens.size):
            hit = (bps[k] < yhi) & (bps[k + 1] > ylo)
            best = np.where(hit, np.maximum(best, dens[k]), best)
        ub += best
    for c in mu.horizontals:
        hit = (c.y >= ylo) & (c.y <= yhi)
        ub += hit * c.rho * np.minimum(1.0, np.maximum(0.0, np.minimum(c.x1, hhi) - c.x0) / hlo)
    for b in mu.boxes:
        yov = np.maximum(0.0, np.minimum(b.y1, yhi) - np.maximum(b.y0, ylo))
        xov = np.maximum(0.0, np.minimum(b.x1, hhi) - b.x0)
        ub += b.rho * np.minimum(xov * yov / hlo, np.minimum(hhi, yov))
    return ub


def _branch_and_bound(mu, tol, best, ba, bh, max_boxes) -> CarlesonResult:
    h_min, small_bound, seeds = _small_side_bound(mu, tol)
    if seeds:
        sa = np.array([s[0] for s in seeds])
        sh = np.array([s[1] for s in seeds])
        r = square_ratio(mu, sa, sh)
        k = int(np.argmax(r))
        if r[k] > best:
            best, ba, bh = float(r[k]), float(sa[k]), float(sh[k])
    x0, x1, y0, y1 = mu.bounds()
    H = max(x1, y1 - y0)
    if h_min >= H:
        gap = max(0.0, small_bound - best)
        return CarlesonResult(best, CarlesonSquare(ba, bh), "branch_and_bound", tol, gap, 0)

    atoms = sorted(mu.atoms, key=lambda t: t.x)
    atom_data = None
    if atoms:
        atom_data = (np.array([t.x for t in atoms]), np.array([t.y for t in atoms]), np.array([t.w for t in atoms]))
    profile = boundary_density_profile(mu)

    alo = np.array([y0 - H])
    ahi = np.array([y1])
    lhlo = np.array([math.log(h_min)])
    lhhi = np.array([math.log(H)])
    n_boxes = 1
    upper = best
    while alo.size:
        hlo, hhi = np.exp(lhlo), np.exp(lhhi)
        ub = _box_upper_bounds(mu, alo, ahi, hlo, hhi, atom_data, profile)
        # lower bounds: corners and centre of each box
        amid = 0.5 * (alo + ahi)
        hmid = np.exp(0.5 * (lhlo + lhhi))
        pa = np.concatenate((alo, alo, ahi, ahi, amid))
        ph = np.concatenate((hlo, hhi, hlo, hhi, hmid))
        r = square_ratio(mu, pa, ph)
        k = int(np.argmax(r))
        if r[k] > best:
            best, ba, bh = float(r[k]), float(pa[k]), float(ph[k])
        live = ub > best + tol
        upper = float(ub[live].max()) if live.any() else best
        if not live.any() or n_boxes >= max_boxes:
            break
        alo, ahi, lhlo, lhhi = alo[live], ahi[live], lhlo[live], lhhi[live]
        dlog = lhhi - lhlo
        split_a = ((ahi - alo) / np.exp(lhlo) > dlog) & (dlog <= _LOG2)
        am = 0.5 * (alo + ahi)
        lm = 0.5 * (lhlo + lhhi)
        alo, ahi, lhlo, lhhi = (
            np.concatenate((alo, np.where(split_a, am, alo))),
            np.concatenate((np.where(split_a, am, ahi), ahi)),
            np.concatenate((lhlo, np.where(split_a, lhlo, lm))),
            np.concatenate((np.where(split_a, lhhi, lm), lhhi)),
        )
        n_boxes += alo.size
    upper = max(upper, small_bound)
    gap = max(0.0, upper - best)
    return CarlesonResult(best, CarlesonSquare(ba, bh), "branch_and_bound", tol, gap, n_boxes)


_LOG2 = math.log(2.0)


def witness_square(result: CarlesonResult, mu: HalfPlaneMeasure) -> CarlesonSquare:
    """A concrete square from a Carleson result (a small one for a limit witness)."""
    if isinstance(result.witness, CarlesonSquare):
        return result.witness
    if isinstance(result.witness, CarlesonLimit):
        x0, x1, y0, y1 = mu.bounds()
        h = 1e-3 * max(x1, y1 - y0, 1e-3)
        return CarlesonSquare(result.witness.y - 0.5 * h, h)
    raise NotApplicableError("empty measure has no witness square")


def max_boundary_density(mu: HalfPlaneMeasure) -> float:
    _, dens = boundary_density_profile(mu)
    return float(dens.max()) if dens.size else 0.0


def rn_bound_check(mu: HalfPlaneMeasure, tol: float = 1e-12) -> VerificationReport:
    """Check that the boundary density never exceeds the Carleson norm."""
    mu1, _ = split_boundary(mu)
    if any(isinstance(c, Atom) for c in mu1.components):
        raise NotApplicableError("boundary atoms have no density with respect to dy")
    res = carleson_norm(mu)
    rep = VerificationReport("rn_bound", None, {"method": res.method})
    rep.add("boundary_density_le_carleson_norm", max_boundary_density(mu1), res.norm, tol)
    return rep
