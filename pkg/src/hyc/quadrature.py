"""Adaptive Gauss-Legendre panel quadrature (order 16) in one and two dimensions.

Each panel is integrated once as a whole and once as two halves (four
quarters in 2D); the disagreement is the panel's error estimate. Panels
whose estimate exceeds their share of the tolerance, proportional to their
length (area), are bisected. All live panels of one refinement level are
processed as a single vectorised batch, so results do not depend on any
evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)
_CHUNK = 1 << 18
# panels whose halves agree to roundoff are accepted whatever their budget
_ROUNDOFF = 64.0 * np.finfo(float).eps

Tolerance = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    n_panels: int


def _allowed(tol: Tolerance, estimate: float) -> float:
    return float(tol(estimate)) if callable(tol) else float(tol)


def _eval_chunked(f: Callable[[np.ndarray], np.ndarray], pts: np.ndarray) -> np.ndarray:
    flat = pts.ravel()
    if flat.size <= _CHUNK:
        return np.asarray(f(flat), dtype=float).reshape(pts.shape)
    out = np.empty(flat.size)
    for s in range(0, flat.size, _CHUNK):
        out[s:s + _CHUNK] = f(flat[s:s + _CHUNK])
    return out.reshape(pts.shape)


def _gl(f, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    return half * (_eval_chunked(f, x) @ _WEIGHTS)


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    edges: np.ndarray,
    tol: Tolerance,
    max_panels: int = 4_000_000,
) -> QuadResult:
    """Integrate a real vectorised ``f`` over ``[edges[0], edges[-1]]``.

    ``edges`` gives the initial panels. ``tol`` is an absolute error target,
    or a callable mapping the running estimate of the integral to one.
    """
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return QuadResult(0.0, 0.0, 0)
    span = float(hi.max() - lo.min())
    whole = _gl(f, lo, hi)
    done_val: list[np.ndarray] = []
    done_err: list[np.ndarray] = []
    n_total = lo.size
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _gl(f, lo, mid)
        right = _gl(f, mid, hi)
        refined = left + right
        err = np.abs(refined - whole)
        estimate = math.fsum(np.concatenate(done_val + [refined]).tolist())
        budget = _allowed(tol, estimate) * (hi - lo) / span
        ok = (err <= budget) | (err <= _ROUNDOFF * (np.abs(left) + np.abs(right))) | ((hi - lo) <= 1e-13 * span)
        if n_total >= max_panels:
            ok[:] = True
        done_val.append(refined[ok])
        done_err.append(err[ok])
        bad = ~ok
        lo = np.concatenate((lo[bad], mid[bad]))
        hi = np.concatenate((mid[bad], hi[bad]))
        whole = np.concatenate((left[bad], right[bad]))
        n_total += lo.size
    vals = np.concatenate(done_val)
    errs = np.concatenate(done_err)
    return QuadResult(math.fsum(vals.tolist()), math.fsum(errs.tolist()), n_total)


def _gl2(f, x0, x1, y0, y1) -> np.ndarray:
    hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    mx, my = 0.5 * (x1 + x0), 0.5 * (y1 + y0)
    xs = mx[:, None] + hx[:, None] * _NODES[None, :]
    ys = my[:, None] + hy[:, None] * _NODES[None, :]
    pts = xs[:, :, None] + 1j * ys[:, None, :]
    vals = _eval_chunked(f, pts)
    return hx * hy * np.einsum("mij,i,j->m", vals, _WEIGHTS, _WEIGHTS)


def integrate_2d(
    f: Callable[[np.ndarray], np.ndarray],
    x_edges: np.ndarray,
    y_edges: np.ndarray,
    tol: Tolerance,
    max_cells: int = 400_000,
) -> QuadResult:
    """Integrate ``f(z)`` (z = x + iy, complex array in, real array out) over a rectangle.

    The initial cells are the tensor grid of ``x_edges`` and ``y_edges``;
    refinement splits a cell into four.
    """
    x_edges = np.asarray(x_edges, dtype=float)
    y_edges = np.asarray(y_edges, dtype=float)
    X0, Y0 = np.meshgrid(x_edges[:-1], y_edges[:-1], indexing="ij")
    X1, Y1 = np.meshgrid(x_edges[1:], y_edges[1:], indexing="ij")
    x0, x1, y0, y1 = X0.ravel(), X1.ravel(), Y0.ravel(), Y1.ravel()
    area_total = float((x_edges[-1] - x_edges[0]) * (y_edges[-1] - y_edges[0]))
    if area_total <= 0.0:
        return QuadResult(0.0, 0.0, 0)
    whole = _gl2(f, x0, x1, y0, y1)
    done_val: list[np.ndarray] = []
    done_err: list[np.ndarray] = []
    n_total = x0.size
    while x0.size:
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        qx0 = np.concatenate((x0, xm, x0, xm))
        qx1 = np.concatenate((xm, x1, xm, x1))
        qy0 = np.concatenate((y0, y0, ym, ym))
        qy1 = np.concatenate((ym, ym, y1, y1))
        quarters = _gl2(f, qx0, qx1, qy0, qy1).reshape(4, -1)
        refined = quarters.sum(axis=0)
        err = np.abs(refined - whole)
        estimate = math.fsum(np.concatenate(done_val + [refined]).tolist())
        area = (x1 - x0) * (y1 - y0)
        budget = _allowed(tol, estimate) * area / area_total
        ok = (err <= budget) | (err <= _ROUNDOFF * np.abs(quarters).sum(axis=0)) | (area <= 1e-24 * area_total)
        if n_total >= max_cells:
            ok[:] = True
        done_val.append(refined[ok])
        done_err.append(err[ok])
        bad = ~ok
        x0 = qx0.reshape(4, -1)[:, bad].ravel()
        x1 = qx1.reshape(4, -1)[:, bad].ravel()
        y0 = qy0.reshape(4, -1)[:, bad].ravel()
        y1 = qy1.reshape(4, -1)[:, bad].ravel()
        whole = quarters[:, bad].ravel()
        n_total += x0.size
    vals = np.concatenate(done_val)
    errs = np.concatenate(done_err)
    return QuadResult(math.fsum(vals.tolist()), math.fsum(errs.tolist()), n_total)


def geometric_edges(lo: float, hi: float, first: float) -> np.ndarray:
    """Panel edges lo, lo + first, lo + 2 first, lo + 4 first, ... capped at hi."""
    if hi <= lo:
        return np.array([lo, hi])
    first = min(first, hi - lo)
    edges = [lo]
    step = first
    while edges[-1] + step < hi:
        edges.append(lo + step)
        step *= 2.0
    edges.append(hi)
    return np.array(edges)


def uniform_edges(lo: float, hi: float, width: float, max_panels: int = 1_000_000) -> np.ndarray:
    n = max(1, min(max_panels, int(math.ceil((hi - lo) / width))))
    return np.linspace(lo, hi, n + 1)
