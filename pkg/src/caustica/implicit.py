"""Real-point extraction from implicit plane curves (float tower).

Marching squares on a sample grid yields segment chains of the zero set;
segment endpoints can be Newton-refined back onto the curve when higher
accuracy is needed (the grid linearization alone is only first order).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .poly import MPoly, derivative

Segment = tuple[tuple[float, float], tuple[float, float]]


def _lerp(p0, p1, v0, v1):
    t = v0 / (v0 - v1) if v0 != v1 else 0.5
    t = min(max(t, 0.0), 1.0)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


def marching_squares(
    f: Callable[[float, float], float],
    viewport: tuple[float, float, float, float],
    resolution: int,
) -> list[Segment]:
    """Zero-set segments of f over the viewport (xmin, xmax, ymin, ymax).

    Cells are classified by corner signs; crossings are linearly
    interpolated along the edges.  Saddle cells are split by the sign of
    the cell-center value.
    """
    if resolution < 16:
        raise ValueError("grid resolution must be at least 16")
    xmin, xmax, ymin, ymax = viewport
    nx = ny = resolution
    xs = [xmin + (xmax - xmin) * i / nx for i in range(nx + 1)]
    ys = [ymin + (ymax - ymin) * j / ny for j in range(ny + 1)]
    vals = [[f(x, y) for y in ys] for x in xs]
    segments: list[Segment] = []
    for i in range(nx):
        for j in range(ny):
            v00, v01 = vals[i][j], vals[i][j + 1]
            v10, v11 = vals[i + 1][j], vals[i + 1][j + 1]
            idx = (v00 > 0) | ((v10 > 0) << 1) | ((v11 > 0) << 2) | ((v01 > 0) << 3)
            if idx in (0, 15):
                continue
            p00, p01 = (xs[i], ys[j]), (xs[i], ys[j + 1])
            p10, p11 = (xs[i + 1], ys[j]), (xs[i + 1], ys[j + 1])
            bottom = lambda: _lerp(p00, p10, v00, v10)
            top = lambda: _lerp(p01, p11, v01, v11)
            left = lambda: _lerp(p00, p01, v00, v01)
            right = lambda: _lerp(p10, p11, v10, v11)
            if idx in (1, 14):
                segments.append((left(), bottom()))
            elif idx in (2, 13):
                segments.append((bottom(), right()))
            elif idx in (3, 12):
                segments.append((left(), right()))
            elif idx in (4, 11):
                segments.append((top(), right()))
            elif idx in (6, 9):
                segments.append((bottom(), top()))
            elif idx in (7, 8):
                segments.append((left(), top()))
            else:
                # saddle: disambiguate with the center sign
                center = f(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
                pos_center = center > 0
                if (idx == 5) == pos_center:
                    segments.append((left(), bottom()))
                    segments.append((top(), right()))
                else:
                    segments.append((left(), top()))
                    segments.append((bottom(), right()))
    return segments


def poly_evaluator(p: MPoly) -> Callable[[float, float], float]:
    """Fast float evaluator for a bivariate polynomial in (x, y)."""
    if tuple(p.vars) != ("x", "y"):
        raise ValueError("expected a polynomial in (x, y)")
    terms = [(e[0], e[1], float(c)) for e, c in p.terms.items()]

    def f(x: float, y: float) -> float:
        return sum(c * x**ex * y**ey for ex, ey, c in terms)

    return f


def newton_refine(
    p: MPoly, pt: tuple[float, float], iterations: int = 12
) -> tuple[float, float] | None:
    """Project a point onto p = 0 along the gradient; None if it diverges."""
    f = poly_evaluator(p)
    fx = poly_evaluator(derivative(p, "x"))
    fy = poly_evaluator(derivative(p, "y"))
    x, y = pt
    for _ in range(iterations):
        v = f(x, y)
        gx, gy = fx(x, y), fy(x, y)
        g2 = gx * gx + gy * gy
        if g2 < 1e-30:
            return None
        step = v / g2
        x, y = x - step * gx, y - step * gy
        if not (math.isfinite(x) and math.isfinite(y)):
            return None
    return (x, y)


def auto_viewport(p: MPoly) -> tuple[float, float, float, float] | None:
    """A square window containing real points of the curve, found by expanding scans."""
    f = poly_evaluator(p)
    for half in (2.0, 4.0, 8.0, 16.0, 64.0):
        vp = (-half, half, -half, half)
        if marching_squares(f, vp, 32):
            return vp
    return None


def implicit_points(
    p: MPoly,
    count: int,
    viewport: tuple[float, float, float, float] | None = None,
    resolution: int = 96,
) -> list[tuple[float, float]]:
    """Up to ``count`` well-spread Newton-refined points of the real zero set."""
    if viewport is None:
        viewport = auto_viewport(p)
        if viewport is None:
            return []
    f = poly_evaluator(p)
    segs = marching_squares(f, viewport, resolution)
    if not segs:
        return []
    stride = max(1, len(segs) // count)
    out = []
    for seg in segs[::stride]:
        mid = (0.5 * (seg[0][0] + seg[1][0]), 0.5 * (seg[0][1] + seg[1][1]))
        refined = newton_refine(p, mid)
        if refined is not None:
            out.append(refined)
        if len(out) >= count:
            break
    return out
