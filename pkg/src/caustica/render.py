"""Deterministic SVG rendering of scenes, ray fans, ovals and caustics.

Output is byte-stable for a fixed configuration: numbers are printed with
six significant digits, there are no timestamps, and every layer is drawn
in a fixed order (mirror, rays, ovals, caustic, radiant).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .caustic import RayFamily, numeric_envelope
from .geom import Circle2, Line2, Point2, Radiant, Scene, refract, TotalInternalReflection, RadiantOnMirror
from .implicit import marching_squares, poly_evaluator
from .oval import from_circle_scene, from_line_scene, quartic_closure, OvalError
from .poly import MPoly
from .sceneio import SceneConfig


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s in ("-0", "-0.0") else s


class SvgCanvas:
    """World-coordinate drawing surface with a fixed pixel size."""

    def __init__(self, viewport: tuple[float, float, float, float], width: int, height: int):
        self.xmin, self.xmax, self.ymin, self.ymax = viewport
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def _sx(self, x: float) -> float:
        return (x - self.xmin) / (self.xmax - self.xmin) * self.width

    def _sy(self, y: float) -> float:
        return (self.ymax - y) / (self.ymax - self.ymin) * self.height

    def segment(self, a: tuple[float, float], b: tuple[float, float], color: str, width: float = 1.0):
        self._parts.append(
            f'<line x1="{_fmt(self._sx(a[0]))}" y1="{_fmt(self._sy(a[1]))}" '
            f'x2="{_fmt(self._sx(b[0]))}" y2="{_fmt(self._sy(b[1]))}" '
            f'stroke="{color}" stroke-width="{_fmt(width)}"/>'
        )

    def circle(self, center: tuple[float, float], radius: float, color: str, width: float = 1.5):
        rx = radius / (self.xmax - self.xmin) * self.width
        ry = radius / (self.ymax - self.ymin) * self.height
        self._parts.append(
            f'<ellipse cx="{_fmt(self._sx(center[0]))}" cy="{_fmt(self._sy(center[1]))}" '
            f'rx="{_fmt(rx)}" ry="{_fmt(ry)}" fill="none" stroke="{color}" stroke-width="{_fmt(width)}"/>'
        )

    def dot(self, p: tuple[float, float], color: str, px: float = 3.0):
        self._parts.append(
            f'<circle cx="{_fmt(self._sx(p[0]))}" cy="{_fmt(self._sy(p[1]))}" '
            f'r="{_fmt(px)}" fill="{color}"/>'
        )

    def clip_line(self, base: tuple[float, float], direction: tuple[float, float]):
        """Intersect an infinite line with the viewport; None if it misses."""
        bx, by = base
        dx, dy = direction
        ts = []
        for lo, hi, b, d in ((self.xmin, self.xmax, bx, dx), (self.ymin, self.ymax, by, dy)):
            if d == 0:
                if not (lo <= b <= hi):
                    return None
            else:
                t1, t2 = (lo - b) / d, (hi - b) / d
                ts.append((min(t1, t2), max(t1, t2)))
        tmin = max(t[0] for t in ts) if ts else -1.0
        tmax = min(t[1] for t in ts) if ts else 1.0
        if tmin >= tmax:
            return None
        return (bx + tmin * dx, by + tmin * dy), (bx + tmax * dx, by + tmax * dy)

    def to_svg(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([head, *self._parts, "</svg>"]) + "\n"


def _ray_thetas(samples: int) -> list[float]:
    return [2.0 * math.pi * k / samples for k in range(samples)]


def _draw_rays(canvas: SvgCanvas, scene: Scene, color: str, samples: int):
    mirror = scene.mirror
    if isinstance(mirror, Circle2):
        points = [mirror.point_at_angle(th) for th in _ray_thetas(samples)]
    else:
        span = max(canvas.xmax - canvas.xmin, canvas.ymax - canvas.ymin)
        d = mirror.dir
        norm = math.hypot(float(d.x), float(d.y))
        points = [
            mirror.base + d * ((span * 1.5) * (k / max(samples - 1, 1) - 0.5) / norm)
            for k in range(samples)
        ]
    for x_pt in points:
        try:
            ray = refract(scene, x_pt)
        except (TotalInternalReflection, RadiantOnMirror):
            continue
        seg = canvas.clip_line(
            (float(ray.base.x), float(ray.base.y)), (float(ray.dir.x), float(ray.dir.y))
        )
        if seg:
            canvas.segment(seg[0], seg[1], color, 0.6)


def _draw_implicit(canvas: SvgCanvas, poly: MPoly, color: str, grid: int):
    f = poly_evaluator(poly)
    segs = marching_squares(f, (canvas.xmin, canvas.xmax, canvas.ymin, canvas.ymax), grid)
    for a, b in segs:
        canvas.segment(a, b, color, 1.2)


def render_scene(
    cfg: SceneConfig,
    caustic: MPoly | None = None,
    ovals: MPoly | None = None,
) -> str:
    """Compose the figure: mirror, both ray fans, ovals, caustic cloud, radiant.

    The oval quartic and caustic polynomial are computed from the scene when
    not supplied (the caustic only for normalized circle scenes where the
    pipeline applies; otherwise the envelope cloud alone is drawn).
    """
    spec = cfg.render
    scene = cfg.to_scene()
    canvas = SvgCanvas(spec.viewport(), spec.width, spec.height)
    colors = spec.colors

    mirror = scene.mirror
    if isinstance(mirror, Circle2):
        canvas.circle(
            (float(mirror.center.x), float(mirror.center.y)), float(mirror.radius),
            colors["mirror"],
        )
    else:
        seg = canvas.clip_line(
            (float(mirror.base.x), float(mirror.base.y)),
            (float(mirror.dir.x), float(mirror.dir.y)),
        )
        if seg:
            canvas.segment(seg[0], seg[1], colors["mirror"], 1.5)

    if scene.radiant.is_finite:
        for sgn, color in ((1, colors["rays_pos"]), (-1, colors["rays_neg"])):
            signed = Scene(scene.radiant, scene.mirror, sgn * abs(scene.n))
            _draw_rays(canvas, signed, color, spec.samples)
    else:
        _draw_rays(canvas, scene, colors["rays_pos"], spec.samples)

    if ovals is None:
        try:
            if isinstance(mirror, Circle2) and scene.radiant.is_finite:
                ovals = quartic_closure(from_circle_scene(scene)[0])
            elif isinstance(mirror, Line2) and scene.radiant.is_finite:
                ovals = quartic_closure(from_line_scene(scene))
        except (OvalError, ValueError):
            ovals = None
    if ovals is not None:
        _draw_implicit(canvas, ovals, colors["ovals"], spec.grid)

    if scene.radiant.is_finite and isinstance(mirror, Circle2):
        for sgn in (1, -1):
            fam = RayFamily(Scene(scene.radiant, scene.mirror, sgn * abs(scene.n)))
            for p in numeric_envelope(fam, max(spec.samples, 64)):
                if canvas.xmin <= p.x <= canvas.xmax and canvas.ymin <= p.y <= canvas.ymax:
                    canvas.dot((float(p.x), float(p.y)), colors["caustic"], 1.4)
    if caustic is not None:
        _draw_implicit(canvas, caustic, colors["caustic"], spec.grid)

    if scene.radiant.is_finite:
        canvas.dot((float(scene.radiant.point.x), float(scene.radiant.point.y)), colors["radiant"], 3.5)
    return canvas.to_svg()
