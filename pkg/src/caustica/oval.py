"""Cartesian ovals: two-focus distance curves and their quartic closures.

An oval is the locus  branch*|A-M| + s*|B-M| = t  for foci A, B.  The
algebraic closure of all four sign choices is the quartic

    (|A-M|^2 - s^2 |B-M|^2 + t^2)^2 - 4 t^2 |A-M|^2,

which only involves s^2 and t^2, so it stays exact for every scene with
rational data even when s and t themselves are irrational.  Constructions
from refraction scenes (circle and line mirrors), normals, branch sampling
and the inverse problem (recovering the scene from the oval) live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geom import (
    Circle2,
    Dir2,
    GeomError,
    Line2,
    Point2,
    Radiant,
    Scene,
    dist,
    dist_sq,
    dot,
    inverse_point,
    iota,
    is_exact,
    sqrt_scalar,
)
from .poly import MPoly, content_and_primitive


class OvalError(GeomError):
    pass


class MNotOnOval(OvalError):
    """The queried point does not satisfy the oval equation."""


class MAtFocus(OvalError):
    """Normals are undefined at the foci."""


class NoConsistentScene(OvalError):
    """No circle scene reproduces the given oval parameters."""


class AbsNEqualsOne(OvalError):
    """|n| = 1 degenerates the line-mirror oval."""


class AOnLine(OvalError):
    """The radiant point lies on the mirror line."""


@dataclass(frozen=True)
class CartesianOval:
    """Focal data of one oval branch.

    ``s2`` and ``t2`` are the exact squares used by the algebraic closure;
    they default to s*s and t*t, and constructors that know better exact
    values pass them explicitly.
    """

    a: Point2
    b: Point2
    s: object
    t: object
    branch: int
    s2: object = None
    t2: object = None

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch sign must be +1 or -1")
        if self.s2 is None:
            object.__setattr__(self, "s2", self.s * self.s)
        if self.t2 is None:
            object.__setattr__(self, "t2", self.t * self.t)

    def residual(self, m: Point2) -> float:
        """branch*|A-M| + s*|B-M| - t at a float point."""
        da = math.hypot(float(m.x) - float(self.a.x), float(m.y) - float(self.a.y))
        db = math.hypot(float(m.x) - float(self.b.x), float(m.y) - float(self.b.y))
        return self.branch * da + float(self.s) * db - float(self.t)

    def scale(self) -> float:
        return max(1.0, abs(float(self.t)), math.sqrt(float(dist_sq(self.a, self.b))))


def quartic_closure(oval: CartesianOval) -> MPoly:
    """Exact quartic vanishing on all four sign variants of the oval.

    Content-normalized: integer coefficients, gcd 1, positive leading
    coefficient under graded lex.
    """
    for v in (oval.a.x, oval.a.y, oval.b.x, oval.b.y, oval.s2, oval.t2):
        if not is_exact(v):
            raise ValueError("quartic closure needs rational foci and parameters")
    x, y = MPoly.variable("x", ("x", "y")), MPoly.variable("y", ("x", "y"))
    ax, ay = Fraction(oval.a.x), Fraction(oval.a.y)
    bx, by = Fraction(oval.b.x), Fraction(oval.b.y)
    s2, t2 = Fraction(oval.s2), Fraction(oval.t2)
    da = (x - ax) * (x - ax) + (y - ay) * (y - ay)
    db = (x - bx) * (x - bx) + (y - by) * (y - by)
    inner = da - s2 * db + t2
    quartic = inner * inner - 4 * t2 * da
    return content_and_primitive(quartic)[1]


def from_circle_scene(scene: Scene) -> tuple[CartesianOval, CartesianOval]:
    """Both oval branches whose normals are the scene's refracted rays.

    Foci are the radiant point A and its inverse point B in the mirror;
    s = |A-O|/r and t = |A-O||A-B|/(r|n|).
    """
    if not isinstance(scene.mirror, Circle2) or not scene.radiant.is_finite:
        raise ValueError("needs a circle mirror and a finite radiant point")
    a = scene.radiant.point
    circ = scene.mirror
    b = inverse_point(a, circ)
    d_ao2 = dist_sq(a, circ.center)
    d_ab2 = dist_sq(a, b)
    r2 = circ.radius * circ.radius
    n2 = scene.n * scene.n
    s2 = d_ao2 / r2
    t2 = d_ao2 * d_ab2 / (r2 * n2)
    s = sqrt_scalar(s2)
    t = sqrt_scalar(t2)
    plus = CartesianOval(a, b, s, t, +1, s2=s2, t2=t2)
    minus = CartesianOval(a, b, s, t, -1, s2=s2, t2=t2)
    return plus, minus


def reflect_point(p: Point2, line: Line2) -> Point2:
    """Mirror image of p across a line (exact for exact inputs)."""
    nu = iota(line.dir)
    k = 2 * dot(line.base - p, nu) / nu.norm_sq()
    return Point2(p.x + k * nu.x, p.y + k * nu.y)


def from_line_scene(scene: Scene) -> CartesianOval:
    """The single real oval for a line mirror: an ellipse or hyperbola branch.

    Foci are A and its reflection B across the line; s = 1, t = |A-B|/|n|;
    the branch sign is + for |n| < 1 and - for |n| > 1, which is exactly
    the choice with real points.
    """
    if not isinstance(scene.mirror, Line2) or not scene.radiant.is_finite:
        raise ValueError("needs a line mirror and a finite radiant point")
    n2 = scene.n * scene.n
    if n2 == 1:
        raise AbsNEqualsOne("|n| = 1 gives the degenerate bisector case")
    a = scene.radiant.point
    if scene.mirror.offset_of(a) == 0:
        raise AOnLine("radiant point on the mirror line")
    b = reflect_point(a, scene.mirror)
    d2 = dist_sq(a, b)
    t2 = d2 / n2
    branch = +1 if n2 < 1 else -1
    return CartesianOval(a, b, 1, sqrt_scalar(t2), branch, s2=d2 / d2, t2=t2)


def gradient_at(oval: CartesianOval, m: Point2) -> Dir2:
    """Gradient of branch*|A-M| + s*|B-M| - t at a point off the foci."""
    da = dist(m, oval.a)
    db = dist(m, oval.b)
    if da == 0 or db == 0:
        raise MAtFocus("gradient undefined at a focus")
    gx = oval.branch * (m.x - oval.a.x) / da + oval.s * (m.x - oval.b.x) / db
    gy = oval.branch * (m.y - oval.a.y) / da + oval.s * (m.y - oval.b.y) / db
    if gx == 0 and gy == 0:
        raise OvalError("stationary point of the distance function")
    return Dir2(gx, gy)


def normal_line(oval: CartesianOval, m: Point2, tol: float = 1e-9) -> Line2:
    """The oval normal at m: the line through m along the gradient.

    It is the unique line through m whose angles alpha, beta against the
    focal rays satisfy sin(alpha)/sin(beta) = |s|.
    """
    res = oval.residual(m)
    if abs(res) > tol * oval.scale():
        raise MNotOnOval(f"residual {res:.3e} exceeds tolerance")
    return Line2(m, gradient_at(oval, m))


def invert_to_scene(oval: CartesianOval) -> Scene:
    """Recover the circle scene (O, r, n) generating this oval.

    Solves |A-O|/r = s and |A-O||A-B|/(r n) = t with B the inverse point of
    A, assuming O on the line through A and B.  Only s > 0, s != 1 admits a
    circle; s = 1 is the line-mirror limit.
    """
    s2 = oval.s2
    if s2 == 0 or s2 == 1 or oval.s < 0:
        raise NoConsistentScene("s in {0, 1} has no circle-mirror preimage")
    d2 = dist_sq(oval.a, oval.b)
    if d2 == 0:
        raise NoConsistentScene("coincident foci")
    # O = A + (B-A) * s^2/(s^2-1); r^2 = d^2 s^2/(s^2-1)^2; n = s d / t
    lam = s2 / (s2 - 1)
    O = Point2(oval.a.x + lam * (oval.b.x - oval.a.x), oval.a.y + lam * (oval.b.y - oval.a.y))
    r2 = d2 * s2 / ((s2 - 1) * (s2 - 1))
    n2 = s2 * d2 / oval.t2
    r = sqrt_scalar(r2)
    n = sqrt_scalar(n2)
    return Scene(radiant=Radiant.finite(oval.a), mirror=Circle2(O, r), n=n)


def _rho_bound(oval: CartesianOval) -> float:
    t = abs(float(oval.t))
    d = math.sqrt(float(dist_sq(oval.a, oval.b)))
    s = float(oval.s)
    if oval.branch == 1:
        if s > 1e-9:
            return min(t, (t + d) / s) + d + 1.0
        return t + d + 1.0
    if s > 1:
        return (t + d) / (s - 1) + d + 1.0
    # unbounded hyperbola-type branches: sample a finite window near the foci
    return 4.0 * (t + d + 1.0)


def sample_branch(oval: CartesianOval, count: int) -> list[Point2]:
    """Float points on the branch, by radial root isolation from the midpoint.

    Scans ``count`` directions from the midpoint of the foci, bisecting each
    bracketed sign change of the distance residual; returns every root found.
    An empty list means the branch has no real points in the search window
    (after one denser rescan).
    """
    if count < 1:
        raise ValueError("count must be positive")
    pts = _radial_scan(oval, count, 128)
    if not pts:
        pts = _radial_scan(oval, max(8 * count, 64), 1024)
    return pts


def _radial_scan(oval: CartesianOval, directions: int, steps: int) -> list[Point2]:
    mx = (float(oval.a.x) + float(oval.b.x)) / 2.0
    my = (float(oval.a.y) + float(oval.b.y)) / 2.0
    rho_max = _rho_bound(oval)
    out: list[Point2] = []
    for k in range(directions):
        phi = 2.0 * math.pi * k / directions
        cx, sy = math.cos(phi), math.sin(phi)

        def f(rho: float) -> float:
            return oval.residual(Point2(mx + rho * cx, my + rho * sy))

        prev_rho, prev_val = 0.0, f(0.0)
        for i in range(1, steps + 1):
            rho = rho_max * i / steps
            val = f(rho)
            if prev_val == 0.0:
                out.append(Point2(mx + prev_rho * cx, my + prev_rho * sy))
            elif val != 0.0 and (prev_val < 0.0) != (val < 0.0):
                lo, hi = prev_rho, rho
                flo = prev_val
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    fm = f(mid)
                    if fm == 0.0:
                        lo = hi = mid
                        break
                    if (fm < 0.0) == (flo < 0.0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                root = 0.5 * (lo + hi)
                p = Point2(mx + root * cx, my + root * sy)
                if abs(oval.residual(p)) < 1e-10 * oval.scale():
                    out.append(p)
            prev_rho, prev_val = rho, val
    return out
