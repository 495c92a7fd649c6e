"""2D primitives and the refraction layer.

Scalars live in one of two towers: exact rationals (int / Fraction) for
algebraic identities, or 64-bit floats for trigonometric sampling.  All
operations preserve the tower of their inputs where that is possible;
square roots stay exact only when the radicand is a perfect rational
square, and otherwise degrade to float.

Conventions: the mirror normal is the gradient of the mirror's defining
equation (2*(X-O) for a circle, iota(dir) for a line); angles never appear
directly in the algebraic routines, which work with the squared sine-ratio
form of the refraction law instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2


Scalar = Union[int, Fraction, float]


class GeomError(Exception):
    """Base class for geometry-layer failures."""


class DegenerateConic(GeomError):
    """The refraction conic vanished identically."""


class TotalInternalReflection(GeomError):
    """No refracted ray exists: |sin(in)/n| > 1."""


class RadiantOnMirror(GeomError):
    """The evaluation point coincides with the radiant point."""


class AOnCircleOrCenter(GeomError):
    """Inverse point undefined: A lies on the circle or at its center."""


class RNotOffAxis(GeomError):
    """The tangent-circle construction needs R away from the axis through A and O."""


class DenominatorZero(GeomError):
    """Axis intersection undefined (tangential or axis-aligned ray)."""


class AEqualsO(GeomError):
    """Scene normalization needs the radiant point away from the circle center."""


def is_exact(v: Scalar) -> bool:
    return isinstance(v, (int, Fraction))


def sqrt_scalar(v: Scalar) -> Scalar:
    """Square root, exact when v is a perfect square of a rational."""
    if is_exact(v):
        if v < 0:
            raise ValueError("negative radicand")
        f = Fraction(v)
        num, den = gmpy2.mpz(f.numerator), gmpy2.mpz(f.denominator)
        if gmpy2.is_square(num) and gmpy2.is_square(den):
            return Fraction(int(gmpy2.isqrt(num)), int(gmpy2.isqrt(den)))
        return math.sqrt(float(v))
    return math.sqrt(v)


def sign(v: Scalar) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Dir2:
    """A nonzero direction vector."""

    x: Scalar
    y: Scalar

    def __post_init__(self):
        if self.x == 0 and self.y == 0:
            raise ValueError("zero direction")

    def __add__(self, other: "Dir2") -> "Dir2":
        return Dir2(self.x + other.x, self.y + other.y)

    def __neg__(self) -> "Dir2":
        return Dir2(-self.x, -self.y)

    def __mul__(self, k: Scalar) -> "Dir2":
        return Dir2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def norm_sq(self) -> Scalar:
        return self.x * self.x + self.y * self.y

    def norm(self) -> Scalar:
        return sqrt_scalar(self.norm_sq())

    def unit(self) -> "Dir2":
        n = self.norm()
        return Dir2(self.x / n, self.y / n)


@dataclass(frozen=True)
class Point2:
    x: Scalar
    y: Scalar

    def __sub__(self, other: "Point2") -> Dir2:
        return Dir2(self.x - other.x, self.y - other.y)

    def __add__(self, d: Dir2) -> "Point2":
        return Point2(self.x + d.x, self.y + d.y)


def iota(d: Dir2) -> Dir2:
    """Rotation by a quarter turn: (u1, u2) -> (-u2, u1)."""
    return Dir2(-d.y, d.x)


def dot(a: Dir2, b: Dir2) -> Scalar:
    return a.x * b.x + a.y * b.y


def cross(a: Dir2, b: Dir2) -> Scalar:
    return a.x * b.y - a.y * b.x


def dist_sq(a: Point2, b: Point2) -> Scalar:
    dx, dy = a.x - b.x, a.y - b.y
    return dx * dx + dy * dy


def dist(a: Point2, b: Point2) -> Scalar:
    return sqrt_scalar(dist_sq(a, b))


@dataclass(frozen=True)
class Line2:
    """A line through ``base`` with direction ``dir``."""

    base: Point2
    dir: Dir2

    def point_at(self, t: Scalar) -> Point2:
        return self.base + self.dir * t

    def offset_of(self, p: Point2) -> Scalar:
        """Signed offset of p from the line, scaled by |dir| (zero iff on line)."""
        return cross(self.dir, p - self.base)

    def distance_to(self, p: Point2) -> float:
        return abs(float(self.offset_of(p))) / math.sqrt(float(self.dir.norm_sq()))

    def same_line(self, other: "Line2", tol: float | None = None) -> bool:
        """Point-set equality, invariant under direction scaling and base shifts."""
        c1 = cross(self.dir, other.dir)
        c2 = cross(self.dir, other.base - self.base)
        if tol is None:
            return c1 == 0 and c2 == 0
        scale = math.sqrt(float(self.dir.norm_sq()) * float(other.dir.norm_sq()))
        shift = math.sqrt(float(self.dir.norm_sq())) * (
            1.0 + math.sqrt(float(dist_sq(other.base, self.base)))
        )
        return abs(float(c1)) <= tol * scale and abs(float(c2)) <= tol * shift


@dataclass(frozen=True)
class Circle2:
    center: Point2
    radius: Scalar

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def point_at(self, t: Scalar) -> Point2:
        """Rational parametrization O + r*(2t, t^2-1)/(1+t^2); misses the top point."""
        den = 1 + t * t
        return Point2(
            self.center.x + self.radius * 2 * t / den,
            self.center.y + self.radius * (t * t - 1) / den,
        )

    def point_at_angle(self, theta: float) -> Point2:
        return Point2(
            self.center.x + float(self.radius) * math.cos(theta),
            self.center.y + float(self.radius) * math.sin(theta),
        )


Mirror = Union[Circle2, Line2]


@dataclass(frozen=True)
class Radiant:
    """A light source: a finite point or a direction at infinity."""

    point: Point2 | None = None
    direction: Dir2 | None = None

    def __post_init__(self):
        if (self.point is None) == (self.direction is None):
            raise ValueError("exactly one of point/direction must be given")

    @staticmethod
    def finite(p: Point2) -> "Radiant":
        return Radiant(point=p)

    @staticmethod
    def at_infinity(d: Dir2) -> "Radiant":
        return Radiant(direction=d)

    @property
    def is_finite(self) -> bool:
        return self.point is not None


_ON_MIRROR_TOL = 1e-12


@dataclass(frozen=True)
class Scene:
    """Radiant point, mirror and refraction constant: the input to everything."""

    radiant: Radiant
    mirror: Mirror
    n: Scalar

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("refraction constant must be nonzero")
        if self.radiant.is_finite:
            a = self.radiant.point
            if isinstance(self.mirror, Circle2):
                d2 = dist_sq(a, self.mirror.center)
                r2 = self.mirror.radius * self.mirror.radius
                if is_exact(d2) and is_exact(r2):
                    on = d2 == r2
                else:
                    on = abs(math.sqrt(float(d2)) - float(self.mirror.radius)) < _ON_MIRROR_TOL
            else:
                off = self.mirror.offset_of(a)
                if is_exact(off):
                    on = off == 0
                else:
                    on = self.mirror.distance_to(a) < _ON_MIRROR_TOL
            if on:
                raise ValueError("radiant point must be strictly off the mirror")


def mirror_gradient(mirror: Mirror, X: Point2) -> Dir2:
    """Gradient of the mirror's defining equation at X."""
    if isinstance(mirror, Circle2):
        d = X - mirror.center
        return Dir2(2 * d.x, 2 * d.y)
    return iota(mirror.dir)


def incident_vector(scene: Scene, X: Point2) -> Dir2:
    """A - X for a finite radiant, the fixed direction for one at infinity."""
    if scene.radiant.is_finite:
        a = scene.radiant.point
        if a.x == X.x and a.y == X.y:
            raise RadiantOnMirror("X coincides with the radiant point")
        return a - X
    return scene.radiant.direction


@dataclass(frozen=True)
class QuadraticForm:
    """Homogeneous quadratic a*l1^2 + b*l1*l2 + c*l2^2 in a ray direction."""

    a: Scalar
    b: Scalar
    c: Scalar

    def __call__(self, l1: Scalar, l2: Scalar) -> Scalar:
        return self.a * l1 * l1 + self.b * l1 * l2 + self.c * l2 * l2

    def coefficient_norm(self) -> float:
        return abs(float(self.a)) + abs(float(self.b)) + abs(float(self.c))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0


def refraction_conic(scene: Scene, X: Point2, normal: Dir2) -> QuadraticForm:
    """The degree-2 condition on refracted-ray directions at X.

    Both refracted directions (for n and -n) are its projective roots; the
    form is the squared refraction law with denominators cleared, so it is
    insensitive to the sign of n and to scaling of the normal.
    """
    w = incident_vector(scene, X)
    g = iota(normal)
    wg = dot(w, g)
    n2w2 = scene.n * scene.n * w.norm_sq()
    a = wg * wg - n2w2 * g.x * g.x
    b = -2 * n2w2 * g.x * g.y
    c = wg * wg - n2w2 * g.y * g.y
    form = QuadraticForm(a, b, c)
    if form.is_zero():
        raise DegenerateConic("refraction condition vanishes identically")
    return form


def refract(scene: Scene, X: Point2) -> Line2:
    """The refracted ray at a mirror point X (float tower).

    The sign convention takes the incidence angle against sigma*(A - X)
    where sigma orients the incident vector to the same side as the normal.
    """
    w = incident_vector(scene, X)
    grad = mirror_gradient(scene.mirror, X)
    wx, wy = float(w.x), float(w.y)
    gx, gy = float(grad.x), float(grad.y)
    wn = math.hypot(wx, wy)
    gn = math.hypot(gx, gy)
    ghat = (gx / gn, gy / gn)
    that = (-ghat[1], ghat[0])
    sigma = 1.0 if wx * ghat[0] + wy * ghat[1] >= 0 else -1.0
    sin_in = sigma * (wx * that[0] + wy * that[1]) / wn
    sin_out = sin_in / float(scene.n)
    if abs(sin_out) > 1.0:
        raise TotalInternalReflection(f"|sin_in / n| = {abs(sin_out):.6f} > 1")
    cos_out = math.sqrt(1.0 - sin_out * sin_out)
    d = Dir2(cos_out * ghat[0] + sin_out * that[0], cos_out * ghat[1] + sin_out * that[1])
    return Line2(Point2(float(X.x), float(X.y)), d)


def inverse_point(A: Point2, circle: Circle2) -> Point2:
    """The inverse B of A in the circle: B on ray AO with |AO||BO| = r^2."""
    O = circle.center
    d2 = dist_sq(A, O)
    r2 = circle.radius * circle.radius
    if d2 == 0 or d2 == r2:
        raise AOnCircleOrCenter("A must differ from the center and avoid the circle")
    factor = 1 - r2 / d2
    return Point2(A.x + factor * (O.x - A.x), A.y + factor * (O.y - A.y))


def tangent_circle_through(A: Point2, R: Point2, O: Point2) -> Circle2:
    """The circle through A and R tangent to line RO at R.

    Its center E is the intersection of the perpendicular bisector of A, R
    with the perpendicular to RO at R; both conditions are linear, so E
    stays in the exact tower for exact inputs.
    """
    if A.x == R.x and A.y == R.y:
        raise ValueError("A and R must differ")
    u = iota(R - O)
    ra = R - A
    denom = 2 * dot(u, ra)
    if denom == 0:
        raise RNotOffAxis("R lies on the line through A and O")
    s = -ra.norm_sq() / denom
    E = R + u * s
    return Circle2(E, dist(E, R))


def refraction_radicand(r: Scalar, n: Scalar, theta: float) -> float:
    """Discriminant controlling existence of the refracted ray at angle theta."""
    c, s = math.cos(theta), math.sin(theta)
    rf, nf = float(r), float(n)
    return nf * nf * (1 + rf * rf + 2 * rf * c) - s * s


_AXIS_EPS = 1e-14


def axis_intersection(r: Scalar, n: Scalar, theta: float) -> float | None:
    """x-coordinate where the refracted ray at angle theta crosses the x-axis.

    The scene is the normalized one (radiant at the origin, circle of
    radius r centered at (1, 0)).  Returns None when no refracted ray
    exists; raises DenominatorZero for axis-aligned or tangential rays,
    whose intersection with the axis is ill-defined.
    """
    c, s = math.cos(theta), math.sin(theta)
    rf, nf = float(r), float(n)
    if abs(s) < _AXIS_EPS:
        raise DenominatorZero("ray along the axis: intersection undefined")
    rad = nf * nf * (1 + rf * rf + 2 * rf * c) - s * s
    if rad < 0:
        return None
    sigma = sign(-rf - c) or 1
    sgn_n = sign(nf)
    denom = sgn_n * c + sigma * math.sqrt(rad)
    if abs(denom) < _AXIS_EPS:
        raise DenominatorZero("tangential refracted ray")
    return sgn_n * rf / denom + 1.0


def branch_is_positive_unit_interval(x_int: float) -> bool:
    """Positive-branch test using the interval (0, 1)."""
    return 0.0 < x_int < 1.0


def branch_is_positive_segment_ab(x_int: float, r: Scalar) -> bool:
    """Positive-branch test using the open segment from A to B = (1 - r^2, 0)."""
    return 0.0 < x_int < 1.0 - float(r) * float(r)


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving similarity P -> scale * Rot * (P - origin).

    Rot has rows (a, b) and (-b, a) with a^2 + b^2 = 1.
    """

    origin: Point2
    a: Scalar
    b: Scalar
    scale: Scalar

    def apply(self, p: Point2) -> Point2:
        dx, dy = p.x - self.origin.x, p.y - self.origin.y
        return Point2(
            self.scale * (self.a * dx + self.b * dy),
            self.scale * (-self.b * dx + self.a * dy),
        )

    def apply_dir(self, d: Dir2) -> Dir2:
        return Dir2(
            self.scale * (self.a * d.x + self.b * d.y),
            self.scale * (-self.b * d.x + self.a * d.y),
        )

    def inverse(self) -> "Similarity":
        # T(P) = k*M*(P - o) inverts to T'(Q) = (1/k)*M^T*(Q - o') with o' = -k*M*o
        ox, oy = self.origin.x, self.origin.y
        o2 = Point2(
            -self.scale * (self.a * ox + self.b * oy),
            -self.scale * (-self.b * ox + self.a * oy),
        )
        return Similarity(origin=o2, a=self.a, b=-self.b, scale=1 / self.scale)


def normalize_scene(scene: Scene) -> tuple[Scene, Similarity]:
    """Similarity sending the radiant point to (0,0) and the center to (1,0).

    Exact whenever |A - O| is rational; otherwise the transform and the
    normalized scene live in the float tower.
    """
    if not scene.radiant.is_finite or not isinstance(scene.mirror, Circle2):
        raise ValueError("normalization needs a finite radiant and a circle mirror")
    A = scene.radiant.point
    O = scene.mirror.center
    u = O - A
    L2 = u.norm_sq()
    if L2 == 0:
        raise AEqualsO("radiant point coincides with the circle center")
    L = sqrt_scalar(L2)
    if isinstance(L, float):
        a, b, k = float(u.x) / L, float(u.y) / L, 1.0 / L
        origin = Point2(float(A.x), float(A.y))
        zero, one = 0.0, 1.0
    else:
        a, b, k = Fraction(u.x, 1) / L, Fraction(u.y, 1) / L, 1 / Fraction(L)
        origin = A
        zero, one = Fraction(0), Fraction(1)
    sim = Similarity(origin=origin, a=a, b=b, scale=k)
    new_scene = Scene(
        radiant=Radiant.finite(Point2(zero, zero)),
        mirror=Circle2(Point2(one, zero), scene.mirror.radius * k),
        n=scene.n,
    )
    return new_scene, sim
