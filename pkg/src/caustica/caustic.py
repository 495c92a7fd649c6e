"""The complete-caustic pipeline for circle mirrors.

Everything here works in the normalized frame: radiant point at the
origin, mirror circle centered at (1, 0) with rational radius r, rational
refraction constant n.  Two independent symbolic routes are provided:

* envelope route: the one-parameter family F(x, y, t) of refracted-ray
  lines (rational circle parameter t), eliminated against dF/dt by a
  Sylvester resultant, then cleaned of its known spurious factors
  (coordinate axis, the mirror circle, the leading-coefficient conic);

* evolute route: the Cartesian-oval quartic of the scene, pushed through
  the Euclidean-distance-discriminant system (curve, normal-line
  condition, Jacobian determinant) and eliminated by iterated resultants.

Their outputs must agree exactly up to a rational scalar; cross_verify
asserts this and additionally referees both against numeric envelope
points and numeric centers of curvature.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .geom import (
    Circle2,
    DenominatorZero,
    Line2,
    Point2,
    Radiant,
    RadiantOnMirror,
    Scene,
    TotalInternalReflection,
    cross,
    is_exact,
    normalize_scene,
    refract,
)
from .implicit import implicit_points, newton_refine, poly_evaluator
from .oval import CartesianOval, from_circle_scene, quartic_closure, sample_branch
from .poly import (
    MPoly,
    content_and_primitive,
    derivative,
    eliminate_two,
    extend_vars,
    format_poly,
    neg,
    primitive_part,
    rename_vars,
    sylvester_resultant,
    try_exact_div,
)


class CausticError(Exception):
    pass


class EliminationCollapse(CausticError):
    """No factor of the eliminated polynomial survived the residual referee."""


class PipelineMismatch(CausticError):
    """Envelope and evolute routes disagree; both polynomials attached."""

    def __init__(self, message: str, envelope: MPoly, evolute: MPoly):
        super().__init__(message)
        self.envelope = envelope
        self.evolute = evolute


def _require_rational(value, what: str) -> Fraction:
    if not is_exact(value):
        raise ValueError(f"{what} must be an exact rational, got {value!r}")
    return Fraction(value)


def build_family(r=None, n=None) -> MPoly:
    """The refracted-ray family polynomial F(x, y, t) of the normalized scene.

    The mirror point is R(t) = (1, 0) + r*(2t, t^2-1)/(1+t^2); F is the
    numerator of the squared refraction law along the ray through (x, y)
    and R(t), with all powers of (1+t^2) and all factors free of x and y
    divided out.  Passing None for r and/or n keeps them as variables.
    """
    vs = ["x", "y", "t"]
    if r is None:
        vs.append("r")
    if n is None:
        vs.append("n")
    vs = tuple(vs)
    x = MPoly.variable("x", vs)
    y = MPoly.variable("y", vs)
    t = MPoly.variable("t", vs)
    one = MPoly.constant(1, vs)
    rp = MPoly.variable("r", vs) if r is None else MPoly.constant(_require_rational(r, "r"), vs)
    np_ = MPoly.variable("n", vs) if n is None else MPoly.constant(_require_rational(n, "n"), vs)

    den = one + t * t
    rx = den + 2 * rp * t          # numerator of R_x over den
    ry = rp * (t * t - one)        # numerator of R_y over den
    inx, iny = neg(ry), rx - den   # iota of the circle normal R - O, same scale
    wx, wy = neg(rx), neg(ry)      # A - R(t), A at the origin
    ux, uy = x * den - rx, y * den - ry
    f = (ux * ux + uy * uy) * (wx * inx + wy * iny) ** 2 \
        - np_ * np_ * (wx * wx + wy * wy) * (ux * inx + uy * iny) ** 2

    for divisor in (den, rp, np_, t):
        if divisor.total_degree() == 0:
            continue  # constant specializations are absorbed by the primitive part
        while True:
            q = try_exact_div(f, divisor)
            if q is None or q.is_zero():
                break
            f = q
    return primitive_part(f)


def spurious_factor_basis(r=None, n=None) -> list[MPoly]:
    """Primitive base factors known to pollute the raw envelope resultant.

    For a specialized scene these are y, the mirror circle
    (x-1)^2 + y^2 - r^2, the leading-coefficient conic
    (x-1)^2 (r^2 n^2 + n^2 - 1) - (y - r)^2, and the pair of mirror
    tangents through the radiant point r^2 x^2 - (1 - r^2) y^2 (inert for
    generic n; it carries the degenerate undeviated-pencil contribution at
    |n| = 1).  Symbolically the scalar degeneracies n, r-1, r+1 join the
    list.
    """
    symbolic = r is None or n is None
    vs = ("x", "y") if not symbolic else ("x", "y", "r", "n")
    x = MPoly.variable("x", vs)
    y = MPoly.variable("y", vs)
    if symbolic:
        rp = MPoly.variable("r", vs)
        np_ = MPoly.variable("n", vs)
    else:
        rp = MPoly.constant(_require_rational(r, "r"), vs)
        np_ = MPoly.constant(_require_rational(n, "n"), vs)
    one = MPoly.constant(1, vs)
    circle = (x - one) ** 2 + y * y - rp * rp
    lead = (x - one) ** 2 * (rp * rp * np_ * np_ + np_ * np_ - one) - (y - rp) ** 2
    tangents = rp * rp * x * x - (one - rp * rp) * y * y
    basis = [y, primitive_part(circle), primitive_part(lead), primitive_part(tangents)]
    if symbolic:
        basis = [np_, rp - one, rp + one] + basis
    return basis


@dataclass
class CausticResult:
    """Raw resultant, recorded spurious factors, and the residual caustic."""

    raw_resultant: MPoly
    content: mpq
    stripped: list[tuple[MPoly, int]] = field(default_factory=list)
    caustic_poly: MPoly | None = None
    specialized_at: tuple[Fraction, Fraction] | None = None

    def reconstructed(self) -> MPoly:
        p = self.caustic_poly
        for fac, mult in self.stripped:
            for _ in range(mult):
                p = p * fac
        return p


def envelope_resultant(family: MPoly, var: str = "t") -> CausticResult:
    """Raw envelope of the family: res_var(F, dF/dvar), primitive part."""
    raw = sylvester_resultant(family, derivative(family, var), var)
    if raw.is_zero():
        raise CausticError("envelope resultant vanished identically")
    content, prim = content_and_primitive(raw)
    return CausticResult(raw_resultant=prim, content=content, caustic_poly=prim)


def strip_spurious(result: CausticResult, r=None, n=None) -> CausticResult:
    """Divide out the known spurious factors to maximal multiplicity.

    Factors that do not divide are recorded with multiplicity 0; the exact
    identity raw = caustic * prod(factor^mult) is re-checked by
    multiplication.
    """
    if r is None and n is None and result.specialized_at is not None:
        r, n = result.specialized_at
    work = result.caustic_poly if result.caustic_poly is not None else result.raw_resultant
    stripped: list[tuple[MPoly, int]] = []
    for fac in spurious_factor_basis(r, n):
        mult = 0
        while True:
            q = try_exact_div(work, fac)
            if q is None:
                break
            work = q
            mult += 1
        stripped.append((fac, mult))
    out = CausticResult(
        raw_resultant=result.raw_resultant,
        content=result.content,
        stripped=stripped,
        caustic_poly=primitive_part(work),
        specialized_at=(None if r is None or n is None else (Fraction(r), Fraction(n))),
    )
    if out.reconstructed() != out.raw_resultant:
        raise CausticError("factor bookkeeping failed to reconstruct the raw resultant")
    return out


# -- curvature and numeric referees ------------------------------------------


def implicit_curvature_center(
    p: MPoly, pt: tuple[float, float]
) -> tuple[float, float] | None:
    """Center of curvature of {p = 0} at a point, from first and second derivatives.

    Returns None where the curvature (or the gradient) degenerates.
    """
    fx = poly_evaluator(derivative(p, "x"))
    fy = poly_evaluator(derivative(p, "y"))
    fxx = poly_evaluator(derivative(derivative(p, "x"), "x"))
    fxy = poly_evaluator(derivative(derivative(p, "x"), "y"))
    fyy = poly_evaluator(derivative(derivative(p, "y"), "y"))
    x, y = pt
    gx, gy = fx(x, y), fy(x, y)
    e = gx * gx + gy * gy
    if e < 1e-20:
        return None
    h = fxx(x, y) * gy * gy - 2 * fxy(x, y) * gx * gy + fyy(x, y) * gx * gx
    if abs(h) < 1e-14 * max(1.0, e ** 1.5):
        return None
    w = e / h
    return (x - w * gx, y - w * gy)


def _metric_curvature_center(oval: CartesianOval, pt: Point2) -> tuple[float, float] | None:
    """Curvature center from the distance-sum form (covers the s = 0 closure)."""
    ax, ay = float(oval.a.x), float(oval.a.y)
    bx, by = float(oval.b.x), float(oval.b.y)
    s, br = float(oval.s), float(oval.branch)
    x, y = float(pt.x), float(pt.y)
    da = math.hypot(x - ax, y - ay)
    db = math.hypot(x - bx, y - by)
    if da < 1e-14 or db < 1e-14:
        return None
    uax, uay = (x - ax) / da, (y - ay) / da
    ubx, uby = (x - bx) / db, (y - by) / db
    gx = br * uax + s * ubx
    gy = br * uay + s * uby
    fxx = br * (1 - uax * uax) / da + s * (1 - ubx * ubx) / db
    fxy = -br * uax * uay / da - s * ubx * uby / db
    fyy = br * (1 - uay * uay) / da + s * (1 - uby * uby) / db
    e = gx * gx + gy * gy
    if e < 1e-20:
        return None
    h = fxx * gy * gy - 2 * fxy * gx * gy + fyy * gx * gx
    if abs(h) < 1e-14:
        return None
    w = e / h
    return (x - w * gx, y - w * gy)


def curvature_centers(oval: CartesianOval, count: int) -> list[Point2]:
    """Numeric evolute points: M + (1/kappa) * unit normal over sampled M.

    Uses the implicit quartic's derivatives; where the quartic gradient
    degenerates (the squared s = 0 closure), the distance-sum form takes
    over.  Inflection points (vanishing curvature) are skipped.
    """
    pts = sample_branch(oval, count)
    quartic = quartic_closure(oval)
    fx = poly_evaluator(derivative(quartic, "x"))
    fy = poly_evaluator(derivative(quartic, "y"))
    out: list[Point2] = []
    for p in pts:
        x, y = float(p.x), float(p.y)
        scale = sum(abs(float(c)) for c in quartic.terms.values())
        if fx(x, y) ** 2 + fy(x, y) ** 2 > 1e-16 * scale * scale:
            c = implicit_curvature_center(quartic, (x, y))
        else:
            c = _metric_curvature_center(oval, p)
        if c is not None:
            out.append(Point2(c[0], c[1]))
    return out


def scaled_residual(p: MPoly, x: float, y: float) -> float:
    """|p(x, y)| relative to the coefficient 1-norm and the point's magnitude."""
    value = abs(p.evaluate_float({"x": x, "y": y}))
    norm = float(p.coeff_l1())
    deg = p.total_degree()
    return value / (norm * max(1.0, math.hypot(x, y)) ** deg)


def exact_point_ratio(p: MPoly, x: float, y: float) -> float:
    """|p(x, y)| / sum |terms(x, y)|, evaluated in exact rational arithmetic.

    Floats are dyadic rationals, so the only error in this ratio is the
    error of the point itself; it is immune to the huge coefficient spreads
    of iterated-resultant factors, where float evaluation drowns in noise.
    """
    xq, yq = mpq(Fraction(x)), mpq(Fraction(y))
    dx = max((e[0] for e in p.terms), default=0)
    dy = max((e[1] for e in p.terms), default=0)
    xpow, ypow = [mpq(1)], [mpq(1)]
    for _ in range(dx):
        xpow.append(xpow[-1] * xq)
    for _ in range(dy):
        ypow.append(ypow[-1] * yq)
    total, mag = mpq(0), mpq(0)
    for e, c in p.terms.items():
        term = c * xpow[e[0]] * ypow[e[1]]
        total += term
        mag += abs(term)
    return float(abs(total) / mag) if mag else 0.0


def vanishes_at_points(
    p: MPoly, points: list[tuple[float, float]], tol: float = 1e-6
) -> bool:
    """Does p vanish (to point accuracy) at every given point?

    Each point's residual is compared against the residual at two nearby
    control points; the factor passes only when every on-point residual is
    below tol times its off-point level.  The contrast form self-normalizes
    away the wildly varying magnitude scales of elimination byproducts.
    """
    if p.total_degree() == 0:
        return False
    for x, y in points:
        on = exact_point_ratio(p, x, y)
        delta = 1e-4 * max(1.0, math.hypot(x, y))
        off = max(
            exact_point_ratio(p, x + delta, y + 0.618 * delta),
            exact_point_ratio(p, x - 0.618 * delta, y + delta),
        )
        if on > tol * off:
            return False
    return True


# -- ray families and numeric envelopes ---------------------------------------


@dataclass(frozen=True)
class RayFamily:
    """Refracted rays of a circle scene, parametrized by the mirror angle."""

    scene: Scene

    def __post_init__(self):
        m = self.scene.mirror
        if not isinstance(m, Circle2):
            raise ValueError("ray families need a circle mirror")

    def ray(self, theta: float) -> Line2 | None:
        x_pt = self.scene.mirror.point_at_angle(theta)
        try:
            return refract(self.scene, x_pt)
        except (TotalInternalReflection, RadiantOnMirror, DenominatorZero):
            return None

    def validity_intervals(self) -> list[tuple[float, float]]:
        """Angle intervals where the refracted ray exists (closed form).

        For a finite radiant at distance d the existence radicand
        n^2 (d^2 + r^2 + 2 r d cos t) - d^2 sin^2 t is an upward parabola
        in cos t (t measured from the direction opposite the radiant); its
        roots cut the circle into at most two valid arcs.  For a radiant at
        infinity the condition is |sin(angle to the normal)| <= |n|.
        """
        n = float(self.scene.n)
        mirror = self.scene.mirror
        if not self.scene.radiant.is_finite:
            d = self.scene.radiant.direction
            theta_v = math.atan2(float(d.y), float(d.x))
            if abs(n) >= 1.0:
                return [(0.0, 2 * math.pi)]
            a = math.asin(abs(n))
            return [(theta_v - a, theta_v + a), (theta_v + math.pi - a, theta_v + math.pi + a)]
        a_pt = self.scene.radiant.point
        o = mirror.center
        dx, dy = float(a_pt.x) - float(o.x), float(a_pt.y) - float(o.y)
        d = math.hypot(dx, dy)
        r = float(mirror.radius) / d
        shift = math.atan2(dy, dx) + math.pi  # world angle playing the role of t = 0
        disc = n**4 * r * r - n * n * (1 + r * r) + 1
        if disc <= 0:
            return [(0.0, 2 * math.pi)]
        c_lo = -n * n * r - math.sqrt(disc)
        c_hi = -n * n * r + math.sqrt(disc)
        out: list[tuple[float, float]] = []
        if c_hi < 1.0:
            alpha = math.acos(max(c_hi, -1.0))
            if alpha > 0:
                out.append((shift - alpha, shift + alpha))
        if c_lo > -1.0:
            beta = math.acos(min(c_lo, 1.0))
            if beta < math.pi:
                out.append((shift + beta, shift + 2 * math.pi - beta))
        if not out and disc <= 1e-15:
            return [(0.0, 2 * math.pi)]
        return out


_CONDITION_LIMIT = 1e8


def _intersect_lines(l1: Line2, l2: Line2) -> tuple[float, float] | None:
    d1, d2 = l1.dir, l2.dir
    det = float(cross(d1, d2))
    n1 = math.hypot(float(d1.x), float(d1.y))
    n2 = math.hypot(float(d2.x), float(d2.y))
    if det == 0 or n1 * n2 / abs(det) > _CONDITION_LIMIT:
        return None
    dx = float(l2.base.x) - float(l1.base.x)
    dy = float(l2.base.y) - float(l1.base.y)
    s = (dx * float(d2.y) - dy * float(d2.x)) / det
    return (float(l1.base.x) + s * float(d1.x), float(l1.base.y) + s * float(d1.y))


def numeric_envelope(family: RayFamily, count: int) -> list[Point2]:
    """Envelope point cloud from intersections of adjacent refracted rays.

    Adjacent means separated by delta = interval width / 1024; intersections
    of nearly parallel pairs (condition number above 1e8) are dropped, as
    are samples whose ray does not exist.
    """
    intervals = family.validity_intervals()
    if not intervals:
        return []
    out: list[Point2] = []
    per = max(1, count // len(intervals))
    for lo, hi in intervals:
        width = hi - lo
        if width <= 0:
            continue
        delta = width / 1024.0
        for j in range(per):
            theta = lo + width * (j + 0.5) / per
            r1 = family.ray(theta)
            r2 = family.ray(theta + delta)
            if r1 is None or r2 is None:
                continue
            pt = _intersect_lines(r1, r2)
            if pt is not None:
                out.append(Point2(pt[0], pt[1]))
    return out


# -- the evolute route --------------------------------------------------------


def ed_discriminant_system(quartic: MPoly) -> tuple[MPoly, MPoly, MPoly]:
    """Curve, normal-line condition and their Jacobian determinant in (x0, y0)."""
    g = rename_vars(quartic, {"x": "x0", "y": "y0"})
    vs = ("x0", "y0", "x", "y")
    g = extend_vars(g, vs)
    x0 = MPoly.variable("x0", vs)
    y0 = MPoly.variable("y0", vs)
    x = MPoly.variable("x", vs)
    y = MPoly.variable("y", vs)
    gx, gy = derivative(g, "x0"), derivative(g, "y0")
    normal_cond = (x0 - x) * gy - (y0 - y) * gx
    jac = derivative(g, "x0") * derivative(normal_cond, "y0") - derivative(
        g, "y0"
    ) * derivative(normal_cond, "x0")
    return g, normal_cond, jac


def evolute_eliminate(
    quartic: MPoly,
    candidates: tuple[MPoly, ...] = (),
    center_samples: int = 20,
    tol: float = 1e-6,
    details: dict | None = None,
) -> MPoly:
    """Evolute of an implicit curve by resultant elimination plus a referee.

    Builds the three-polynomial distance-discriminant system and eliminates
    the curve point (x0, y0).  The iterated resultant carries extraneous
    factors; candidate factors (if given) are divided out to maximal
    multiplicity and every piece is tested against numeric centers of
    curvature of the input curve.  The product of the pieces that vanish on
    all sampled centers is returned (the unsplit eliminant itself, when no
    candidate divides it).
    """
    f1, f2, f3 = ed_discriminant_system(quartic)
    p = eliminate_two(f1, f2, f3, "x0", "y0")

    work = p
    pieces: list[tuple[MPoly, int]] = []
    for cand in candidates:
        cand = primitive_part(cand)
        mult = 0
        while True:
            q = try_exact_div(work, cand)
            if q is None:
                break
            work = q
            mult += 1
        if mult:
            pieces.append((cand, mult))
    remainder = primitive_part(work) if not work.is_zero() else work
    if remainder.total_degree() > 0:
        pieces.append((remainder, 1))
    elif not pieces:
        raise EliminationCollapse("elimination produced a constant")

    centers = _reference_centers(quartic, center_samples)
    if not centers:
        raise EliminationCollapse("no numeric curvature centers available as referee")
    passing = []
    rejected = []
    for fac, _mult in pieces:
        (passing if vanishes_at_points(fac, centers, tol) else rejected).append(fac)
    if details is not None:
        details["eliminant_degree"] = p.total_degree()
        details["eliminant_terms"] = p.term_count()
        details["multiplicities"] = [(format_poly(f)[:40], m) for f, m in pieces]
        details["center_count"] = len(centers)
        details["rejected_degrees"] = [f.total_degree() for f in rejected]
    if not passing:
        raise EliminationCollapse("no factor vanishes on the numeric evolute points")
    out = passing[0]
    for fac in passing[1:]:
        out = out * fac
    return primitive_part(out)


def _reference_centers(quartic: MPoly, count: int) -> list[tuple[float, float]]:
    pts = implicit_points(quartic, max(2 * count, 24))
    centers = []
    for pt in pts:
        refined = newton_refine(quartic, pt)
        c = implicit_curvature_center(quartic, refined if refined else pt)
        if c is not None and math.isfinite(c[0]) and math.isfinite(c[1]):
            centers.append(c)
        if len(centers) >= count:
            break
    return centers


# -- the full cross-verification ----------------------------------------------


@dataclass
class CrossVerifyReport:
    r: Fraction
    n: Fraction
    agree: bool
    caustic: MPoly
    raw_degree: int
    raw_terms: int
    caustic_degree: int
    caustic_terms: int
    stripped: list[tuple[str, int]]
    evolute_info: dict
    envelope_points: int
    envelope_max_residual: float
    envelope_tol: float
    center_points: int
    center_max_residual: float
    timings: dict

    def to_json_dict(self) -> dict:
        from .poly import poly_to_json

        return {
            "r": str(self.r),
            "n": str(self.n),
            "agree": self.agree,
            "caustic": poly_to_json(self.caustic),
            "raw_degree": self.raw_degree,
            "raw_terms": self.raw_terms,
            "caustic_degree": self.caustic_degree,
            "caustic_terms": self.caustic_terms,
            "stripped": [{"factor": f, "multiplicity": m} for f, m in self.stripped],
            "evolute": self.evolute_info,
            "numeric_envelope": {
                "points": self.envelope_points,
                "max_scaled_residual": self.envelope_max_residual,
                "tolerance": self.envelope_tol,
                "ok": self.envelope_max_residual < self.envelope_tol,
            },
            "curvature_centers": {
                "points": self.center_points,
                "max_scaled_residual": self.center_max_residual,
            },
            "timings_s": self.timings,
        }


def normalized_scene(r, n) -> Scene:
    """The canonical scene: radiant at the origin, circle of radius r at (1, 0)."""
    r = _require_rational(r, "r")
    n = _require_rational(n, "n")
    return Scene(
        radiant=Radiant.finite(Point2(Fraction(0), Fraction(0))),
        mirror=Circle2(Point2(Fraction(1), Fraction(0)), r),
        n=n,
    )


def cross_verify(
    scene: Scene,
    envelope_samples: int = 512,
    residual_tol: float = 1e-5,
) -> CrossVerifyReport:
    """Run both pipelines for one scene and require exact agreement.

    The envelope route (family resultant + spurious stripping) and the
    evolute route (oval quartic + distance-discriminant elimination) must
    produce the same primitive polynomial; numeric envelope points and
    numeric curvature centers referee both.  Raises PipelineMismatch with
    both polynomials attached if the routes differ.
    """
    nscene, _ = normalize_scene(scene)
    r = _require_rational(nscene.mirror.radius, "normalized radius")
    n = _require_rational(nscene.n, "refraction constant")
    if (n * r) ** 2 == 1:
        # |n| = |A-O|/r puts the inverse point B on the ovals; the quartic
        # acquires a node at B and the envelope resultant squares one
        # caustic component, so the two routes cannot be compared as
        # polynomials.
        raise CausticError(
            "degenerate configuration |n| = |A-O|/r: the inverse point lies on "
            "the ovals; cross-verification is not defined here"
        )
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    family = build_family(r, n)
    raw = envelope_resultant(family, "t")
    stripped = strip_spurious(raw, r, n)
    caustic = stripped.caustic_poly
    timings["envelope_route"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    plus, _minus = from_circle_scene(nscene)
    quartic = quartic_closure(plus)
    evolute_info: dict = {}
    evolute = evolute_eliminate(quartic, candidates=(caustic,), details=evolute_info)
    timings["evolute_route"] = time.perf_counter() - t0

    agree = evolute == caustic
    if not agree:
        raise PipelineMismatch(
            "envelope and evolute routes disagree", caustic, evolute
        )

    t0 = time.perf_counter()
    env_resid = []
    for sgn in (1, -1):
        fam = RayFamily(Scene(nscene.radiant, nscene.mirror, sgn * nscene.n))
        for p in numeric_envelope(fam, envelope_samples):
            env_resid.append(scaled_residual(caustic, float(p.x), float(p.y)))
    centers = curvature_centers(plus, 32) + curvature_centers(_minus, 32)
    cen_resid = [scaled_residual(caustic, float(c.x), float(c.y)) for c in centers]
    timings["numeric_referee"] = time.perf_counter() - t0

    return CrossVerifyReport(
        r=r,
        n=n,
        agree=agree,
        caustic=caustic,
        raw_degree=stripped.raw_resultant.total_degree(),
        raw_terms=stripped.raw_resultant.term_count(),
        caustic_degree=caustic.total_degree(),
        caustic_terms=caustic.term_count(),
        stripped=[(format_poly(f), m) for f, m in stripped.stripped],
        evolute_info=evolute_info,
        envelope_points=len(env_resid),
        envelope_max_residual=max(env_resid) if env_resid else float("inf"),
        envelope_tol=residual_tol,
        center_points=len(cen_resid),
        center_max_residual=max(cen_resid) if cen_resid else float("inf"),
        timings=timings,
    )
