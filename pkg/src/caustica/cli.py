"""Command-line interface: ovals, caustic, render, verify.

Every subcommand takes a scene file (--scene) and writes its outputs under
--out.  Exit code 0 means all requested checks passed; config errors exit
with 2, check failures and pipeline mismatches with 1.  The environment
variable CAUSTICA_THREADS caps the worker threads used for the independent
verification checks.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import caustic as ca
from .geom import (
    Circle2,
    Line2,
    Point2,
    TotalInternalReflection,
    RadiantOnMirror,
    DenominatorZero,
    cross,
    dist_sq,
    inverse_point,
    refract,
    refraction_conic,
    mirror_gradient,
    tangent_circle_through,
    normalize_scene,
)
from .oval import from_circle_scene, from_line_scene, normal_line, quartic_closure, sample_branch
from .poly import MPoly, evaluate, format_poly, poly_to_json, primitive_part
from .render import render_scene
from .sceneio import ConfigError, parse_config, print_config


class UnsupportedMirror(Exception):
    """The subcommand does not apply to this mirror type."""


def worker_count() -> int:
    raw = os.environ.get("CAUSTICA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_config(path: str, args=None):
    text = Path(path).read_text()
    cfg = parse_config(text)
    if args is not None and getattr(args, "samples", None):
        cfg.render.samples = args.samples
    return cfg


def _write(out_dir: Path, name: str, content: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    target.write_text(content)
    return target


def cmd_ovals(args) -> int:
    cfg = _load_config(args.scene, args)
    scene = cfg.to_scene()
    if isinstance(scene.mirror, Circle2):
        oval_plus, oval_minus = from_circle_scene(scene)
        quartic = quartic_closure(oval_plus)
        branches = [oval_plus, oval_minus]
    else:
        oval = from_line_scene(scene)
        quartic = quartic_closure(oval)
        branches = [oval]
    out_dir = Path(args.out)
    _write(out_dir, "ovals.poly", format_poly(quartic) + "\n")
    meta = {
        "polynomial": poly_to_json(quartic),
        "total_degree": quartic.total_degree(),
        "branches": [
            {
                "focus_a": [str(Fraction(b.a.x)), str(Fraction(b.a.y))],
                "focus_b": [str(Fraction(b.b.x)), str(Fraction(b.b.y))],
                "s_squared": str(Fraction(b.s2)),
                "t_squared": str(Fraction(b.t2)),
                "branch": b.branch,
            }
            for b in branches
        ],
    }
    _write(out_dir, "ovals.json", json.dumps(meta, indent=2) + "\n")
    if args.svg:
        _write(out_dir, "ovals.svg", render_scene(cfg, ovals=quartic))
    print(f"wrote ovals.poly (degree {quartic.total_degree()}, {quartic.term_count()} terms)")
    return 0


def _normalized_parameters(cfg, args):
    scene = cfg.to_scene()
    if not isinstance(scene.mirror, Circle2):
        raise UnsupportedMirror("the caustic pipeline needs a circle mirror")
    if not scene.radiant.is_finite:
        raise UnsupportedMirror("the caustic pipeline needs a finite radiant point")
    if args.specialize:
        r, n = _parse_specialize(args.specialize)
        return ca.normalized_scene(r, n), r, n
    nscene, _ = normalize_scene(scene)
    r, n = nscene.mirror.radius, nscene.n
    if isinstance(r, float):
        raise UnsupportedMirror(
            "scene does not normalize exactly (|A-O| is irrational); "
            "use --specialize r=<p/q>,n=<p/q>"
        )
    return nscene, Fraction(r), Fraction(n)


def _parse_specialize(text: str) -> tuple[Fraction, Fraction]:
    values = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("r", "n") or not val:
            raise ConfigError(f"bad --specialize component {part!r}")
        values[key] = Fraction(val.strip())
    if set(values) != {"r", "n"}:
        raise ConfigError("--specialize needs both r=<p/q> and n=<p/q>")
    return values["r"], values["n"]


def cmd_caustic(args) -> int:
    cfg = _load_config(args.scene, args)
    nscene, r, n = _normalized_parameters(cfg, args)
    out_dir = Path(args.out)

    try:
        report = ca.cross_verify(nscene)
    except ca.PipelineMismatch as exc:
        _write(out_dir, "envelope.poly", format_poly(exc.envelope) + "\n")
        _write(out_dir, "evolute.poly", format_poly(exc.evolute) + "\n")
        _write(
            out_dir,
            "report.json",
            json.dumps({"agree": False, "r": str(r), "n": str(n)}, indent=2) + "\n",
        )
        print("pipeline mismatch: envelope.poly and evolute.poly written", file=sys.stderr)
        return 1

    family = ca.build_family(r, n)
    raw = ca.strip_spurious(ca.envelope_resultant(family, "t"), r, n)
    _write(out_dir, "caustic_raw.poly", format_poly(raw.raw_resultant) + "\n")
    _write(out_dir, "caustic.poly", format_poly(report.caustic) + "\n")
    doc = report.to_json_dict()

    if args.symbolic:
        print(
            "warning: the full symbolic resultant in (x, y, t, r, n) is a "
            "long computation; expect on the order of hours",
            file=sys.stderr,
        )
        t0 = time.perf_counter()
        sym_family = ca.build_family(None, None)
        raw_sym = ca.envelope_resultant(sym_family, "t")
        elapsed = time.perf_counter() - t0
        _write(out_dir, "caustic_symbolic_raw.poly", format_poly(raw_sym.raw_resultant) + "\n")
        specialized = primitive_part(evaluate(raw_sym.raw_resultant, {"r": r, "n": n}))
        match = specialized == raw.raw_resultant
        doc["symbolic_seconds"] = round(elapsed, 1)
        doc["symbolic_specialization_matches"] = match
        print(f"symbolic resultant done in {elapsed:.0f}s; wrote caustic_symbolic_raw.poly")
        if not match:
            print("symbolic specialization does not match the direct run", file=sys.stderr)
            _write(out_dir, "report.json", json.dumps(doc, indent=2) + "\n")
            return 1

    _write(out_dir, "report.json", json.dumps(doc, indent=2) + "\n")
    print(
        f"caustic degree {report.caustic_degree} with {report.caustic_terms} terms; "
        f"routes agree; wrote caustic.poly, caustic_raw.poly, report.json"
    )
    return 0


def cmd_render(args) -> int:
    cfg = _load_config(args.scene, args)
    svg = render_scene(cfg)
    target = _write(Path(args.out), "scene.svg", svg)
    print(f"wrote {target}")
    return 0


def _check(name, passed, value, tolerance=None):
    entry = {"name": name, "passed": bool(passed), "value": value}
    if tolerance is not None:
        entry["tolerance"] = tolerance
    return entry


def _verify_checks(cfg, tol: float, seed: int) -> list[dict]:
    scene = cfg.to_scene()
    rng = random.Random(seed)
    checks: list[dict] = []
    jobs: list = []

    if isinstance(scene.mirror, Circle2) and scene.radiant.is_finite:
        a_pt = scene.radiant.point
        circ = scene.mirror

        def snell_check():
            worst = 0.0
            count = 0
            for _ in range(256):
                theta = rng.uniform(0.0, 2.0 * math.pi)
                x_pt = circ.point_at_angle(theta)
                try:
                    ray = refract(scene, x_pt)
                except (TotalInternalReflection, RadiantOnMirror):
                    continue
                form = refraction_conic(scene, x_pt, mirror_gradient(circ, x_pt))
                worst = max(worst, abs(form(ray.dir.x, ray.dir.y)) / form.coefficient_norm())
                count += 1
            return _check("snell_residual", worst < tol and count > 0, worst, tol)

        def lemma_circle_check():
            b_pt = inverse_point(a_pt, circ)
            exact_ok = True
            for _ in range(32):
                t = Fraction(rng.randint(-50, 50), rng.randint(1, 40))
                r_pt = circ.point_at(t)
                if cross(r_pt - a_pt, circ.center - a_pt) == 0:
                    continue
                c = tangent_circle_through(a_pt, r_pt, circ.center)
                exact_ok &= dist_sq(c.center, b_pt) == dist_sq(c.center, r_pt)
            invol = inverse_point(b_pt, circ) == a_pt
            prod = Fraction(dist_sq(a_pt, circ.center)) * Fraction(dist_sq(b_pt, circ.center))
            prod_ok = prod == Fraction(circ.radius) ** 4
            return _check(
                "inverse_point_circle_identities", exact_ok and invol and prod_ok,
                {"tangent_circle": exact_ok, "involution": invol, "product_law": prod_ok},
            )

        def ratio_check():
            plus, minus = from_circle_scene(scene)
            worst = 0.0
            used = 0
            for ov in (plus, minus):
                for m in sample_branch(ov, 32):
                    try:
                        line = normal_line(ov, m)
                    except Exception:
                        continue
                    d = line.dir
                    dn = math.hypot(float(d.x), float(d.y))
                    wa = Point2(float(ov.a.x), float(ov.a.y)) - m
                    wb = Point2(float(ov.b.x), float(ov.b.y)) - m
                    sa = abs(float(cross(wa, d))) / (math.hypot(wa.x, wa.y) * dn)
                    sb = abs(float(cross(wb, d))) / (math.hypot(wb.x, wb.y) * dn)
                    worst = max(worst, abs(sa - float(ov.s) * sb) / (1.0 + sa + sb))
                    used += 1
            return _check("normal_sine_ratio", worst < tol and used >= 64, worst, tol)

        def envelope_check():
            nscene, _ = normalize_scene(scene)
            if isinstance(nscene.mirror.radius, float):
                return _check("numeric_envelope_residual", True, "skipped: inexact normalization")
            r, n = Fraction(nscene.mirror.radius), Fraction(nscene.n)
            fam_poly = ca.build_family(r, n)
            caustic = ca.strip_spurious(ca.envelope_resultant(fam_poly), r, n).caustic_poly
            worst = 0.0
            pts = 0
            for sgn in (1, -1):
                family = ca.RayFamily(
                    ca.Scene(nscene.radiant, nscene.mirror, sgn * abs(nscene.n))
                )
                for p in ca.numeric_envelope(family, 256):
                    worst = max(worst, ca.scaled_residual(caustic, float(p.x), float(p.y)))
                    pts += 1
            tol_env = max(tol, 1e-5)
            return _check("numeric_envelope_residual", worst < tol_env and pts >= 100, worst, tol_env)

        jobs = [snell_check, lemma_circle_check, ratio_check, envelope_check]
    elif isinstance(scene.mirror, Line2) and scene.radiant.is_finite:

        def line_ratio_check():
            ov = from_line_scene(scene)
            worst = 0.0
            used = 0
            for m in sample_branch(ov, 64):
                try:
                    line = normal_line(ov, m)
                except Exception:
                    continue
                d = line.dir
                dn = math.hypot(float(d.x), float(d.y))
                wa = Point2(float(ov.a.x), float(ov.a.y)) - m
                wb = Point2(float(ov.b.x), float(ov.b.y)) - m
                sa = abs(float(cross(wa, d))) / (math.hypot(wa.x, wa.y) * dn)
                sb = abs(float(cross(wb, d))) / (math.hypot(wb.x, wb.y) * dn)
                worst = max(worst, abs(sa - float(ov.s) * sb) / (1.0 + sa + sb))
                used += 1
            return _check("normal_sine_ratio", worst < tol and used >= 32, worst, tol)

        jobs = [line_ratio_check]
    else:

        def infinity_snell():
            worst = 0.0
            count = 0
            mirror = scene.mirror
            for _ in range(256):
                theta = rng.uniform(0.0, 2.0 * math.pi)
                if isinstance(mirror, Circle2):
                    x_pt = mirror.point_at_angle(theta)
                else:
                    x_pt = mirror.point_at(math.tan(theta / 4.0))
                try:
                    ray = refract(scene, x_pt)
                except (TotalInternalReflection, RadiantOnMirror):
                    continue
                form = refraction_conic(scene, x_pt, mirror_gradient(mirror, x_pt))
                worst = max(worst, abs(form(ray.dir.x, ray.dir.y)) / form.coefficient_norm())
                count += 1
            return _check("snell_residual", worst < tol and count > 0, worst, tol)

        jobs = [infinity_snell]

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(lambda f: f(), jobs))
    else:
        checks = [f() for f in jobs]
    return checks


def cmd_verify(args) -> int:
    cfg = _load_config(args.scene, args)
    checks = _verify_checks(cfg, args.tol, args.seed)
    all_passed = all(c["passed"] for c in checks)
    doc = {"all_passed": all_passed, "tolerance": args.tol, "seed": args.seed, "checks": checks}
    text = json.dumps(doc, indent=2, default=str) + "\n"
    if args.out:
        _write(Path(args.out), "verify.json", text)
    sys.stdout.write(text)
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caustica",
        description="Caustics by refraction of circles and lines: ovals, envelopes, evolutes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scene", required=True, help="scene configuration file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--samples", type=int, default=None, help="override sample count")
        p.add_argument("--tol", type=float, default=1e-9, help="tolerance for float checks")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p_ovals = sub.add_parser("ovals", help="write the oval quartic (text + JSON, optional SVG)")
    common(p_ovals)
    p_ovals.add_argument("--svg", action="store_true", help="also render the ovals")
    p_ovals.set_defaults(func=cmd_ovals)

    p_caustic = sub.add_parser("caustic", help="run both caustic pipelines and cross-verify")
    common(p_caustic)
    p_caustic.add_argument(
        "--specialize", help="override scene parameters, e.g. r=1/3,n=1/2"
    )
    p_caustic.add_argument(
        "--symbolic",
        action="store_true",
        help="also run the full symbolic resultant in (x, y, t, r, n); very slow",
    )
    p_caustic.set_defaults(func=cmd_caustic)

    p_render = sub.add_parser("render", help="render the scene to a deterministic SVG")
    common(p_render)
    p_render.set_defaults(func=cmd_render)

    p_verify = sub.add_parser("verify", help="run the numeric/exact invariant suite")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedMirror as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
