"""Scene configuration files: parsing, validation and canonical printing.

The format is a flat sectioned key = value text file; rationals are written
as "p/q", integers, or plain decimals, all of which parse exactly into
Fractions.  Example:

    [radiant]
    x = 0
    y = 0

    [mirror]
    type = circle
    center_x = 1
    center_y = 0
    radius = 1/3

    [refraction]
    n = 1/2

    [render]
    xmin = -2/5
    xmax = 2
    ymin = -6/5
    ymax = 6/5
    width = 800
    height = 800
    grid = 512
    samples = 160

A radiant point at infinity uses dir_x / dir_y instead of x / y; a line
mirror uses type = line with point_x, point_y, dir_x, dir_y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geom import Circle2, Dir2, Line2, Point2, Radiant, Scene


class ConfigError(Exception):
    """Malformed scene configuration; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(message + where)


def parse_rational(text: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text.strip()!r}: {exc}", line) from None


_DEFAULT_COLORS = {
    "rays_pos": "blue",
    "rays_neg": "orange",
    "caustic": "red",
    "ovals": "green",
    "mirror": "black",
    "radiant": "black",
}


@dataclass
class RenderSpec:
    """Viewport, raster sizes and layer colors for SVG output."""

    xmin: Fraction = Fraction(-2, 5)
    xmax: Fraction = Fraction(2)
    ymin: Fraction = Fraction(-6, 5)
    ymax: Fraction = Fraction(6, 5)
    width: int = 800
    height: int = 800
    grid: int = 512
    samples: int = 160
    colors: dict = field(default_factory=lambda: dict(_DEFAULT_COLORS))

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ConfigError("render width and height must be positive")
        if self.grid < 16:
            raise ConfigError("implicit-curve grid resolution must be at least 16")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ConfigError("viewport must have positive extent")

    def viewport(self) -> tuple[float, float, float, float]:
        return (float(self.xmin), float(self.xmax), float(self.ymin), float(self.ymax))


@dataclass
class SceneConfig:
    radiant_point: tuple[Fraction, Fraction] | None
    radiant_dir: tuple[Fraction, Fraction] | None
    mirror_kind: str  # "circle" | "line"
    circle_center: tuple[Fraction, Fraction] | None
    circle_radius: Fraction | None
    line_point: tuple[Fraction, Fraction] | None
    line_dir: tuple[Fraction, Fraction] | None
    n: Fraction
    render: RenderSpec

    def to_scene(self) -> Scene:
        if self.radiant_point is not None:
            radiant = Radiant.finite(Point2(*self.radiant_point))
        else:
            radiant = Radiant.at_infinity(Dir2(*self.radiant_dir))
        if self.mirror_kind == "circle":
            mirror = Circle2(Point2(*self.circle_center), self.circle_radius)
        else:
            mirror = Line2(Point2(*self.line_point), Dir2(*self.line_dir))
        return Scene(radiant=radiant, mirror=mirror, n=self.n)


def parse_config(text: str) -> SceneConfig:
    """Parse a scene file, reporting the line of the first problem."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("unterminated section header", lineno, raw.index("[") + 1)
            current = line[1:-1].strip().lower()
            if not current:
                raise ConfigError("empty section name", lineno)
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError("expected key = value", lineno, 1)
        if current is None:
            raise ConfigError("key outside of any [section]", lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if not key:
            raise ConfigError("empty key", lineno, 1)
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        sections[current][key] = (value.strip(), lineno)

    def take(section: str, key: str, required: bool = True) -> tuple[str, int] | None:
        sec = sections.get(section, {})
        if key not in sec:
            if required:
                raise ConfigError(f"missing {key!r} in [{section}]")
            return None
        return sec.pop(key)

    rad = sections.get("radiant")
    if rad is None:
        raise ConfigError("missing [radiant] section")
    radiant_point = radiant_dir = None
    if "x" in rad or "y" in rad:
        x = take("radiant", "x")
        y = take("radiant", "y")
        radiant_point = (parse_rational(*x), parse_rational(*y))
    else:
        dx = take("radiant", "dir_x")
        dy = take("radiant", "dir_y")
        radiant_dir = (parse_rational(*dx), parse_rational(*dy))

    kind_item = take("mirror", "type") if "mirror" in sections else None
    if kind_item is None:
        raise ConfigError("missing [mirror] section with a 'type' key")
    kind = kind_item[0].lower()
    circle_center = circle_radius = line_point = line_dir = None
    if kind == "circle":
        cx = take("mirror", "center_x")
        cy = take("mirror", "center_y")
        rr = take("mirror", "radius")
        circle_center = (parse_rational(*cx), parse_rational(*cy))
        circle_radius = parse_rational(*rr)
        if circle_radius <= 0:
            raise ConfigError("circle radius must be positive", rr[1])
    elif kind == "line":
        px = take("mirror", "point_x")
        py = take("mirror", "point_y")
        dx = take("mirror", "dir_x")
        dy = take("mirror", "dir_y")
        line_point = (parse_rational(*px), parse_rational(*py))
        line_dir = (parse_rational(*dx), parse_rational(*dy))
        if line_dir == (0, 0):
            raise ConfigError("line direction must be nonzero", dx[1])
    else:
        raise ConfigError(f"unknown mirror type {kind_item[0]!r}", kind_item[1])

    n_item = take("refraction", "n") if "refraction" in sections else None
    if n_item is None:
        raise ConfigError("missing [refraction] section with an 'n' key")
    n = parse_rational(*n_item)
    if n == 0:
        raise ConfigError("refraction constant must be nonzero", n_item[1])

    spec = RenderSpec()
    if "render" in sections:
        for key in ("xmin", "xmax", "ymin", "ymax"):
            item = take("render", key, required=False)
            if item:
                setattr(spec, key, parse_rational(*item))
        for key in ("width", "height", "grid", "samples"):
            item = take("render", key, required=False)
            if item:
                try:
                    setattr(spec, key, int(item[0]))
                except ValueError:
                    raise ConfigError(f"bad integer {item[0]!r}", item[1]) from None
        for key in list(sections["render"].keys()):
            if key.startswith("color_"):
                value, _ln = sections["render"].pop(key)
                layer = key[len("color_"):]
                if layer not in spec.colors:
                    raise ConfigError(f"unknown color layer {layer!r}", _ln)
                spec.colors[layer] = value
        spec.__post_init__()

    for sec_name, sec in sections.items():
        for key, (_value, lineno) in sec.items():
            if sec_name in ("radiant", "mirror", "refraction", "render"):
                raise ConfigError(f"unknown key {key!r} in [{sec_name}]", lineno)

    cfg = SceneConfig(
        radiant_point=radiant_point,
        radiant_dir=radiant_dir,
        mirror_kind=kind,
        circle_center=circle_center,
        circle_radius=circle_radius,
        line_point=line_point,
        line_dir=line_dir,
        n=n,
        render=spec,
    )
    cfg.to_scene()  # validate geometry (radiant off mirror etc.)
    return cfg


def print_config(cfg: SceneConfig) -> str:
    """Canonical text form; print(parse(print(cfg))) is byte-identical."""
    out = ["[radiant]"]
    if cfg.radiant_point is not None:
        out.append(f"x = {cfg.radiant_point[0]}")
        out.append(f"y = {cfg.radiant_point[1]}")
    else:
        out.append(f"dir_x = {cfg.radiant_dir[0]}")
        out.append(f"dir_y = {cfg.radiant_dir[1]}")
    out.append("")
    out.append("[mirror]")
    out.append(f"type = {cfg.mirror_kind}")
    if cfg.mirror_kind == "circle":
        out.append(f"center_x = {cfg.circle_center[0]}")
        out.append(f"center_y = {cfg.circle_center[1]}")
        out.append(f"radius = {cfg.circle_radius}")
    else:
        out.append(f"point_x = {cfg.line_point[0]}")
        out.append(f"point_y = {cfg.line_point[1]}")
        out.append(f"dir_x = {cfg.line_dir[0]}")
        out.append(f"dir_y = {cfg.line_dir[1]}")
    out.append("")
    out.append("[refraction]")
    out.append(f"n = {cfg.n}")
    out.append("")
    out.append("[render]")
    r = cfg.render
    out.append(f"xmin = {r.xmin}")
    out.append(f"xmax = {r.xmax}")
    out.append(f"ymin = {r.ymin}")
    out.append(f"ymax = {r.ymax}")
    out.append(f"width = {r.width}")
    out.append(f"height = {r.height}")
    out.append(f"grid = {r.grid}")
    out.append(f"samples = {r.samples}")
    for layer in sorted(r.colors):
        if r.colors[layer] != _DEFAULT_COLORS[layer]:
            out.append(f"color_{layer} = {r.colors[layer]}")
    out.append("")
    return "\n".join(out)
