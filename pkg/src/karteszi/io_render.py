"""Serialization, SVG rendering, and the command-line interface.

The document format is a versioned, self-describing text file: header keys,
then the point, line, and incidence tables sorted by id, every real written
with 17 significant digits so the double round trip is exact.  SVG output is
deterministic (same input and style, same bytes) and tags every element with
an orbit CSS class, so styling can be overridden downstream.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .analyze import (
    VERDICT_AMBIGUOUS,
    VERDICT_CLEAN,
    VERDICT_EXTRA,
    astral_obstruction,
    concurrent_triples,
    cross_validate,
    is_exceptional,
    scan,
)
from .combin import RefuseAmbiguous, are_isomorphic, from_geometry
from .config import (
    ConfigFlags,
    KConfig,
    KParams,
    LINE_ORBITS,
    LineEntry,
    POINT_ORBITS,
    PointEntry,
    build,
    validate_params,
)
from .geom import Angle, Line, Point, TolerancePolicy, distance

__all__ = [
    "RenderStyle",
    "SCHEMA_VERSION",
    "SchemaError",
    "cli_main",
    "document_text",
    "main",
    "read_document",
    "render_svg",
    "svg_text",
    "write_document",
]

SCHEMA_VERSION = 1
_MAGIC = "karteszi-document"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EXCEPTIONAL = 2
EXIT_AMBIGUOUS = 3

_DEFAULT_ORBIT_COLORS: Mapping[str, str] = {
    "P1": "#1f77b4",
    "Pl": "#2ca02c",
    "Pm": "#9467bd",
    "Ll": "#ff7f0e",
    "Lm": "#17becf",
    "Lc": "#8c564b",
}


class SchemaError(ValueError):
    """The file is not a document this code version understands."""


def _fmt(x: float) -> str:
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# Document writing


def document_text(config: KConfig) -> str:
    """Serialize a configuration to the versioned text format."""
    out: List[str] = []
    out.append(f"{_MAGIC} {SCHEMA_VERSION}")
    out.append("kind karteszi")
    out.append(f"n {config.params.n}")
    out.append(f"ell {config.params.ell}")
    out.append(f"m {config.params.m}")
    out.append(f"eps_inc {_fmt(config.tolerance.eps_inc)}")
    out.append(f"sep_factor {_fmt(config.tolerance.sep_factor)}")
    out.append(f"min_margin {_fmt(config.flags.min_margin)}")
    out.append(f"extras {len(config.flags.extra_pairs)}")
    for p, l in config.flags.extra_pairs:
        out.append(f"{p} {l}")
    out.append(f"points {len(config.points)}")
    for e in sorted(config.points, key=lambda e: e.id):
        out.append(f"{e.id} {e.orbit} {e.index} {_fmt(e.point.x)} {_fmt(e.point.y)}")
    out.append(f"lines {len(config.lines)}")
    for e in sorted(config.lines, key=lambda e: e.id):
        out.append(
            f"{e.id} {e.orbit} {e.index} {_fmt(e.line.a)} {_fmt(e.line.b)} {_fmt(e.line.c)}"
        )
    pairs = sorted(config.incidence)
    out.append(f"incidence {len(pairs)}")
    for p, l in pairs:
        out.append(f"{p} {l}")
    out.append("end")
    return "\n".join(out) + "\n"


def write_document(config: KConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(document_text(config), encoding="utf-8")


# ---------------------------------------------------------------------------
# Document reading


class _Cursor:
    def __init__(self, lines: Sequence[str]):
        self._lines = lines
        self._pos = 0

    def next(self) -> str:
        if self._pos >= len(self._lines):
            raise SchemaError("unexpected end of document")
        line = self._lines[self._pos]
        self._pos += 1
        return line

    def expect_kv(self, key: str) -> str:
        line = self.next()
        parts = line.split(None, 1)
        if len(parts) != 2 or parts[0] != key:
            raise SchemaError(f"expected '{key} <value>', got {line!r}")
        return parts[1]


def read_document(path: Union[str, Path]) -> KConfig:
    """Parse a document back into a KConfig (strict: unknown keys reject).

    The incidence relation and flags come from the file, not from a fresh
    scan, so a read-back document equals what was written field for field.
    """
    text = Path(path).read_text(encoding="utf-8")
    cur = _Cursor([ln for ln in text.splitlines() if ln.strip()])

    header = cur.next().split()
    if len(header) != 2 or header[0] != _MAGIC:
        raise SchemaError(f"not a {_MAGIC} file")
    if int(header[1]) != SCHEMA_VERSION:
        raise SchemaError(f"schema version {header[1]} not supported (have {SCHEMA_VERSION})")

    kind = cur.expect_kv("kind")
    if kind != "karteszi":
        raise SchemaError(f"unknown document kind {kind!r}")
    n = int(cur.expect_kv("n"))
    ell = int(cur.expect_kv("ell"))
    m = int(cur.expect_kv("m"))
    eps_inc = float(cur.expect_kv("eps_inc"))
    sep_factor = float(cur.expect_kv("sep_factor"))
    min_margin = float(cur.expect_kv("min_margin"))

    n_extras = int(cur.expect_kv("extras"))
    extras = []
    for _ in range(n_extras):
        p, l = cur.next().split()
        extras.append((int(p), int(l)))

    n_points = int(cur.expect_kv("points"))
    points: List[PointEntry] = []
    for _ in range(n_points):
        pid, orbit, index, x, y = cur.next().split()
        if orbit not in POINT_ORBITS:
            raise SchemaError(f"unknown point orbit {orbit!r}")
        points.append(PointEntry(int(pid), orbit, int(index), Point(float(x), float(y))))

    n_lines = int(cur.expect_kv("lines"))
    lines: List[LineEntry] = []
    for _ in range(n_lines):
        lid, orbit, index, a, b, c = cur.next().split()
        if orbit not in LINE_ORBITS:
            raise SchemaError(f"unknown line orbit {orbit!r}")
        lines.append(LineEntry(int(lid), orbit, int(index), Line(float(a), float(b), float(c))))

    n_inc = int(cur.expect_kv("incidence"))
    incidence = set()
    for _ in range(n_inc):
        p, l = cur.next().split()
        incidence.add((int(p), int(l)))

    if cur.next() != "end":
        raise SchemaError("missing 'end' marker")

    return KConfig(
        params=KParams(n, ell, m),
        tolerance=TolerancePolicy(eps_inc=eps_inc, sep_factor=sep_factor),
        points=tuple(points),
        lines=tuple(lines),
        incidence=frozenset(incidence),
        flags=ConfigFlags(extra_pairs=tuple(extras), min_margin=min_margin),
    )


# ---------------------------------------------------------------------------
# SVG rendering


@dataclass(frozen=True)
class RenderStyle:
    """Figure styling; defaults give a 1000 px square with orbit colors.

    Lines are drawn as chords of the disk of radius ``line_clip_radius``
    circumradii, slightly larger than the polygon, so diagonals visibly
    extend past their defining vertices.  ``display_phase`` rotates the
    figure at render time only (recorded in the SVG metadata) and never
    touches the model.
    """

    canvas_px: int = 1000
    margin_frac: float = 0.08
    orbit_colors: Mapping[str, str] = field(default_factory=lambda: dict(_DEFAULT_ORBIT_COLORS))
    point_radius_px: float = 4.0
    line_clip_radius: float = 1.05
    stroke_px: float = 1.2
    highlight_color: str = "#d62728"
    display_phase: Angle = Angle(0)

    def __post_init__(self) -> None:
        if self.canvas_px <= 0 or self.point_radius_px <= 0 or self.line_clip_radius <= 0:
            raise ValueError("render dimensions must be positive")
        if not 0 <= self.margin_frac < 0.5:
            raise ValueError(f"margin_frac must be in [0, 0.5), got {self.margin_frac}")
        missing = [t for t in (*POINT_ORBITS, *LINE_ORBITS) if t not in self.orbit_colors]
        if missing:
            raise ValueError(f"orbit_colors missing tags: {missing}")


def _frame(config: KConfig) -> Tuple[Point, float]:
    """Center and circumradius inferred from the base-polygon orbit."""
    base = [e.point for e in config.points if e.orbit == "P1"]
    cx = sum(p.x for p in base) / len(base)
    cy = sum(p.y for p in base) / len(base)
    center = Point(cx, cy)
    radius = sum(distance(center, p) for p in base) / len(base)
    return center, radius


def svg_text(config: KConfig, style: RenderStyle = RenderStyle()) -> str:
    """Render to an SVG 1.1 string: 3n chords, then 3n point glyphs."""
    center, radius = _frame(config)
    clip_r = style.line_clip_radius * radius
    size = style.canvas_px
    usable = size * (1.0 - 2.0 * style.margin_frac)
    scale = usable / (2.0 * clip_r)
    rot = style.display_phase.radians
    cos_r, sin_r = math.cos(rot), math.sin(rot)

    def world_to_px(p: Point) -> Tuple[float, float]:
        dx, dy = p.x - center.x, p.y - center.y
        rx = cos_r * dx - sin_r * dy
        ry = sin_r * dx + cos_r * dy
        return size / 2.0 + rx * scale, size / 2.0 - ry * scale

    extra_lines = {l for _, l in config.flags.extra_pairs}
    extra_points = {p for p, _ in config.flags.extra_pairs}

    out: List[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    )
    out.append(
        "<metadata>"
        f"karteszi n={config.params.n} ell={config.params.ell} m={config.params.m} "
        f"display-phase={style.display_phase.num}/{style.display_phase.den}"
        "</metadata>"
    )
    out.append("<style>")
    for tag in (*LINE_ORBITS,):
        color = style.orbit_colors[tag]
        out.append(
            f".orbit-{tag.lower()} {{ stroke: {color}; stroke-width: {style.stroke_px}; }}"
        )
    for tag in (*POINT_ORBITS,):
        out.append(f".orbit-{tag.lower()} {{ fill: {style.orbit_colors[tag]}; }}")
    out.append(
        f"line.extra-incidence {{ stroke: {style.highlight_color}; }} "
        f"circle.extra-incidence {{ fill: {style.highlight_color}; }}"
    )
    out.append("</style>")

    for e in sorted(config.lines, key=lambda e: e.id):
        d = e.line.signed_distance(center)
        if abs(d) >= clip_r:
            continue
        foot = Point(center.x - d * e.line.a, center.y - d * e.line.b)
        half = math.sqrt(clip_r * clip_r - d * d)
        p1 = Point(foot.x - half * e.line.b, foot.y + half * e.line.a)
        p2 = Point(foot.x + half * e.line.b, foot.y - half * e.line.a)
        (x1, y1), (x2, y2) = world_to_px(p1), world_to_px(p2)
        cls = f"orbit-{e.orbit.lower()}"
        if e.id in extra_lines:
            cls += " extra-incidence"
        out.append(
            f'<line class="{cls}" x1="{x1:.4f}" y1="{y1:.4f}" '
            f'x2="{x2:.4f}" y2="{y2:.4f}"/>'
        )

    for e in sorted(config.points, key=lambda e: e.id):
        x, y = world_to_px(e.point)
        cls = f"orbit-{e.orbit.lower()}"
        if e.id in extra_points:
            cls += " extra-incidence"
        out.append(
            f'<circle class="{cls}" cx="{x:.4f}" cy="{y:.4f}" r="{style.point_radius_px}"/>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(config: KConfig, style: RenderStyle, path: Union[str, Path]) -> None:
    Path(path).write_text(svg_text(config, style), encoding="utf-8")


# ---------------------------------------------------------------------------
# Command-line interface


def _tolerance() -> TolerancePolicy:
    """Default tolerance, honoring the KARTESZI_EPS override."""
    eps = os.environ.get("KARTESZI_EPS")
    if eps is None:
        return TolerancePolicy()
    return TolerancePolicy(eps_inc=float(eps))


def _parse_style(text: Optional[str]) -> RenderStyle:
    if not text:
        return RenderStyle()
    overrides: Dict[str, object] = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "canvas_px":
            overrides[key] = int(value)
        elif key in ("margin_frac", "point_radius_px", "line_clip_radius", "stroke_px"):
            overrides[key] = float(value)
        elif key == "display_phase":
            num, _, den = value.partition("/")
            overrides[key] = Angle(int(num), int(den) if den else 1)
        elif key == "highlight_color":
            overrides[key] = value
        else:
            raise ValueError(f"unknown style key {key!r}")
    return RenderStyle(**overrides)  # type: ignore[arg-type]


def _params_or_usage(n: int, ell: int, m: int) -> KParams:
    return validate_params(n, ell, m)


def _cmd_build(args: argparse.Namespace) -> int:
    params = _params_or_usage(args.n, args.ell, args.m)
    config = build(params, _tolerance())
    text = document_text(config)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _describe(report, params, tag) -> Iterator[str]:
    n = params.n
    yield f"K({n};{params.ell},{params.m}): {3 * n} points, {3 * n} lines"
    yield f"min separation margin: {report.min_margin:.3e}"
    if report.verdict == VERDICT_CLEAN:
        yield f"({3 * n}_4) configuration, clean"
    elif report.verdict == VERDICT_EXTRA:
        degs = sorted(set(report.line_degrees) | set(report.point_degrees))
        yield (
            f"extra incidences: {len(report.extras)} beyond the 4-structure, "
            f"degrees seen {degs}"
        )
        if tag is not None:
            yield f"family: {tag.label} (pair role {tag.pair_role}, triple {tag.triple})"
    else:
        yield "ambiguous: separation margin inside the audit band"


def _cmd_check(args: argparse.Namespace) -> int:
    params = _params_or_usage(args.n, args.ell, args.m)
    config = build(params, _tolerance())
    report = scan(config)
    tag = is_exceptional(params)
    for line in _describe(report, params, tag):
        print(line)
    if report.verdict == VERDICT_AMBIGUOUS:
        return EXIT_AMBIGUOUS
    if report.verdict == VERDICT_EXTRA:
        return EXIT_EXCEPTIONAL
    return EXIT_OK


def _cmd_triples(args: argparse.Namespace) -> int:
    triples = sorted(concurrent_triples(args.n, _tolerance()), key=lambda t: (t.r, t.l1, t.l2))
    print(f"n={args.n}: {len(triples)} concurrent diagonal triple(s)")
    for t in triples:
        w = t.witness
        print(f"{t.r} {t.l1} {t.l2}    witness: class {w.k} vertex {w.i} on diagonal ({w.diag_j},{t.r})")
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    params = _params_or_usage(args.n, args.ell, args.m)
    tag = is_exceptional(params)
    x = astral_obstruction(params, concurrent_triples(params.n, _tolerance()))
    if tag is None:
        print(f"K({params.n};{params.ell},{params.m}): clean ((3n)_4) parameters")
        if x is not None:
            print(f"warning: oracle found astral witness x={x} despite clean classification")
            return EXIT_USAGE
        return EXIT_OK
    print(f"K({params.n};{params.ell},{params.m}): exceptional, family {tag.label}")
    print(f"pair role {tag.pair_role} in triple {tag.triple}")
    print(f"astral witness x={x}")
    return EXIT_EXCEPTIONAL


def _cmd_survey(args: argparse.Namespace) -> int:
    tol = _tolerance()
    if args.verify:
        result = cross_validate(args.max_n, tol)
        for n, ell, m in result.exceptional:
            tag = is_exceptional(validate_params(n, ell, m))
            label = tag.label if tag else "UNCLASSIFIED"
            print(f"K({n};{ell},{m}) exceptional: {label}")
        print(
            f"{result.cases} parameter triples with n <= {result.n_max}: "
            f"{len(result.exceptional)} exceptional, "
            f"{len(result.disagreements)} disagreement(s), "
            f"{len(result.ambiguous)} ambiguous"
        )
        return EXIT_OK if result.ok else EXIT_USAGE
    count = 0
    total = 0
    from .ngon import max_class

    for n in range(7, args.max_n + 1):
        top = max_class(n)
        for ell in range(2, top):
            for m in range(ell + 1, top + 1):
                total += 1
                tag = is_exceptional(validate_params(n, ell, m))
                if tag is not None:
                    count += 1
                    print(f"K({n};{ell},{m}) exceptional: {tag.label}")
    print(f"{total} parameter triples with n <= {args.max_n}: {count} exceptional")
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    config = read_document(args.file)
    style = _parse_style(args.style)
    render_svg(config, style, args.svg)
    return EXIT_OK


def _cmd_iso(args: argparse.Namespace) -> int:
    s1 = from_geometry(read_document(args.file1))
    s2 = from_geometry(read_document(args.file2))
    mapping = are_isomorphic(s1, s2)
    if mapping is None:
        print("not isomorphic")
        return EXIT_EXCEPTIONAL
    print("isomorphic")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="karteszi",
        description="Construct, analyze, and render Karteszi configurations K(n; ell, m).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct K(n;ell,m) and write its document")
    p.add_argument("n", type=int)
    p.add_argument("ell", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("check", help="scan K(n;ell,m) and report its incidence verdict")
    p.add_argument("n", type=int)
    p.add_argument("ell", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("triples", help="concurrent diagonal triples of the regular n-gon")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_triples)

    p = sub.add_parser("classify", help="closed-form verdict plus astral witness")
    p.add_argument("n", type=int)
    p.add_argument("ell", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("survey", help="classify every valid parameter triple up to a bound")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="cross-check with the geometric scan")
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("render", help="render a document to SVG")
    p.add_argument("file")
    p.add_argument("--svg", required=True, help="output SVG path")
    p.add_argument("--style", help="comma-separated key=value style overrides")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("iso", help="compare two documents by canonical form")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=_cmd_iso)

    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except RefuseAmbiguous as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (ValueError, OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
