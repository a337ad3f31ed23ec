"""Deterministic SVG output for geometric tilings and for tilings drawn on
the Cayley graph of the group."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import QS3, Point, Polygon
from .group import IDENTITY, COXETER_GENERATORS, COXETER_NAMES, cayley_ball
from .grid import incenter

PLACES = 6

DEFAULT_PALETTE = {
    ("Hat", 0): "#a8c8e8",
    ("Hat", 1): "#1f4e79",
    ("Gat", 0): "#a8c8e8",
    ("Gat", 1): "#1f4e79",
    "H": "#f2c14e",
    "T": "#8fc97a",
    "P": "#e58f65",
    "F": "#9b8fd6",
    "Kite": "#d9d9d9",
    "Semikite": "#eeeeee",
}
# tiles not named above get these, in sorted name order
FALLBACK_COLORS = ("#c9a0dc", "#80cbc4", "#ffcc80", "#b0bec5", "#f48fb1", "#aed581")
EDGE_COLORS = {"α": "#d62728", "β": "#2ca02c", "γ": "#1f77b4"}
MARKER_COLOR = "#d62728"


@dataclass
class RenderStyle:
    palette: dict = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    stroke_width: Fraction = Fraction(1, 10)
    scale: Fraction = Fraction(10)
    arrows: bool = False
    grid: bool = False
    markers: tuple = ()  # points at which to draw a 3-fold symmetry marker

    def color(self, name: str, flip: int = 0) -> str:
        for key in ((name, flip), name):
            if key in self.palette:
                return self.palette[key]
        raise KeyError(f"no colour for tile {name!r}")

    def complete(self, names) -> "RenderStyle":
        """Copy whose palette covers every name (fallback colours assigned in order)."""
        pal = dict(self.palette)
        missing = [n for n in sorted(set(names)) if n not in pal and (n, 0) not in pal]
        for i, n in enumerate(missing):
            pal[n] = FALLBACK_COLORS[i % len(FALLBACK_COLORS)]
        return RenderStyle(pal, self.stroke_width, self.scale, self.arrows, self.grid, self.markers)


def fmt(v) -> str:
    """Fixed 6-decimal representation, rounded half-even."""
    if not isinstance(v, QS3):
        v = QS3(Fraction(v))
    return str(v.to_decimal(PLACES))


class _Canvas:
    """Collect SVG elements in SVG coordinates (y down) and track the bbox."""

    def __init__(self, style: RenderStyle):
        self.style = style
        self.items = []
        self.xs = []
        self.ys = []

    def xy(self, p: Point):
        x = p.x * QS3(self.style.scale)
        y = -(p.y * QS3(self.style.scale))
        self.xs.append(x)
        self.ys.append(y)
        return fmt(x), fmt(y)

    def path(self, pts, fill, extra=""):
        coords = [self.xy(p) for p in pts]
        d = "M " + " L ".join(f"{x} {y}" for x, y in coords) + " Z"
        self.items.append(f'<path d="{d}" fill="{fill}" stroke="#000000" '
                          f'stroke-width="{fmt(self.style.stroke_width)}"{extra}/>')

    def line(self, a, b, color, width, extra=""):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" '
                          f'stroke-width="{fmt(width)}"{extra}/>')

    def circle(self, c, r, fill, extra=""):
        x, y = self.xy(c)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{fmt(r)}" fill="{fill}" '
                          f'stroke="#000000" stroke-width="{fmt(self.style.stroke_width / 2)}"{extra}/>')

    def tricross(self, c: Point, size):
        # three arms at 120 degrees: the usual mark for a 3-fold centre
        from .exact import IsometryMatrix
        tip = c + Point(QS3(Fraction(size)), QS3(0))
        arms = []
        for k in range(3):
            m = IsometryMatrix.rotation(2 * k, c)
            arms.append(m.apply(tip))
        x, y = self.xy(c)
        parts = []
        for a in arms:
            ax, ay = self.xy(a)
            parts.append(f'<line x1="{x}" y1="{y}" x2="{ax}" y2="{ay}"/>')
        self.items.append(f'<g class="marker" stroke="{MARKER_COLOR}" '
                          f'stroke-width="{fmt(self.style.stroke_width * 4)}">' + "".join(parts) + "</g>")

    def document(self, title: str) -> str:
        pad = QS3(self.style.scale)
        if self.xs:
            x0, x1 = min(self.xs) - pad, max(self.xs) + pad
            y0, y1 = min(self.ys) - pad, max(self.ys) + pad
        else:
            x0 = y0 = -pad
            x1 = y1 = pad
        vb = " ".join(fmt(v) for v in (x0, y0, x1 - x0, y1 - y0))
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'viewBox="{vb}">\n<title>{title}</title>\n')
        return head + "\n".join(self.items) + ("\n" if self.items else "") + "</svg>\n"


def render_geometric(placements, polygons: dict, style: RenderStyle | None = None,
                     arrows: dict | None = None, title: str = "tiling") -> str:
    """One path per placement, in canonical placement order.

    polygons maps tile names to their base Polygon; arrows optionally maps
    tile names to a base segment (pair of points) drawn when style.arrows.
    """
    placements = sorted(placements)
    names = {n for _, n in placements}
    missing = sorted(n for n in names if n not in polygons)
    if missing:
        raise KeyError(f"no polygon for tile(s) {', '.join(missing)}")
    style = (style or RenderStyle()).complete(names)
    cv = _Canvas(style)
    for g, name in placements:
        m = g.to_isometry()
        poly = polygons[name]
        pts = [m.apply(v) for v in poly.vertices]
        cv.path(pts, style.color(name, g.flip), f' data-tile="{name}"')
    if style.arrows and arrows:
        for g, name in placements:
            if name in arrows:
                m = g.to_isometry()
                a, b = arrows[name]
                cv.line(m.apply(a), m.apply(b), "#000000", style.stroke_width * 2, ' class="arrow"')
    for c in style.markers:
        cv.tricross(c, Fraction(3, 2))
    return cv.document(title)


def render_group(placements, tiles, radius: int, style: RenderStyle | None = None,
                 center=IDENTITY, title: str = "group tiling") -> str:
    """The Cayley graph on the Semikites within radius of center.

    Vertices sit at Semikite incentres; edges are coloured by generator.
    Vertices covered by a placement are filled with that placement's colour
    and marked highlighted.  tiles maps names to Semikite sets.
    """
    placements = sorted(placements)
    style = (style or RenderStyle()).complete({n for _, n in placements})
    verts = sorted(center * g for g in cayley_ball(COXETER_GENERATORS, radius))
    vset = set(verts)
    owner = {}
    for g, name in placements:
        for c in tiles[name]:
            owner.setdefault(g * c, (g, name))
    cv = _Canvas(style)
    for v in verts:
        for s, sname in zip(COXETER_GENERATORS, COXETER_NAMES):
            w = v * s
            if w in vset and v < w:
                cv.line(incenter(v), incenter(w), EDGE_COLORS[sname], style.stroke_width * 2,
                        f' class="edge" data-gen="{sname}"')
    r = Fraction(1, 6)
    for v in verts:
        if v in owner:
            g, name = owner[v]
            cv.circle(incenter(v), r, style.color(name, g.flip), ' class="vertex highlighted"')
        else:
            cv.circle(incenter(v), r, "#ffffff", ' class="vertex"')
    return cv.document(title)
