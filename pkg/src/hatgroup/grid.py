"""Kitegrid and Semikitegrid cells, and the geo/grp correspondence.

Semikite cells are indexed by Gamma (cell g is g . K+) and Kite cells by
Gamma+ (cell h is h . K), K+ and K being fundamental domains of the two
actions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .exact import (BOUNDARY, INSIDE, QS3, Point, Polygon, merge_collinear,
                    point_in_polygon)
from .group import (ALPHA, BETA, GAMMA, IDENTITY, GammaElement, cayley_ball,
                    lattice_coords, to_isometry)

KITE, SEMIKITE = "Kite", "Semikite"

KITE_POLYGON = Polygon((
    Point.of(0, 0),
    Point(QS3(Fraction(3, 2)), QS3(0, Fraction(-1, 2))),
    Point.of(2, 0),
    Point(QS3(Fraction(3, 2)), QS3(0, Fraction(1, 2))),
))
SEMIKITE_POLYGON = Polygon(KITE_POLYGON.vertices[:3])
BASE_POLYGON = {KITE: KITE_POLYGON, SEMIKITE: SEMIKITE_POLYGON}
CELL_AREA = {KITE: KITE_POLYGON.area(), SEMIKITE: SEMIKITE_POLYGON.area()}


class BoundaryPoint(ValueError):
    pass


class NotPolyK(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotSimple(ValueError):
    pass


def check_kind(kind: str) -> str:
    if kind not in (KITE, SEMIKITE):
        raise ValueError(f"unknown cell kind {kind!r}")
    return kind


@dataclass(frozen=True, order=True)
class CellId:
    g: GammaElement
    kind: str = SEMIKITE

    def __post_init__(self):
        check_kind(self.kind)
        if self.kind == KITE and self.g.flip:
            raise ValueError("Kite cells are indexed by Γ⁺")


def point_elements(kind: str):
    if kind == KITE:
        return [(r, 0) for r in range(6)]
    return [(r, f) for f in (0, 1) for r in range(6)]


@lru_cache(maxsize=200000)
def _cell_polygon(g: GammaElement, kind: str) -> Polygon:
    return BASE_POLYGON[kind].transformed(to_isometry(g))


def cell_polygon(c) -> Polygon:
    if isinstance(c, GammaElement):
        c = CellId(c, SEMIKITE)
    return _cell_polygon(c.g, c.kind)


@lru_cache(maxsize=None)
def _base_centroid(rot: int, flip: int, kind: str) -> Point:
    return to_isometry(GammaElement(0, 0, rot, flip)).apply(BASE_POLYGON[kind].centroid())


@lru_cache(maxsize=200000)
def cell_centroid(g: GammaElement, kind: str = SEMIKITE) -> Point:
    # g = translation . point part, so only the point part needs the polygon
    return g.translation_vector() + _base_centroid(g.rot, g.flip, kind)


def kite_of_semikite(g: GammaElement) -> GammaElement:
    """Index of the Kite cell containing Semikite cell g."""
    return g * BETA if g.flip else g


def semikites_of_kite(h: GammaElement) -> tuple:
    return (h, h * BETA)


def _floor(q: QS3) -> int:
    n = math.floor(float(q))
    # correct the float guess exactly
    while QS3(n) > q:
        n -= 1
    while QS3(n + 1) <= q:
        n += 1
    return n


def _candidate_translations(p: Point, margin: int = 1):
    x, y = lattice_coords(p)
    fx, fy = _floor(x), _floor(y)
    for tx in range(fx - margin, fx + margin + 2):
        for ty in range(fy - margin, fy + margin + 2):
            yield tx, ty


def locate(p: Point, kind: str = SEMIKITE) -> CellId:
    """The unique cell whose open interior contains p."""
    check_kind(kind)
    base = BASE_POLYGON[kind]
    touched = False
    for tx, ty in _candidate_translations(p):
        for rot, flip in point_elements(kind):
            g = GammaElement(tx, ty, rot, flip)
            q = to_isometry(g.inverse()).apply(p)
            where = point_in_polygon(base, q)
            if where == INSIDE:
                return CellId(g, kind)
            if where == BOUNDARY:
                touched = True
    if touched:
        raise BoundaryPoint(f"{p} lies on a grid edge or vertex")
    raise AssertionError(f"no cell found for {p}")


# ---------------------------------------------------------------- geo / grp

def boundary_loops(cells: Iterable[GammaElement], kind: str = SEMIKITE) -> list:
    """Boundary of a union of cells as closed vertex loops (ccw outer, cw holes)."""
    check_kind(kind)
    edges = {}
    for g in cells:
        for a, b in _cell_polygon(g, kind).edges():
            if (b, a) in edges:
                del edges[b, a]
            else:
                edges[a, b] = True
    out_edges = {}
    for a, b in edges:
        out_edges.setdefault(a, []).append(b)
    if any(len(v) > 1 for v in out_edges.values()):
        raise NotSimple("region boundary touches itself at a vertex")
    loops = []
    while out_edges:
        start = min(out_edges)
        loop = [start]
        cur = out_edges.pop(start)[0]
        while cur != start:
            loop.append(cur)
            cur = out_edges.pop(cur)[0]
        loops.append(merge_collinear(loop))
    return loops


def geo(cells: Iterable[GammaElement], kind: str = SEMIKITE) -> Polygon:
    """The polygon covered by a finite set of cells (must be a simple region)."""
    cells = list(cells)
    if not cells:
        raise NotSimple("empty region")
    loops = boundary_loops(cells, kind)
    if len(loops) != 1:
        raise NotSimple(f"region has {len(loops)} boundary loops")
    return Polygon(tuple(loops[0]))


def candidate_cells(poly: Polygon, kind: str = SEMIKITE):
    """Cells whose centroid falls in the bounding box of poly."""
    x0, y0, x1, y1 = poly.bbox()
    corners = [Point(x, y) for x in (x0, x1) for y in (y0, y1)]
    coords = [lattice_coords(c) for c in corners]
    lo_x = min(_floor(c[0]) for c in coords) - 1
    hi_x = max(_floor(c[0]) for c in coords) + 2
    lo_y = min(_floor(c[1]) for c in coords) - 1
    hi_y = max(_floor(c[1]) for c in coords) + 2
    fx0, fy0, fx1, fy1 = float(x0), float(y0), float(x1), float(y1)
    for tx in range(lo_x, hi_x + 1):
        for ty in range(lo_y, hi_y + 1):
            for rot, flip in point_elements(kind):
                g = GammaElement(tx, ty, rot, flip)
                c = cell_centroid(g, kind)
                cx, cy = float(c.x), float(c.y)
                if fx0 - 1e-9 <= cx <= fx1 + 1e-9 and fy0 - 1e-9 <= cy <= fy1 + 1e-9:
                    yield g, c


def grp(poly: Polygon, kind: str = SEMIKITE) -> frozenset:
    """Cells making up a grid-aligned polygon; NotPolyK otherwise."""
    check_kind(kind)
    inside = []
    for g, c in candidate_cells(poly, kind):
        where = point_in_polygon(poly, c)
        if where == INSIDE:
            inside.append(g)
        elif where == BOUNDARY:
            raise NotPolyK(f"cell {g} is cut by the polygon boundary", witness=g)
    for g in inside:
        cp = _cell_polygon(g, kind)
        for v in cp.vertices:
            if point_in_polygon(poly, v) not in (INSIDE, BOUNDARY):
                raise NotPolyK(f"cell {g} is only partially covered", witness=g)
        for v in poly.vertices:
            if point_in_polygon(cp, v) == INSIDE:
                raise NotPolyK(f"cell {g} is only partially covered", witness=g)
    total = CELL_AREA[kind] * len(inside)
    if total != poly.area():
        witness = _partial_witness(poly, kind, set(inside))
        raise NotPolyK("polygon is not an exact union of cells", witness=witness)
    return frozenset(inside)


def _partial_witness(poly, kind, inside):
    for g, c in candidate_cells(poly, kind):
        if g in inside:
            continue
        cp = _cell_polygon(g, kind)
        if any(point_in_polygon(poly, v) == INSIDE for v in cp.vertices):
            return g
        if any(point_in_polygon(cp, v) == INSIDE for v in poly.vertices):
            return g
    return None


# ------------------------------------------------------------- adjacency

@lru_cache(maxsize=None)
def adjacency_generators(kind: str = SEMIKITE) -> frozenset:
    """Elements s such that s . K and K share a full edge."""
    check_kind(kind)
    base = BASE_POLYGON[kind]
    base_edges = {frozenset(e) for e in base.edges()}
    out = set()
    for g in cayley_ball((ALPHA, BETA, GAMMA), 4):
        if kind == KITE and g.flip:
            continue
        if g == IDENTITY:
            continue
        cp = _cell_polygon(g, kind)
        if any(frozenset(e) in base_edges for e in cp.edges()):
            out.add(g)
    return frozenset(out)


def neighbours(g: GammaElement, kind: str = SEMIKITE):
    """Cells sharing an edge with cell g (right multiplication by generators)."""
    return [g * s for s in sorted(adjacency_generators(kind))]


# --------------------------------------------------------------- regions

@dataclass(frozen=True)
class GridRegion:
    cells: frozenset
    kind: str = SEMIKITE

    def __post_init__(self):
        check_kind(self.kind)
        object.__setattr__(self, "cells", frozenset(self.cells))
        if self.kind == KITE and any(g.flip for g in self.cells):
            raise ValueError("Kite cells are indexed by Γ⁺")

    def __len__(self):
        return len(self.cells)

    def area(self) -> QS3:
        return CELL_AREA[self.kind] * len(self.cells)

    def polygon(self) -> Polygon:
        return geo(self.cells, self.kind)

    def to_json(self):
        return {"kind": self.kind, "cells": [list(g.astuple()) for g in sorted(self.cells)]}

    @staticmethod
    def from_json(d) -> "GridRegion":
        return GridRegion(frozenset(GammaElement(*c) for c in d["cells"]), d["kind"])


def kite_region_to_semikites(cells: Iterable[GammaElement]) -> frozenset:
    out = set()
    for h in cells:
        out.update(semikites_of_kite(h))
    return frozenset(out)


def incenter(g: GammaElement) -> Point:
    """Vertex of the dual 4.6.12 Archimedean tiling inside Semikite cell g."""
    return to_isometry(g).apply(_BASE_INCENTER)


def _incenter(poly: Polygon) -> Point:
    a, b, c = poly.vertices
    la = _sqrt_len(b, c)
    lb = _sqrt_len(c, a)
    lc = _sqrt_len(a, b)
    s = la + lb + lc
    return Point((a.x * la + b.x * lb + c.x * lc) / s, (a.y * la + b.y * lb + c.y * lc) / s)


def _sqrt_len(p: Point, q: Point) -> QS3:
    # Semikite side lengths are 1, sqrt 3 and 2
    n2 = (p - q).norm2()
    table = {QS3(1): QS3(1), QS3(3): QS3(0, 1), QS3(4): QS3(2)}
    return table[n2]


_BASE_INCENTER = _incenter(SEMIKITE_POLYGON)


# ------------------------------------------------------------------ the Hat

GAT_WORDS = ("1", "α", "β", "γ", "αβ", "βα", "βγ", "γβ", "αβα", "βαβ", "βαγ",
             "βγβ", "γβα", "αβαβ", "βαγβ", "γβαβ")
HAT_KITE_WORDS = ("1", "R6", "R6⁻¹", "R6⁻¹.R6⁻¹", "R3", "R3.R3", "R3.R6⁻¹", "R3.R3.R6⁻¹")


@lru_cache(maxsize=None)
def gat() -> frozenset:
    """The Hat as 16 Semikite cells."""
    from .group import eval_word
    return frozenset(eval_word(w) for w in GAT_WORDS)


@lru_cache(maxsize=None)
def hat_kites() -> frozenset:
    from .group import eval_word
    return frozenset(eval_word(w) for w in HAT_KITE_WORDS)


@lru_cache(maxsize=None)
def hat_polygon() -> Polygon:
    return geo(hat_kites(), KITE)


def placed_cells(g: GammaElement, cells) -> list:
    return [g * c for c in cells]


# --------------------------------------------------------------- windows

def ball(radius: int, center: GammaElement = IDENTITY) -> frozenset:
    """Semikite cells within Cayley distance radius of cell center."""
    return frozenset(center * g for g in cayley_ball((ALPHA, BETA, GAMMA), radius))


def centered_window(radius: int) -> frozenset:
    """Union of the radius-ball and its images under R3 and R3^2.

    Invariant under the 3-fold rotation about the Kite head (2, 0).
    """
    from .group import R3
    b = ball(radius)
    return frozenset(r * g for r in (IDENTITY, R3, R3 * R3) for g in b)
