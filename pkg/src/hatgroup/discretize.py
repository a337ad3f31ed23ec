"""From geometric tiles to group tiles: poly-K tests, cotiler transfer,
exact-cover checks on windows, orbit-map discretization and the cell
decomposition of a fundamental domain."""
from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .exact import INSIDE, BOUNDARY, Point, Polygon, point_in_polygon
from .grid import (CELL_AREA, KITE, SEMIKITE, GridRegion, NotPolyK, _floor, cell_polygon,
                   check_kind, grp, point_elements)
from .group import (BETA, GAMMA_FULL, GAMMA_PLUS, IDENTITY, LATTICE, R6, GammaElement,
                    lattice_coords, subgroup_membership, subgroup_name, to_isometry)

WORKERS_ENV = "HATGROUP_WORKERS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


class NotInActingGroup(ValueError):
    pass


class BoundaryBasepoint(ValueError):
    pass


class NotGridAligned(ValueError):
    pass


@dataclass(frozen=True)
class TileSet:
    """Named group tiles (finite sets of cells), optionally with polygons."""

    tiles: dict
    kind: str = SEMIKITE
    polygons: dict = field(default_factory=dict)

    def __post_init__(self):
        check_kind(self.kind)
        fixed = {}
        for name, cells in self.tiles.items():
            cells = frozenset(cells)
            if not cells:
                raise ValueError(f"tile {name!r} is empty")
            if self.kind == KITE and any(g.flip for g in cells):
                raise ValueError(f"tile {name!r} has Kite cells outside Γ⁺")
            fixed[name] = cells
        object.__setattr__(self, "tiles", fixed)
        for name, poly in self.polygons.items():
            if grp(poly, self.kind) != fixed[name]:
                raise ValueError(f"polygon of {name!r} does not match its cells")

    @staticmethod
    def from_polygons(polys: dict, kind: str = SEMIKITE) -> "TileSet":
        return TileSet({n: is_poly_K(p, kind).cells for n, p in polys.items()}, kind, dict(polys))

    def names(self):
        return sorted(self.tiles)

    def __getitem__(self, name):
        return self.tiles[name]

    def to_json(self):
        return {"kind": self.kind,
                "tiles": {n: [list(g.astuple()) for g in sorted(c)] for n, c in sorted(self.tiles.items())}}

    @staticmethod
    def from_json(d) -> "TileSet":
        from .io import SchemaError, element_from_json
        if not isinstance(d, dict) or not isinstance(d.get("tiles"), dict):
            raise SchemaError("tile set needs a 'tiles' object")
        kind = d.get("kind", SEMIKITE)
        if kind not in (SEMIKITE, KITE):
            raise SchemaError(f"unknown cell kind {kind!r}")
        return TileSet({n: frozenset(element_from_json(c) for c in cells) for n, cells in d["tiles"].items()},
                       kind)


@dataclass(frozen=True)
class Cotiler:
    placements: frozenset  # of (GammaElement, tile name)

    def __post_init__(self):
        object.__setattr__(self, "placements", frozenset(self.placements))

    def __len__(self):
        return len(self.placements)

    def __iter__(self):
        return iter(sorted(self.placements))

    def names(self):
        return sorted({n for _, n in self.placements})


@dataclass
class CoverReport:
    window: frozenset
    covered_once: frozenset
    gaps: frozenset
    overlaps: frozenset
    overhang_overlaps: frozenset = frozenset()  # cells outside the window hit twice
    witnesses: dict = field(default_factory=dict)  # overlapping cell -> placements

    @property
    def verdict(self) -> bool:
        return not self.gaps and not self.overlaps and not self.overhang_overlaps

    def to_json(self):
        def els(s):
            return [list(g.astuple()) for g in sorted(s)]
        return {
            "verdict": self.verdict,
            "window_size": len(self.window),
            "covered_once": len(self.covered_once),
            "gaps": els(self.gaps),
            "overlaps": els(self.overlaps),
            "overhang_overlaps": els(self.overhang_overlaps),
            "witnesses": [[list(c.astuple()), [[list(g.astuple()), n] for g, n in sorted(ps)]]
                          for c, ps in sorted(self.witnesses.items())[:20]],
        }


# ------------------------------------------------------------------ poly-K

def is_poly_K(poly: Polygon, kind: str = SEMIKITE) -> GridRegion:
    """Cell decomposition of a polygon; NotPolyK (with witness) otherwise."""
    return GridRegion(grp(poly, kind), kind)


def transfer_cotiler(placements: Iterable, polygons: dict, kind: str = SEMIKITE,
                     group: str = GAMMA_FULL, rename: dict | None = None):
    """Rename each geometric tile T to grp_K(T); placements stay the same.

    Returns (Cotiler, TileSet).  The Hat is renamed Gat by default.
    """
    rename = {"Hat": "Gat"} if rename is None else rename
    group = subgroup_name(group)
    cells = {}
    out = []
    for g, name in placements:
        if not subgroup_membership(g, group):
            raise NotInActingGroup(f"{g} is not in {group}")
        if name not in polygons:
            raise KeyError(f"no polygon for tile {name!r}")
        new = rename.get(name, name)
        if new not in cells:
            cells[new] = is_poly_K(polygons[name], kind).cells
        out.append((g, new))
    return Cotiler(frozenset(out)), (TileSet(cells, kind) if cells else None)


# ------------------------------------------------------------ exact cover

@lru_cache(maxsize=1 << 16)
def _image(g: GammaElement, cells: frozenset) -> tuple:
    return tuple(g * c for c in cells)


def _count_chunk(args):
    tiles, chunk = args
    c = Counter()
    for g, name in chunk:
        c.update(_image(g, tiles[name]))
    return c


def verify_exact_cover(tiles: TileSet, cotiler, window) -> CoverReport:
    """Assign each window cell to the placements covering it."""
    window = frozenset(window)
    placements = sorted(cotiler.placements if isinstance(cotiler, Cotiler) else cotiler)
    for g, name in placements:
        if name not in tiles.tiles:
            raise KeyError(f"unknown tile {name!r}")
        if tiles.kind == KITE and g.flip:
            raise NotInActingGroup(f"{g} is not in Γ⁺")
    n = worker_count()
    if n > 1 and len(placements) > 2000:
        size = math.ceil(len(placements) / n)
        chunks = [placements[i:i + size] for i in range(0, len(placements), size)]
        counts = Counter()
        with ProcessPoolExecutor(n) as ex:
            for c in ex.map(_count_chunk, [(tiles.tiles, ch) for ch in chunks]):
                counts.update(c)
    else:
        counts = _count_chunk((tiles.tiles, placements))
    once = frozenset(c for c in window if counts.get(c, 0) == 1)
    gaps = frozenset(c for c in window if counts.get(c, 0) == 0)
    over = frozenset(c for c in window if counts.get(c, 0) > 1)
    outside = frozenset(c for c, k in counts.items() if k > 1 and c not in window)
    witnesses = {}
    bad = over | outside
    if bad:
        for g, name in placements:
            for cell in tiles.tiles[name]:
                gc = g * cell
                if gc in bad:
                    witnesses.setdefault(gc, []).append((g, name))
    return CoverReport(window, once, gaps, over, outside, witnesses)


# ------------------------------------------------------------- orbit map

def _group_point_parts(group: str):
    group = subgroup_name(group)
    if group == GAMMA_FULL:
        return point_elements(SEMIKITE)
    if group == GAMMA_PLUS:
        return point_elements(KITE)
    if group == LATTICE:
        return [(0, 0)]
    raise ValueError(f"unsupported acting group {group!r}")


def orbit_grp(poly: Polygon, basepoint: Point, group: str = GAMMA_FULL) -> frozenset:
    """{g in G : g . basepoint in poly}, exactly."""
    x0, y0, x1, y1 = poly.bbox()
    corners = [Point(x, y) for x in (x0, x1) for y in (y0, y1)]
    reach = math.ceil(math.hypot(float(basepoint.x), float(basepoint.y))) + 1
    coords = [lattice_coords(c) for c in corners]
    pad = reach // 2 + 2
    lo_x = min(_floor(c[0]) for c in coords) - pad
    hi_x = max(_floor(c[0]) for c in coords) + pad + 1
    lo_y = min(_floor(c[1]) for c in coords) - pad
    hi_y = max(_floor(c[1]) for c in coords) + pad + 1
    fx0, fy0, fx1, fy1 = float(x0), float(y0), float(x1), float(y1)
    out = []
    for rot, flip in _group_point_parts(group):
        for tx in range(lo_x, hi_x + 1):
            for ty in range(lo_y, hi_y + 1):
                g = GammaElement(tx, ty, rot, flip)
                q = to_isometry(g).apply(basepoint)
                qx, qy = float(q.x), float(q.y)
                if not (fx0 - 1e-9 <= qx <= fx1 + 1e-9 and fy0 - 1e-9 <= qy <= fy1 + 1e-9):
                    continue
                where = point_in_polygon(poly, q)
                if where == INSIDE:
                    out.append(g)
                elif where == BOUNDARY:
                    raise BoundaryBasepoint(f"{g} maps the basepoint onto the boundary")
    return frozenset(out)


# ------------------------------------------------------ cell decomposition

def fundamental_domain(group: str = GAMMA_FULL) -> frozenset:
    """Semikites making up the chosen fundamental domain F of the action."""
    group = subgroup_name(group)
    if group == GAMMA_FULL:
        return frozenset({IDENTITY})
    if group == GAMMA_PLUS:
        return frozenset({IDENTITY, BETA})
    if group == LATTICE:
        return frozenset(R6 ** i * f for i in range(6) for f in (IDENTITY, BETA))
    raise ValueError(f"unsupported acting group {group!r}")


def _tile_semikites(tiles: TileSet, name: str) -> frozenset:
    if tiles.polygons.get(name) is not None:
        try:
            return grp(tiles.polygons[name], SEMIKITE)
        except NotPolyK as e:
            raise NotGridAligned(f"tile {name!r} is not Semikite-aligned: {e}") from None
    cells = tiles.tiles[name]
    if tiles.kind == KITE:
        return frozenset(c for h in cells for c in (h, h * BETA))
    return cells


def _split(s: GammaElement, F: frozenset, group: str):
    """Write Semikite s as h . f with h in G and f in F."""
    for f in F:
        h = s * f.inverse()
        if subgroup_membership(h, group):
            return h, f
    raise AssertionError(f"{s} not in G . F")


def chi(s: GammaElement, tiles: TileSet, group: str = GAMMA_FULL, semikites=None) -> frozenset:
    """Placements (g, T), g in G, whose tile covers Semikite s."""
    group = subgroup_name(group)
    out = []
    for name in tiles.names():
        cells = semikites[name] if semikites else _tile_semikites(tiles, name)
        for c in cells:
            g = s * c.inverse()
            if subgroup_membership(g, group):
                out.append((g, name))
    return frozenset(out)


def cell_decomposition(tiles: TileSet, group: str = GAMMA_FULL) -> frozenset:
    """Group the Semikites of F by chi; each class is one cell.

    The result partitions F, and every tile is a disjoint union of
    G-translates of the returned cells (checked before returning).
    """
    group = subgroup_name(group)
    F = fundamental_domain(group)
    semis = {n: _tile_semikites(tiles, n) for n in tiles.names()}
    classes = {}
    for s in sorted(F):
        classes.setdefault(chi(s, tiles, group, semis), set()).add(s)
    cells = frozenset(frozenset(v) for v in classes.values())
    for name in tiles.names():
        decompose_tile(semis[name], cells, group)
    return cells


def decompose_tile(semikites: frozenset, cells: frozenset, group: str = GAMMA_FULL) -> list:
    """Write a tile (as Semikites) as a disjoint union of h . K; raises if impossible."""
    group = subgroup_name(group)
    F = frozenset().union(*cells)
    cell_of = {f: c for c in cells for f in c}
    pieces = set()
    for s in semikites:
        h, f = _split(s, F, group)
        K = cell_of[f]
        if any(h * k not in semikites for k in K):
            raise NotGridAligned(f"tile is not a union of cells near {s}")
        pieces.add((h, K))
    total = sum(len(K) for _, K in pieces)
    if total != len(semikites):
        raise NotGridAligned("cell pieces overlap")
    return sorted(pieces, key=lambda hk: (hk[0], sorted(hk[1])))


def cell_area(cell) -> object:
    return CELL_AREA[SEMIKITE] * len(cell)
