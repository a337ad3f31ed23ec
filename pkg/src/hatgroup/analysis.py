"""Periods and stabilizers of finite window patches, rotation screening, and
a backtracking exact-cover search for extending group tilings."""
from __future__ import annotations

import math
from fractions import Fraction
import sys
from dataclasses import dataclass, field
from functools import lru_cache

from .discretize import Cotiler, TileSet, verify_exact_cover
from .exact import QS3, Polygon
from .grid import KITE, SEMIKITE, adjacency_generators
from .group import (GAMMA_FULL, GAMMA_PLUS, IDENTITY, R3, GammaElement, cayley_ball, classify,
                    subgroup_membership, subgroup_name)


class InvalidPartial(ValueError):
    pass


# ------------------------------------------------------------- placements

@lru_cache(maxsize=None)
def tile_symmetries(cells: frozenset) -> tuple:
    """Elements s with s . cells = cells (the tile's own symmetries)."""
    c0 = min(cells)
    out = []
    for c in cells:
        s = c * c0.inverse()
        if frozenset(s * d for d in cells) == cells:
            out.append(s)
    return tuple(sorted(out))


def normalize(g: GammaElement, cells: frozenset) -> GammaElement:
    """Canonical representative of the placement g . cells."""
    return min(g * s for s in tile_symmetries(cells))


@dataclass
class WindowPatch:
    """Placements together with a window of cells they cover exactly once."""

    placements: frozenset
    window: frozenset
    tiles: TileSet

    def __post_init__(self):
        self.placements = frozenset((normalize(g, self.tiles[n]), n) for g, n in self.placements)
        self.window = frozenset(self.window)
        if not self.window:
            raise ValueError("empty window")
        rep = verify_exact_cover(self.tiles, self.placements, self.window)
        if rep.gaps or rep.overlaps:
            raise ValueError(f"window not covered exactly once: {len(rep.gaps)} gaps, {len(rep.overlaps)} overlaps")
        self.placements = frozenset(p for p in self.placements if self._meets(p))

    def _meets(self, p) -> bool:
        return any(p[0] * c in self.window for c in self.tiles[p[1]])

    def fits(self, g: GammaElement, name: str) -> bool:
        return all(g * c in self.window for c in self.tiles[name])

    @property
    def inner(self) -> frozenset:
        return frozenset(p for p in self.placements if self.fits(*p))

    def act(self, h: GammaElement, p):
        g, n = p
        return normalize(h * g, self.tiles[n]), n

    def central(self):
        """The inner placement covering the window's central cell, or the least inner."""
        inner = self.inner
        if not inner:
            return None
        center = _window_center(self.window)
        for p in sorted(inner):
            if any(p[0] * c == center for c in self.tiles[p[1]]):
                return p
        return min(inner)


def _window_center(window) -> GammaElement:
    # the cell with the least total distance (in cell steps) to the others is costly;
    # use the cell nearest the average centroid instead
    from .grid import cell_centroid
    cells = sorted(window)
    pts = [cell_centroid(c) for c in cells]
    mx = sum(float(p.x) for p in pts) / len(pts)
    my = sum(float(p.y) for p in pts) / len(pts)
    return min(cells, key=lambda c: ((float(cell_centroid(c).x) - mx) ** 2 + (float(cell_centroid(c).y) - my) ** 2, c))


MIN_OVERLAP = Fraction(2, 3)


def is_window_period(p: WindowPatch, h: GammaElement, min_overlap: float = MIN_OVERLAP) -> bool:
    """Partial-window period test.

    Every interior placement whose image under h (or h^-1) still lies inside
    the window must land on an interior placement, and at least min_overlap
    of the interior placements must stay inside (so far-away accidental
    agreement on a sliver of the window does not count).
    """
    inner = p.inner
    if not inner:
        return h.is_identity()
    stay = 0
    for k in (h, h.inverse()):
        for q in inner:
            r = p.act(k, q)
            if p.fits(*r):
                stay += 1
                if r not in inner:
                    return False
    return stay > 0 and stay >= min_overlap * 2 * len(inner)


# -------------------------------------------------------------- stabilizer

@dataclass
class StabilizerReport:
    elements: tuple
    classes: dict
    is_subgroup: bool
    note: str
    candidates_checked: int = 0

    def to_json(self):
        return {
            "elements": [list(g.astuple()) for g in self.elements],
            "classes": {str(g): self.classes[g].kind for g in self.elements},
            "is_subgroup": self.is_subgroup,
            "note": self.note,
            "candidates_checked": self.candidates_checked,
        }


def default_candidates(p: WindowPatch, min_overlap=MIN_OVERLAP) -> set:
    """Elements taking an anchor placement onto an interior placement.

    A period h keeps at least (2 min_overlap - 1) of the interior placements
    inside, so anchoring at more than the remaining share of them is enough
    to catch every period.
    """
    inner = sorted(p.inner)
    if not inner:
        return {IDENTITY}
    c = p.central()
    need = len(inner) - math.floor((2 * Fraction(min_overlap) - 1) * len(inner)) + 1
    anchors = [c] + [q for q in inner if q != c][:max(0, need - 1)]
    out = set()
    for a in anchors:
        for q in inner:
            if q[1] != a[1]:
                continue
            for s in tile_symmetries(p.tiles[a[1]]):
                out.add(q[0] * s * a[0].inverse())
    return out


def patch_stabilizer(p: WindowPatch, candidates=None, min_overlap: float = MIN_OVERLAP) -> StabilizerReport:
    cands = sorted(set(candidates) if candidates is not None else default_candidates(p, min_overlap))
    found = {IDENTITY} | {h for h in cands if is_window_period(p, h, min_overlap)}
    elements = tuple(sorted(found))
    closed = all((a * b) in found or (a * b) not in cands for a in elements for b in elements)
    closed = closed and all(a.inverse() in found or a.inverse() not in cands for a in elements)
    return StabilizerReport(elements, {g: classify(g) for g in elements}, closed,
                            _conjugacy_note(found), len(cands))


def _conjugacy_note(found) -> str:
    if found == {IDENTITY}:
        return "trivial"
    r3 = {IDENTITY, R3, R3 * R3}
    if found == r3:
        return "exactly {id, R3, R3^2}"
    rots = [g for g in found if g != IDENTITY]
    if len(found) == 3 and all(g.flip == 0 and g.rot in (2, 4) for g in rots):
        c = classify(rots[0]).center
        return f"conjugate of {{id, R3, R3^2}} (3-fold centre at {c})"
    return f"{len(found)} elements"


def find_translation_periods(p: WindowPatch, max_norm, min_overlap: float = MIN_OVERLAP) -> list:
    """Nonzero lattice translations of Euclidean length <= max_norm that are
    window periods."""
    lim = Fraction(str(max_norm)) ** 2
    n = int(math.ceil(float(max_norm))) + 2
    out = []
    for tx in range(-n, n + 1):
        for ty in range(-n, n + 1):
            if tx == 0 and ty == 0:
                continue
            t = GammaElement(tx, ty, 0, 0)
            if t.translation_vector().norm2() > QS3(lim):
                continue
            if is_window_period(p, t, min_overlap):
                out.append(t)
    return sorted(out)


# ------------------------------------------------------ rotation screening

def vertex_angles(poly: Polygon) -> list:
    """Interior angles in degrees (multiples of 30 on this grid)."""
    vs = poly.vertices
    n = len(vs)
    out = []
    for i in range(n):
        a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
        u, w = a - b, c - b
        ang = math.degrees(math.atan2(float(u.cross(w)), float(u.dot(w)))) % 360
        # ccw polygon: interior angle measured from next edge back to previous
        interior = (360 - ang) % 360
        out.append(int(round(interior)))
    return out


def _has_rotational_symmetry(poly: Polygon, order: int) -> bool:
    from .exact import IsometryMatrix
    c = poly.centroid()
    m = IsometryMatrix.rotation(6 // order, c) if order in (2, 3, 6) else None
    if m is None:
        return order == 1
    return set(m.apply(v) for v in poly.vertices) == set(poly.vertices)


def rotation_feasibility(poly: Polygon) -> dict:
    """Orders of rotational symmetry not ruled out by the local picture.

    A rotation of order n fixing a tiling has its centre inside a tile (which
    then has that symmetry), at an edge midpoint (n = 2), or at a vertex where
    corners of angle from the tile (or 180 for a point inside an edge) add up
    to 360/n.
    """
    angles = set(vertex_angles(poly)) | {180}
    out = {}
    for order in (1, 2, 3, 6):
        sector = 360 // order
        reasons = []
        if order == 1:
            reasons.append("identity")
        if _has_rotational_symmetry(poly, order) and order > 1:
            reasons.append("tile symmetry")
        if order == 2:
            reasons.append("edge midpoint")
        if order > 1 and _sums_to(sector, sorted(angles)):
            reasons.append(f"vertex angles sum to {sector}")
        out[order] = reasons
    return {k: v for k, v in out.items() if v}


def _sums_to(target: int, parts) -> bool:
    reach = {0}
    for _ in range(target // max(1, min(parts)) + 1):
        reach |= {r + a for r in reach for a in parts if r + a <= target}
    return target in reach


# ---------------------------------------------------------------- search

@dataclass
class SearchResult:
    status: str  # complete | exhausted | cutoff
    completion: Cotiler | None
    stats: dict = field(default_factory=dict)

    def to_json(self):
        d = {"status": self.status, "stats": dict(self.stats)}
        if self.completion is not None:
            d["placements"] = [[list(g.astuple()), n] for g, n in sorted(self.completion.placements)]
        return d


def gamma_plus_hat_tiles(reflected: bool = False) -> TileSet:
    """The Hat as a Kite tile of the rotation group, optionally with its mirror image."""
    from .grid import gat
    from .group import ALPHA
    tiles = {"Hat": frozenset(g for g in gat() if g.flip == 0)}
    if reflected:
        tiles["ReflectedHat"] = frozenset(g for g in (ALPHA * c for c in gat()) if g.flip == 0)
    return TileSet(tiles, KITE)


def window_ball(radius: int, kind: str = SEMIKITE) -> frozenset:
    """Cells within the given number of cell steps of the base cell."""
    return frozenset(cayley_ball(sorted(adjacency_generators(kind)), radius))


def extend_search(tiles: TileSet, window, partial=(), budget: int = 100000,
                  group: str | None = None, progress=None) -> SearchResult:
    """Depth-first exact-cover search of the window.

    The lexicographically least uncovered window cell is covered next, trying
    tiles in file order and, within a tile, its cells in canonical order.
    Tiles may overhang the window; no two tiles may overlap anywhere.
    """
    group = subgroup_name(group or (GAMMA_PLUS if tiles.kind == KITE else GAMMA_FULL))
    window = frozenset(window)
    names = list(tiles.tiles)
    occupied = {}
    placed = []
    for g, n in sorted(partial):
        for c in tiles[n]:
            gc = g * c
            if gc in occupied:
                raise InvalidPartial(f"partial placements overlap at {gc}")
            occupied[gc] = (g, n)
        placed.append((g, n))
    order = sorted(window)
    options = []
    for n in names:
        for d in sorted(tiles[n]):
            options.append((n, d.inverse(), tiles[n]))
    stats = {"nodes": 0, "max_depth": 0, "budget": budget}

    def first_uncovered(start):
        for i in range(start, len(order)):
            if order[i] not in occupied:
                return i
        return None

    # iterative DFS so deep searches do not hit the recursion limit
    stack = []
    idx = first_uncovered(0)
    if idx is None:
        return SearchResult("complete", Cotiler(frozenset(placed)), stats)
    stack.append([idx, 0, None])
    while stack:
        frame = stack[-1]
        i, k, last = frame
        if last is not None:
            g, n = last
            for c in tiles[n]:
                del occupied[g * c]
            placed.pop()
            frame[2] = None
        cell = order[i]
        advanced = False
        while k < len(options):
            n, dinv, cells = options[k]
            k += 1
            g = cell * dinv
            if not subgroup_membership(g, group):
                continue
            key = (g, n)
            if any(g * c in occupied for c in cells):
                continue
            stats["nodes"] += 1
            if stats["nodes"] > budget:
                stats["max_depth"] = max(stats["max_depth"], len(stack))
                return SearchResult("cutoff", None, stats)
            if progress is not None and stats["nodes"] % 10000 == 0:
                progress(stats)
            for c in cells:
                occupied[g * c] = key
            placed.append(key)
            frame[1] = k
            frame[2] = key
            nxt = first_uncovered(i + 1)
            if nxt is None:
                stats["max_depth"] = max(stats["max_depth"], len(stack))
                return SearchResult("complete", Cotiler(frozenset(placed)), stats)
            stack.append([nxt, 0, None])
            stats["max_depth"] = max(stats["max_depth"], len(stack))
            advanced = True
            break
        if not advanced:
            stack.pop()
    return SearchResult("exhausted", None, stats)


def search_growing(tiles: TileSet, max_radius: int, budget: int, group: str | None = None,
                   progress=None) -> dict:
    """Run extend_search on balls of growing radius until one is exhausted,
    the budget is hit, or max_radius is reached."""
    results = {}
    for r in range(1, max_radius + 1):
        res = extend_search(tiles, window_ball(r, tiles.kind), budget=budget, group=group, progress=progress)
        results[r] = res
        if res.status != "complete":
            break
    return results


def stderr_progress(stats):
    print(f"search: {stats['nodes']} nodes", file=sys.stderr)
