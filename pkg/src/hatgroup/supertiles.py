"""Hierarchical HTPF supertiles built from metatile outlines, in exact arithmetic.

Level-0 metatiles are clusters of hats with polygonal outlines.  Level k+1
supertiles are assembled from a 29-tile patch of level-k supertiles, placed by
matching outline edges, and new outlines are read off that patch.  Geometry of
the outlines changes from level to level but every hat stays on one Kitegrid.

This construction is the independent route used to derive and cross-check the
shipped substitution rules (the gluing-based substitution in
``substitution.py`` never calls into it).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import QS3, IsometryMatrix, Point, Polygon
from .grid import hat_polygon
from .group import GammaElement, from_isometry

NAMES = ("H", "T", "P", "F")


def hex_pt(x, y) -> Point:
    """Point of the unit triangular lattice, x*(1,0) + y*(1/2, sqrt3/2)."""
    return Point(QS3(Fraction(x) + Fraction(y) / 2), QS3(0, Fraction(y) / 2))


def pt(x, hr3_multiple=0) -> Point:
    return Point(QS3(Fraction(x)), QS3(0, Fraction(hr3_multiple) / 2))


# Hat outline in its own frame (13 vertices, one edge of length 2).
HAT_OUTLINE = [
    hex_pt(0, 0), hex_pt(-1, -1), hex_pt(0, -2), hex_pt(2, -2),
    hex_pt(2, -1), hex_pt(4, -2), hex_pt(5, -1), hex_pt(4, 0),
    hex_pt(3, 0), hex_pt(2, 2), hex_pt(0, 3), hex_pt(0, 2),
    hex_pt(-1, 2),
]


def _double(p: Point) -> Point:
    return p.scale(2)


def _intersect(p1: Point, q1: Point, p2: Point, q2: Point) -> Point:
    d = (q2.y - p2.y) * (q1.x - p1.x) - (q2.x - p2.x) * (q1.y - p1.y)
    ua = ((q2.x - p2.x) * (p1.y - p2.y) - (q2.y - p2.y) * (p1.x - p2.x)) / d
    return Point(p1.x + ua * (q1.x - p1.x), p1.y + ua * (q1.y - p1.y))


def _affine(lin, off) -> IsometryMatrix:
    return IsometryMatrix(lin, off)


@dataclass
class Supertile:
    name: str
    level: int
    shape: list
    children: list = field(default_factory=list)  # (IsometryMatrix, Supertile | "hat" | "hat~")

    def eval_child(self, n: int, i: int) -> Point:
        T, ch = self.children[n]
        return T.apply(ch.shape[i])


def _level0():
    # outlines are doubled so that hats sit at unit scale
    H_outline = [_double(p) for p in (pt(0), pt(4), pt(Fraction(9, 2), 1), pt(Fraction(5, 2), 5),
                                       pt(Fraction(3, 2), 5), pt(Fraction(-1, 2), 1))]
    T_outline = [_double(p) for p in (pt(0), pt(3), pt(Fraction(3, 2), 3))]
    P_outline = [_double(p) for p in (pt(0), pt(4), pt(3, 2), pt(-1, 2))]
    F_outline = [_double(p) for p in (pt(0), pt(3), pt(Fraction(7, 2), 1), pt(3, 2), pt(-1, 2))]

    hat = HAT_OUTLINE
    H = Supertile("H", 0, H_outline)
    H.children.append((IsometryMatrix.match_segments(hat[5], hat[7], H_outline[5], H_outline[0]), "hat"))
    H.children.append((IsometryMatrix.match_segments(hat[9], hat[11], H_outline[1], H_outline[2]), "hat"))
    H.children.append((IsometryMatrix.match_segments(hat[5], hat[7], H_outline[3], H_outline[4]), "hat"))
    reflect = IsometryMatrix.rotation(2) @ IsometryMatrix.reflection_x()
    H.children.append((_affine(reflect.linear, _double(pt(Fraction(5, 2), 1))), "hat~"))

    T = Supertile("T", 0, T_outline)
    T.children.append((IsometryMatrix.translation(_double(pt(Fraction(1, 2), 1))), "hat"))

    second = _affine(IsometryMatrix.rotation(-1).linear, _double(pt(0, 2)))
    P = Supertile("P", 0, P_outline)
    P.children.append((IsometryMatrix.translation(_double(pt(Fraction(3, 2), 1))), "hat"))
    P.children.append((second, "hat"))
    F = Supertile("F", 0, F_outline)
    F.children.append((IsometryMatrix.translation(_double(pt(Fraction(3, 2), 1))), "hat"))
    F.children.append((second, "hat"))
    return {"H": H, "T": T, "P": P, "F": F}


# (parent child, parent edge, new tile, new edge) or
# (child P, vertex, child Q, vertex, new tile, new edge)
PATCH_RULES = [
    ("H",),
    (0, 0, "P", 2), (1, 0, "H", 2), (2, 0, "P", 2), (3, 0, "H", 2),
    (4, 4, "P", 2), (0, 4, "F", 3), (2, 4, "F", 3), (4, 1, 3, 2, "F", 0),
    (8, 3, "H", 0), (9, 2, "P", 0), (10, 2, "H", 0), (11, 4, "P", 2),
    (12, 0, "H", 2), (13, 0, "F", 3), (14, 2, "F", 1), (15, 3, "H", 4),
    (8, 2, "F", 1), (17, 3, "H", 0), (18, 2, "P", 0), (19, 2, "H", 2),
    (20, 4, "F", 3), (20, 0, "P", 2), (22, 0, "H", 2), (23, 4, "F", 3),
    (23, 0, "F", 3), (16, 0, "P", 2), (9, 4, 0, 2, "T", 2), (4, 0, "F", 3),
]

# which patch members make up each new supertile
SUPERTILE_MEMBERS = {
    "H": (0, 9, 16, 27, 26, 6, 1, 8, 10, 15),
    "P": (7, 2, 3, 4, 28),
    "F": (21, 20, 22, 23, 24, 25),
    "T": (11,),
}


def construct_patch(tiles: dict) -> Supertile:
    ret = Supertile("patch", -1, [])
    for r in PATCH_RULES:
        if len(r) == 1:
            ret.children.append((IsometryMatrix.identity(), tiles[r[0]]))
        elif len(r) == 4:
            T, ch = ret.children[r[0]]
            poly = ch.shape
            P = T.apply(poly[(r[1] + 1) % len(poly)])
            Q = T.apply(poly[r[1]])
            new = tiles[r[2]]
            npoly = new.shape
            M = IsometryMatrix.match_segments(npoly[r[3]], npoly[(r[3] + 1) % len(npoly)], P, Q)
            ret.children.append((M, new))
        else:
            TP, chP = ret.children[r[0]]
            TQ, chQ = ret.children[r[2]]
            P = TQ.apply(chQ.shape[r[3]])
            Q = TP.apply(chP.shape[r[1]])
            new = tiles[r[4]]
            npoly = new.shape
            M = IsometryMatrix.match_segments(npoly[r[5]], npoly[(r[5] + 1) % len(npoly)], P, Q)
            ret.children.append((M, new))
    return ret


def construct_supertiles(patch: Supertile, level: int) -> dict:
    rot = IsometryMatrix.rotation
    bps1 = patch.eval_child(8, 2)
    bps2 = patch.eval_child(21, 2)
    rbps = rot(-2, bps1).apply(bps2)
    p72 = patch.eval_child(7, 2)
    p252 = patch.eval_child(25, 2)
    llc = _intersect(bps1, rbps, patch.eval_child(6, 2), p72)
    w = patch.eval_child(6, 2) - llc

    H_out = [llc, bps1]
    w = rot(-1).apply(w)
    H_out.append(H_out[1] + w)
    H_out.append(patch.eval_child(14, 2))
    w = rot(-1).apply(w)
    H_out.append(H_out[3] - w)
    H_out.append(patch.eval_child(6, 2))

    P_out = [p72, p72 + (bps1 - llc), bps1, llc]
    F_out = [bps2, patch.eval_child(24, 2), patch.eval_child(25, 0), p252, p252 + (llc - bps1)]

    AAA = H_out[2]
    BBB = H_out[1] + (H_out[4] - H_out[5])
    CCC = rot(-1, BBB).apply(AAA)
    T_out = [BBB, CCC, AAA]

    outlines = {"H": H_out, "P": P_out, "F": F_out, "T": T_out}
    out = {}
    for name in NAMES:
        st = Supertile(name, level, outlines[name])
        for i in SUPERTILE_MEMBERS[name]:
            st.children.append(patch.children[i])
        out[name] = st
    return out


@lru_cache(maxsize=None)
def raw_levels(max_level: int) -> tuple:
    """Supertiles of levels 0..max_level in the construction's own frame."""
    levels = [_level0()]
    for k in range(1, max_level + 1):
        patch = construct_patch(levels[-1])
        levels.append(construct_supertiles(patch, k))
    return tuple(levels)


@lru_cache(maxsize=None)
def raw_patches(max_level: int) -> tuple:
    levels = raw_levels(max_level)
    return tuple(construct_patch(levels[k]) for k in range(max_level + 1))


# --------------------------------------------------- conversion to the grid

@lru_cache(maxsize=None)
def frame_map() -> IsometryMatrix:
    """Isometry taking the construction frame onto the Kitegrid frame.

    It is chosen so that the hat outline lands exactly on the grid Hat; if only
    a mirror match exists the whole construction is mirrored.
    """
    target = list(hat_polygon().vertices)
    src = list(Polygon(tuple(HAT_OUTLINE)).vertices)  # normalised to ccw
    n = len(src)
    assert len(target) == n
    for mirror in (False, True):
        pts = src
        pre = IsometryMatrix.identity()
        if mirror:
            pre = IsometryMatrix.reflection_x()
            pts = list(Polygon(tuple(pre.apply(p) for p in src)).vertices)
        for shift in range(n):
            try:
                m = IsometryMatrix.match_segments(pts[0], pts[1], target[shift], target[(shift + 1) % n])
            except ValueError:
                continue
            if all(m.apply(pts[i]) == target[(shift + i) % n] for i in range(n)):
                return m @ pre
    raise AssertionError("hat outline does not match the grid Hat")


@lru_cache(maxsize=None)
def _tile_frames() -> dict:
    """For each name, the map from the metatile frame to the grid placing its
    first hat exactly on the grid Hat."""
    phi = frame_map()
    lv0 = raw_levels(0)[0]
    return {n: phi @ lv0[n].children[0][0].inverse() for n in NAMES}


def global_frame() -> IsometryMatrix:
    # the construction frame at every level is that of the level-0 H at the origin
    return _tile_frames()["H"]


def placement(N: IsometryMatrix, name: str) -> GammaElement:
    """Gamma element of a level-0 metatile placed by N in the construction frame."""
    phi = global_frame()
    return from_isometry(phi @ N @ _tile_frames()[name].inverse())


def hat_placement(M: IsometryMatrix) -> GammaElement:
    """Gamma element of a hat placed by M in the construction frame."""
    return from_isometry(global_frame() @ M @ frame_map().inverse())


def flatten(st: Supertile, base: IsometryMatrix | None = None) -> list:
    """Level-0 metatiles of a supertile as (isometry, name) in the given frame."""
    base = base or IsometryMatrix.identity()
    if st.level == 0:
        return [(base, st.name)]
    out = []
    for T, ch in st.children:
        out.extend(flatten(ch, base @ T))
    return out


def level0_hats(name: str) -> list:
    """Hats of a canonical level-0 metatile as (Gamma element, reflected?)."""
    st = raw_levels(0)[0][name]
    A = _tile_frames()[name]
    return [from_isometry(A @ T @ frame_map().inverse()) for T, _ in st.children]


def supertile_metatiles(name: str, level: int) -> list:
    """Level-0 metatiles of the level-k supertile, as (GammaElement, name)."""
    st = raw_levels(level)[level][name]
    return [(placement(T, n), n) for T, n in flatten(st)]


def outline_in_grid(name: str, level: int = 0) -> list:
    """Outline of the level-k supertile in grid coordinates.

    Level 0 outlines are given in the canonical metatile frame, higher levels
    in the global frame.
    """
    A = _tile_frames()[name] if level == 0 else global_frame()
    return [A.apply(p) for p in raw_levels(level)[level][name].shape]


def flatten_paths(st: Supertile, depth: int, base: IsometryMatrix | None = None, path=()) -> list:
    """Sub-supertiles ``depth`` levels below st as (path, isometry, name)."""
    base = base or IsometryMatrix.identity()
    if depth == 0:
        return [(path, base, st.name)]
    out = []
    for i, (T, ch) in enumerate(st.children):
        out.extend(flatten_paths(ch, depth - 1, base @ T, path + (i,)))
    return out


def supertile_element(N: IsometryMatrix) -> GammaElement:
    """Gamma element of a level>=1 supertile placed by N."""
    phi = global_frame()
    return from_isometry(phi @ N @ phi.inverse())


@lru_cache(maxsize=None)
def children(name: str) -> tuple:
    """Level-0 metatiles making up the level-1 supertile, in its own frame."""
    st = raw_levels(1)[1][name]
    return tuple(sorted((placement(T, n), n) for T, n in flatten(st)))


@lru_cache(maxsize=None)
def level_pairs(name: str, k: int):
    """Matched descriptions of the level-k supertile.

    Returns (tiles, images): tiles[path] = (P, t) is the level-0 metatile at
    that path of the level-(k-1) supertile, images[path] = Psi, the Gamma
    element placing the level-1 supertile at the same path of the level-k
    supertile.  The substitution sends tile (P, t) to Psi . children(t).
    """
    lv = raw_levels(k)
    tiles = {p: (placement(N, t), t) for p, N, t in flatten_paths(lv[k - 1][name], k - 1)}
    images = {p: supertile_element(N) for p, N, t in flatten_paths(lv[k][name], k - 1)}
    return tiles, images


@lru_cache(maxsize=None)
def metatile_cells(name: str) -> frozenset:
    """Semikite cells of the canonical metatile (union of its hats)."""
    from .grid import gat
    return frozenset(h * c for h in level0_hats(name) for c in gat())


def adjacent_pairs(tiles: dict) -> set:
    """Pairs of keys whose metatile supports share a Semikite edge."""
    from .group import COXETER_GENERATORS
    owner = {}
    for key, (g, t) in tiles.items():
        for c in metatile_cells(t):
            owner[g * c] = key
    out = set()
    for key, (g, t) in tiles.items():
        for c in metatile_cells(t):
            gc = g * c
            for s in COXETER_GENERATORS:
                other = owner.get(gc * s)
                if other is not None and other != key:
                    out.add((key, other))
    return out


class InconsistentHierarchy(AssertionError):
    pass


def gluing_table(max_level: int = 5) -> dict:
    """(t_a, t_b, delta) -> Delta for adjacent tiles, over every supertile up
    to max_level; raises if two occurrences disagree."""
    table = {}
    for k in range(2, max_level + 1):
        for name in NAMES:
            tiles, images = level_pairs(name, k)
            for a, b in adjacent_pairs(tiles):
                ga, ta = tiles[a]
                gb, tb = tiles[b]
                key = (ta, tb, ga.inverse() * gb)
                val = images[a].inverse() * images[b]
                if table.setdefault(key, val) != val:
                    raise InconsistentHierarchy(f"gluing {key} maps to {table[key]} and {val}")
    return table


# ----------------------------------------------------------- rule derivation

@lru_cache(maxsize=None)
def level0_tiles(name: str, k: int) -> dict:
    """Level-0 metatiles of the level-k supertile, keyed by path."""
    st = raw_levels(k)[k][name]
    return {p: (placement(N, t), t) for p, N, t in flatten_paths(st, k)}


@lru_cache(maxsize=None)
def level1_images(name: str, k: int) -> dict:
    st = raw_levels(k)[k][name]
    return {p: (supertile_element(N), t) for p, N, t in flatten_paths(st, k - 1)}


def forced_neighbours(max_level: int = 4) -> dict:
    """Tiles next to sigma(t) present at every interior occurrence of sigma(t)."""
    from .group import COXETER_GENERATORS
    kids = {n: children(n) for n in NAMES}
    kid_cells = {}
    for n in NAMES:
        kid_cells[n] = {g * c for g, m in kids[n] for c in metatile_cells(m)}
    found = {n: None for n in NAMES}
    for name in NAMES:
        for k in range(2, max_level + 1):
            tiles = level0_tiles(name, k)
            owner = {}
            for key, (g, t) in tiles.items():
                for c in metatile_cells(t):
                    owner[g * c] = (g, t)
            for _, (psi, t) in level1_images(name, k).items():
                mine = {psi * c for c in kid_cells[t]}
                ring = {c * s for c in mine for s in COXETER_GENERATORS} - mine
                if not all(c in owner for c in ring):
                    continue  # occurrence on the boundary of the supertile
                nbrs = frozenset((psi.inverse() * owner[c][0], owner[c][1]) for c in ring)
                found[t] = nbrs if found[t] is None else found[t] & nbrs
    return {n: tuple(sorted(found[n] or ())) for n in NAMES}


def _segments_overlap(s1, s2) -> bool:
    (a, b), (c, d) = s1, s2
    u = b - a
    if u.cross(c - a) != 0 or u.cross(d - a) != 0:
        return False
    n = u.norm2()
    t1, t2 = (c - a).dot(u) / n, (d - a).dot(u) / n
    lo, hi = min(t1, t2), max(t1, t2)
    return min(hi, QS3(1)) > max(lo, QS3(0))


def arrow_conflicts(max_level: int = 4) -> dict:
    """For every configuration of two tiles of some supertile whose outlines
    share a segment: the set of (edge_a, edge_b) lying on that segment."""
    outl = {n: outline_in_grid(n, 0) for n in NAMES}

    def segs(g, n):
        pts = [g.apply(p) for p in outl[n]]
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    configs = set()
    for name in NAMES:
        tiles = list(level0_tiles(name, max_level).values())
        # tiles whose reference points are within two buckets (outlines are < 12 across)
        buckets = {}
        for i, (g, t) in enumerate(tiles):
            q = g.apply(outl[t][0])
            buckets.setdefault((int(float(q.x) // 24), int(float(q.y) // 24)), []).append(i)
        for (bx, by), ids in buckets.items():
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for i in ids:
                        for j in buckets.get((bx + dx, by + dy), ()):
                            if i != j:
                                (ga, ta), (gb, tb) = tiles[i], tiles[j]
                                configs.add((ta, tb, ga.inverse() * gb))
    out = {}
    for ta, tb, d in sorted(configs):
        hits = {(ea, eb) for ea, s1 in enumerate(segs(IDENTITY_ELEMENT, ta))
                for eb, s2 in enumerate(segs(d, tb)) if _segments_overlap(s1, s2)}
        if hits:
            out[(ta, tb, d)] = hits
    return out


def choose_arrows(max_level: int = 4) -> dict:
    """Lexicographically first choice of one outline edge per metatile such
    that no two tiles in any supertile have coinciding marked edges."""
    import itertools
    conf = arrow_conflicts(max_level)
    sizes = [len(raw_levels(0)[0][n].shape) for n in NAMES]
    for combo in itertools.product(*(range(s) for s in sizes)):
        ar = dict(zip(NAMES, combo))
        if all((ar[ta], ar[tb]) not in v for (ta, tb, _), v in conf.items()):
            return ar
    raise AssertionError("no consistent arrow choice")


def find_fylfot() -> tuple:
    """Three F tiles of the level-2 H around a common 3-fold centre, moved so
    that the centre is the Kite head (2, 0) and the rotation is R3."""
    from .group import IDENTITY, R3, R6, classify
    tiles = level0_tiles("H", 2)
    adj = adjacent_pairs(tiles)
    inv = {v: k for k, v in tiles.items()}
    fs = sorted(g for g, t in tiles.values() if t == "F")
    fset = set(fs)
    for a in fs:
        for b in fs:
            r = b * a.inverse()
            if r.flip or r.rot not in (2, 4) or r * b not in fset:
                continue
            trio = [a, b, r * b]
            keys = [inv[(x, "F")] for x in trio]
            if not all((keys[i], keys[j]) in adj for i in range(3) for j in range(3) if i != j):
                continue
            center = classify(r).center
            for k in range(6):
                rot = R6 ** k
                c2 = rot.apply(center)
                v = Point.of(2, 0) - c2
                try:
                    x = from_isometry(IsometryMatrix.translation(v)) * rot
                except ValueError:
                    continue
                conj = x * r * x.inverse()
                if conj in (R3, R3 * R3):
                    return tuple(sorted((x * g, "F") for g in trio))
    raise AssertionError("no fylfot in the level-2 H")


IDENTITY_ELEMENT = GammaElement(0, 0, 0, 0)


def scaling_maps(rules, lam: QS3, step: float = 0.125) -> dict:
    """For each metatile a map p -> lam . R6^k p + v sending its support into
    the support of its image, checked exactly.

    Candidates come from a float search (shapely) maximising the clearance of
    the rotated, translated support inside the image support.
    """
    import math
    from shapely import affinity
    from shapely.geometry import Polygon as ShapelyPolygon
    from shapely.prepared import prep
    from .grid import SEMIKITE, geo
    from .substitution import patch_support, polygon_in_cells, scale_polygon

    def to_shapely(poly):
        return ShapelyPolygon([(float(p.x), float(p.y)) for p in poly.vertices])

    out = {}
    for n in NAMES:
        support = geo(rules.cells(n), SEMIKITE)
        target_cells = patch_support(rules, rules.children[n])
        S = to_shapely(support)
        U = to_shapely(geo(target_cells, SEMIKITE))
        pu = prep(U)
        x0, y0, x1, y1 = U.bounds
        candidates = []
        for k in range(6):
            Sk = affinity.rotate(S, 60 * k, origin=(0, 0))
            ck = Sk.centroid
            radius = max(math.hypot(x - ck.x, y - ck.y) for x, y in Sk.exterior.coords)
            ox = x0
            while ox < x1:
                oy = y0
                while oy < y1:
                    moved = affinity.translate(Sk, ox - ck.x, oy - ck.y)
                    if pu.contains(moved):
                        clear = moved.exterior.distance(U.exterior)
                        candidates.append((-clear / radius, k, ox, oy, ck.x, ck.y))
                    oy += step
                ox += step
        candidates.sort()
        for _, k, ox, oy, cx, cy in candidates[:50]:
            lf = float(lam)
            v = Point(_tidy_float(ox - lf * cx), _tidy_float(oy - lf * cy, sqrt3=True))
            if polygon_in_cells(scale_polygon(support, lam, v, k), target_cells):
                out[n] = (k, v)
                break
        else:
            raise AssertionError(f"no scaling map for {n} at lambda={lam}")
    return out


def _tidy_float(x: float, sqrt3: bool = False) -> QS3:
    if sqrt3:
        return QS3(0, Fraction(round(x / 3 ** 0.5 * 8), 8))
    return QS3(Fraction(round(x * 8), 8))


def _ref_center(patch) -> Point:
    """Average of a fixed reference point over the placements; commutes with
    any isometry permuting the patch, so it is the centre of a symmetric patch."""
    ref = Point(QS3(1), QS3(0, Fraction(-1, 4)))
    pts = [g.apply(ref) for g, _ in patch]
    n = len(pts)
    return Point(sum((p.x for p in pts), QS3(0)) / n, sum((p.y for p in pts), QS3(0)) / n)


def _alignment(rules, seed: str, steps: int):
    """Element y such that y . sigma^steps(seed) contains the seed in place,
    using the copy of the seed nearest the centre of the image (for F3 this is
    the copy at the exact centre of symmetry), least rotation first."""
    from .substitution import _iterate
    patch = rules.seeds[seed]
    img, _ = _iterate(rules, patch, steps, min(patch))
    c_img = _ref_center(img)
    c_seed = _ref_center(patch)
    s0 = min(patch)
    best = None
    for g, n in img:
        if n != s0[1]:
            continue
        y = s0[0] * g.inverse()
        moved = frozenset((y * h, m) for h, m in img)
        if patch <= moved:
            d = (y.inverse().apply(c_seed) - c_img).norm2()
            key = (d, y.rot, y.tx, y.ty)
            if best is None or key < best[0]:
                best = (key, y)
    if best is None:
        raise AssertionError(f"{seed} does not reappear in its image")
    return best[1]


def build_ruleset(max_level: int = 4, lam: QS3 | None = None):
    """Assemble the HTPF rule set from the hierarchy."""
    from .substitution import Metatile, SubstitutionRuleSet
    arrows = choose_arrows(max_level)
    mt = {n: Metatile(n, tuple(level0_hats(n)), tuple(outline_in_grid(n, 0)), arrows[n]) for n in NAMES}
    kids = {n: children(n) for n in NAMES}
    fn = forced_neighbours(max_level)
    table = gluing_table(max_level)
    seeds = {"F3": frozenset(find_fylfot()), "T": frozenset({(IDENTITY_ELEMENT, "T")})}
    lam = QS3(Fraction(5, 4)) if lam is None else lam
    rules = SubstitutionRuleSet(mt, kids, fn, table, lam, {n: (0, Point.of(0, 0)) for n in NAMES}, seeds, {})
    rules.scaling = scaling_maps(rules, lam)
    rules.alignment = {"F3": (4, _alignment(rules, "F3", 4)), "T": (2, _alignment(rules, "T", 2))}
    return rules
