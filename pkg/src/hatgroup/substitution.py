"""The HTPF metatile substitution on the Semikitegrid.

Metatiles are polysemikites (unions of Hat copies), so a patch is a finite set
of placements (g, name) with g in Gamma.  A single tile (g, t) is sent to
g . children(t).  On a patch, images of neighbouring tiles are glued: if
tiles a, b sit at g_a, g_b, the image placements Psi_a, Psi_b satisfy
Psi_a^-1 Psi_b = gluing[(t_a, t_b, g_a^-1 g_b)].  The table is part of the
rule data; a missing key means the pair never occurs in an admissible
patch, and two paths giving different Psi is a GluingConflict.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .exact import QS3, IsometryMatrix, Point, Polygon, triangle_clip_area, triangulate
from .grid import SEMIKITE, cell_polygon, gat, geo, kite_of_semikite, semikites_of_kite
from .group import COXETER_GENERATORS, IDENTITY, GammaElement, classify
from .io import (Document, SchemaError, element_from_json, element_json, parse,
                 placements_from_json, placements_json)

NAMES = ("H", "T", "P", "F")
HAT_COUNTS = {"H": 4, "T": 1, "P": 2, "F": 2}
SEEDS = ("F3", "T")


class ValidationFailure(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class GluingConflict(ValueError):
    def __init__(self, msg, first=None, second=None):
        super().__init__(msg)
        self.first = first
        self.second = second


class NonAdmissible(ValueError):
    """A pair of neighbouring tiles that never occurs in an admissible patch."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class PatchOverlap(ValueError):
    def __init__(self, msg, first=None, second=None):
        super().__init__(msg)
        self.first = first
        self.second = second


class WindowNotCovered(ValueError):
    pass


@dataclass(frozen=True)
class Metatile:
    name: str
    hats: tuple  # GammaElements; flip = 1 marks a reflected hat
    outline: tuple  # Points, canonical frame
    arrow: int  # index of the marked outline edge

    @property
    def support(self) -> frozenset:
        return _support(self.hats)

    def chiralities(self) -> tuple:
        return tuple(h.flip for h in self.hats)

    def arrow_segment(self, g: GammaElement = IDENTITY):
        a = self.outline[self.arrow]
        b = self.outline[(self.arrow + 1) % len(self.outline)]
        return g.apply(a), g.apply(b)


@lru_cache(maxsize=None)
def _support(hats: tuple) -> frozenset:
    cells = [h * c for h in hats for c in gat()]
    return frozenset(cells)


@dataclass
class SubstitutionRuleSet:
    metatiles: dict
    children: dict
    forced_neighbours: dict
    gluing: dict
    lam: QS3
    scaling: dict  # name -> (rot, offset): the map p -> lam . R6^rot p + offset
    seeds: dict
    alignment: dict  # seed -> (substitution steps per round, aligning element)
    name: str = "HTPF"
    _cell_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def cells(self, name: str) -> frozenset:
        return self.metatiles[name].support

    def boundary_offsets(self, name: str) -> tuple:
        """Cells just outside the canonical metatile, with the cell inside."""
        if name not in self._cell_cache:
            inside = self.cells(name)
            out = []
            for c in sorted(inside):
                for s in COXETER_GENERATORS:
                    d = c * s
                    if d not in inside:
                        out.append((c, d))
            self._cell_cache[name] = tuple(out)
        return self._cell_cache[name]


# ---------------------------------------------------------------- patches

def patch_cells(rules: SubstitutionRuleSet, patch) -> dict:
    """Map cell -> placement; PatchOverlap if two supports share a cell."""
    owner = {}
    for p in sorted(patch):
        g, name = p
        for c in rules.cells(name):
            gc = g * c
            q = owner.get(gc)
            if q is not None:
                raise PatchOverlap(f"{q} and {p} overlap at cell {gc}", q, p)
            owner[gc] = p
    return owner


def patch_adjacency(rules: SubstitutionRuleSet, patch, owner=None) -> dict:
    owner = owner if owner is not None else patch_cells(rules, patch)
    adj = {p: set() for p in patch}
    for p in patch:
        g, name = p
        for _, d in rules.boundary_offsets(name):
            q = owner.get(g * d)
            if q is not None:
                adj[p].add(q)
    return adj


def patch_support(rules: SubstitutionRuleSet, patch) -> frozenset:
    return frozenset(patch_cells(rules, patch))


def arrow_violations(rules: SubstitutionRuleSet, patch) -> list:
    """Pairs of placements whose arrow edges lie on a common segment."""
    lines = {}
    for p in sorted(patch):
        a, b = rules.metatiles[p[1]].arrow_segment(p[0])
        if b < a:
            a, b = b, a
        d = b - a
        # normalise direction to a line key
        key = _line_key(a, d)
        lines.setdefault(key, []).append((a, b, p))
    out = []
    for segs in lines.values():
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                a1, b1, p1 = segs[i]
                a2, b2, p2 = segs[j]
                if max(a1, a2) < min(b1, b2):
                    out.append((p1, p2))
    return out


def _line_key(a: Point, d: Point):
    # direction up to scale: use the exact slope class, then the offset
    if d.x == 0:
        return ("v", a.x)
    slope = d.y / d.x
    return (slope, a.y - slope * a.x)


def restrict(rules: SubstitutionRuleSet, patch, window) -> frozenset:
    """Placements whose support meets the window."""
    window = window if isinstance(window, (set, frozenset)) else set(window)
    return frozenset(p for p in patch if any(p[0] * c in window for c in rules.cells(p[1])))


# ------------------------------------------------------------ substitution

def _glue(rules: SubstitutionRuleSet, patch, anchor) -> dict:
    patch = frozenset(patch)
    if not patch:
        return {}
    adj = patch_adjacency(rules, patch)
    start = anchor if anchor is not None else min(patch)
    if start not in patch:
        raise ValueError(f"anchor {start} is not in the patch")
    psi = {start: start[0]}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        ga, ta = a
        for b in sorted(adj[a]):
            gb, tb = b
            key = (ta, tb, ga.inverse() * gb)
            delta = rules.gluing.get(key)
            if delta is None:
                raise NonAdmissible(f"{a} next to {b} does not occur in admissible patches", (a, b))
            val = psi[a] * delta
            have = psi.get(b)
            if have is None:
                psi[b] = val
                queue.append(b)
            elif have != val:
                raise GluingConflict(f"images of {b} disagree ({have} vs {val})", a, b)
    if len(psi) != len(patch):
        raise ValueError("patch is not edge-connected")
    return psi


def apply(rules: SubstitutionRuleSet, patch, anchor=None) -> frozenset:
    """sigma(patch); the anchor tile (default the least placement) keeps
    image anchor_g . children(anchor_t)."""
    return _apply(rules, patch, anchor)[0]


def _apply(rules, patch, anchor):
    psi = _glue(rules, patch, anchor)
    out = []
    for p, h in psi.items():
        out.extend((h * g, n) for g, n in rules.children[p[1]])
    result = frozenset(out)
    if len(result) != len(out):
        raise GluingConflict("two tiles have coinciding images")
    try:
        patch_cells(rules, result)
    except PatchOverlap as e:
        raise GluingConflict(f"images overlap: {e}", e.first, e.second) from None
    new_anchor = None
    if psi:
        a = anchor if anchor is not None else min(patch)
        new_anchor = min((psi[a] * g, n) for g, n in rules.children[a[1]])
    return result, new_anchor


def iterate(rules: SubstitutionRuleSet, patch, k: int, anchor=None) -> frozenset:
    return _iterate(rules, patch, k, anchor)[0]


def _iterate(rules, patch, k, anchor=None):
    if k < 0:
        raise ValueError("k must be >= 0")
    patch = frozenset(patch)
    if anchor is None and patch:
        anchor = min(patch)
    for _ in range(k):
        patch, anchor = _apply(rules, patch, anchor)
    return patch, anchor


def substitute_tile(rules: SubstitutionRuleSet, name: str, k: int = 1) -> frozenset:
    """sigma^k of the tile (id, name)."""
    return iterate(rules, {(IDENTITY, name)}, k)


# --------------------------------------------------------------- fixpoints

def seed_patch(rules: SubstitutionRuleSet, seed: str) -> frozenset:
    if seed not in rules.seeds:
        raise ValueError(f"unknown seed {seed!r}; expected one of {sorted(rules.seeds)}")
    return rules.seeds[seed]


def _round(rules, seed, patch):
    steps, y = rules.alignment[seed]
    anchor = min(rules.seeds[seed])
    q, _ = _iterate(rules, patch, steps, anchor)
    return frozenset((y * g, n) for g, n in q)


def fixpoint_patch(rules: SubstitutionRuleSet, seed: str = "F3", n: int = 1, window=None,
                   inner_radius: int = 2) -> frozenset:
    """The n-th term of the aligned fixpoint sequence from a seed.

    F3: n rounds of sigma^4, each followed by the recorded alignment, so every
    term contains the previous one in place.  T: rounds of sigma^2 with their
    alignment, 6 rounds per n (sigma^12).

    With a window (a set of Semikite cells around the seed), only placements
    meeting the window are returned.  Each round is then computed from the
    placements meeting a small centered window, and the result is exact
    because the images are required to cover the whole window.
    """
    from .grid import centered_window
    if n < 0:
        raise ValueError("n must be >= 0")
    patch = seed_patch(rules, seed)
    rounds = n * (6 if seed == "T" else 1)
    if window is None:
        for _ in range(rounds):
            patch = _round(rules, seed, patch)
        return patch
    window = frozenset(window)
    complete = True  # patch is the whole term, not a restriction
    for _ in range(rounds):
        r = inner_radius
        while True:
            src = restrict(rules, patch, centered_window(r)) | rules.seeds[seed]
            img = _round(rules, seed, src)
            if (complete and src == patch) or window <= patch_support(rules, img):
                break
            if src == patch:
                raise WindowNotCovered("window is not covered by the images of the restricted patch")
            r += 1
        exact = complete and src == patch
        patch = restrict(rules, img, window)
        complete = exact and patch == img
    return restrict(rules, patch, window)


def _threefold_symmetry(patch):
    """An order-3 rotation h with h . patch = patch, or None."""
    p0 = min(patch)
    for g, n in sorted(patch):
        if n != p0[1]:
            continue
        h = g * p0[0].inverse()
        if h.flip == 0 and h.rot in (2, 4) and frozenset((h * a, b) for a, b in patch) == patch:
            return h if h.rot == 2 else h.inverse()
    return None


def _recenter(patch):
    """Move a 3-fold symmetric patch so its rotation centre is the Kite head
    (2, 0), or the origin when the centre is a 6-fold point of the grid."""
    from .group import R3, R6, lattice_coords
    h = _threefold_symmetry(patch)
    if h is None:
        return patch
    c = classify(h).center
    for target in (R3, R6 * R6):
        head = classify(target).center
        for j in range(6):
            m = GammaElement(0, 0, j, 0)
            a, b = lattice_coords(head - m.apply(c))
            if not (a.is_rational() and b.is_rational() and a.a.denominator == 1 and b.a.denominator == 1):
                continue
            x = GammaElement(int(a.a), int(b.a), 0, 0) * m
            if x * h * x.inverse() == target:
                return frozenset((x * g, n) for g, n in patch)
    raise AssertionError("no conjugator found")


def seed_iterate(rules: SubstitutionRuleSet, seed: str, k: int) -> frozenset:
    """sigma^k of a seed, positioned consistently with the fixpoint sequence.

    Whole rounds use the recorded alignment; leftover steps are plain
    substitution, after which a 3-fold symmetric result is moved back so
    its rotation centre is the one of the seed.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    steps, _ = rules.alignment[seed]
    patch = seed_patch(rules, seed)
    for _ in range(k // steps):
        patch = _round(rules, seed, patch)
    if k % steps:
        patch = iterate(rules, patch, k % steps, min(rules.seeds[seed]))
        if _threefold_symmetry(rules.seeds[seed]) is not None:
            patch = _recenter(patch)
    return patch


# ------------------------------------------------------------------ hats

def decompose_to_hats(rules: SubstitutionRuleSet, patch) -> frozenset:
    """Hat placements of a metatile patch (tile name "Hat"; chirality is the flip bit)."""
    out = []
    for g, name in patch:
        out.extend((g * h, "Hat") for h in rules.metatiles[name].hats)
    result = frozenset(out)
    assert len(result) == len(out)
    return result


# -------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    checks: dict = field(default_factory=dict)  # name -> (ok, detail)

    @property
    def ok(self) -> bool:
        return all(v[0] for v in self.checks.values())

    def add(self, name, ok, detail=""):
        self.checks[name] = (bool(ok), detail)

    def failures(self):
        return {k: v[1] for k, v in self.checks.items() if not v[0]}

    def to_json(self):
        return {"ok": self.ok, "checks": {k: {"ok": v[0], "detail": str(v[1])} for k, v in self.checks.items()}}


def scale_polygon(poly: Polygon, lam: QS3, offset: Point, rot: int = 0) -> Polygon:
    m = IsometryMatrix.rotation(rot)
    pts = (m.apply(v) for v in poly.vertices)
    return Polygon(tuple(Point(v.x * lam + offset.x, v.y * lam + offset.y) for v in pts))


def polygon_in_cells(poly: Polygon, cells) -> bool:
    """Exact containment of a polygon in a union of Semikite cells."""
    x0, y0, x1, y1 = (float(v) for v in poly.bbox())
    polys = []
    for c in cells:
        cp = cell_polygon(c)
        bx0, by0, bx1, by1 = (float(v) for v in cp.bbox())
        if bx1 >= x0 - 1e-9 and bx0 <= x1 + 1e-9 and by1 >= y0 - 1e-9 and by0 <= y1 + 1e-9:
            polys.append((cp, (bx0, by0, bx1, by1)))
    total = QS3(0)
    for tri in triangulate(poly):
        tx = [float(p.x) for p in tri]
        ty = [float(p.y) for p in tri]
        for cp, (bx0, by0, bx1, by1) in polys:
            if bx1 < min(tx) - 1e-9 or bx0 > max(tx) + 1e-9 or by1 < min(ty) - 1e-9 or by0 > max(ty) + 1e-9:
                continue
            total = total + triangle_clip_area(tri, cp.vertices)
    return total == poly.area()


def scaling_holds(rules: SubstitutionRuleSet, name: str, lam: QS3 | None = None) -> bool:
    lam = rules.lam if lam is None else QS3.coerce(lam)
    poly = geo(rules.cells(name), SEMIKITE)
    target = patch_support(rules, rules.children[name])
    rot, offset = rules.scaling[name]
    return polygon_in_cells(scale_polygon(poly, lam, offset, rot), target)


def _check_local_gluing(rules: SubstitutionRuleSet):
    """Images of every table pair: disjoint children, and forced neighbours
    agreeing with the other image wherever they overlap."""
    for (ta, tb, delta), big in sorted(rules.gluing.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        back = rules.gluing.get((tb, ta, delta.inverse()))
        if back != big.inverse():
            return False, (ta, tb, delta)
        ca = frozenset(rules.children[ta])
        cb = frozenset((big * g, n) for g, n in rules.children[tb])
        try:
            patch_cells(rules, ca | cb)
        except PatchOverlap as e:
            return False, (ta, tb, delta, e.first, e.second)
        if len(ca | cb) != len(ca) + len(cb):
            return False, (ta, tb, delta)
        for mine, other_children, other_forced in (
                (ca, cb, frozenset((big * g, n) for g, n in rules.forced_neighbours[tb])),
                (cb, ca, frozenset(rules.forced_neighbours[ta]))):
            owner = patch_cells(rules, mine)
            for p in other_forced:
                hit = any(p[0] * c in owner for c in rules.cells(p[1]))
                if hit and p not in mine:
                    return False, (ta, tb, delta, p)
    return True, f"{len(rules.gluing)} gluing entries"


def validate_rules(rules: SubstitutionRuleSet, depth: int = 4) -> ValidationReport:
    rep = ValidationReport()
    names_ok = set(rules.metatiles) == set(NAMES)
    rep.add("metatiles", names_ok, sorted(rules.metatiles))
    if not names_ok:
        return rep
    # hats decompose each support
    bad = None
    for name, m in rules.metatiles.items():
        cells = [h * c for h in m.hats for c in gat()]
        if len(set(cells)) != len(cells) or len(m.hats) != HAT_COUNTS[name]:
            bad = name
    rep.add("hat_decomposition", bad is None, bad or "H4 T1 P2 F2")
    rep.add("reflected_hats", [sum(m.chiralities()) for m in (rules.metatiles[n] for n in NAMES)] == [1, 0, 0, 0],
            "one reflected hat, in H")
    # children of every sigma(t)
    bad = None
    for name in NAMES:
        try:
            patch_cells(rules, rules.children[name])
        except PatchOverlap as e:
            bad = (name, e.first, e.second)
            break
    rep.add("children_disjoint", bad is None, bad or "")
    if bad is not None:
        return rep
    rep.add("local_gluing", *_check_local_gluing(rules))
    # scaling
    lam_ok = rules.lam > 1
    failing = [n for n in NAMES if not scaling_holds(rules, n)]
    rep.add("scaling", lam_ok and not failing, f"lambda={rules.lam} failing={failing}")
    # iterate to the requested depth
    detail = []
    ok = True
    witness = None
    for name in NAMES:
        patch = frozenset({(IDENTITY, name)})
        anchor = (IDENTITY, name)
        for k in range(1, depth + 1):
            try:
                patch, anchor = _apply(rules, patch, anchor)
            except (GluingConflict, NonAdmissible, ValueError) as e:
                ok, witness = False, (name, k, str(e))
                break
            viol = arrow_violations(rules, patch)
            if viol:
                ok, witness = False, (name, k, "arrows", viol[0])
                break
            if not _on_one_kitegrid(rules, patch):
                ok, witness = False, (name, k, "kitegrid")
                break
        detail.append(f"{name}:{len(patch)}")
        if not ok:
            break
    rep.add("iteration", ok, witness or " ".join(detail))
    return rep


def _on_one_kitegrid(rules, patch) -> bool:
    """Every hat is a union of whole Kite cells of the one global Kitegrid."""
    for g, _ in decompose_to_hats(rules, patch):
        cells = {g * c for c in gat()}
        for c in cells:
            if any(s not in cells for s in semikites_of_kite(kite_of_semikite(c))):
                return False
    return True


# ------------------------------------------------------------- rule files

def rules_to_json(rules: SubstitutionRuleSet) -> dict:
    mt = {}
    for n in NAMES:
        m = rules.metatiles[n]
        mt[n] = {
            "hats": [element_json(h) for h in m.hats],
            "outline": [p.to_json() for p in m.outline],
            "arrow": m.arrow,
            "children": placements_json(rules.children[n]),
            "forced_neighbours": placements_json(rules.forced_neighbours[n]),
            "scaling": {"rot": rules.scaling[n][0], "offset": rules.scaling[n][1].to_json()},
        }
    gl = [[ta, tb, element_json(d), element_json(big)]
          for (ta, tb, d), big in sorted(rules.gluing.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))]
    return {
        "name": rules.name,
        "lambda": rules.lam.to_json(),
        "metatiles": mt,
        "gluing": gl,
        "seeds": {k: placements_json(v) for k, v in sorted(rules.seeds.items())},
        "alignment": {k: {"steps": s, "element": element_json(y)} for k, (s, y) in sorted(rules.alignment.items())},
    }


def rules_document(rules: SubstitutionRuleSet) -> Document:
    return Document("ruleset", rules_to_json(rules))


def rules_from_json(d) -> SubstitutionRuleSet:
    try:
        mt, ch, fn, scaling = {}, {}, {}, {}
        for n, v in d["metatiles"].items():
            outline = tuple(Point.from_json(p) for p in v["outline"])
            arrow = v["arrow"]
            if not (isinstance(arrow, int) and 0 <= arrow < len(outline)):
                raise SchemaError(f"bad arrow for {n}")
            mt[n] = Metatile(n, tuple(element_from_json(h) for h in v["hats"]), outline, arrow)
            ch[n] = tuple(sorted(placements_from_json(v["children"])))
            fn[n] = tuple(sorted(placements_from_json(v["forced_neighbours"])))
            scaling[n] = (int(v["scaling"]["rot"]) % 6, Point.from_json(v["scaling"]["offset"]))
        gl = {}
        for ta, tb, dl, big in d["gluing"]:
            gl[(ta, tb, element_from_json(dl))] = element_from_json(big)
        seeds = {k: placements_from_json(v) for k, v in d["seeds"].items()}
        align = {k: (int(v["steps"]), element_from_json(v["element"])) for k, v in d["alignment"].items()}
        lam = QS3.from_json(d["lambda"])
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise SchemaError(f"malformed rule set: {e!r}") from None
    for n, kids in ch.items():
        for _, c in kids:
            if c not in mt:
                raise SchemaError(f"child of {n} has unknown name {c!r}")
    return SubstitutionRuleSet(mt, ch, fn, gl, lam, scaling, seeds, align, d.get("name", "HTPF"))


def shipped_rules_path():
    return resources.files("hatgroup") / "data" / "htpf_rules.json"


def load_rules(path=None, depth: int = 1) -> SubstitutionRuleSet:
    """Parse and validate a rule file (default: the shipped HTPF rules).

    Validation runs the local checks and iterates to the given depth; call
    validate_rules(r, 4) for the full gate.
    """
    if path is None:
        return _shipped(depth)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return _load_text(text, depth)


@lru_cache(maxsize=None)
def _shipped(depth):
    return _load_text(shipped_rules_path().read_text(encoding="utf-8"), depth)


def _load_text(text, depth):
    doc = parse(text)
    if doc.kind != "ruleset":
        raise SchemaError(f"expected a ruleset document, got {doc.kind}")
    rules = rules_from_json(doc.payload)
    rep = validate_rules(rules, depth)
    if not rep.ok:
        raise ValidationFailure(f"rule set failed: {rep.failures()}", rep.failures())
    return rules
