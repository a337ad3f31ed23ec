"""Acceptance criteria 1-8, each at its stated tolerance and time limit.

Every criterion prints one PASS/FAIL line (also repeated in the pytest
terminal summary).
"""
import functools
import random
import time

import pytest

from conftest import ACCEPTANCE, FIXTURES, GOLDEN, random_region
from hatgroup import io
from hatgroup.analysis import (WindowPatch, extend_search, find_translation_periods, gamma_plus_hat_tiles,
                               patch_stabilizer, search_growing, window_ball, _window_center)
from hatgroup.discretize import TileSet, cell_area, cell_decomposition, decompose_tile, fundamental_domain, \
    transfer_cotiler, verify_exact_cover
from hatgroup.exact import Point
from hatgroup.grid import (CELL_AREA, GAT_WORDS, HAT_KITE_WORDS, KITE, SEMIKITE, ball, centered_window, gat, geo,
                           grp, hat_polygon)
from hatgroup.group import (ALPHA, BETA, GAMMA, GAMMA_FULL, IDENTITY, R3, R6, T1, T2, classify, eval_word,
                            to_isometry)
from hatgroup.substitution import (decompose_to_hats, fixpoint_patch, iterate, load_rules, seed_iterate,
                                   substitute_tile, validate_rules)

HATS = TileSet({"Hat": gat()})
HAT = {"Hat": hat_polygon()}

# pinned for criterion 6: the Hat alone in the rotation group
HAT_ONLY_BUDGET = 100000
HAT_ONLY_RSTAR = 5
HAT_ONLY_NODES = 2544


def criterion(number, title, limit):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
                took = time.perf_counter() - t0
                assert took < limit, f"took {took:.1f}s, limit {limit}s"
            except BaseException as e:
                took = time.perf_counter() - t0
                line = f"criterion {number} ({title}): FAIL in {took:.1f}s - {e}"
                ACCEPTANCE[number] = line
                print(line)
                raise
            line = f"criterion {number} ({title}): PASS in {took:.1f}s" + (f" - {detail}" if detail else "")
            ACCEPTANCE[number] = line
            print(line)
        return run
    return wrap


@criterion(1, "group correctness", 1)
def test_criterion_1_group():
    one = eval_word
    for word in ("α.α", "β.β", "γ.γ", ".".join(["α", "β"] * 6), ".".join(["β", "γ"] * 3),
                 ".".join(["α", "γ"] * 2)):
        assert one(word) == IDENTITY, word
    assert one("γ.β") == R3
    assert one("β.α") == R6
    assert T1 * T2 == T2 * T1
    v1, v2 = to_isometry(T1).offset, to_isometry(T2).offset
    assert (T1.rot, T1.flip, T2.rot, T2.flip) == (0, 0, 0, 0)
    assert v1.cross(v2) != 0  # independent
    return "6 relations, R3, R6, t1/t2"


@criterion(2, "Gat identity", 1)
def test_criterion_2_gat():
    semis = grp(hat_polygon(), SEMIKITE)
    assert semis == frozenset(eval_word(w) for w in GAT_WORDS)
    assert len(semis) == 16
    kites = grp(hat_polygon(), KITE)
    assert kites == frozenset(eval_word(w) for w in HAT_KITE_WORDS)
    assert len(kites) == 8
    return "16 Semikite words, 8 Kite words"


def _hat_patches(rules):
    """Substitution-generated hat patches with a radius-10 window each covers."""
    out = [("sigma^2(F3)", decompose_to_hats(rules, seed_iterate(rules, "F3", 2)), ball(10))]
    for name in ("H", "P", "F"):
        hats = decompose_to_hats(rules, substitute_tile(rules, name, 3))
        cells = {g * c for g, _ in hats for c in gat()}
        out.append((f"sigma^3({name})", hats, ball(10, _window_center(cells))))
    return out


@criterion(3, "bijection at desk scale", 30)
def test_criterion_3_bijection(rules):
    rng = random.Random(20240611)
    for _ in range(50):
        cells, poly = random_region(rng, rng.randint(1, 40))
        assert grp(poly) == cells
        assert geo(grp(poly)) == poly
        assert grp(geo(cells)) == cells
    perturbations = 0
    for label, hats, window in _hat_patches(rules):
        cot, tiles = transfer_cotiler(hats, HAT)
        assert verify_exact_cover(tiles, cot, window).verdict, label
        near = sorted(p for p in cot.placements if any(p[0] * c in window for c in tiles[p[1]]))
        for victim in near:
            rest = cot.placements - {victim}
            assert not verify_exact_cover(tiles, rest, window).verdict
            perturbations += 1
            g, n = victim
            for h in (ALPHA, BETA, GAMMA, R6, T1):
                for moved in (g * h, h * g):
                    assert not verify_exact_cover(tiles, rest | {(moved, n)}, window).verdict
                    perturbations += 1
    return f"50 polygons, 4 hat patches, {perturbations} perturbations all rejected"


@criterion(4, "substitution validity", 60)
def test_criterion_4_substitution():
    rules = load_rules(depth=0)
    rep = validate_rules(rules, 4)
    assert rep.ok, rep.failures()
    f3 = rules.seeds["F3"]
    s2h = substitute_tile(rules, "H", 2)
    anchor = min(f3)
    assert any(frozenset((g * anchor[0].inverse() * a, n) for a, n in f3) <= s2h for g, n in s2h if n == "F")
    steps, y = rules.alignment["F3"]
    assert steps == 4 and y.rot == 0 and y.flip == 0
    s4 = frozenset((y * g, n) for g, n in iterate(rules, f3, 4))
    assert f3 <= s4
    return "validate_rules depth 4, F3 in sigma^2(H), F3 in place in sigma^4(F3)"


@criterion(5, "stabilizer tightness", 120)
def test_criterion_5_stabilizers(rules):
    w = centered_window(10)
    p = WindowPatch(decompose_to_hats(rules, fixpoint_patch(rules, "F3", 2, window=w)), w, HATS)
    assert set(patch_stabilizer(p).elements) == {IDENTITY, R3, R3 * R3}
    assert find_translation_periods(p, 6) == []
    others = 0
    for path in sorted(FIXTURES.glob("*.json")):
        doc = io.read_document(str(path))
        fp = WindowPatch(io.placements_of(doc), {io.element_from_json(c) for c in doc.payload["window"]}, HATS)
        want = {IDENTITY, R3, R3 * R3} if doc.payload["expected"] == "R3" else {IDENTITY}
        assert set(patch_stabilizer(fp).elements) == want, path.name
        assert find_translation_periods(fp, 6) == [], path.name
        others += doc.payload["expected"] != "R3"
    assert others >= 6
    return f"fylfot window exactly {{id, R3, R3^2}}; {others} other fixtures trivial; no periods |t| <= 6"


@criterion(6, "rotation-group phenomena", 600)
def test_criterion_6_gamma_plus():
    two = gamma_plus_hat_tiles(reflected=True)
    w = window_ball(3, KITE)
    res = extend_search(two, w)
    assert res.status == "complete"
    assert verify_exact_cover(two, res.completion, w).verdict
    grow = search_growing(gamma_plus_hat_tiles(), 10, HAT_ONLY_BUDGET)
    last = max(grow)
    assert all(grow[r].status == "complete" for r in grow if r < last)
    assert (last, grow[last].status) == (HAT_ONLY_RSTAR, "exhausted")
    assert grow[last].stats["nodes"] == HAT_ONLY_NODES
    return f"two tiles complete r=3; Hat alone exhausted at r*={last} ({HAT_ONLY_NODES} nodes)"


@criterion(7, "cell decomposition", 10)
def test_criterion_7_cells():
    F = fundamental_domain(GAMMA_FULL)
    sets = {
        "Semikite": TileSet({"Semikite": {IDENTITY}}),
        "Kite": TileSet({"Kite": {IDENTITY, BETA}}),
        "Hat": TileSet({"Hat": gat()}, polygons=HAT),
    }
    counts = {}
    for label, tiles in sets.items():
        cells = cell_decomposition(tiles)
        assert frozenset().union(*cells) == F
        assert sum(len(c) for c in cells) == len(F)
        assert sum((cell_area(c) for c in cells), start=cell_area(())) == CELL_AREA[SEMIKITE] * len(F)
        for name in tiles.names():
            pieces = decompose_tile(tiles[name], cells)
            covered = [h * k for h, K in pieces for k in K]
            assert len(covered) == len(set(covered)) == len(tiles[name])
        counts[label] = len(cells)
    assert counts["Kite"] == 1
    return f"cells per tileset {counts}"


@criterion(8, "figure reproduction", 30)
def test_criterion_8_figures(tmp_path):
    import sys
    import xml.etree.ElementTree as ET
    sys.path.insert(0, str(GOLDEN))
    import make_golden
    out = make_golden.render_all(tmp_path)
    for name, data in out.items():
        assert data == (GOLDEN / name).read_bytes(), name
    hats = io.placements_of(io.read_document(str(tmp_path / "hats.json")))
    cot = io.placements_of(io.read_document(str(tmp_path / "cot.json")))
    ns = "{http://www.w3.org/2000/svg}"
    geo_svg = ET.fromstring(out["hats_geo.svg"])
    assert len(geo_svg.findall(f"{ns}path")) == len(hats) == len(cot)
    # the marker sits on the patch's 3-fold centre: the Kite head (2, 0)
    h = R3
    assert frozenset((h * a, n) for a, n in hats) == hats
    centre = classify(h).center
    assert centre == Point.of(2, 0)
    marks = geo_svg.findall(f"{ns}g[@class='marker']")
    assert len(marks) == 1
    assert {(l.get("x1"), l.get("y1")) for l in marks[0]} == {("20.000000", "0.000000")}
    group_svg = ET.fromstring(out["gat_group.svg"])
    high = [c for c in group_svg.findall(f"{ns}circle") if "highlighted" in c.get("class")]
    verts = group_svg.findall(f"{ns}circle")
    assert high and len(high) == len(verts)  # the ball is inside the tiled region
    return f"{len(hats)} hat paths, {len(verts)} group vertices, marker at the 3-fold centre (2, 0)"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
