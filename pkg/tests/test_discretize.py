import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import elements
from hatgroup.discretize import (WORKERS_ENV, Cotiler, NotInActingGroup, TileSet, cell_area,
                                 cell_decomposition, chi, decompose_tile, fundamental_domain, is_poly_K,
                                 orbit_grp, transfer_cotiler, verify_exact_cover, worker_count)
from hatgroup.exact import Point, Polygon
from hatgroup.grid import (CELL_AREA, KITE, KITE_POLYGON, SEMIKITE, NotPolyK, ball, cell_centroid, gat, geo,
                           hat_kites, hat_polygon, incenter)
from hatgroup.group import BETA, GAMMA_FULL, GAMMA_PLUS, IDENTITY, LATTICE, R6, T1
from hatgroup.substitution import decompose_to_hats, seed_iterate

HAT = {"Hat": hat_polygon()}
GAT = TileSet({"Gat": gat()})


@pytest.fixture(scope="module")
def hat_patch(rules):
    return decompose_to_hats(rules, seed_iterate(rules, "F3", 2))


def test_is_poly_k():
    assert len(is_poly_K(hat_polygon(), KITE)) == 8
    assert len(is_poly_K(hat_polygon(), SEMIKITE)) == 16
    square = Polygon((Point.of(0, 0), Point.of(1, 0), Point.of(1, 1), Point.of(0, 1)))
    with pytest.raises(NotPolyK):
        is_poly_K(square)


def test_transfer_examples():
    grid_cot, tiles = transfer_cotiler([(R6 ** i, "Kite") for i in range(6)], {"Kite": KITE_POLYGON}, KITE,
                                       GAMMA_PLUS, rename={})
    assert tiles["Kite"] == {IDENTITY}
    three = [(IDENTITY, "Hat"), (T1, "Hat"), (T1 * T1, "Hat")]
    cot, tiles = transfer_cotiler(three, HAT)
    assert cot.placements == {(g, "Gat") for g, _ in three}
    assert tiles["Gat"] == gat()
    empty, none = transfer_cotiler([], HAT)
    assert len(empty) == 0 and none is None


def test_transfer_rejects_reflections_in_rotation_group():
    with pytest.raises(NotInActingGroup):
        transfer_cotiler([(BETA, "Hat")], HAT, KITE, GAMMA_PLUS)


def test_verify_examples():
    w = ball(4)
    kites = TileSet({"Kite": {IDENTITY, BETA}})
    full = {((c if c.flip == 0 else c * BETA), "Kite") for c in ball(6)}
    assert verify_exact_cover(kites, full, w).covered_once == w
    rep = verify_exact_cover(GAT, [(IDENTITY, "Gat")], gat())
    assert rep.verdict
    # a raw placement list keeps the duplicate; a Cotiler (a set) cannot hold one
    dup = verify_exact_cover(GAT, [(IDENTITY, "Gat"), (IDENTITY, "Gat")], gat())
    assert len(dup.overlaps) == 16 and not dup.verdict
    assert len(Cotiler([(IDENTITY, "Gat"), (IDENTITY, "Gat")])) == 1
    twice = TileSet({"Gat": gat(), "Gat2": gat()})
    rep = verify_exact_cover(twice, [(IDENTITY, "Gat"), (IDENTITY, "Gat2")], gat())
    assert len(rep.overlaps) == 16 and not rep.verdict
    assert set(rep.witnesses) == set(gat())


def test_pipeline_cover(hat_patch):
    cot, tiles = transfer_cotiler(hat_patch, HAT)
    assert verify_exact_cover(tiles, cot, ball(10)).verdict


@settings(max_examples=25)
@given(st.data())
def test_single_perturbation_breaks_cover(hat_patch, data):
    cot, tiles = transfer_cotiler(hat_patch, HAT)
    w = ball(10)
    inside = sorted(p for p in cot.placements if any(p[0] * c in w for c in gat()))
    victim = data.draw(st.sampled_from(inside))
    h = data.draw(elements.filter(lambda g: g != IDENTITY))
    moved = (cot.placements - {victim}) | {(victim[0] * h, victim[1])}
    assert not verify_exact_cover(tiles, moved, w).verdict


def test_parallel_count_matches(hat_patch, monkeypatch):
    cot, tiles = transfer_cotiler(hat_patch, HAT)
    serial = verify_exact_cover(tiles, cot, ball(10))
    monkeypatch.setenv(WORKERS_ENV, "2")
    assert worker_count() == 2
    # far-away copies do not touch the window but make the job big enough to split
    big = {(T1 ** (40 * k) * g, n) for k in range(8) for g, n in cot.placements}
    assert len(big) > 2000
    parallel = verify_exact_cover(tiles, big, ball(10))
    assert parallel.covered_once == serial.covered_once and parallel.gaps == serial.gaps


def test_orbit_grp_examples():
    assert orbit_grp(hat_polygon(), incenter(IDENTITY)) == gat()
    assert orbit_grp(KITE_POLYGON, Point.of(1, 0), GAMMA_PLUS) == {IDENTITY}
    hexagon = geo([R6 ** i for i in range(6)], KITE)
    assert orbit_grp(hexagon, Point.of(1, 0), GAMMA_PLUS) == {R6 ** i for i in range(6)}
    assert orbit_grp(hat_polygon(), Point.of(1, 0), GAMMA_PLUS) == hat_kites()


@settings(max_examples=15)
@given(elements)
def test_orbit_grp_matches_grp(h):
    poly = hat_polygon().transformed(h.to_isometry())
    assert orbit_grp(poly, cell_centroid(IDENTITY)) == {h * c for c in gat()}


def test_cell_decomposition_examples():
    semi = TileSet({"Semikite": {IDENTITY}})
    kite = TileSet({"Kite": {IDENTITY, BETA}})
    hat = TileSet({"Hat": gat()}, polygons=HAT)
    assert cell_decomposition(semi) == {frozenset({IDENTITY})}
    assert cell_decomposition(kite) == {frozenset({IDENTITY})}
    assert cell_decomposition(kite, GAMMA_PLUS) == {frozenset({IDENTITY, BETA})}
    # Hat under the full group: Semikite granularity, one cell
    assert len(cell_decomposition(hat)) == 1
    assert len(cell_decomposition(hat, GAMMA_PLUS)) == 1
    assert len(cell_decomposition(hat, LATTICE)) == 5


@pytest.mark.parametrize("group", [GAMMA_FULL, GAMMA_PLUS, LATTICE])
@pytest.mark.parametrize("tiles", [
    TileSet({"Semikite": {IDENTITY}}),
    TileSet({"Kite": {IDENTITY, BETA}}),
    TileSet({"Hat": gat()}, polygons=HAT),
    TileSet({"Hat": gat(), "Kite": {IDENTITY, BETA}}),
])
def test_cells_partition_domain(tiles, group):
    cells = cell_decomposition(tiles, group)
    F = fundamental_domain(group)
    assert frozenset().union(*cells) == F
    assert sum(len(c) for c in cells) == len(F)
    assert sum((cell_area(c) for c in cells), start=cell_area(())) == CELL_AREA[SEMIKITE] * len(F)
    for name in tiles.names():
        pieces = decompose_tile(tiles[name], cells, group)
        covered = [h * k for h, K in pieces for k in K]
        assert len(covered) == len(set(covered)) == len(tiles[name])


def test_chi_constant_on_kite():
    kite = TileSet({"Kite": {IDENTITY, BETA}})
    a, b = chi(IDENTITY, kite), chi(BETA, kite)
    assert a == b and len(a) == 2
