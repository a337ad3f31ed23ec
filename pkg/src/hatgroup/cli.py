"""Command line interface.

Every subcommand reads and writes versioned JSON documents (files or
stdin/stdout), so they compose in pipelines:

    hatgroup gen --seed F3 --iters 2 | hatgroup decompose | hatgroup discretize | hatgroup verify --radius 10

Exit codes: 0 success / verdict true, 1 verdict false, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, discretize, grid, io, render, substitution
from .exact import QS3, Point, Polygon
from .group import GAMMA_FULL, IDENTITY, classify, eval_word, shortlex_word, word_string

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------- helpers

def _rules(args):
    return substitution.load_rules(args.rules) if getattr(args, "rules", None) else substitution.load_rules()


def _read(args, kinds):
    doc = io.read_document(args.input)
    if doc.kind not in kinds:
        raise UsageError(f"expected a {' or '.join(kinds)} document, got {doc.kind}")
    return doc


def _write(args, doc):
    io.write_document(doc, getattr(args, "output", None))


def _carry(payload, *keys):
    return {k: payload[k] for k in keys if k in payload}


def _tileset_of(doc) -> discretize.TileSet:
    if "tiles" in doc.payload:
        return discretize.TileSet.from_json(doc.payload["tiles"])
    names = {n for _, n in io.placements_of(doc)}
    if names <= {"Gat", "Hat"}:
        return discretize.TileSet({n: grid.gat() for n in names})
    raise UsageError("document has no tile set")


def _parse_point(v) -> Point:
    x, y = v
    return Point(QS3.from_json(x), QS3.from_json(y))


# ------------------------------------------------------------ subcommands

def cmd_group_eval(args):
    g = eval_word(args.word)
    if args.json:
        c = classify(g)
        _write(args, io.Document("report", {
            "word": args.word, "element": io.element_json(g), "canonical": str(g),
            "class": c.kind, "order": c.order,
            "shortlex": word_string(shortlex_word(g)),
        }))
    else:
        print(g)
    return EXIT_OK


def cmd_grid_grp(args):
    if args.hat:
        poly = grid.hat_polygon()
    elif args.vertices:
        poly = Polygon(tuple(_parse_point(p) for p in json.loads(args.vertices)))
    else:
        raise UsageError("grid grp needs --hat or --vertices")
    try:
        cells = grid.grp(poly, args.kind)
    except grid.NotPolyK as e:
        _write(args, io.Document("report", {"verdict": False, "error": str(e)}))
        return EXIT_FALSE
    _write(args, io.Document("report", {
        "verdict": True, "cell_kind": args.kind, "cells": [io.element_json(g) for g in sorted(cells)],
        "words": [word_string(shortlex_word(g)) for g in sorted(cells)],
    }))
    return EXIT_OK


def cmd_grid_geo(args):
    doc = _read(args, ("report",))
    try:
        cells = frozenset(io.element_from_json(c) for c in doc.payload["cells"])
        kind = doc.payload.get("cell_kind", grid.SEMIKITE)
    except (KeyError, TypeError) as e:
        raise UsageError(f"report has no cells: {e}") from None
    try:
        poly = grid.geo(cells, kind)
    except (grid.NotSimple, ValueError) as e:
        _write(args, io.Document("report", {"verdict": False, "error": str(e)}))
        return EXIT_FALSE
    _write(args, io.Document("report", {
        "verdict": True, "cell_kind": kind,
        "vertices": [p.to_json() for p in poly.vertices],
        "decimal": [[str(p.x.to_decimal()), str(p.y.to_decimal())] for p in poly.vertices],
        "area": poly.area().to_json(),
    }))
    return EXIT_OK


def cmd_gen(args):
    rules = _rules(args)
    if args.window is not None:
        if args.iters % rules.alignment[args.seed][0]:
            raise UsageError("--window needs --iters to be a multiple of the seed's round length")
        n = args.iters // rules.alignment[args.seed][0]
        if args.seed == "T":
            if n % 6:
                raise UsageError("--window with seed T needs --iters to be a multiple of 12")
            n //= 6
        patch = substitution.fixpoint_patch(rules, args.seed, n, window=grid.centered_window(args.window))
    else:
        patch = substitution.seed_iterate(rules, args.seed, args.iters)
    extra = {"tileset": rules.name, "seed": args.seed, "iters": args.iters}
    if args.window is not None:
        extra["window"] = args.window
    _write(args, io.patch_document(patch, **extra))
    return EXIT_OK


def cmd_decompose(args):
    rules = _rules(args)
    doc = _read(args, ("patch",))
    patch = io.placements_of(doc)
    unknown = sorted({n for _, n in patch} - set(rules.metatiles))
    if unknown:
        raise UsageError(f"not a metatile patch (names {unknown})")
    hats = substitution.decompose_to_hats(rules, patch)
    _write(args, io.patch_document(hats, tileset="hat", **_carry(doc.payload, "seed", "iters", "window")))
    return EXIT_OK


def cmd_discretize(args):
    doc = _read(args, ("patch",))
    placements = io.placements_of(doc)
    names = {n for _, n in placements}
    polys = {"Hat": grid.hat_polygon()}
    if not names <= set(polys):
        raise UsageError(f"only Hat patches can be discretized here (got {sorted(names)})")
    try:
        cot, tiles = discretize.transfer_cotiler(placements, polys, args.kind, args.group)
    except discretize.NotInActingGroup as e:
        _write(args, io.Document("report", {"verdict": False, "error": str(e)}))
        return EXIT_FALSE
    extra = _carry(doc.payload, "seed", "iters", "window")
    extra["tiles"] = tiles.to_json()
    extra["group"] = args.group
    _write(args, io.patch_document(cot.placements, kind="cotiler", **extra))
    return EXIT_OK


def _window(args):
    if args.centered:
        return grid.centered_window(args.radius)
    if args.kind == grid.KITE:
        return analysis.window_ball(args.radius, grid.KITE)
    return grid.ball(args.radius)


def cmd_verify(args):
    doc = _read(args, ("cotiler",))
    tiles = _tileset_of(doc)
    rep = discretize.verify_exact_cover(tiles, io.placements_of(doc), _window(args))
    _write(args, io.Document("report", rep.to_json()))
    return EXIT_OK if rep.verdict else EXIT_FALSE


def cmd_symmetry(args):
    doc = _read(args, ("patch", "cotiler"))
    placements = io.placements_of(doc)
    if doc.kind == "cotiler":
        tiles = _tileset_of(doc)
    else:
        names = {n for _, n in placements}
        if not names <= {"Hat"}:
            raise UsageError("symmetry needs a Hat patch or a cotiler")
        tiles = discretize.TileSet({"Hat": grid.gat()})
    window = grid.centered_window(args.window)
    try:
        wp = analysis.WindowPatch(placements, window, tiles)
    except ValueError as e:
        _write(args, io.Document("report", {"verdict": False, "error": str(e)}))
        return EXIT_FALSE
    rep = analysis.patch_stabilizer(wp)
    periods = analysis.find_translation_periods(wp, args.max_norm)
    payload = rep.to_json()
    payload.update({
        "window_radius": args.window, "window_size": len(window),
        "interior_placements": len(wp.inner),
        "translation_periods": [io.element_json(t) for t in periods],
        "max_norm": str(args.max_norm),
    })
    _write(args, io.Document("report", payload))
    return EXIT_OK


def _search_tiles(which):
    return analysis.gamma_plus_hat_tiles(reflected=(which == "two"))


def cmd_search(args):
    if args.input:
        doc = _read(args, ("cotiler",))
        tiles = _tileset_of(doc)
        partial = io.placements_of(doc)
    else:
        tiles = _search_tiles(args.tiles)
        partial = ()
    window = analysis.window_ball(args.radius, tiles.kind)
    progress = analysis.stderr_progress if args.progress else None
    try:
        res = analysis.extend_search(tiles, window, partial, args.budget, progress=progress)
    except analysis.InvalidPartial as e:
        _write(args, io.Document("report", {"verdict": False, "error": str(e)}))
        return EXIT_FALSE
    payload = res.to_json()
    payload.update({"radius": args.radius, "tiles": tiles.to_json(), "verdict": res.status == "complete"})
    _write(args, io.Document("report", payload))
    return EXIT_OK if res.status == "complete" else EXIT_FALSE


def _symmetry_markers(placements):
    h = substitution._threefold_symmetry(frozenset(placements)) if placements else None
    return (classify(h).center,) if h is not None else ()


def cmd_render(args):
    doc = _read(args, ("patch", "cotiler"))
    placements = io.placements_of(doc)
    names = {n for _, n in placements}
    style = render.RenderStyle()
    if args.mode == "geo":
        polys = {"Hat": grid.hat_polygon(), "Gat": grid.hat_polygon()}
        arrows = {}
        if names & set(substitution.NAMES):
            rules = _rules(args)
            for n, m in rules.metatiles.items():
                polys[n] = Polygon(m.outline)
                arrows[n] = m.arrow_segment(IDENTITY)
        if "tiles" in doc.payload:
            ts = discretize.TileSet.from_json(doc.payload["tiles"])
            for n in ts.names():
                polys.setdefault(n, grid.geo(ts[n], ts.kind))
        missing = sorted(names - set(polys))
        if missing:
            raise UsageError(f"no polygon for tile(s) {missing}")
        style.arrows = args.arrows
        if args.markers:
            style.markers = _symmetry_markers(placements)
        svg = render.render_geometric(placements, polys, style, arrows, title=args.title)
    else:
        tiles = _tileset_of(doc) if doc.kind == "cotiler" or "tiles" in doc.payload else None
        if tiles is None:
            if not names <= {"Hat", "Gat"}:
                raise UsageError("group rendering needs a cotiler or a Hat patch")
            tiles = discretize.TileSet({n: grid.gat() for n in names})
        if tiles.kind == grid.KITE:
            tiles = discretize.TileSet({n: grid.kite_region_to_semikites(c) for n, c in tiles.tiles.items()})
        svg = render.render_group(placements, tiles.tiles, args.radius, style, title=args.title)
    if args.output in (None, "-"):
        sys.stdout.write(svg)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(svg)
    return EXIT_OK


def cmd_rules(args):
    rules = _rules(args) if args.action == "export" else None
    if args.action == "export":
        _write(args, substitution.rules_document(rules))
        return EXIT_OK
    path = args.rules
    try:
        r = substitution.rules_from_json(io.read_document(path or str(substitution.shipped_rules_path())).payload)
    except io.SchemaError as e:
        raise UsageError(str(e)) from None
    rep = substitution.validate_rules(r, args.depth)
    _write(args, io.Document("report", rep.to_json()))
    return EXIT_OK if rep.ok else EXIT_FALSE


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hatgroup", description="Hat tilings on the Kitegrid and their group counterparts.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def io_args(sp, inp=True):
        if inp:
            sp.add_argument("-i", "--input", default="-", help="input document (default stdin)")
        sp.add_argument("-o", "--output", default="-", help="output file (default stdout)")

    g = sub.add_parser("group", help="group element arithmetic")
    gsub = g.add_subparsers(dest="action", parser_class=_Parser)
    ge = gsub.add_parser("eval", help="evaluate a word in the generators")
    ge.add_argument("word")
    ge.add_argument("--json", action="store_true", help="emit a report document")
    io_args(ge, inp=False)
    ge.set_defaults(func=cmd_group_eval)

    gr = sub.add_parser("grid", help="polygons <-> cell sets")
    grs = gr.add_subparsers(dest="action", parser_class=_Parser)
    gg = grs.add_parser("grp", help="cells of a grid-aligned polygon")
    gg.add_argument("--hat", action="store_true", help="use the Hat polygon")
    gg.add_argument("--vertices", help="JSON list of [x, y] vertices (exact values as [a, b] for a+b*sqrt3)")
    gg.add_argument("--kind", choices=(grid.SEMIKITE, grid.KITE), default=grid.SEMIKITE)
    io_args(gg, inp=False)
    gg.set_defaults(func=cmd_grid_grp)
    go = grs.add_parser("geo", help="polygon of a cell set (a grp report)")
    io_args(go)
    go.set_defaults(func=cmd_grid_geo)

    gn = sub.add_parser("gen", help="metatile patch from a seed")
    gn.add_argument("--seed", choices=substitution.SEEDS, default="F3")
    gn.add_argument("--iters", type=int, default=1, help="number of substitution steps")
    gn.add_argument("--window", type=int, help="restrict to a centred window of this radius")
    gn.add_argument("--rules", help="rule set document (default: shipped HTPF rules)")
    io_args(gn, inp=False)
    gn.set_defaults(func=cmd_gen)

    dc = sub.add_parser("decompose", help="metatile patch -> hat patch")
    dc.add_argument("--rules")
    io_args(dc)
    dc.set_defaults(func=cmd_decompose)

    ds = sub.add_parser("discretize", help="hat patch -> group cotiler")
    ds.add_argument("--kind", choices=(grid.SEMIKITE, grid.KITE), default=grid.SEMIKITE)
    ds.add_argument("--group", default=GAMMA_FULL)
    io_args(ds)
    ds.set_defaults(func=cmd_discretize)

    vf = sub.add_parser("verify", help="exact-cover check of a cotiler on a ball")
    vf.add_argument("--radius", type=int, required=True)
    vf.add_argument("--centered", action="store_true", help="use the 3-fold symmetric window")
    vf.add_argument("--kind", choices=(grid.SEMIKITE, grid.KITE), default=grid.SEMIKITE)
    io_args(vf)
    vf.set_defaults(func=cmd_verify)

    sy = sub.add_parser("symmetry", help="window stabilizer and translation periods")
    sy.add_argument("--window", type=int, required=True)
    sy.add_argument("--max-norm", type=Fraction, default=Fraction(6))
    io_args(sy)
    sy.set_defaults(func=cmd_symmetry)

    se = sub.add_parser("search", help="backtracking extension search on a Kite ball")
    se.add_argument("--budget", type=int, required=True)
    se.add_argument("--radius", type=int, default=3)
    se.add_argument("--tiles", choices=("hat", "two"), default="two",
                    help="unreflected Hat alone, or Hat plus its reflection (in the rotation group)")
    se.add_argument("-i", "--input", help="partial cotiler to extend (its tiles are used)")
    se.add_argument("-o", "--output", default="-")
    se.add_argument("--progress", action="store_true")
    se.set_defaults(func=cmd_search)

    rn = sub.add_parser("render", help="SVG of a patch or cotiler")
    rn.add_argument("--mode", choices=("geo", "group"), default="geo")
    rn.add_argument("--radius", type=int, default=6, help="Cayley ball radius (group mode)")
    rn.add_argument("--markers", action="store_true", help="mark 3-fold rotation centres")
    rn.add_argument("--arrows", action="store_true")
    rn.add_argument("--rules")
    rn.add_argument("--title", default="tiling")
    io_args(rn)
    rn.set_defaults(func=cmd_render)

    ru = sub.add_parser("rules", help="export or validate a rule set")
    ru.add_argument("action", choices=("export", "validate"))
    ru.add_argument("--rules")
    ru.add_argument("--depth", type=int, default=4)
    io_args(ru, inp=False)
    ru.set_defaults(func=cmd_rules)
    return p


def _usage(message) -> int:
    sys.stderr.write(json.dumps({"error": "usage", "message": str(message)}) + "\n")
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            raise UsageError("missing subcommand")
        return args.func(args)
    except UsageError as e:
        return _usage(e)
    except (io.SchemaError, substitution.ValidationFailure, KeyError, ValueError, OSError) as e:
        # bad inputs are reported like usage errors, with the message on stderr
        return _usage(e)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
