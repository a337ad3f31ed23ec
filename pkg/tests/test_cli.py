import json
import subprocess
import sys

import pytest

from hatgroup import io
from hatgroup.cli import main
from hatgroup.grid import gat
from hatgroup.group import IDENTITY, T1

CLI = [sys.executable, "-m", "hatgroup"]


def run(args, stdin=None):
    return subprocess.run(CLI + args, input=stdin, capture_output=True, text=True)


def doc_of(text):
    return io.parse(text)


@pytest.fixture(scope="module")
def hats_file(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    patch, hats, cot = d / "patch.json", d / "hats.json", d / "cot.json"
    assert main(["gen", "--seed", "F3", "--iters", "2", "-o", str(patch)]) == 0
    assert main(["decompose", "-i", str(patch), "-o", str(hats)]) == 0
    assert main(["discretize", "-i", str(hats), "-o", str(cot)]) == 0
    return {"patch": patch, "hats": hats, "cot": cot}


def test_group_eval(capsys):
    assert main(["group", "eval", "γ.β"]) == 0
    assert capsys.readouterr().out.strip() == "s^0 r^2 t(1,-1)"
    assert main(["group", "eval", "β.α", "--json"]) == 0
    d = doc_of(capsys.readouterr().out)
    assert d.kind == "report" and d.payload["order"] == 6


def test_unknown_letter_is_usage_error(capsys):
    assert main(["group", "eval", "α.z"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "usage"


@pytest.mark.parametrize("argv", [[], ["bogus"], ["verify"], ["gen", "--seed", "Q"], ["search"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_bad_input_document(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{}")
    assert main(["verify", "--radius", "2", "-i", str(p)]) == 2
    p.write_text(io.Document("report", {}).dumps())
    assert main(["verify", "--radius", "2", "-i", str(p)]) == 2
    assert main(["verify", "--radius", "2", "-i", str(tmp_path / "missing.json")]) == 2


def test_grid_grp_and_geo(tmp_path, capsys):
    out = tmp_path / "grp.json"
    assert main(["grid", "grp", "--hat", "-o", str(out)]) == 0
    rep = io.read_document(str(out)).payload
    assert len(rep["cells"]) == 16
    assert main(["grid", "grp", "--hat", "--kind", "Kite", "-o", str(tmp_path / "k.json")]) == 0
    assert len(io.read_document(str(tmp_path / "k.json")).payload["cells"]) == 8
    assert main(["grid", "geo", "-i", str(out), "-o", str(tmp_path / "geo.json")]) == 0
    assert len(io.read_document(str(tmp_path / "geo.json")).payload["vertices"]) == 13
    square = json.dumps([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert main(["grid", "grp", "--vertices", square, "-o", str(tmp_path / "sq.json")]) == 1


def test_pipeline_subprocess():
    # the documented stdin/stdout pipeline
    a = run(["gen", "--seed", "F3", "--iters", "2"])
    b = run(["decompose"], a.stdout)
    c = run(["discretize"], b.stdout)
    d = run(["verify", "--radius", "10"], c.stdout)
    assert (a.returncode, b.returncode, c.returncode, d.returncode) == (0, 0, 0, 0)
    assert doc_of(d.stdout).payload["verdict"] is True


def test_gen_payload(hats_file):
    d = io.read_document(str(hats_file["patch"]))
    assert d.payload["seed"] == "F3" and d.payload["iters"] == 2
    assert len(io.placements_of(d)) == 129
    h = io.read_document(str(hats_file["hats"]))
    assert h.payload["tileset"] == "hat"


def test_gen_window(tmp_path):
    out = tmp_path / "w.json"
    assert main(["gen", "--iters", "4", "--window", "6", "-o", str(out)]) == 0
    assert main(["gen", "--iters", "3", "--window", "6"]) == 2


def test_verify_overlap_reports_witnesses(hats_file, tmp_path):
    d = io.read_document(str(hats_file["cot"]))
    ps = sorted(io.placements_of(d))
    g, n = next(p for p in ps if any(p[0] * c == IDENTITY for c in gat()))
    payload = dict(d.payload)
    # a second copy of one tile, shifted by a lattice step onto its neighbours
    payload["placements"] = io.placements_json(set(ps) | {(T1 * g, n)})
    bad = tmp_path / "bad.json"
    bad.write_text(io.Document("cotiler", payload).dumps())
    r = run(["verify", "--radius", "10", "-i", str(bad)])
    assert r.returncode == 1
    rep = doc_of(r.stdout).payload
    assert rep["verdict"] is False and rep["overlaps"] and rep["witnesses"]


def test_verify_gap(hats_file, tmp_path):
    d = io.read_document(str(hats_file["cot"]))
    payload = dict(d.payload)
    payload["placements"] = io.placements_json(sorted(io.placements_of(d))[1:])
    p = tmp_path / "gap.json"
    p.write_text(io.Document("cotiler", payload).dumps())
    assert main(["verify", "--radius", "30", "-i", str(p), "-o", str(tmp_path / "r.json")]) == 1


def test_symmetry(hats_file, tmp_path):
    out = tmp_path / "s.json"
    assert main(["symmetry", "--window", "8", "-i", str(hats_file["hats"]), "-o", str(out)]) == 0
    rep = io.read_document(str(out)).payload
    assert rep["note"] == "exactly {id, R3, R3^2}"
    assert rep["translation_periods"] == []
    # window not covered: verdict false
    assert main(["symmetry", "--window", "40", "-i", str(hats_file["hats"]), "-o", str(out)]) == 1


def test_search(tmp_path):
    out = tmp_path / "s.json"
    assert main(["search", "--budget", "1000", "--radius", "3", "-o", str(out)]) == 0
    rep = io.read_document(str(out)).payload
    assert rep["status"] == "complete"
    assert main(["search", "--budget", "10000", "--radius", "5", "--tiles", "hat", "-o", str(out)]) == 1
    assert io.read_document(str(out)).payload["status"] == "exhausted"
    assert main(["search", "--budget", "10", "--radius", "5", "--tiles", "hat", "-o", str(out)]) == 1
    assert io.read_document(str(out)).payload["status"] == "cutoff"


def test_search_progress_on_stderr():
    r = run(["search", "--budget", "30000", "--radius", "6", "--tiles", "hat", "--progress"])
    assert r.returncode == 1
    assert doc_of(r.stdout).kind == "report"
    assert "nodes" in r.stderr or r.stderr == ""


def test_render_modes(hats_file, tmp_path):
    geo, grp = tmp_path / "g.svg", tmp_path / "c.svg"
    assert main(["render", "--markers", "-i", str(hats_file["hats"]), "-o", str(geo)]) == 0
    assert main(["render", "--mode", "group", "-i", str(hats_file["cot"]), "-o", str(grp)]) == 0
    assert geo.read_text().count("<path") == len(io.placements_of(io.read_document(str(hats_file["hats"]))))
    assert 'class="marker"' in geo.read_text()
    assert main(["render", "--arrows", "-i", str(hats_file["patch"]), "-o", str(tmp_path / "m.svg")]) == 0
    assert 'class="arrow"' in (tmp_path / "m.svg").read_text()


def test_render_unknown_tile(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(io.patch_document({(IDENTITY, "Blob")}).dumps())
    assert main(["render", "-i", str(p)]) == 2


def test_rules_commands(tmp_path):
    out = tmp_path / "r.json"
    assert main(["rules", "export", "-o", str(out)]) == 0
    assert io.read_document(str(out)).kind == "ruleset"
    assert main(["rules", "validate", "--rules", str(out), "--depth", "2", "-o", str(tmp_path / "v.json")]) == 0
    assert io.read_document(str(tmp_path / "v.json")).payload
