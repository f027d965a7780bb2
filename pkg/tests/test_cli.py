import json
import subprocess
import sys
from pathlib import Path

import pytest

from dehn.cli import run
from dehn.complex2 import disc_grid, torus
from dehn.diagram import VanKampenDiagram, random_degenerate_diagram
from dehn.growth import GrowthTable
from dehn.plmaps import CombinatorialLoop, random_disc_map
from dehn.pushing import PLChain, chain_from_points, push_chain, random_loop

DATA = Path(__file__).parent / "data"


@pytest.fixture
def files(tmp_path):
    K = disc_grid(3)
    loop = random_loop(K, 3)
    (tmp_path / "loop.json").write_text(loop.to_json())
    (tmp_path / "skel.json").write_text(push_chain(loop, K, seed=3).R.to_json())
    (tmp_path / "seg.json").write_text(
        chain_from_points([("v", 0), ("f", 0, 0.2, 0.3, 0.5), ("v", 1)], closed=False).to_json())
    (tmp_path / "map.json").write_text(random_disc_map(4).to_json())
    (tmp_path / "dia.json").write_text(random_degenerate_diagram(5).to_json())
    (tmp_path / "t.csv").write_text(GrowthTable.from_function(lambda n: n * n, 1, 30).to_csv())
    return tmp_path


def commands(d):
    return {
        "area": ["area", str(DATA / "z2.pres"), "aabbAABB", "--format", "json"],
        "dehn": ["dehn", str(DATA / "c3.pres"), "--n", "6"],
        "classify": ["classify", str(d / "t.csv"), "--format", "json"],
        "reduce": ["reduce", str(d / "dia.json"), "--target", "torus:3"],
        "push": ["push", "disc_grid:3", str(d / "loop.json"), "--seed", "7"],
        "straighten": ["straighten", "disc_grid:3", str(d / "skel.json")],
        "degree": ["degree", str(d / "map.json")],
        "alpha": ["alpha", str(d / "seg.json"), "--v", "14", "--samples", "500", "--format", "json"],
    }


def test_area_prints_exact(capsys):
    assert run(["area", str(DATA / "z2.pres"), "aabbAABB"]) == 0
    assert capsys.readouterr().out == "Exact 4\n"


def test_dehn_csv(capsys):
    assert run(["dehn", str(DATA / "c3.pres"), "--n", "6"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "n,value" and "3,1" in rows and "6,2" in rows


def test_exit_codes(capsys):
    assert run(["area", "z2", "aaaabbbbAAAABBBB", "--limit-area", "8"]) == 2
    assert run(["area", "z2", "axb"]) == 1
    assert run(["area", "nonexistent.pres", "ab"]) == 1
    assert run(["push", "disc_grid:3", "missing.json"]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    err = capsys.readouterr().err
    assert "error" in err


@pytest.mark.parametrize("name", ["area", "dehn", "classify", "reduce", "push", "straighten", "degree", "alpha"])
def test_commands_are_byte_identical_on_rerun(files, name):
    argv = commands(files)[name]
    a, b = files / f"{name}.a", files / f"{name}.b"
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_outputs_reparse(files):
    argv = commands(files)
    out = files / "o"
    run(argv["reduce"] + ["--out", str(out)])
    VanKampenDiagram.from_json(json.dumps(json.loads(out.read_text())["diagram"]), torus(3)).check_combinatorial()
    run(argv["push"] + ["--out", str(out)])
    PLChain.from_json(json.dumps(json.loads(out.read_text())["R"]), disc_grid(3))
    run(argv["straighten"] + ["--out", str(out)])
    CombinatorialLoop.from_json(json.dumps(json.loads(out.read_text())["loop"])).validate(disc_grid(3))
    run(argv["dehn"] + ["--out", str(out)])
    GrowthTable.from_csv(out.read_text())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dehn", "area", "z2", "abAB"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "Exact 1\n"
