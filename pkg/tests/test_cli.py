import json
import subprocess
import sys

import pytest

from gen import DATA
from ckrscene.bench import HEADER, read_csv, rows_to_csv, run_bench, subsample
from ckrscene.ckr2asp import parse_diagnoses
from ckrscene.cli import main
from ckrscene.kb import load_scene, parse_ontology
from ckrscene.measures import Const, Neg, Pos, Prod, Sum, formula_to_json
from ckrscene.asp import Atom

GEN = ["--scene", str(DATA / "scene.json"), "--ontology", str(DATA / "ontology.onto")]


def _dx(tmp_path, text):
    p = tmp_path / "d.dx"
    p.write_text(text)
    return str(p)


def test_generate_ok(tmp_path):
    out = tmp_path / "out.json"
    dx = _dx(tmp_path, "diagnosis rolling { some RollingContainer; none Human; }")
    assert main(["generate", *GEN, "--diagnoses", dx, "--out", str(out)]) == 0
    (d,) = json.loads(out.read_text())
    assert d["context"] == "c_rolling" and d["cost"] == 3


def test_generate_infeasible_then_fresh(tmp_path):
    out = tmp_path / "out.json"
    dx = _dx(tmp_path, "diagnosis sign_stop { some Sign; some StopLineMarking; }")
    assert main(["generate", *GEN, "--diagnoses", dx, "--out", str(out)]) == 2
    assert json.loads(out.read_text())[0]["feasible"] is False
    assert main(["generate", *GEN, "--diagnoses", dx, "--fresh", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())[0]["cost"] == 2


def test_generate_costs_file(tmp_path):
    out = tmp_path / "out.json"
    dx = _dx(tmp_path, "diagnosis rolling { some RollingContainer; none Human; }")
    costs = tmp_path / "c.json"
    costs.write_text(json.dumps({"add": 1, "del": 4}))
    assert main(["generate", *GEN, "--diagnoses", dx, "--costs", str(costs), "--out", str(out)]) == 0
    assert json.loads(out.read_text())[0]["cost"] == 9


@pytest.mark.parametrize("argv, code", [
    (["generate"], 64),
    (["generate", *GEN, "--diagnoses", "x", "--out", "-", "--fresh", "-1"], 64),
    (["generate", *GEN, "--diagnoses", "x", "--out", "-", "--solver", "external"], 64),
    (["nonsense"], 64),
    (["generate", *GEN, "--diagnoses", "/nonexistent.dx", "--out", "-"], 66),
])
def test_exit_codes(argv, code):
    with pytest.raises(SystemExit) as info:
        sys.exit(main(argv))
    assert info.value.code == code


def test_data_error(tmp_path):
    dx = _dx(tmp_path, "diagnosis x { some Unicorn; }")
    assert main(["generate", *GEN, "--diagnoses", dx, "--out", "-"]) == 65
    assert main(["generate", *GEN, "--diagnoses", _dx(tmp_path, "diagnosis {"), "--out", "-"]) == 65


def test_export(tmp_path):
    out = tmp_path / "p.lp"
    dx = _dx(tmp_path, "diagnosis child { some Child; }")
    assert main(["export", *GEN, "--diagnoses", dx, "--out", str(out)]) == 0
    assert "found_child_1" in out.read_text()


def test_oracle(capsys, tmp_path):
    assert main(["oracle", "--sckr", str(DATA / "dog.sckr")]) == 0
    assert "models: 1" in capsys.readouterr().out
    assert main(["oracle", "--sckr", str(DATA / "dog.sckr"), "--max-assumptions", "0"]) == 4
    bad = tmp_path / "bad.sckr"
    bad.write_text("this is not a repository")
    assert main(["oracle", "--sckr", str(bad)]) == 65


def test_eval_measure(capsys, tmp_path):
    prog = tmp_path / "p.lp"
    prog.write_text("a :- not b. b :- not a.")
    f = tmp_path / "f.json"
    f.write_text(json.dumps(formula_to_json(Const(1))))
    assert main(["eval-measure", "--program", str(prog), "--formula", str(f), "--semiring", "nat"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    alpha = Prod((Sum((Prod((Pos(Atom("a")), Const(3))), Neg(Atom("a")))),))
    f.write_text(json.dumps(formula_to_json(alpha)))
    assert main(["eval-measure", "--program", str(prog), "--formula", str(f), "--semiring", "minplus"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["eval-measure", "--program", str(prog), "--formula", str(f), "--semiring", "minplus",
                 "--query", "a"]) == 0
    assert capsys.readouterr().out.strip() == "3"
    prog.write_text("a :- b")
    assert main(["eval-measure", "--program", str(prog), "--formula", str(f), "--semiring", "nat"]) == 65


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "ckrscene", "oracle", "--sckr", str(DATA / "dog.sckr")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "models: 1" in res.stdout


# -- bench ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def full():
    onto = parse_ontology((DATA / "ontology.onto").read_text())
    return (load_scene(DATA / "scene_full.json", onto.concept_names()), onto,
            parse_diagnoses((DATA / "diagnoses.dx").read_text()))


def test_bench_grid_and_csv(full):
    scene, onto, ds = full
    rows = run_bench(scene, onto, ds, 2, 2, 30.0)
    assert len(rows) == 2 * 2 * 2
    assert {r.translation for r in rows} == {"general", "specialized"}
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(HEADER)
    back = read_csv(text)
    assert [(r.translation, r.objects, r.contexts, r.optimal_cost) for r in back] == \
        [(r.translation, r.objects, r.contexts, r.optimal_cost) for r in rows]
    by_cell = {}
    for r in rows:
        by_cell.setdefault((r.objects, r.contexts), set()).add(r.optimal_cost)
    assert all(len(v) == 1 for v in by_cell.values())


def test_bench_cli(tmp_path):
    out = tmp_path / "b.csv"
    argv = ["bench", "--scene", str(DATA / "scene_full.json"), "--ontology", str(DATA / "ontology.onto"),
            "--diagnoses", str(DATA / "diagnoses.dx"), "--max-objects", "1", "--max-contexts", "1",
            "--csv", str(out)]
    assert main(argv) == 0
    assert len(read_csv(out.read_text())) == 2
    argv[argv.index("--max-objects") + 1] = "999"
    assert main(argv) == 64


def test_subsample(full):
    scene = full[0]
    assert subsample(scene, 3).ids == scene.ids[:3]
    assert subsample(scene, 3, seed=1) == subsample(scene, 3, seed=1)
    with pytest.raises(ValueError):
        subsample(scene, len(scene.ids) + 1)
