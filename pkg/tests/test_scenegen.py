import json

import pytest

from gen import DATA, load_ontology
from ckrscene.ckr2asp import GENERAL, Diagnosis, Requirement, parse_diagnoses
from ckrscene.kb import Scene, SceneError, SceneObject, load_scene, parse_ontology, validate
from ckrscene.measures import CostConfig
from ckrscene.scenegen import (
    GenerationConfig,
    SceneDiff,
    apply_diff,
    build_sckr,
    default_modifiable,
    diffs_to_json,
    export_program,
    fresh_names,
    generate,
    generate_one,
    superclasses,
)


@pytest.fixture(scope="module")
def inputs():
    onto = load_ontology()
    return onto, load_scene(DATA / "scene.json", onto.concept_names()), parse_diagnoses((DATA / "diagnoses.dx").read_text())


def _by_context(diffs):
    return {d.context: d for d in diffs}


def test_generate_sample_scene(inputs):
    onto, scene, ds = inputs
    got = _by_context(generate(scene, onto, ds))
    assert got["c_child"].cost == 0
    assert got["c_gliding"].cost == 1 and got["c_gliding"].additions == (("i1", "GlidingOnWheels"),)
    rolling = got["c_rolling"]
    assert rolling.cost == 3
    assert rolling.deletions == (("i2", "Child"), ("i3", "Child"))
    assert [c for _, c in rolling.additions] == ["RollingContainer"]
    assert not got["c_sign_smoke"].feasible and got["c_sign_smoke"].cost is None


def test_fresh_individuals(inputs):
    onto, scene, ds = inputs
    got = _by_context(generate(scene, onto, ds[3:], GenerationConfig(fresh_individuals=2)))
    assert {d.cost for d in got.values()} == {2}
    after = apply_diff(scene, got["c_sign_stop"])
    assert {"f_1", "f_2"} <= set(after.ids)


def test_general_matches_specialized(inputs):
    onto, scene, ds = inputs
    spec = generate(scene, onto, ds[:3])
    gen = generate(scene, onto, ds[:3], GenerationConfig(translation=GENERAL))
    assert [d.cost for d in spec] == [d.cost for d in gen]


def test_all_optima(inputs):
    onto, scene, ds = inputs
    gliding = ds[0]
    (only,) = generate_one(scene, onto, gliding, GenerationConfig(all_optima=True))
    assert only.additions == (("i1", "GlidingOnWheels"),)
    two = Scene("s", (SceneObject("a"), SceneObject("b")))
    diffs = generate_one(two, onto, gliding, GenerationConfig(all_optima=True))
    assert [d.additions for d in diffs] == [(("a", "GlidingOnWheels"),), (("b", "GlidingOnWheels"),)]


def test_costs_change_the_optimum(inputs):
    onto, scene, ds = inputs
    rolling = ds[2]
    (d,) = generate_one(scene, onto, rolling, GenerationConfig(costs=CostConfig(add=1, delete=4)))
    assert d.cost == 9


def test_applied_diff_satisfies_diagnosis(inputs):
    onto, scene, ds = inputs
    up = superclasses(onto)
    for d in generate(scene, onto, ds[:3]):
        after = apply_diff(scene, d)
        diag = next(x for x in ds if x.context == d.context)
        classes = {s for o in after.objects for c in o.concepts for s in up.get(c, {c})}
        for r in diag.requirements:
            assert (r.concept in classes) == (r.kind == "some")


def test_build_sckr_is_valid(inputs):
    onto, scene, ds = inputs
    sckr = build_sckr(scene, onto, ds)
    assert validate(sckr) == []
    assert set(sckr.contexts) == {"c_exch", "c_base"} | {d.context for d in ds}


def test_default_modifiable(inputs):
    onto, scene, ds = inputs
    assert default_modifiable(scene, onto, ds[2]) == ["Child", "Human", "RollingContainer"]
    assert default_modifiable(scene, onto, ds[1]) == ["Child"]


def test_input_errors(inputs):
    onto, scene, _ = inputs
    with pytest.raises(SceneError):
        generate(scene, onto, [Diagnosis("x", [Requirement("some", "Unicorn")])])
    with pytest.raises(SceneError):
        generate(scene, onto, [Diagnosis("x", [Requirement("some", "Car")])], GenerationConfig(modifiable=("Unicorn",)))
    bad = parse_ontology("sub ADD_Car Car.")
    with pytest.raises(SceneError):
        build_sckr(scene, bad, [Diagnosis("x", [Requirement("some", "Car")])])
    taken = Scene("s", (SceneObject("f_1", ("Car",)),))
    with pytest.raises(SceneError):
        fresh_names(taken, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        GenerationConfig(translation="fast")
    with pytest.raises(ValueError):
        GenerationConfig(solver="external")
    with pytest.raises(ValueError):
        GenerationConfig(fresh_individuals=-1)
    with pytest.raises(ValueError):
        GenerationConfig(time_limit=0)


def test_apply_diff_errors(inputs):
    _, scene, _ = inputs
    with pytest.raises(SceneError):
        apply_diff(scene, SceneDiff("c", 1, deletions=(("i4", "Child"),)))
    with pytest.raises(SceneError):
        apply_diff(scene, SceneDiff("c", 1, additions=(("zz", "Car"),)))
    after = apply_diff(scene, SceneDiff("c", 1, additions=(("zz", "Car"),)), fresh=["zz"])
    assert after.ids[-1] == "zz"


def test_scene_diff_json():
    d = SceneDiff("c_x", 3, (("i1", "Car"),), (("i2", "Child"),))
    (back,) = [SceneDiff.from_json(x) for x in json.loads(diffs_to_json([d]))]
    assert back == d
    with pytest.raises(ValueError):
        SceneDiff("c_x", 2, (("i1", "Car"),), (("i1", "Car"),))


def test_export_program_is_text(inputs):
    onto, scene, ds = inputs
    text = export_program(scene, onto, ds[:1])
    assert ":~" in text and "found_gliding_1" in text


def test_workers_agree(inputs):
    onto, scene, ds = inputs
    assert generate(scene, onto, ds, GenerationConfig(workers=2)) == generate(scene, onto, ds)
