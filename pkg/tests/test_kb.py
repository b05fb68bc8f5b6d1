import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckrscene.kb import (
    SCKR,
    Assertion,
    Atomic,
    Bottom,
    ContextKB,
    ContextStructure,
    DefeasibleAxiom,
    DisjunctiveSubsumption,
    Eval,
    Or,
    ParseError,
    Scene,
    SceneError,
    SceneObject,
    Signature,
    Subsumption,
    instantiate,
    normalize,
    parse_ontology,
    parse_sckr,
    render_ontology,
    render_sckr,
    scene_from_json,
    sub,
    validate,
)


def test_parse_sub():
    onto = parse_ontology("sub Child Human.\n")
    assert onto.strict == [sub("Child", rhs="Human")]


def test_parse_disjoint():
    onto = parse_ontology("disjoint ADD_Car NOADD_Car.")
    assert onto.strict == [sub("ADD_Car", "NOADD_Car", rhs=None)]


def test_parse_defeasible():
    onto = parse_ontology("def[sim] sub Named ADD_Car.")
    assert onto.defeasible == [DefeasibleAxiom("sim", sub("Named", rhs="ADD_Car"))]


def test_parse_conjunction_eval_and_inst():
    onto = parse_ontology("# comment\nsub A & eval(B, c1) C.\ninst x A.\n")
    assert onto.strict == [Subsumption((Atomic("A"), Eval("B", "c1")), Atomic("C"))]
    assert onto.assertions == [Assertion("A", "x")]


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_ontology("sub A B.\nsub A\n")
    assert info.value.line == 2


def test_undeclared_relation_rejected():
    with pytest.raises(ParseError):
        parse_ontology("def[other] sub A B.")


def test_disjunctive_sugar_normalizes():
    onto = parse_ontology("sub (ORIG_Car & NODEL_Car) | ADD_Car Car.")
    assert normalize(onto.strict) == [sub("ORIG_Car", "NODEL_Car", rhs="Car"), sub("ADD_Car", rhs="Car")]


def test_normalize_nested_disjunction():
    ax = DisjunctiveSubsumption(Or((Or(((Atomic("A"),), (Atomic("B"),))), (Atomic("C"),))), Atomic("D"))
    assert normalize([ax]) == [sub("A", rhs="D"), sub("B", rhs="D"), sub("C", rhs="D")]


def test_normalize_plain_and_idempotent():
    axs = [sub("A", rhs="B")]
    assert normalize(axs) == axs
    assert normalize(normalize(axs)) == axs


def test_normalize_rejects_nested_or_in_conjunction():
    ax = DisjunctiveSubsumption(Or(((Atomic("A"), Or(((Atomic("B"),),))),)), Atomic("D"))
    with pytest.raises(ValueError):
        normalize([ax])


def test_subsumption_invariants():
    with pytest.raises(ValueError):
        Subsumption((), Atomic("A"))
    with pytest.raises(ValueError):
        Subsumption((Atomic("A"),), Eval("B", "c"))


def _structure(edges):
    ctxs = sorted({c for e in edges for c in e})
    return ContextStructure(tuple(ctxs), (("c", frozenset(edges)),))


def test_validate_strict_order():
    ok = SCKR(_structure({("c2", "c1")}), {})
    assert validate(ok) == []
    cyclic = SCKR(_structure({("c1", "c2"), ("c2", "c1")}), {})
    assert any("not a strict order" in e for e in validate(cyclic))


def test_validate_unknown_concept():
    st_ = _structure({("c2", "c1")})
    sig = Signature(frozenset({"A"}), frozenset({"x"}), frozenset({"c1", "c2"}), frozenset({"c"}))
    sckr = SCKR(st_, {"c1": ContextKB((), (), (Assertion("B", "x"),))}, sig)
    assert any("unknown concept" in e for e in validate(sckr))


def test_instantiate():
    g = instantiate(sub("Child", rhs="Human"), "i2")
    assert g.body == (Assertion("Child", "i2"),) and g.head == Assertion("Human", "i2")
    g = instantiate(sub("Dog", "DangerousAnimal", rhs=None), "d")
    assert set(g.body) == {Assertion("Dog", "d"), Assertion("DangerousAnimal", "d")} and g.head is Bottom
    g = instantiate(sub("A", rhs="A"), "x")
    assert g.body == (Assertion("A", "x"),) and g.head == Assertion("A", "x")
    with pytest.raises(ValueError):
        instantiate(Subsumption((Eval("A", "c"),), Atomic("B")), "x")


ONTO = """\
relation sim.
sub Child Human.
disjoint Human Animal.
def[sim] sub Named ADD_Car.
sub A & eval(B, c1) C.
inst x Child.
"""


def test_ontology_round_trip():
    onto = parse_ontology(ONTO)
    again = parse_ontology(render_ontology(onto))
    assert (again.strict, again.defeasible, again.assertions) == (onto.strict, onto.defeasible, onto.assertions)


def test_sckr_round_trip():
    from pathlib import Path
    text = (Path(__file__).resolve().parent.parent / "data" / "dog.sckr").read_text()
    sckr = parse_sckr(text)
    again = parse_sckr(render_sckr(sckr))
    assert again.structure == sckr.structure
    assert again.kbs == sckr.kbs
    assert validate(sckr) == []


def test_scene_json():
    scene = scene_from_json({"scene": "s", "objects": [{"id": "o1", "classes": ["Car"], "attributes": {"k": 1}}]},
                            {"Car"})
    assert scene.objects[0] == SceneObject("o1", ("Car",), {"k": "1"})
    with pytest.raises(SceneError):
        scene_from_json({"objects": [{"id": "o1", "classes": ["Boat"]}]}, {"Car"})
    with pytest.raises(SceneError):
        Scene("s", (SceneObject("o1"), SceneObject("o1")))


@st.composite
def dags(draw):
    n = draw(st.integers(2, 6))
    ctxs = [f"k{i}" for i in range(n)]
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] > e[1]),
                         max_size=10))
    return ctxs, {(ctxs[a], ctxs[b]) for a, b in edges}


@given(dags())
@settings(max_examples=100, deadline=None)
def test_dag_relations_accepted(data):
    ctxs, edges = data
    sckr = SCKR(ContextStructure(tuple(ctxs), (("r", frozenset(edges)),)), {})
    assert validate(sckr) == []
    assert all(a != b for a, b in sckr.structure.strict("r"))


@given(dags(), st.integers(0, 1000))
@settings(max_examples=100, deadline=None)
def test_cycles_rejected(data, seed):
    ctxs, edges = data
    rng = random.Random(seed)
    a, b = rng.sample(ctxs, 2)
    edges = set(edges) | {(a, b), (b, a)}
    sckr = SCKR(ContextStructure(tuple(ctxs), (("r", frozenset(edges)),)), {})
    assert any("not a strict order" in e for e in validate(sckr))
