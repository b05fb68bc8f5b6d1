import random

import pytest

from gen import DATA, random_sckr
from ckrscene.kb import SCKR, Assertion, ContextKB, ContextStructure, DefeasibleAxiom, parse_sckr, sub
from ckrscene.oracle import (
    BoundExceeded,
    CASInterpretation,
    ClashingAssumption,
    ContextModel,
    NoClashingSet,
    Preference,
    check_cas_model,
    clashing_set,
    eligible_assumptions,
    enumerate_ckr_models,
    is_justified,
    least_model,
    lp_compare,
    make_chi,
    mp_compare,
)

DOG_AXIOM = sub("Dog", "DangerousAnimal", rhs=None)


@pytest.fixture(scope="module")
def dog():
    return parse_sckr((DATA / "dog.sckr").read_text())


def _cas(sckr, per_context, assumptions=()):
    per = {c: frozenset(per_context.get(c, ())) for c in sckr.contexts}
    return CASInterpretation(ContextModel(per), make_chi(sckr, assumptions))


def test_least_model_with_override(dog):
    a = ClashingAssumption("c", "c2", "d", DOG_AXIOM)
    m = least_model(dog, [a])
    assert m.per_context["c2"] == {Assertion("Dog", "d"), Assertion("DangerousAnimal", "d")}
    assert not m.inconsistent


def test_least_model_without_override_is_inconsistent(dog):
    assert "c2" in least_model(dog, []).inconsistent


def test_least_model_single_context():
    sckr = SCKR(ContextStructure(("k",), ()), {"k": ContextKB((sub("Child", rhs="Human"),), (),
                                                              (Assertion("Child", "i2"),))})
    assert least_model(sckr).per_context["k"] == {Assertion("Child", "i2"), Assertion("Human", "i2")}


def test_check_cas_model(dog):
    a = ClashingAssumption("c", "c2", "d", DOG_AXIOM)
    full = {Assertion("Dog", "d"), Assertion("DangerousAnimal", "d")}
    assert check_cas_model(dog, _cas(dog, {"c2": full}, [a]))
    assert not check_cas_model(dog, _cas(dog, {"c2": {Assertion("Dog", "d")}}, [a]))
    empty = SCKR(ContextStructure((), ()), {})
    assert check_cas_model(empty, _cas(empty, {}))


def test_clashing_set():
    assert clashing_set(DOG_AXIOM, "d", [DOG_AXIOM]) == {Assertion("Dog", "d"), Assertion("DangerousAnimal", "d")}
    got = clashing_set(sub("Named", rhs="NOADD_Car"), "i1", [sub("ADD_Car", "NOADD_Car", rhs=None)])
    assert got == {Assertion("Named", "i1"), Assertion("ADD_Car", "i1")}
    with pytest.raises(NoClashingSet):
        clashing_set(sub("A", rhs="B"), "x", [])


def test_is_justified(dog):
    full = {Assertion("Dog", "d"), Assertion("DangerousAnimal", "d")}
    a = ClashingAssumption("c", "c2", "d", DOG_AXIOM)
    assert is_justified(dog, _cas(dog, {"c2": full}, [a]))
    b = ClashingAssumption("c", "c2", "d2", DOG_AXIOM)
    assert not is_justified(dog, _cas(dog, {"c2": full}, [b]))
    assert is_justified(dog, _cas(dog, {}))


# c < c_m < c_t under r; D_r(A <= X) at c_t, D_r(A <= Y) at c_m, X & Y disjoint
def _chain():
    st = ContextStructure(("c_t", "c_m", "c"), (("r", frozenset({("c_m", "c_t"), ("c", "c_m")})),))
    kbs = {
        "c_t": ContextKB((sub("X", "Y", rhs=None),), (DefeasibleAxiom("r", sub("A", rhs="X")),), ()),
        "c_m": ContextKB((), (DefeasibleAxiom("r", sub("A", rhs="Y")),), ()),
        "c": ContextKB((), (), (Assertion("A", "e"),)),
    }
    return SCKR(st, kbs)


def test_lp_compare_equal_is_neither():
    sckr = _chain()
    chi = {ClashingAssumption("r", "c", "e", sub("A", rhs="X"))}
    assert lp_compare(chi, chi, "c", "r", sckr) is Preference.NEITHER


def test_lp_compare_prefers_overriding_the_more_general_default():
    sckr = _chain()
    chi_t = {ClashingAssumption("r", "c", "e", sub("A", rhs="X"))}
    chi_m = {ClashingAssumption("r", "c", "e", sub("A", rhs="Y"))}
    assert lp_compare(chi_t, chi_m, "c", "r", sckr) is Preference.FIRST
    assert lp_compare(chi_m, chi_t, "c", "r", sckr) is Preference.SECOND


def test_lp_compare_subset():
    sckr = _chain()
    extra = ClashingAssumption("r", "c", "e", sub("A", rhs="X"))
    assert lp_compare(set(), {extra}, "c", "r", sckr) is Preference.FIRST


def test_mp_compare_single_relation():
    sckr = _chain()
    models = {}
    for head in ("X", "Y"):
        a = ClashingAssumption("r", "c", "e", sub("A", rhs=head))
        models[head] = CASInterpretation(least_model(sckr, [a]), make_chi(sckr, [a]))
    assert mp_compare(models["X"], models["X"], sckr) is Preference.NEITHER
    assert mp_compare(models["X"], models["Y"], sckr) is Preference.FIRST
    found = enumerate_ckr_models(sckr)
    assert [m.key() for m in found] == [models["X"].key()]


def test_mp_compare_second_relation_decides():
    # r ties (same override for r in both), s discriminates
    st = ContextStructure(("top", "mid", "low"),
                          (("r", frozenset({("low", "top")})), ("s", frozenset({("mid", "top"), ("low", "mid")}))))
    kbs = {
        "top": ContextKB((sub("X", "Y", rhs=None), sub("P", "Q", rhs=None)),
                         (DefeasibleAxiom("r", sub("B", rhs="P")), DefeasibleAxiom("s", sub("A", rhs="X"))), ()),
        "mid": ContextKB((), (DefeasibleAxiom("s", sub("A", rhs="Y")),), ()),
        "low": ContextKB((), (), (Assertion("A", "e"), Assertion("B", "e"), Assertion("Q", "e"))),
    }
    sckr = SCKR(st, kbs)
    r_ovr = ClashingAssumption("r", "low", "e", sub("B", rhs="P"))
    s_x = ClashingAssumption("s", "low", "e", sub("A", rhs="X"))
    s_y = ClashingAssumption("s", "low", "e", sub("A", rhs="Y"))
    one = CASInterpretation(least_model(sckr, [r_ovr, s_x]), make_chi(sckr, [r_ovr, s_x]))
    two = CASInterpretation(least_model(sckr, [r_ovr, s_y]), make_chi(sckr, [r_ovr, s_y]))
    assert mp_compare(one, two, sckr) is Preference.FIRST
    assert mp_compare(two, one, sckr) is Preference.SECOND


def test_enumerate_dog(dog):
    models = enumerate_ckr_models(dog)
    assert len(models) == 1
    assert models[0].assumptions() == {ClashingAssumption("c", "c2", "d", DOG_AXIOM)}


def test_enumerate_without_defaults():
    sckr = SCKR(ContextStructure(("k",), ()), {"k": ContextKB((sub("A", rhs="B"),), (), (Assertion("A", "x"),))})
    models = enumerate_ckr_models(sckr)
    assert len(models) == 1 and not models[0].assumptions()


def test_enumerate_add_noadd_pair():
    st = ContextStructure(("exch", "base"), (("sim", frozenset({("base", "exch")})),))
    kbs = {
        "exch": ContextKB((), (DefeasibleAxiom("sim", sub("Named", rhs="ADD_Car")),
                               DefeasibleAxiom("sim", sub("Named", rhs="NOADD_Car"))), ()),
        "base": ContextKB((sub("ADD_Car", "NOADD_Car", rhs=None),), (), (Assertion("Named", "i1"),)),
    }
    models = enumerate_ckr_models(SCKR(st, kbs))
    assert len(models) == 2
    assert {len(m.assumptions()) for m in models} == {1}


def test_bound(dog):
    with pytest.raises(BoundExceeded):
        enumerate_ckr_models(dog, max_assumptions=0)


@pytest.mark.parametrize("seed", range(25))
def test_models_are_justified_cas_models(seed):
    sckr = random_sckr(random.Random(1000 + seed))
    for m in enumerate_ckr_models(sckr):
        assert check_cas_model(sckr, m)
        assert is_justified(sckr, m)


@pytest.mark.parametrize("seed", range(25))
def test_mp_irreflexive_and_antisymmetric(seed):
    sckr = random_sckr(random.Random(2000 + seed))
    eligible = eligible_assumptions(sckr)
    rng = random.Random(seed)
    cands = []
    for _ in range(6):
        chi = rng.sample(eligible, rng.randint(0, len(eligible)))
        cands.append(CASInterpretation(least_model(sckr, chi), make_chi(sckr, chi)))
    for x in cands:
        assert mp_compare(x, x, sckr) is Preference.NEITHER
        for y in cands:
            fwd, back = mp_compare(x, y, sckr), mp_compare(y, x, sckr)
            flipped = {Preference.FIRST: Preference.SECOND, Preference.SECOND: Preference.FIRST,
                       Preference.NEITHER: Preference.NEITHER}
            assert back is flipped[fwd]


@pytest.mark.parametrize("seed", range(25))
def test_removing_an_assumption_only_grows_its_context(seed):
    sckr = random_sckr(random.Random(3000 + seed))
    eligible = eligible_assumptions(sckr)
    full = least_model(sckr, eligible)
    for a in eligible:
        smaller = least_model(sckr, [b for b in eligible if b != a])
        assert full.per_context[a.context] <= smaller.per_context[a.context]
