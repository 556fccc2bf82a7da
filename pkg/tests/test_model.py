import pytest
from hypothesis import given, settings, strategies as st

from hodt.lam import enumerate_terms, free, parse
from hodt.model import (DOCUMENTED_FAILURES, Environment, HomotopicModel, ModelError,
                        NonRepresentable, check_axioms, check_enough_points, check_reflexive,
                        closed_corpus, codiscrete_models, discrete_constant_fixture,
                        nerve_enough_points_fixture, one_point_model, soundness_suite,
                        substitution_lemma_suite, two_component_fixture)
from oracles import oracle_eval
from strategies import terms

CODISCRETE3 = list(codiscrete_models(3, sample=8, seed=0))
CORPUS4 = closed_corpus(4)


def test_environment_defaults_and_binding():
    rho = Environment.of({"x": "a"}, "b")
    assert rho("x") == "a" and rho("y") == "b"
    assert rho.bind("y", "a")("y") == "a"
    assert rho.to_json() == {"values": {"x": "a"}, "default": "b"}


@settings(max_examples=150, deadline=None)
@given(terms(("x", "y")), st.integers(0, 7), st.sampled_from("abc"), st.sampled_from("abc"))
def test_interpretation_matches_direct_evaluation(t, k, vx, vy):
    m = CODISCRETE3[k]
    rho = Environment.of({"x": vx, "y": vy}, "a")
    expect = oracle_eval(m, t, {"x": vx, "y": vy}, "a")
    try:
        got = m.interpret(t, rho)
    except NonRepresentable:
        got = None
    assert got == expect


def test_one_point_model():
    m = one_point_model()
    rep = check_axioms(m, CORPUS4)
    assert rep.passed and rep.notes["ext"]["pass"]
    assert check_reflexive(m) == {"reflexive": True, "extensional": True}


def test_codiscrete_models_pass():
    for m in list(codiscrete_models(2))[::37]:
        rep = check_axioms(m, CORPUS4)
        assert rep.passed, rep.failed()
        assert check_reflexive(m) == {"reflexive": True, "extensional": True}


def test_codiscrete_two_vertex_family_is_complete():
    # four endomaps of the 2-point codiscrete complex: F has 4^2 choices, G has 2^4
    assert sum(1 for _ in codiscrete_models(2)) == 256


@pytest.mark.parametrize("make", [discrete_constant_fixture, two_component_fixture])
def test_negative_fixtures_fail_documented_axioms(make):
    m = make()
    rep = check_axioms(m, closed_corpus(6))
    assert rep.failed() == DOCUMENTED_FAILURES[m.name]
    w = rep.verdicts["3"].witnesses[0]
    t = parse(w["term"])
    env, default = w["env"]["values"], w["env"]["default"]
    # replay with the direct evaluator: ⟦t⟧•v and ⟦body⟧[v] land in different components
    f = oracle_eval(m, t, env, default)
    lhs = m.FC.labels[m.F.on_vertex(f)].on_vertex(w["vertex"])
    rhs = oracle_eval(m, t.body, env, default, (w["vertex"],))
    assert (lhs, rhs) == (w["lhs"], w["rhs"])
    assert not m.same(lhs, rhs)


def test_discrete_constant_witness_is_identity_at_a():
    m = discrete_constant_fixture()
    rep = check_axioms(m, closed_corpus(3))
    w = rep.verdicts["3"].witnesses[0]
    assert w["term"] == "\\x.x" and w["vertex"] == "a"
    assert check_reflexive(m) == {"reflexive": False, "extensional": False}


def test_two_component_not_reflexive():
    assert check_reflexive(two_component_fixture())["reflexive"] is False


def test_substitution_lemma_small():
    m = CODISCRETE3[0]
    rep = substitution_lemma_suite(m, max_size=3)
    assert rep.passed and rep.verdicts["substitution"].checked > 100
    with pytest.raises(ValueError):
        substitution_lemma_suite(m, max_size=0)


def test_soundness_and_its_failure_on_a_negative_fixture():
    terms_y = enumerate_terms(5, ("y",))
    good = soundness_suite(CODISCRETE3[0], names=("y",), terms=terms_y)
    assert good.passed and good.notes["classes"] > 0
    bad = discrete_constant_fixture()
    rep = soundness_suite(bad, names=("y",), terms=terms_y, axioms=check_axioms(bad, closed_corpus(3)))
    assert not rep.passed
    assert rep.verdicts["soundness"].witnesses[0]["failed_axioms"] == ["3"]


def test_enough_points_fixture_reports_violation():
    K, pairs = nerve_enough_points_fixture()
    rep = check_enough_points(K, pairs)
    assert not rep.passed


def test_fixture_json_roundtrip_and_errors():
    m = two_component_fixture()
    again = HomotopicModel.from_json(m.to_json())
    assert again.app == m.app
    assert check_axioms(again, closed_corpus(4)).failed() == ["3"]
    with pytest.raises(ModelError):
        HomotopicModel.from_json({"complex": m.K.to_json()})
    broken = m.to_json()
    broken["F"] = {"a": "nope", "b": "nope"}
    with pytest.raises(ModelError):
        HomotopicModel.from_json(broken)


def test_interpretation_rejects_non_vertex_environment():
    m = one_point_model()
    with pytest.raises(ModelError):
        m.interpret(free("x"), Environment.of({"x": "zz"}, "*"))
