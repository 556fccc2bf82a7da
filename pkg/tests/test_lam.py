import pytest
from hypothesis import given, strategies as st

from hodt.lam import (App, Lam, LambdaError, ParseError, Var, enumerate_terms, free, free_names,
                      from_json, normalize, parse, redexes, render, size, substitute, to_json)
from oracles import named_text
from strategies import terms


def test_parse_basic_shapes():
    t = parse(r"(\x.(\y.y x) z) v")
    assert isinstance(t, App) and isinstance(t.fn, Lam)
    assert parse("λx.x") == parse(r"\y.y")
    assert parse("a b c") == App(App(free("a"), free("b")), free("c"))
    assert free_names(t) == {"z", "v"}


@pytest.mark.parametrize("bad", ["", "(", r"\x", r"\.x", "a )", "x..", "λ"])
def test_parse_errors_are_located(bad):
    with pytest.raises(ParseError):
        parse(bad)


@given(terms())
def test_render_parse_roundtrip(t):
    assert parse(render(t)) == t


@given(terms())
def test_json_roundtrip(t):
    assert from_json(to_json(t)) == t


def test_from_json_rejects_garbage():
    for bad in [{}, {"var": True}, {"app": [1]}, {"lam": {}}]:
        with pytest.raises(LambdaError):
            from_json(bad)


@given(terms(), terms(), st.sampled_from(["x", "y"]))
def test_substitution_matches_named_oracle(m, n, x):
    expect = parse(named_text(m, {x: named_text(n)}))
    assert substitute(m, x, n) == expect


def test_alpha_equality_ignores_hints():
    assert Lam(Var(0, "a"), "a") == Lam(Var(0, "b"), "b")
    assert hash(Lam(Var(0, "a"), "a")) == hash(Lam(Var(0, "b"), "b"))
    assert parse(r"\x.\y.x") != parse(r"\x.\y.y")


def test_enumeration_counts():
    # closed terms by size: 0, 1, 2, 4, 13, 42 (size counts vars, lambdas and applications)
    closed = enumerate_terms(6)
    counts = [sum(1 for t in closed if size(t) == n) for n in range(1, 7)]
    assert counts == [0, 1, 2, 4, 13, 42]
    assert len(set(closed)) == len(closed)


def test_normalize_and_fuel():
    assert normalize(parse(r"(\x.x) y")) == free("y")
    assert normalize(parse(r"(\x.x x)(\x.x x)"), fuel=5) is None


def test_redexes_leftmost_outermost_order():
    t = parse(r"(\x.(\y.y x) z) v")
    assert redexes(t)[0] == ()
    assert len(redexes(t)) == 2
