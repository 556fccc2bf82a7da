from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hodt.lam import enumerate_terms, free, parse, redexes, render
from hodt.paths import (Bounds, EndpointMismatch, MultiStep, ResourceBoundExceeded, Step, Zigzag,
                        convertible_classes, develop, explore, forward_paths, homotopic,
                        permutation_equivalent, project, residuals, residuals_of, valley_normalize)
from oracles import brute_force_targets, marked_residuals, tiling_homotopic

# terms with at least two redexes, the interesting cases for residual theory
MULTI = [t for t in enumerate_terms(9, ("y",)) if len(redexes(t)) >= 2]
EXAMPLE = parse(r"(\x.(\y.y x) z) v")


def test_multi_redex_pool_is_nonempty():
    assert len(MULTI) > 50


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(MULTI), st.data())
def test_residuals_match_labelling_oracle(t, data):
    rs = redexes(t)
    r = data.draw(st.sampled_from(rs))
    s = data.draw(st.sampled_from(rs))
    assert frozenset(residuals_of(t, r, s)) == marked_residuals(t, r, {s})


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(MULTI), st.data())
def test_development_target_unique(t, data):
    rs = redexes(t)
    chosen = data.draw(st.sets(st.sampled_from(rs), min_size=1))
    target, steps = develop(t, chosen)
    assert brute_force_targets(t, chosen) == {target}
    assert steps[-1].target == target


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(MULTI), st.data())
def test_projection_closes_squares(t, data):
    rs = redexes(t)
    a = MultiStep(t, data.draw(st.sets(st.sampled_from(rs), min_size=1)))
    b = MultiStep(t, data.draw(st.sets(st.sampled_from(rs), min_size=1)))
    ab, ba = project([a], [b]), project([b], [a])
    end1 = ab[-1].target if ab else b.target
    end2 = ba[-1].target if ba else a.target
    assert end1 == end2
    assert permutation_equivalent([a] + ba, [b] + ab)


def test_multistep_residuals_agree_with_single_steps():
    t = EXAMPLE
    both = MultiStep(t, set(redexes(t)))
    assert residuals(both, set(redexes(t))) == frozenset()
    s = Step(t, ())
    assert residuals(s, {redexes(t)[1]}) == frozenset({()})


def test_example_proofs_homotopic():
    p1 = Zigzag.by_ordinals(EXAMPLE, [0, 0])
    p2 = Zigzag.by_ordinals(EXAMPLE, [1, 0])
    assert p1.end == p2.end == parse("z v")
    assert homotopic(p1, p2)
    assert permutation_equivalent(p1.steps, p2.steps)


def test_valley_normalize_cancels_backtracking():
    z = Zigzag.by_ordinals(EXAMPLE, [0])
    back = z.then(z.inverse())
    p, q = valley_normalize(back)
    assert p == [] and q == []


def test_homotopic_rejects_mismatched_endpoints():
    z1 = Zigzag.by_ordinals(EXAMPLE, [0])
    z2 = Zigzag.by_ordinals(EXAMPLE, [1])
    with pytest.raises(EndpointMismatch):
        homotopic(z1, z2)


def test_homotopic_is_bounded_on_divergent_terms():
    omega = parse(r"(\x.x x)(\x.x x)")
    z = Zigzag.by_ordinals(omega, [0])
    assert homotopic(z, z)
    # a loop against the empty proof: no normal form, so only search can decide
    loop = Zigzag(omega, ())
    try:
        verdict = homotopic(z, loop, search_depth=2)
    except ResourceBoundExceeded:
        verdict = None
    assert verdict in (True, None)


def test_step_validation():
    with pytest.raises(Exception):
        Step(EXAMPLE, ("arg",))
    with pytest.raises(Exception):
        Step(EXAMPLE, (), False)


def test_explore_and_exports():
    g = explore([parse("z v")])
    assert len(g.vertices) == 1 and g.edges == [] and not g.truncated
    g = explore([EXAMPLE])
    assert len(g.vertices) == 4 and len(g.edges) == 4
    js = g.to_json()
    assert js["edges"][0]["dir"] == "fwd"
    assert g.to_dot().startswith("digraph")
    omega = explore([parse(r"(\x.x x)(\x.x x)")], Bounds(depth=3))
    assert len(omega.vertices) == 1 and not omega.truncated
    grow = explore([parse(r"(\x.x x x)(\x.x x x)")], Bounds(depth=3, max_vertices=2))
    assert grow.truncated
    with pytest.raises(ValueError):
        Bounds(depth=0)


def test_forward_paths_tile_against_oracle():
    g = explore([EXAMPLE])
    paths = [z for z in forward_paths(g, 0, 3) if z.end == parse("z v")]
    for z1, z2 in combinations(paths, 2):
        assert homotopic(z1, z2) == tiling_homotopic(z1, z2, g)


def test_convertible_classes():
    terms = [parse(r"(\x.x) y"), free("y"), parse(r"(\x.y) z"), free("z")]
    classes, exhausted = convertible_classes(terms, fuel=5)
    as_sets = {frozenset(render(t) for t in c) for c in classes}
    assert frozenset({"(\\x.x) y", "y", "(\\x.y) z"}) in as_sets
    assert not exhausted
