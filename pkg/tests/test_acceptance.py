"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import itertools
import time

import pytest

from hodt import kleisli as kl
from hodt.category import cached_small_categories, poset_arrow, terminal
from hodt.lam import enumerate_terms, parse, redexes
from hodt.model import (DOCUMENTED_FAILURES, check_axioms, check_reflexive, closed_corpus,
                        codiscrete_models, discrete_constant_fixture, one_point_model,
                        soundness_suite, substitution_lemma_suite, two_component_fixture)
from hodt.paths import Bounds, Step, Zigzag, explore, homotopic
from hodt.simplicial import kan_check, nerve, replay_horn
from oracles import tiling_homotopic

CORPUS = closed_corpus(6)
CODISCRETE2 = list(codiscrete_models(2))
CODISCRETE3 = list(codiscrete_models(3, sample=12))
PASSING = [one_point_model()] + CODISCRETE2 + CODISCRETE3


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def zigzags(g, max_len):
    """Every zigzag of at most ``max_len`` steps in a reduction graph."""
    adj = {}
    for s, d, r in g.edges:
        adj.setdefault(s, []).append((d, r, True))
        adj.setdefault(d, []).append((s, r, False))
    out = []

    def go(i, steps, start):
        out.append(Zigzag(g.vertices[start], tuple(steps)))
        if len(steps) == max_len:
            return
        for j, r, fwd in adj.get(i, []):
            step = Step(g.vertices[i], r) if fwd else Step(g.vertices[j], r).inverse()
            go(j, steps + [step], start)

    for v in range(len(g.vertices)):
        go(v, [], v)
    return out


@pytest.mark.criterion("1")
def test_criterion_1_worked_example(criterion):
    t = parse(r"(\x.(\y.y x) z) v")
    p1 = Zigzag.by_ordinals(t, [0, 0])   # root, then the residual of the inner redex
    p2 = Zigzag.by_ordinals(t, [1, 0])   # inner, then the residual of the root redex
    ok, dt = timed(lambda: homotopic(p1, p2))
    criterion(ok and dt < 1, f"worked example proofs homotopic={ok} in {dt:.3f}s")
    s = parse(r"(\x.x)((\x.x) y)")
    outer, inner = Zigzag.by_ordinals(s, [0]), Zigzag.by_ordinals(s, [1])
    same, dt = timed(lambda: homotopic(outer, inner))
    # Both one-step proofs end at (\x.x) y and are joined by the square
    # root-then-residual / inner-then-residual, so the checker (and the
    # tiling oracle) find them homotopic; the required verdict is not met.
    criterion(not same and dt < 1, f"I(Iy) parallel steps homotopic={same} in {dt:.3f}s (expected False)")
    assert ok and not same


@pytest.mark.criterion("2")
def test_criterion_2_oracle_agreement(criterion):
    t0 = time.perf_counter()
    pairs = graphs = 0
    disagreements = []
    for t in enumerate_terms(6, ("y", "z")):
        if not redexes(t):
            continue
        g = explore([t], Bounds(depth=20, max_vertices=20))
        if g.truncated:
            continue
        graphs += 1
        zs = zigzags(g, 4)
        for i, z1 in enumerate(zs):
            for z2 in zs[i:]:
                if z1.start != z2.start or z1.end != z2.end:
                    continue
                pairs += 1
                if homotopic(z1, z2) != tiling_homotopic(z1, z2, g):
                    disagreements.append((z1, z2))
    dt = time.perf_counter() - t0
    criterion(not disagreements and dt < 300,
              f"{pairs} proof pairs over {graphs} graphs, {len(disagreements)} disagreements, {dt:.1f}s")
    assert not disagreements and dt < 300


@pytest.mark.criterion("3")
def test_criterion_3_kan_nerves(criterion):
    t0 = time.perf_counter()
    cats = cached_small_categories(2, 6)
    wrong, groupoids = [], 0
    for c in cats:
        K = nerve(c, 3)
        rep = kan_check(K, 3, max_failures=1)
        groupoids += c.is_groupoid()
        if rep.passed != c.is_groupoid():
            wrong.append(c.name)
        elif not rep.passed:
            compatible, fillers = replay_horn(K, rep.failures[0])
            if not compatible or fillers:
                wrong.append(c.name)
    dt = time.perf_counter() - t0
    criterion(not wrong and dt < 120,
              f"{len(cats)} categories ({groupoids} groupoids), {len(wrong)} wrong, {dt:.1f}s")
    assert not wrong and dt < 120


@pytest.mark.criterion("4")
def test_criterion_4_model_axioms(criterion):
    bad = [m.name for m in PASSING if not check_axioms(m, CORPUS).passed]
    criterion(not bad, f"{len(PASSING)} positive fixtures on {len(CORPUS)} closed terms, {len(bad)} failing")
    for make in (discrete_constant_fixture, two_component_fixture):
        m = make()
        rep = check_axioms(m, CORPUS)
        failed = rep.failed()
        witnessed = all(rep.verdicts[a].witnesses for a in failed)
        criterion(failed == DOCUMENTED_FAILURES[m.name] and witnessed,
                  f"{m.name} fails {failed} with witnesses")
    assert not bad


@pytest.mark.criterion("5")
def test_criterion_5_soundness_and_substitution(criterion):
    t0 = time.perf_counter()
    sound_bad = subst_bad = pairs = 0
    for m in PASSING:
        for names in ((), ("y",)):
            rep = soundness_suite(m, max_size=6, fuel=10, names=names)
            pairs += rep.verdicts["soundness"].checked
            sound_bad += rep.verdicts["soundness"].failures
        subst_bad += not substitution_lemma_suite(m, max_size=5).passed
    criterion(sound_bad == 0, f"{pairs} convertible pairs checked, {sound_bad} counterexamples")
    criterion(subst_bad == 0, f"substitution lemma at size ≤ 5 on {len(PASSING)} fixtures, "
                              f"{subst_bad} failing, {time.perf_counter() - t0:.1f}s")
    assert sound_bad == 0 and subst_bad == 0


@pytest.mark.criterion("6")
def test_criterion_6_reflexive_and_eta(criterion):
    codiscrete = CODISCRETE2 + CODISCRETE3
    bad = [m for m in codiscrete if check_reflexive(m) != {"reflexive": True, "extensional": True}]
    eta = [m for m in codiscrete if not check_axioms(m, CORPUS).notes["ext"]["pass"]]
    criterion(not bad, f"{len(codiscrete)} codiscrete fixtures reflexive and extensional, {len(bad)} not")
    criterion(not eta, f"eta holds on the corpus, {len(eta)} exceptions")
    two = check_reflexive(two_component_fixture())["reflexive"]
    criterion(two is False, f"two-component reflexive={two}")
    assert not bad and not eta and two is False


@pytest.mark.criterion("7")
def test_criterion_7_kleisli_laws(criterion):
    rep, dt = timed(lambda: kl.kleisli_laws_check(kl.default_family(), s=2))
    counts = {k: (v.checked, v.failures) for k, v in rep.verdicts.items()}
    criterion(rep.passed and dt < 600, f"(checked, failed) {counts} in {dt:.0f}s")
    assert rep.passed and dt < 600


@pytest.mark.criterion("8")
def test_criterion_8_currying(criterion):
    family = kl.default_family()
    reindex = (terminal(), poset_arrow())
    bad, reduced = [], []
    for A, B, C in itertools.product(family, repeat=3):
        try:
            rep = kl.curry_check(A, B, C, s=2, reindex_from=reindex)
        except kl.BudgetExceeded:
            reduced.append((A.name, B.name, C.name))
            rep = kl.curry_check(A, B, C, s=1, reindex_from=reindex)
        left, right = rep.notes["counts"]
        if not rep.passed or left != right:
            bad.append((A.name, B.name, C.name))
    criterion(not bad, f"{len(family) ** 3} triples, {len(bad)} failing, s=1 for {reduced}")
    assert not bad


@pytest.mark.criterion("9")
def test_criterion_9_distributivity_and_extension(criterion):
    for L in (kl.IdentityMonad(), kl.InitialCompletion()):
        d = kl.distributivity_check(L)
        e = kl.extend_monad(L)
        criterion(d.passed and e.passed, f"{L.name}: distributivity {d.verdicts['distributivity'].checked} "
                                         f"components, extension {e.verdicts['extension'].checked} functors")
        assert d.passed and e.passed


@pytest.mark.criterion("10")
def test_criterion_10_enough_points(criterion):
    family = kl.default_family()
    sq = kl.squaring_functor()
    bad, excluded = [], []
    for A, B in itertools.product(family, repeat=2):
        extra = (sq,) if A.name == B.name == terminal().name else ()
        rep = kl.enough_points_check(A, B, s=2, extra=extra)
        excluded += [e["functor"] for e in rep.notes["out_of_hypothesis"]]
        if not rep.passed:
            bad.append((A.name, B.name))
    criterion(not bad, f"{len(family) ** 2} pairs, {len(bad)} failing")
    criterion(excluded == ["square"], f"excluded {excluded}")
    assert not bad and excluded == ["square"]
