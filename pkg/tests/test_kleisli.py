import pytest
from hypothesis import given, settings, strategies as st

from hodt.category import (cyclic_group, discrete, empty_category, idempotent_monoid, poset_arrow,
                           terminal)
from hodt import kleisli as kl
from oracles import coend_size

T, ARROW, Z2, IDEM, DISC = terminal(), poset_arrow(), cyclic_group(2), idempotent_monoid(), discrete()
SMALL = [empty_category(), T, ARROW, DISC, Z2, IDEM]


def test_yoneda_sizes():
    assert kl.yoneda(ARROW, 0).sizes == (1, 0)
    assert kl.yoneda(ARROW, 1).sizes == (1, 1)
    assert kl.yoneda(DISC, "x").sizes == (1, 0)
    assert kl.yoneda(Z2, "*").sizes == (2,)
    for C in SMALL:
        for a in C.objects:
            kl.yoneda(C, a).validate()
        for u in C.morphisms:
            kl.yoneda_mor(C, u).validate()
        kl.yoneda_functor(C).validate()


@pytest.mark.parametrize("C,expected", [(T, 3), (ARROW, 8), (DISC, 9), (Z2, 4), (IDEM, 4),
                                        (empty_category(), 1)])
def test_presheaf_counts_up_to_iso(C, expected):
    assert len(kl.presheaves(C, 2)) == expected


def test_labelled_presheaf_count_on_arrow():
    # X(1) -> X(0) is any function n1 -> n0: sum of n0^n1 over 0 <= n0, n1 <= 2
    assert len(kl.presheaves(ARROW, 2, up_to_iso=False)) == sum(n0 ** n1 for n0 in range(3) for n1 in range(3))


def test_presheaf_validation_catches_errors():
    with pytest.raises(kl.KleisliError):
        kl.Presheaf(Z2, (2,), ((0, 1), (0, 0))).validate()  # generator not an involution
    X = kl.Presheaf(ARROW, (2, 1), ((0, 1), (0,), (1,)))
    X.validate()
    Y = kl.Presheaf(ARROW, (2, 1), ((0, 1), (0,), (0,)))
    bad = kl.PMor(X, Y, ((0, 1), (0,)))
    with pytest.raises(kl.KleisliError):
        bad.validate()
    assert kl.find_iso(X, Y) is not None
    assert kl.find_iso(X, kl.constant_presheaf(ARROW, 1)) is None


def _pf_and_x():
    return st.sampled_from([(A, B) for A in SMALL[1:] for B in SMALL[1:]]).flatmap(
        lambda AB: st.tuples(st.just(AB[0]), st.just(AB[1]),
                             st.sampled_from(kl.pfunctors(AB[0], AB[1], 2)),
                             st.sampled_from(kl.presheaves(AB[0], 2))))


@settings(max_examples=150, deadline=None)
@given(_pf_and_x())
def test_extension_matches_coend_oracle(case):
    A, B, f, X = case
    value = kl.lan_extend(f, X)
    value.presheaf.validate()
    for b in B.objects:
        assert value.presheaf.size(b) == coend_size(f, X, b)


def test_extension_along_terminal_is_a_copower():
    for f in kl.pfunctors(T, ARROW, 2):
        for X in kl.presheaves(T, 2):
            got = kl.lan_extend(f, X).presheaf
            assert got.sizes == tuple(X.sizes[0] * n for n in f.obj[0].sizes)


def test_extension_budget():
    f = kl.pfunctors(T, T, 2)[-1]
    with pytest.raises(kl.BudgetExceeded):
        kl.lan_extend(f, kl.constant_presheaf(T, 2), budget=2)


def test_laws_on_a_small_family():
    rep = kl.kleisli_laws_check([T, ARROW, Z2], s=2)
    assert rep.passed
    assert {k: v.failures for k, v in rep.verdicts.items()} == {"yoneda": 0, "unit": 0, "assoc": 0}
    assert rep.verdicts["assoc"].checked > 1000


def test_kleisli_composition_with_identity():
    for f in kl.pfunctors(ARROW, Z2, 2)[:20]:
        h = kl.kleisli_compose(kl.yoneda_functor(Z2), f)
        h.validate()
        assert kl.natural_iso(h, f) is not None


@pytest.mark.parametrize("A,B,C", [(T, T, ARROW), (ARROW, T, ARROW), (T, ARROW, T), (Z2, ARROW, T),
                                   (DISC, T, Z2), (T, Z2, IDEM)])
def test_curry_roundtrips(A, B, C):
    rep = kl.curry_check(A, B, C, s=2, reindex_from=(T, ARROW))
    assert rep.passed, rep.failed()
    left, right = rep.notes["counts"]
    assert left == right > 0


def test_monads():
    L = kl.InitialCompletion()
    assert L.apply(ARROW) is ARROW
    LZ = L.apply(Z2)
    assert len(LZ.objects) == 2 and len(LZ.morphisms) == 4
    assert LZ.initial_objects() == [kl.BOTTOM]
    assert L.apply(LZ) is LZ
    for M in (kl.IdentityMonad(), L):
        assert kl.monad_laws_check(M).passed


def test_distributivity_and_extension():
    for M in (kl.IdentityMonad(), kl.InitialCompletion()):
        assert kl.distributivity_check(M).passed
        assert kl.extend_monad(M).passed


def test_plain_presheaves_break_distributivity_at_bottom():
    rep = kl.distributivity_check(kl.InitialCompletion(), reflect=False)
    v = rep.verdicts["distributivity"]
    failing = sorted(w["A"] for w in v.witnesses)
    assert failing == sorted(["0", "x+y", "Z/2", "Idem"])
    assert all(w["object"] == kl.BOTTOM and w["left_sizes"][-1] == 0 for w in v.witnesses)


def test_colimit_helpers():
    X = kl.yoneda(ARROW, 1)
    S, inl, inr = kl.coproduct(X, X)
    S.validate(), inl.validate(), inr.validate()
    assert S.sizes == (2, 2)
    ident = kl.identity_pmor(X)
    Q, q = kl.coequalizer(ident, ident)
    assert Q.sizes == X.sizes and q.is_iso()
    swap = kl.PMor(S, S, ((1, 0), (1, 0)))
    swap.validate()
    Q, q = kl.coequalizer(kl.identity_pmor(S), swap)
    assert Q.sizes == (1, 1)


def test_extensions_preserve_generating_colimits():
    for A in (T, ARROW, Z2):
        for f in kl.pfunctors(A, T, 2)[:6]:
            ok, why = kl.preserves_colimits(kl.from_extension(f), 2, limit_pairs=300)
            assert ok, why


def test_enough_points_and_the_excluded_squaring_functor():
    sq = kl.squaring_functor()
    rep = kl.enough_points_check(T, T, s=2, extra=(sq,))
    assert rep.passed
    (excluded,) = rep.notes["out_of_hypothesis"]
    assert excluded["functor"] == "square" and excluded["reason"]["colimit"] == "coproduct"
    # the squaring functor agrees with the identity on the representable but not on 2
    y = kl.yoneda(T, "*")
    assert sq.on_obj(y).sizes == y.sizes
    assert sq.on_obj(kl.constant_presheaf(T, 2)).sizes == (4,)
    for A, B in [(ARROW, T), (Z2, DISC), (ARROW, ARROW)]:
        assert kl.enough_points_check(A, B, s=2).passed


def test_witness_domain_excludes_functors_that_ignore_initial_objects():
    L = kl.InitialCompletion()
    fs = kl.pfunctors(ARROW, T, 1)
    inside = [f for f in fs if L.in_domain(f)]
    assert 0 < len(inside) < len(fs)
    assert all(f.at(0).total == 0 for f in inside)
    assert all(kl.IdentityMonad().in_domain(f) for f in fs)


def test_co_kleisli_reindexing_roundtrips():
    for M in (kl.IdentityMonad(), kl.InitialCompletion()):
        for A in (ARROW, Z2):
            rep = kl.co_kleisli_curry_check(M, A, T, ARROW, s=1)
            assert rep.passed and rep.verdicts["round-trip"].checked > 0
