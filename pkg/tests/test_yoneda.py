import pytest
from hypothesis import given, settings, strategies as st

import gen
from hvdc.construct import conjoint
from hvdc.fincore import FinFunctor, identity_functor, point, terminal_category
from hvdc.corpus import chain
from hvdc.profcells import hom_profunctor, make_profunctor
from hvdc.yoneda import (PresheafMap, check_presheaf_colimit, curry, empty_presheaf,
                         hom_presheaves, hom_presheaves_via_cells, make_presheaf,
                         presheaf_family, presheaf_from_profunctor, presheaf_restriction,
                         presheaf_to_profunctor, presheaf_weighted_colimit, random_presheaf,
                         validate_presheaf, yoneda_element_map, yoneda_lemma_check,
                         yoneda_object)

ONE = terminal_category()


def same_presheaf(p, q):
    return p.values == q.values and p.action == q.action


def has_iso(p, q):
    return any(t.is_iso() for t in hom_presheaves(p, q).transformations)


def test_representables(one, two, cats):
    y = yoneda_object(one, "*")
    assert y.values == {"*": ("id*",)}
    y1 = yoneda_object(two, "1")
    assert y1.values == {"0": ("a",), "1": ("id1",)}
    for C in cats.values():
        for x in C.objects:
            assert validate_presheaf(yoneda_object(C, x)) == []
    with pytest.raises(KeyError):
        yoneda_object(two, "2")


def test_broken_presheaf_is_reported(two):
    p = make_presheaf(two, {"0": ["g"], "1": ["e"]}, lambda a, e: "g" if a == "a" else e)
    assert validate_presheaf(p) == []
    p.action[("id1", "e")] = "g"
    assert validate_presheaf(p)


def test_hom_sets_of_representables(cats):
    for C in cats.values():
        for x in C.objects:
            y = yoneda_object(C, x)
            h = hom_presheaves(y, y).transformations
            assert len(h) == len(C.hom[(x, x)])
            assert any(all(k[1] == v for k, v in t.comp.items()) for t in h)


def test_hom_from_and_into_empty(two):
    p = yoneda_object(two, "0")
    e = empty_presheaf(two)
    assert len(hom_presheaves(e, p)) == 1
    assert len(hom_presheaves(p, e)) == 0


def test_hom_base_mismatch(one, two):
    with pytest.raises(ValueError):
        hom_presheaves(yoneda_object(one, "*"), yoneda_object(two, "0"))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_two_routes_to_hom_sets(seed):
    rng = gen.seeded(seed)
    A = gen.cat(rng, gen.MEDIUM)
    p, q = random_presheaf(rng, A, 2, "p"), random_presheaf(rng, A, 2, "q")
    if p is None or q is None:
        return
    a = sorted(t.signature() for t in hom_presheaves(p, q).transformations)
    b = sorted(t.signature() for t in hom_presheaves_via_cells(p, q))
    assert a == b


def test_yoneda_lemma_on_arrow(two):
    p = make_presheaf(two, {"0": ["γ"], "1": ["α", "β"]}, lambda a, e: "γ" if a == "a" else e)
    bij, report = yoneda_lemma_check(two, p, "1")
    assert report == [] and len(bij) == 2
    assert len(hom_presheaves(yoneda_object(two, "1"), p)) == 2


def test_yoneda_lemma_empty_value(two):
    p = make_presheaf(two, {"1": ["e"]}, lambda a, e: e)
    assert validate_presheaf(p)   # a has nowhere to send e
    q = make_presheaf(two, {"0": ["g"]}, lambda a, e: e)
    bij, report = yoneda_lemma_check(two, q, "1")
    assert bij == {} and report == []


def test_yoneda_lemma_on_corpus(cats):
    for C in cats.values():
        family = presheaf_family(C, 3, seed=7)
        for p in family + [yoneda_object(C, x) for x in C.objects]:
            for x in C.objects:
                _, report = yoneda_lemma_check(C, p, x)
                assert report == []


def test_element_map_is_natural(two):
    p = yoneda_object(two, "1")
    assert yoneda_element_map(two, p, "1", "id1").is_natural()


# ------------------------------------------------------------------ curry

def test_curry_of_hom_is_yoneda(cats):
    for C in cats.values():
        obj, mor, isos, ok = curry(hom_profunctor(C))
        assert ok
        for x in C.objects:
            assert same_presheaf(obj[x], yoneda_object(C, x))


def test_curry_of_conjoint_is_yoneda_after_f(two):
    C3 = chain(3)
    f = FinFunctor(two, C3, {"0": "0", "1": "2"},
                   {"id0": "id0", "id1": "id2", "a": C3.hom[("0", "2")][0]})
    obj, _, _, ok = curry(conjoint(f)[0].profunctor)
    assert ok
    for x in two.objects:
        assert same_presheaf(obj[x], yoneda_object(C3, f.ob(x)))


def test_curry_on_point():
    J = make_profunctor(ONE, ONE, {("*", "*"): ["a", "b", "c"]}, lambda a, u, y: u,
                        lambda x, u, b: u, name="J")
    obj, _, _, ok = curry(J)
    assert ok and obj["*"].values == {"*": ("a", "b", "c")}


def test_presheaf_profunctor_round_trip(two):
    for p in presheaf_family(two, 4, seed=3):
        assert same_presheaf(presheaf_from_profunctor(presheaf_to_profunctor(p)), p)


# ------------------------------------------------------------ restriction

def test_restriction_examples(two):
    y1 = yoneda_object(two, "1")
    assert same_presheaf(presheaf_restriction(identity_functor(two), y1), y1)
    r = presheaf_restriction(point(two, "0"), y1)
    assert r.values == {"*": ("a",)}


def test_unit_comparison_into_restriction(two):
    C3 = chain(3)
    f = FinFunctor(two, C3, {"0": "0", "1": "2"},
                   {"id0": "id0", "id1": "id2", "a": C3.hom[("0", "2")][0]})
    for x in two.objects:
        target = presheaf_restriction(f, yoneda_object(C3, f.ob(x)))
        src = yoneda_object(two, x)
        m = PresheafMap(src, target, {(s, g): f.mor(g) for s in two.objects
                                      for g in two.hom[(s, x)]})
        assert m.is_natural()


# ------------------------------------------------------- weighted colimits

def test_unit_weight_colimit(two):
    W = make_profunctor(ONE, ONE, {("*", "*"): ["u"]}, lambda a, u, y: u, lambda x, u, b: u)
    p = yoneda_object(two, "1")
    P, cocone = presheaf_weighted_colimit(W, {"*": p}, {"id*": PresheafMap(p, p, {
        k: k[1] for k in [(x, e) for x in two.objects for e in p.at(x)]})})
    assert cocone[("*", "u")].is_iso()


def test_copower_of_singleton(two):
    W = make_profunctor(ONE, ONE, {("*", "*"): ["a", "b"]}, lambda a, u, y: u,
                        lambda x, u, b: u)
    p = make_presheaf(ONE, {"*": ["e"]}, lambda a, e: e)
    ident = PresheafMap(p, p, {("*", "e"): "e"})
    P, cocone = presheaf_weighted_colimit(W, {"*": p}, {"id*": ident})
    assert len(P.at("*")) == 2
    assert check_presheaf_colimit(W, {"*": p}, {"id*": ident}, P, cocone,
                                  [p, P, empty_presheaf(ONE)]) == []


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_colimit_of_representables_is_curry(seed):
    rng = gen.seeded(seed)
    A, B = gen.cat(rng), gen.cat(rng)
    J = gen.prof(rng, A, B)
    reps = {x: yoneda_object(A, x) for x in A.objects}
    maps = {a: PresheafMap(reps[A.dom(a)], reps[A.cod(a)],
                           {(s, n): A.compose(a, n) for s in A.objects for n in A.hom[(s, A.dom(a))]})
            for a in A.morphisms()}
    obj, _, _, _ = curry(J)
    for y in B.objects:
        T = terminal_category()
        W = make_profunctor(A, T, {(x, "*"): J.at(x, y) for x in A.objects},
                            lambda a, u, _: J.lam(a, u, y), lambda x, u, b: u)
        P, cocone = presheaf_weighted_colimit(W, reps, maps)
        assert validate_presheaf(P) == []
        assert has_iso(P, obj[y])
