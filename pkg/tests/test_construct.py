import pytest
from hypothesis import given, settings, strategies as st

import gen
from hvdc.construct import (associators, companion, companion_identities, conjoint,
                            conjoint_identities, cotabulation, check_tabulation_1d,
                            check_tabulation_2d, horizontal_composite, is_full_and_faithful,
                            is_iso_pair, left_unitor, nullary_restrict, restrict,
                            restriction_as_composite, restriction_pseudofunctoriality,
                            right_unitor, tabulation, tabulation_factor, unit_profunctor)
from hvdc.corpus import chain
from hvdc.fincore import (compose_functors, constant_functor, identity_functor, point,
                          terminal_category)
from hvdc.profcells import (CellFrame, hom_profunctor, horizontal_compose, identity_cell,
                            identity_vertical_cell, make_profunctor, validate_cell,
                            validate_profunctor, vertical_compose)
from hvdc.universal import default_context, is_cocartesian_path

ONE = terminal_category()


def on_point(elems, name):
    return make_profunctor(ONE, ONE, {("*", "*"): elems}, lambda a, u, y: u,
                           lambda x, u, b: u, name=name)


def same_table(J, K):
    return J.elems == K.elems and J.lact == K.lact and J.ract == K.ract


# -------------------------------------------------------------- restriction

def test_restrict_hom_along_constants(two):
    c0 = constant_functor(ONE, two, "0")
    R = restrict(hom_profunctor(two), c0, c0).profunctor
    assert R.elems == {("*", "*"): ("id0",)}


def test_restrict_along_identities(two, rng):
    for _ in range(10):
        J = gen.prof(rng, two, gen.cat(rng))
        R = restrict(J, identity_functor(J.source), identity_functor(J.target)).profunctor
        assert same_table(R, J)


def test_restrict_boundary_mismatch(two, three):
    with pytest.raises(ValueError):
        restrict(hom_profunctor(two), identity_functor(three), identity_functor(two))
    with pytest.raises(ValueError):
        nullary_restrict(hom_profunctor(two), identity_functor(two), identity_functor(two))


def test_companion_and_conjoint_of_pick0(two):
    f = point(two, "0")
    assert companion(f)[0].profunctor.elems == {("*", "0"): ("id0",), ("*", "1"): ("a",)}
    assert conjoint(f)[0].profunctor.elems == {("0", "*"): ("id0",), ("1", "*"): ()}


def test_companion_of_identity_is_unit(cats):
    for C in cats.values():
        assert same_table(companion(identity_functor(C))[0].profunctor, hom_profunctor(C))
        assert same_table(conjoint(identity_functor(C))[0].profunctor, hom_profunctor(C))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_companion_and_conjoint_identities(seed):
    rng = gen.seeded(seed)
    f = gen.retrying(lambda r: gen.fun(r, gen.cat(r, gen.MEDIUM), gen.cat(r, gen.MEDIUM)), rng)
    assert companion_identities(f) == []
    assert conjoint_identities(f) == []


def test_restriction_pseudofunctoriality(rng):
    for _ in range(10):
        A, B, C, D = (gen.cat(rng) for _ in range(4))
        K = gen.prof(rng, C, D)
        f, g = gen.retrying(lambda r: (gen.fun(r, A, C), gen.fun(r, B, D)), rng)
        h, k = gen.retrying(lambda r: (gen.fun(r, gen.cat(r), A), gen.fun(r, gen.cat(r), B)), rng)
        a, b = restriction_pseudofunctoriality(K, f, g, h, k)
        assert same_table(a, b)


# ---------------------------------------------------------------- composites

def test_unit_on_point():
    I, cocart, cart = unit_profunctor(ONE)
    assert I.elems == {("*", "*"): ("id*",)}


def test_unit_identities(cats):
    for C in cats.values():
        I, cocart, cart = unit_profunctor(C)
        assert vertical_compose(cart, [cocart]) == identity_vertical_cell(identity_functor(C))
        assert horizontal_compose(cocart, cart) == identity_cell(I)


def test_composite_over_point_has_no_identifications():
    comp = horizontal_composite([on_point(["a", "b"], "J"), on_point(["c"], "H")])
    assert len(comp.profunctor.at("*", "*")) == 2


def test_hom_composite_on_arrow(two):
    I = hom_profunctor(two)
    comp = horizontal_composite([I, I])
    m = comp.class_map[("0", "1")]
    assert len(set(m.values())) == 1
    assert set(m) == {("0", "id0", "0", "a", "1"), ("0", "a", "1", "id1", "1")}
    assert {k: len(v) for k, v in comp.profunctor.elems.items()} == \
        {k: len(v) for k, v in I.elems.items()}
    _, fwd, bwd = right_unitor(I)
    assert is_iso_pair(fwd, bwd)


def test_composite_errors(two, three):
    with pytest.raises(ValueError):
        horizontal_composite([])
    with pytest.raises(ValueError):
        horizontal_composite([hom_profunctor(two), hom_profunctor(three)])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_unitors_and_associators(seed):
    rng = gen.seeded(seed)
    A = [gen.cat(rng) for _ in range(4)]
    J, H, K = (gen.prof(rng, A[i], A[i + 1]) for i in range(3))
    for unitor in (left_unitor, right_unitor):
        comp, fwd, bwd = unitor(J)
        assert validate_profunctor(comp.profunctor) == []
        assert is_iso_pair(fwd, bwd)
    (_, lf, lb), (_, rf, rb), flat = associators(J, H, K)
    assert is_iso_pair(lf, lb) and is_iso_pair(rf, rb)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_coend_cell_is_cocartesian(seed):
    path = gen.retrying(gen.composite_path, gen.seeded(seed))
    comp = horizontal_composite(path)
    assert validate_cell(comp.cocartesian_cell) == []
    assert is_cocartesian_path(comp.cocartesian_cell, default_context(comp.cocartesian_cell)).holds


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_restriction_as_composite(seed):
    rng = gen.seeded(seed)

    def build(r):
        A, B, C, D = (gen.cat(r) for _ in range(4))
        return gen.prof(r, C, D), gen.fun(r, A, C), gen.fun(r, B, D)

    K, f, g = gen.retrying(build, rng)
    R, comp, to, back = restriction_as_composite(K, f, g)
    assert is_iso_pair(to, back)


# --------------------------------------------------------------- tabulation

def test_tabulation_of_discrete_profunctor():
    tab = tabulation(on_point(["u", "v"], "J"))
    T = tab.category
    assert len(T.objects) == 2 and len(T.morphisms()) == 2


def test_tabulation_of_hom_is_arrow_category(two):
    # arrows id0, a, id1 of the walking arrow with commuting squares: a chain of 3
    tab = tabulation(hom_profunctor(two))
    T = tab.category
    order = sorted(T.objects, key=lambda o: ["⟨0,id0,0⟩", "⟨0,a,1⟩", "⟨1,id1,1⟩"].index(o))
    C3 = chain(3)
    sizes = {(i, j): len(T.hom[(order[i], order[j])]) for i in range(3) for j in range(3)}
    assert sizes == {(i, j): len(C3.hom[(str(i), str(j))]) for i in range(3) for j in range(3)}


def _tabulation_instance(rng):
    A, B, X = gen.cat(rng), gen.cat(rng), gen.cat(rng)
    J = gen.prof(rng, A, B)
    if J.size() == 0:
        raise gen.Retry
    phi = gen.pick(rng, CellFrame((), gen.fun(rng, X, A), gen.fun(rng, X, B), J))
    return J, phi


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_tabulation_universal_properties(seed):
    rng = gen.seeded(seed)
    J, phi = gen.retrying(_tabulation_instance, rng)
    tab = tabulation(J)
    hits = check_tabulation_1d(tab, phi)
    assert len(hits) == 1 and hits[0] == tabulation_factor(tab, phi)
    X = phi.left.source
    ctx = default_context(gen.prof(rng, X, X), L=1)
    assert check_tabulation_2d(tab, ctx, phi, phi) == []
    assert is_cocartesian_path(tab.pi, default_context(tab.pi, J, L=1)).holds


def test_tabulation_factor_needs_empty_source(two):
    tab = tabulation(hom_profunctor(two))
    with pytest.raises(ValueError):
        tabulation_factor(tab, identity_cell(hom_profunctor(two)))


# ------------------------------------------------------------- cotabulation

def test_cotabulation_of_empty_profunctor():
    C, ia, ib, sigma = cotabulation(on_point([], "E"))
    assert len(C.objects) == 2 and len(C.morphisms()) == 2


def test_cotabulation_of_singleton_is_arrow(two):
    C, ia, ib, sigma = cotabulation(on_point(["u"], "J"))
    assert len(C.objects) == 2 and len(C.morphisms()) == 3
    assert sorted(len(v) for v in C.hom.values()) == sorted(len(v) for v in two.hom.values())


def test_cotabulation_counts(rng):
    for _ in range(10):
        A, B = gen.cat(rng, gen.MEDIUM), gen.cat(rng, gen.MEDIUM)
        J = gen.prof(rng, A, B)
        C, ia, ib, sigma = cotabulation(J)
        assert len(C.morphisms()) == len(A.morphisms()) + len(B.morphisms()) + J.size()
        assert is_full_and_faithful(ia) and is_full_and_faithful(ib)
        assert validate_cell(sigma) == []


def test_full_and_faithful(two, cats):
    for C in cats.values():
        assert is_full_and_faithful(identity_functor(C))
    assert is_full_and_faithful(point(two, "0"))
    assert not is_full_and_faithful(constant_functor(two, ONE, "*"))


def test_composite_of_restrictions(two, three):
    f = point(two, "1")
    g = constant_functor(three, two, "1")
    a = restrict(hom_profunctor(two), compose_functors(identity_functor(two), f), f).profunctor
    assert a.elems == {("*", "*"): ("id1",)}
    assert restrict(hom_profunctor(two), g, g).profunctor.size() == 9
