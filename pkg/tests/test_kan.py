import pytest
from hypothesis import given, settings, strategies as st

import gen
import oracles
from hvdc.construct import companion, horizontal_composite, unit_profunctor
from hvdc.corpus import chain
from hvdc.fincore import (FinFunctor, constant_functor, discrete_category, identity_functor,
                          point, terminal_category)
from hvdc.kan import (KanWitness, check_pointwise_lan, cocones, is_dense, is_left_exact,
                      is_weighted_colimit, pointwise_lan, satisfies_left_beck_chevalley,
                      weighted_colimit)
from hvdc.profcells import (CellFrame, enumerate_cells, hom_profunctor, identity_cell,
                            make_profunctor, vertical_compose)
from hvdc.universal import HOLDS_EXACT, default_context, defines_left_kan
from hvdc.yoneda import presheaf_category, presheaf_family

ONE = terminal_category()


def weight(elems):
    return make_profunctor(ONE, ONE, {("*", "*"): elems}, lambda a, u, y: u,
                           lambda x, u, b: u, name="W")


def double(two):
    C3 = chain(3)
    return FinFunctor(two, C3, {"0": "0", "1": "2"},
                      {"id0": "id0", "id1": "id2", "a": C3.hom[("0", "2")][0]}, name="double")


# --------------------------------------------------------- weighted colimits

def test_unit_weight_gives_the_object(two):
    apex, cell = weighted_colimit(weight(["u"]), point(two, "1"))
    assert apex == "1"
    assert cell.comp == {("*", "u", "*"): "id1"}


def test_two_element_weight_on_arrow(two):
    apex, cell = weighted_colimit(weight(["a", "b"]), point(two, "0"))
    assert apex == "0"
    assert set(cell.comp.values()) == {"id0"}


def test_empty_weight(two):
    D = discrete_category(["0", "1"])
    assert weighted_colimit(weight([]), point(D, "0")) is None
    # the walking arrow has an initial object
    assert weighted_colimit(weight([]), point(two, "1"))[0] == "0"


def test_non_universal_cocone(two):
    W = weight(["u"])
    d = point(two, "0")
    assert is_weighted_colimit(W, d, "1", {("*", "u"): "a"}) is not None
    assert is_weighted_colimit(W, d, "0", {("*", "u"): "id0"}) is None


def test_weight_shape_errors(two):
    with pytest.raises(ValueError):
        cocones(hom_profunctor(two), identity_functor(two), "0")
    with pytest.raises(ValueError):
        weighted_colimit(weight(["u"]), identity_functor(two))


# -------------------------------------------------------- pointwise extensions

def test_lan_along_identity_companion(two):
    d = double(two)
    w = pointwise_lan(d, companion(identity_functor(two))[0].profunctor)
    assert w.extension == d
    assert set(w.cell.comp.values()) <= set(d.mor_map.values())
    assert defines_left_kan(w.cell, default_context(w.cell), "weak").verdict == HOLDS_EXACT


def test_lan_of_point_along_its_companion(two):
    # l(y) is the colimit of the column f_*(-, y) = {id0} or {a}, both at 0
    f = point(two, "0")
    w = pointwise_lan(f, companion(f)[0].profunctor)
    assert w.extension.obj_map == {"0": "0", "1": "0"}
    assert w.cell.comp == {("*", "id0", "0"): "id0", ("*", "a", "1"): "id0"}
    assert check_pointwise_lan(w, default_context(w.cell)).holds


def test_empty_column_without_initial_object():
    D = discrete_category(["0", "1"])
    J = make_profunctor(ONE, ONE, {}, None, None, name="E")
    assert pointwise_lan(point(D, "0"), J) is None


def test_perturbed_extension_fails(two):
    f = point(two, "0")
    w = pointwise_lan(f, companion(f)[0].profunctor)
    l2 = constant_functor(two, two, "1")
    cells = enumerate_cells(CellFrame(w.cell.src, w.cell.left, l2, two))
    assert len(cells) == 1
    r = check_pointwise_lan(KanWitness(l2, cells[0]))
    assert not r.holds and r.detail.startswith("column 0")
    assert r.recheck() is not None


def test_check_rejects_mismatched_witness(two):
    f = point(two, "0")
    w = pointwise_lan(f, companion(f)[0].profunctor)
    with pytest.raises(ValueError):
        check_pointwise_lan(KanWitness(identity_functor(two), w.cell))


def test_vertical_pasting_with_unit_cell(two):
    I, cocart, _ = unit_profunctor(two)
    d = double(two)
    w = pointwise_lan(d, I)
    pasted = vertical_compose(w.cell, [identity_cell(I)])
    assert check_pointwise_lan(KanWitness(w.extension, pasted), default_context(pasted)).holds


def _kan_instance(rng):
    A, B = gen.cat(rng, gen.MEDIUM), gen.cat(rng, gen.MEDIUM)
    M = rng.choice(gen.MEDIUM)
    if max(len(X.objects) for X in (A, B, M)) > 3:
        raise gen.Retry
    J = gen.prof(rng, A, B)
    if J.size() > 3:
        raise gen.Retry
    return J, gen.fun(rng, A, M)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_pointwise_lan_matches_brute_force(seed):
    J, d = gen.retrying(_kan_instance, gen.seeded(seed))
    w = pointwise_lan(d, J)
    found = oracles.brute_force_lans(d, J)
    assert (w is None) == (not found)
    if w is not None:
        assert check_pointwise_lan(w).verdict == HOLDS_EXACT
        assert all(oracles.isomorphic(l, w.extension) for l, _ in found)
        assert all(oracles.is_weakly_universal(eta, J, d, l) for l, eta in found)


# ---------------------------------------------------------------- density

def test_identity_is_dense(cats):
    for C in cats.values():
        assert is_dense(identity_functor(C)).holds


def test_constant_is_not_dense(two):
    r = is_dense(constant_functor(two, two, "0"))
    assert not r.holds and "column 1" in r.detail


def test_yoneda_embedding_is_dense_on_family(two):
    P, _, _, y = presheaf_category(two, presheaf_family(two, 3, seed=1))
    assert is_dense(y, default_context(y)).holds


# ----------------------------------------------------------- Beck-Chevalley

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_coend_and_identity_cells_satisfy_bc(seed):
    path = gen.retrying(gen.composite_path, gen.seeded(seed))
    cell = horizontal_composite(path).cocartesian_cell
    assert satisfies_left_beck_chevalley(cell).holds
    assert satisfies_left_beck_chevalley(identity_cell(path[0]), default_context(path[0])).holds


def _bc_instance(rng):
    A, B, C, D = (gen.cat(rng) for _ in range(4))
    J, K = gen.prof(rng, A, B), gen.prof(rng, C, D)
    phi = gen.pick(rng, CellFrame((J,), gen.fun(rng, A, C), gen.fun(rng, B, D), K))
    return phi, gen.fun(rng, C, rng.choice(gen.KAN_TARGETS))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_bc_implies_left_exact(seed):
    phi, d = gen.retrying(_bc_instance, gen.seeded(seed))
    if satisfies_left_beck_chevalley(phi).holds:
        assert is_left_exact(phi, d, default_context(phi, L=1)).holds


def test_bc_failure_on_non_surjective_cell():
    J, K = weight(["u"]), weight(["w1", "w2"])
    fr = CellFrame((J,), identity_functor(ONE), identity_functor(ONE), K)
    r = satisfies_left_beck_chevalley(enumerate_cells(fr)[0])
    assert not r.holds and "1 classes onto 1 of 2" in r.detail


def test_bc_rejects_nullary(two):
    f = point(two, "0")
    w = pointwise_lan(f, companion(f)[0].profunctor)
    with pytest.raises(ValueError):
        satisfies_left_beck_chevalley(w.cell)
