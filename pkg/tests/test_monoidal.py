import pytest

from hvdc.bundles import load_bundle
from hvdc.corpus import (chain_max, chain_min, iso_z2, lax_arrow, small_monoidal_profunctors,
                         thin_lax_functor, truncated_add, z2_monoidal)
from hvdc.fincore import (FinFunctor, NatTransformation, compose_functors, constant_functor,
                          identity_functor, terminal_category)
from hvdc.kan import pointwise_lan
from hvdc.monoidal import (LaxMonoidalFunctor, adjunction_t_cells, conjoint_monoidal,
                           day_assoc_isos, day_convolution, day_unit_iso, day_unit_iso_right,
                           doctrinal_right_adjoint, hom_monoidal, identity_lax,
                           invert_compositors, kan_t_cell_check, lift_lax_structure_on_kan,
                           monoidal_beck_chevalley, monoidal_curry, monoidal_yoneda_check,
                           shapes2, thin_monoidal, validate_lax_functor, validate_monoidal,
                           validate_monoidal_profunctor, ybar, yoneda_monoidal_structure)
from hvdc.yoneda import compose_maps, identity_map, presheaf_family, yoneda_object


@pytest.fixture(scope="module")
def Z():
    return z2_monoidal()


@pytest.fixture(scope="module")
def corpus_ws():
    return load_bundle("corpus")


def thin_functor(A, B, om):
    return FinFunctor(A, B, dict(om),
                      {m: B.hom[(om[A.dom(m)], om[A.cod(m)])][0] for m in A.morphisms()})


def thin_nat(F, G):
    return NatTransformation(F, G, {x: F.target.hom[(F.ob(x), G.ob(x))][0]
                                    for x in F.source.objects})


def thin_adjunction(MA, MC, fo, go):
    f, g = thin_functor(MA.base, MC.base, fo), thin_functor(MC.base, MA.base, go)
    fl = thin_lax_functor(f, MA, MC, "lax")
    fl.flavor = "pseudo"
    unit = thin_nat(identity_functor(MA.base), compose_functors(g, f))
    counit = thin_nat(compose_functors(f, g), identity_functor(MC.base))
    return fl, g, unit, counit


def is_iso(m):
    return m is not None and m.is_iso() and m.is_natural()


# --------------------------------------------------------------- structures

def test_corpus_structures_validate():
    for M in (z2_monoidal(), truncated_add(4), chain_max(3), chain_min(2), lax_arrow(), iso_z2()):
        assert validate_monoidal(M) == []
        assert validate_lax_functor(identity_lax(M)) == []


def test_shapes_count():
    # compositions of at most 2 leaves into at most 2 groups
    assert set(shapes2(2)) == {(), (0,), (1,), (2,), (0, 0), (0, 1), (1, 0), (1, 1), (0, 2),
                               (2, 0)}


def test_mistyped_associator_is_named():
    M = chain_max(2)
    M.assoc[((2,), ("0", "1"))] = "a"
    v = validate_monoidal(M)
    assert v == ["𝔞 at shape (2,), leaves ('0', '1') mistyped"]


def test_lax_functor_violations():
    M = truncated_add(3)
    F = identity_lax(M)
    comp = dict(F.comp)
    comp[("1", "1")] = "id1"
    v = validate_lax_functor(LaxMonoidalFunctor(F.underlying, M, M, comp))
    assert v == ["compositor at ('1', '1') mistyped"]


def test_pseudo_with_non_invertible_compositor():
    # constant at the top of 0 < 1: lax, not colax, not pseudo
    M = chain_max(2)
    top = constant_functor(M.base, M.base, "1")
    assert thin_lax_functor(top, M, M, "colax") is None
    F = thin_lax_functor(top, M, M, "lax")
    assert F is not None and validate_lax_functor(F) == []
    F.flavor = "pseudo"
    assert validate_lax_functor(F) == ["pseudo functor with a non-invertible compositor"]


# ----------------------------------------------------------- Day convolution

def test_day_on_z2(Z):
    A = Z.base
    d = day_convolution(Z, [yoneda_object(A, "0"), yoneda_object(A, "1")])
    assert len(d.presheaf.at("0")) == 0 and len(d.presheaf.at("1")) == 1
    _, fwd, bwd = ybar(Z, ("0", "1"), d)
    assert is_iso(fwd) and fwd.target.values == yoneda_object(A, "1").values


def test_nullary_day_is_unit_representable(Z):
    e = day_convolution(Z, [])
    assert [len(e.presheaf.at(x)) for x in Z.base.objects] == [1, 0]


def test_day_arity_bound(Z):
    y = yoneda_object(Z.base, "0")
    with pytest.raises(ValueError):
        day_convolution(Z, [y] * 4)


def test_ybar_unary_is_identity_for_strict(Z):
    for x in Z.base.objects:
        prod, fwd, bwd = ybar(Z, (x,))
        assert all(prod.rep(c)[0] == v for (_, c), v in fwd.comp.items())


def test_ybar_on_z2_pair(Z):
    prod, fwd, bwd = ybar(Z, ("1", "1"))
    assert fwd.target.values == yoneda_object(Z.base, "0").values
    assert is_iso(fwd)


@pytest.mark.parametrize("M", [z2_monoidal(), truncated_add(4)], ids=["z2", "chain4+"])
def test_yoneda_structure_is_coherent(M):
    isos, report = yoneda_monoidal_structure(M)
    assert report == []


@pytest.mark.parametrize("M", [z2_monoidal(), truncated_add(4)], ids=["z2", "chain4+"])
def test_day_unit_and_associativity(M):
    A = M.base
    family = presheaf_family(A, 4, seed=5, max_size=2) + [yoneda_object(A, x) for x in A.objects]
    for p in family:
        for iso in (day_unit_iso, day_unit_iso_right):
            _, m = iso(M, p)
            assert is_iso(m)
    for p, q, r in [(family[0], family[1], family[2]), (family[-1], family[0], family[-2])]:
        left, right, flat = day_assoc_isos(M, p, q, r)
        assert is_iso(left) and is_iso(right)
        assert compose_maps(left.inverse(), left) == identity_map(left.source)


# ---------------------------------------------------------- monoidal Yoneda

def test_hom_profunctor_curry_is_ybar(Z):
    H = hom_monoidal(Z)
    data = monoidal_curry(H)
    assert data.all_invertible() and data.report == []
    assert monoidal_beck_chevalley(H).holds


def test_conjoint_of_strong_functor_satisfies_bc(corpus_ws):
    Jm = corpus_ws.get("monoidal_profunctors", "double^*")
    assert validate_monoidal_profunctor(Jm) == []
    data = monoidal_curry(Jm)
    assert data.all_invertible()
    assert monoidal_beck_chevalley(Jm).holds
    assert monoidal_yoneda_check(Jm, data) == []


def test_conjoint_needs_lax(corpus_ws):
    f = corpus_ws.get("lax_functors", "double")
    colax = LaxMonoidalFunctor(f.underlying, f.src, f.tgt, f.comp, "colax")
    with pytest.raises(ValueError):
        conjoint_monoidal(colax)


def test_smallest_non_bc_profunctor(Z):
    # exhaustive over at most two elements; the first failure has one element
    found = None
    for Jm in small_monoidal_profunctors(Z, 2):
        if not monoidal_beck_chevalley(Jm).holds:
            found = Jm
            break
    assert found is not None and found.underlying.size() == 1
    assert found.underlying.at("0", "0")
    r = monoidal_beck_chevalley(found)
    assert r.detail.startswith("arity 2: comparison at (0,⟨1,1⟩)")
    assert not monoidal_curry(found).all_invertible()


def test_bc_verdict_equals_invertibility(Z):
    count = 0
    for Jm in small_monoidal_profunctors(Z, 2):
        data = monoidal_curry(Jm)
        assert data.report == []
        assert monoidal_yoneda_check(Jm, data) == []
        assert monoidal_beck_chevalley(Jm).holds == data.all_invertible()
        count += 1
    assert count == 8


# ------------------------------------------------------ doctrinal adjunction

def test_identity_adjunction(Z):
    idl = identity_lax(Z)
    idn = NatTransformation(idl.underlying, idl.underlying,
                            {x: Z.base.id(x) for x in Z.base.objects})
    g = doctrinal_right_adjoint(idl, idl.underlying, idn, idn)
    assert all(m == Z.base.id(Z.t(xs)) for xs, m in g.comp.items())


def test_swap_equivalence_lifts_to_pseudo():
    W = iso_z2()
    fl, g, unit, counit = thin_adjunction(W, W, {"0": "1", "1": "0"}, {"0": "1", "1": "0"})
    glax = doctrinal_right_adjoint(fl, g, unit, counit)
    assert validate_lax_functor(glax) == []
    assert adjunction_t_cells(fl, glax, unit, counit) == []
    assert invert_compositors(glax) is not None


@pytest.mark.parametrize("case", ["double", "inclusion", "terminal"])
def test_adjunctions_lift(case):
    MT = thin_monoidal(terminal_category(), lambda xs: "*")
    fl, g, unit, counit = {
        "double": lambda: thin_adjunction(chain_max(2), truncated_add(3),
                                          {"0": "0", "1": "2"}, {"0": "0", "1": "0", "2": "1"}),
        "inclusion": lambda: thin_adjunction(chain_max(2), chain_max(3),
                                             {"0": "0", "1": "1"}, {"0": "0", "1": "1", "2": "1"}),
        "terminal": lambda: thin_adjunction(chain_max(2), MT, {"0": "*", "1": "*"}, {"*": "1"}),
    }[case]()
    assert validate_lax_functor(fl) == []
    glax = doctrinal_right_adjoint(fl, g, unit, counit)
    assert validate_lax_functor(glax) == []
    assert adjunction_t_cells(fl, glax, unit, counit) == []


def test_doctrinal_rejects_lax_left_adjoint():
    M = chain_max(2)
    A = M.base
    F = thin_lax_functor(constant_functor(A, A, "1"), M, M, "lax")
    idn = thin_nat(identity_functor(A), identity_functor(A))
    with pytest.raises(ValueError, match="not pseudo"):
        doctrinal_right_adjoint(F, identity_functor(A), idn, idn)


def test_doctrinal_rejects_non_adjunction():
    fl, g, unit, counit = thin_adjunction(chain_max(2), truncated_add(3),
                                          {"0": "0", "1": "2"}, {"0": "0", "1": "0", "2": "1"})
    bad = thin_functor(g.source, g.target, {"0": "1", "1": "1", "2": "1"})
    u = thin_nat(identity_functor(fl.src.base), compose_functors(bad, fl.underlying))
    c = NatTransformation(compose_functors(fl.underlying, bad), identity_functor(g.source),
                          {"0": None, "1": None, "2": None})
    with pytest.raises((ValueError, KeyError)):
        doctrinal_right_adjoint(fl, bad, u, c)


# ------------------------------------------------------------- Kan lifting

LIFTS = [("corpus", "double", "I_chain2@chain2∨"), ("corpus", "half", "double^*"),
         ("corpus", "id@chain3+", "double^*"), ("corpus", "id@chain2∨", "I_chain2@chain2∨"),
         ("corpus", "id@chain3+", "I_chain3@chain3+"), ("z2", "id", "I")]


@pytest.mark.parametrize("bundle,d,J", LIFTS)
def test_lift_on_kan(bundle, d, J):
    ws = load_bundle(bundle)
    d, Jm = ws.get("lax_functors", d), ws.get("monoidal_profunctors", J)
    w = pointwise_lan(d.underlying, Jm.underlying)
    res = lift_lax_structure_on_kan(d, w, Jm)
    assert res.functor is not None, res.detail
    assert validate_lax_functor(res.functor) == []
    assert kan_t_cell_check(d, res.functor, w, Jm) == []


def test_lift_along_unit_recovers_d(corpus_ws):
    d = corpus_ws.get("lax_functors", "double")
    Jm = corpus_ws.get("monoidal_profunctors", "I_chain2@chain2∨")
    w = pointwise_lan(d.underlying, Jm.underlying)
    res = lift_lax_structure_on_kan(d, w, Jm)
    assert w.extension == d.underlying
    assert res.functor.comp == d.comp


def test_lift_declines_without_preservation(corpus_ws):
    d = corpus_ws.get("lax_functors", "pick1@chain2∨")
    Jm = corpus_ws.get("monoidal_profunctors", "at1")
    w = pointwise_lan(d.underlying, Jm.underlying)
    assert w is not None
    res = lift_lax_structure_on_kan(d, w, Jm)
    assert res.functor is None
    assert res.failed_hypothesis == "preservation (p)"
    assert "y̲ = ('0', '1')" in res.detail
