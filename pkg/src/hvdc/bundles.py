"""The bundled example workspaces, built from the corpus and shipped as JSON."""
from __future__ import annotations

import os

from .construct import companion, conjoint
from .corpus import (chain, chain_max, chain_min, corpus_categories, iso_z2, lax_arrow,
                     small_monoidal_profunctors, thin_lax_functor, truncated_add,
                     z2_monoidal)
from .fincore import (FinFunctor, NatTransformation, compose_functors, constant_functor,
                      identity_functor, point, terminal_category)
from .monoidal import (conjoint_monoidal, doctrinal_right_adjoint, hom_monoidal,
                       identity_lax, make_monoidal_profunctor, thin_monoidal)
from .profcells import hom_profunctor, identity_vertical_cell, make_profunctor
from .workspace import NamedContext, Workspace, dumps, load
from .yoneda import presheaf_family, yoneda_object

DATA = os.path.join(os.path.dirname(__file__), "data")
BUNDLES = ("corpus", "walking_arrow", "z2")


def bundle_path(name):
    return os.path.join(DATA, f"{name}.json")


def load_bundle(name, check=True):
    if name not in BUNDLES:
        raise KeyError(f"no bundled workspace {name!r}")
    return load(bundle_path(name), check=check)


def _thin_functor(A, B, om):
    return FinFunctor(A, B, dict(om),
                      {m: B.hom[(om[A.dom(m)], om[A.cod(m)])][0] for m in A.morphisms()})


def _thin_nat(F, G):
    C = F.target
    return NatTransformation(F, G, {x: C.hom[(F.ob(x), G.ob(x))][0] for x in F.source.objects})


def build_walking_arrow():
    ws = Workspace()
    T = ws.add("categories", "terminal", terminal_category())
    A = ws.add("categories", "walking_arrow", corpus_categories()["walking_arrow"])
    ws.add("profunctors", "I", hom_profunctor(A))
    for x in A.objects:
        ws.add("presheaves", f"y{x}", yoneda_object(A, x))
    for i, p in enumerate(presheaf_family(A, 4, seed=2)):
        ws.add("presheaves", f"p{i}", p)
    ws.add("functors", "id", identity_functor(A))
    ws.add("functors", "pick0", point(A, "0"))
    ws.add("functors", "pick1", point(A, "1"))
    ws.add("functors", "const0", constant_functor(A, A, "0"))
    bang = ws.add("functors", "collapse", constant_functor(A, T, "*"))
    ws.add("profunctors", "I_1", hom_profunctor(T))
    ws.add("functors", "id_1", identity_functor(T))
    comp, _ = companion(ws.get("functors", "pick0"))
    ws.add("profunctors", "pick0_*", comp.profunctor)
    conj, _ = conjoint(ws.get("functors", "pick0"))
    ws.add("profunctors", "pick0^*", conj.profunctor)
    from .profcells import Cell, CellFrame
    I2, I1 = ws.get("profunctors", "I"), ws.get("profunctors", "I_1")
    fr = CellFrame((I2,), bang, bang, I1)
    ws.add("cells", "id_cell_of_noniso", Cell(fr, {k: "id*" for k in fr.keys()}))
    fr = CellFrame((I2,), ws.get("functors", "id"), ws.get("functors", "id"), A)
    ws.add("cells", "cart_I", Cell(fr, {k: k[1] for k in fr.keys()}))
    ws.add("cells", "id_pick0", identity_vertical_cell(ws.get("functors", "pick0")))
    ws.add("contexts", "small", NamedContext([I2], [ws.get("functors", "pick0"),
                                                    ws.get("functors", "pick1")], 2))
    return ws


def build_z2():
    ws = Workspace()
    M = z2_monoidal()
    ws.add("categories", "z2d", M.base)
    ws.add("monoidal", "z2", M)
    for x in M.base.objects:
        ws.add("presheaves", f"y{x}", yoneda_object(M.base, x))
    H = hom_monoidal(M)
    ws.add("profunctors", "I", H.underlying)
    ws.add("monoidal_profunctors", "I", H)
    ws.add("functors", "id", identity_functor(M.base))
    ws.add("lax_functors", "id", identity_lax(M))
    for Jm in small_monoidal_profunctors(M, 1):
        if Jm.underlying.size() == 1:
            ws.add("profunctors", "J1", Jm.underlying)
            ws.add("monoidal_profunctors", "J1", Jm)
            break
    return ws


def build_corpus():
    ws = Workspace()
    cats = corpus_categories()
    cats["chain2"] = chain(2)
    for name, C in sorted(cats.items()):
        ws.add("categories", name, C)
        ws.add("profunctors", f"I_{name}", hom_profunctor(C))
        ws.add("functors", f"id_{name}", identity_functor(C))
        for x in C.objects:
            ws.add("presheaves", f"{name}.y{x}", yoneda_object(C, x))
    T, A = cats["terminal"], cats["walking_arrow"]
    ws.add("functors", "pick0", point(A, "0"))
    ws.add("functors", "pick1", point(A, "1"))
    ws.add("functors", "const0", constant_functor(A, A, "0"))
    bang = ws.add("functors", "collapse", constant_functor(A, T, "*"))
    from .profcells import Cell, CellFrame
    fr = CellFrame((ws.get("profunctors", "I_walking_arrow"),), bang, bang,
                   ws.get("profunctors", "I_terminal"))
    ws.add("cells", "id_cell_of_noniso", Cell(fr, {k: "id*" for k in fr.keys()}))

    # monoidal structures on corpus bases
    structures = {
        "z2": (z2_monoidal(), "discrete2"),
        "chain3+": (truncated_add(3), "chain3"),
        "chain4+": (truncated_add(4), "chain4"),
        "chain2∨": (chain_max(2), "chain2"),
        "chain3∨": (chain_max(3), "chain3"),
        "lax2": (lax_arrow(), "chain2"),
        "isoZ2": (iso_z2(), "walking_iso"),
    }
    Ms = {}
    for name, (M, base) in structures.items():
        M.base = ws.get("categories", base)
        Ms[name] = ws.add("monoidal", name, M)
        ws.add("monoidal_profunctors", f"I_{M.base.name}@{name}", _rebase_hom(ws, M, base))
    # a strong monoidal functor and its lax right adjoint
    c2, c3 = ws.get("categories", "chain2"), ws.get("categories", "chain3")
    f = ws.add("functors", "double", _thin_functor(c2, c3, {"0": "0", "1": "2"}))
    g = ws.add("functors", "half", _thin_functor(c3, c2, {"0": "0", "1": "0", "2": "1"}))
    fl = thin_lax_functor(f, Ms["chain2∨"], Ms["chain3+"], "lax")
    fl.flavor = "pseudo"
    ws.add("lax_functors", "double", fl)
    unit = ws.add("nats", "double_unit", _thin_nat(identity_functor(c2), compose_functors(g, f)))
    counit = ws.add("nats", "double_counit", _thin_nat(compose_functors(f, g), identity_functor(c3)))
    ws.add("functors", "half∘double", unit.target)
    ws.add("functors", "double∘half", counit.source)
    from .workspace import Adjunction
    ws.add("adjunctions", "double_half", Adjunction(fl, g, unit, counit))
    ws.add("lax_functors", "half", doctrinal_right_adjoint(fl, g, unit, counit))
    Jc = conjoint_monoidal(fl)
    ws.add("profunctors", "double^*", Jc.underlying)
    ws.add("monoidal_profunctors", "double^*", Jc)
    for name in ("chain2∨", "chain3+"):
        ws.add("lax_functors", f"id@{name}", identity_lax(Ms[name]))
    # a Kan extension the tensor does not preserve
    T = ws.get("categories", "terminal")
    MT = ws.add("monoidal", "trivial", thin_monoidal(T, lambda xs: "*"))
    Mmin = chain_min(2)
    Mmin.base = c2
    Mmin = ws.add("monoidal", "chain2∧", Mmin)
    J = ws.add("profunctors", "at1", make_profunctor(T, c2, {("*", "1"): ["u"]},
                                                      lambda a, u, y: u, lambda x, u, b: u))
    ws.add("monoidal_profunctors", "at1", make_monoidal_profunctor(J, MT, Mmin, lambda ts: "u"))
    ws.add("functors", "pick1@chain2", point(c2, "1"))
    ws.add("lax_functors", "pick1@chain2∨",
           thin_lax_functor(ws.get("functors", "pick1@chain2"), MT, Ms["chain2∨"], "lax"))
    return ws


def _rebase_hom(ws, M, base):
    Hm = hom_monoidal(M)
    name = f"I_{base}"
    Hm.underlying = ws.get("profunctors", name)
    return Hm


BUILDERS = {"corpus": build_corpus, "walking_arrow": build_walking_arrow, "z2": build_z2}


def write_bundles():
    os.makedirs(DATA, exist_ok=True)
    for name, build in BUILDERS.items():
        with open(bundle_path(name), "w", encoding="utf-8") as fh:
            fh.write(dumps(build()))


if __name__ == "__main__":
    write_bundles()
