"""Finite presheaves, their hom-sets, the yoneda embedding and curry.

The presheaf category is never materialised; statements about it are made
relative to explicitly supplied finite families of presheaves.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .fincore import (Budget, EnumerationLimit, FinCategory, FinFunctor,
                      identity_functor, quotient, terminal_category, tup)
from .profcells import CellFrame, enumerate_cells, make_profunctor


@dataclass(eq=False)
class Presheaf:
    base: FinCategory
    values: dict     # x -> tuple of atoms
    action: dict     # (a, e) -> e', a: x' → x and e ∈ p(x)
    name: str = ""

    def __post_init__(self):
        self.values = {x: tuple(sorted(self.values.get(x, ()))) for x in self.base.objects}

    def __eq__(self, other):
        if self is other:
            return True
        return (self.base == other.base and self.values == other.values
                and self.action == other.action)

    __hash__ = object.__hash__

    def __repr__(self):
        sizes = ",".join(str(len(self.values[x])) for x in self.base.objects)
        return f"Presheaf({self.name or '?'}: [{sizes}])"

    def __call__(self, a, e):
        return self.action[(a, e)]

    def at(self, x):
        return self.values[x]

    def size(self):
        return sum(len(v) for v in self.values.values())


def make_presheaf(A, values, act, name=""):
    p = Presheaf(A, dict(values), {}, name)
    for x in A.objects:
        for e in p.values[x]:
            for a in A.into(x):
                p.action[(a, e)] = act(a, e)
    return p


def validate_presheaf(p):
    A = p.base
    v = []
    for x in A.objects:
        for e in p.at(x):
            for a in A.into(x):
                if p.action.get((a, e)) not in p.at(A.dom(a)):
                    v.append(f"action of {a} on {e} missing or mistyped")
    if v:
        return v
    for x in A.objects:
        for e in p.at(x):
            if p(A.id(x), e) != e:
                v.append(f"identity {A.id(x)} acts non-trivially on {e}")
            for a in A.into(x):
                for a2 in A.into(A.dom(a)):
                    if p(a2, p(a, e)) != p(A.compose(a, a2), e):
                        v.append(f"functoriality fails at ({a2},{a},{e})")
    return v


def presheaf_to_profunctor(p):
    T = terminal_category()
    return make_profunctor(p.base, T, {(x, "*"): p.at(x) for x in p.base.objects},
                           lambda a, u, y: p(a, u), lambda x, u, b: u, name=p.name)


def presheaf_from_profunctor(J, y=None, name=None):
    """The column J(−, y) as a presheaf."""
    if y is None:
        y = J.target.objects[0]
    return make_presheaf(J.source, {x: J.at(x, y) for x in J.source.objects},
                         lambda a, e: J.lam(a, e, y), name=name or f"{J.name}(-,{y})")


def yoneda_object(A, x):
    if x not in A.objects:
        raise KeyError(f"unknown object {x}")
    return make_presheaf(A, {s: A.hom[(s, x)] for s in A.objects},
                         lambda a, m: A.compose(m, a), name=f"y{x}")


def empty_presheaf(A):
    return make_presheaf(A, {}, None, name="∅")


# ------------------------------------------------------------------- maps

@dataclass(eq=False)
class PresheafMap:
    source: Presheaf
    target: Presheaf
    comp: dict       # (x, e) -> e'

    def __eq__(self, other):
        return (self.comp == other.comp and self.source == other.source
                and self.target == other.target)

    __hash__ = object.__hash__

    def __call__(self, x, e):
        return self.comp[(x, e)]

    def signature(self):
        return tuple(sorted(self.comp.items()))

    def is_natural(self):
        A = self.source.base
        for x in A.objects:
            for e in self.source.at(x):
                if self.comp.get((x, e)) not in self.target.at(x):
                    return False
                for a in A.into(x):
                    if self(A.dom(a), self.source(a, e)) != self.target(a, self(x, e)):
                        return False
        return True

    def is_iso(self):
        A = self.source.base
        for x in A.objects:
            img = [self(x, e) for e in self.source.at(x)]
            if len(set(img)) != len(img) or set(img) != set(self.target.at(x)):
                return False
        return True

    def inverse(self):
        if not self.is_iso():
            return None
        return PresheafMap(self.target, self.source,
                           {(x, v): e for (x, e), v in self.comp.items()})


def identity_map(p):
    return PresheafMap(p, p, {(x, e): e for x in p.base.objects for e in p.at(x)})


def compose_maps(beta, alpha):
    """β∘α"""
    return PresheafMap(alpha.source, beta.target,
                       {(x, e): beta(x, v) for (x, e), v in alpha.comp.items()})


@dataclass
class PresheafHomSet:
    source: Presheaf
    target: Presheaf
    transformations: list

    def __len__(self):
        return len(self.transformations)


def hom_presheaves(p, q, budget=None):
    """All natural transformations p ⇒ q, by backtracking over objects."""
    if p.base != q.base:
        raise ValueError("base mismatch")
    budget = budget or Budget("hom_presheaves")
    A = p.base
    keys = [(x, e) for x in A.objects for e in p.at(x)]
    pos = {k: i for i, k in enumerate(keys)}
    # naturality pairs (k, k2, a): α(k2) = q(a, α(k)) with k2 = (x', p(a, e))
    checks = {k: [] for k in keys}
    for (x, e) in keys:
        for a in A.into(x):
            k2 = (A.dom(a), p(a, e))
            later = (x, e) if pos[(x, e)] >= pos[k2] else k2
            checks[later].append(((x, e), k2, a))
    out = []
    val = {}

    def rec(i):
        if i == len(keys):
            out.append(PresheafMap(p, q, dict(val)))
            return
        k = keys[i]
        for v in q.at(k[0]):
            budget.tick()
            val[k] = v
            if all(val[k2] == q(a, val[k1]) for k1, k2, a in checks[k]):
                rec(i + 1)
            del val[k]

    rec(0)
    return PresheafHomSet(p, q, out)


def hom_presheaves_via_cells(p, q):
    """Second, independent route: identity-vertical cells P ⇒ Q between the
    presheaves viewed as profunctors into 𝟙."""
    P, Q = presheaf_to_profunctor(p), presheaf_to_profunctor(q)
    fr = CellFrame((P,), identity_functor(P.source), identity_functor(P.target), Q)
    return [PresheafMap(p, q, {(k[0], k[1]): v for k, v in c.comp.items()})
            for c in enumerate_cells(fr)]


# ------------------------------------------------------------------ Yoneda

def yoneda_element_map(A, p, x, u):
    """The natural family y x ⇒ p sending m: s → x to p(m)(u)."""
    return PresheafMap(yoneda_object(A, x), p,
                       {(s, m): p(m, u) for s in A.objects for m in A.hom[(s, x)]})


def yoneda_lemma_check(A, p, x):
    """Bijection p(x) → hom(y x, p); returns (dict u -> map, report)."""
    report = []
    yx = yoneda_object(A, x)
    homs = hom_presheaves(yx, p)
    bij = {u: yoneda_element_map(A, p, x, u) for u in p.at(x)}
    sigs = [t.signature() for t in homs.transformations]
    images = [bij[u].signature() for u in p.at(x)]
    if len(set(images)) != len(images):
        report.append(f"not injective at {x}")
    if set(images) != set(sigs):
        report.append(f"not surjective at {x}: {len(images)} elements vs {len(sigs)} transformations")
    for t in bij.values():
        if not t.is_natural():
            report.append(f"family at {x} is not natural")
    # inverse: evaluate at the identity
    for u, t in bij.items():
        if t(x, A.id(x)) != u:
            report.append(f"evaluation at id_{x} does not recover {u}")
    # naturality in x: precomposing with y(a) corresponds to p(a)
    for a in A.into(x):
        x1 = A.dom(a)
        for u in p.at(x):
            pre = {(s, m): bij[u](s, A.compose(a, m)) for s in A.objects for m in A.hom[(s, x1)]}
            if pre != yoneda_element_map(A, p, x1, p(a, u)).comp:
                report.append(f"not natural in x along {a}")
    return bij, report


def curry(J):
    """cur J: y ↦ J(−, y), with the Yoneda bijections J(x, y) ≅ hom(y x, cur J y)."""
    A, B = J.source, J.target
    obj = {y: presheaf_from_profunctor(J, y) for y in B.objects}
    mor = {}
    for b in B.morphisms():
        y, y2 = B.dom(b), B.cod(b)
        mor[b] = PresheafMap(obj[y], obj[y2],
                             {(x, u): J.rho(x, u, b) for x in A.objects for u in J.at(x, y)})
    isos = {}
    ok = True
    for x in A.objects:
        for y in B.objects:
            bij, rep = yoneda_lemma_check(A, obj[y], x)
            isos[(x, y)] = bij
            ok = ok and not rep
    return obj, mor, isos, ok


def presheaf_restriction(f, p, name=None):
    """p∘f^op"""
    A = f.source
    return make_presheaf(A, {x: p.at(f.ob(x)) for x in A.objects},
                         lambda a, e: p(f.mor(a), e), name=name or f"{p.name}∘{f.name}")


def restrict_map(f, alpha):
    A = f.source
    return PresheafMap(presheaf_restriction(f, alpha.source), presheaf_restriction(f, alpha.target),
                       {(x, e): alpha(f.ob(x), e) for x in A.objects for e in alpha.source.at(f.ob(x))})


def presheaf_weighted_colimit(J, d_obj, d_mor, name=None):
    """∫^a J(a) × d(a) for a weight J: A ⇸ 𝟙 and d: A → ps C.

    d_obj maps objects of A to presheaves on C, d_mor maps a: x' → x to a
    presheaf map d(x') → d(x).  Returns (presheaf, cocone) where the cocone
    sends (x, u) to the map d(x) → colimit.
    """
    A = J.source
    star = J.target.objects[0]
    C = next(iter(d_obj.values())).base if d_obj else None
    if C is None:
        raise ValueError("empty diagram needs an explicit base")
    values, proj_all, reps = {}, {}, {}
    for m in C.objects:
        raw = {}
        for x in A.objects:
            for u in J.at(x, star):
                for e in d_obj[x].at(m):
                    raw[tup(x, u, e)] = (x, u, e)
        pairs = []
        for x in A.objects:
            for u in J.at(x, star):
                for a in A.into(x):
                    x1 = A.dom(a)
                    for e in d_obj[x1].at(m):
                        # (λ(a, u), e) ~ (u, d(a)(e))
                        pairs.append((tup(x1, J.lam(a, u, star), e), tup(x, u, d_mor[a](m, e))))
        Q, proj = quotient(list(raw), pairs)
        values[m] = Q.elements
        proj_all[m] = proj
        for r in Q:
            reps[(m, r)] = raw[r]

    def act(c, cls):
        x, u, e = reps[(C.cod(c), cls)]
        return proj_all[C.dom(c)](tup(x, u, d_obj[x](c, e)))

    P = make_presheaf(C, values, act, name=name or f"colim_{J.name}")
    cocone = {}
    for x in A.objects:
        for u in J.at(x, star):
            cocone[(x, u)] = PresheafMap(d_obj[x], P, {(m, e): proj_all[m](tup(x, u, e))
                                                      for m in C.objects for e in d_obj[x].at(m)})
    return P, cocone


def check_presheaf_colimit(J, d_obj, d_mor, P, cocone, tests):
    """Weighted-colimit property against each test presheaf q: maps P → q
    correspond bijectively to cocones d ⇒ q weighted by J."""
    A = J.source
    star = J.target.objects[0]
    keys = [(x, u) for x in A.objects for u in J.at(x, star)]
    fails = []
    for q in tests:
        legs = {k: hom_presheaves(d_obj[k[0]], q).transformations for k in keys}
        cones = set()
        for choice in itertools.product(*[legs[k] for k in keys]):
            c = dict(zip(keys, choice))
            ok = True
            for (x, u) in keys:
                for a in A.into(x):
                    k1 = (A.dom(a), J.lam(a, u, star))
                    if compose_maps(c[(x, u)], d_mor[a]) != c[k1]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                cones.add(tuple(c[k].signature() for k in keys))
        imgs = [tuple(compose_maps(g, cocone[k]).signature() for k in keys)
                for g in hom_presheaves(P, q).transformations]
        if len(set(imgs)) != len(imgs) or set(imgs) != cones:
            fails.append(q.name)
    return fails


# ------------------------------------------------- presheaf category slices

def presheaf_category(A, family, include_representables=True, name=None):
    """The full subcategory of ps A on the given presheaves (plus the
    representables), with the yoneda functor into it.

    Returns (category, presheaf by object atom, map by morphism atom, y).
    """
    ps = []
    if include_representables:
        ps += [yoneda_object(A, x) for x in A.objects]
    for p in family:
        if not any(p == q for q in ps):
            ps.append(p)
    names = {}
    for i, p in enumerate(ps):
        base = p.name or f"p{i}"
        nm = base if base not in names.values() else f"{base}#{i}"
        names[i] = nm
    objs = [names[i] for i in range(len(ps))]
    by_obj = dict(zip(objs, ps))
    hom, mors, sig_index, obj_of = {}, {}, {}, {}
    for i, p in enumerate(ps):
        for j, q in enumerate(ps):
            ts = hom_presheaves(p, q).transformations
            atoms = []
            for n, t in enumerate(ts):
                atom = f"{names[i]}→{names[j]}#{n}"
                atoms.append(atom)
                mors[atom] = t
                obj_of[atom] = (names[i], names[j])
                sig_index[(names[i], names[j], t.signature())] = atom
            hom[(names[i], names[j])] = atoms
    ident = {}
    for o in objs:
        ident[o] = sig_index[(o, o, identity_map(by_obj[o]).signature())]
    comp = {}
    for f, tf in mors.items():
        for g, tg in mors.items():
            if obj_of[g][0] == obj_of[f][1]:
                comp[(g, f)] = sig_index[(obj_of[f][0], obj_of[g][1], compose_maps(tg, tf).signature())]
    P = FinCategory(tuple(objs), hom, ident, comp, name=name or f"ps({A.name})")
    ymor = {}
    for m in A.morphisms():
        x, x2 = A.dom(m), A.cod(m)
        t = PresheafMap(ps[A.objects.index(x)], ps[A.objects.index(x2)],
                        {(s, n): A.compose(m, n) for s in A.objects for n in A.hom[(s, x)]})
        ymor[m] = sig_index[(names[A.objects.index(x)], names[A.objects.index(x2)], t.signature())]
    y = None
    if include_representables:
        y = FinFunctor(A, P, {x: names[i] for i, x in enumerate(A.objects)}, ymor, name="y")
    return P, by_obj, mors, y


# ------------------------------------------------------------- generators

def random_presheaf(rng, A, max_size=3, name="p", tries=40, budget_nodes=20000):
    """A random presheaf with values of size ≤ max_size, or None."""
    mors = [m for m in A.morphisms() if m not in set(A.identity.values())]
    for _ in range(tries):
        sizes = {x: rng.randint(0, max_size) for x in A.objects}
        vals = {x: [f"{name}{x}_{i}" for i in range(sizes[x])] for x in A.objects}
        act = {}
        for x in A.objects:
            for e in vals[x]:
                act[(A.id(x), e)] = e
        budget = Budget("random_presheaf", budget_nodes)

        def ok():
            for g, f in A.composable():
                h = A.compose(g, f)
                # p(g∘f) = p(f)∘p(g) on p(cod g)
                for e in vals[A.cod(g)]:
                    if (g, e) in act and (h, e) in act:
                        mid = act[(g, e)]
                        if (f, mid) in act and act[(f, mid)] != act[(h, e)]:
                            return False
            return True

        def rec(i):
            if i == len(mors):
                return True
            m = mors[i]
            src, tgt = vals[A.cod(m)], vals[A.dom(m)]
            funcs = list(itertools.product(tgt, repeat=len(src)))
            rng.shuffle(funcs)
            for img in funcs:
                budget.tick()
                for e, v in zip(src, img):
                    act[(m, e)] = v
                if ok() and rec(i + 1):
                    return True
                for e in src:
                    del act[(m, e)]
            return False

        try:
            if rec(0):
                p = Presheaf(A, vals, dict(act), name)
                if not validate_presheaf(p):
                    return p
        except EnumerationLimit:
            continue
    return None


def presheaf_family(A, count, seed=0, max_size=3):
    rng = random.Random(seed)
    out = []
    for i in range(count * 3):
        p = random_presheaf(rng, A, max_size, name=f"p{i}")
        if p is not None:
            out.append(p)
        if len(out) == count:
            break
    return out
