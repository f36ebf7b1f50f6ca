"""Restrictions, companions, conjoints, units, coend composites,
tabulations and cotabulations."""
from __future__ import annotations

from dataclasses import dataclass

from .fincore import FinCategory, FinFunctor, identity_functor, quotient, tup
from .profcells import (Cell, CellFrame, cartesian_restriction, hom_profunctor,
                        horizontal_compose, identity_cell, identity_vertical_cell,
                        make_profunctor, validate_cell, vertical_compose)


@dataclass
class RestrictionResult:
    profunctor: object
    cartesian_cell: Cell


@dataclass
class CompositeResult:
    profunctor: object
    cocartesian_cell: Cell
    class_map: dict      # (x, y) -> {raw key: class atom}


def _check_target(K, f, g):
    if isinstance(K, FinCategory):
        ok = f.target == K and g.target == K
    else:
        ok = f.target == K.source and g.target == K.target
    if not ok:
        raise ValueError("boundary mismatch: verticals do not land in the boundary of K")


def restrict(K, f, g, name=None):
    _check_target(K, f, g)
    R, cell = cartesian_restriction(K, f, g, name=name)
    return RestrictionResult(R, cell)


def nullary_restrict(C, f, g, name=None):
    if not isinstance(C, FinCategory):
        raise ValueError("nullary restriction needs a category")
    return restrict(C, f, g, name=name)


def companion(f):
    """f_* = C(f, id) with its cartesian and cocartesian cells."""
    C = f.target
    res = nullary_restrict(C, f, identity_functor(C), name=f"{f.name}_*")
    fr = CellFrame((), identity_functor(f.source), f, res.profunctor)
    cocart = Cell(fr, {(x,): C.id(f.ob(x)) for x in f.source.objects},
                  frozenset({"cocartesian", "pointwise"}), name=f"cocart_{f.name}_*")
    return res, cocart


def conjoint(f):
    """f^* = C(id, f) with its cartesian and cocartesian cells."""
    C = f.target
    res = nullary_restrict(C, identity_functor(C), f, name=f"{f.name}^*")
    fr = CellFrame((), f, identity_functor(f.source), res.profunctor)
    cocart = Cell(fr, {(x,): C.id(f.ob(x)) for x in f.source.objects},
                  frozenset({"cocartesian", "pointwise"}), name=f"cocart_{f.name}^*")
    return res, cocart


def companion_identities(f):
    """Failures of cart∘cocart = id_f and cocart⋆cart = id_{f_*}."""
    res, cocart = companion(f)
    cart = res.cartesian_cell
    out = []
    if vertical_compose(cart, [cocart]) != identity_vertical_cell(f):
        out.append("vertical composite differs from id_f")
    if horizontal_compose(cocart, cart) != identity_cell(res.profunctor):
        out.append("horizontal composite differs from the identity cell of f_*")
    return out


def conjoint_identities(f):
    """Failures of cart∘cocart = id_f and cart⋆cocart = id_{f^*}."""
    res, cocart = conjoint(f)
    cart = res.cartesian_cell
    out = []
    if vertical_compose(cart, [cocart]) != identity_vertical_cell(f):
        out.append("vertical composite differs from id_f")
    if horizontal_compose(cart, cocart) != identity_cell(res.profunctor):
        out.append("horizontal composite differs from the identity cell of f^*")
    return out


def unit_profunctor(A):
    """I_A with its cocartesian cell (A) ⇒ I_A and cartesian cell I_A ⇒ A."""
    I = hom_profunctor(A)
    idA = identity_functor(A)
    cocart = Cell(CellFrame((), idA, idA, I), {(x,): A.id(x) for x in A.objects},
                  frozenset({"cocartesian", "pointwise"}), name=f"cocart_I_{A.name}")
    fr = CellFrame((I,), idA, idA, A)
    cart = Cell(fr, {k: k[1] for k in fr.keys()}, frozenset({"cartesian"}),
                name=f"cart_I_{A.name}")
    return I, cocart, cart


# ------------------------------------------------------------------ coends

def _raw_name(key):
    return "[" + "|".join(key[1:-1]) + "]"


def horizontal_composite(path, name=None):
    """J1 ⊙ ... ⊙ Jn as a coend over the middle objects."""
    path = list(path)
    if not path:
        raise ValueError("empty path: use unit_profunctor")
    for J, K in zip(path, path[1:]):
        if J.target != K.source:
            raise ValueError("path is not composable")
    A, B = path[0].source, path[-1].target
    n = len(path)
    fr = CellFrame(tuple(path), identity_functor(A), identity_functor(B), A)  # keys only
    raw = {}
    for k in fr.keys():
        raw.setdefault((k[0], k[-1]), []).append(k)
    cats = fr.cats()
    classes, class_map, reps = {}, {}, {}
    for x in A.objects:
        for y in B.objects:
            keys = raw.get((x, y), [])
            names = {k: _raw_name(k) for k in keys}
            pairs = []
            keyset = set(keys)
            for k in keys:
                # k = (.., ρ(u, a), x', v, ..) ~ (.., u, z, λ(a, v), ..)
                for i in range(1, n):
                    Ji, Jnext, C = path[i - 1], path[i], cats[i]
                    xprev, ui, xi, v = k[2 * i - 2], k[2 * i - 1], k[2 * i], k[2 * i + 1]
                    for a in C.into(xi):
                        z = C.dom(a)
                        for u in Ji.at(xprev, z):
                            if Ji.rho(xprev, u, a) == ui:
                                k2 = k[:2 * i - 1] + (u, z, Jnext.lam(a, v, k[2 * i + 2])) + k[2 * i + 2:]
                                assert k2 in keyset
                                pairs.append((names[k], names[k2]))
            if len(set(names.values())) != len(names):
                raise ValueError("element names collide in the coend; rename atoms")
            Q, proj = quotient(list(names.values()), pairs)
            back = {nm: k for k, nm in names.items()}
            classes[(x, y)] = Q.elements
            class_map[(x, y)] = {k: proj(names[k]) for k in keys}
            for c in Q:
                reps[(x, y, c)] = back[c]

    def lam(a, c, y):
        k = reps[(A.cod(a), y, c)]
        k2 = (A.dom(a), path[0].lam(a, k[1], k[2])) + k[2:]
        return class_map[(A.dom(a), y)][k2]

    def rho(x, c, b):
        k = reps[(x, B.dom(b), c)]
        k2 = k[:-2] + (path[-1].rho(k[-3], k[-2], b), B.cod(b))
        return class_map[(x, B.cod(b))][k2]

    nm = name or "⊙".join(J.name for J in path)
    P = make_profunctor(A, B, classes, lam, rho, name=nm)
    cfr = CellFrame(tuple(path), identity_functor(A), identity_functor(B), P)
    cell = Cell(cfr, {k: class_map[(k[0], k[-1])][k] for k in cfr.keys()},
                frozenset({"cocartesian", "pointwise"}), name=f"coend_{nm}")
    return CompositeResult(P, cell, class_map)


def representative(comp, x, y, c):
    """The least raw element tuple in the class c."""
    for k, cls in sorted(comp.class_map[(x, y)].items(), key=lambda kv: _raw_name(kv[0])):
        if cls == c:
            return k
    raise KeyError(c)


def descend(comp, target, fn, left=None, right=None):
    """The cell out of a composite induced by fn on raw keys.

    fn must be constant on classes; the result has source (J1⊙...⊙Jn).
    """
    P = comp.profunctor
    left = left or identity_functor(P.source)
    right = right or identity_functor(P.target)
    fr = CellFrame((P,), left, right, target)
    vals = {}
    for (x, y), m in comp.class_map.items():
        for k, c in m.items():
            v = fn(k)
            key = (x, c, y)
            if key in vals and vals[key] != v:
                raise ValueError(f"map is not constant on the class {c}")
            vals[key] = v
    return Cell(fr, {k: vals[k] for k in fr.keys()})


def profunctor_map(J, K, fn):
    """Unary cell J ⇒ K with identity verticals given elementwise."""
    fr = CellFrame((J,), identity_functor(J.source), identity_functor(J.target), K)
    return Cell(fr, {k: fn(*k) for k in fr.keys()})


def is_iso_pair(alpha, beta):
    """α: J ⇒ K and β: K ⇒ J mutually inverse (and both valid cells)."""
    if validate_cell(alpha) or validate_cell(beta):
        return False
    J, K = alpha.src[0], beta.src[0]
    return (vertical_compose(beta, [alpha]) == identity_cell(J)
            and vertical_compose(alpha, [beta]) == identity_cell(K))


def invert_map(alpha):
    """The inverse of a bijective identity-vertical unary cell, or None."""
    J, K = alpha.src[0], alpha.tgt
    inv = {}
    for (x, u, y), v in alpha.comp.items():
        if (x, v, y) in inv:
            return None
        inv[(x, v, y)] = u
    fr = CellFrame((K,), identity_functor(K.source), identity_functor(K.target), J)
    if set(inv) != set(fr.keys()):
        return None
    return Cell(fr, inv)


# ---------------------------------------------------------- standard isos

def left_unitor(J):
    """(I_A ⊙ J) ≅ J: [a, u] ↦ λ(a, u)."""
    A = J.source
    I = hom_profunctor(A)
    comp = horizontal_composite([I, J])
    fwd = descend(comp, J, lambda k: J.lam(k[1], k[3], k[4]))
    bwd = profunctor_map(J, comp.profunctor,
                         lambda x, u, y: comp.class_map[(x, y)][(x, A.id(x), x, u, y)])
    return comp, fwd, bwd


def right_unitor(J):
    """(J ⊙ I_B) ≅ J: [u, b] ↦ ρ(u, b)."""
    B = J.target
    I = hom_profunctor(B)
    comp = horizontal_composite([J, I])
    fwd = descend(comp, J, lambda k: J.rho(k[0], k[1], k[3]))
    bwd = profunctor_map(J, comp.profunctor,
                         lambda x, u, y: comp.class_map[(x, y)][(x, u, y, B.id(y), y)])
    return comp, fwd, bwd


def associators(J, H, K):
    """Isos ((J⊙H)⊙K) ≅ (J⊙H⊙K) ≅ (J⊙(H⊙K)), returned as (fwd, bwd) pairs."""
    JH = horizontal_composite([J, H])
    HK = horizontal_composite([H, K])
    flat = horizontal_composite([J, H, K])
    left = horizontal_composite([JH.profunctor, K])
    right = horizontal_composite([J, HK.profunctor])
    Pf = flat.profunctor

    def from_left(k):
        x, c, m, w, y = k
        r = representative(JH, x, m, c)
        return flat.class_map[(x, y)][r + (w, y)]

    def from_right(k):
        x, u, m, c, y = k
        r = representative(HK, m, y, c)
        return flat.class_map[(x, y)][(x, u) + r]

    def to_left(x, c, y):
        k = representative(flat, x, y, c)
        inner = JH.class_map[(x, k[4])][k[:5]]
        return left.class_map[(x, y)][(x, inner, k[4], k[5], y)]

    def to_right(x, c, y):
        k = representative(flat, x, y, c)
        inner = HK.class_map[(k[2], y)][k[2:]]
        return right.class_map[(x, y)][(x, k[1], k[2], inner, y)]

    lf = descend(left, Pf, from_left)
    lb = profunctor_map(Pf, left.profunctor, to_left)
    rf = descend(right, Pf, from_right)
    rb = profunctor_map(Pf, right.profunctor, to_right)
    return (left, lf, lb), (right, rf, rb), flat


def restriction_as_composite(K, f, g):
    """Explicit iso K(f, g) ≅ f_* ⊙ K ⊙ g^*."""
    fs, _ = companion(f)
    gs, _ = conjoint(g)
    R = restrict(K, f, g).profunctor
    comp = horizontal_composite([fs.profunctor, K, gs.profunctor])
    C, D = K.source, K.target

    def fwd(k):
        x, m1, a, u, b, m2, y = k
        return K.rho(f.ob(x), K.lam(m1, u, b), m2)

    to = descend(comp, R, fwd)
    back = profunctor_map(R, comp.profunctor, lambda x, v, y: comp.class_map[(x, y)][
        (x, C.id(f.ob(x)), f.ob(x), v, g.ob(y), D.id(g.ob(y)), y)])
    return R, comp, to, back


def restriction_pseudofunctoriality(K, f, g, h, k):
    """K(f, g)(h, k) and K(f∘h, g∘k) are equal tables; return both."""
    from .fincore import compose_functors
    a = restrict(restrict(K, f, g).profunctor, h, k).profunctor
    b = restrict(K, compose_functors(f, h), compose_functors(g, k)).profunctor
    return a, b


# --------------------------------------------------------------- tabulation

@dataclass
class Tabulation:
    category: FinCategory
    p: FinFunctor
    q: FinFunctor
    pi: Cell


def tabulation(J):
    """The graph of J with its projections and the cell π: (T) ⇒ J."""
    A, B = J.source, J.target
    objs = [(x, u, y) for (x, y), us in J.elems.items() for u in us]
    name = {o: tup(*o) for o in objs}
    hom, comp, ident = {}, {}, {}
    mor_parts = {}
    for s in objs:
        for t in objs:
            ms = []
            for a in A.hom[(s[0], t[0])]:
                for b in B.hom[(s[2], t[2])]:
                    if J.rho(s[0], s[1], b) == J.lam(a, t[1], t[2]):
                        m = tup(a, b, name[s], name[t])
                        ms.append(m)
                        mor_parts[m] = (a, b, s, t)
            hom[(name[s], name[t])] = ms
    for s in objs:
        ident[name[s]] = tup(A.id(s[0]), B.id(s[2]), name[s], name[s])
    for f, (a, b, s, t) in mor_parts.items():
        for g, (a2, b2, s2, t2) in mor_parts.items():
            if s2 == t:
                comp[(g, f)] = tup(A.compose(a2, a), B.compose(b2, b), name[s], name[t2])
    T = FinCategory(tuple(name.values()), hom, ident, comp, name=f"tab({J.name})")
    p = FinFunctor(T, A, {name[o]: o[0] for o in objs},
                   {m: v[0] for m, v in mor_parts.items()}, name="π_A")
    q = FinFunctor(T, B, {name[o]: o[2] for o in objs},
                   {m: v[1] for m, v in mor_parts.items()}, name="π_B")
    pi = Cell(CellFrame((), p, q, J), {(name[o],): o[1] for o in objs},
              frozenset({"cocartesian"}), name="π")
    return Tabulation(T, p, q, pi)


def tabulation_factor(tab, phi):
    """The unique functor h: X → tab J with π∘h = φ for φ: (X) ⇒ J."""
    if phi.src or phi.nullary:
        raise ValueError("needs a unary cell with empty source")
    f, g = phi.left, phi.right
    X = f.source
    T = tab.category
    om = {z: tup(f.ob(z), phi.comp[(z,)], g.ob(z)) for z in X.objects}
    mm = {m: tup(f.mor(m), g.mor(m), om[X.dom(m)], om[X.cod(m)]) for m in X.morphisms()}
    return FinFunctor(X, T, om, mm, name="φ'")


def check_tabulation_1d(tab, phi):
    """Brute force: exactly one functor h with p∘h = f, q∘h = g and π∘h = φ."""
    from .fincore import enumerate_functors
    from .profcells import precompose_vertical
    X = phi.left.source
    hits = []
    for h in enumerate_functors(X, tab.category):
        from .fincore import compose_functors
        if compose_functors(tab.p, h) != phi.left or compose_functors(tab.q, h) != phi.right:
            continue
        if precompose_vertical(tab.pi, h).comp == phi.comp:
            hits.append(h)
    return hits


def check_tabulation_2d(tab, ctx, phi1, phi2):
    """Bounded 2-dimensional property for the factorisations of φ1, φ2.

    For each ctx path H̲ from X to Y, compatible pairs (ξ_A, ξ_B) correspond
    bijectively to nullary cells ξ': H̲ ⇒ tab J.  Returns a list of failures.
    """
    from .profcells import enumerate_cells, horizontal_compose, whisker_cell
    h1, h2 = tabulation_factor(tab, phi1), tabulation_factor(tab, phi2)
    X, Y = h1.source, h2.source
    A, B = tab.p.target, tab.q.target
    fails = []
    for H in ctx.paths_between(X, Y):
        if not H:
            continue
        xa = enumerate_cells(CellFrame(H, phi1.left, phi2.left, A))
        xb = enumerate_cells(CellFrame(H, phi1.right, phi2.right, B))
        pairs = []
        for a in xa:
            lhs = horizontal_compose(a, phi2)
            for b in xb:
                if horizontal_compose(phi1, b) == lhs:
                    pairs.append((a.signature(), b.signature()))
        seen = {}
        for xi in enumerate_cells(CellFrame(H, h1, h2, tab.category)):
            key = (whisker_cell(tab.p, xi).signature(), whisker_cell(tab.q, xi).signature())
            seen[key] = seen.get(key, 0) + 1
        for pr in pairs:
            if seen.get(pr, 0) != 1:
                fails.append((H, pr, seen.get(pr, 0)))
        if len(seen) != len(pairs) or set(seen) - set(pairs):
            fails.append((H, "extra", len(seen)))
    return fails


def cotabulation(J):
    """The cograph of J with its insertions and the cell σ: J ⇒ cograph."""
    A, B = J.source, J.target
    ob_a = {x: tup("A", x) for x in A.objects}
    ob_b = {y: tup("B", y) for y in B.objects}
    mor_a = {m: tup("A", m) for m in A.morphisms()}
    mor_b = {m: tup("B", m) for m in B.morphisms()}
    el = {(x, u, y): tup("J", x, u, y) for (x, y), us in J.elems.items() for u in us}
    hom = {}
    for x in A.objects:
        for x2 in A.objects:
            hom[(ob_a[x], ob_a[x2])] = [mor_a[m] for m in A.hom[(x, x2)]]
        for y in B.objects:
            hom[(ob_a[x], ob_b[y])] = [el[(x, u, y)] for u in J.at(x, y)]
    for y in B.objects:
        for y2 in B.objects:
            hom[(ob_b[y], ob_b[y2])] = [mor_b[m] for m in B.hom[(y, y2)]]
    ident = {ob_a[x]: mor_a[A.id(x)] for x in A.objects}
    ident.update({ob_b[y]: mor_b[B.id(y)] for y in B.objects})
    comp = {}
    for g, f in A.composable():
        comp[(mor_a[g], mor_a[f])] = mor_a[A.compose(g, f)]
    for g, f in B.composable():
        comp[(mor_b[g], mor_b[f])] = mor_b[B.compose(g, f)]
    for (x, u, y), e in el.items():
        for a in A.into(x):
            comp[(e, mor_a[a])] = el[(A.dom(a), J.lam(a, u, y), y)]
        for b in B.out_of(y):
            comp[(mor_b[b], e)] = el[(x, J.rho(x, u, b), B.cod(b))]
    C = FinCategory(tuple(ob_a.values()) + tuple(ob_b.values()), hom, ident, comp,
                    name=f"cograph({J.name})")
    ia = FinFunctor(A, C, ob_a, mor_a, name="σ_A")
    ib = FinFunctor(B, C, ob_b, mor_b, name="σ_B")
    fr = CellFrame((J,), ia, ib, C)
    sigma = Cell(fr, {k: el[k] for k in fr.keys()}, frozenset({"cartesian"}), name="σ")
    return C, ia, ib, sigma


def is_full_and_faithful(f):
    A, C = f.source, f.target
    for x in A.objects:
        for y in A.objects:
            image = [f.mor(m) for m in A.hom[(x, y)]]
            if len(set(image)) != len(image) or set(image) != set(C.hom[(f.ob(x), f.ob(y))]):
                return False
    return True

