"""Unbiased monoidal structures up to a fixed arity, lax monoidal functors,
monoidal profunctors, Day convolution and the monoidal Yoneda lemma.

Tensors are tables indexed by tuples: tobj[(x1, ..., xn)] and
tmor[(m1, ..., mn)] for n ≤ N.  The associator 𝔞 is keyed by
(shape, leaves) where shape = (m1, ..., mk) are the inner arities; it goes
from the nested tensor ⊘_k(⊘_{m1}(..), ...) to the flat ⊘_{Σm}(leaves).
The unitor 𝔦 goes x → ⊘_1(x).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fincore import (FinFunctor, compose_functors, identity_functor, point,
                      product_category, tup)
from .kan import is_weighted_colimit, satisfies_left_beck_chevalley
from .profcells import Cell, CellFrame, make_profunctor, restrict_profunctor
from .universal import FAILS, HOLDS_EXACT, CheckResult
from .yoneda import (PresheafMap, compose_maps, identity_map, make_presheaf,
                     presheaf_from_profunctor, yoneda_element_map, yoneda_object)
from .fincore import quotient


# ------------------------------------------------------------------ shapes

def shapes2(N):
    """Inner arity tuples (m1..mk) with k ≤ N, Σ m ≤ N."""
    out = []
    for k in range(N + 1):
        for ms in itertools.product(range(N + 1), repeat=k):
            if sum(ms) <= N:
                out.append(ms)
    return out


def shapes3(N):
    """Double nestings ((m11, ..), (m21, ..), ..) with every arity ≤ N."""
    out = []
    for outer in shapes2(N):
        # outer[i] = number of middle groups in block i; Σ outer ≤ N
        blocks = []
        for l in outer:
            blocks.append([s for s in shapes2(N) if len(s) == l])
        for choice in itertools.product(*blocks):
            if sum(sum(s) for s in choice) <= N:
                out.append(tuple(choice))
    return out


def split(xs, shape):
    out, i = [], 0
    for m in shape:
        out.append(tuple(xs[i:i + m]))
        i += m
    return out


# ------------------------------------------------------ monoidal structure

@dataclass(eq=False)
class MonoidalStructure:
    base: object
    N: int
    tobj: dict
    tmor: dict
    assoc: dict      # (shape, leaves) -> morphism
    unitor: dict     # x -> morphism
    name: str = ""
    _functors: dict = field(default_factory=dict, repr=False)

    def t(self, xs):
        return self.tobj[tuple(xs)]

    def tm(self, ms):
        return self.tmor[tuple(ms)]

    def a(self, shape, xs):
        return self.assoc[(tuple(shape), tuple(xs))]

    def i(self, x):
        return self.unitor[x]

    @property
    def unit(self):
        return self.tobj[()]

    def nested(self, shape, xs):
        return self.t([self.t(g) for g in split(xs, shape)])

    def tensor_functor(self, n):
        """⊘_n as a functor A^n → A on the product category."""
        if n not in self._functors:
            A = self.base
            P = product_category([A] * n)
            if n == 0:
                F = FinFunctor(P, A, {P.objects[0]: self.unit},
                               {P.morphisms()[0]: A.id(self.unit)}, name="⊘0")
            else:
                om = {tup(*xs): self.t(xs) for xs in itertools.product(A.objects, repeat=n)}
                mm = {tup(*ms): self.tm(ms) for ms in itertools.product(A.morphisms(), repeat=n)}
                F = FinFunctor(P, A, om, mm, name=f"⊘{n}")
            self._functors[n] = F
        return self._functors[n]


def make_monoidal(A, N, tobj, tmor, assoc, unitor, name=""):
    """Fill the tables from functions."""
    to, tmr, asc = {}, {}, {}
    for n in range(N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            to[xs] = tobj(xs)
        for ms in itertools.product(A.morphisms(), repeat=n):
            tmr[ms] = tmor(ms)
    for shape in shapes2(N):
        for xs in itertools.product(A.objects, repeat=sum(shape)):
            asc[(shape, xs)] = assoc(shape, xs)
    return MonoidalStructure(A, N, to, tmr, asc, {x: unitor(x) for x in A.objects}, name)


def strict_monoidal(A, obj_op, mor_op, unit, N=3, name=""):
    """Strict structure from a strictly associative, unital binary tensor."""
    def fold(xs, op, e):
        out = e
        for x in xs:
            out = op(out, x)
        return out

    return make_monoidal(
        A, N, lambda xs: fold(xs, obj_op, unit),
        lambda ms: fold(ms, mor_op, A.id(unit)),
        lambda shape, xs: A.id(fold(xs, obj_op, unit)),
        lambda x: A.id(x), name=name)


def thin_monoidal(A, tobj, N=3, name=""):
    """Structure on a thin category: every structure map is the unique arrow."""
    def arrow(a, b):
        hs = A.hom[(a, b)]
        if len(hs) != 1:
            raise ValueError(f"no unique arrow {a} → {b}")
        return hs[0]

    def t(xs):
        return tobj(tuple(xs))

    return make_monoidal(
        A, N, t, lambda ms: arrow(t([A.dom(m) for m in ms]), t([A.cod(m) for m in ms])),
        lambda shape, xs: arrow(t([t(g) for g in split(xs, shape)]), t(xs)),
        lambda x: arrow(x, t((x,))), name=name)


def validate_monoidal(M):
    A, N = M.base, M.N
    v = []
    for n in range(N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            if M.tobj.get(xs) not in A.objects:
                v.append(f"⊘{n}{xs} undefined")
        for ms in itertools.product(A.morphisms(), repeat=n):
            m = M.tmor.get(ms)
            dom = M.tobj.get(tuple(A.dom(x) for x in ms))
            cod = M.tobj.get(tuple(A.cod(x) for x in ms))
            if dom is None or cod is None or m not in A.hom[(dom, cod)]:
                v.append(f"⊘{n}{ms} mistyped")
    if v:
        return v
    for n in range(N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            if M.tm([A.id(x) for x in xs]) != A.id(M.t(xs)):
                v.append(f"⊘{n} does not preserve the identity at {xs}")
        pairs = list(A.composable())
        for ps in itertools.product(pairs, repeat=n):
            gs, fs = [p[0] for p in ps], [p[1] for p in ps]
            if M.tm([A.compose(g, f) for g, f in ps]) != A.compose(M.tm(gs), M.tm(fs)):
                v.append(f"⊘{n} does not preserve the composite at {tuple(ps)}")
    for shape in shapes2(N):
        for xs in itertools.product(A.objects, repeat=sum(shape)):
            m = M.assoc.get((shape, xs))
            if m not in A.hom[(M.nested(shape, xs), M.t(xs))]:
                v.append(f"𝔞 at shape {shape}, leaves {xs} mistyped")
    for x in A.objects:
        if M.unitor.get(x) not in A.hom[(x, M.t((x,)))]:
            v.append(f"𝔦 at {x} mistyped")
    if v:
        return v
    # naturality
    for shape in shapes2(N):
        for ms in itertools.product(A.morphisms(), repeat=sum(shape)):
            dom = tuple(A.dom(m) for m in ms)
            cod = tuple(A.cod(m) for m in ms)
            lhs = A.compose(M.a(shape, cod), M.tm([M.tm(g) for g in split(ms, shape)]))
            rhs = A.compose(M.tm(ms), M.a(shape, dom))
            if lhs != rhs:
                v.append(f"𝔞 not natural at shape {shape}, morphisms {ms}")
    for m in A.morphisms():
        if A.compose(M.i(A.cod(m)), m) != A.compose(M.tm((m,)), M.i(A.dom(m))):
            v.append(f"𝔦 not natural at {m}")
    # associativity
    for sh in shapes3(N):
        mid = tuple(len(s) for s in sh)                 # groups per block
        inner = tuple(m for s in sh for m in s)         # leaves per group
        per_block = tuple(sum(s) for s in sh)
        for xs in itertools.product(A.objects, repeat=sum(inner)):
            groups = split(xs, inner)
            ys = [M.t(g) for g in groups]
            blocks_x = split(xs, per_block)
            # path 1: ⊘_i(𝔞 within block) then 𝔞 across blocks
            p1a = M.tm([M.a(s, bx) for s, bx in zip(sh, blocks_x)])
            p1 = A.compose(M.a(per_block, xs), p1a)
            # path 2: 𝔞 on the outer two levels, then 𝔞 on the groups
            p2 = A.compose(M.a(inner, xs), M.a(mid, tuple(ys)))
            if p1 != p2:
                v.append(f"associativity fails at shape {sh}, leaves {xs}")
    # unit axioms
    for n in range(N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            if A.compose(M.a((1,) * n, xs), M.tm([M.i(x) for x in xs])) != A.id(M.t(xs)):
                v.append(f"unit axiom (inner) fails at {xs}")
            if A.compose(M.a((n,), xs), M.i(M.t(xs))) != A.id(M.t(xs)):
                v.append(f"unit axiom (outer) fails at {xs}")
    return v


# --------------------------------------------------------- lax functors

@dataclass(eq=False)
class LaxMonoidalFunctor:
    underlying: FinFunctor
    src: MonoidalStructure
    tgt: MonoidalStructure
    comp: dict          # xs -> compositor
    flavor: str = "lax"  # lax | colax | pseudo
    name: str = ""

    def __call__(self, xs):
        return self.comp[tuple(xs)]


def identity_lax(M):
    A = M.base
    comp = {xs: A.id(M.t(xs)) for n in range(M.N + 1)
            for xs in itertools.product(A.objects, repeat=n)}
    return LaxMonoidalFunctor(identity_functor(A), M, M, comp, "pseudo", "id")


def compose_lax(G, F):
    """(G∘F)_⊘ = G(F_⊘)∘G_⊘(F x̲)."""
    C = G.tgt.base
    comp = {xs: C.compose(G.underlying.mor(F(xs)), G([F.underlying.ob(x) for x in xs]))
            for xs in F.comp}
    return LaxMonoidalFunctor(compose_functors(G.underlying, F.underlying), F.src, G.tgt, comp,
                              "lax", f"{G.name}∘{F.name}")


def invert_compositors(F):
    """The colax structure of a pseudo functor, or None."""
    C = F.tgt.base
    inv = {}
    for xs, m in F.comp.items():
        n = C.inverse(m)
        if n is None:
            return None
        inv[xs] = n
    return inv


def validate_lax_functor(F):
    f, A, C = F.underlying, F.src.base, F.tgt.base
    MA, MC = F.src, F.tgt
    N = min(MA.N, MC.N)
    colax = F.flavor == "colax"
    v = []
    for n in range(N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            a, b = MC.t([f.ob(x) for x in xs]), f.ob(MA.t(xs))
            if colax:
                a, b = b, a
            if F.comp.get(xs) not in C.hom[(a, b)]:
                v.append(f"compositor at {xs} mistyped")
    if v:
        return v
    for n in range(N + 1):
        for ms in itertools.product(A.morphisms(), repeat=n):
            dom = tuple(A.dom(m) for m in ms)
            cod = tuple(A.cod(m) for m in ms)
            fm = MC.tm([f.mor(m) for m in ms])
            fM = f.mor(MA.tm(ms))
            if not colax:
                ok = C.compose(F(cod), fm) == C.compose(fM, F(dom))
            else:
                ok = C.compose(fm, F(dom)) == C.compose(F(cod), fM)
            if not ok:
                v.append(f"compositor not natural at {ms}")
    for shape in shapes2(N):
        for xs in itertools.product(A.objects, repeat=sum(shape)):
            groups = split(xs, shape)
            fxs = [f.ob(x) for x in xs]
            inner = [MA.t(g) for g in groups]
            if not colax:
                p1 = C.compose(F(xs), MC.a(shape, fxs))
                p2 = C.chain(f.mor(MA.a(shape, xs)), F(inner), MC.tm([F(g) for g in groups]))
            else:
                p1 = C.chain(MC.a(shape, fxs), MC.tm([F(g) for g in groups]), F(inner))
                p2 = C.compose(F(xs), f.mor(MA.a(shape, xs)))
            if p1 != p2:
                v.append(f"associativity fails at shape {shape}, leaves {xs}")
    for x in A.objects:
        if not colax:
            ok = C.compose(F((x,)), MC.i(f.ob(x))) == f.mor(MA.i(x))
        else:
            ok = C.compose(F((x,)), f.mor(MA.i(x))) == MC.i(f.ob(x))
        if not ok:
            v.append(f"unit axiom fails at {x}")
    if F.flavor == "pseudo" and invert_compositors(F) is None:
        v.append("pseudo functor with a non-invertible compositor")
    return v


def validate_monoidal_transformation(xi, F, G):
    """ξ: F ⇒ G with ξ_{⊘x̲}∘F_⊘ = G_⊘∘⊘(ξ_{x_i})."""
    from .fincore import validate_nat
    v = list(validate_nat(xi))
    if v:
        return v
    A, C = F.src.base, F.tgt.base
    MA, MC = F.src, F.tgt
    for n in range(min(MA.N, MC.N) + 1):
        for xs in itertools.product(A.objects, repeat=n):
            lhs = C.compose(xi[MA.t(xs)], F(xs))
            rhs = C.compose(G(xs), MC.tm([xi[x] for x in xs]))
            if lhs != rhs:
                v.append(f"T-cell axiom fails at {xs}")
    return v


# ---------------------------------------------------- monoidal profunctors

@dataclass(eq=False)
class MonoidalProfunctor:
    underlying: object
    src: MonoidalStructure
    tgt: MonoidalStructure
    struct: dict       # tuple of (x, u, y) triples -> element of J(⊘x̲, ⊘y̲)
    name: str = ""

    def __call__(self, triples):
        return self.struct[tuple(triples)]


def _triples(J):
    return [(x, u, y) for (x, y), us in J.elems.items() for u in us]


def make_monoidal_profunctor(J, MA, MB, fn, name=""):
    N = min(MA.N, MB.N)
    tr = _triples(J)
    struct = {}
    for n in range(N + 1):
        for ts in itertools.product(tr, repeat=n):
            struct[ts] = fn(ts)
    return MonoidalProfunctor(J, MA, MB, struct, name or J.name)


def hom_monoidal(M):
    from .profcells import hom_profunctor
    return make_monoidal_profunctor(hom_profunctor(M.base), M, M,
                                    lambda ts: M.tm([t[1] for t in ts]), name=f"I_{M.base.name}")


def companion_monoidal(f):
    """f_* for a pseudo (or colax) monoidal functor: J_⊘(s̲) = ⊘(s̲)∘f^⊘."""
    from .construct import companion
    C = f.tgt.base
    if f.flavor == "colax":
        co = f.comp
    else:
        co = invert_compositors(f)
        if co is None:
            raise ValueError("companion structure needs invertible compositors")
    J = companion(f.underlying)[0].profunctor
    return make_monoidal_profunctor(
        J, f.src, f.tgt,
        lambda ts: C.compose(f.tgt.tm([t[1] for t in ts]), co[tuple(t[0] for t in ts)]),
        name=J.name)


def conjoint_monoidal(f):
    """f^* = C(id, f) for a lax monoidal f: J_⊘(s̲) = f_⊘∘⊘(s̲)."""
    from .construct import conjoint
    if f.flavor == "colax":
        raise ValueError("conjoint structure needs a lax (or pseudo) functor")
    C = f.tgt.base
    J = conjoint(f.underlying)[0].profunctor
    return make_monoidal_profunctor(
        J, f.tgt, f.src,
        lambda ts: C.compose(f(tuple(t[2] for t in ts)), f.tgt.tm([t[1] for t in ts])),
        name=J.name)


def validate_monoidal_profunctor(Jm):
    J, MA, MB = Jm.underlying, Jm.src, Jm.tgt
    A, B = J.source, J.target
    N = min(MA.N, MB.N)
    tr = _triples(J)
    v = []
    for n in range(N + 1):
        for ts in itertools.product(tr, repeat=n):
            xs, ys = [t[0] for t in ts], [t[2] for t in ts]
            if Jm.struct.get(ts) not in J.at(MA.t(xs), MB.t(ys)):
                v.append(f"structure map at {ts} mistyped")
    if v:
        return v
    for n in range(1, N + 1):
        for ts in itertools.product(tr, repeat=n):
            xs, ys = [t[0] for t in ts], [t[2] for t in ts]
            w = Jm(ts)
            for i, (x, u, y) in enumerate(ts):
                for a in A.into(x):
                    ts2 = list(ts)
                    ts2[i] = (A.dom(a), J.lam(a, u, y), y)
                    am = MA.tm([A.id(z) for z in xs[:i]] + [a] + [A.id(z) for z in xs[i + 1:]])
                    if Jm(ts2) != J.lam(am, w, MB.t(ys)):
                        v.append(f"left equivariance fails at {ts}, coordinate {i}, {a}")
                for b in B.out_of(y):
                    ts2 = list(ts)
                    ts2[i] = (x, J.rho(x, u, b), B.cod(b))
                    bm = MB.tm([B.id(z) for z in ys[:i]] + [b] + [B.id(z) for z in ys[i + 1:]])
                    if Jm(ts2) != J.rho(MA.t(xs), w, bm):
                        v.append(f"right equivariance fails at {ts}, coordinate {i}, {b}")
    for shape in shapes2(N):
        for ts in itertools.product(tr, repeat=sum(shape)):
            xs, ys = tuple(t[0] for t in ts), tuple(t[2] for t in ts)
            groups = split(ts, shape)
            outer = [(MA.t([t[0] for t in g]), Jm(g), MB.t([t[2] for t in g])) for g in groups]
            lhs = J.rho(MA.nested(shape, xs), Jm(outer), MB.a(shape, ys))
            rhs = J.lam(MA.a(shape, xs), Jm(ts), MB.t(ys))
            if lhs != rhs:
                v.append(f"associativity fails at shape {shape}, elements {ts}")
    for (x, u, y) in tr:
        if J.rho(x, u, MB.i(y)) != J.lam(MA.i(x), Jm(((x, u, y),)), MB.t((y,))):
            v.append(f"unit axiom fails at {u}")
    return v


# ------------------------------------------------------------ Day convolution

@dataclass
class DayProduct:
    presheaf: object
    factors: list
    cls: dict        # raw atom -> class atom (s determines x)
    decode: dict     # raw atom -> (s, us, es)

    def class_of(self, s, us, es):
        return self.cls[_day_atom(s, us, es)]

    def rep(self, c):
        return self.decode[c]


def _day_atom(s, us, es):
    return tup(s, *[tup(u, e) for u, e in zip(us, es)])


def day_convolution(M, ps, name=None):
    """(p1 ⊛ ... ⊛ pn)(x) = ∫^{u̲} A(x, ⊘u̲) × Π p_i(u_i)."""
    n = len(ps)
    if n > M.N:
        raise ValueError(f"arity {n} exceeds the bound {M.N}")
    A = M.base
    for p in ps:
        if p.base != A:
            raise ValueError("presheaf over the wrong base")
    values, cls, decode = {}, {}, {}
    for x in A.objects:
        raw = []
        for us in itertools.product(A.objects, repeat=n):
            for s in A.hom[(x, M.t(us))]:
                for es in itertools.product(*[p.at(u) for p, u in zip(ps, us)]):
                    atom = _day_atom(s, us, es)
                    raw.append(atom)
                    decode[atom] = (s, us, es)
        pairs = []
        for us in itertools.product(A.objects, repeat=n):
            for es in itertools.product(*[p.at(u) for p, u in zip(ps, us)]):
                for i in range(n):
                    for a in A.into(us[i]):
                        us1 = us[:i] + (A.dom(a),) + us[i + 1:]
                        es1 = es[:i] + (ps[i](a, es[i]),) + es[i + 1:]
                        am = M.tm([A.id(u) for u in us[:i]] + [a] + [A.id(u) for u in us[i + 1:]])
                        for s1 in A.hom[(x, M.t(us1))]:
                            pairs.append((_day_atom(A.compose(am, s1), us, es),
                                          _day_atom(s1, us1, es1)))
        Q, proj = quotient(raw, pairs)
        values[x] = Q.elements
        for r in raw:
            cls[r] = proj(r)

    def act(b, c):
        s, us, es = decode[c]
        return cls[_day_atom(A.compose(s, b), us, es)]

    P = make_presheaf(A, values, act, name=name or "⊛".join(p.name for p in ps) or "⊛()")
    return DayProduct(P, list(ps), cls, decode)


def _map_from_raw(src, tgt_presheaf, fn):
    """A presheaf map out of a Day product, defined on raw representatives."""
    A = src.presheaf.base
    comp = {}
    for r, c in src.cls.items():
        s, us, es = src.decode[r]
        x = A.dom(s)
        v = fn(x, s, us, es)
        if (x, c) in comp and comp[(x, c)] != v:
            raise ValueError("map is not constant on a Day class")
        comp[(x, c)] = v
    return PresheafMap(src.presheaf, tgt_presheaf, comp)


def day_map(M, src, tgt, maps):
    """⊛(α_i): the Day product of presheaf maps."""
    A = M.base

    def fn(x, s, us, es):
        return tgt.class_of(s, us, tuple(al(u, e) for al, u, e in zip(maps, us, es)))

    del A
    return _map_from_raw(src, tgt.presheaf, fn)


def day_associator(M, outer, inners, flat):
    """⊛_i(⊛_j p_ij) → ⊛_ij p_ij; outer is the Day product of the inner
    products in `inners`, flat the Day product of all factors."""
    A = M.base
    shape = tuple(len(d.factors) for d in inners)

    def fn(x, s, vs, cs):
        reps = [d.rep(c) for d, c in zip(inners, cs)]
        us = tuple(u for r in reps for u in r[1])
        es = tuple(e for r in reps for e in r[2])
        t = M.tm([r[0] for r in reps])
        return flat.class_of(A.chain(M.a(shape, us), t, s), us, es)

    return _map_from_raw(outer, flat.presheaf, fn)


def day_unitor(M, p, unary):
    """p → ⊛_1(p), e ↦ [𝔦_x, e]."""
    A = p.base
    return PresheafMap(p, unary.presheaf,
                       {(x, e): unary.class_of(M.i(x), (x,), (e,))
                        for x in A.objects for e in p.at(x)})


def yoneda_map(A, m):
    """y(m): y x → y x' by postcomposition."""
    x, x2 = A.dom(m), A.cod(m)
    return PresheafMap(yoneda_object(A, x), yoneda_object(A, x2),
                       {(s, n): A.compose(m, n) for s in A.objects for n in A.hom[(s, x)]})


def ybar(M, xs, prod=None):
    """ȳ: (y x1 ⊛ ... ⊛ y xn) → y(⊘x̲) and its inverse."""
    A = M.base
    prod = prod or day_convolution(M, [yoneda_object(A, x) for x in xs])
    target = yoneda_object(A, M.t(xs))
    fwd = _map_from_raw(prod, target, lambda z, s, us, es: A.compose(M.tm(es), s))
    bwd = PresheafMap(target, prod.presheaf,
                      {(z, t): prod.class_of(t, tuple(xs), tuple(A.id(x) for x in xs))
                       for z in A.objects for t in A.hom[(z, M.t(xs))]})
    return prod, fwd, bwd


def yoneda_monoidal_structure(M):
    """All ȳ_n with iso and coherence checks; returns (isos, report)."""
    A = M.base
    isos, report = {}, []
    for n in range(M.N + 1):
        for xs in itertools.product(A.objects, repeat=n):
            prod, fwd, bwd = ybar(M, xs)
            if not (fwd.is_natural() and bwd.is_natural()):
                report.append(f"ȳ at {xs} not natural")
            if compose_maps(bwd, fwd) != identity_map(prod.presheaf) or \
                    compose_maps(fwd, bwd) != identity_map(fwd.target):
                report.append(f"ȳ at {xs} not invertible")
            isos[xs] = (prod, fwd, bwd)
    report += lax_coherence_on_presheaves(
        M, M.base.objects, lambda x: yoneda_object(A, x), lambda m: yoneda_map(A, m),
        lambda xs, prod: ybar(M, xs, prod)[1], src=M, label="ȳ")
    return isos, report


def lax_coherence_on_presheaves(M, objects, F, Fmor, compositor, src, label):
    """Lax functor axioms for F: src → ps(M.base) with Day structure.

    compositor(xs, prod) is the map prod = ⊛F(x_i) → F(⊘x̲).
    """
    report = []
    N = min(M.N, src.N)
    cache = {}

    def prod_of(key, ps):
        if key not in cache:
            cache[key] = day_convolution(M, ps)
        return cache[key]

    for shape in shapes2(N):
        for xs in itertools.product(objects, repeat=sum(shape)):
            groups = split(xs, shape)
            inners = [prod_of(("F",) + g, [F(x) for x in g]) for g in groups]
            outer = day_convolution(M, [d.presheaf for d in inners])
            flat = prod_of(("F",) + tuple(xs), [F(x) for x in xs])
            p1 = compose_maps(compositor(tuple(xs), flat), day_associator(M, outer, inners, flat))
            ys = tuple(src.t(g) for g in groups)
            middle = prod_of(("F",) + ys, [F(y) for y in ys])
            legs = [compositor(g, d) for g, d in zip(groups, inners)]
            step = day_map(M, outer, middle, legs)
            p2 = compose_maps(Fmor(src.a(shape, xs)), compose_maps(compositor(ys, middle), step))
            if p1 != p2:
                report.append(f"{label}: associativity fails at shape {shape}, leaves {xs}")
    for x in objects:
        unary = prod_of(("F", x), [F(x)])
        lhs = compose_maps(compositor((x,), unary), day_unitor(M, F(x), unary))
        if lhs != Fmor(src.i(x)):
            report.append(f"{label}: unit axiom fails at {x}")
    return report


def day_unit_iso(M, p):
    """y(e) ⊛ p → p through the Day associator and unitor; None when some
    step is not invertible."""
    e0 = day_convolution(M, [])
    p1 = day_convolution(M, [p])
    outer = day_convolution(M, [e0.presheaf, p1.presheaf])
    nested = day_convolution(M, [e0.presheaf, p])
    step1 = day_map(M, nested, outer, [identity_map(e0.presheaf), day_unitor(M, p, p1)])
    step2 = day_associator(M, outer, [e0, p1], p1)
    back = day_unitor(M, p, p1).inverse()
    if back is None:
        return nested, None
    return nested, compose_maps(back, compose_maps(step2, step1))


def day_unit_iso_right(M, p):
    e0 = day_convolution(M, [])
    p1 = day_convolution(M, [p])
    outer = day_convolution(M, [p1.presheaf, e0.presheaf])
    nested = day_convolution(M, [p, e0.presheaf])
    step1 = day_map(M, nested, outer, [day_unitor(M, p, p1), identity_map(e0.presheaf)])
    step2 = day_associator(M, outer, [p1, e0], p1)
    back = day_unitor(M, p, p1).inverse()
    if back is None:
        return nested, None
    return nested, compose_maps(back, compose_maps(step2, step1))


def day_assoc_isos(M, p, q, r):
    """(p⊛q)⊛r → ⊛(p,q,r) ← p⊛(q⊛r), both through unitors and 𝔞."""
    pq = day_convolution(M, [p, q])
    qr = day_convolution(M, [q, r])
    flat = day_convolution(M, [p, q, r])
    p1, r1 = day_convolution(M, [p]), day_convolution(M, [r])
    left_nested = day_convolution(M, [pq.presheaf, r])
    left_outer = day_convolution(M, [pq.presheaf, r1.presheaf])
    lstep = day_map(M, left_nested, left_outer, [identity_map(pq.presheaf), day_unitor(M, r, r1)])
    left = compose_maps(day_associator(M, left_outer, [pq, r1], flat), lstep)
    right_nested = day_convolution(M, [p, qr.presheaf])
    right_outer = day_convolution(M, [p1.presheaf, qr.presheaf])
    rstep = day_map(M, right_nested, right_outer, [day_unitor(M, p, p1), identity_map(qr.presheaf)])
    right = compose_maps(day_associator(M, right_outer, [p1, qr], flat), rstep)
    return left, right, flat


# ------------------------------------------------------------ monoidal curry

@dataclass
class CurryData:
    presheaves: dict       # y -> cur J y
    maps: dict             # b -> presheaf map
    compositors: dict      # ys -> (Day product, map)
    invertible: dict       # ys -> bool
    report: list

    def all_invertible(self):
        return all(self.invertible.values())


def monoidal_curry(Jm):
    J, MA, MB = Jm.underlying, Jm.src, Jm.tgt
    A, B = J.source, J.target
    N = min(MA.N, MB.N)
    cur = {y: presheaf_from_profunctor(J, y, name=f"cur{y}") for y in B.objects}
    maps = {}
    for b in B.morphisms():
        y, y2 = B.dom(b), B.cod(b)
        maps[b] = PresheafMap(cur[y], cur[y2], {(x, u): J.rho(x, u, b)
                                                for x in A.objects for u in J.at(x, y)})

    def compositor(ys, prod):
        target = cur[MB.t(ys)]
        return _map_from_raw(prod, target, lambda x, s, us, es: J.lam(
            s, Jm(tuple(zip(us, es, ys))), MB.t(ys)))

    comps, inv = {}, {}
    report = []
    for n in range(N + 1):
        for ys in itertools.product(B.objects, repeat=n):
            prod = day_convolution(MA, [cur[y] for y in ys])
            m = compositor(ys, prod)
            if not m.is_natural():
                report.append(f"compositor at {ys} not natural")
            comps[ys] = (prod, m)
            inv[ys] = m.is_iso()
    report += lax_coherence_on_presheaves(
        MA, B.objects, lambda y: cur[y], lambda b: maps[b],
        lambda ys, prod: compositor(ys, prod), src=MB, label="cur")
    return CurryData(cur, maps, comps, inv, report)


def monoidal_yoneda_check(Jm, data=None):
    """The Yoneda bijections J(x, y) ≅ hom(y x, cur J y) intertwine J_⊘ with
    the structure ȳ⁻¹ ; ⊛ ; cur J_⊘.  Returns a list of failures."""
    J, MA, MB = Jm.underlying, Jm.src, Jm.tgt
    A = J.source
    data = data or monoidal_curry(Jm)
    N = min(MA.N, MB.N)
    fails = []
    tr = _triples(J)
    for n in range(N + 1):
        for ts in itertools.product(tr, repeat=n):
            xs = tuple(t[0] for t in ts)
            ys = tuple(t[2] for t in ts)
            alphas = [yoneda_element_map(A, data.presheaves[y], x, u) for x, u, y in ts]
            yprod, _, ybinv = ybar(MA, xs)
            cprod, cmap = data.compositors[ys]
            step = day_map(MA, yprod, cprod, alphas)
            lhs = compose_maps(cmap, compose_maps(step, ybinv))
            rhs = yoneda_element_map(A, data.presheaves[MB.t(ys)], MA.t(xs), Jm(ts))
            if lhs.comp != rhs.comp:
                fails.append(ts)
    return fails


# --------------------------------------------------------- Beck-Chevalley

def tensor_power(J, n):
    """J^n: A^n ⇸ B^n, with the decoding of its elements."""
    A, B = J.source, J.target
    PA, PB = product_category([A] * n), product_category([B] * n)
    if n == 0:
        e = "⟨⟩"
        P = make_profunctor(PA, PB, {(PA.objects[0], PB.objects[0]): [e]},
                            lambda a, u, y: u, lambda x, u, b: u, name=f"{J.name}^0")
        return P, {e: ()}, PA, PB
    decode = {}
    elems = {}
    for xs in itertools.product(A.objects, repeat=n):
        for ys in itertools.product(B.objects, repeat=n):
            us_list = []
            for us in itertools.product(*[J.at(x, y) for x, y in zip(xs, ys)]):
                atom = tup(*us)
                decode[atom] = tuple(us)
                us_list.append(atom)
            elems[(tup(*xs), tup(*ys))] = us_list
    # decode product morphisms and objects
    mor_a = {tup(*ms): ms for ms in itertools.product(A.morphisms(), repeat=n)}
    mor_b = {tup(*ms): ms for ms in itertools.product(B.morphisms(), repeat=n)}
    obj_b = {tup(*ys): ys for ys in itertools.product(B.objects, repeat=n)}
    obj_a = {tup(*xs): xs for xs in itertools.product(A.objects, repeat=n)}

    def lam(a, u, y):
        return tup(*[J.lam(ai, ui, yi) for ai, ui, yi in zip(mor_a[a], decode[u], obj_b[y])])

    def rho(x, u, b):
        return tup(*[J.rho(xi, ui, bi) for xi, ui, bi in zip(obj_a[x], decode[u], mor_b[b])])

    P = make_profunctor(PA, PB, elems, lam, rho, name=f"{J.name}^{n}")
    return P, decode, PA, PB


def structure_cell(Jm, n):
    """J̄_n: J^n ⇒ J along ⊘_n on both sides."""
    J = Jm.underlying
    P, decode, PA, PB = tensor_power(J, n)
    fa, fb = Jm.src.tensor_functor(n), Jm.tgt.tensor_functor(n)
    fr = CellFrame((P,), fa, fb, J)
    A, B = J.source, J.target
    obj_a = {tup(*xs): xs for xs in itertools.product(A.objects, repeat=n)} if n else {PA.objects[0]: ()}
    obj_b = {tup(*ys): ys for ys in itertools.product(B.objects, repeat=n)} if n else {PB.objects[0]: ()}

    def value(k):
        xs, us, ys = obj_a[k[0]], decode[k[1]], obj_b[k[2]]
        return Jm(tuple(zip(xs, us, ys)))

    return Cell(fr, {k: value(k) for k in fr.keys()}, name=f"J̄{n}")


def monoidal_beck_chevalley(Jm):
    """Exact: each structure cell J̄_n satisfies left Beck-Chevalley, i.e. the
    comparison from (⊘_n^* ⊙ J^n) to J(−, ⊘−) is bijective."""
    N = min(Jm.src.N, Jm.tgt.N)
    for n in range(N + 1):
        res = satisfies_left_beck_chevalley(structure_cell(Jm, n))
        if not res.holds:
            return CheckResult(FAILS, res.witness, f"arity {n}: {res.detail}")
    return CheckResult(HOLDS_EXACT)


# ---------------------------------------------------- doctrinal adjunction

def triangle_identities(f, g, unit, counit):
    A, C = f.source, f.target
    v = []
    for x in A.objects:
        if C.compose(counit[f.ob(x)], f.mor(unit[x])) != C.id(f.ob(x)):
            v.append(f"triangle identity fails at {x}")
    for c in C.objects:
        if A.compose(g.mor(counit[c]), unit[g.ob(c)]) != A.id(g.ob(c)):
            v.append(f"triangle identity fails at {c}")
    return v


def doctrinal_right_adjoint(f, g, unit, counit):
    """Mate of the inverse compositors of f:
    ⊘g c̲ → g f ⊘g c̲ → g ⊘ f g c̲ → g ⊘ c̲."""
    unit = getattr(unit, "components", unit)
    counit = getattr(counit, "components", counit)
    errs = triangle_identities(f.underlying, g, unit, counit)
    if errs:
        raise ValueError("triangle identities fail: " + "; ".join(errs[:3]))
    inv = invert_compositors(f)
    if inv is None:
        raise ValueError("f is not pseudo: some compositor is not invertible")
    MA, MC = f.src, f.tgt
    A = MA.base
    N = min(MA.N, MC.N)
    comp = {}
    for n in range(N + 1):
        for cs in itertools.product(MC.base.objects, repeat=n):
            gcs = tuple(g.ob(c) for c in cs)
            comp[cs] = A.chain(g.mor(MC.tm([counit[c] for c in cs])), g.mor(inv[gcs]),
                               unit[MA.t(gcs)])
    return LaxMonoidalFunctor(g, MC, MA, comp, "lax", name=f"{g.name}_lifted")


def adjunction_t_cells(f, glax, unit, counit):
    """T-cell axioms for the unit and counit; returns the failures."""
    from .fincore import NatTransformation
    idA, idC = identity_lax(f.src), identity_lax(f.tgt)
    gf, fg = compose_lax(glax, f), compose_lax(f, glax)
    u = NatTransformation(idA.underlying, gf.underlying, dict(getattr(unit, "components", unit)))
    c = NatTransformation(fg.underlying, idC.underlying, dict(getattr(counit, "components", counit)))
    return (validate_monoidal_transformation(u, idA, gf)
            + validate_monoidal_transformation(c, fg, idC))


# ------------------------------------------------------------- Kan lifting

@dataclass
class LiftResult:
    functor: object = None
    failed_hypothesis: str = ""
    detail: str = ""


def _power_functor(d, n):
    A, M = d.source, d.target
    PA, PM = product_category([A] * n), product_category([M] * n)
    if n == 0:
        return FinFunctor(PA, PM, {PA.objects[0]: PM.objects[0]},
                          {PA.morphisms()[0]: PM.morphisms()[0]})
    om = {tup(*xs): tup(*[d.ob(x) for x in xs]) for xs in itertools.product(A.objects, repeat=n)}
    mm = {tup(*ms): tup(*[d.mor(m) for m in ms]) for ms in itertools.product(A.morphisms(), repeat=n)}
    return FinFunctor(PA, PM, om, mm)


def preservation_check(d, w, Jm):
    """Hypothesis (p) at arity ≤ N: ⊘_M applied to η is again a pointwise
    left Kan extension, i.e. for each y̲ the cocone ⊘_M(η u̲) exhibits
    ⊘_M(l y̲) as the weighted colimit.  Returns None or a diagnostic."""
    J = Jm.underlying
    MM = d.tgt
    A, B = J.source, J.target
    eta, l = w.cell, w.extension
    N = min(Jm.src.N, Jm.tgt.N, MM.N)
    for n in range(N + 1):
        P, decode, PA, PB = tensor_power(J, n)
        dn = compose_functors(MM.tensor_functor(n), _power_functor(d.underlying, n))
        obj_a = {tup(*xs): xs for xs in itertools.product(A.objects, repeat=n)} if n else {PA.objects[0]: ()}
        for ys in itertools.product(B.objects, repeat=n):
            yatom = tup(*ys) if n else PB.objects[0]
            W = restrict_profunctor(P, identity_functor(PA), point(PB, yatom))
            cocone = {}
            for xa in PA.objects:
                for u in W.at(xa, "*"):
                    xs, us = obj_a[xa], decode[u]
                    cocone[(xa, u)] = MM.tm([eta.comp[(x, ui, y)] for x, ui, y in zip(xs, us, ys)])
            bad = is_weighted_colimit(W, dn, MM.t([l.ob(y) for y in ys]), cocone)
            if bad is not None:
                return f"arity {n}, y̲ = {ys}: ⊘ does not preserve the colimit (test object {bad[0]})"
    return None


def lift_lax_structure_on_kan(d, w, Jm, MM=None):
    """Compositors l̄ on the extension l, as the unique factorisations of
    η(J_⊘ u̲)∘d̄ through ⊘_M(η u̲).  Declines with the failed hypothesis."""
    from .kan import check_pointwise_lan
    MM = MM or d.tgt
    res = check_pointwise_lan(w)
    if not res.holds:
        return LiftResult(None, "pointwise", "the Kan cell is not pointwise: " + res.detail)
    diag = preservation_check(d, w, Jm)
    if diag is not None:
        return LiftResult(None, "preservation (p)", diag)
    J = Jm.underlying
    B, M = J.target, MM.base
    eta, l = w.cell, w.extension
    N = min(Jm.src.N, Jm.tgt.N, MM.N)
    tr = _triples(J)
    comp = {}
    for n in range(N + 1):
        for ys in itertools.product(B.objects, repeat=n):
            src_obj, tgt_obj = MM.t([l.ob(y) for y in ys]), l.ob(Jm.tgt.t(ys))
            conds = []
            for ts in itertools.product(*[[t for t in tr if t[2] == y] for y in ys]):
                xs = tuple(t[0] for t in ts)
                lhs = MM.tm([eta.comp[t] for t in ts])
                rhs = M.compose(eta.comp[(Jm.src.t(xs), Jm(ts), Jm.tgt.t(ys))], d(xs))
                conds.append((lhs, rhs))
            hits = [m for m in M.hom[(src_obj, tgt_obj)]
                    if all(M.compose(m, a) == b for a, b in conds)]
            if len(hits) != 1:
                return LiftResult(None, "factorisation",
                                  f"{len(hits)} factorisations at {ys}")
            comp[ys] = hits[0]
    return LiftResult(LaxMonoidalFunctor(l, Jm.tgt, MM, comp, "lax", name="l"))


def kan_t_cell_check(d, lifted, w, Jm):
    """The T-cell equation l̄∘⊘(η u̲) = η(J_⊘ u̲)∘d̄ on all tuples."""
    J = Jm.underlying
    M = d.tgt.base
    eta = w.cell
    fails = []
    tr = _triples(J)
    for n in range(min(Jm.src.N, d.tgt.N) + 1):
        for ts in itertools.product(tr, repeat=n):
            xs, ys = tuple(t[0] for t in ts), tuple(t[2] for t in ts)
            lhs = M.compose(lifted(ys), d.tgt.tm([eta.comp[t] for t in ts]))
            rhs = M.compose(eta.comp[(Jm.src.t(xs), Jm(ts), Jm.tgt.t(ys))], d(xs))
            if lhs != rhs:
                fails.append(ts)
    return fails
