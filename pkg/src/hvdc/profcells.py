"""Profunctors between finite categories and cells of arity (n, ≤1).

A cell key is the alternating tuple (x0, u1, x1, ..., un, xn) of objects
and elements; for n = 0 it is just (x0,).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fincore import (Budget, FinCategory, FinFunctor, compose_functors,
                      identity_functor)


@dataclass(eq=False)
class Profunctor:
    source: FinCategory
    target: FinCategory
    elems: dict     # (x, y) -> tuple of atoms
    lact: dict      # (a, u, y) -> λ(a, u), a: x' → x, u ∈ J(x, y)
    ract: dict      # (x, u, b) -> ρ(u, b), b: y → y'
    name: str = ""

    def __post_init__(self):
        self.elems = {(x, y): tuple(sorted(self.elems.get((x, y), ())))
                      for x in self.source.objects for y in self.target.objects}

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Profunctor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.elems == other.elems and self.lact == other.lact
                and self.ract == other.ract)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Profunctor({self.name or '?'}: {self.source.name} ⇸ {self.target.name})"

    def at(self, x, y):
        return self.elems[(x, y)]

    def lam(self, a, u, y):
        return self.lact[(a, u, y)]

    def rho(self, x, u, b):
        return self.ract[(x, u, b)]

    def size(self):
        return sum(len(v) for v in self.elems.values())


def make_profunctor(A, B, elems, lam, rho, name=""):
    """Fill the action tables from functions lam(a, u, y) and rho(x, u, b)."""
    J = Profunctor(A, B, dict(elems), {}, {}, name)
    for (x, y), us in J.elems.items():
        for u in us:
            for a in A.into(x):
                J.lact[(a, u, y)] = lam(a, u, y)
            for b in B.out_of(y):
                J.ract[(x, u, b)] = rho(x, u, b)
    return J


def hom_profunctor(A, name=None):
    return make_profunctor(A, A, dict(A.hom),
                           lambda a, u, y: A.compose(u, a),
                           lambda x, u, b: A.compose(b, u),
                           name=name or f"I_{A.name}")


def restrict_profunctor(K, f, g, name=None):
    """K(f, g)(x, y) = K(fx, gy); elements keep their names."""
    A, B = f.source, g.source
    elems = {(x, y): K.at(f.ob(x), g.ob(y)) for x in A.objects for y in B.objects}
    return make_profunctor(A, B, elems,
                           lambda a, u, y: K.lam(f.mor(a), u, g.ob(y)),
                           lambda x, u, b: K.rho(f.ob(x), u, g.mor(b)),
                           name=name or f"{K.name}({f.name},{g.name})")


def hom_restrict(C, f, g, name=None):
    """C(f, g) as a profunctor."""
    return restrict_profunctor(hom_profunctor(C), f, g, name=name or f"{C.name}({f.name},{g.name})")


def validate_profunctor(J):
    A, B = J.source, J.target
    v = []
    for (x, y), us in J.elems.items():
        for u in us:
            for a in A.into(x):
                w = J.lact.get((a, u, y))
                if w not in J.at(A.dom(a), y):
                    v.append(f"λ({a},{u}) missing or mistyped")
            for b in B.out_of(y):
                w = J.ract.get((x, u, b))
                if w not in J.at(x, B.cod(b)):
                    v.append(f"ρ({u},{b}) missing or mistyped")
    if v:
        return v
    for (x, y), us in J.elems.items():
        for u in us:
            if J.lam(A.id(x), u, y) != u:
                v.append(f"left unit axiom fails: λ(id_{x},{u}) = {J.lam(A.id(x), u, y)}")
            if J.rho(x, u, B.id(y)) != u:
                v.append(f"right unit axiom fails: ρ({u},id_{y}) = {J.rho(x, u, B.id(y))}")
            for a in A.into(x):
                for a2 in A.into(A.dom(a)):
                    if J.lam(a2, J.lam(a, u, y), y) != J.lam(A.compose(a, a2), u, y):
                        v.append(f"left associativity fails at ({a2},{a},{u})")
                for b in B.out_of(y):
                    if J.rho(A.dom(a), J.lam(a, u, y), b) != J.lam(a, J.rho(x, u, b), B.cod(b)):
                        v.append(f"compatibility fails at ({a},{u},{b})")
            for b in B.out_of(y):
                for b2 in B.out_of(B.cod(b)):
                    if J.rho(x, J.rho(x, u, b), b2) != J.rho(x, u, B.compose(b2, b)):
                        v.append(f"right associativity fails at ({u},{b},{b2})")
    return v


# ----------------------------------------------------------------- frames

@dataclass(eq=False)
class CellFrame:
    src: tuple                 # Profunctors J1..Jn
    left: FinFunctor
    right: FinFunctor
    tgt: object                # Profunctor (unary) or FinCategory (nullary)
    _keys: list = field(default=None, repr=False)

    def __post_init__(self):
        self.src = tuple(self.src)

    def __eq__(self, other):
        if self is other:
            return True
        return (len(self.src) == len(other.src)
                and all(a == b for a, b in zip(self.src, other.src))
                and self.left == other.left and self.right == other.right
                and type(self.tgt) is type(other.tgt) and self.tgt == other.tgt)

    __hash__ = object.__hash__

    @property
    def nullary(self):
        return isinstance(self.tgt, FinCategory)

    def cats(self):
        if not self.src:
            return [self.left.source]
        return [self.src[0].source] + [J.target for J in self.src]

    def check(self):
        cats = self.cats()
        errs = []
        for J, K in zip(self.src, self.src[1:]):
            if J.target != K.source:
                errs.append(f"source path not composable at {J.name}, {K.name}")
        if self.left.source != cats[0]:
            errs.append("left vertical has the wrong source")
        if self.right.source != cats[-1]:
            errs.append("right vertical has the wrong source")
        if self.nullary:
            if self.left.target != self.tgt or self.right.target != self.tgt:
                errs.append("verticals do not land in the target category")
        else:
            if self.left.target != self.tgt.source or self.right.target != self.tgt.target:
                errs.append("verticals do not match the target profunctor")
        return errs

    def keys(self):
        if self._keys is None:
            out = []
            cats = self.cats()

            def rec(prefix, i):
                if i == len(self.src):
                    out.append(tuple(prefix))
                    return
                J = self.src[i]
                x = prefix[-1]
                for y in cats[i + 1].objects:
                    for u in J.at(x, y):
                        rec(prefix + [u, y], i + 1)

            for x0 in cats[0].objects:
                rec([x0], 0)
            self._keys = out
        return self._keys

    # target operations
    def tgt_set(self, c, d):
        if self.nullary:
            return self.tgt.hom[(c, d)]
        return self.tgt.at(c, d)

    def tgt_lam(self, m, v, d):
        if self.nullary:
            return self.tgt.compose(v, m)
        return self.tgt.lam(m, v, d)

    def tgt_rho(self, c, v, m):
        if self.nullary:
            return self.tgt.compose(m, v)
        return self.tgt.rho(c, v, m)

    def codomain(self, key):
        return self.tgt_set(self.left.ob(key[0]), self.right.ob(key[-1]))

    def describe(self):
        t = self.tgt.name + (" (nullary)" if self.nullary else "")
        return f"({', '.join(J.name for J in self.src)}) ⇒ {t} along {self.left.name}, {self.right.name}"


def frame_constraints(frame):
    """Equivariance conditions as triples.

    ("map", k, k2, fn) means φ(k2) = fn(φ(k));
    ("rel", k, k2, pred) means pred(φ(k), φ(k2)).
    """
    cats = frame.cats()
    n = len(frame.src)
    f, g = frame.left, frame.right
    out = []
    keys = frame.keys()
    if n == 0:
        A = cats[0]
        for a in A.morphisms():
            x1, x0 = A.dom(a), A.cod(a)
            fa, ga = f.mor(a), g.mor(a)
            c1 = f.ob(x1)
            # ρ(φ_{x'}, g a) = λ(f a, φ_x)
            out.append(("rel", (x1,), (x0,),
                        lambda v1, v0, fa=fa, ga=ga, c1=c1, d0=g.ob(x0):
                        frame.tgt_rho(c1, v1, ga) == frame.tgt_lam(fa, v0, d0)))
        return out
    for k in keys:
        x0, xn = k[0], k[-1]
        J1, Jn = frame.src[0], frame.src[-1]
        for a in cats[0].into(x0):
            k2 = (cats[0].dom(a), J1.lam(a, k[1], k[2])) + k[2:]
            out.append(("map", k, k2,
                        lambda v, fa=f.mor(a), d=g.ob(xn): frame.tgt_lam(fa, v, d)))
        for b in cats[-1].out_of(xn):
            k2 = k[:-2] + (Jn.rho(k[-3], k[-2], b), cats[-1].cod(b))
            out.append(("map", k, k2,
                        lambda v, gb=g.mor(b), c=f.ob(x0): frame.tgt_rho(c, v, gb)))
        # internal: k plays the role (.., ρ(u, a), x', v, ..)
        for i in range(1, n):
            Ji = frame.src[i - 1]
            C = cats[i]
            xprev, ui, xi = k[2 * i - 2], k[2 * i - 1], k[2 * i]
            v = k[2 * i + 1]
            Jnext = frame.src[i]
            for a in C.into(xi):
                z = C.dom(a)
                for u in Ji.at(xprev, z):
                    if Ji.rho(xprev, u, a) == ui:
                        k2 = k[:2 * i - 1] + (u, z, Jnext.lam(a, v, k[2 * i + 2])) + k[2 * i + 2:]
                        if k2 != k:
                            out.append(("map", k, k2, None))
    return out


# ------------------------------------------------------------------ cells

@dataclass(eq=False)
class Cell:
    frame: CellFrame
    comp: dict
    flags: frozenset = frozenset()
    name: str = ""

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Cell):
            return NotImplemented
        return self.comp == other.comp and self.frame == other.frame

    __hash__ = object.__hash__

    def __call__(self, *key):
        return self.comp[tuple(key)]

    def __repr__(self):
        return f"Cell({self.name or '?'}: {self.frame.describe()})"

    @property
    def src(self):
        return self.frame.src

    @property
    def left(self):
        return self.frame.left

    @property
    def right(self):
        return self.frame.right

    @property
    def tgt(self):
        return self.frame.tgt

    @property
    def nullary(self):
        return self.frame.nullary

    def signature(self):
        return tuple(sorted(self.comp.items()))


def validate_cell(phi):
    fr = phi.frame
    errs = fr.check()
    if errs:
        raise ValueError("frame mismatch: " + "; ".join(errs))
    v = []
    keys = fr.keys()
    if set(keys) != set(phi.comp):
        raise ValueError("frame mismatch: components are not indexed by the frame's element tuples")
    for k in keys:
        if phi.comp[k] not in fr.codomain(k):
            v.append(f"component at {k} lies outside the target")
    if v:
        return v
    for kind, k, k2, data in frame_constraints(fr):
        a, b = phi.comp[k], phi.comp[k2]
        if kind == "rel":
            if not data(a, b):
                v.append(f"naturality fails between {k} and {k2}")
        elif data is None:
            if a != b:
                v.append(f"internal equivariance fails between {k} and {k2}")
        elif data(a) != b:
            v.append(f"external equivariance fails from {k} to {k2}")
    return v


def make_cell(frame, fn, flags=(), name="", check=True):
    c = Cell(frame, {k: fn(k) for k in frame.keys()}, frozenset(flags), name)
    if check:
        errs = validate_cell(c)
        if errs:
            raise ValueError("invalid cell: " + "; ".join(errs[:5]))
    return c


def enumerate_cells(frame, budget=None):
    """All equivariant families on the frame, in a deterministic order."""
    errs = frame.check()
    if errs:
        raise ValueError("frame mismatch: " + "; ".join(errs))
    budget = budget or Budget("enumerate_cells")
    keys = frame.keys()
    pos = {k: i for i, k in enumerate(keys)}
    forced = {k: [] for k in keys}     # constraints that force the value at k
    checks = {k: [] for k in keys}     # constraints checked when k is assigned
    for kind, k, k2, data in frame_constraints(frame):
        last = k if pos[k] >= pos[k2] else k2
        if kind == "map" and pos[k] < pos[k2]:
            forced[k2].append((k, data))
        else:
            checks[last].append((kind, k, k2, data))
    cands = [frame.codomain(k) for k in keys]
    out = []
    val = {}

    def rec(i):
        if i == len(keys):
            out.append(Cell(frame, dict(val)))
            return
        k = keys[i]
        options = cands[i]
        for src, fn in forced[k]:
            w = val[src] if fn is None else fn(val[src])
            options = (w,) if w in options else ()
            break
        for w in options:
            budget.tick()
            val[k] = w
            ok = True
            for src, fn in forced[k][1:]:
                if (val[src] if fn is None else fn(val[src])) != w:
                    ok = False
                    break
            if ok:
                for kind, a, b, data in checks[k]:
                    va, vb = val[a], val[b]
                    if kind == "rel":
                        if not data(va, vb):
                            ok = False
                            break
                    elif (va if data is None else data(va)) != vb:
                        ok = False
                        break
            if ok:
                rec(i + 1)
            del val[k]

    rec(0)
    return out


# ----------------------------------------------------------- identities

def identity_cell(J):
    fr = CellFrame((J,), identity_functor(J.source), identity_functor(J.target), J)
    return Cell(fr, {k: k[1] for k in fr.keys()}, frozenset({"cartesian", "cocartesian"}),
                name=f"id_{J.name}")


def identity_vertical_cell(f):
    C = f.target
    fr = CellFrame((), f, f, C)
    return Cell(fr, {(x,): C.id(f.ob(x)) for x in f.source.objects}, name=f"id_{f.name}")


def vertical_cell(t):
    """A natural transformation as a nullary cell with empty source."""
    F, G = t.source, t.target
    fr = CellFrame((), F, G, F.target)
    return Cell(fr, {(x,): t[x] for x in F.source.objects})


# ---------------------------------------------------------- composition

def _same(a, b):
    return a is b or a == b


def vertical_compose(psi, phis):
    """ψ∘(φ1, ..., φn); nullary φ's are absorbed by the actions."""
    phis = list(phis)
    if not phis:
        raise ValueError("frame mismatch: empty list of cells")
    targets = [p.tgt for p in phis if not p.nullary]
    if len(targets) != len(psi.src) or not all(_same(a, b) for a, b in zip(targets, psi.src)):
        raise ValueError("frame mismatch: targets of the cells do not form the source of ψ")
    for p, q in zip(phis, phis[1:]):
        if not _same(p.right, q.left):
            raise ValueError("frame mismatch: adjacent verticals differ")
    cats = psi.frame.cats()
    # category each φ lands in
    j = 0
    for p in phis:
        if p.nullary:
            if not _same(p.tgt, cats[j]):
                raise ValueError("frame mismatch: nullary cell lands in the wrong category")
        else:
            j += 1
    if not _same(phis[0].left.target, cats[0]) or not _same(phis[-1].right.target, cats[-1]):
        raise ValueError("frame mismatch: outer verticals")
    src = tuple(J for p in phis for J in p.src)
    fr = CellFrame(src, compose_functors(psi.left, phis[0].left),
                   compose_functors(psi.right, phis[-1].right), psi.tgt)
    spans = []
    s = 0
    for p in phis:
        spans.append((2 * s, 2 * (s + len(p.src)) + 1))
        s += len(p.src)

    def value(k):
        key = []
        pending = None
        j = 0
        for p, (lo, hi) in zip(phis, spans):
            out = p.comp[k[lo:hi]]
            if p.nullary:
                pending = out if pending is None else cats[j].compose(out, pending)
                continue
            K = psi.src[j]
            a, b = p.left.ob(k[lo]), p.right.ob(k[hi - 1])
            if pending is not None:
                out = K.lam(pending, out, b)
                a = cats[j].dom(pending)
                pending = None
            if not key:
                key = [a]
            key += [out, b]
            j += 1
        if not key:
            c = cats[0].dom(pending)
            base = psi.comp[(c,)]
            m = psi.right.mor(pending)
            if psi.nullary:
                return psi.tgt.compose(m, base)
            return psi.tgt.rho(psi.left.ob(c), base, m)
        if pending is not None:
            K = psi.src[-1]
            key[-2] = K.rho(key[-3], key[-2], pending)
            key[-1] = cats[-1].cod(pending)
        return psi.comp[tuple(key)]

    return Cell(fr, {k: value(k) for k in fr.keys()})


def horizontal_compose(phi, psi):
    """φ⋆ψ := id∘(φ, ψ)."""
    if not _same(phi.right, psi.left):
        raise ValueError("boundary mismatch: right vertical of φ differs from left vertical of ψ")
    if not phi.nullary and not psi.nullary:
        raise ValueError("target arity > 1")
    if not phi.nullary:
        ident = identity_cell(phi.tgt)
    elif not psi.nullary:
        ident = identity_cell(psi.tgt)
    else:
        ident = identity_vertical_cell(identity_functor(phi.tgt))
    return vertical_compose(ident, [phi, psi])


def whisker_cell(h, phi):
    """Apply a functor h to the values of a nullary cell."""
    if not phi.nullary:
        raise ValueError("whiskering needs a nullary cell")
    fr = CellFrame(phi.src, compose_functors(h, phi.left), compose_functors(h, phi.right), h.target)
    return Cell(fr, {k: h.mor(v) for k, v in phi.comp.items()})


def precompose_vertical(phi, h, k=None):
    """φ∘(id_h) for cells with empty source: reindex along h."""
    if phi.src:
        raise ValueError("reindexing needs an empty source")
    fr = CellFrame((), compose_functors(phi.left, h), compose_functors(phi.right, h), phi.tgt)
    return Cell(fr, {(x,): phi.comp[(h.ob(x),)] for x in h.source.objects})


def cartesian_restriction(K, f, g, name=None):
    """The restriction K(f, g) with its cartesian cell (identity components).

    K may also be a category C, giving the nullary restriction C(f, g) ⇒ C.
    """
    if isinstance(K, FinCategory):
        R = hom_restrict(K, f, g, name=name)
    else:
        R = restrict_profunctor(K, f, g, name=name)
    fr = CellFrame((R,), f, g, K)
    cell = Cell(fr, {k: k[1] for k in fr.keys()}, frozenset({"cartesian"}),
                name=f"cart_{R.name}")
    return R, cell
