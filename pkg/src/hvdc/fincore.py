"""Finite sets, finite categories, functors and natural transformations.

Everything is given by complete tables of string atoms.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field


class EnumerationLimit(RuntimeError):
    """Raised when a search would exceed the enumeration guard."""


def max_enum():
    return int(os.environ.get("HVDC_MAX_ENUM", 10**7))


class Budget:
    # counts search nodes against the guard
    def __init__(self, what, limit=None):
        self.what = what
        self.limit = max_enum() if limit is None else limit
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise EnumerationLimit(
                f"{self.what}: more than {self.limit} search nodes "
                "(raise HVDC_MAX_ENUM to continue)")


def tup(*parts):
    """Encode a tuple of atoms as a single atom."""
    return "⟨" + ",".join(parts) + "⟩"


# ---------------------------------------------------------------- sets

@dataclass(frozen=True)
class FinSet:
    elements: tuple

    def __init__(self, elements=()):
        elems = tuple(sorted(set(elements)))
        object.__setattr__(self, "elements", elems)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements


@dataclass(frozen=True)
class FinFunction:
    source: FinSet
    target: FinSet
    table: dict

    def __call__(self, x):
        return self.table[x]

    def is_valid(self):
        return (set(self.table) == set(self.source.elements)
                and all(v in self.target for v in self.table.values()))


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the least atom as root so representatives are canonical
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


def quotient(X, pairs):
    """Quotient X by the equivalence generated by pairs.

    Returns the set of class representatives (least atom of each class)
    and the projection onto it.
    """
    X = X if isinstance(X, FinSet) else FinSet(X)
    uf = UnionFind(X.elements)
    for a, b in pairs:
        if a not in uf.parent or b not in uf.parent:
            raise KeyError(f"unknown atom in pair ({a!r}, {b!r})")
        uf.union(a, b)
    table = {x: uf.find(x) for x in X}
    Q = FinSet(table.values())
    return Q, FinFunction(X, Q, table)


def enumerate_functions(X, Y):
    X = X if isinstance(X, FinSet) else FinSet(X)
    Y = Y if isinstance(Y, FinSet) else FinSet(Y)
    out = []
    for image in itertools.product(Y.elements, repeat=len(X)):
        out.append(FinFunction(X, Y, dict(zip(X.elements, image))))
    return out


# ---------------------------------------------------------- categories

@dataclass(eq=False)
class FinCategory:
    objects: tuple
    hom: dict          # (a, b) -> tuple of morphism atoms
    identity: dict     # a -> atom
    comp: dict         # (g, f) -> g∘f
    name: str = ""
    _dom: dict = field(default=None, repr=False)
    _cod: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.objects = tuple(sorted(self.objects))
        self.hom = {(a, b): tuple(sorted(self.hom.get((a, b), ())))
                    for a in self.objects for b in self.objects}
        self._dom, self._cod = {}, {}
        for (a, b), ms in self.hom.items():
            for m in ms:
                self._dom.setdefault(m, a)
                self._cod.setdefault(m, b)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects and self.hom == other.hom
                and self.identity == other.identity and self.comp == other.comp)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} obj, {len(self._dom)} mor)"

    def dom(self, m):
        return self._dom[m]

    def cod(self, m):
        return self._cod[m]

    def id(self, x):
        return self.identity[x]

    def compose(self, g, f):
        """g∘f"""
        return self.comp[(g, f)]

    def chain(self, *ms):
        # chain(h, g, f) = h∘g∘f
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.comp[(m, out)]
        return out

    def morphisms(self):
        return sorted(self._dom)

    def homset(self, a, b):
        return self.hom[(a, b)]

    def out_of(self, a):
        return [m for b in self.objects for m in self.hom[(a, b)]]

    def into(self, b):
        return [m for a in self.objects for m in self.hom[(a, b)]]

    def composable(self):
        for f in self.morphisms():
            for g in self.out_of(self.cod(f)):
                yield g, f

    def inverse(self, m):
        a, b = self.dom(m), self.cod(m)
        for n in self.hom[(b, a)]:
            if self.comp[(n, m)] == self.identity[a] and self.comp[(m, n)] == self.identity[b]:
                return n
        return None


def validate_category(C):
    v = []
    seen = {}
    for (a, b), ms in C.hom.items():
        for m in ms:
            if m in seen:
                v.append(f"morphism {m} lies in both hom{seen[m]} and hom{(a, b)}")
            seen[m] = (a, b)
    for x in C.objects:
        i = C.identity.get(x)
        if i is None or i not in C.hom[(x, x)]:
            v.append(f"identity of {x} missing or not in hom({x},{x})")
    if v:
        return v
    for g, f in C.composable():
        h = C.comp.get((g, f))
        if h is None:
            v.append(f"composite ({g},{f}) undefined")
        elif h not in C.hom[(C.dom(f), C.cod(g))]:
            v.append(f"composite ({g},{f}) = {h} has the wrong boundary")
    if v:
        return v
    for m in C.morphisms():
        if C.comp[(m, C.id(C.dom(m)))] != m:
            v.append(f"right unit fails at ({m},{C.id(C.dom(m))})")
        if C.comp[(C.id(C.cod(m)), m)] != m:
            v.append(f"left unit fails at ({C.id(C.cod(m))},{m})")
    for g, f in C.composable():
        for h in C.out_of(C.cod(g)):
            if C.comp[(h, C.comp[(g, f)])] != C.comp[(C.comp[(h, g)], f)]:
                v.append(f"associativity fails at ({h},{g},{f})")
    return v


def make_category(objects, hom, identity, comp, name="", check=True):
    C = FinCategory(tuple(objects), dict(hom), dict(identity), dict(comp), name)
    if check:
        errs = validate_category(C)
        if errs:
            raise ValueError("invalid category: " + "; ".join(errs[:5]))
    return C


def opposite(C):
    hom = {(b, a): ms for (a, b), ms in C.hom.items()}
    comp = {(f, g): h for (g, f), h in C.comp.items()}
    return FinCategory(C.objects, hom, dict(C.identity), comp,
                       name=(C.name[:-3] if C.name.endswith("^op") else C.name + "^op"))


def terminal_category():
    return make_category(["*"], {("*", "*"): ["id*"]}, {"*": "id*"},
                         {("id*", "id*"): "id*"}, name="1")


def discrete_category(objects, name="discrete"):
    objs = sorted(objects)
    return make_category(
        objs, {(x, x): ["id" + x] for x in objs}, {x: "id" + x for x in objs},
        {("id" + x, "id" + x): "id" + x for x in objs}, name=name)


def poset_category(objects, leq, name="poset"):
    """Thin category of a preorder; leq is a set of pairs, closed up here."""
    objs = sorted(objects)
    rel = set(leq) | {(x, x) for x in objs}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True

    def arrow(a, b):
        return "id" + a if a == b else f"{a}<{b}"

    hom = {(a, b): [arrow(a, b)] for (a, b) in rel}
    comp = {}
    for (a, b) in rel:
        for (c, d) in rel:
            if b == c:
                comp[(arrow(c, d), arrow(a, b))] = arrow(a, d)
    return make_category(objs, hom, {x: arrow(x, x) for x in objs}, comp, name=name)


def monoid_category(elements, mult, unit, name="monoid"):
    """One-object category from a finite monoid given by mult(a, b) = a·b."""
    ms = sorted(elements)
    comp = {(g, f): mult(g, f) for g in ms for f in ms}
    return make_category(["*"], {("*", "*"): ms}, {"*": unit}, comp, name=name)


# ------------------------------------------------------------ functors

@dataclass(eq=False)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    obj_map: dict
    mor_map: dict
    name: str = ""

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"FinFunctor({self.name or '?'}: {self.source.name} -> {self.target.name})"

    def __call__(self, x):
        if x in self.obj_map:
            return self.obj_map[x]
        return self.mor_map[x]

    def ob(self, x):
        return self.obj_map[x]

    def mor(self, m):
        return self.mor_map[m]


def validate_functor(F):
    A, B = F.source, F.target
    v = []
    for x in A.objects:
        if F.obj_map.get(x) not in B.objects:
            v.append(f"object {x} not sent to an object")
    if v:
        return v
    for m in A.morphisms():
        im = F.mor_map.get(m)
        if im not in B.hom[(F.ob(A.dom(m)), F.ob(A.cod(m)))]:
            v.append(f"morphism {m} not sent into hom({F.ob(A.dom(m))},{F.ob(A.cod(m))})")
    if v:
        return v
    for x in A.objects:
        if F.mor(A.id(x)) != B.id(F.ob(x)):
            v.append(f"identity of {x} not preserved")
    for g, f in A.composable():
        if F.mor(A.compose(g, f)) != B.compose(F.mor(g), F.mor(f)):
            v.append(f"composite ({g},{f}) not preserved")
    return v


def identity_functor(A):
    return FinFunctor(A, A, {x: x for x in A.objects}, {m: m for m in A.morphisms()},
                      name="id")


def compose_functors(G, F):
    """G∘F"""
    return FinFunctor(F.source, G.target,
                      {x: G.ob(y) for x, y in F.obj_map.items()},
                      {m: G.mor(n) for m, n in F.mor_map.items()},
                      name=f"{G.name}∘{F.name}")


def constant_functor(A, B, b, name=None):
    return FinFunctor(A, B, {x: b for x in A.objects},
                      {m: B.id(b) for m in A.morphisms()}, name=name or f"const_{b}")


def point(B, b):
    """The functor 𝟙 → B picking b."""
    return constant_functor(terminal_category(), B, b, name=f"pick_{b}")


def opposite_functor(F):
    return FinFunctor(opposite(F.source), opposite(F.target), dict(F.obj_map),
                      dict(F.mor_map), name=F.name + "^op")


def is_identity_functor(F):
    return (F.source == F.target and all(k == v for k, v in F.obj_map.items())
            and all(k == v for k, v in F.mor_map.items()))


def enumerate_functors(A, B, budget=None):
    """All functors A → B in a deterministic order."""
    budget = budget or Budget("enumerate_functors")
    mors = [m for m in A.morphisms() if m not in set(A.identity.values())]
    out = []
    for image in itertools.product(B.objects, repeat=len(A.objects)):
        budget.tick()
        om = dict(zip(A.objects, image))
        mm = {A.id(x): B.id(om[x]) for x in A.objects}

        def ok(m):
            # check composites among assigned morphisms involving m
            for g in A.out_of(A.cod(m)):
                if g in mm:
                    h = A.compose(g, m)
                    if h in mm and B.compose(mm[g], mm[m]) != mm[h]:
                        return False
            for f in A.into(A.dom(m)):
                if f in mm:
                    h = A.compose(m, f)
                    if h in mm and B.compose(mm[m], mm[f]) != mm[h]:
                        return False
            # m itself as a composite
            for f in A.out_of(A.dom(m)):
                if f in mm:
                    for g in A.out_of(A.cod(f)):
                        if g in mm and A.compose(g, f) == m and B.compose(mm[g], mm[f]) != mm[m]:
                            return False
            return True

        def rec(i):
            if i == len(mors):
                out.append(FinFunctor(A, B, dict(om), dict(mm)))
                return
            m = mors[i]
            for c in B.hom[(om[A.dom(m)], om[A.cod(m)])]:
                budget.tick()
                mm[m] = c
                if ok(m):
                    rec(i + 1)
                del mm[m]

        rec(0)
    return out


# -------------------------------------------------- natural transformations

@dataclass(eq=False)
class NatTransformation:
    source: FinFunctor
    target: FinFunctor
    components: dict

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    __hash__ = object.__hash__

    def __getitem__(self, x):
        return self.components[x]


def _parallel(F, G):
    if not (F.source == G.source and F.target == G.target):
        raise ValueError("functors are not parallel")


def validate_nat(t):
    F, G = t.source, t.target
    C = F.target
    v = []
    for x in F.source.objects:
        if t.components.get(x) not in C.hom[(F.ob(x), G.ob(x))]:
            v.append(f"component at {x} has the wrong type")
    if v:
        return v
    for m in F.source.morphisms():
        a, b = F.source.dom(m), F.source.cod(m)
        if C.compose(G.mor(m), t[a]) != C.compose(t[b], F.mor(m)):
            v.append(f"naturality fails at {m}")
    return v


def identity_nat(F):
    return NatTransformation(F, F, {x: F.target.id(F.ob(x)) for x in F.source.objects})


def vcompose_nat(t2, t1):
    """t2·t1 : F ⇒ H for t1: F ⇒ G, t2: G ⇒ H"""
    C = t1.source.target
    return NatTransformation(t1.source, t2.target,
                             {x: C.compose(t2[x], t1[x]) for x in t1.components})


def whisker_left(t, F):
    """t∘F for t: G ⇒ H"""
    return NatTransformation(compose_functors(t.source, F), compose_functors(t.target, F),
                             {x: t[F.ob(x)] for x in F.source.objects})


def whisker_right(G, t):
    """G∘t"""
    return NatTransformation(compose_functors(G, t.source), compose_functors(G, t.target),
                             {x: G.mor(c) for x, c in t.components.items()})


def enumerate_nat_transformations(F, G, budget=None):
    _parallel(F, G)
    budget = budget or Budget("enumerate_nat_transformations")
    A, C = F.source, F.target
    objs = list(A.objects)
    pos = {x: i for i, x in enumerate(objs)}
    # morphisms checked once both endpoints are assigned
    checks = {x: [] for x in objs}
    for m in A.morphisms():
        a, b = A.dom(m), A.cod(m)
        checks[objs[max(pos[a], pos[b])]].append(m)
    out = []
    comp = {}

    def rec(i):
        if i == len(objs):
            out.append(NatTransformation(F, G, dict(comp)))
            return
        x = objs[i]
        for c in C.hom[(F.ob(x), G.ob(x))]:
            budget.tick()
            comp[x] = c
            if all(C.compose(G.mor(m), comp[A.dom(m)]) == C.compose(comp[A.cod(m)], F.mor(m))
                   for m in checks[x]):
                rec(i + 1)
            del comp[x]

    rec(0)
    return out


def product_category(cats, name=None):
    """Product of a list of categories with tuple-encoded atoms.

    The empty product is the terminal category.
    """
    if not cats:
        return terminal_category()
    objs = [tup(*xs) for xs in itertools.product(*[C.objects for C in cats])]
    hom, comp = {}, {}
    identity = {}
    for xs in itertools.product(*[C.objects for C in cats]):
        identity[tup(*xs)] = tup(*[C.id(x) for C, x in zip(cats, xs)])
    for xs in itertools.product(*[C.objects for C in cats]):
        for ys in itertools.product(*[C.objects for C in cats]):
            hom[(tup(*xs), tup(*ys))] = [tup(*ms) for ms in itertools.product(
                *[C.hom[(x, y)] for C, x, y in zip(cats, xs, ys)])]
    mor_lists = [C.morphisms() for C in cats]
    for fs in itertools.product(*mor_lists):
        for gs in itertools.product(*[C.out_of(C.cod(f)) for C, f in zip(cats, fs)]):
            comp[(tup(*gs), tup(*fs))] = tup(*[C.compose(g, f) for C, g, f in zip(cats, gs, fs)])
    return FinCategory(tuple(objs), hom, identity, comp,
                       name=name or "×".join(C.name for C in cats))
