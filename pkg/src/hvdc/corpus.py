"""Small named categories, functors and profunctors used as a test corpus."""
from __future__ import annotations

from .fincore import (discrete_category, enumerate_functors, make_category,
                      monoid_category, poset_category, terminal_category)
from .profcells import make_profunctor


def walking_arrow():
    return make_category(
        ["0", "1"], {("0", "0"): ["id0"], ("0", "1"): ["a"], ("1", "1"): ["id1"]},
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("a", "id0"): "a", ("id1", "a"): "a"},
        name="2")


def chain(n, name=None):
    objs = [str(i) for i in range(n)]
    return poset_category(objs, {(objs[i], objs[i + 1]) for i in range(n - 1)},
                          name=name or f"chain{n}")


def walking_iso():
    return make_category(
        ["0", "1"],
        {("0", "0"): ["id0"], ("1", "1"): ["id1"], ("0", "1"): ["i"], ("1", "0"): ["j"]},
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("i", "id0"): "i", ("id1", "i"): "i",
         ("j", "id1"): "j", ("id0", "j"): "j", ("j", "i"): "id0", ("i", "j"): "id1"},
        name="iso")


def cyclic_group(n, name=None):
    els = [f"g{i}" for i in range(n)]
    return monoid_category(els, lambda a, b: f"g{(int(a[1:]) + int(b[1:])) % n}", "g0",
                           name=name or f"Z{n}")


def idempotent_monoid():
    # {1, e} with e·e = e
    return monoid_category(["one", "e"],
                           lambda a, b: "one" if a == b == "one" else "e", "one", name="Idem")


def parallel_pair():
    return make_category(
        ["0", "1"], {("0", "0"): ["id0"], ("1", "1"): ["id1"], ("0", "1"): ["p", "q"]},
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("p", "id0"): "p", ("id1", "p"): "p",
         ("q", "id0"): "q", ("id1", "q"): "q"},
        name="parallel")


def span_category():
    return poset_category(["l", "m", "r"], {("m", "l"), ("m", "r")}, name="span")


def cospan_category():
    return poset_category(["l", "m", "r"], {("l", "m"), ("r", "m")}, name="cospan")


def commuting_square():
    return poset_category(["a", "b", "c", "d"], {("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")},
                          name="square")


def split_idempotent():
    """Objects 0, 1 with s: 0 → 1, r: 1 → 0, r∘s = id0 and e = s∘r on 1."""
    return make_category(
        ["0", "1"],
        {("0", "0"): ["id0"], ("1", "1"): ["id1", "e"], ("0", "1"): ["s"], ("1", "0"): ["r"]},
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("e", "id1"): "e", ("id1", "e"): "e",
         ("e", "e"): "e", ("s", "id0"): "s", ("id1", "s"): "s", ("e", "s"): "s",
         ("r", "id1"): "r", ("id0", "r"): "r", ("r", "e"): "r", ("r", "s"): "id0",
         ("s", "r"): "e"},
        name="splitidem")


def corpus_categories():
    """The bundled category corpus: at most 4 objects and 12 morphisms each."""
    return {
        "terminal": terminal_category(),
        "walking_arrow": walking_arrow(),
        "discrete2": discrete_category(["0", "1"], name="disc2"),
        "chain3": chain(3),
        "chain4": chain(4),
        "walking_iso": walking_iso(),
        "z2": cyclic_group(2),
        "z3": cyclic_group(3),
        "idempotent": idempotent_monoid(),
        "parallel": parallel_pair(),
        "span": span_category(),
        "cospan": cospan_category(),
        "square": commuting_square(),
        "split_idempotent": split_idempotent(),
    }


# ---------------------------------------------------------------- random data

def set_profunctor(A, B, sizes, name="J"):
    """Profunctor between discrete categories with the given value sizes."""
    elems = {}
    for (x, y), n in sizes.items():
        elems[(x, y)] = [f"u{x}{y}_{i}" for i in range(n)]
    return make_profunctor(A, B, elems, lambda a, u, y: u, lambda x, u, b: u, name=name)


def representable_profunctor(C, f, g, name="J"):
    """C(f−, g−) for f: A → C, g: B → C."""
    A, B = f.source, g.source
    elems = {(x, y): C.hom[(f.ob(x), g.ob(y))] for x in A.objects for y in B.objects}
    return make_profunctor(A, B, elems,
                           lambda a, u, y: C.compose(u, f.mor(a)),
                           lambda x, u, b: C.compose(g.mor(b), u), name=name)


def coproduct_profunctor(Js, name="J"):
    A, B = Js[0].source, Js[0].target
    elems = {(x, y): [f"{i}.{u}" for i, J in enumerate(Js) for u in J.at(x, y)]
             for x in A.objects for y in B.objects}

    def split(u):
        i, _, v = u.partition(".")
        return Js[int(i)], i, v

    def lam(a, u, y):
        J, i, v = split(u)
        return f"{i}.{J.lam(a, v, y)}"

    def rho(x, u, b):
        J, i, v = split(u)
        return f"{i}.{J.rho(x, v, b)}"

    return make_profunctor(A, B, elems, lam, rho, name=name)


def random_functor(rng, A, B):
    fs = enumerate_functors(A, B)
    return rng.choice(fs) if fs else None


def random_profunctor(rng, A, B, max_elems=3, name="J", pool=None):
    """A random profunctor A ⇸ B with at most max_elems elements per value.

    Built as a coproduct of restricted hom profunctors C(f−, g−) over the
    categories in the pool.
    """
    pool = pool or [A, B, walking_arrow(), chain(3)]
    for _ in range(50):
        parts = []
        for _ in range(rng.randint(0, 2)):
            C = rng.choice(pool)
            f, g = random_functor(rng, A, C), random_functor(rng, B, C)
            if f is None or g is None:
                continue
            parts.append(representable_profunctor(C, f, g))
        if not parts:
            return make_profunctor(A, B, {}, None, None, name=name)
        J = coproduct_profunctor(parts, name=name)
        if max(len(v) for v in J.elems.values()) <= max_elems:
            return J
    return make_profunctor(A, B, {}, None, None, name=name)


# ------------------------------------------------------- monoidal test data

def z2_monoidal(N=3):
    """Discrete {0, 1} with addition mod 2, strict."""
    from .monoidal import strict_monoidal
    D = discrete_category(["0", "1"], name="Z2d")
    return strict_monoidal(D, lambda a, b: str((int(a) + int(b)) % 2),
                           lambda f, g: "id" + str((int(f[2:]) + int(g[2:])) % 2), "0",
                           N=N, name="Z2")


def truncated_add(n, N=3):
    """Chain 0 < ... < n-1 with addition truncated at n-1, strict."""
    from .monoidal import thin_monoidal
    top = n - 1
    return thin_monoidal(chain(n), lambda xs: str(min(sum(int(x) for x in xs), top)),
                         N=N, name=f"chain{n}+")


def chain_max(n, N=3):
    """Chain with max as tensor and 0 as unit."""
    from .monoidal import thin_monoidal
    return thin_monoidal(chain(n), lambda xs: max(xs, default="0"), N=N, name=f"chain{n}∨")


def chain_min(n, N=3):
    """Chain with min as tensor and the top as unit."""
    from .monoidal import thin_monoidal
    top = str(n - 1)
    return thin_monoidal(chain(n), lambda xs: min(xs, default=top), N=N, name=f"chain{n}∧")


def lax_arrow(N=3):
    """A non-strict structure on 0 < 1: ⊘0 = 1, ⊘1 = id, ⊘n = 0 for n ≥ 2."""
    from .monoidal import thin_monoidal

    def t(xs):
        return "1" if not xs else xs[0] if len(xs) == 1 else "0"

    return thin_monoidal(chain(2), t, N=N, name="lax2")


def iso_z2(N=3):
    """The walking isomorphism with addition mod 2 on its objects."""
    from .monoidal import thin_monoidal
    return thin_monoidal(walking_iso(), lambda xs: str(sum(int(x) for x in xs) % 2),
                         N=N, name="isoZ2")


def monoidal_corpus(N=3):
    return {
        "z2": z2_monoidal(N),
        "chain4+": truncated_add(4, N),
        "chain3+": truncated_add(3, N),
        "chain2∨": chain_max(2, N),
        "chain3∨": chain_max(3, N),
        "chain2∧": chain_min(2, N),
        "lax2": lax_arrow(N),
        "isoZ2": iso_z2(N),
    }


def thin_lax_functor(f, MA, MC, flavor="lax", name=""):
    """Lax (or colax) structure on a functor between thin monoidal
    categories, or None when some compositor arrow is missing."""
    from .monoidal import LaxMonoidalFunctor
    C = MC.base
    comp = {}
    for xs in MA.tobj:
        a, b = MC.t([f.ob(x) for x in xs]), f.ob(MA.t(xs))
        if flavor == "colax":
            a, b = b, a
        hs = C.hom[(a, b)]
        if not hs:
            return None
        comp[xs] = hs[0]
    return LaxMonoidalFunctor(f, MA, MC, comp, flavor, name)


def binary_generated_structures(J, MA, MB):
    """All monoidal structures on J over strict MA, MB, generated by a
    nullary element and a binary operation (higher arities by left folding).
    Only structures passing the validator are yielded."""
    import itertools
    from .monoidal import make_monoidal_profunctor, validate_monoidal_profunctor
    trip = [(x, u, y) for (x, y), us in J.elems.items() for u in us]
    zero = J.at(MA.unit, MB.unit)
    pairs = list(itertools.product(trip, repeat=2))
    choices = [J.at(MA.t((a[0], b[0])), MB.t((a[2], b[2]))) for a, b in pairs]
    for e in zero:
        for pick in itertools.product(*choices):
            mul = dict(zip(pairs, pick))

            def fn(ts, mul=mul, e=e):
                if not ts:
                    return e
                acc = ts[0]
                for t in ts[1:]:
                    acc = (MA.t((acc[0], t[0])), mul[(acc, t)], MB.t((acc[2], t[2])))
                return acc[1]

            Jm = make_monoidal_profunctor(J, MA, MB, fn)
            if not validate_monoidal_profunctor(Jm):
                yield Jm


def small_monoidal_profunctors(M, max_elems=2):
    """Every binary-generated monoidal profunctor M ⇸ M over a strict
    structure on a discrete base, with at most max_elems elements in total,
    in order of increasing size."""
    import itertools
    A = M.base
    slots = [(x, y) for x in A.objects for y in A.objects]
    for total in range(max_elems + 1):
        for sizes in itertools.product(range(total + 1), repeat=len(slots)):
            if sum(sizes) != total:
                continue
            J = set_profunctor(A, A, dict(zip(slots, sizes)), name="J")
            yield from binary_generated_structures(J, M, M)
