"""Weighted colimits, pointwise left Kan extensions, density and the left
Beck-Chevalley condition.

Weighted colimits are searched directly on cocones, without going through
enumerate_cells, so the brute-force Kan oracle in the tests is independent
of this code path.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .construct import companion, conjoint, horizontal_composite
from .fincore import FinFunctor, identity_functor, point
from .profcells import (Cell, CellFrame, cartesian_restriction,
                        restrict_profunctor, vertical_compose)
from .universal import (FAILS, HOLDS_BOUNDED, HOLDS_EXACT, CheckResult,
                        defines_left_kan, is_pointwise_cocartesian,
                        restrict_kan_cell)


@dataclass
class KanWitness:
    extension: FinFunctor
    cell: Cell
    mode: str = "pointwise"


def _check_weight(J):
    T = J.target
    if len(T.objects) != 1 or len(T.morphisms()) != 1:
        raise ValueError("a weight is a profunctor into the terminal category")
    return T.objects[0]


def cocones(J, d, m):
    """All cocones from d weighted by J with apex m, as dicts (x, u) -> M(dx, m)."""
    star = _check_weight(J)
    A, M = J.source, d.target
    if d.source != A:
        raise ValueError("source mismatch between weight and diagram")
    keys = [(x, u) for x in A.objects for u in J.at(x, star)]
    out = []
    val = {}

    def consistent(key):
        x, u = key
        c = val[key]
        for a in A.into(x):
            k2 = (A.dom(a), J.lam(a, u, star))
            if k2 in val and val[k2] != M.compose(c, d.mor(a)):
                return False
        # key as the image of an assigned element
        for a in A.out_of(x):
            y = A.cod(a)
            for v in J.at(y, star):
                if (y, v) in val and J.lam(a, v, star) == u and M.compose(val[(y, v)], d.mor(a)) != c:
                    return False
        return True

    def rec(i):
        if i == len(keys):
            out.append(dict(val))
            return
        k = keys[i]
        for c in M.hom[(d.ob(k[0]), m)]:
            val[k] = c
            if consistent(k):
                rec(i + 1)
            del val[k]

    rec(0)
    return out


def _sig(c):
    return tuple(sorted(c.items()))


def is_weighted_colimit(J, d, apex, eta, h_sizes=(0, 1)):
    """Check that postcomposition with the cocone eta is bijective.

    eta is a dict (x, u) -> M(dx, apex).  The defining property quantifies
    over auxiliary sets H; for |H| = h the two sides are h-fold powers of
    the |H| = 1 sides, and each size in h_sizes is checked literally.
    Returns None or the first failing (object, size).
    """
    M = d.target
    for m in M.objects:
        cs = {_sig(c) for c in cocones(J, d, m)}
        gs = M.hom[(apex, m)]
        for h in h_sizes:
            seen = set()
            for tup_g in itertools.product(gs, repeat=h):
                img = tuple(_sig({k: M.compose(g, v) for k, v in eta.items()}) for g in tup_g)
                if any(i not in cs for i in img):
                    return (m, h)
                seen.add(img)
            if len(seen) != len(gs) ** h or len(seen) != len(cs) ** h:
                return (m, h)
    return None


def _cell_of_cocone(J, d, apex, cocone):
    T = J.target
    M = d.target
    fr = CellFrame((J,), d, FinFunctor(T, M, {T.objects[0]: apex},
                                       {T.morphisms()[0]: M.id(apex)}, name=f"pick_{apex}"), M)
    return Cell(fr, {k: cocone[(k[0], k[1])] for k in fr.keys()})


def weighted_colimit(J, d):
    """The least apex carrying a universal cocone, with its cell, or None."""
    _check_weight(J)
    if d.source != J.source:
        raise ValueError("source mismatch between weight and diagram")
    M = d.target
    for m in M.objects:
        for c in cocones(J, d, m):
            if is_weighted_colimit(J, d, m, c, h_sizes=(1,)) is None:
                return m, _cell_of_cocone(J, d, m, c)
    return None


def _column(J, y):
    return restrict_profunctor(J, identity_functor(J.source), point(J.target, y),
                               name=f"{J.name}(-,{y})")


def pointwise_lan(d, J):
    """Pointwise left Kan extension of d along J, assembled from the
    column-wise weighted colimits; None when some colimit is missing."""
    if d.source != J.source:
        raise ValueError("source mismatch")
    B, M = J.target, d.target
    cols = {}
    for y in B.objects:
        W = _column(J, y)
        res = weighted_colimit(W, d)
        if res is None:
            return None
        apex, cell = res
        cols[y] = (apex, {(k[0], k[1]): v for k, v in cell.comp.items()})
    mor = {}
    for b in B.morphisms():
        y, y2 = B.dom(b), B.cod(b)
        (ly, ey), (ly2, ey2) = cols[y], cols[y2]
        target = {(x, u): ey2[(x, J.rho(x, u, b))] for (x, u) in ey}
        hits = [m for m in M.hom[(ly, ly2)]
                if all(M.compose(m, v) == target[k] for k, v in ey.items())]
        if len(hits) != 1:
            raise AssertionError("colimit factorisation is not unique")
        mor[b] = hits[0]
    l = FinFunctor(B, M, {y: cols[y][0] for y in B.objects}, mor, name="lan")
    fr = CellFrame((J,), d, l, M)
    eta = Cell(fr, {k: cols[k[2]][1][(k[0], k[1])] for k in fr.keys()}, name="η")
    return KanWitness(l, eta, "pointwise")


def check_pointwise_lan(w, ctx=None):
    """Exact check through weighted colimits at every object; when a context
    is given the bounded definition is checked as well."""
    eta = w.cell
    if not eta.nullary or len(eta.src) != 1:
        raise ValueError("witness must be a nullary cell with one source")
    J = eta.src[0]
    d, l = eta.left, eta.right
    if l != w.extension:
        raise ValueError("witness extension and cell disagree")
    from .profcells import validate_cell
    errs = validate_cell(eta)
    if errs:
        return CheckResult(FAILS, eta, "η is not a cell: " + errs[0])
    for y in J.target.objects:
        ey = restrict_kan_cell(eta, point(J.target, y))
        W = ey.src[0]
        cocone = {(k[0], k[1]): v for k, v in ey.comp.items()}
        bad = is_weighted_colimit(W, d, l.ob(y), cocone)
        if bad is not None:
            return CheckResult(FAILS, ey,
                               f"column {y}: not a weighted colimit (test object {bad[0]}, |H|={bad[1]})",
                               recheck=lambda W=W, y=y, c=cocone: is_weighted_colimit(W, d, l.ob(y), c))
    if ctx is not None:
        res = defines_left_kan(eta, ctx, "pointwise")
        if not res.holds:
            return res
    return CheckResult(HOLDS_EXACT)


def is_dense(f, ctx=None):
    res, _ = companion(f)
    cart = res.cartesian_cell
    return check_pointwise_lan(KanWitness(identity_functor(f.target), cart), ctx)


# ----------------------------------------------------------- Beck-Chevalley

def _as_path(phis):
    return list(phis) if isinstance(phis, (list, tuple)) else [phis]


def factor_through_restriction(phi):
    """φ' with φ = cart_{K(id, f_n)}∘φ'."""
    K, fn = phi.tgt, phi.right
    R, _ = cartesian_restriction(K, identity_functor(K.source), fn)
    fr = CellFrame(phi.src, phi.left, identity_functor(fn.source), R)
    return Cell(fr, dict(phi.comp))


def beck_chevalley_comparison(phis):
    """The comparison (f0^* ⊙ J̲)(c, a) → (K̲)(c, f_n a) as a dict of
    dicts; plus the composites used."""
    phis = _as_path(phis)
    f0 = phis[0].left
    src = [J for p in phis for J in p.src]
    conj, _ = conjoint(f0)
    comp = horizontal_composite([conj.profunctor] + src)
    Ks = [p.tgt for p in phis]
    kcomp = horizontal_composite(Ks) if len(Ks) > 1 else None
    spans = []
    s = 1
    for p in phis:
        spans.append((2 * s, 2 * (s + len(p.src)) + 1))
        s += len(p.src)
    fn = phis[-1].right
    table = {}
    for (c, a), m in comp.class_map.items():
        out = {}
        for k, cls in m.items():
            s_ = k[1]
            vals = [p.comp[k[lo:hi]] for p, (lo, hi) in zip(phis, spans)]
            bnd = [p.right.ob(k[hi - 1]) for p, (lo, hi) in zip(phis, spans)]
            v0 = Ks[0].lam(s_, vals[0], bnd[0])
            if kcomp is None:
                v = v0
            else:
                key = [c, v0, bnd[0]]
                for K, v_, b_ in zip(Ks[1:], vals[1:], bnd[1:]):
                    key += [v_, b_]
                v = kcomp.class_map[(c, fn.ob(a))][tuple(key)]
            if cls in out and out[cls] != v:
                raise AssertionError("comparison not constant on a class")
            out[cls] = v
        table[(c, a)] = out
    tgt = kcomp.profunctor if kcomp else Ks[0]
    return table, comp, tgt


def satisfies_left_beck_chevalley(phis, ctx=None):
    phis = _as_path(phis)
    for p in phis:
        if p.nullary:
            raise ValueError("shape mismatch: Beck-Chevalley needs unary cells")
    table, comp, tgt = beck_chevalley_comparison(phis)
    fn = phis[-1].right
    for (c, a), m in sorted(table.items()):
        image = list(m.values())
        full = tgt.at(c, fn.ob(a))
        if len(set(image)) != len(image) or set(image) != set(full):
            return CheckResult(FAILS, phis[-1],
                               f"comparison at ({c},{a}) is not bijective: "
                               f"{len(m)} classes onto {len(set(image))} of {len(full)} elements")
    if ctx is not None:
        path = phis[:-1] + [factor_through_restriction(phis[-1])]
        res = is_pointwise_cocartesian(path, ctx, "right")
        if not res.holds:
            return CheckResult(FAILS, res.witness,
                               "exact comparison is bijective but the bounded check failed: " + res.detail)
    return CheckResult(HOLDS_EXACT)


def is_left_exact(phis, d, ctx, etas=None):
    """For each η defining a pointwise lan along the targets, check that
    η∘φ̲ defines one as well (bounded)."""
    phis = _as_path(phis)
    if etas is None:
        if len(phis) != 1:
            raise ValueError("give the Kan cells for paths")
        w = pointwise_lan(d, phis[0].tgt)
        etas = [] if w is None else [w.cell]
    for eta in etas:
        if eta.left != d:
            raise ValueError("shape mismatch: η must extend d")
        if not defines_left_kan(eta, ctx, "pointwise").holds:
            continue
        res = defines_left_kan(vertical_compose(eta, phis), ctx, "pointwise")
        if not res.holds:
            return res
    return CheckResult(HOLDS_BOUNDED, bound=ctx.max_path_len)

