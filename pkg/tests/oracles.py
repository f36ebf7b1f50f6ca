"""Brute-force oracles that avoid the library's own search routines.

Only category tables, functor enumeration and cell enumeration are used;
cocones, composites and colimit comparisons are recomputed here directly.
"""
import itertools

from hvdc.fincore import enumerate_functors, enumerate_nat_transformations
from hvdc.profcells import CellFrame, enumerate_cells


def cocones(J, y, d, m):
    """All families c(x, u): d x → m, u ∈ J(x, y), with c(x', u·a) = c(x, u)∘d a."""
    A, M = J.source, d.target
    keys = [(x, u) for x in A.objects for u in J.at(x, y)]
    out = []
    for vals in itertools.product(*[M.hom[(d.ob(x), m)] for x, _ in keys]):
        c = dict(zip(keys, vals))
        if all(c[(A.dom(a), J.lam(a, u, y))] == M.compose(c[(x, u)], d.mor(a))
               for x, u in keys for a in A.into(x)):
            out.append(c)
    return out


def is_pointwise_universal(eta, J, d, l):
    M = d.target
    for y in J.target.objects:
        for m in M.objects:
            cs = [sorted(c.items()) for c in cocones(J, y, d, m)]
            img = [sorted(((x, u), M.compose(g, eta.comp[(x, u, y)]))
                          for x in J.source.objects for u in J.at(x, y))
                   for g in M.hom[(l.ob(y), m)]]
            if len(img) != len(cs) or any(i not in cs for i in img):
                return False
            if len({tuple(i) for i in img}) != len(img):
                return False
    return True


def is_weakly_universal(eta, J, d, l):
    """Every cell (J) ⇒ M along d, k is σ∘η for exactly one σ: l ⇒ k."""
    B, M = J.target, d.target
    for k in enumerate_functors(B, M):
        chis = enumerate_cells(CellFrame((J,), d, k, M))
        targets = {tuple(sorted(c.comp.items())): 0 for c in chis}
        for sigma in enumerate_nat_transformations(l, k):
            comp = tuple(sorted((key, M.compose(sigma[key[2]], v)) for key, v in eta.comp.items()))
            if comp not in targets:
                return False
            targets[comp] += 1
        if any(n != 1 for n in targets.values()):
            return False
    return True


def brute_force_lans(d, J):
    """All (l, η) exhibiting a pointwise left Kan extension of d along J."""
    out = []
    for l in enumerate_functors(J.target, d.target):
        for eta in enumerate_cells(CellFrame((J,), d, l, d.target)):
            if is_pointwise_universal(eta, J, d, l):
                out.append((l, eta))
    return out


def isomorphic(F, G):
    M = F.target
    return any(all(M.inverse(t[x]) is not None for x in F.source.objects)
               for t in enumerate_nat_transformations(F, G))
