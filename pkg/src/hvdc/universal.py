"""Checks for cartesian and cocartesian cells and for cells defining left Kan
extensions.

Universal properties quantify over all test frames.  Here the frames are
drawn from a Context (profunctors, verticals, maximal path length) and the
verdict says whether the check was exhaustive or bounded by the context.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fincore import (EnumerationLimit, compose_functors, enumerate_functors,
                      identity_functor, is_identity_functor)
from .profcells import (Cell, CellFrame, cartesian_restriction, enumerate_cells,
                        horizontal_compose, identity_cell, vertical_compose)

HOLDS_EXACT = "holds_exact"
HOLDS_BOUNDED = "holds_bounded"
FAILS = "fails"


@dataclass
class CheckResult:
    verdict: str
    witness: object = None
    detail: str = ""
    bound: int = None
    recheck: object = field(default=None, repr=False)

    @property
    def holds(self):
        return self.verdict != FAILS

    def __bool__(self):
        return self.holds

    def label(self):
        if self.verdict == HOLDS_BOUNDED and self.bound is not None:
            return f"holds_bounded(L={self.bound})"
        return self.verdict


def _unique(items):
    out = []
    for x in items:
        if not any(x is y or x == y for y in out):
            out.append(x)
    return out


@dataclass
class Context:
    profunctors: list = field(default_factory=list)
    verticals: list = field(default_factory=list)
    max_path_len: int = 2
    # functors into small categories are enumerated exhaustively below this size
    functor_limit: int = 200

    def categories(self):
        cats = []
        for J in self.profunctors:
            cats += [J.source, J.target]
        for f in self.verticals:
            cats += [f.source, f.target]
        return _unique(cats)

    def with_(self, profunctors=(), verticals=()):
        return Context(_unique(list(self.profunctors) + list(profunctors)),
                       _unique(list(self.verticals) + list(verticals)),
                       self.max_path_len, self.functor_limit)

    def verticals_into(self, C):
        out = [identity_functor(C)]
        out += [f for f in self.verticals if f.target == C]
        return _unique(out)

    def verticals_from(self, C):
        out = [identity_functor(C)]
        out += [f for f in self.verticals if f.source == C]
        return _unique(out)

    def paths_from(self, X, max_len=None):
        """Nonempty ctx paths starting at X, of length ≤ max_len."""
        L = self.max_path_len if max_len is None else max_len
        out = []

        def rec(path, end):
            if path:
                out.append(tuple(path))
            if len(path) == L:
                return
            for J in self.profunctors:
                if J.source == end:
                    rec(path + [J], J.target)

        rec([], X)
        return out

    def paths_into(self, Y, max_len=None):
        L = self.max_path_len if max_len is None else max_len
        out = []

        def rec(path, start):
            if path:
                out.append(tuple(path))
            if len(path) == L:
                return
            for J in self.profunctors:
                if J.target == start:
                    rec([J] + path, J.source)

        rec([], Y)
        return out

    def paths_between(self, X, Y, max_len=None):
        out = [p for p in self.paths_from(X, max_len) if p[-1].target == Y]
        if X == Y:
            out.insert(0, ())
        return out

    def functors(self, A, B):
        """All functors A → B when few enough, else the ctx verticals.

        Returns (list, exhaustive?).
        """
        try:
            from .fincore import Budget
            return enumerate_functors(A, B, Budget("functors", self.functor_limit * 20)), True
        except EnumerationLimit:
            return [f for f in self.verticals if f.source == A and f.target == B], False


def default_context(*things, L=2):
    profs, verts = [], []
    for t in things:
        if isinstance(t, Cell):
            profs += list(t.src)
            if not t.nullary:
                profs.append(t.tgt)
            verts += [t.left, t.right]
        elif hasattr(t, "lact"):
            profs.append(t)
        elif hasattr(t, "obj_map"):
            verts.append(t)
    return Context(_unique(profs), _unique(verts), L)


# -------------------------------------------------------------- bijections

def _bijection_witness(sources, image, targets):
    """Check that image: sources → targets is a bijection.

    Returns None when it is, else (target cell, number of preimages).
    """
    counts = {t.signature(): 0 for t in targets}
    by_sig = {t.signature(): t for t in targets}
    for s in sources:
        sig = image(s).signature()
        if sig not in counts:
            raise AssertionError("composite left the enumerated frame")
        counts[sig] += 1
    for sig, n in counts.items():
        if n != 1:
            return by_sig[sig], n
    return None


def factor_through(chi, psi, slot="source", verticals=None):
    """All factorisations of χ through ψ.

    slot="source": cells φ with ψ∘(φ) = χ, where φ has verticals (h, k).
    slot="target": ψ is a path of cells; cells ψ' with ψ'∘ψ = χ.
    When verticals are omitted they default to identities, which requires
    the outer verticals of χ and ψ to agree.
    """
    if slot == "source":
        if verticals is None:
            if not (chi.left == psi.left and chi.right == psi.right):
                raise ValueError("incompatible frames: give the verticals")
            verticals = (identity_functor(psi.left.source), identity_functor(psi.right.source))
        h, k = verticals
        if psi.src:
            if len(psi.src) != 1:
                raise ValueError("incompatible frames: ψ must have arity ≤ 1")
            tgt = psi.src[0]
        else:
            tgt = psi.left.source
        fr = CellFrame(chi.src, h, k, tgt)
        if fr.check():
            raise ValueError("incompatible frames: " + "; ".join(fr.check()))
        return [phi for phi in enumerate_cells(fr) if vertical_compose(psi, [phi]) == chi]
    path = list(psi) if isinstance(psi, (list, tuple)) else [psi]
    if verticals is None:
        verticals = (identity_functor(path[0].left.target), identity_functor(path[-1].right.target))
    h, k = verticals
    fr = CellFrame(tuple(p.tgt for p in path if not p.nullary), h, k, chi.tgt)
    if fr.check():
        raise ValueError("incompatible frames: " + "; ".join(fr.check()))
    return [c for c in enumerate_cells(fr) if vertical_compose(c, path) == chi]


# --------------------------------------------------------------- cartesian

def is_cartesian(psi, ctx):
    """Unique factorisation of every χ: H̲ ⇒ T with verticals f∘h, g∘k."""
    if len(psi.src) > 1:
        raise ValueError("cartesian cells have at most one source")
    A, B = psi.left.source, psi.right.source
    fac_tgt = psi.src[0] if psi.src else A
    for h in ctx.verticals_into(A):
        for k in ctx.verticals_into(B):
            for H in ctx.paths_between(h.source, k.source):
                if not H and h.source != k.source:
                    continue
                chi_fr = CellFrame(H, compose_functors(psi.left, h), compose_functors(psi.right, k), psi.tgt)
                phi_fr = CellFrame(H, h, k, fac_tgt)
                chis = enumerate_cells(chi_fr)
                phis = enumerate_cells(phi_fr)
                bad = _bijection_witness(phis, lambda p: vertical_compose(psi, [p]), chis)
                if bad:
                    chi, n = bad
                    return CheckResult(
                        FAILS, chi, f"χ has {n} factorisations through the cell", ctx.max_path_len,
                        recheck=lambda chi=chi, h=h, k=k: len(factor_through(chi, psi, "source", (h, k))))
    exact = "cartesian" in psi.flags
    return CheckResult(HOLDS_EXACT if exact else HOLDS_BOUNDED, bound=ctx.max_path_len)


# ------------------------------------------------------------- cocartesian

def _as_path(phis):
    return list(phis) if isinstance(phis, (list, tuple)) else [phis]


def _check_path(phis):
    for p in phis:
        if p.nullary:
            raise ValueError("cocartesian paths consist of unary cells")
    for p, q in zip(phis, phis[1:]):
        if not (p.right == q.left):
            raise ValueError("cells do not form a path")


def is_weakly_cocartesian(phis, ctx):
    phis = _as_path(phis)
    _check_path(phis)
    C0, Cn = phis[0].tgt.source, phis[-1].tgt.target
    src = tuple(J for p in phis for J in p.src)
    K = tuple(p.tgt for p in phis)
    for h in ctx.verticals_from(C0):
        for k in ctx.verticals_from(Cn):
            X, Y = h.target, k.target
            tgts = [J for J in ctx.profunctors if J.source == X and J.target == Y]
            if X == Y:
                tgts.append(X)
            for T in tgts:
                chi_fr = CellFrame(src, compose_functors(h, phis[0].left),
                                   compose_functors(k, phis[-1].right), T)
                psi_fr = CellFrame(K, h, k, T)
                chis = enumerate_cells(chi_fr)
                psis = enumerate_cells(psi_fr)
                bad = _bijection_witness(psis, lambda c: vertical_compose(c, phis), chis)
                if bad:
                    chi, n = bad
                    return CheckResult(
                        FAILS, chi, f"χ has {n} factorisations through the path", ctx.max_path_len,
                        recheck=lambda chi=chi, h=h, k=k: len(factor_through(chi, phis, "target", (h, k))))
    exact = len(phis) == 1 and "cocartesian" in phis[0].flags
    return CheckResult(HOLDS_EXACT if exact else HOLDS_BOUNDED, bound=ctx.max_path_len)


def is_cocartesian_path(phis, ctx):
    """Condition (a) holds automatically (all restrictions exist); (b) is
    checked for all padded paths of total padding ≤ L."""
    phis = _as_path(phis)
    _check_path(phis)
    f0, fn = phis[0].left, phis[-1].right
    C0, Cn = phis[0].tgt.source, phis[-1].tgt.target
    L = ctx.max_path_len
    lefts = [()] + ctx.paths_into(C0)
    rights = [()] + ctx.paths_from(Cn)
    for Hl in lefts:
        for Hr in rights:
            if len(Hl) + len(Hr) > L:
                continue
            path = [identity_cell(H) for H in Hl[:-1]]
            if Hl:
                _, c = cartesian_restriction(Hl[-1], identity_functor(Hl[-1].source), f0)
                path.append(c)
            path += phis
            if Hr:
                _, c = cartesian_restriction(Hr[0], fn, identity_functor(Hr[0].target))
                path.append(c)
                path += [identity_cell(H) for H in Hr[1:]]
            res = is_weakly_cocartesian(path, ctx)
            if not res.holds:
                res.detail += f" (padding {len(Hl)} left, {len(Hr)} right)"
                return res
    exact = len(phis) == 1 and "cocartesian" in phis[0].flags
    return CheckResult(HOLDS_EXACT if exact else HOLDS_BOUNDED, bound=L)


def restrict_last(phi, f):
    """Factor φ∘(id, ..., cart_{J_n(id, f)}) through cart_{K(id, f)}.

    φ must have identity right vertical.
    """
    Jn = phi.src[-1]
    R, _ = cartesian_restriction(Jn, identity_functor(Jn.source), f)
    KR, _ = cartesian_restriction(phi.tgt, identity_functor(phi.tgt.source), f)
    fr = CellFrame(phi.src[:-1] + (R,), phi.left, identity_functor(f.source), KR)
    return Cell(fr, {k: phi.comp[k[:-1] + (f.ob(k[-1]),)] for k in fr.keys()})


def restrict_first(phi, f):
    J1 = phi.src[0]
    R, _ = cartesian_restriction(J1, f, identity_functor(J1.target))
    KR, _ = cartesian_restriction(phi.tgt, f, identity_functor(phi.tgt.target))
    fr = CellFrame((R,) + phi.src[1:], identity_functor(f.source), phi.right, KR)
    return Cell(fr, {k: phi.comp[(f.ob(k[0]),) + k[1:]] for k in fr.keys()})


def is_pointwise_cocartesian(phis, ctx, side="right"):
    phis = _as_path(phis)
    _check_path(phis)
    if side == "right":
        last = phis[-1]
        if not is_identity_functor(last.right) or not last.src:
            raise ValueError("right pointwise cocartesian needs a nonempty source and identity right vertical")
        for f in ctx.verticals_into(last.tgt.target):
            res = is_cocartesian_path(phis[:-1] + [restrict_last(last, f)], ctx)
            if not res.holds:
                res.detail += f" (after restricting along {f.name})"
                return res
    else:
        first = phis[0]
        if not is_identity_functor(first.left) or not first.src:
            raise ValueError("left pointwise cocartesian needs a nonempty source and identity left vertical")
        for f in ctx.verticals_into(first.tgt.source):
            res = is_cocartesian_path([restrict_first(first, f)] + phis[1:], ctx)
            if not res.holds:
                res.detail += f" (after restricting along {f.name})"
                return res
    exact = len(phis) == 1 and {"cocartesian", "pointwise"} <= phis[0].flags
    return CheckResult(HOLDS_EXACT if exact else HOLDS_BOUNDED, bound=ctx.max_path_len)


# ------------------------------------------------------------------- Kan

def _lan_against(eta, ctx, ext_paths):
    """Bijection σ ↦ η⋆σ for every extension path and test functor k."""
    M = eta.tgt
    An = eta.right.source
    exhaustive = True
    for H in ext_paths:
        Y = H[-1].target if H else An
        ks, ex = ctx.functors(Y, M)
        exhaustive = exhaustive and ex
        for k in ks:
            chi_fr = CellFrame(tuple(eta.src) + tuple(H), eta.left, k, M)
            sig_fr = CellFrame(tuple(H), eta.right, k, M)
            chis = enumerate_cells(chi_fr)
            sigmas = enumerate_cells(sig_fr)
            bad = _bijection_witness(sigmas, lambda s: horizontal_compose(eta, s), chis)
            if bad:
                chi, n = bad

                def recheck(chi=chi, sig_fr=sig_fr):
                    return sum(1 for s in enumerate_cells(sig_fr) if horizontal_compose(eta, s) == chi)

                return CheckResult(FAILS, chi, f"χ has {n} factorisations through η",
                                   ctx.max_path_len, recheck=recheck), exhaustive
    return None, exhaustive


def defines_left_kan(eta, ctx, mode="weak"):
    if not eta.nullary:
        raise ValueError("η must be nullary")
    if mode == "weak":
        bad, ex = _lan_against(eta, ctx, [()])
        if bad is not None:
            return bad
        return CheckResult(HOLDS_EXACT if ex else HOLDS_BOUNDED, bound=ctx.max_path_len)
    An = eta.right.source
    if mode == "full":
        paths = [()] + ctx.paths_from(An)
        bad, _ = _lan_against(eta, ctx, paths)
        return bad if bad is not None else CheckResult(HOLDS_BOUNDED, bound=ctx.max_path_len)
    if mode != "pointwise":
        raise ValueError(f"unknown mode {mode}")
    if not eta.src:
        return defines_left_kan(eta, ctx, "full")
    for f in ctx.verticals_into(An):
        eta_f = restrict_kan_cell(eta, f)
        paths = [()] + ctx.paths_from(f.source)
        bad, _ = _lan_against(eta_f, ctx, paths)
        if bad is not None:
            bad.detail += f" (after restricting along {f.name})"
            return bad
    return CheckResult(HOLDS_BOUNDED, bound=ctx.max_path_len)


def restrict_kan_cell(eta, f):
    """η∘(id, ..., cart_{J_n(id, f)}), a cell with right vertical l∘f."""
    Jn = eta.src[-1]
    R, _ = cartesian_restriction(Jn, identity_functor(Jn.source), f)
    fr = CellFrame(eta.src[:-1] + (R,), eta.left, compose_functors(eta.right, f), eta.tgt)
    return Cell(fr, {k: eta.comp[k[:-1] + (f.ob(k[-1]),)] for k in fr.keys()})
