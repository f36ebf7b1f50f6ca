"""Command line front end: load workspaces, run checks and constructions,
print reports.

Exit codes: 0 when every verdict holds, 1 when some check fails, 2 on
input errors (parse errors, invalid or dangling entries, unknown commands,
shape mismatches, exhausted enumeration guard).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import construct, kan, monoidal, universal, yoneda
from .bundles import BUNDLES, load_bundle
from .fincore import EnumerationLimit, identity_functor, point
from .profcells import Cell, CellFrame, identity_cell, identity_vertical_cell, vertical_compose
from .workspace import KINDS, LoadError, Workspace, load, validate_entry

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

COMMANDS = ("validate", "compose", "restrict", "companion", "conjoint", "unit", "tabulate",
            "cotabulate", "kan", "weighted-colim", "dense", "yoneda-check", "curry", "day",
            "monoidal-yoneda", "bc-check", "doctrinal", "lift-kan", "check-cartesian",
            "check-cocartesian", "check-pointwise")


class InputError(Exception):
    pass


# ------------------------------------------------------------------ reports

def encode_witness(w):
    if w is None:
        return None
    if isinstance(w, Cell):
        return {"cell": w.frame.describe(),
                "components": sorted([list(k) + [v] for k, v in w.comp.items()])}
    if isinstance(w, (list, tuple)):
        return [encode_witness(x) if isinstance(x, Cell) else str(x) for x in w]
    return str(w)


@dataclass
class Report:
    argv: list
    command: str
    args: list
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def check(self, name, result):
        """Record a CheckResult."""
        self.checks.append({"name": name, "verdict": result.label(), "holds": result.holds,
                            "detail": result.detail or "", "witness": encode_witness(result.witness)})
        return result

    def exact(self, name, ok, detail="", witness=None):
        """Record an exact boolean check."""
        self.checks.append({"name": name, "verdict": universal.HOLDS_EXACT if ok else universal.FAILS,
                            "holds": bool(ok), "detail": "" if ok else detail,
                            "witness": None if ok else encode_witness(witness)})
        return ok

    @property
    def exit_code(self):
        return EXIT_OK if all(c["holds"] for c in self.checks) else EXIT_FAILED

    def to_json(self):
        return {"hvdc_report": 1, "argv": self.argv, "command": self.command, "args": self.args,
                "checks": self.checks, "data": self.data, "exit": self.exit_code,
                "seconds": round(self.seconds, 3)}

    def render(self, fmt="text"):
        if fmt == "json":
            return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=1)
        lines = [f"$ hvdc run {self.command} {' '.join(self.args)}".rstrip()]
        for k in sorted(self.data):
            v = self.data[k]
            if isinstance(v, str):
                lines.append(f"{k}: {v}")
            else:
                lines.append(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}")
        for c in self.checks:
            line = f"[{c['verdict']}] {c['name']}"
            if c["detail"]:
                line += f": {c['detail']}"
            lines.append(line)
            if c["witness"] is not None:
                lines.append(f"    witness: {json.dumps(c['witness'], ensure_ascii=False)}")
        ok = sum(c["holds"] for c in self.checks)
        lines.append(f"{ok}/{len(self.checks)} checks hold")
        return "\n".join(lines)


# ------------------------------------------------------------------ helpers

def _one(ws, name, kinds, what):
    hits = ws.find(name, kinds)
    if not hits:
        raise InputError(f"no {what} named {name!r}")
    return hits[0][1]


def _cat(ws, n):
    return _one(ws, n, ("categories",), "category")


def _fun(ws, n):
    return _one(ws, n, ("functors",), "functor")


def _prof(ws, n):
    return _one(ws, n, ("profunctors",), "profunctor")


def _cell(ws, n):
    return _one(ws, n, ("cells",), "cell")


def _need(args, k, usage):
    if len(args) < k:
        raise InputError(f"usage: {usage}")


def _table(J):
    return {f"{x}→{y}": list(us) for (x, y), us in J.elems.items() if us}


def _presheaf(ws, name, base):
    for _, p in ws.find(name, ("presheaves",)):
        if p.base == base:
            return p
    if name.startswith("y") and name[1:] in base.objects:
        return yoneda.yoneda_object(base, name[1:])
    raise InputError(f"no presheaf named {name!r} on {base.name}")


# ----------------------------------------------------------------- commands

def cmd_validate(ws, args, rep, opts):
    args = [a for a in args if a not in BUNDLES]
    for kind in KINDS:
        for name, obj in ws.entries[kind].items():
            if args and name not in args:
                continue
            v = validate_entry(kind, obj)
            rep.exact(f"{kind} {name}", not v, "; ".join(v[:3]), v[:10])


def cmd_compose(ws, args, rep, opts):
    _need(args, 1, "compose J1 J2 ...")
    path = [_prof(ws, n) for n in args]
    res = construct.horizontal_composite(path)
    rep.data["composite"] = _table(res.profunctor)
    ctx = opts.ctx(ws).with_(profunctors=path + [res.profunctor])
    rep.check("cocartesian", universal.is_cocartesian_path([res.cocartesian_cell], ctx))


def cmd_restrict(ws, args, rep, opts):
    _need(args, 3, "restrict K f g")
    hits = ws.find(args[0], ("profunctors", "categories"))
    if not hits:
        raise InputError(f"no profunctor or category named {args[0]!r}")
    K = hits[0][1]
    f, g = _fun(ws, args[1]), _fun(ws, args[2])
    res = construct.restrict(K, f, g)
    rep.data["restriction"] = _table(res.profunctor)
    ctx = opts.ctx(ws).with_(profunctors=[res.profunctor])
    rep.check("cartesian", universal.is_cartesian(res.cartesian_cell, ctx))


def _companion_like(ws, args, rep, opts, which):
    _need(args, 1, f"{which} f")
    f = _fun(ws, args[0])
    res, cocart = (construct.companion if which == "companion" else construct.conjoint)(f)
    rep.data[which] = _table(res.profunctor)
    ids = (construct.companion_identities if which == "companion" else construct.conjoint_identities)(f)
    rep.exact(f"{which} identities", not ids, "; ".join(ids))
    ctx = opts.ctx(ws).with_(profunctors=[res.profunctor], verticals=[f])
    rep.check("cartesian cell", universal.is_cartesian(res.cartesian_cell, ctx))


def cmd_companion(ws, args, rep, opts):
    _companion_like(ws, args, rep, opts, "companion")


def cmd_conjoint(ws, args, rep, opts):
    _companion_like(ws, args, rep, opts, "conjoint")


def cmd_unit(ws, args, rep, opts):
    _need(args, 1, "unit A")
    A = _cat(ws, args[0])
    I, cocart, cart = construct.unit_profunctor(A)
    rep.data["unit"] = _table(I)
    rep.exact("identity (A): cart∘cocart = id",
              vertical_compose(cart, [cocart]) == identity_vertical_cell(identity_functor(A)))
    rep.exact("identity (J): cocart⋆cart = id_I",
              construct.horizontal_compose(cocart, cart) == identity_cell(I))
    ctx = opts.ctx(ws).with_(profunctors=[I])
    rep.check("cartesian", universal.is_cartesian(cart, ctx))


def cmd_tabulate(ws, args, rep, opts):
    _need(args, 1, "tabulate J")
    J = _prof(ws, args[0])
    tab = construct.tabulation(J)
    T = tab.category
    rep.data["objects"] = list(T.objects)
    rep.data["morphisms"] = len(T.morphisms())
    ok, bad = True, None
    for (x, y), us in J.elems.items():
        for u in us:
            phi = Cell(CellFrame((), point(J.source, x), point(J.target, y), J), {("*",): u})
            hits = construct.check_tabulation_1d(tab, phi)
            if len(hits) != 1:
                ok, bad = False, (x, u, y, len(hits))
    rep.exact("1-dimensional property", ok and len(construct.check_tabulation_1d(tab, tab.pi)) == 1,
              "point cell without a unique factorisation", bad)
    ctx = opts.ctx(ws).with_(profunctors=[J])
    rep.check("π cocartesian", universal.is_cocartesian_path([tab.pi], ctx))


def cmd_cotabulate(ws, args, rep, opts):
    _need(args, 1, "cotabulate J")
    J = _prof(ws, args[0])
    C, ia, ib, sigma = construct.cotabulation(J)
    rep.data["objects"] = list(C.objects)
    rep.data["morphisms"] = len(C.morphisms())
    rep.exact("σ_A full and faithful", construct.is_full_and_faithful(ia))
    rep.exact("σ_B full and faithful", construct.is_full_and_faithful(ib))
    ctx = opts.ctx(ws).with_(profunctors=[J], verticals=[ia, ib])
    rep.check("σ cartesian", universal.is_cartesian(sigma, ctx))


def cmd_kan(ws, args, rep, opts):
    _need(args, 2, "kan d J")
    d, J = _fun(ws, args[0]), _prof(ws, args[1])
    w = kan.pointwise_lan(d, J)
    if w is None:
        missing = [y for y in J.target.objects if kan.weighted_colimit(kan._column(J, y), d) is None]
        rep.exact("pointwise left Kan extension exists", False,
                  f"no weighted colimit for the column at {missing[0]}", missing)
        return
    rep.data["extension"] = {"obj": w.extension.obj_map, "mor": w.extension.mor_map}
    rep.data["η"] = sorted([list(k) + [v] for k, v in w.cell.comp.items()])
    ctx = opts.ctx(ws).with_(profunctors=[J], verticals=[d])
    rep.check("pointwise left Kan extension", kan.check_pointwise_lan(w, ctx))


def cmd_weighted_colim(ws, args, rep, opts):
    _need(args, 2, "weighted-colim W d")
    W, d = _prof(ws, args[0]), _fun(ws, args[1])
    res = kan.weighted_colimit(W, d)
    if res is None:
        rep.exact("weighted colimit exists", False, "no universal cocone at any apex")
        return
    apex, cell = res
    rep.data["apex"] = apex
    rep.data["cocone"] = sorted([list(k) + [v] for k, v in cell.comp.items()])
    eta = {(k[0], k[1]): v for k, v in cell.comp.items()}
    bad = kan.is_weighted_colimit(W, d, apex, eta)
    rep.exact("universal", bad is None, f"test object {bad[0] if bad else ''}", bad)


def cmd_dense(ws, args, rep, opts):
    _need(args, 1, "dense f")
    f = _fun(ws, args[0])
    rep.check("dense", kan.is_dense(f, opts.ctx(ws).with_(verticals=[f])))


def cmd_yoneda_check(ws, args, rep, opts):
    _need(args, 1, "yoneda-check A [p ...]")
    A = _cat(ws, args[0])
    if args[1:]:
        ps = [_presheaf(ws, n, A) for n in args[1:]]
    else:
        ps = [yoneda.yoneda_object(A, x) for x in A.objects]
        ps += [p for p in ws.entries["presheaves"].values()
               if p.base == A and not any(p == q for q in ps)]
        if opts.seed is not None:
            ps += yoneda.presheaf_family(A, 5, seed=opts.seed)
    sizes = {}
    for p in ps:
        fails = []
        for x in A.objects:
            bij, report = yoneda.yoneda_lemma_check(A, p, x)
            n_cells = len(yoneda.hom_presheaves_via_cells(yoneda.yoneda_object(A, x), p))
            sizes[f"{p.name}@{x}"] = [len(p.at(x)), len(bij), n_cells]
            if n_cells != len(p.at(x)):
                report.append(f"cell route counts {n_cells} maps at {x}")
            fails += report
        rep.exact(f"yoneda {p.name}", not fails, "; ".join(fails[:3]), fails[:10])
    rep.data["sizes |p x|, |bijection|, |hom(y x, p)|"] = sizes


def cmd_curry(ws, args, rep, opts):
    _need(args, 1, "curry J")
    J = _prof(ws, args[0])
    obj, mor, isos, ok = yoneda.curry(J)
    rep.data["cur J"] = {y: list(p.values.values()) for y, p in obj.items()}
    rep.exact("J ≅ ps(y, cur J)", ok, "a Yoneda bijection failed")


def cmd_day(ws, args, rep, opts):
    _need(args, 1, "day M p1 ... pn")
    M = _one(ws, args[0], ("monoidal",), "monoidal structure")
    A = M.base
    ps = [_presheaf(ws, n, A) for n in args[1:]]
    if len(ps) > M.N:
        raise InputError(f"arity {len(ps)} exceeds the bound {M.N}")
    prod = monoidal.day_convolution(M, ps)
    P = prod.presheaf
    rep.data["product"] = {x: list(v) for x, v in P.values.items()}
    rep.exact("presheaf axioms", not yoneda.validate_presheaf(P))
    cands = [yoneda.yoneda_object(A, x) for x in A.objects]
    cands += [p for p in ws.entries["presheaves"].values()
              if p.base == A and not any(p == q for q in cands)]
    for q in cands:
        isos = [t for t in yoneda.hom_presheaves(P, q).transformations if t.is_iso()]
        if isos:
            rep.data["iso"] = f"{P.name} ≅ {q.name}"
            rep.data["iso table"] = sorted([list(k) + [v] for k, v in isos[0].comp.items()])
            break
    names = args[1:]
    if all(n.startswith("y") and n[1:] in A.objects for n in names):
        xs = tuple(n[1:] for n in names)
        _, fwd, bwd = monoidal.ybar(M, xs, prod)
        ok = (fwd.is_natural() and bwd.is_natural()
              and yoneda.compose_maps(bwd, fwd) == yoneda.identity_map(P)
              and yoneda.compose_maps(fwd, bwd) == yoneda.identity_map(fwd.target))
        rep.exact(f"ȳ: {P.name} ≅ y{M.t(xs)}", ok, "structure maps are not inverse")


def cmd_monoidal_yoneda(ws, args, rep, opts):
    _need(args, 1, "monoidal-yoneda J")
    Jm = _one(ws, args[0], ("monoidal_profunctors",), "monoidal profunctor")
    data = monoidal.monoidal_curry(Jm)
    rep.exact("cur J compositors coherent", not data.report, "; ".join(data.report[:3]), data.report[:10])
    fails = monoidal.monoidal_yoneda_check(Jm, data)
    rep.exact("J ≅ ps(y, cur J) as monoidal profunctors", not fails,
              f"structure maps not intertwined at {len(fails)} tuples", fails[:10])
    bc = monoidal.monoidal_beck_chevalley(Jm)
    inv = data.all_invertible()
    rep.data["beck-chevalley"] = bc.label()
    rep.data["non-invertible compositors"] = [list(ys) for ys, ok in sorted(data.invertible.items()) if not ok]
    rep.exact("BC verdict = compositors invertible", bc.holds == inv,
              f"BC {bc.label()} but invertible={inv}")


def cmd_bc_check(ws, args, rep, opts):
    _need(args, 1, "bc-check (J | cell ...)")
    hits = ws.find(args[0], ("monoidal_profunctors",))
    if hits and len(args) == 1:
        rep.check("left Beck-Chevalley", monoidal.monoidal_beck_chevalley(hits[0][1]))
        return
    cells = [_cell(ws, n) for n in args]
    rep.check("left Beck-Chevalley", kan.satisfies_left_beck_chevalley(cells, opts.ctx(ws)))


def cmd_doctrinal(ws, args, rep, opts):
    _need(args, 1, "doctrinal ADJUNCTION")
    a = _one(ws, args[0], ("adjunctions",), "adjunction")
    try:
        g = monoidal.doctrinal_right_adjoint(a.left, a.right, a.unit, a.counit)
    except ValueError as e:
        rep.exact("preconditions", False, str(e))
        return
    rep.data["compositors"] = sorted([list(xs), m] for xs, m in g.comp.items())
    rep.data["invertible"] = monoidal.invert_compositors(g) is not None
    v = monoidal.validate_lax_functor(g)
    rep.exact("lifted lax structure", not v, "; ".join(v[:3]), v[:10])
    t = monoidal.adjunction_t_cells(a.left, g, a.unit, a.counit)
    rep.exact("unit and counit are T-cells", not t, "; ".join(t[:3]), t[:10])


def cmd_lift_kan(ws, args, rep, opts):
    _need(args, 2, "lift-kan d J")
    d = _one(ws, args[0], ("lax_functors",), "lax functor")
    Jm = _one(ws, args[1], ("monoidal_profunctors",), "monoidal profunctor")
    if d.underlying.source != Jm.underlying.source:
        raise InputError("shape mismatch: d and J have different sources")
    w = kan.pointwise_lan(d.underlying, Jm.underlying)
    if w is None:
        rep.exact("pointwise left Kan extension exists", False, "some column has no weighted colimit")
        return
    res = monoidal.lift_lax_structure_on_kan(d, w, Jm)
    if res.functor is None:
        rep.exact("lift", False, f"declined, hypothesis {res.failed_hypothesis} fails: {res.detail}",
                  [res.failed_hypothesis, res.detail])
        return
    l = res.functor
    rep.data["extension"] = dict(l.underlying.obj_map)
    rep.data["compositors"] = sorted([list(ys), m] for ys, m in l.comp.items())
    rep.data["invertible"] = monoidal.invert_compositors(l) is not None
    v = monoidal.validate_lax_functor(l)
    rep.exact("lifted lax structure", not v, "; ".join(v[:3]), v[:10])
    t = monoidal.kan_t_cell_check(d, l, w, Jm)
    rep.exact("η is a T-cell", not t, f"fails at {len(t)} tuples", t[:10])


def cmd_check_cartesian(ws, args, rep, opts):
    _need(args, 1, "check-cartesian CELL")
    c = _cell(ws, args[0])
    rep.check("cartesian", universal.is_cartesian(c, opts.ctx(ws).with_(*_cell_ctx(c))))


def cmd_check_cocartesian(ws, args, rep, opts):
    _need(args, 1, "check-cocartesian CELL ...")
    cs = [_cell(ws, n) for n in args]
    ctx = opts.ctx(ws)
    for c in cs:
        ctx = ctx.with_(*_cell_ctx(c))
    rep.check("cocartesian", universal.is_cocartesian_path(cs, ctx))


def cmd_check_pointwise(ws, args, rep, opts):
    _need(args, 1, "check-pointwise CELL ...")
    cs = [_cell(ws, n) for n in args]
    ctx = opts.ctx(ws)
    for c in cs:
        ctx = ctx.with_(*_cell_ctx(c))
    rep.check("right pointwise cocartesian", universal.is_pointwise_cocartesian(cs, ctx, "right"))


def _cell_ctx(c):
    profs = list(c.src) + ([] if c.nullary else [c.tgt])
    return profs, [c.left, c.right]


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# --------------------------------------------------------------------- main

class Options:
    def __init__(self, ns):
        self.ctx_name = ns.ctx
        self.path_len = ns.path_len
        self.seed = ns.seed

    def ctx(self, ws):
        if self.ctx_name in (None, "default"):
            return ws.default_context(self.path_len if self.path_len is not None else 2)
        hits = ws.find(self.ctx_name, ("contexts",))
        if not hits:
            raise InputError(f"no context named {self.ctx_name!r}")
        return hits[0][1].context(self.path_len)


def build_workspace(ns, command, args):
    check = command != "validate"
    if ns.load:
        ws = Workspace()
        for path in ns.load:
            if path in BUNDLES:
                ws.merge(load_bundle(path, check=check))
            else:
                load(path, check=check, into=ws)
        return ws
    name = args[0] if args and args[0] in BUNDLES else "corpus"
    return load_bundle(name, check=check)


def apply_arity(ws, N):
    for M in ws.entries["monoidal"].values():
        if N > M.N:
            raise InputError(f"--arity {N} exceeds the tables of {M.name} (N = {M.N})")
        M.N = N


def parser():
    p = argparse.ArgumentParser(prog="hvdc", description=__doc__.split("\n")[0])
    p.add_argument("action", nargs="?", choices=("run", "list"), help="run a command or list entries")
    p.add_argument("rest", nargs="*", help="command and its arguments")
    p.add_argument("--load", action="append", metavar="FILE",
                   help="workspace document or bundled name (repeatable)")
    p.add_argument("--ctx", metavar="NAME", help="context entry, or 'default'")
    p.add_argument("--path-len", type=int, metavar="L", help="maximal path length in contexts")
    p.add_argument("--arity", type=int, metavar="N", help="arity bound for monoidal checks")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--verify-witness", metavar="FILE", help="re-run a saved json report")
    p.add_argument("--seed", type=int, metavar="S", help="seed for randomised families")
    return p


def run(argv):
    """Parse argv and produce (report or None, exit code, message)."""
    ns = parser().parse_intermixed_args(argv)
    if ns.verify_witness:
        return verify_witness(ns.verify_witness)
    if ns.action is None:
        raise InputError("nothing to do: give 'run COMMAND ...' or 'list'")
    if ns.action == "list":
        ws = build_workspace(ns, "list", ns.rest)
        lines = [f"{k}: {', '.join(sorted(ws.entries[k]))}" for k in KINDS if ws.entries[k]]
        return None, EXIT_OK, "\n".join(lines)
    if not ns.rest:
        raise InputError("missing command; one of: " + ", ".join(COMMANDS))
    command, args = ns.rest[0], ns.rest[1:]
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}; one of: " + ", ".join(COMMANDS))
    ws = build_workspace(ns, command, args)
    if ns.arity is not None:
        apply_arity(ws, ns.arity)
    rep = Report(list(argv), command, list(args))
    t0 = time.perf_counter()
    HANDLERS[command](ws, args, rep, Options(ns))
    rep.seconds = time.perf_counter() - t0
    return rep, rep.exit_code, rep.render(ns.format)


def _strip(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--format", "--verify-witness"):
            skip = True
            continue
        if a.startswith("--format=") or a.startswith("--verify-witness="):
            continue
        out.append(a)
    return out


def verify_witness(path):
    """Re-run the command of a saved json report; every failing check must
    fail again with the same witness."""
    try:
        with open(path, encoding="utf-8") as fh:
            old = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read report {path}: {e}") from None
    if old.get("hvdc_report") != 1:
        raise InputError(f"{path} is not an hvdc report")
    rep, _, _ = run(_strip(old["argv"]))
    new = {c["name"]: c for c in rep.checks}
    lines, ok = [], True
    failing = [c for c in old["checks"] if not c["holds"]]
    for c in failing:
        n = new.get(c["name"])
        same = n is not None and not n["holds"] and n["witness"] == c["witness"]
        ok = ok and same
        lines.append(f"[{'re-fails' if same else 'NOT reproduced'}] {c['name']}")
    if not failing:
        lines.append("report has no failing checks")
    return rep, (EXIT_OK if ok else EXIT_FAILED), "\n".join(lines)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        _, code, text = run(argv)
    except (InputError, LoadError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"hvdc: input error: {msg}", file=sys.stderr)
        if isinstance(e, LoadError):
            for m in e.errors:
                print(f"  {m}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"hvdc: shape mismatch: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationLimit as e:
        print(f"hvdc: enumeration guard: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
