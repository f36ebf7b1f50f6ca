"""Named entries loaded from JSON documents, and their canonical serialisation.

A document is a UTF-8 JSON object {"hvdc": 1, <kind>: {<name>: <entry>}}.
Entries may refer to entries of earlier kinds by name.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .fincore import (FinCategory, FinFunctor, NatTransformation, validate_category,
                      validate_functor, validate_nat)
from .monoidal import (LaxMonoidalFunctor, MonoidalProfunctor, MonoidalStructure,
                       validate_lax_functor, validate_monoidal,
                       validate_monoidal_profunctor)
from .profcells import Cell, CellFrame, Profunctor, validate_cell, validate_profunctor
from .universal import Context
from .yoneda import Presheaf, validate_presheaf

VERSION = 1
ARROW = "→"

# load order; an entry may only refer to kinds listed before its own
KINDS = ("categories", "functors", "nats", "profunctors", "presheaves", "cells",
         "monoidal", "lax_functors", "monoidal_profunctors", "adjunctions", "contexts")


SINGULAR = {"categories": "category", "nats": "natural transformation",
            "presheaves": "presheaf", "monoidal": "monoidal structure",
            "lax_functors": "lax functor", "monoidal_profunctors": "monoidal profunctor"}


def singular(kind):
    return SINGULAR.get(kind, kind[:-1])


class LoadError(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors[:5]) + (" ..." if len(self.errors) > 5 else ""))


@dataclass
class Adjunction:
    left: LaxMonoidalFunctor
    right: FinFunctor
    unit: NatTransformation
    counit: NatTransformation
    name: str = ""


@dataclass
class NamedContext:
    profunctors: list
    verticals: list
    path_len: int = 2
    name: str = ""

    def context(self, path_len=None):
        return Context(list(self.profunctors), list(self.verticals),
                       self.path_len if path_len is None else path_len)


@dataclass
class Workspace:
    entries: dict = field(default_factory=lambda: {k: {} for k in KINDS})
    provenance: dict = field(default_factory=dict)   # (kind, name) -> source

    def add(self, kind, name, obj, source="<memory>"):
        if name in self.entries[kind]:
            raise LoadError([f"duplicate {singular(kind)} name {name!r}"])
        if hasattr(obj, "name"):
            obj.name = name
        self.entries[kind][name] = obj
        self.provenance[(kind, name)] = source
        return obj

    def get(self, kind, name):
        try:
            return self.entries[kind][name]
        except KeyError:
            raise KeyError(f"no {kind} entry named {name!r}") from None

    def find(self, name, kinds=KINDS):
        """All (kind, obj) with the given name among the kinds."""
        return [(k, self.entries[k][name]) for k in kinds if name in self.entries[k]]

    def name_of(self, kind, obj):
        for n, o in self.entries[kind].items():
            if o is obj:
                return n
        for n, o in self.entries[kind].items():
            if type(o) is type(obj) and o == obj:
                return n
        raise KeyError(f"unregistered {kind} entry {obj!r}")

    def merge(self, other):
        for k in KINDS:
            for n, o in other.entries[k].items():
                self.add(k, n, o, other.provenance.get((k, n), "<memory>"))
        return self

    def default_context(self, path_len=2):
        return Context(list(self.entries["profunctors"].values()),
                       list(self.entries["functors"].values()), path_len)


# ------------------------------------------------------------------ encoding

def _hk(a, b):
    return f"{a}{ARROW}{b}"


def _split(key, where, errs):
    parts = key.split(ARROW)
    if len(parts) != 2:
        errs.append(f"{where}: malformed key {key!r} (expected 'a{ARROW}b')")
        return None
    return tuple(parts)


def _nested(triples):
    """{(k1, k2, k3): v} -> {k1: {k2: {k3: v}}}"""
    out = {}
    for (a, b, c), v in triples.items():
        out.setdefault(a, {}).setdefault(b, {})[c] = v
    return out


def _flat3(d):
    return {(a, b, c): v for a, db in d.items() for b, dc in db.items() for c, v in dc.items()}


def encode_category(C):
    comp = {}
    for (g, f), h in C.comp.items():
        comp.setdefault(g, {})[f] = h
    return {"objects": list(C.objects),
            "hom": {_hk(a, b): list(ms) for (a, b), ms in C.hom.items() if ms},
            "id": dict(C.identity), "comp": comp}


def encode_functor(ws, F):
    return {"source": ws.name_of("categories", F.source),
            "target": ws.name_of("categories", F.target),
            "obj": dict(F.obj_map), "mor": dict(F.mor_map)}


def encode_nat(ws, t):
    return {"source": ws.name_of("functors", t.source), "target": ws.name_of("functors", t.target),
            "components": dict(t.components)}


def encode_profunctor(ws, J):
    # λ keyed (a, u, y) nests as y -> a -> u; ρ keyed (x, u, b) as x -> b -> u
    return {"source": ws.name_of("categories", J.source),
            "target": ws.name_of("categories", J.target),
            "elems": {_hk(x, y): list(us) for (x, y), us in J.elems.items() if us},
            "lact": _nested({(y, a, u): v for (a, u, y), v in J.lact.items()}),
            "ract": _nested({(x, b, u): v for (x, u, b), v in J.ract.items()})}


def encode_presheaf(ws, p):
    action = {}
    for (a, e), v in p.action.items():
        action.setdefault(a, {})[e] = v
    return {"base": ws.name_of("categories", p.base),
            "values": {x: list(es) for x, es in p.values.items() if es}, "action": action}


def encode_cell(ws, c):
    fr = c.frame
    out = {"src": [ws.name_of("profunctors", J) for J in fr.src],
           "left": ws.name_of("functors", fr.left), "right": ws.name_of("functors", fr.right),
           "comp": sorted([list(k) + [v] for k, v in c.comp.items()])}
    if fr.nullary:
        out["tgt_category"] = ws.name_of("categories", fr.tgt)
    else:
        out["tgt"] = ws.name_of("profunctors", fr.tgt)
    return out


def encode_monoidal(ws, M):
    return {"base": ws.name_of("categories", M.base), "N": M.N,
            "tensor": sorted([list(xs), z] for xs, z in M.tobj.items()),
            "tensor_mor": sorted([list(ms), m] for ms, m in M.tmor.items()),
            "assoc": sorted([list(sh), list(xs), m] for (sh, xs), m in M.assoc.items()),
            "unitor": dict(M.unitor)}


def encode_lax(ws, F):
    return {"functor": ws.name_of("functors", F.underlying),
            "src": ws.name_of("monoidal", F.src), "tgt": ws.name_of("monoidal", F.tgt),
            "flavor": F.flavor,
            "compositors": sorted([list(xs), m] for xs, m in F.comp.items())}


def encode_mprof(ws, Jm):
    return {"profunctor": ws.name_of("profunctors", Jm.underlying),
            "src": ws.name_of("monoidal", Jm.src), "tgt": ws.name_of("monoidal", Jm.tgt),
            "structure": sorted([[list(t) for t in ts], v] for ts, v in Jm.struct.items())}


def encode_adjunction(ws, a):
    return {"left": ws.name_of("lax_functors", a.left), "right": ws.name_of("functors", a.right),
            "unit": ws.name_of("nats", a.unit), "counit": ws.name_of("nats", a.counit)}


def encode_context(ws, c):
    return {"profunctors": [ws.name_of("profunctors", J) for J in c.profunctors],
            "verticals": [ws.name_of("functors", f) for f in c.verticals],
            "path_len": c.path_len}


ENCODERS = {
    "categories": lambda ws, C: encode_category(C),
    "functors": encode_functor, "nats": encode_nat, "profunctors": encode_profunctor,
    "presheaves": encode_presheaf, "cells": encode_cell, "monoidal": encode_monoidal,
    "lax_functors": encode_lax, "monoidal_profunctors": encode_mprof,
    "adjunctions": encode_adjunction, "contexts": encode_context,
}


def to_document(ws):
    doc = {"hvdc": VERSION}
    for k in KINDS:
        if ws.entries[k]:
            doc[k] = {n: ENCODERS[k](ws, o) for n, o in ws.entries[k].items()}
    return doc


def dumps(ws):
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(to_document(ws), sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def save(ws, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(ws))


# ------------------------------------------------------------------ decoding

class _Reader:
    def __init__(self, ws, source, errs):
        self.ws, self.source, self.errs = ws, source, errs

    def ref(self, kind, name, where):
        if not isinstance(name, str) or name not in self.ws.entries[kind]:
            msg = f"{where}: dangling reference to unknown {singular(kind)} {name!r}"
            if msg not in self.errs:
                self.errs.append(msg)
            return None
        return self.ws.entries[kind][name]

    def field(self, d, key, where, typ=None):
        if not isinstance(d, dict) or key not in d:
            self.errs.append(f"{where}: missing field {key!r}")
            return None
        v = d[key]
        if typ is not None and not isinstance(v, typ):
            self.errs.append(f"{where}: field {key!r} has the wrong type")
            return None
        return v


def _decode_category(r, name, d):
    where = f"category {name}"
    objs = r.field(d, "objects", where, list)
    hom_raw = r.field(d, "hom", where, dict)
    ident = r.field(d, "id", where, dict)
    comp_raw = r.field(d, "comp", where, dict)
    if None in (objs, hom_raw, ident, comp_raw):
        return None
    for x in objs:
        if ARROW in x:
            r.errs.append(f"{where}: object name {x!r} contains {ARROW!r}")
            return None
    hom = {}
    for k, ms in hom_raw.items():
        ab = _split(k, where, r.errs)
        if ab is None:
            return None
        if ab[0] not in objs or ab[1] not in objs:
            r.errs.append(f"{where}: hom key {k!r} names an unknown object")
            return None
        hom[ab] = ms
    comp = {(g, f): h for g, fs in comp_raw.items() for f, h in fs.items()}
    return FinCategory(tuple(objs), hom, dict(ident), comp, name)


def _decode_functor(r, name, d):
    where = f"functor {name}"
    A = r.ref("categories", r.field(d, "source", where), where)
    B = r.ref("categories", r.field(d, "target", where), where)
    om, mm = r.field(d, "obj", where, dict), r.field(d, "mor", where, dict)
    if None in (A, B, om, mm):
        return None
    return FinFunctor(A, B, dict(om), dict(mm), name)


def _decode_nat(r, name, d):
    where = f"natural transformation {name}"
    F = r.ref("functors", r.field(d, "source", where), where)
    G = r.ref("functors", r.field(d, "target", where), where)
    comps = r.field(d, "components", where, dict)
    if None in (F, G, comps):
        return None
    if not (F.source == G.source and F.target == G.target):
        r.errs.append(f"{where}: functors are not parallel")
        return None
    return NatTransformation(F, G, dict(comps))


def _decode_profunctor(r, name, d):
    where = f"profunctor {name}"
    A = r.ref("categories", r.field(d, "source", where), where)
    B = r.ref("categories", r.field(d, "target", where), where)
    el = r.field(d, "elems", where, dict)
    la, ra = r.field(d, "lact", where, dict), r.field(d, "ract", where, dict)
    if None in (A, B, el, la, ra):
        return None
    elems = {}
    for k, us in el.items():
        xy = _split(k, where, r.errs)
        if xy is None:
            return None
        if xy[0] not in A.objects or xy[1] not in B.objects:
            r.errs.append(f"{where}: element key {k!r} names an unknown object")
            return None
        elems[xy] = us
    lact = {(a, u, y): v for (y, a, u), v in _flat3(la).items()}
    ract = {(x, u, b): v for (x, b, u), v in _flat3(ra).items()}
    return Profunctor(A, B, elems, lact, ract, name)


def _decode_presheaf(r, name, d):
    where = f"presheaf {name}"
    A = r.ref("categories", r.field(d, "base", where), where)
    vals, act = r.field(d, "values", where, dict), r.field(d, "action", where, dict)
    if None in (A, vals, act):
        return None
    if set(vals) - set(A.objects):
        r.errs.append(f"{where}: values at unknown objects {sorted(set(vals) - set(A.objects))}")
        return None
    action = {(a, e): v for a, es in act.items() for e, v in es.items()}
    return Presheaf(A, dict(vals), action, name)


def _decode_cell(r, name, d):
    where = f"cell {name}"
    src = r.field(d, "src", where, list)
    f = r.ref("functors", r.field(d, "left", where), where)
    g = r.ref("functors", r.field(d, "right", where), where)
    rows = r.field(d, "comp", where, list)
    if "tgt_category" in d:
        tgt = r.ref("categories", d["tgt_category"], where)
    else:
        tgt = r.ref("profunctors", r.field(d, "tgt", where), where)
    if None in (src, f, g, rows, tgt):
        return None
    Js = [r.ref("profunctors", n, where) for n in src]
    if None in Js:
        return None
    fr = CellFrame(tuple(Js), f, g, tgt)
    errs = fr.check()
    if errs:
        r.errs += [f"{where}: shape mismatch: {e}" for e in errs]
        return None
    return Cell(fr, {tuple(row[:-1]): row[-1] for row in rows}, name=name)


def _decode_monoidal(r, name, d):
    where = f"monoidal structure {name}"
    A = r.ref("categories", r.field(d, "base", where), where)
    N = r.field(d, "N", where, int)
    rows = [r.field(d, k, where, list) for k in ("tensor", "tensor_mor", "assoc")]
    un = r.field(d, "unitor", where, dict)
    if A is None or N is None or un is None or None in rows:
        return None
    tobj = {tuple(xs): z for xs, z in rows[0]}
    tmor = {tuple(ms): m for ms, m in rows[1]}
    assoc = {(tuple(sh), tuple(xs)): m for sh, xs, m in rows[2]}
    return MonoidalStructure(A, N, tobj, tmor, assoc, dict(un), name)


def _decode_lax(r, name, d):
    where = f"lax functor {name}"
    F = r.ref("functors", r.field(d, "functor", where), where)
    MA = r.ref("monoidal", r.field(d, "src", where), where)
    MC = r.ref("monoidal", r.field(d, "tgt", where), where)
    flavor = r.field(d, "flavor", where, str)
    rows = r.field(d, "compositors", where, list)
    if None in (F, MA, MC, flavor, rows):
        return None
    if flavor not in ("lax", "colax", "pseudo"):
        r.errs.append(f"{where}: unknown flavor {flavor!r}")
        return None
    if F.source != MA.base or F.target != MC.base:
        r.errs.append(f"{where}: shape mismatch between functor and monoidal structures")
        return None
    return LaxMonoidalFunctor(F, MA, MC, {tuple(xs): m for xs, m in rows}, flavor, name)


def _decode_mprof(r, name, d):
    where = f"monoidal profunctor {name}"
    J = r.ref("profunctors", r.field(d, "profunctor", where), where)
    MA = r.ref("monoidal", r.field(d, "src", where), where)
    MB = r.ref("monoidal", r.field(d, "tgt", where), where)
    rows = r.field(d, "structure", where, list)
    if None in (J, MA, MB, rows):
        return None
    if J.source != MA.base or J.target != MB.base:
        r.errs.append(f"{where}: shape mismatch between profunctor and monoidal structures")
        return None
    return MonoidalProfunctor(J, MA, MB, {tuple(tuple(t) for t in ts): v for ts, v in rows}, name)


def _decode_adjunction(r, name, d):
    where = f"adjunction {name}"
    f = r.ref("lax_functors", r.field(d, "left", where), where)
    g = r.ref("functors", r.field(d, "right", where), where)
    u = r.ref("nats", r.field(d, "unit", where), where)
    c = r.ref("nats", r.field(d, "counit", where), where)
    if None in (f, g, u, c):
        return None
    return Adjunction(f, g, u, c, name)


def _decode_context(r, name, d):
    where = f"context {name}"
    ps = r.field(d, "profunctors", where, list)
    vs = r.field(d, "verticals", where, list)
    if ps is None or vs is None:
        return None
    L = d.get("path_len", 2)
    Js = [r.ref("profunctors", n, where) for n in ps]
    fs = [r.ref("functors", n, where) for n in vs]
    if None in Js or None in fs:
        return None
    return NamedContext(Js, fs, L, name)


DECODERS = {
    "categories": _decode_category, "functors": _decode_functor, "nats": _decode_nat,
    "profunctors": _decode_profunctor, "presheaves": _decode_presheaf, "cells": _decode_cell,
    "monoidal": _decode_monoidal, "lax_functors": _decode_lax,
    "monoidal_profunctors": _decode_mprof, "adjunctions": _decode_adjunction,
    "contexts": _decode_context,
}


def _validate_adjunction(a):
    from .monoidal import triangle_identities
    v = list(validate_nat(a.unit)) + list(validate_nat(a.counit))
    if v:
        return v
    return triangle_identities(a.left.underlying, a.right, a.unit.components, a.counit.components)


def _validate_cell(c):
    try:
        return validate_cell(c)
    except ValueError as e:
        return [str(e)]


VALIDATORS = {
    "categories": validate_category, "functors": validate_functor, "nats": validate_nat,
    "profunctors": validate_profunctor, "presheaves": validate_presheaf, "cells": _validate_cell,
    "monoidal": validate_monoidal, "lax_functors": validate_lax_functor,
    "monoidal_profunctors": validate_monoidal_profunctor, "adjunctions": _validate_adjunction,
    "contexts": lambda c: [],
}


def validate_entry(kind, obj):
    try:
        return list(VALIDATORS[kind](obj))
    except (KeyError, TypeError, ValueError) as e:
        return [f"malformed table ({type(e).__name__}: {e})"]


def from_document(doc, source="<memory>", check=True, into=None):
    """Build a workspace from a parsed document.

    With check=True every entry is validated on load and all violations are
    raised together; with check=False invalid entries are kept so that a
    report can list them.
    """
    errs = []
    if not isinstance(doc, dict) or doc.get("hvdc") != VERSION:
        raise LoadError([f"{source}: not an hvdc document (expected top-level \"hvdc\": {VERSION})"])
    unknown = set(doc) - set(KINDS) - {"hvdc"}
    if unknown:
        raise LoadError([f"{source}: unknown section {k!r}" for k in sorted(unknown)])
    ws = into if into is not None else Workspace()
    r = _Reader(ws, source, errs)
    for kind in KINDS:
        section = doc.get(kind, {})
        if not isinstance(section, dict):
            errs.append(f"{source}: section {kind!r} must be an object")
            continue
        for name in sorted(section):
            before = len(errs)
            obj = DECODERS[kind](r, name, section[name])
            if obj is None or len(errs) > before:
                continue
            if check:
                v = validate_entry(kind, obj)
                if v:
                    errs += [f"{singular(kind)} {name}: {m}" for m in v]
                    continue
            try:
                ws.add(kind, name, obj, source)
            except LoadError as e:
                errs += e.errors
    if errs:
        raise LoadError(errs)
    return ws


def loads(text, source="<string>", check=True, into=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError([f"{source}: parse error at line {e.lineno}, column {e.colno}: {e.msg}"]) from None
    return from_document(doc, source, check, into)


def load(path, check=True, into=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise LoadError([f"{path}: {e.strerror}"]) from None
    return loads(text, str(path), check, into)
