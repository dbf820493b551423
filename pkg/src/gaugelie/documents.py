"""JSON documents for algebras, morphisms, gauges and certificates.

Coefficients are strings ``"p/q"`` or ``"p"``.  Output is canonical: generators
ordered by (degree, label), which is the storage order of every space, entries
by (arity, args), lowest-term rationals and sorted keys, so
``dump(load(doc)) == doc`` for documents already in that form.
Morphism-like documents embed their source and target algebras; a string in
those slots is read as a path relative to the referencing file.
"""

import json
import os
from fractions import Fraction

from .algebra import LInftyAlgebra, LInftyMorphism, check_structure
from .convolution import Convolution, HomotopyCertificate
from .errors import InvalidStructure, MalformedInput
from .graded import GradedVectorSpace

DEFAULT_TRUNCATION = 4

_FIELDS = {
    "algebra": {"kind", "name", "truncation", "generators", "differential", "brackets"},
    "morphism": {"kind", "source", "target", "components"},
    "gauge": {"kind", "source", "target", "degree", "components"},
    "certificate": {"kind", "source", "target", "gauge"},
}


def parse_coeff(x, where="coefficient"):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise MalformedInput(f"{where}: coefficients must be strings 'p/q' or 'p', got {x!r}")
    s = str(x).strip()
    if any(ch in s for ch in ".eE") or not s:
        raise MalformedInput(f"{where}: {x!r} is not an exact rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise MalformedInput(f"{where}: {x!r} is not a rational") from None


def format_coeff(c):
    return str(Fraction(c))


def _fields(doc, kind):
    if not isinstance(doc, dict):
        raise MalformedInput(f"{kind} document must be an object")
    extra = set(doc) - _FIELDS[kind]
    if extra:
        raise MalformedInput(f"unknown fields in {kind} document: {sorted(extra)}")
    if doc.get("kind", kind) != kind:
        raise MalformedInput(f"expected a {kind} document, got {doc.get('kind')!r}")


def _entries(items, allowed, where):
    if not isinstance(items, list):
        raise MalformedInput(f"{where} must be a list")
    for e in items:
        if not isinstance(e, dict):
            raise MalformedInput(f"{where} entries must be objects")
        extra = set(e) - allowed
        if extra:
            raise MalformedInput(f"unknown fields in {where} entry: {sorted(extra)}")
    return items


def _result(entry, where):
    out = {}
    for r in _entries(entry.get("result", []), {"dst", "coeff"}, where):
        dst = r.get("dst")
        out[dst] = out.get(dst, 0) + parse_coeff(r.get("coeff"), f"{where} -> {dst}")
    return out


def _labelled(space, labels, where):
    for lab in labels:
        if not isinstance(lab, str) or lab not in space.labels():
            raise MalformedInput(f"{where}: unknown generator {lab!r}")


# algebras -----------------------------------------------------------------------


def load_algebra(doc, truncation=None, base=None):
    """``LInftyAlgebra`` from a document (or a path string)."""
    if isinstance(doc, str):
        return load_algebra(read_json(_resolve(doc, base)), truncation, os.path.dirname(_resolve(doc, base)))
    _fields(doc, "algebra")
    gens = _entries(doc.get("generators", []), {"label", "degree"}, "generators")
    pairs = []
    for g in gens:
        lab, deg = g.get("label"), g.get("degree")
        if not isinstance(lab, str) or isinstance(deg, bool) or not isinstance(deg, int):
            raise MalformedInput(f"generator {g!r} needs a string label and an integer degree")
        pairs.append((lab, deg))
    if len({p[0] for p in pairs}) != len(pairs):
        raise MalformedInput("duplicate generator labels")
    space = GradedVectorSpace(pairs)
    N = truncation or doc.get("truncation", DEFAULT_TRUNCATION)
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise MalformedInput(f"truncation must be a positive integer, got {N!r}")
    differential = {}
    for e in _entries(doc.get("differential", []), {"src", "dst", "coeff"}, "differential"):
        src, dst = e.get("src"), e.get("dst")
        _labelled(space, [src, dst], "differential")
        col = differential.setdefault(src, {})
        col[dst] = col.get(dst, 0) + parse_coeff(e.get("coeff"), f"d({src})")
    brackets = []
    for e in _entries(doc.get("brackets", []), {"arity", "args", "result"}, "brackets"):
        args = e.get("args")
        if not isinstance(args, list) or len(args) != e.get("arity", len(args)) or len(args) < 2:
            raise MalformedInput(f"bracket entry {args!r}: arity and args disagree")
        _labelled(space, args, "brackets")
        val = _result(e, f"l({', '.join(args)})")
        _labelled(space, val, f"l({', '.join(args)})")
        brackets.append((tuple(args), val))
    for src, col in differential.items():
        for dst in col:
            if space.degree(space.index(dst)) != space.degree(space.index(src)) + 1:
                raise MalformedInput(f"differential of generator {src!r} hits {dst!r} in the wrong degree")
    for args, val in brackets:
        want = sum(space.degree(space.index(a)) for a in args) + 2 - len(args)
        for dst in val:
            if val[dst] and space.degree(space.index(dst)) != want:
                raise MalformedInput(
                    f"l_{len(args)}({', '.join(args)}) hits generator {dst!r} in degree "
                    f"{space.degree(space.index(dst))}, expected {want}")
    return LInftyAlgebra.from_exterior(space, N, differential=differential, brackets=brackets,
                                       name=doc.get("name"))


def _sorted_result(space, val):
    pos = {lab: n for n, lab in enumerate(space.labels())}
    return [{"coeff": format_coeff(c), "dst": d} for d, c in sorted(val.items(), key=lambda kv: pos[kv[0]]) if c]


def _components(space, items):
    out = [{"args": list(labels), "arity": len(labels), "result": _sorted_result(space, val)}
           for labels, val in items if any(val.values())]
    out.sort(key=lambda e: (e["arity"], e["args"]))
    return out


def dump_algebra(g):
    sp = g.space
    doc = {"kind": "algebra", "truncation": g.N,
           "generators": [{"degree": sp.degree(i), "label": sp.label(i)} for i in range(sp.dim)]}
    if g.name:
        doc["name"] = g.name
    diff, brs = [], []
    pos = {lab: n for n, lab in enumerate(sp.labels())}
    for labels, val in g.to_exterior():
        if len(labels) == 1:
            diff += [{"coeff": format_coeff(c), "dst": d, "src": labels[0]}
                     for d, c in sorted(val.items(), key=lambda kv: pos[kv[0]]) if c]
        else:
            brs.append((labels, val))
    diff.sort(key=lambda e: (pos[e["src"]], pos[e["dst"]]))
    doc["differential"] = diff
    doc["brackets"] = _components(sp, brs)
    return doc


# morphisms, gauges, certificates --------------------------------------------------


def _pair(doc, truncation, base):
    return load_algebra(doc.get("source"), truncation, base), load_algebra(doc.get("target"), truncation, base)


def _component_list(doc, source, target, where):
    out = []
    for e in _entries(doc.get("components", []), {"arity", "args", "result"}, where):
        args = e.get("args")
        if not isinstance(args, list) or not args or len(args) != e.get("arity", len(args)):
            raise MalformedInput(f"{where} entry {args!r}: arity and args disagree")
        _labelled(source.space, args, where)
        val = _result(e, f"{where}({', '.join(args)})")
        _labelled(target.space, val, where)
        if len(args) <= source.N:
            out.append((tuple(args), val))
    return out


def load_morphism(doc, truncation=None, base=None):
    if isinstance(doc, str):
        path = _resolve(doc, base)
        return load_morphism(read_json(path), truncation, os.path.dirname(path))
    _fields(doc, "morphism")
    source, target = _pair(doc, truncation, base)
    comps = _component_list(doc, source, target, "F")
    for labels, val in comps:
        want = sum(source.space.degree(source.space.index(a)) for a in labels) + 1 - len(labels)
        for dst, c in val.items():
            if c and target.space.degree(target.space.index(dst)) != want:
                raise MalformedInput(f"F_{len(labels)}({', '.join(labels)}) hits {dst!r} in the wrong degree")
    return LInftyMorphism.from_exterior(source, target, comps)


def dump_morphism(F):
    return {"components": _components(F.target.space, F.to_exterior()), "kind": "morphism",
            "source": dump_algebra(F.source), "target": dump_algebra(F.target)}


def load_gauge(doc, truncation=None, base=None):
    if isinstance(doc, str):
        path = _resolve(doc, base)
        return load_gauge(read_json(path), truncation, os.path.dirname(path))
    _fields(doc, "gauge")
    source, target = _pair(doc, truncation, base)
    degree = doc.get("degree", 0)
    if isinstance(degree, bool) or not isinstance(degree, int):
        raise MalformedInput(f"gauge degree must be an integer, got {degree!r}")
    conv = Convolution(source, target)
    return conv.from_exterior(degree, _component_list(doc, source, target, "H"))


def dump_gauge(x):
    S, T = x.conv.source, x.conv.target
    return {"components": _components(T.space, x.to_exterior()), "degree": x.degree,
            "kind": "gauge", "source": dump_algebra(S), "target": dump_algebra(T)}


def load_certificate(doc, truncation=None, base=None, verify=True):
    """Certificate from a document; re-verified unless ``verify=False``."""
    if isinstance(doc, str):
        path = _resolve(doc, base)
        return load_certificate(read_json(path), truncation, os.path.dirname(path), verify)
    _fields(doc, "certificate")
    F1 = load_morphism(doc.get("source"), truncation, base)
    F2 = load_morphism(doc.get("target"), truncation, base)
    H = load_gauge(doc.get("gauge"), truncation, base)
    if H.conv.source.space != F1.source.space or H.conv.target.space != F1.target.space:
        raise MalformedInput("certificate gauge lives on different algebras")
    H = Convolution(F1.source, F1.target).from_exterior(0, H.to_exterior())
    cert = HomotopyCertificate(F1, F2, H)
    if verify and not cert.verify():
        raise InvalidStructure("certificate does not verify: gauge(source, H) ≠ target")
    return cert


def dump_certificate(cert):
    return {"gauge": dump_gauge(cert.gauge), "kind": "certificate",
            "source": dump_morphism(cert.source), "target": dump_morphism(cert.target)}


# generic ---------------------------------------------------------------------------

LOADERS = {"algebra": load_algebra, "morphism": load_morphism, "gauge": load_gauge,
           "certificate": load_certificate}


def load(doc, truncation=None, base=None):
    """``(kind, object)`` for any document."""
    if not isinstance(doc, dict) or doc.get("kind") not in LOADERS:
        raise MalformedInput("document needs a 'kind' among " + ", ".join(sorted(LOADERS)))
    return doc["kind"], LOADERS[doc["kind"]](doc, truncation, base)


def dump(obj):
    if isinstance(obj, LInftyAlgebra):
        return dump_algebra(obj)
    if isinstance(obj, LInftyMorphism):
        return dump_morphism(obj)
    if isinstance(obj, HomotopyCertificate):
        return dump_certificate(obj)
    return dump_gauge(obj)


def to_text(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _resolve(path, base):
    if path == "-" or os.path.isabs(path) or not base:
        return path
    return os.path.join(base, path)


def read_json(path):
    import sys

    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise MalformedInput(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path}: invalid JSON ({e.msg}, line {e.lineno})") from None


def structure_report(g):
    return [", ".join(m) for m in check_structure(g)]


__all__ = [
    "DEFAULT_TRUNCATION", "dump", "dump_algebra", "dump_certificate",
    "dump_gauge", "dump_morphism", "format_coeff", "load", "load_algebra", "load_certificate",
    "load_gauge", "load_morphism", "parse_coeff", "read_json", "to_text",
]
