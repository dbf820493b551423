"""Batch command line: ``gaugelie <command> [documents] [flags]``.

Exit codes: 0 success, 1 a property fails (including NotHomotopic and
CertificateNotFound), 2 malformed input.  With ``--format text`` a produced
document goes to stdout (or ``--output``) and the summary to stderr; with
``--format json`` a single report ``{command, status, violations, ...}`` is
printed, carrying the document under ``"document"``.
"""

import argparse
import json
import sys

from . import documents as docs
from .algebra import check_morphism, check_structure, compose_morphisms
from .convolution import Convolution, find_homotopy, gauge_action
from .errors import GaugeLieError, InvalidStructure, MalformedInput, NotAMorphism

LIE_DOC_LIMIT = 200


class Report:
    def __init__(self, command):
        self.command = command
        self.violations = []
        self.lines = []
        self.extra = {}
        self.document = None

    def say(self, line):
        self.lines.append(line)

    def fail(self, item):
        self.violations.append(item)

    @property
    def code(self):
        return 1 if self.violations else 0


# loading with validation ------------------------------------------------------------


def _load(path, args, kind=None):
    doc = docs.read_json(path)
    got, obj = docs.load(doc, args.truncation, base=_dirname(path))
    if kind and got != kind:
        raise MalformedInput(f"{path}: expected a {kind} document, got {got}")
    return obj


def _dirname(path):
    import os

    return None if path == "-" else os.path.dirname(path)


def _valid_algebra(g):
    bad = check_structure(g)
    if bad:
        raise InvalidStructure(f"{g.name or 'algebra'}: Q² ≠ 0 on " + "; ".join(map(_mono, bad[:5])))
    return g


def _valid_morphism(F):
    _valid_algebra(F.source)
    _valid_algebra(F.target)
    bad = check_morphism(F)
    if bad:
        raise NotAMorphism("morphism equation fails on " + "; ".join(map(_mono, bad[:5])))
    return F


def _mono(labels):
    return "(" + ", ".join(labels) + ")"


def _same(a, b):
    return a.space == b.space and a.brackets == b.brackets and a.N == b.N


def _gauge_on(F, H):
    if not (_same(F.source, H.conv.source) and _same(F.target, H.conv.target)):
        raise MalformedInput("gauge document lives on different algebras than the morphism")
    return Convolution(F.source, F.target).from_exterior(0, H.to_exterior())


# commands ------------------------------------------------------------------------------


def cmd_check(args, rep):
    doc = docs.read_json(args.document)
    kind, obj = docs.load(doc, args.truncation, base=_dirname(args.document))
    if kind == "algebra":
        for m in check_structure(obj):
            rep.fail(f"Q² ≠ 0 on {_mono(m)}")
        rep.say(f"{obj!r}: {'valid' if not rep.violations else 'invalid'}")
    elif kind == "morphism":
        for g in (obj.source, obj.target):
            for m in check_structure(g):
                rep.fail(f"{g.name or 'algebra'}: Q² ≠ 0 on {_mono(m)}")
        if not rep.violations:
            for m in check_morphism(obj):
                rep.fail(f"morphism equation fails on {_mono(m)}")
        rep.say(f"morphism with {len(obj.comps)} components: {'valid' if not rep.violations else 'invalid'}")
    elif kind == "gauge":
        for g in (obj.conv.source, obj.conv.target):
            for m in check_structure(g):
                rep.fail(f"{g.name or 'algebra'}: Q² ≠ 0 on {_mono(m)}")
        rep.say(f"degree-{obj.degree} gauge element: {'valid' if not rep.violations else 'invalid'}")
    else:
        rep.say("certificate verifies")


def cmd_compose(args, rep):
    F = _valid_morphism(_load(args.first, args, "morphism"))
    G = _valid_morphism(_load(args.second, args, "morphism"))
    if not _same(F.target, G.source):
        raise MalformedInput("target of the first morphism is not the source of the second")
    G.source = F.target
    rep.document = docs.dump(compose_morphisms(F, G))
    rep.say("composite G∘F written")


def cmd_gauge(args, rep):
    F = _valid_morphism(_load(args.morphism, args, "morphism"))
    H = _gauge_on(F, _load(args.gauge, args, "gauge"))
    rep.document = docs.dump(gauge_action(F, H))
    rep.say("gauge transform F_H written")


def cmd_homotopy_find(args, rep):
    F1 = _valid_morphism(_load(args.first, args, "morphism"))
    F2 = _valid_morphism(_load(args.second, args, "morphism"))
    if not (_same(F1.source, F2.source) and _same(F1.target, F2.target)):
        raise MalformedInput("the two morphisms have different sources or targets")
    F2.source, F2.target = F1.source, F1.target
    cert = find_homotopy(F1, F2)
    if not cert.verify():
        rep.fail("certificate does not re-verify")
    rep.document = docs.dump(cert)
    rep.extra["certificate"] = rep.document
    rep.say("homotopy found; certificate verifies")


def cmd_transfer(args, rep):
    from .transfer import transfer

    g = _valid_algebra(_load(args.algebra, args, "algebra"))
    r = transfer(g)
    for v in r.violations():
        rep.fail(v)
    rep.document = docs.dump(r.transferred)
    rep.extra["morphisms"] = {"M": docs.dump(r.M), "P": docs.dump(r.P)}
    ranks = {}
    for m in r.transferred.brackets:
        ranks[len(m)] = ranks.get(len(m), 0) + 1
    rep.say(f"H(g) has dimension {r.transferred.space.dim}; nonzero brackets by arity: {ranks or 'none'}")


def cmd_invert_embedding(args, rep):
    from .inversion import embedding_inverse

    i = _load(args.embedding, args, "morphism")
    tr = embedding_inverse(i)
    for n, c in enumerate(tr.certificates):
        if not c.verify():
            rep.fail(f"certificate {n} does not verify")
    rep.document = docs.dump(tr.result)
    rep.extra["certificates"] = [docs.dump(c) for c in tr.certificates]
    rep.say(f"F^∞ after {len(tr.gauges)} gauge steps; both certificates verify")


def cmd_invert(args, rep):
    from .inversion import homotopy_inverse

    F = _load(args.morphism, args, "morphism")
    G, certs = homotopy_inverse(F)
    for n, c in enumerate(certs):
        if not c.verify():
            rep.fail(f"certificate {n} does not verify")
    rep.document = docs.dump(G)
    rep.extra["certificates"] = [docs.dump(c) for c in certs]
    rep.say("homotopy inverse G with certificates for F∘G ~ id and G∘F ~ id")


def cmd_cylinder(args, rep):
    from .convolution import mc_curvature
    from .cylinder import cylinder_morphism, endpoint

    U0 = _valid_morphism(_load(args.morphism, args, "morphism"))
    H = _gauge_on(U0, _load(args.gauge, args, "gauge"))
    C, U = cylinder_morphism(U0, H, args.t_degree)
    if mc_curvature(U):
        rep.fail("U_Cyl is not an L∞ morphism")
    if endpoint(C, U, 0) != U0:
        rep.fail("p₀∘U_Cyl ≠ U0")
    if endpoint(C, U, 1) != gauge_action(U0, H):
        rep.fail("p₁∘U_Cyl ≠ (U0)_H")
    rep.document = docs.dump(U)
    rep.say(f"U_Cyl into Cyl with t-degree bound {C.D}")


def cmd_quillen(args, rep):
    from .fixtures import seeded
    from .quillen import functor_C, functor_L, hom_set_bijection, q_backward, q_forward

    if args.functor in ("C", "L"):
        g = _valid_algebra(_load(args.inputs[0], args, "algebra"))
        X = functor_C(g)
        for v in X.violations():
            rep.fail(str(v))
        weights = {}
        for w in X.weight.values():
            weights[w] = weights.get(w, 0) + 1
        rep.extra["weights"] = {str(k): v for k, v in sorted(weights.items())}
        rep.say(f"C(g): dimension {X.space.dim}, by weight {dict(sorted(weights.items()))}")
        if args.functor == "L":
            L = functor_L(X)
            dims = L.dims()
            rep.extra["lengths"] = {str(k): v for k, v in sorted(dims.items())}
            rep.say(f"L(C(g)): generators {L.generators.dim}, dimension by length {dims}")
            total = sum(dims.values())
            if total <= LIE_DOC_LIMIT:
                rep.document = docs.dump(L.as_dg_lie(g.N, name=f"L(C({g.name or ''}))"))
            else:
                rep.say(f"document omitted: dimension {total} exceeds {LIE_DOC_LIMIT}")
    elif args.functor == "adjunction":
        if len(args.inputs) != 2:
            raise MalformedInput("quillen adjunction needs a source and a target algebra")
        X = functor_C(_valid_algebra(_load(args.inputs[0], args, "algebra")))
        Y = _valid_algebra(_load(args.inputs[1], args, "algebra"))
        tried, good, bad = hom_set_bijection(X, Y, limit=args.samples, rng=seeded(args.seed))
        for f in bad[:5]:
            rep.fail(f"adjunction mismatch on {f}")
        rep.extra["maps"] = tried
        rep.extra["morphisms"] = good
        rep.say(f"{tried} linear maps checked, {good} are morphisms, {len(bad)} mismatches")
    else:
        M = _valid_morphism(_load(args.inputs[0], args, "morphism"))
        phi = q_forward(M)
        if not phi.is_chain_map():
            rep.fail("Q(M) is not a chain map")
        if q_backward(phi, M.source, M.target) != M:
            rep.fail("Q⁻¹(Q(M)) ≠ M")
        rep.say(f"Q(M) on {phi.source.generators.dim} generators; Q⁻¹∘Q = id")


def cmd_selftest(args, rep):
    from .acceptance import run_all

    outcomes = run_all(seed=args.seed, report=lambda o: print(o.line(), file=sys.stderr, flush=True)
                       if args.format == "text" else None)
    for o in outcomes:
        if not o.passed:
            rep.fail(o.line())
    rep.extra["criteria"] = [
        {"number": o.number, "title": o.title, "passed": o.passed, "detail": o.detail,
         "seconds": round(o.seconds, 3)} for o in outcomes
    ]
    rep.say(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} acceptance criteria pass")


COMMANDS = {
    "check": cmd_check, "compose": cmd_compose, "gauge": cmd_gauge,
    "homotopy-find": cmd_homotopy_find, "transfer": cmd_transfer,
    "invert-embedding": cmd_invert_embedding, "invert": cmd_invert,
    "cylinder": cmd_cylinder, "quillen": cmd_quillen, "selftest": cmd_selftest,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=int, default=None, metavar="N",
                        help="override the truncation arity of every loaded document "
                             f"(documents without one use {docs.DEFAULT_TRUNCATION})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None, help="write the produced document here")

    p = argparse.ArgumentParser(prog="gaugelie", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("check", parents=[common], help="validate any document")
    s.add_argument("document")
    s = sub.add_parser("compose", parents=[common], help="G∘F for F: g1 → g2, G: g2 → g3")
    s.add_argument("first")
    s.add_argument("second")
    s = sub.add_parser("gauge", parents=[common], help="apply a gauge document to a morphism")
    s.add_argument("morphism")
    s.add_argument("gauge")
    s = sub.add_parser("homotopy-find", parents=[common], help="certificate for F1 ~ F2")
    s.add_argument("first")
    s.add_argument("second")
    s = sub.add_parser("transfer", parents=[common], help="transferred structure on cohomology")
    s.add_argument("algebra")
    s = sub.add_parser("invert-embedding", parents=[common], help="inverse of a strict quasi-iso embedding")
    s.add_argument("embedding")
    s = sub.add_parser("invert", parents=[common], help="homotopy inverse of a quasi-isomorphism")
    s.add_argument("morphism")
    s = sub.add_parser("cylinder", parents=[common], help="emit U_Cyl for a morphism and a gauge")
    s.add_argument("morphism")
    s.add_argument("gauge")
    s.add_argument("--t-degree", type=int, default=None, metavar="D")
    s = sub.add_parser("quillen", parents=[common], help="Quillen functors and the Q correspondence")
    s.add_argument("functor", choices=("C", "L", "adjunction", "Q"))
    s.add_argument("inputs", nargs="+")
    s.add_argument("--samples", type=int, default=200, help="random maps tried by 'adjunction'")
    sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    return p


def _emit(rep, args, status, out, err):
    if args.output and rep.document is not None:
        text = docs.to_text(rep.document)
        if args.output == "-":
            out.write(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
    if args.format == "json":
        body = {"command": rep.command, "status": status, "violations": rep.violations,
                "messages": rep.lines, **rep.extra}
        if rep.document is not None:
            body["document"] = rep.document
        out.write(json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
        return
    if rep.document is not None and not args.output:
        out.write(docs.to_text(rep.document))
    for line in rep.lines:
        err.write(line + "\n")
    for v in rep.violations:
        err.write(f"violation: {v}\n")
    err.write(f"{rep.command}: {status}\n")


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    try:
        if args.truncation is not None and args.truncation < 1:
            raise MalformedInput("--truncation must be positive")
        COMMANDS[args.command](args, rep)
        code = rep.code
        status = "ok" if code == 0 else "violated"
    except GaugeLieError as e:
        code = e.exit_code
        status = "malformed" if code == 2 else "violated"
        rep.fail(f"{type(e).__name__}: {e}")
        rep.document = None
    _emit(rep, args, status, out, err)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
