"""Homotopy inverses.

``embedding_inverse`` runs the iteration ``F^{k+1} = (F^k)_{X_k}`` for a
quasi-isomorphic dg Lie embedding ``i: g0 → g`` with a contraction
``dh + hd = 1 - ip``, ``h∘i = 0``.  In shifted coefficients the gauge is
``X_k = h ∘ F^k`` (the exterior form carries the opposite sign), so that
``(F^1)_1 = 1 - (1 - ip) = ip``.  Each round freezes one more arity, and
after N rounds every component takes values in ``i(g0)``.

``formal_inverse`` solves ``G ∘ F = id`` arity by arity;
``homotopy_inverse`` goes through minimal models: ``G = M_1 ∘ N̂^{-1} ∘ P_2``
with ``N̂ = P_2 ∘ F ∘ M_1``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import (
    LInftyMorphism, check_morphism, compose_morphisms, identity_morphism,
)
from .convolution import Convolution, HomotopyCertificate, find_homotopy
from .errors import (
    BadContraction, CertificateNotFound, InvalidStructure, NotAnEmbedding,
    NotHomotopic, NotQuasiIso, ShapeMismatch, SingularLinearPart, UnsupportedStructure,
)
from .graded import (
    ContractionData, GradedLinearMap, GradedVectorSpace, cohomology_contraction,
)
from .symmetric import add_into, apply_sym, vec_product


def cohomology_map(f, c1, c2):
    """Map induced on cohomology by a chain map ``f``: ``p_2 ∘ f ∘ i_1``."""
    return c2.p.compose(f).compose(c1.i)


def is_isomorphism(f):
    if f.shift != 0:
        return False
    for n in set(f.source.degrees()) | set(f.target.degrees()):
        if len(f.source.indices_in_degree(n)) != len(f.target.indices_in_degree(n)):
            return False
    return f.rank() == f.source.dim


def invert_linear(f):
    """Inverse of a degree-0 isomorphism; ``SingularLinearPart`` otherwise."""
    if not is_isomorphism(f):
        raise SingularLinearPart("first component is not invertible")
    rows = f.rows()
    entries = {}
    for i in range(f.target.dim):
        x = linalg.solve([rows.get(r, {}) for r in range(f.target.dim)],
                         [1 if r == i else 0 for r in range(f.target.dim)])
        entries[i] = x
    return GradedLinearMap(f.target, f.source, 0, entries)


def contraction_from_inclusion(i, d, d0):
    """Contraction of ``(g, d)`` onto an embedded quasi-isomorphic subcomplex.

    ``p`` is the chain retraction found by an exact solve (free entries 0),
    ``L = ker p`` is the acyclic complement and ``h`` contracts L and
    vanishes on ``i(g0)``.
    """
    g, g0 = i.target, i.source
    # unknown p entries: p[j][a] for basis j of g and a of g0 in the same degree
    unknowns = [(j, a) for j in range(g.dim) for a in range(g0.dim) if g.degree(j) == g0.degree(a)]
    var = {u: n for n, u in enumerate(unknowns)}
    eqs = []
    # p ∘ d = d0 ∘ p on each basis vector of g
    for j in range(g.dim):
        lhs = {}
        for k, c in d.column(j).items():
            for a in range(g0.dim):
                if (k, a) in var:
                    lhs.setdefault(a, {})[var[(k, a)]] = c
        for a in range(g0.dim):
            if (j, a) in var:
                for b, c in d0.column(a).items():
                    row = lhs.setdefault(b, {})
                    row[var[(j, a)]] = row.get(var[(j, a)], 0) - c
        for row in lhs.values():
            eqs.append((row, 0))
    # p ∘ i = 1
    for a in range(g0.dim):
        col = i.column(a)
        for b in range(g0.dim):
            row = {var[(j, b)]: c for j, c in col.items() if (j, b) in var}
            eqs.append((row, 1 if a == b else 0))
    sol = linalg.solve([r for r, _ in eqs], [v for _, v in eqs])
    if sol is None:
        raise NotQuasiIso("no chain retraction onto the subcomplex")
    pe = {}
    for n, v in sol.items():
        j, a = unknowns[n]
        pe.setdefault(j, {})[a] = v
    p = GradedLinearMap(g, g0, 0, pe)
    # L = ker p, with basis from the nullspace, and its own contraction
    kernel = linalg.nullspace(linalg.to_rows(p.entries).values(), g.dim)
    Ls = GradedVectorSpace([(f"l{k}", _vec_degree(g, v)) for k, v in enumerate(kernel)])
    # coordinates of g in the basis i(g0) ⊕ L
    cols = [i.column(a) for a in range(g0.dim)] + kernel
    rows = [dict() for _ in range(g.dim)]
    for c, vec in enumerate(cols):
        for j, v in vec.items():
            rows[j][c] = v

    def coords(vec):
        x = linalg.solve(rows, [vec.get(j, 0) for j in range(g.dim)])
        return {c - g0.dim: v for c, v in x.items() if c >= g0.dim}

    ind = {Ls.index(f"l{k}"): k for k in range(len(kernel))}
    dL = GradedLinearMap(Ls, Ls, 1, {
        j: {Ls.index(f"l{c}"): v for c, v in coords(d(kernel[k])).items()}
        for j, k in ind.items()
    })
    cL = cohomology_contraction(Ls, dL)
    if cL.cohomology.dim:
        raise NotQuasiIso("complement of the subcomplex is not acyclic")
    he = {}
    for j in range(g.dim):
        lc = coords({j: Fraction(1)})
        lvec = {Ls.index(f"l{c}"): v for c, v in lc.items()}
        hv = cL.h(lvec)
        out = {}
        for jj, v in hv.items():
            add_into(out, kernel[ind[jj]], v)
        if out:
            he[j] = out
    h = GradedLinearMap(g, g, -1, he)
    return ContractionData(g, d, g0, p, i, h)


def _vec_degree(space, vec):
    return space.degree(next(iter(vec)))


@dataclass(eq=False)
class InversionTrace:
    iterates: list
    gauges: list
    result: LInftyMorphism
    certificates: tuple
    contraction: ContractionData = None
    total_gauge: object = field(default=None)


def embedding_inverse(i, contraction=None):
    """Homotopy inverse ``F^∞: g → g0`` of a strict quasi-isomorphic embedding."""
    g0, g = i.source, i.target
    if not i.is_strict():
        raise NotAnEmbedding("the embedding must be strict")
    if not g0.is_dg_lie or not g.is_dg_lie:
        raise UnsupportedStructure("embedding_inverse needs dg Lie algebras")
    if check_morphism(i):
        raise InvalidStructure("the embedding is not a dg Lie map")
    lin = i.linear_part()
    if not lin.is_injective():
        raise NotAnEmbedding("first component is not injective")
    c0 = cohomology_contraction(g0.space, g0.differential)
    c1 = cohomology_contraction(g.space, g.differential)
    if not is_isomorphism(cohomology_map(lin, c0, c1)):
        raise NotQuasiIso("the embedding is not a quasi-isomorphism")
    if contraction is None:
        contraction = contraction_from_inclusion(lin, g.differential, g0.differential)
    c = contraction
    if c.i != lin or c.ambient != g.space or c.d != g.differential:
        raise BadContraction("contraction does not match the embedding")
    if not c.h.compose(c.i).is_zero():
        raise BadContraction("h∘i ≠ 0")
    if c.p.compose(c.i) != GradedLinearMap.identity(g0.space):
        raise BadContraction("p∘i ≠ 1")
    if c.d.compose(c.h) + c.h.compose(c.d) != GradedLinearMap.identity(g.space) - c.i.compose(c.p):
        raise BadContraction("dh + hd ≠ 1 - ip")

    conv = Convolution(g, g)
    F = conv.from_morphism(identity_morphism(g))
    iterates, gauges = [F.as_morphism()], []
    total = conv.zero(0)
    for _ in range(g.N):
        X = conv.element(0, {m: c.h(v) for m, v in F.comps.items()})
        F = conv.gauge(F, X, check=False)
        gauges.append(X)
        iterates.append(F.as_morphism())
        total = conv.bch(X, total)
    comps = {}
    for m, v in F.comps.items():
        w = c.p(v)
        if c.i(w) != v:
            raise NotAnEmbedding("iteration left the subalgebra")
        comps[m] = w
    result = LInftyMorphism(g, g0, comps)
    back = HomotopyCertificate(identity_morphism(g), compose_morphisms(result, i), total)
    front = HomotopyCertificate(identity_morphism(g0), compose_morphisms(i, result),
                                Convolution(g0, g0).zero(0))
    return InversionTrace(iterates, gauges, result, (back, front), c, total)


def formal_inverse(F):
    """Two-sided inverse of a morphism with invertible first component."""
    if F.source.N != F.target.N:
        raise ShapeMismatch("truncations differ")
    G1 = invert_linear(F.linear_part())
    src, tgt = F.target, F.source
    comps = {(j,): dict(col) for j, col in G1.entries.items()}
    for n in range(2, F.N + 1):
        lower = dict(comps)
        for m in src.monomials(n):
            u = vec_product([G1.column(j) for j in m], F.source.par)
            img = {}
            for mm, c in u.items():
                for k, v in F.coalgebra_image(mm).items():
                    if len(k) < n:
                        img[k] = img.get(k, 0) + c * v
            val = apply_sym(lower, img)
            if val:
                comps[m] = {a: -v for a, v in val.items() if v}
    return LInftyMorphism(src, tgt, comps)


def homotopy_inverse(F):
    """``(G, (cert for G∘F ~ id, cert for F∘G ~ id))``."""
    from .transfer import transfer

    g1, g2 = F.source, F.target
    if not g2.is_dg_lie:
        raise UnsupportedStructure("homotopy_inverse needs a dg Lie target")
    if check_morphism(F):
        raise InvalidStructure("input is not an L∞ morphism")
    T1, T2 = transfer(g1), transfer(g2)
    if not is_isomorphism(cohomology_map(F.linear_part(), T1.contraction, T2.contraction)):
        raise NotQuasiIso("first component is not a quasi-isomorphism")
    Nhat = compose_morphisms(compose_morphisms(T1.M, F), T2.P)
    Ninv = formal_inverse(Nhat)
    G = compose_morphisms(compose_morphisms(T2.P, Ninv), T1.M)
    certs = []
    for a, b in ((compose_morphisms(F, G), identity_morphism(g1)),
                 (compose_morphisms(G, F), identity_morphism(g2))):
        try:
            certs.append(find_homotopy(a, b))
        except NotHomotopic as e:
            raise CertificateNotFound(e.arity) from e
    return G, tuple(certs)


__all__ = [
    "InversionTrace", "cohomology_map", "contraction_from_inclusion", "embedding_inverse",
    "formal_inverse", "homotopy_inverse", "invert_linear", "is_isomorphism",
]
