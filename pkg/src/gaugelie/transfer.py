"""Homotopy transfer onto cohomology.

Shifted form (``q_1 = -d``, so ``q_1(-h) + (-h)q_1 = 1 - ip``):

    M_1 = i,   M_n = h ∘ E_n,   l^H_n = p ∘ E_n,
    E_n(m) = Σ_{partitions of m into ≥ 2 blocks} ± q_j(M(B_1) ⋯ M(B_j)).

Unrolling the recursion gives the usual sum over rooted trees (leaves i,
internal edges h, root p or h); ``tree_transfer`` evaluates that sum directly
over planar binary trees as an independent oracle for dg Lie inputs.

The projection P (``P_1 = p``, ``P∘M = id``) is found arity by arity from a
linear system: the morphism equation and ``(P∘M)_n = 0`` are both affine in
``P_n`` once ``P_{<n}`` is known.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .algebra import (
    LInftyAlgebra, LInftyMorphism, check_morphism, check_structure, compose_morphisms,
)
from .errors import InvalidContraction
from .graded import ContractionData, cohomology_contraction
from .linalg import Linear, solve_affine
from .symmetric import add_into, apply_sym, coalgebra_map, vec_product


@dataclass(eq=False)
class TransferResult:
    contraction: ContractionData
    transferred: LInftyAlgebra
    M: LInftyMorphism
    P: LInftyMorphism

    def violations(self):
        bad = []
        if check_structure(self.transferred):
            bad.append("transferred structure")
        if check_morphism(self.M):
            bad.append("M is not a morphism")
        if check_morphism(self.P):
            bad.append("P is not a morphism")
        if self.M.linear_part() != self.contraction.i:
            bad.append("M_1 = i")
        if self.P.linear_part() != self.contraction.p:
            bad.append("P_1 = p")
        from .algebra import identity_morphism

        if compose_morphisms(self.M, self.P) != identity_morphism(self.transferred):
            bad.append("P∘M = id")
        return bad


def _check(g, c):
    if c.ambient != g.space:
        raise InvalidContraction("contraction lives on a different space")
    if c.d != g.differential:
        raise InvalidContraction("contraction differential is not l_1")
    bad = c.violations()
    if bad:
        raise InvalidContraction("contraction fails: " + ", ".join(bad))


def transfer(g, contraction=None):
    """Transferred structure, embedding M and projection P."""
    c = contraction or cohomology_contraction(g.space, g.differential)
    _check(g, c)
    H = c.cohomology
    N = g.N
    higher = {m: v for m, v in g.brackets.items() if len(m) >= 2}
    hpar = tuple(d % 2 for d in (H.degree(j) - 1 for j in range(H.dim)))
    tmp = LInftyAlgebra(H, N)
    M = {(j,): c.i.column(j) for j in range(H.dim) if c.i.column(j)}
    lH = {}
    for n in range(2, N + 1):
        for m in tmp.monomials(n):
            E = apply_sym(higher, coalgebra_map(M, m, hpar, g.par))
            if not E:
                continue
            hv = c.h(E)
            if hv:
                M[m] = hv
            pv = c.p(E)
            if pv:
                lH[m] = pv
    transferred = LInftyAlgebra(H, N, lH, name=f"H({g.name})" if g.name else None)
    Mor = LInftyMorphism(transferred, g, M)
    P = LInftyMorphism(g, transferred, _projection(g, transferred, c, Mor))
    return TransferResult(c, transferred, Mor, P)


def _projection(g, H, c, M):
    comps = {(j,): c.p.column(j) for j in range(g.space.dim) if c.p.column(j)}
    for n in range(2, g.N + 1):
        basis = [(m, a) for m in g.monomials(n) for a in range(H.space.dim)
                 if H.sdeg[a] == g.mono_degree(m)]
        if not basis:
            continue
        trial = dict(comps)
        for k, (m, a) in enumerate(basis):
            trial.setdefault(m, {})[a] = Linear.var(k)
        eqs = []
        # morphism equation at arity n:  q^H ∘ P_* - P ∘ Q^g = 0
        for m in g.monomials(n):
            acc = apply_sym(H.brackets, coalgebra_map(trial, m, g.par, H.par))
            add_into(acc, apply_sym(trial, g.Q(m)), -1)
            eqs.extend((v, 0) for v in acc.values())
        # (P∘M)_n = 0
        for m in H.monomials(n):
            vec = apply_sym(trial, coalgebra_map(M.comps, m, H.par, g.par))
            eqs.extend((v, 0) for v in vec.values())
        sol = solve_affine(eqs)
        if sol is None:
            raise InvalidContraction(f"no L∞ projection at arity {n}")
        for k, v in sol.items():
            m, a = basis[k]
            comps.setdefault(m, {})[a] = v
    return comps


# independent oracle -------------------------------------------------------------


@lru_cache(maxsize=None)
def _planar_shapes(n):
    """Planar full binary trees with n leaves, as nested pairs of leaf counts."""
    if n == 1:
        return ("leaf",)
    out = []
    for k in range(1, n):
        for left in _planar_shapes(k):
            for right in _planar_shapes(n - k):
                out.append((left, right, k))
    return tuple(out)


def tree_transfer(g, contraction, m, root="p"):
    """Value of ``l^H_n`` (root ``p``) or ``M_n`` (root ``h``) on the monomial
    ``m`` of the cohomology, for a dg Lie algebra g, summed over planar binary
    trees and all leaf orderings (weight ``2^{1-n}``)."""
    c = contraction
    H = c.cohomology
    n = len(m)
    hsd = [H.degree(j) - 1 for j in range(H.dim)]
    q2 = {k: v for k, v in g.brackets.items() if len(k) == 2}

    def ev(shape, leaves):
        # leaves: list of (shifted degree, vector); returns a vector of g[1]
        if shape == "leaf":
            return leaves[0][1]
        left, right, k = shape
        lv = ev(left, leaves[:k])
        rv = ev(right, leaves[k:])
        # every edged subtree h ∘ q_2 ∘ ⋯ has total degree 0: no passing signs
        if left != "leaf":
            lv = c.h(lv)
        if right != "leaf":
            rv = c.h(rv)
        return apply_sym(q2, vec_product([lv, rv], g.par))

    total = {}
    if n == 1:
        total = c.i.column(m[0])
    else:
        for perm in permutations(range(n)):
            sign = _perm_sign(perm, [hsd[j] for j in m])
            leaves = [(hsd[m[p]], c.i.column(m[p])) for p in perm]
            for shape in _planar_shapes(n):
                add_into(total, ev(shape, leaves), Fraction(sign, 2 ** (n - 1)))
    if root == "p":
        return c.p(total) if n > 1 else {}
    return c.h(total) if n > 1 else total


def _perm_sign(perm, degs):
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and degs[perm[a]] % 2 and degs[perm[b]] % 2:
                sign = -sign
    return sign


__all__ = ["TransferResult", "transfer", "tree_transfer"]
