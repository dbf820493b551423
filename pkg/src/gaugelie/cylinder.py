"""Polynomial cylinder ``Cyl(g) = g ⊗ A_D`` of a dg Lie algebra.

``A_D = Q[t, dt] / (t^{D+1}, t^D dt)``: the quotient by a dg ideal, so A_D is a
commutative dg algebra with cohomology Q (constants), and ``Cyl(g) → g``
evaluations are quasi-isomorphisms.  Elements are written ``α ⊗ x`` with the
form on the left; labels ``x.t<j>`` for ``t^j ⊗ x`` and ``x.t<j>dt`` for
``t^j dt ⊗ x``.  Then

    d(α ⊗ x) = dα ⊗ x + (-1)^{|α|} α ⊗ dx,
    [α ⊗ x, β ⊗ y] = (-1)^{|x||β|} αβ ⊗ [x, y].

Substituting ``t = s ≠ 0`` does not kill ``t^{D+1}``, so ``p_s`` is
multiplicative only on pairs whose t-degrees add up to at most D; every path
produced here has t-degree below N ≤ D in arity N, which is inside that
window.
"""

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LInftyAlgebra, LInftyMorphism, check_structure, compose_morphisms
from .convolution import Convolution
from .errors import InvalidStructure, MalformedInput, NotAMorphism, TDegreeTooSmall
from .graded import GradedLinearMap, GradedVectorSpace


def _label(x, j, form):
    return f"{x}.t{j}dt" if form else f"{x}.t{j}"


@dataclass(eq=False)
class CylinderAlgebra:
    base: LInftyAlgebra
    D: int
    algebra: LInftyAlgebra

    def index(self, x, j, form=0):
        return self.algebra.space.index(_label(x, j, form))

    def decode(self, i):
        """``(base label, t-power, form degree)`` of a basis index."""
        lab = self.algebra.space.label(i)
        x, _, tail = lab.rpartition(".t")
        if tail.endswith("dt"):
            return x, int(tail[:-2]), 1
        return x, int(tail), 0

    def t_degree(self, vec):
        return max((self.decode(i)[1] for i in vec), default=0)

    @property
    def space(self):
        return self.algebra.space


def build_cylinder(g, D):
    if not g.is_dg_lie:
        raise InvalidStructure("the cylinder needs a dg Lie algebra")
    if D < 1:
        raise MalformedInput("t-degree bound must be at least 1")
    if check_structure(g):
        raise InvalidStructure("input is not a valid dg Lie algebra")
    sp = g.space
    labels = sp.labels()
    deg = {x: sp.degree(sp.index(x)) for x in labels}
    pairs = [(_label(x, j, 0), deg[x]) for x in labels for j in range(D + 1)]
    pairs += [(_label(x, j, 1), deg[x] + 1) for x in labels for j in range(D)]
    space = GradedVectorSpace(pairs)
    dmap = g.differential.to_labels()
    differential = {}
    for x in labels:
        for j in range(D + 1):
            col = {}
            if j:
                col[_label(x, j - 1, 1)] = Fraction(j)
            for y, c in dmap.get(x, {}).items():
                col[_label(y, j, 0)] = c
            differential[_label(x, j, 0)] = col
        for j in range(D):
            differential[_label(x, j, 1)] = {_label(y, j, 1): -c for y, c in dmap.get(x, {}).items()}
    brackets = []
    for x in labels:
        for y in labels:
            val = g.bracket((x, y))
            if not val:
                continue
            for j1 in range(D + 1):
                for f1 in (0, 1):
                    for j2 in range(D + 1):
                        for f2 in (0, 1):
                            j, f = j1 + j2, f1 + f2
                            if f == 2 or j > D - f or (f1 and j1 >= D) or (f2 and j2 >= D):
                                continue
                            s = -1 if deg[x] * f2 % 2 else 1
                            brackets.append(((_label(x, j1, f1), _label(y, j2, f2)),
                                             {_label(z, j, f): s * c for z, c in val.items()}))
    alg = LInftyAlgebra.from_exterior(space, g.N, differential=differential, brackets=brackets,
                                      name=f"Cyl({g.name or ''})")
    return CylinderAlgebra(g, D, alg)


def evaluate_at(C, s):
    """``p_s``: kill forms, substitute ``t = s``."""
    s = Fraction(s)
    g = C.base
    entries = {}
    for x in g.space.labels():
        for j in range(C.D + 1):
            v = s ** j
            if v:
                entries[C.index(x, j)] = {g.space.index(x): v}
    return LInftyMorphism.strict(C.algebra, g, GradedLinearMap(C.space, g.space, 0, entries))


def section(C):
    """``σ``: constant functions."""
    g = C.base
    entries = {g.space.index(x): {C.index(x, 0): Fraction(1)} for x in g.space.labels()}
    return LInftyMorphism.strict(g, C.algebra, GradedLinearMap(g.space, C.space, 0, entries))


# sign of the Ω¹ component: U_Cyl = F(t) + OMEGA_SIGN · dt ⊗ H in shifted coefficients
OMEGA_SIGN = -1


def cylinder_morphism(U0, H, D=None):
    """``U_Cyl: g1 → Cyl(g2)`` with ``p_0 U_Cyl = U0`` and ``p_1 U_Cyl = (U0)_H``."""
    g1, g2 = U0.source, U0.target
    D = g1.N if D is None else D
    if D < g1.N:
        raise TDegreeTooSmall(f"t-degree bound {D} is below the truncation {g1.N}")
    conv = Convolution(g1, g2)
    alpha = conv.from_morphism(U0)
    if conv.curvature(alpha):
        raise NotAMorphism("U0 is not an L∞ morphism")
    C = build_cylinder(g2, D)
    path = conv.gauge_path(alpha, H)
    comps = {}
    lab = g2.space.label
    for m, vec in path.comps.items():
        out = comps.setdefault(m, {})
        for a, poly in vec.items():
            for j, c in enumerate(poly.c):
                if c:
                    if j > D:
                        raise TDegreeTooSmall("path does not fit the t-degree bound")
                    out[C.index(lab(a), j)] = c
    for m, vec in H.comps.items():
        out = comps.setdefault(m, {})
        for a, c in vec.items():
            out[C.index(lab(a), 0, 1)] = OMEGA_SIGN * c
    return C, LInftyMorphism(g1, C.algebra, comps)


def endpoint(C, U, s):
    return compose_morphisms(U, evaluate_at(C, s))


__all__ = [
    "CylinderAlgebra", "build_cylinder", "cylinder_morphism", "endpoint", "evaluate_at", "section",
]
