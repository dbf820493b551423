"""Truncated Quillen functors between dg Lie algebras and cocommutative dg
coalgebras.

``C(Y) = S^{≤N}(Y[1])`` with the counit line added; the weight-≤N part is a
genuine sub dg coalgebra, so nothing is lost below weight N.  ``L(X)`` is
the free Lie algebra on ``X̄[-1]`` (generators ``τx`` of degree ``|x| + 1``)
with

    d(τx) = -τ(Dx) - ½ Σ (-1)^{|x'|} [τx', τx''],     Δ̄x = Σ x' ⊗ x'',

truncated at word length N.  With this sign, Lie maps ``L(X) → Y`` and
coalgebra maps ``X → C(Y)`` are both given by the same linear map
``f: X̄ → Y`` (coefficients unchanged), which is the adjunction bijection.

Coalgebras here are coaugmented: one basis vector ``UNIT`` is group-like and
the counit is its dual.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import LInftyMorphism, check_structure
from .errors import InvalidCoalgebra, InvalidStructure, TruncationMismatch, UnsupportedStructure
from .freelie import FreeLieAlgebra
from .graded import GradedLinearMap, GradedVectorSpace
from .symmetric import add_into, ordered_splits, parities_of, vec_product

UNIT = "𝟙"


@dataclass(eq=False)
class CounitalCoalgebra:
    """``space`` contains ``UNIT``; ``reduced[i] = {(j, k): c}`` is the reduced
    coproduct of a non-unit basis vector (full coproduct adds ``1⊗x + x⊗1``);
    ``differential`` is a degree +1 map vanishing on ``UNIT``."""

    space: GradedVectorSpace
    reduced: dict
    differential: GradedLinearMap
    N: int
    weight: dict = None

    @property
    def unit(self):
        return self.space.index(UNIT)

    def counit(self, vec):
        return vec.get(self.unit, 0)

    def coproduct(self, i):
        u = self.unit
        if i == u:
            return {(u, u): Fraction(1)}
        out = dict(self.reduced.get(i, {}))
        out[(u, i)] = out.get((u, i), 0) + 1
        out[(i, u)] = out.get((i, u), 0) + 1
        return out

    @property
    def generators(self):
        """Indices spanning ``ker(counit)``."""
        return [i for i in range(self.space.dim) if i != self.unit]

    def violations(self):
        bad = []
        deg = self.space.degree
        u = self.unit
        if self.space.degree(u) != 0:
            bad.append("unit has nonzero degree")
        if self.differential.column(u) or any(u in col for col in self.differential.entries.values()):
            bad.append("differential touches the unit")
        for i in self.generators:
            red = self.reduced.get(i, {})
            for (j, k), c in red.items():
                if u in (j, k):
                    bad.append(f"reduced coproduct of {self.space.label(i)} involves the unit")
                s = -1 if deg(j) * deg(k) % 2 else 1
                if red.get((k, j), 0) != s * c:
                    bad.append(f"not cocommutative at {self.space.label(i)}")
                    break
            # coassociativity of the reduced coproduct
            left, right = {}, {}
            for (j, k), c in red.items():
                for (a, b), e in self.reduced.get(j, {}).items():
                    add_into(left, {(a, b, k): c * e})
                for (a, b), e in self.reduced.get(k, {}).items():
                    add_into(right, {(j, a, b): c * e})
            if left != right:
                bad.append(f"not coassociative at {self.space.label(i)}")
            # D is a coderivation: Δ̄D = (D⊗1 + 1⊗D)Δ̄
            lhs = {}
            for j, c in self.differential.column(i).items():
                for key, e in self.reduced.get(j, {}).items():
                    add_into(lhs, {key: c * e})
            rhs = {}
            for (j, k), c in red.items():
                for a, e in self.differential.column(j).items():
                    add_into(rhs, {(a, k): c * e})
                s = -1 if deg(j) % 2 else 1
                for b, e in self.differential.column(k).items():
                    add_into(rhs, {(j, b): s * c * e})
            if lhs != rhs:
                bad.append(f"differential is not a coderivation at {self.space.label(i)}")
        if not self.differential.compose(self.differential).is_zero():
            bad.append("D∘D ≠ 0")
        return bad


def _mono_label(Y, m):
    return "·".join(Y.mono_labels(m))


def functor_C(Y):
    """``C(Y)``: counital chain coalgebra of a dg Lie (or L∞) algebra, weight ≤ N."""
    if check_structure(Y):
        raise InvalidStructure("input is not a valid L∞ algebra")
    monos = Y.basis_upto(Y.N)
    space = GradedVectorSpace([(UNIT, 0)] + [(_mono_label(Y, m), Y.mono_degree(m)) for m in monos])
    idx = {m: space.index(_mono_label(Y, m)) for m in monos}
    reduced = {}
    for m in monos:
        out = {}
        for sign, (b1, b2) in ordered_splits(parities_of(m, Y.par), 2):
            key = (idx[tuple(m[p] for p in b1)], idx[tuple(m[p] for p in b2)])
            out[key] = out.get(key, 0) + sign
        reduced[idx[m]] = {k: Fraction(v) for k, v in out.items() if v}
    D = GradedLinearMap(space, space, 1, {
        idx[m]: {idx[mm]: c for mm, c in Y.Q(m).items()} for m in monos
    })
    weight = {idx[m]: len(m) for m in monos}
    weight[space.index(UNIT)] = 0
    return CounitalCoalgebra(space, reduced, D, Y.N, weight)


def trivial_coalgebra(N):
    return CounitalCoalgebra(GradedVectorSpace([(UNIT, 0)]), {},
                             GradedLinearMap.zero(GradedVectorSpace([(UNIT, 0)]),
                                                  GradedVectorSpace([(UNIT, 0)]), 1), N)


class CoalgebraLie(FreeLieAlgebra):
    """``L(X)``; generator ``k`` is ``τ`` of the k-th non-unit basis vector."""

    def __init__(self, X):
        if X.violations():
            raise InvalidCoalgebra("; ".join(X.violations()[:3]))
        self.X = X
        gens = X.generators
        self.gen_index = {i: k for k, i in enumerate(gens)}
        V = GradedVectorSpace([(X.space.label(i), X.space.degree(i) + 1) for i in gens])
        diff = {}
        for i in gens:
            combo = []
            for j, c in X.differential.column(i).items():
                combo.append((-c, self.gen_index[j]))
            for (j, k), c in X.reduced.get(i, {}).items():
                s = -1 if X.space.degree(j) % 2 else 1
                combo.append((Fraction(-s, 2) * c, (self.gen_index[j], self.gen_index[k])))
            if combo:
                diff[self.gen_index[i]] = combo
        # generator order follows X's basis order, which is already (degree, label)
        super().__init__(_reindex(V, gens, X), X.N, diff)

    def tau(self, vec):
        """``τ`` on a vector of X (the unit component is dropped)."""
        return {(self.gen_index[i],): c for i, c in vec.items() if i in self.gen_index and c}


def _reindex(V, gens, X):
    # keep generator k at position k: labels in X order are already (degree, label) sorted
    assert [V.label(k) for k in range(V.dim)] == [X.space.label(i) for i in gens]
    return V


def functor_L(X):
    return CoalgebraLie(X)


# adjunction ------------------------------------------------------------------------


def _y_bracket(Y):
    # exterior bracket of vectors of Y
    def br(u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                val = Y.bracket((Y.space.label(a), Y.space.label(b)))
                for lab, c in val.items():
                    add_into(out, {Y.space.index(lab): x * y * c})
        return out
    return br


def counit_lie(Y):
    """``ε: L(C(Y)) → Y``: weight-one generators go to themselves, the rest to 0.
    Returns ``(L(C(Y)), generator values)``."""
    if not Y.is_dg_lie:
        raise UnsupportedStructure("the counit needs a dg Lie algebra")
    X = functor_C(Y)
    L = CoalgebraLie(X)
    values = {}
    for i in X.generators:
        if X.weight[i] == 1:
            lab = X.space.label(i)
            values[L.gen_index[i]] = {Y.space.index(lab): Fraction(1)}
    return L, values


def lie_map_is_chain(L, values, Y):
    """Is the Lie map ``L → Y`` given on generators a chain map?"""
    br = _y_bracket(Y)
    d = Y.differential
    for k in range(L.generators.dim):
        lhs = L.evaluate(L.d({(k,): Fraction(1)}), values, br) if k in L.gen_differential else {}
        if lhs != d(values.get(k, {})):
            return False
    return True


def coalgebra_map_image(X, Y, f, i):
    """``F(x) ∈ C(Y)`` (weights ≤ N) for the coalgebra map with corestriction
    ``f: X̄ → Y[1]`` (``{x: vector}``), as ``{monomial: coeff}``."""
    if i == X.unit:
        return {(): Fraction(1)}
    out = {}
    # iterate reduced coproducts: chains x → x1 ⊗ ... ⊗ xk
    layer = {(i,): Fraction(1)}
    k = 1
    while layer and k <= X.N:
        for word, c in layer.items():
            vecs = [f.get(j, {}) for j in word]
            if all(vecs):
                add_into(out, vec_product(vecs, Y.par), c / _fact(k))
        nxt = {}
        for word, c in layer.items():
            head, last = word[:-1], word[-1]
            for (a, b), e in X.reduced.get(last, {}).items():
                add_into(nxt, {head + (a, b): c * e})
        layer = nxt
        k += 1
    return out


def _fact(k):
    r = 1
    for j in range(2, k + 1):
        r *= j
    return r


def coalgebra_map_is_chain(X, Y, f):
    """``D_{C(Y)} ∘ F = F ∘ D_X`` on every basis vector of X (up to weight N)."""
    for i in X.generators:
        img = coalgebra_map_image(X, Y, f, i)
        lhs = {}
        for m, c in img.items():
            add_into(lhs, Y.Q(m), c)
        rhs = {}
        for j, c in X.differential.column(i).items():
            add_into(rhs, coalgebra_map_image(X, Y, f, j), c)
        if lhs != rhs:
            return False
    return True


def unit_map(X, Y, f):
    """Corestriction of ``C(φ_f) ∘ η``: the Lie map on generators applied to ``τx``."""
    return {i: dict(f.get(i, {})) for i in X.generators}


def lie_from_coalgebra(X, Y, f):
    """Generator values of ``ε ∘ L(F_f)``: ``τx ↦ ε(τ F_f(x))``, the weight-one part."""
    L = CoalgebraLie(X)
    values = {}
    for i in X.generators:
        img = coalgebra_map_image(X, Y, f, i)
        v = {m[0]: c for m, c in img.items() if len(m) == 1}
        if v:
            values[L.gen_index[i]] = v
    return L, values


def adjunction_maps(X, Y):
    """``(unit, counit)``: unit sends a basis vector x of X to its image in
    C(L(X)) as ``{tuple of L-basis labels: coeff}``; counit is ``ε: L(C(Y)) → Y``
    as generator values."""
    if X.N != Y.N:
        raise TruncationMismatch("coalgebra and Lie algebra truncations differ")
    L = CoalgebraLie(X)
    gen_labels = {k: L.generators.label(k) for k in range(L.generators.dim)}

    def unit(i):
        if i == X.unit:
            return {(): Fraction(1)}
        out = {}
        layer = {(i,): Fraction(1)}
        k = 1
        while layer and k <= X.N:
            for word, c in layer.items():
                key = tuple(sorted(gen_labels[L.gen_index[j]] for j in word))
                add_into(out, {key: c / _fact(k)})
            nxt = {}
            for word, c in layer.items():
                for (a, b), e in X.reduced.get(word[-1], {}).items():
                    add_into(nxt, {word[:-1] + (a, b): c * e})
            layer = nxt
            k += 1
        return out

    return unit, counit_lie(Y)


def hom_set_bijection(X, Y, coefficients=(-1, 0, 1), limit=None, rng=None):
    """Element-wise check of ``Hom_Lie(L(X), Y) ≅ Hom_Coalg(X, C(Y))`` over all
    linear maps ``f: X̄ → Y[1]`` with entries in ``coefficients`` (or ``limit``
    of them drawn with ``rng``, when given).

    Returns ``(number of maps tried, number of morphisms, mismatches)``.
    """
    slots = [(i, a) for i in X.generators for a in range(Y.space.dim)
             if Y.sdeg[a] == X.space.degree(i)]
    L = CoalgebraLie(X)
    tried = good = 0
    bad = []
    if rng is not None and limit:
        combos = ([rng.choice(coefficients) for _ in slots] for _ in range(limit))
    else:
        combos = product(coefficients, repeat=len(slots))
    for combo in combos:
        f = {}
        for (i, a), c in zip(slots, combo):
            if c:
                f.setdefault(i, {})[a] = Fraction(c)
        values = {L.gen_index[i]: v for i, v in f.items()}
        lie_ok = lie_map_is_chain(L, values, Y)
        coalg_ok = coalgebra_map_is_chain(X, Y, f)
        # the two adjunction round trips
        back = lie_from_coalgebra(X, Y, f)[1]
        forth = unit_map(X, Y, f)
        if lie_ok != coalg_ok or back != values or {i: v for i, v in forth.items() if v} != f:
            bad.append(f)
        tried += 1
        good += lie_ok
        if limit and tried >= limit:
            break
    return tried, good, bad


# the Q correspondence ----------------------------------------------------------------


@dataclass(eq=False)
class LieMap:
    """Dg Lie map between free Lie algebras given on generators (tensor elements)."""

    source: FreeLieAlgebra
    target: FreeLieAlgebra
    values: dict

    def __call__(self, u):
        out = {}
        for w, c in u.items():
            acc = {(): Fraction(1)}
            for g in w:
                img = self.values.get(g, {})
                nxt = {}
                for w1, a in acc.items():
                    for w2, b in img.items():
                        if len(w1) + len(w2) <= self.target.N:
                            add_into(nxt, {w1 + w2: a * b})
                acc = nxt
            add_into(out, acc, c)
        return out

    def is_chain_map(self):
        for k in range(self.source.generators.dim):
            if self(self.source.d({(k,): Fraction(1)})) != self.target.d(self.values.get(k, {})):
                return False
        return True

    def is_injective(self):
        from . import linalg

        rows = []
        index = {}
        for _, _, ten in self.source.basis:
            img = self(ten)
            rows.append({index.setdefault(w, len(index)): c for w, c in img.items()})
        return linalg.rank(rows) == len(rows)


def _plus_coalgebra(a):
    X = functor_C(a)
    return X, CoalgebraLie(X)


def q_forward(M):
    """``Q(M) = L(M_*): L(C₊(a1)) → L(C₊(a2))``, generator to generator."""
    if not M.target.is_dg_lie:
        raise UnsupportedStructure("Q needs a dg Lie target")
    X1, L1 = _plus_coalgebra(M.source)
    X2, L2 = _plus_coalgebra(M.target)
    values = {}
    for i in X1.generators:
        m = _mono_of(M.source, X1, i)
        img = M.coalgebra_image(m)
        vec = {}
        for mm, c in img.items():
            j = X2.space.index(_mono_label(M.target, mm))
            add_into(vec, {(L2.gen_index[j],): c})
        if vec:
            values[L1.gen_index[i]] = vec
    return LieMap(L1, L2, values)


def _mono_of(a, X, i):
    labels = X.space.label(i).split("·")
    return a.mono_from_labels(labels)[1]


def q_backward(phi, a1, a2):
    """``Q⁻¹``: the four-arrow composite ``C₊(a1) → C L C₊(a1) → C L C₊(a2) → C(a2)``,
    returned through its corestriction ``m ↦ ε(φ(τm))``."""
    if not a2.is_dg_lie:
        raise UnsupportedStructure("Q⁻¹ needs a dg Lie target")
    X1, L1 = phi.source.X, phi.source
    L2 = phi.target
    _, eps = counit_lie(a2)
    br = _y_bracket(a2)
    comps = {}
    for i in X1.generators:
        m = _mono_of(a1, X1, i)
        val = L2.evaluate(phi(L1.tau({i: Fraction(1)})), eps, br)
        if val:
            comps[m] = val
    return LInftyMorphism(a1, a2, comps)


def q_correspondence(M, direction="forward", source=None, target=None):
    if direction == "forward":
        return q_forward(M)
    return q_backward(M, source, target)


__all__ = [
    "UNIT", "CoalgebraLie", "CounitalCoalgebra", "LieMap", "adjunction_maps",
    "coalgebra_map_image", "coalgebra_map_is_chain", "counit_lie", "functor_C", "functor_L",
    "hom_set_bijection", "lie_map_is_chain", "q_backward", "q_correspondence", "q_forward",
    "trivial_coalgebra",
]
