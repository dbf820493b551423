"""dg Lie and arity-truncated L∞ algebras, their Chevalley–Eilenberg chain
coalgebras, and L∞ morphisms.

Structures are stored on S(g[1]) ("shifted form"): a monomial of shifted
basis elements maps to a vector of g[1].  User-facing values live on Λ^k g
("exterior form").  The two are related by

    q_k(s x1 ⋯ s xk) = c_k · (-1)^{Σ_i (k-i)(|x_i|-1)} · s l_k(x1, ..., xk)

with ``c_k = -1`` for brackets of an algebra and ``c_k = +1`` for components
of morphisms and convolution elements.  With this choice ``dα + ½[α,α] = 0``
and the gauge field ``-dX + [X, α]`` of a dg Lie algebra become the plain
shifted expressions ``Σ q_k(α^k)/k!`` and ``Σ q_{k+1}(x, α^k)/k!``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .errors import (
    InvalidStructure, MalformedInput, ShapeMismatch, TruncationMismatch,
)
from .graded import GradedLinearMap, GradedVectorSpace
from .symmetric import (
    add_into, apply_sym, coalgebra_map, coderivation, monomials, ordered_splits,
    parities_of, sort_sign,
)


def decalage_sign(degrees):
    """``(-1)^{Σ_i (k-i)(deg x_i - 1)}`` for unshifted degrees ``x_1..x_k``."""
    k = len(degrees)
    e = sum((k - i) * (d - 1) for i, d in enumerate(degrees, start=1))
    return -1 if e % 2 else 1


def exterior_basis(space, k):
    """Basis of Λ^k g as label tuples (equivalently S^k(g[1]) monomials).

    A letter may repeat only when its shifted degree is even, i.e. when it
    has odd degree in ``g``.
    """
    sdeg = [d - 1 for _, d in space.basis]
    return [tuple(space.label(i) for i in m) for m in monomials(sdeg, k)]


class _Shifted:
    """Shared bookkeeping for objects built on g[1]."""

    def __init__(self, space):
        self.space = space
        self.sdeg = tuple(d - 1 for _, d in space.basis)
        self.par = tuple(d % 2 for d in self.sdeg)

    def mono_degree(self, m):
        return sum(self.sdeg[i] for i in m)

    def monomials(self, k):
        return monomials(self.sdeg, k)

    def basis_upto(self, n):
        return [m for k in range(1, n + 1) for m in monomials(self.sdeg, k)]

    def mono_labels(self, m):
        return tuple(self.space.label(i) for i in m)

    def mono_from_labels(self, labels):
        """``(sign, monomial)`` for the word of labels; sign 0 if it vanishes."""
        return sort_sign([self.space.index(lab) for lab in labels], self.par)


def _to_shifted(g, labels, value, factor, out_shift):
    """Convert one exterior-form entry ``labels -> {dst: coeff}`` into
    ``(monomial, vector)``; ``out_shift`` is the expected shifted map degree."""
    degs = [g.space.degree(g.space.index(lab)) for lab in labels]
    sign, m = g.mono_from_labels(labels)
    vec = {}
    for dst, c in value.items():
        i = g.space.index(dst)
        vec[i] = vec.get(i, 0) + Fraction(c)
    vec = {i: v for i, v in vec.items() if v}
    if not sign:
        if vec:
            raise MalformedInput(f"value on {labels} violates graded antisymmetry")
        return None, {}
    s = factor * decalage_sign(degs) * sign
    return m, {i: s * v for i, v in vec.items()}


class LInftyAlgebra(_Shifted):
    """Graded space with Taylor brackets ``l_1..l_N`` (truncation ``N``).

    ``brackets`` maps sorted monomials of shifted basis indices (any arity
    ``1..N``) to vectors; missing monomials mean zero.
    """

    def __init__(self, space, truncation, brackets=None, name=None):
        super().__init__(space)
        if truncation < 1:
            raise MalformedInput("truncation must be positive")
        self.N = int(truncation)
        self.name = name
        clean = {}
        for m, vec in (brackets or {}).items():
            if not 1 <= len(m) or len(m) > self.N:
                continue
            vec = {i: v for i, v in vec.items() if v}
            if not vec:
                continue
            want = self.mono_degree(m) + 1
            for i in vec:
                if self.sdeg[i] != want:
                    raise ShapeMismatch(
                        f"l_{len(m)}{self.mono_labels(m)} has a component on "
                        f"{space.label(i)} of the wrong degree"
                    )
            clean[m] = vec
        self.brackets = clean

    # construction -----------------------------------------------------------

    @classmethod
    def from_exterior(cls, space, truncation, differential=None, brackets=None, name=None):
        """``differential``: ``{src: {dst: c}}``; ``brackets``: iterable of
        ``(labels, {dst: c})`` with ``len(labels) >= 2``, values of ``l_k``."""
        proto = cls(space, truncation)
        data = {}

        def put(labels, value):
            m, vec = _to_shifted(proto, labels, value, -1, 1)
            if m is None:
                return
            if len(m) > proto.N:
                return
            if m in data and data[m] != vec:
                raise MalformedInput(f"inconsistent values given for {labels}")
            data[m] = vec

        for src, value in (differential or {}).items():
            put((src,), value)
        for labels, value in brackets or []:
            if len(labels) < 2:
                raise MalformedInput("use the differential for arity-1 data")
            put(tuple(labels), value)
        return cls(space, truncation, data, name=name)

    def to_exterior(self):
        """``[(labels, {dst: coeff})]`` sorted by (arity, labels)."""
        out = []
        for m in sorted(self.brackets, key=lambda m: (len(m), m)):
            degs = [self.space.degree(i) for i in m]
            s = -decalage_sign(degs)
            out.append((self.mono_labels(m), {
                self.space.label(i): s * v for i, v in sorted(self.brackets[m].items())
            }))
        return out

    def with_truncation(self, n):
        return LInftyAlgebra(self.space, n, self.brackets, name=self.name)

    # structure ----------------------------------------------------------------

    def arity(self, k):
        return {m: v for m, v in self.brackets.items() if len(m) == k}

    @cached_property
    def is_dg_lie(self):
        return all(len(m) <= 2 for m in self.brackets)

    @cached_property
    def differential(self):
        """``l_1`` as an unshifted degree +1 map."""
        entries = {m[0]: {i: -v for i, v in vec.items()}
                   for m, vec in self.brackets.items() if len(m) == 1}
        return GradedLinearMap(self.space, self.space, 1, entries)

    def bracket(self, labels):
        """Exterior-form value ``l_k(x1, ..., xk)`` as ``{label: coeff}``."""
        sign, m = self.mono_from_labels(labels)
        if not sign:
            return {}
        degs = [self.space.degree(self.space.index(lab)) for lab in labels]
        s = -decalage_sign(degs) * sign
        return {self.space.label(i): s * v for i, v in self.brackets.get(m, {}).items()}

    def Q(self, m):
        return coderivation(self.brackets, m, self.par)

    def __repr__(self):
        kind = "dgLie" if self.is_dg_lie else "LInfty"
        return f"<{kind} {self.name or ''} dim={self.space.dim} N={self.N}>"


def zero_algebra(truncation):
    return LInftyAlgebra(GradedVectorSpace(), truncation, name="0")


def direct_sum(g1, g2, name=None):
    """Direct sum of L∞ algebras (no mixed brackets)."""
    if g1.N != g2.N:
        raise TruncationMismatch("direct sum needs equal truncations")
    space = g1.space.direct_sum(g2.space)
    data = {}
    for g in (g1, g2):
        remap = {i: space.index(g.space.label(i)) for i in range(g.space.dim)}
        for m, vec in g.brackets.items():
            # relabelled monomials stay sorted: both summands keep their (degree, label) order
            s, mm = sort_sign([remap[i] for i in m], tuple((d - 1) % 2 for _, d in space.basis))
            data[mm] = {remap[i]: s * v for i, v in vec.items()}
    return LInftyAlgebra(space, g1.N, data, name=name)


def check_structure(g):
    """Monomials (as label tuples) on which ``Q∘Q ≠ 0``; empty iff valid."""
    bad = []
    for m in g.basis_upto(g.N):
        acc = {}
        for mm, c in g.Q(m).items():
            add_into(acc, g.Q(mm), c)
        if acc:
            bad.append(g.mono_labels(m))
    return bad


def jacobi_violations(g):
    """Independent exterior-form check of ``d² = 0``, Leibniz and graded Jacobi
    for a dg Lie algebra, over all basis triples."""
    sp = g.space
    labs = sp.labels()
    deg = {lab: sp.degree(sp.index(lab)) for lab in labs}

    def d(vec):
        out = {}
        for a, c in vec.items():
            for b, v in g.bracket((a,)).items():
                out[b] = out.get(b, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def br(u, v):
        out = {}
        for a, c in u.items():
            for b, e in v.items():
                for r, w in g.bracket((a, b)).items():
                    out[r] = out.get(r, 0) + c * e * w
        return {k: v for k, v in out.items() if v}

    def lin(*terms):
        out = {}
        for s, vec in terms:
            for k, v in vec.items():
                out[k] = out.get(k, 0) + s * v
        return {k: v for k, v in out.items() if v}

    bad = []
    for a in labs:
        if d(d({a: 1})):
            bad.append(("d²", a))
    for a in labs:
        for b in labs:
            lhs = d(br({a: 1}, {b: 1}))
            rhs = lin((1, br(d({a: 1}), {b: 1})), ((-1) ** deg[a], br({a: 1}, d({b: 1}))))
            if lin((1, lhs), (-1, rhs)):
                bad.append(("Leibniz", a, b))
            sym = lin((1, br({a: 1}, {b: 1})), ((-1) ** (deg[a] * deg[b]), br({b: 1}, {a: 1})))
            if sym:
                bad.append(("antisymmetry", a, b))
    for a in labs:
        for b in labs:
            for c in labs:
                A, B, C = {a: 1}, {b: 1}, {c: 1}
                j = lin(
                    ((-1) ** (deg[a] * deg[c]), br(A, br(B, C))),
                    ((-1) ** (deg[b] * deg[a]), br(B, br(C, A))),
                    ((-1) ** (deg[c] * deg[b]), br(C, br(A, B))),
                )
                if j:
                    bad.append(("Jacobi", a, b, c))
    return bad


class ChainCoalgebra:
    """Arity-truncated C₊(g) = S⁺(g[1]) with coproduct and differential."""

    def __init__(self, base):
        self.base = base
        self.N = base.N

    def basis(self, k):
        return self.base.monomials(k)

    def coproduct(self, m):
        """Reduced coproduct as ``{(m1, m2): coeff}``."""
        out = {}
        for sign, (b1, b2) in ordered_splits(parities_of(m, self.base.par), 2):
            key = (tuple(m[p] for p in b1), tuple(m[p] for p in b2))
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    def differential(self, m):
        return self.base.Q(m)

    def differential_matrix(self, k):
        """Sparse column map for D restricted to arity ``k`` (all output arities)."""
        return {m: self.base.Q(m) for m in self.basis(k)}


def chain_coalgebra(g):
    bad = check_structure(g)
    if bad:
        raise InvalidStructure(f"Q² ≠ 0 on {bad[:5]}")
    return ChainCoalgebra(g)


@dataclass(eq=False)
class LInftyMorphism:
    """L∞ morphism ``source → target`` stored by its shifted Taylor components
    (degree-0 maps ``S^k(source[1]) → target[1]``, ``1 ≤ k ≤ N``)."""

    source: LInftyAlgebra
    target: LInftyAlgebra
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source.N != self.target.N:
            raise TruncationMismatch(
                f"truncations differ: {self.source.N} vs {self.target.N}"
            )
        clean = {}
        for m, vec in self.comps.items():
            if len(m) > self.N:
                continue
            vec = {i: v for i, v in vec.items() if v}
            if not vec:
                continue
            want = self.source.mono_degree(m)
            for i in vec:
                if self.target.sdeg[i] != want:
                    raise ShapeMismatch(
                        f"component on {self.source.mono_labels(m)} has the wrong degree"
                    )
            clean[m] = vec
        self.comps = clean

    @property
    def N(self):
        return self.source.N

    @classmethod
    def from_exterior(cls, source, target, components):
        """``components``: iterable of ``(labels, {dst: coeff})`` giving ``F_k``."""
        data = {}
        for labels, value in components:
            sign, m = source.mono_from_labels(labels)
            vec = {}
            for dst, c in value.items():
                i = target.space.index(dst)
                vec[i] = vec.get(i, 0) + Fraction(c)
            vec = {i: v for i, v in vec.items() if v}
            if not sign:
                if vec:
                    raise MalformedInput(f"value on {labels} violates graded antisymmetry")
                continue
            degs = [source.space.degree(source.space.index(lab)) for lab in labels]
            s = decalage_sign(degs) * sign
            vec = {i: s * v for i, v in vec.items()}
            if m in data and data[m] != vec:
                raise MalformedInput(f"inconsistent values given for {labels}")
            data[m] = vec
        return cls(source, target, data)

    def to_exterior(self):
        out = []
        for m in sorted(self.comps, key=lambda m: (len(m), m)):
            s = decalage_sign([self.source.space.degree(i) for i in m])
            out.append((self.source.mono_labels(m), {
                self.target.space.label(i): s * v for i, v in sorted(self.comps[m].items())
            }))
        return out

    @classmethod
    def strict(cls, source, target, linear_map):
        """Morphism with only a first component, given by a degree-0 map."""
        return cls(source, target, {(j,): dict(col) for j, col in linear_map.entries.items()})

    def linear_part(self):
        entries = {m[0]: dict(v) for m, v in self.comps.items() if len(m) == 1}
        return GradedLinearMap(self.source.space, self.target.space, 0, entries)

    def arity(self, k):
        return {m: v for m, v in self.comps.items() if len(m) == k}

    def truncated(self, k):
        """Components of arity ≤ k only."""
        return LInftyMorphism(self.source, self.target,
                              {m: v for m, v in self.comps.items() if len(m) <= k})

    def is_strict(self):
        return all(len(m) == 1 for m in self.comps)

    def coalgebra_image(self, m):
        return coalgebra_map(self.comps, m, self.source.par, self.target.par)

    def __eq__(self, other):
        return (
            isinstance(other, LInftyMorphism)
            and self.source.space == other.source.space
            and self.target.space == other.target.space
            and self.comps == other.comps
        )

    def __repr__(self):
        return f"<LInftyMorphism {self.source!r} -> {self.target!r}, {len(self.comps)} entries>"


def identity_morphism(g):
    return LInftyMorphism(g, g, {(i,): {i: Fraction(1)} for i in range(g.space.dim)})


def zero_morphism(g1, g2):
    return LInftyMorphism(g1, g2, {})


def morphism_curvature(F):
    """``{monomial: vector}``: ``q_target ∘ F_* - F ∘ Q_source`` up to arity N."""
    out = {}
    for m in F.source.basis_upto(F.N):
        acc = apply_sym(F.target.brackets, F.coalgebra_image(m))
        add_into(acc, apply_sym(F.comps, F.source.Q(m)), -1)
        if acc:
            out[m] = acc
    return out


def check_morphism(F):
    """Source monomials (label tuples) where the morphism equation fails."""
    for g in (F.source, F.target):
        if check_structure(g):
            raise InvalidStructure(f"{g!r} is not a valid L∞ algebra")
    return [F.source.mono_labels(m) for m in morphism_curvature(F)]


def compose_morphisms(F, G):
    """``G ∘ F`` for ``F: g1 → g2`` and ``G: g2 → g3``."""
    if F.N != G.N:
        raise TruncationMismatch("compose_morphisms needs equal truncations")
    if F.target.space != G.source.space:
        raise ShapeMismatch("target of F differs from source of G")
    comps = {}
    for m in F.source.basis_upto(F.N):
        v = apply_sym(G.comps, F.coalgebra_image(m))
        if v:
            comps[m] = v
    return LInftyMorphism(F.source, G.target, comps)


def induced_coalgebra_map(F):
    """Arity-indexed matrices of ``F_*: C₊(g1) → C₊(g2)``.

    Returns ``{k: {source monomial: {target monomial: coeff}}}``.
    """
    if morphism_curvature(F):
        raise InvalidStructure("not an L∞ morphism")
    return {k: {m: F.coalgebra_image(m) for m in F.source.monomials(k)}
            for k in range(1, F.N + 1)}


def coalgebra_map_injective(F, upto=None):
    """Exact rank check: is ``F_*`` injective on S^{≤k}(g1[1]) for each k?

    Returns ``{k: bool}``.
    """
    upto = upto or F.N
    index = {}
    rows = []
    result = {}
    for k in range(1, upto + 1):
        for m in F.source.monomials(k):
            img = F.coalgebra_image(m)
            row = {}
            for mm, c in img.items():
                col = index.setdefault(mm, len(index))
                row[col] = c
            rows.append(row)
        result[k] = linalg.rank(rows) == len(rows)
    return result
