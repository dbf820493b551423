"""The convolution L∞ algebra Hom(C₊(g1), g2), Maurer–Cartan elements
(= L∞ morphisms), the gauge action and the homotopy relation it defines.

Everything is in shifted form.  An element of 𝔥-degree ``p`` is a family of
maps ``S^k(g1[1]) → g2[1]`` of degree ``p - 1``; morphisms have ``p = 1``,
gauges ``p = 0``.  Brackets:

    L_1(φ) = q_1 ∘ φ - (-1)^{|φ|} φ ∘ Q
    L_k(φ_1, ..., φ_k) = q_k ∘ (φ_1 ⊗ ⋯ ⊗ φ_k) ∘ Δ̄^{(k)}        (k ≥ 2)

The gauge field of ``x`` is ``dα/dt = Σ_k L_{k+1}(x, α, ..., α)/k!``; in
exterior form this is ``-dX + [X, F] - ½ l_3(X, F, F) + ...``.  Every
L_{k≥2} is arity-additive, so each series below is a finite sum at
truncation N.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from .algebra import LInftyMorphism, decalage_sign
from .errors import (
    DegreeMismatch, NonNilpotent, NotAMorphism, NotHomotopic, ShapeMismatch,
    TruncationMismatch, UnsupportedStructure,
)
from .linalg import Linear, Poly, solve_affine
from .symmetric import (
    add_into, apply_sym, coalgebra_map, ordered_splits, parities_of, pointed_partitions,
    vec_product,
)


def _clean(comps):
    out = {}
    for m, vec in comps.items():
        vec = {i: v for i, v in vec.items() if v}
        if vec:
            out[m] = vec
    return out


class ConvolutionElement:
    """Element of 𝔥(g1, g2) of 𝔥-degree ``degree`` (1: morphism candidate,
    0: gauge).  ``comps[monomial] = vector``; coefficients are usually
    Fractions but may be any exact scalar type (polynomials in t, symbolic
    linear forms)."""

    __slots__ = ("conv", "degree", "comps")

    def __init__(self, conv, degree, comps=None):
        self.conv = conv
        self.degree = degree
        self.comps = _clean(comps or {})

    @property
    def map_degree(self):
        return self.degree - 1

    def _check(self, other):
        if other.conv is not self.conv and (
            other.conv.source.space != self.conv.source.space
            or other.conv.target.space != self.conv.target.space
        ):
            raise ShapeMismatch("elements of different convolution algebras")
        if other.degree != self.degree:
            raise DegreeMismatch("adding elements of different degrees")

    def __add__(self, other):
        self._check(other)
        out = {m: dict(v) for m, v in self.comps.items()}
        for m, vec in other.comps.items():
            add_into(out.setdefault(m, {}), vec)
        return ConvolutionElement(self.conv, self.degree, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ConvolutionElement(self.conv, self.degree,
                                  {m: {i: v * c for i, v in vec.items()} for m, vec in self.comps.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, ConvolutionElement) and self.degree == other.degree
                and self.comps == other.comps)

    def __bool__(self):
        return bool(self.comps)

    def is_zero(self):
        return not self.comps

    def arity(self, k):
        return ConvolutionElement(self.conv, self.degree,
                                  {m: v for m, v in self.comps.items() if len(m) == k})

    def upto(self, k):
        return ConvolutionElement(self.conv, self.degree,
                                  {m: v for m, v in self.comps.items() if len(m) <= k})

    def map_coefficients(self, f):
        return ConvolutionElement(self.conv, self.degree,
                                  {m: {i: f(v) for i, v in vec.items()} for m, vec in self.comps.items()})

    def evaluate(self, s):
        """Substitute ``t = s`` in polynomial coefficients."""
        return self.map_coefficients(lambda v: v(s) if isinstance(v, Poly) else v)

    def as_morphism(self):
        if self.degree != 1:
            raise DegreeMismatch("only degree-1 elements are morphism candidates")
        return LInftyMorphism(self.conv.source, self.conv.target, self.comps)

    def to_exterior(self):
        """``[(labels, {dst: coeff})]`` in exterior form."""
        src, tgt = self.conv.source, self.conv.target
        out = []
        for m in sorted(self.comps, key=lambda m: (len(m), m)):
            s = decalage_sign([src.space.degree(i) for i in m])
            out.append((src.mono_labels(m),
                        {tgt.space.label(i): s * v for i, v in sorted(self.comps[m].items())}))
        return out

    def __repr__(self):
        return f"<ConvolutionElement deg={self.degree} {self.to_exterior()}>"


class Convolution:
    """The L∞ algebra 𝔥(g1, g2) at the common truncation N."""

    def __init__(self, source, target):
        if source.N != target.N:
            raise TruncationMismatch(f"truncations differ: {source.N} vs {target.N}")
        self.source = source
        self.target = target
        self.N = source.N
        self._q1 = {m: v for m, v in target.brackets.items() if len(m) == 1}

    @property
    def is_dg_lie(self):
        """True when L_{≥3} vanishes (i.e. the target is a dg Lie algebra)."""
        return self.target.is_dg_lie

    # elements ---------------------------------------------------------------

    def element(self, degree, comps=None):
        return ConvolutionElement(self, degree, comps)

    def zero(self, degree):
        return ConvolutionElement(self, degree)

    def from_morphism(self, F):
        if F.source.space != self.source.space or F.target.space != self.target.space:
            raise ShapeMismatch("morphism does not belong to this convolution algebra")
        return ConvolutionElement(self, 1, F.comps)

    def from_exterior(self, degree, components):
        """Element from ``[(labels, {dst: coeff})]`` exterior-form components."""
        src, tgt = self.source, self.target
        data = {}
        for labels, value in components:
            sign, m = src.mono_from_labels(labels)
            vec = {}
            for dst, c in value.items():
                i = tgt.space.index(dst)
                vec[i] = vec.get(i, 0) + Fraction(c)
            vec = {i: v for i, v in vec.items() if v}
            if not sign:
                if vec:
                    raise ShapeMismatch(f"value on {labels} violates graded antisymmetry")
                continue
            if len(m) > self.N:
                continue
            want = src.mono_degree(m) + degree - 1
            for i in vec:
                if tgt.sdeg[i] != want:
                    raise ShapeMismatch(f"component on {labels} has the wrong degree")
            s = decalage_sign([src.space.degree(src.space.index(lab)) for lab in labels]) * sign
            vec = {i: s * v for i, v in vec.items()}
            if m in data and data[m] != vec:
                raise ShapeMismatch(f"inconsistent values given for {labels}")
            data[m] = vec
        return ConvolutionElement(self, degree, data)

    def basis(self, degree, arities=None):
        """``[(monomial, target index)]`` spanning the degree-``degree`` part."""
        out = []
        arities = arities or range(1, self.N + 1)
        for k in arities:
            for m in self.source.monomials(k):
                want = self.source.mono_degree(m) + degree - 1
                for i, d in enumerate(self.target.sdeg):
                    if d == want:
                        out.append((m, i))
        return out

    def random_element(self, rng, degree, density=0.5, entries=None, arities=None):
        from .fixtures import random_rational

        comps = {}
        for m, i in self.basis(degree, arities):
            if rng.random() < density:
                c = entries(rng) if entries else random_rational(rng)
                if c:
                    comps.setdefault(m, {})[i] = c
        return ConvolutionElement(self, degree, comps)

    # brackets ---------------------------------------------------------------

    def _monos(self, upto):
        return self.source.basis_upto(min(upto or self.N, self.N))

    def L1(self, phi, upto=None):
        sign = -1 if phi.map_degree % 2 else 1
        out = {}
        for m in self._monos(upto):
            acc = {}
            v = phi.comps.get(m)
            if v:
                add_into(acc, apply_sym(self._q1, {(i,): c for i, c in v.items()}))
            add_into(acc, apply_sym(phi.comps, self.source.Q(m)), -sign)
            if acc:
                out[m] = acc
        return ConvolutionElement(self, phi.degree + 1, out)

    def L(self, *phis, upto=None):
        """``L_k(φ_1, ..., φ_k)``."""
        k = len(phis)
        if k == 1:
            return self.L1(phis[0], upto)
        degree = sum(p.degree for p in phis) + 2 - k
        qk = {m: v for m, v in self.target.brackets.items() if len(m) == k}
        if not qk:
            return ConvolutionElement(self, degree)
        sdeg = self.source.sdeg
        out = {}
        for m in self._monos(upto):
            if len(m) < k:
                continue
            acc = {}
            for sign, blocks in ordered_splits(parities_of(m, self.source.par), k):
                vecs = []
                moved = 0
                s = sign
                for phi, b in zip(phis, blocks):
                    sub = tuple(m[p] for p in b)
                    v = phi.comps.get(sub)
                    if not v:
                        break
                    if phi.map_degree % 2 and moved % 2:
                        s = -s
                    moved += sum(sdeg[i] for i in sub)
                    vecs.append(v)
                else:
                    add_into(acc, apply_sym(qk, vec_product(vecs, self.target.par)), s)
            if acc:
                out[m] = acc
        return ConvolutionElement(self, degree, out)

    def bracket(self, x, y, upto=None):
        return self.L(x, y, upto=upto)

    def curvature(self, alpha, upto=None):
        """``Σ_k L_k(α, ..., α)/k!`` for a degree-1 element, computed through
        the induced coalgebra map: ``q ∘ α_* - α ∘ Q``."""
        if alpha.degree != 1:
            raise DegreeMismatch("curvature is defined on degree-1 elements")
        out = {}
        for m in self._monos(upto):
            acc = apply_sym(self.target.brackets,
                            coalgebra_map(alpha.comps, m, self.source.par, self.target.par))
            add_into(acc, apply_sym(alpha.comps, self.source.Q(m)), -1)
            if acc:
                out[m] = acc
        return ConvolutionElement(self, 2, out)

    def curvature_by_brackets(self, alpha, upto=None):
        """Same quantity summed bracket by bracket (independent route)."""
        total = self.L1(alpha, upto)
        for k in range(2, self.N + 1):
            total = total + self.L(*([alpha] * k), upto=upto).scale(Fraction(1, factorial(k)))
        return total

    def twisted(self, alpha, x, upto=None):
        """Gauge vector field at ``α``: ``Σ_k L_{k+1}(x, α, ..., α)/k!``."""
        if x.degree != 0 or alpha.degree != 1:
            raise DegreeMismatch("twisted differential takes (degree 1, degree 0)")
        tq = self.target.brackets
        tpar = self.target.par
        out = {}
        for m in self._monos(upto):
            acc = apply_sym(x.comps, self.source.Q(m))
            for sign, blocks in pointed_partitions(parities_of(m, self.source.par)):
                v0 = x.comps.get(tuple(m[p] for p in blocks[0]))
                if not v0:
                    continue
                vecs = [v0]
                for b in blocks[1:]:
                    v = alpha.comps.get(tuple(m[p] for p in b))
                    if not v:
                        break
                    vecs.append(v)
                else:
                    add_into(acc, apply_sym(tq, vec_product(vecs, tpar)), sign)
            if acc:
                out[m] = acc
        return ConvolutionElement(self, 1, out)

    # gauge action -------------------------------------------------------------

    def gauge_path(self, alpha, x):
        """Exact solution ``α(t)`` of the gauge flow with ``α(0) = α`` as an
        element with polynomial-in-t coefficients.

        dg Lie targets use the closed form ``e^{t ad x} α + Σ t^{n+1} ad_x^n L_1(x)/(n+1)!``;
        otherwise the flow is integrated by Picard iteration, which is exact
        after N + 1 rounds because each round fixes one more arity.
        """
        if self.is_dg_lie:
            return self._closed_path(alpha, x)
        return self._picard_path(alpha, x)

    def _closed_path(self, alpha, x):
        total = alpha.map_coefficients(Poly.const)
        term = alpha
        n = 0
        while True:
            n += 1
            term = self.L(x, term)
            if not term:
                break
            total = total + term.map_coefficients(lambda v, n=n: Poly.monomial(v / factorial(n), n))
        term = self.L1(x)
        n = 0
        while term:
            total = total + term.map_coefficients(
                lambda v, n=n: Poly.monomial(v / factorial(n + 1), n + 1))
            term = self.L(x, term)
            n += 1
        return total

    def _picard_path(self, alpha, x):
        start = alpha.map_coefficients(Poly.const)
        cur = start
        for _ in range(self.N + 1):
            field = self.twisted(cur, x)
            cur = start + field.map_coefficients(lambda v: v.integrate() if isinstance(v, Poly) else Poly((0, v)))
        return cur

    def picard_path(self, alpha, x):
        """Flow by Picard iteration regardless of the target type (oracle)."""
        return self._picard_path(alpha, x)

    def gauge(self, alpha, x, check=True):
        """Time-1 gauge action ``α ↦ α_x``."""
        if alpha.degree != 1 or x.degree != 0:
            raise DegreeMismatch("gauge acts by degree-0 elements on degree-1 elements")
        if check and self.curvature(alpha):
            raise NotAMorphism("gauge action needs a Maurer–Cartan element")
        return self.gauge_path(alpha, x).evaluate(1)

    def bch(self, x, y):
        """``log(e^x e^y)`` for the Lie bracket ``L_2`` on degree-0 elements,
        truncated at bracket depth N (exact: brackets raise arity)."""
        if not self.is_dg_lie:
            raise UnsupportedStructure("BCH needs a dg Lie convolution algebra")
        if x.degree != 0 or y.degree != 0:
            raise DegreeMismatch("BCH composes degree-0 elements")
        return _dynkin(x, y, self.N, self.L)


def _dynkin(x, y, depth, bracket):
    """Dynkin's form of the BCH series with words of length ≤ depth."""
    letters = {"x": x, "y": y}
    cache = {}

    def nested(word):
        if word in cache:
            return cache[word]
        if len(word) == 1:
            val = letters[word]
        else:
            val = bracket(letters[word[0]], nested(word[1:]))
        cache[word] = val
        return val

    total = x.conv.zero(0)
    for n in range(1, depth + 1):
        pairs = [(r, s) for r in range(depth + 1) for s in range(depth + 1) if 0 < r + s <= depth]
        for combo in product(pairs, repeat=n):
            length = sum(r + s for r, s in combo)
            if length > depth:
                continue
            word = "".join("x" * r + "y" * s for r, s in combo)
            denom = length
            for r, s in combo:
                denom *= factorial(r) * factorial(s)
            coeff = Fraction((-1) ** (n - 1), n * denom)
            val = nested(word)
            if val:
                total = total + val.scale(coeff)
    return total


def build_convolution(g1, g2):
    return Convolution(g1, g2)


def mc_curvature(phi):
    """Curvature of a degree-1 element or of a morphism candidate."""
    if isinstance(phi, LInftyMorphism):
        conv = Convolution(phi.source, phi.target)
        return conv.curvature(conv.from_morphism(phi))
    return phi.conv.curvature(phi)


def gauge_action(F, H):
    """Gauge transform of a morphism (or degree-1 element) ``F`` by ``H``."""
    conv = H.conv
    alpha = conv.from_morphism(F) if isinstance(F, LInftyMorphism) else F
    out = conv.gauge(alpha, H)
    return out.as_morphism() if isinstance(F, LInftyMorphism) else out


def bch_compose(H1, H2):
    return H1.conv.bch(H1, H2)


@dataclass(eq=False)
class HomotopyCertificate:
    """``gauge_action(source, gauge) == target`` exactly."""

    source: LInftyMorphism
    target: LInftyMorphism
    gauge: ConvolutionElement

    def verify(self):
        conv = self.gauge.conv
        return conv.gauge(conv.from_morphism(self.source), self.gauge) == conv.from_morphism(self.target)


def find_homotopy(F1, F2):
    """Search for ``H`` with ``(F1)_H = F2``; raises ``NotHomotopic``.

    dg Lie targets: at arity k the current transform ``F' = (F1)_H`` agrees
    with F2 below k.  The correction K ranges over the Lie algebra of the
    stabiliser of that truncation, ``{K : twisted(F', K) = 0 below arity k}``,
    whose action changes arity k by the linear map ``twisted(F', K)_k``; one
    exact linear solve per arity, then ``H ← bch(K, H)``.  Failure is a proof
    that no gauge exists at truncation N.

    Other targets: H_k is solved from the affine equation at arity k with
    H_{<k} held fixed (the arity-k part depends on H_k only through
    ``L_1(H_k)``).  This stagewise search may miss solutions.
    """
    conv = Convolution(F1.source, F1.target)
    if F2.source.space != F1.source.space or F2.target.space != F1.target.space:
        raise ShapeMismatch("morphisms have different sources or targets")
    a1, a2 = conv.from_morphism(F1), conv.from_morphism(F2)
    for a in (a1, a2):
        if conv.curvature(a):
            raise NotAMorphism("find_homotopy needs two L∞ morphisms")
    if conv.is_dg_lie:
        H = _search_stabiliser(conv, a1, a2)
    else:
        H = _search_greedy(conv, a1, a2)
    cert = HomotopyCertificate(F1, F2, H)
    if not cert.verify():
        raise NotHomotopic(conv.N, "internal error: certificate does not verify")
    return cert


def _symbolic(conv, degree, arities):
    basis = conv.basis(degree, arities)
    comps = {}
    for n, (m, i) in enumerate(basis):
        comps.setdefault(m, {})[i] = Linear.var(n)
    return basis, ConvolutionElement(conv, degree, comps)


def _solve_rows(result, targets, basis, arities, conv):
    # equations: result[m][i] == targets[m][i] for every monomial of the given arities
    eqs = []
    for k in arities:
        for m in conv.source.monomials(k):
            got = result.comps.get(m, {})
            want = targets.get(m, {})
            eqs.extend((got.get(i, 0), want.get(i, 0)) for i in set(got) | set(want))
    sol = solve_affine(eqs)
    if sol is None:
        return None
    comps = {}
    for n, v in sol.items():
        m, i = basis[n]
        comps.setdefault(m, {})[i] = v
    return ConvolutionElement(conv, 0, comps)


def _search_stabiliser(conv, a1, a2):
    H = conv.zero(0)
    for k in range(1, conv.N + 1):
        cur = conv.gauge(a1, H, check=False)
        diff = (a2 - cur).arity(k)
        if not diff:
            continue
        basis, K = _symbolic(conv, 0, range(1, k + 1))
        field = conv.twisted(cur, K, upto=k)
        K = _solve_rows(field, diff.comps, basis, range(1, k + 1), conv)
        if K is None:
            raise NotHomotopic(k)
        H = conv.bch(K, H)
    return H


def _search_greedy(conv, a1, a2):
    H = conv.zero(0)
    for k in range(1, conv.N + 1):
        cur = conv.gauge(a1, H, check=False)
        diff = (a2 - cur).arity(k)
        if not diff:
            continue
        basis, K = _symbolic(conv, 0, [k])
        lin = conv.L1(K, upto=k).arity(k)
        K = _solve_rows(lin, diff.comps, basis, [k], conv)
        if K is None:
            raise NotHomotopic(k)
        H = H + K
    return H


# Maurer–Cartan elements and gauges inside a single algebra ---------------------


def algebra_curvature(g, gamma):
    """``Σ_{k ≤ N} q_k(γ^k)/k!`` for a shifted-degree-0 vector ``γ`` of g."""
    out = {}
    for k in range(1, g.N + 1):
        add_into(out, apply_sym(g.brackets, vec_product([gamma] * k, g.par)),
                 Fraction(1, factorial(k)))
    return out


def algebra_gauge_field(g, gamma, x):
    """``Σ_k q_{k+1}(x, γ^k)/k!`` inside g."""
    out = {}
    for k in range(0, g.N):
        add_into(out, apply_sym(g.brackets, vec_product([x] + [gamma] * k, g.par)),
                 Fraction(1, factorial(k)))
    return out


def algebra_gauge(g, gamma, x, bound):
    """Time-1 flow of the gauge field of ``x`` from ``γ`` inside g.

    Picard iteration with polynomial coefficients; the iterates must become
    stationary within ``bound`` rounds (nilpotent action), else NonNilpotent.
    """
    start = {i: Poly.const(v) for i, v in gamma.items()}
    cur = start
    for _ in range(bound):
        field = algebra_gauge_field(g, cur, {i: Poly.const(v) for i, v in x.items()})
        nxt = dict(start)
        for i, v in field.items():
            add_into(nxt, {i: v.integrate()})
        if nxt == cur:
            return {i: v(1) for i, v in cur.items() if v(1)}
        cur = nxt
    raise NonNilpotent(f"gauge flow did not terminate within {bound} iterations")


def _mc_vector(g, labels_value, want_sdeg):
    vec = {}
    for lab, c in labels_value.items():
        i = g.space.index(lab)
        if g.sdeg[i] != want_sdeg:
            raise DegreeMismatch(f"{lab} has the wrong degree")
        c = Fraction(c)
        if c:
            vec[i] = c
    return vec


def pushforward(U, gamma, x, bound):
    """``(U_*(γ), U_*(x))`` for an MC element γ of degree 1 and x of degree 0
    of the source (given as ``{label: coeff}``), summing ``bound`` terms of

        U_*(γ) = Σ_k u_k(γ^k)/k!,   U_*(x) = Σ_k u_{k+1}(x, γ^k)/k!

    (shifted form).  The ``bound``-th term of each series must vanish.
    Returns two ``{label: coeff}`` dictionaries.
    """
    g1, g2 = U.source, U.target
    gv = _mc_vector(g1, gamma, 0)
    xv = _mc_vector(g1, x, -1)
    if algebra_curvature(g1, gv):
        raise NotAMorphism("γ is not a Maurer–Cartan element")
    if bound < 1:
        raise NonNilpotent("bound must be positive")

    def term_g(k):
        if k > U.N:
            return {}
        return {i: v / factorial(k) for i, v in
                apply_sym(U.comps, vec_product([gv] * k, g1.par)).items()}

    def term_x(k):
        if k + 1 > U.N:
            return {}
        return {i: v / factorial(k) for i, v in
                apply_sym(U.comps, vec_product([xv] + [gv] * k, g1.par)).items()}

    if term_g(bound) or term_x(bound - 1):
        raise NonNilpotent(f"term {bound} of the pushforward series is nonzero")
    ug, ux = {}, {}
    for k in range(1, bound + 1):
        add_into(ug, term_g(k))
        add_into(ux, term_x(k - 1))
    lab = g2.space.label
    return ({lab(i): v for i, v in sorted(ug.items())},
            {lab(i): v for i, v in sorted(ux.items())})


def pushforward_tangent(U, gamma, v):
    """Differential of ``γ ↦ U_*(γ)`` at γ applied to ``v`` (shifted vectors)."""
    g1 = U.source
    out = {}
    for k in range(0, U.N):
        add_into(out, apply_sym(U.comps, vec_product([v] + [gamma] * k, g1.par)),
                 Fraction(1, factorial(k)))
    return out


__all__ = [
    "Convolution", "ConvolutionElement", "HomotopyCertificate", "algebra_curvature",
    "algebra_gauge", "algebra_gauge_field", "bch_compose", "build_convolution",
    "find_homotopy", "gauge_action", "mc_curvature", "pushforward", "pushforward_tangent",
]
