"""Shipped example algebras and random generators for the property suites.

FIX-A  x(0), y(1); dx = y.
FIX-B  z(0), a(1), b(1); [z, a] = b.
FIX-C  FIX-B ⊕ FIX-A.
FIX-D  a(1), b(1), h(1), c(2), w(2); dh = c; [a, b] = c, [a, h] = w.
"""

import random
from fractions import Fraction

from .algebra import LInftyAlgebra, direct_sum
from .graded import GradedVectorSpace


def fix_a(N=4):
    space = GradedVectorSpace({0: ["x"], 1: ["y"]})
    return LInftyAlgebra.from_exterior(space, N, differential={"x": {"y": 1}}, name="FIX-A")


def fix_b(N=4):
    space = GradedVectorSpace({0: ["z"], 1: ["a", "b"]})
    return LInftyAlgebra.from_exterior(
        space, N,
        brackets=[(("z", "a"), {"b": 1}), (("a", "z"), {"b": -1})],
        name="FIX-B",
    )


def fix_c(N=4):
    return direct_sum(fix_b(N), fix_a(N), name="FIX-C")


def fix_d(N=4):
    space = GradedVectorSpace({1: ["a", "b", "h"], 2: ["c", "w"]})
    return LInftyAlgebra.from_exterior(
        space, N,
        differential={"h": {"c": 1}},
        brackets=[
            (("a", "b"), {"c": 1}), (("b", "a"), {"c": 1}),
            (("a", "h"), {"w": 1}), (("h", "a"), {"w": 1}),
        ],
        name="FIX-D",
    )


FIXTURES = {"FIX-A": fix_a, "FIX-B": fix_b, "FIX-C": fix_c, "FIX-D": fix_d}


def random_rational(rng, num=2, den=(1, 2)):
    """Entry from ``{-num..num} / den``."""
    return Fraction(rng.randint(-num, num), rng.choice(den))


def random_convolution_vector(rng, target_sdeg, want, density=0.5):
    vec = {}
    for i, d in enumerate(target_sdeg):
        if d == want and rng.random() < density:
            c = random_rational(rng)
            if c:
                vec[i] = c
    return vec


def seeded(seed):
    return random.Random(seed)


# randomized families -------------------------------------------------------------

# small commutative dg algebras: (basis {label: degree}, d {src: {dst: c}}, products {(a, b): {c: k}})
CDGAS = {
    "dual": ({"1": 0, "e": 1}, {}, {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}}),
    "interval": ({"1": 0, "s": 0, "ds": 1}, {"s": {"ds": 1}},
                 {("1", "1"): {"1": 1}, ("1", "s"): {"s": 1}, ("1", "ds"): {"ds": 1}}),
    "massey": ({"1": 0, "x": 1, "y": 2}, {"x": {"y": 1}},
               {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("1", "y"): {"y": 1}}),
    "cone": ({"u": 0, "du": 1}, {"u": {"du": 1}}, {}),
}

# ordinary Lie algebras in degree 0: (labels, {(x, y): {z: c}} for x < y)
LIE = {
    "ab1": (["p"], {}),
    "ab2": (["p", "q"], {}),
    "aff": (["p", "q"], {("p", "q"): {"q": 1}}),
    "heis": (["p", "q", "r"], {("p", "q"): {"r": 1}}),
}


def _product(prods, a, b):
    if (a, b) in prods:
        return prods[(a, b)]
    return prods.get((b, a), {})


def tensor_cdga(lie, cdga, N=4, name=None):
    """``n ⊗ A`` for an ordinary Lie algebra n and a small CDGA A; basis
    labels ``x_a`` (or ``x`` for ``a = 1``)."""
    labels, br = LIE[lie] if isinstance(lie, str) else lie
    basis, d, prods = CDGAS[cdga] if isinstance(cdga, str) else cdga
    name_of = {(x, a): x if a == "1" else f"{x}_{a}" for x in labels for a in basis}
    space = GradedVectorSpace([(name_of[(x, a)], basis[a]) for x in labels for a in basis])

    def lie_br(x, y):
        if (x, y) in br:
            return br[(x, y)]
        return {z: -c for z, c in br.get((y, x), {}).items()}

    differential = {}
    for x in labels:
        for a, col in d.items():
            differential[name_of[(x, a)]] = {name_of[(x, b)]: c for b, c in col.items()}
    brackets = []
    for x in labels:
        for y in labels:
            for a in basis:
                for b in basis:
                    ab = _product(prods, a, b)
                    # [x⊗a, y⊗b] = (-1)^{|a||y|} [x, y] ⊗ ab with |y| = 0; ab = (-1)^{|a||b|} ba
                    if (b, a) in prods and (a, b) not in prods and basis[a] * basis[b] % 2:
                        ab = {k: -v for k, v in ab.items()}
                    val = {}
                    for z, c in lie_br(x, y).items():
                        for e, k in ab.items():
                            key = name_of[(z, e)]
                            val[key] = val.get(key, 0) + c * k
                    if val:
                        brackets.append(((name_of[(x, a)], name_of[(y, b)]), val))
    return LInftyAlgebra.from_exterior(space, N, differential=differential, brackets=brackets,
                                       name=name or f"{lie}⊗{cdga}")


def transport(g, T, name=None):
    """Structure carried along the isomorphism ``T: new space → g.space``."""
    from .inversion import invert_linear
    from .symmetric import apply_sym, vec_product

    Tinv = invert_linear(T)
    new = T.source
    proto = LInftyAlgebra(new, g.N)
    data = {}
    for m in proto.basis_upto(g.N):
        img = vec_product([T.column(j) for j in m], g.par)
        val = Tinv(apply_sym(g.brackets, img))
        if val:
            data[m] = val
    return LInftyAlgebra(new, g.N, data, name=name or g.name)


def random_basis_change(rng, space, fixed=()):
    """Unitriangular change of basis within each degree; ``fixed`` labels stay put."""
    from .graded import GradedLinearMap

    entries = {}
    for j in range(space.dim):
        col = {j: Fraction(1)}
        if space.label(j) not in fixed:
            for k in space.indices_in_degree(space.degree(j)):
                if k < j and rng.random() < 0.5:
                    c = random_rational(rng)
                    if c:
                        col[k] = c
            col[j] = Fraction(rng.choice([1, 2, -1, Fraction(1, 2)]))
        entries[j] = col
    return GradedLinearMap(space, space, 0, entries)


def random_dg_lie(rng, N=4, max_dim=6):
    """Random ``n ⊗ A`` (dimension ≤ max_dim) in a random basis."""
    while True:
        lie = rng.choice(sorted(LIE))
        cdga = rng.choice(sorted(CDGAS))
        if len(LIE[lie][0]) * len(CDGAS[cdga][0]) <= max_dim:
            break
    g = tensor_cdga(lie, cdga, N)
    return transport(g, random_basis_change(rng, g.space), name=f"{lie}⊗{cdga}~")


def acyclic_extension(lie, N=4):
    """``(g0, g)`` with ``g = n ⊗ {1, s, ds}`` and ``g0 = n ⊗ 1``."""
    g = tensor_cdga(lie, "interval", N)
    labels = LIE[lie][0] if isinstance(lie, str) else lie[0]
    g0 = tensor_cdga(lie, ({"1": 0}, {}, {("1", "1"): {"1": 1}}), N, name=f"{lie}")
    assert set(labels) == set(g0.space.labels())
    return g0, g


def random_acyclic_extension(rng, N=4):
    """Random ``(g0, g)``: an acyclic extension with ≤ 8 basis vectors, the
    complement put in a random basis that mixes in g0."""
    choice = rng.choice(["ab1", "ab2", "aff", "fixb"])
    if choice == "fixb":
        g0 = fix_b(N)
        g = _fix_b_extension(N)
    else:
        g0, g = acyclic_extension(choice, N)
    T = random_basis_change(rng, g.space, fixed=g0.space.labels())
    return g0, transport(g, T, name=f"{g.name}~")


def _fix_b_extension(N=4):
    # FIX-B ⊕ W⊗{s, ds} for the ideal W = span{a, b}
    space = GradedVectorSpace({0: ["z", "a_s", "b_s"], 1: ["a", "b", "a_ds", "b_ds"]})
    brackets = [
        (("z", "a"), {"b": 1}), (("z", "a_s"), {"b_s": 1}), (("z", "a_ds"), {"b_ds": 1}),
    ]
    brackets += [((y, x), {k: -v for k, v in val.items()}) for (x, y), val in brackets]
    return LInftyAlgebra.from_exterior(
        space, N, differential={"a_s": {"a_ds": 1}, "b_s": {"b_ds": 1}},
        brackets=brackets, name="FIX-B⊗I",
    )
